//! Balanced words under the critical FK weighting.
//!
//! Conditioning `2n` i.i.d. symbols from the `p` law on reducing to the empty
//! word gives each balanced word probability proportional to
//! `(2p/(1-p))^f`, `f` its number of flexible orders. The word encodes a
//! map with `1 + f` loops, so this is the loop weight `sqrt(q)^(loops-1)`
//! with `sqrt(q) = 2p/(1-p)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::semigroup::{Symbol, Word};
use crate::stack_sim::MuParams;

/// Largest `n` accepted by [`exact_enumerate`].
pub const ENUMERATION_LIMIT: usize = 5;

pub fn p_from_q(q: f64) -> Result<f64> {
    if q.is_nan() || q <= 0.0 || q.is_infinite() {
        return Err(Error::OutOfRange(format!("q = {q} must be positive and finite")));
    }
    let s = q.sqrt();
    Ok(s / (2.0 + s))
}

pub fn q_from_p(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} must lie in [0, 1)")));
    }
    let s = 2.0 * p / (1.0 - p);
    Ok(s * s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkSample {
    #[serde(with = "word_string")]
    pub word: Word,
    pub loop_count: usize,
    pub attempts: u64,
    pub seed: u64,
    pub p: f64,
    pub q: Option<f64>,
}

impl FkSample {
    /// Unnormalized weight `sqrt(q)^(loops - 1)`.
    pub fn weight(&self) -> f64 {
        (2.0 * self.p / (1.0 - self.p)).powi(self.loop_count as i32 - 1)
    }
}

mod word_string {
    use crate::semigroup::Word;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fills `buf` with symbols and reports whether they reduce to the empty
/// word. Stops early once an order goes unfilled.
fn draw_balanced(params: &MuParams, r: &mut rng::Rng, buf: &mut Vec<Symbol>, len: usize) -> bool {
    buf.clear();
    let mut stack: Vec<Symbol> = Vec::with_capacity(len);
    for _ in 0..len {
        let s = params.sample(r);
        buf.push(s);
        if s.is_burger() {
            stack.push(s);
            continue;
        }
        let hit = match s.wants() {
            None => stack.pop().is_some(),
            Some(b) => match stack.iter().rposition(|&x| x.burger() == Some(b)) {
                Some(i) => {
                    stack.remove(i);
                    true
                }
                None => false,
            },
        };
        if !hit {
            return false;
        }
    }
    stack.is_empty()
}

/// Attempts per parallel batch.
const BATCH: u64 = 256;

/// Draws words of length `2n` until one is balanced. Attempt `k` uses its
/// own stream, and the lowest accepted attempt index is returned, so the
/// result does not depend on scheduling.
pub fn rejection_sample_balanced(p: f64, n: usize, seed: u64, max_attempts: u64) -> Result<FkSample> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let params = MuParams::new(p)?;
    let try_one = |k: u64| -> Option<Vec<Symbol>> {
        let mut r = rng::trial_stream(seed, k);
        let mut buf = Vec::with_capacity(2 * n);
        draw_balanced(&params, &mut r, &mut buf, 2 * n).then_some(buf)
    };
    let mut start = 0;
    while start < max_attempts {
        let end = (start + BATCH).min(max_attempts);
        let hit = if rayon::current_num_threads() > 1 {
            (start..end).into_par_iter().find_map_first(|k| try_one(k).map(|w| (k, w)))
        } else {
            (start..end).find_map(|k| try_one(k).map(|w| (k, w)))
        };
        if let Some((k, symbols)) = hit {
            let word = Word::new(symbols);
            let f = word.count(Symbol::FlexOrder);
            return Ok(FkSample {
                word,
                loop_count: 1 + f,
                attempts: k + 1,
                seed,
                p,
                q: q_from_p(p).ok(),
            });
        }
        start = end;
    }
    Err(Error::RejectionExhausted { attempts: max_attempts })
}

/// `count` independent samples; sample `i` uses seed `derive_seed(seed, i)`.
pub fn sample_many(
    p: f64,
    n: usize,
    count: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<Vec<FkSample>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            rejection_sample_balanced(p, n, rng::derive_seed(seed, i as u64), max_attempts)
        })
        .collect()
}

/// One row of the exact table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumRow {
    #[serde(with = "word_string")]
    pub word: Word,
    pub f_count: usize,
    pub loops: usize,
    pub probability: f64,
}

/// All balanced words of length `2n`, in lexicographic order of the
/// alphabet `c h C H F`.
pub fn balanced_words(n: usize) -> Vec<Word> {
    fn go(prefix: &mut Vec<Symbol>, stack: &mut Vec<Symbol>, len: usize, out: &mut Vec<Word>) {
        if prefix.len() == len {
            if stack.is_empty() {
                out.push(Word::new(prefix.clone()));
            }
            return;
        }
        if stack.len() > len - prefix.len() {
            return;
        }
        for s in Symbol::ALL {
            prefix.push(s);
            if s.is_burger() {
                stack.push(s);
                go(prefix, stack, len, out);
                stack.pop();
            } else {
                let pos = match s.wants() {
                    None => stack.len().checked_sub(1),
                    Some(b) => stack.iter().rposition(|&x| x.burger() == Some(b)),
                };
                if let Some(i) = pos {
                    let taken = stack.remove(i);
                    go(prefix, stack, len, out);
                    stack.insert(i, taken);
                }
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(2 * n), &mut Vec::new(), 2 * n, &mut out);
    out
}

/// Every balanced word of length `2n` with its probability under the
/// conditioned law for loop parameter `q`.
pub fn exact_enumerate(n: usize, q: f64) -> Result<Vec<EnumRow>> {
    exact_enumerate_with_limit(n, q, ENUMERATION_LIMIT)
}

pub fn exact_enumerate_with_limit(n: usize, q: f64, limit: usize) -> Result<Vec<EnumRow>> {
    if n > limit {
        return Err(Error::EnumerationLimit { limit, requested: n });
    }
    p_from_q(q)?;
    let s = q.sqrt();
    let mut rows: Vec<EnumRow> = balanced_words(n)
        .into_iter()
        .map(|word| {
            let f = word.count(Symbol::FlexOrder);
            EnumRow {
                word,
                f_count: f,
                loops: 1 + f,
                probability: s.powi(f as i32),
            }
        })
        .collect();
    let total: f64 = rows.iter().map(|r| r.probability).sum();
    for r in &mut rows {
        r.probability /= total;
    }
    Ok(rows)
}

pub fn enumeration_csv(rows: &[EnumRow]) -> String {
    let mut out = String::from("word,f_count,loops,probability\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{:.17e}\n", r.word, r.f_count, r.loops, r.probability));
    }
    out
}

pub fn samples_csv(samples: &[FkSample]) -> String {
    let mut out = String::from("word,loop_count,attempts,seed\n");
    for s in samples {
        out.push_str(&format!("{},{},{},{}\n", s.word, s.loop_count, s.attempts, s.seed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_maps() {
        assert!((p_from_q(4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((p_from_q(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for k in 1..10 {
            let p = k as f64 / 10.0;
            assert!((p_from_q(q_from_p(p).unwrap()).unwrap() - p).abs() < 1e-14);
        }
        assert!(p_from_q(0.0).is_err());
        assert!(p_from_q(f64::NAN).is_err());
        assert!(q_from_p(1.0).is_err());
    }

    #[test]
    fn n1_table() {
        let rows = exact_enumerate(1, 1.0).unwrap();
        let words: Vec<String> = rows.iter().map(|r| r.word.to_string()).collect();
        assert_eq!(words, ["cC", "cF", "hH", "hF"]);
        assert!(rows.iter().all(|r| (r.probability - 0.25).abs() < 1e-15));
        assert_eq!(exact_enumerate(2, 2.0).unwrap().len(), 36);
        assert!(matches!(exact_enumerate(6, 1.0), Err(Error::EnumerationLimit { .. })));
    }

    #[test]
    fn tiny_q_concentrates_on_flex_free() {
        let rows = exact_enumerate(2, 1e-12).unwrap();
        let mass: f64 = rows.iter().filter(|r| r.f_count > 0).map(|r| r.probability).sum();
        assert!(mass < 1e-5);
    }

    #[test]
    fn sampler_is_reproducible_and_balanced() {
        let a = rejection_sample_balanced(0.4, 3, 9, 100_000).unwrap();
        let b = rejection_sample_balanced(0.4, 3, 9, 100_000).unwrap();
        assert_eq!(a, b);
        assert!(crate::semigroup::is_balanced(&a.word));
        assert_eq!(a.loop_count, 1 + a.word.count(Symbol::FlexOrder));
        assert_eq!(
            rejection_sample_balanced(0.4, 50, 9, 3),
            Err(Error::RejectionExhausted { attempts: 3 })
        );
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FkSample>(&json).unwrap(), a);
    }
}
