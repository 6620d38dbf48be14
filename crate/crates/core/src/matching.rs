//! The match involution on a finite word and the resolved word in which each
//! flexible order is replaced by the type of burger it consumed.

use crate::error::{Error, Result};
use crate::semigroup::{Burger, Symbol, Word};

/// Partner of a position under the match involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Partner {
    /// 1-based position of the partner.
    Index(usize),
    /// A burger that is never consumed inside the word.
    PlusInfinity,
    /// An order that is never filled inside the word.
    MinusInfinity,
}

impl Partner {
    pub fn index(self) -> Option<usize> {
        match self {
            Partner::Index(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Partner>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// Partner of 1-based position `i`.
    pub fn partner(&self, i: usize) -> Partner {
        self.partner[i - 1]
    }

    pub fn partners(&self) -> &[Partner] {
        &self.partner
    }

    /// Positions whose partner lies outside the word, in increasing order.
    pub fn unmatched(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.partner(i).index().is_none())
            .collect()
    }

    /// Matched pairs `(burger position, order position)` sorted by burger position.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.len())
            .filter_map(|i| match self.partner(i) {
                Partner::Index(j) if i < j => Some((i, j)),
                _ => None,
            })
            .collect()
    }

    /// JSON array of 1-based partner indices, `null` where unmatched.
    pub fn to_json(&self) -> String {
        let v: Vec<Option<usize>> = self.partner.iter().map(|p| p.index()).collect();
        serde_json::to_string(&v).expect("vector of options serializes")
    }

    /// Parses the JSON form. The sign of an unmatched entry is recovered from
    /// `word`: burgers become `+inf`, orders `-inf`. The result is checked to be
    /// an involution pairing burgers with later orders.
    pub fn from_json(s: &str, word: &Word) -> Result<Self> {
        let raw: Vec<Option<usize>> = serde_json::from_str(s)?;
        if raw.len() != word.len() {
            return Err(Error::Parse(format!(
                "matching has {} entries for a word of length {}",
                raw.len(),
                word.len()
            )));
        }
        let partner = raw
            .iter()
            .enumerate()
            .map(|(k, p)| match p {
                Some(j) => Partner::Index(*j),
                None if word.symbols()[k].is_burger() => Partner::PlusInfinity,
                None => Partner::MinusInfinity,
            })
            .collect();
        let m = Matching { partner };
        m.validate(word)?;
        Ok(m)
    }

    /// Structural check: involution, burger strictly before its order, and
    /// the order can accept the burger's type.
    pub fn validate(&self, word: &Word) -> Result<()> {
        let n = self.len();
        for i in 1..=n {
            if let Partner::Index(j) = self.partner(i) {
                if j == 0 || j > n {
                    return Err(Error::Parse(format!("partner {j} of {i} out of range")));
                }
                if self.partner(j) != Partner::Index(i) {
                    return Err(Error::Parse(format!("partner of {i} is not an involution")));
                }
                let (m, o) = if i < j { (i, j) } else { (j, i) };
                let b = word.at(m).burger().ok_or_else(|| {
                    Error::Parse(format!("earlier element {m} of pair is not a burger"))
                })?;
                if !word.at(o).accepts(b) {
                    return Err(Error::Parse(format!("order at {o} cannot take burger at {m}")));
                }
            }
        }
        Ok(())
    }
}

/// Single left-to-right pass. Burgers go on one stack of positions with a
/// per-type index; typed orders take the most recent burger of their type,
/// `[F]` takes the most recent burger of either type. Entries removed
/// from the middle by a typed order are skipped lazily.
pub fn compute_matching(w: &Word) -> Matching {
    let n = w.len();
    let mut partner = vec![Partner::PlusInfinity; n];
    let mut alive = vec![false; n];
    let mut all: Vec<usize> = Vec::new();
    let mut by_type: [Vec<usize>; 2] = [Vec::new(), Vec::new()];

    for (k, &s) in w.symbols().iter().enumerate() {
        if let Some(b) = s.burger() {
            alive[k] = true;
            all.push(k);
            by_type[b.index()].push(k);
            continue;
        }
        let taken = match s.wants() {
            Some(b) => by_type[b.index()].pop(),
            None => {
                while let Some(&top) = all.last() {
                    if alive[top] {
                        break;
                    }
                    all.pop();
                }
                all.pop().inspect(|&top| {
                    let b = w.symbols()[top].burger().expect("stack holds burgers");
                    let popped = by_type[b.index()].pop();
                    debug_assert_eq!(popped, Some(top));
                })
            }
        };
        match taken {
            Some(m) => {
                alive[m] = false;
                partner[m] = Partner::Index(k + 1);
                partner[k] = Partner::Index(m + 1);
            }
            None => partner[k] = Partner::MinusInfinity,
        }
    }
    Matching { partner }
}

/// Replaces each `[F]` with the typed order of the burger it consumed.
pub fn resolve_y(w: &Word, m: &Matching) -> Result<Word> {
    w.symbols()
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            if s != Symbol::FlexOrder {
                return Ok(s);
            }
            match m.partner(k + 1) {
                Partner::Index(j) => {
                    let b: Burger = w.at(j).burger().ok_or(Error::UnmatchedFlexible(k + 1))?;
                    Ok(b.order())
                }
                _ => Err(Error::UnmatchedFlexible(k + 1)),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Word::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let word = w("chCCFCcHh");
        let m = compute_matching(&word);
        assert_eq!(m.partner(1), Partner::Index(3));
        assert_eq!(m.partner(3), Partner::Index(1));
        assert_eq!(m.partner(2), Partner::Index(5));
        assert_eq!(m.partner(5), Partner::Index(2));
        for i in [4, 6, 8] {
            assert_eq!(m.partner(i), Partner::MinusInfinity);
        }
        for i in [7, 9] {
            assert_eq!(m.partner(i), Partner::PlusInfinity);
        }
        let y = resolve_y(&word, &m).unwrap();
        assert_eq!(y.at(5), Symbol::HamOrder);
    }

    #[test]
    fn burgers_only() {
        let m = compute_matching(&w("hcc"));
        assert!(m.partners().iter().all(|&p| p == Partner::PlusInfinity));
    }

    #[test]
    fn resolve_examples() {
        let word = w("cF");
        assert_eq!(resolve_y(&word, &compute_matching(&word)).unwrap(), w("cC"));
        let plain = w("chHCcC");
        assert_eq!(resolve_y(&plain, &compute_matching(&plain)).unwrap(), plain);
        let lonely = w("Fc");
        assert_eq!(
            resolve_y(&lonely, &compute_matching(&lonely)),
            Err(Error::UnmatchedFlexible(1))
        );
    }

    #[test]
    fn json_roundtrip() {
        let word = w("chCCFCcHh");
        let m = compute_matching(&word);
        let s = m.to_json();
        assert_eq!(s, "[3,5,1,null,2,null,null,null,null]");
        assert_eq!(Matching::from_json(&s, &word).unwrap(), m);
        assert!(Matching::from_json("[2,1]", &w("Cc")).is_err());
        assert!(Matching::from_json("[2]", &w("Cc")).is_err());
    }
}
