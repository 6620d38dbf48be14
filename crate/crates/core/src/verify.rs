//! Acceptance checks, shared by the test suite and `fkburger verify`.
//!
//! Each check recomputes its reference values from scratch (brute force
//! over words, closed forms, literal worked tables) rather than trusting the
//! code under test.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::fk_sampler::{exact_enumerate, p_from_q, sample_many};
use crate::matching::{compute_matching, Partner};
use crate::planar_map::{canonical_form, extract_loops, map_to_word, word_to_tree_pair};
use crate::rng::{self, derive_seed};
use crate::semigroup::{reduce, Burger, ReducedWord, Symbol, Word};
use crate::stack_sim::{EmbeddedStack, InitialStackPolicy, Inventory, MuParams};
use crate::statistics::{
    estimate_chi, estimate_variance_ratio, excursion_records, f_fraction, ks_two_sample,
    stack_balance, summarize_excursions, Estimate,
};

pub const DEFAULT_SEED: u64 = 20_140_505;

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.1}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "worked examples"),
    (2, "flex-free balanced counts"),
    (3, "bijection round trip"),
    (4, "variance limits"),
    (5, "chi estimates"),
    (6, "excursion properties"),
    (7, "perturbation bound"),
    (8, "stack monotonicity"),
    (9, "FK sampler law"),
    (10, "stack balance and flex fraction"),
];

/// Runs one criterion by number.
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionResult> {
    let title = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => worked_examples(),
        2 => flex_free_counts(),
        3 => bijection_round_trip(),
        4 => variance_limits(seed),
        5 => chi_estimates(seed),
        6 => excursions(seed),
        7 => perturbation_bound(),
        8 => monotonicity(seed),
        9 => fk_law(seed),
        10 => balance_and_flex(seed),
        _ => return None,
    };
    Some(CriterionResult {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn w(s: &str) -> Word {
    s.parse().expect("literal word")
}

fn fmt_est(e: &Estimate) -> String {
    format!("{:.4}±{:.4}", e.value, e.std_error)
}

fn worked_examples() -> (bool, String) {
    let mut bad = Vec::new();
    let x = w("chCCFCcHh");
    let forward = ["|c", "|ch", "|h", "C|h", "C|", "CC|", "CC|c", "CCH|c", "CCH|ch"];
    let mut r = ReducedWord::empty();
    for (k, expect) in forward.iter().enumerate() {
        r.append(x.at(k + 1));
        let direct = reduce(&x.slice(1, k + 1)).to_string();
        if r.to_string() != *expect || direct != *expect {
            bad.push(format!("X(1,{}) = {r} / {direct}, want {expect}", k + 1));
        }
    }
    // X(0), X(-1), ..., X(-8)
    let backward = w("ChhcFChcc");
    let reverse = ["C|", "C|h", "C|hh", "|hh", "F|hh", "CF|hh", "C|hh", "|hh", "|chh"];
    let mut r = ReducedWord::empty();
    for (k, expect) in reverse.iter().enumerate() {
        r.prepend(backward.at(k + 1));
        if r.to_string() != *expect {
            bad.push(format!("X(-{k},0) = {r}, want {expect}"));
        }
    }
    let m = compute_matching(&x);
    if m.partner(1) != Partner::Index(3) || m.partner(2) != Partner::Index(5) {
        bad.push(format!("phi(1), phi(2) = {:?}, {:?}", m.partner(1), m.partner(2)));
    }
    let ok = bad.is_empty();
    let detail = if ok {
        "9 forward rows, 9 reverse rows, phi(1)=3, phi(2)=5".to_string()
    } else {
        bad.join("; ")
    };
    (ok, detail)
}

/// Every word of length `len` over `alphabet`.
pub fn all_words(alphabet: &[Symbol], len: usize) -> impl Iterator<Item = Word> + '_ {
    let total = alphabet.len().pow(len as u32);
    (0..total).map(move |mut code| {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(alphabet[code % alphabet.len()]);
            code /= alphabet.len();
        }
        Word::new(v)
    })
}

fn catalan(upto: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for k in 0..upto {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c
}

fn flex_free_counts() -> (bool, String) {
    let cat = catalan(6);
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=5 {
        let count = all_words(&Symbol::FLEX_FREE, 2 * n)
            .filter(|x| reduce(x).is_empty())
            .count() as u64;
        let want = cat[n] * cat[n + 1];
        ok &= count == want;
        parts.push(format!("n={n}: {count} (Catalan product {want})"));
    }
    (ok, parts.join(", "))
}

fn bijection_round_trip() -> (bool, String) {
    let mut failures: Vec<String> = Vec::new();
    let mut sizes = Vec::new();
    let mut printed_component_misses = 0usize;
    let mut swapped_component_misses = 0usize;
    for n in 1..=4 {
        let words: Vec<Word> = all_words(&Symbol::ALL, 2 * n)
            .filter(|x| reduce(x).is_empty())
            .collect();
        let mut forms = HashSet::with_capacity(words.len());
        for x in &words {
            let (m, t, pair) = match word_to_tree_pair(x) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("{x}: {e}"));
                    continue;
                }
            };
            if map_to_word(&m, &t).as_ref() != Ok(x) {
                failures.push(format!("{x}: round trip"));
            }
            forms.insert(canonical_form(&m, &t));
            let f = x.count(Symbol::FlexOrder);
            let (mut hh, mut cc, mut cf, mut hf) = (0, 0, 0, 0);
            let mm = compute_matching(x);
            for (b, o) in mm.pairs() {
                match (x.at(b), x.at(o)) {
                    (Symbol::HamBurger, Symbol::HamOrder) => hh += 1,
                    (Symbol::CheeseBurger, Symbol::CheeseOrder) => cc += 1,
                    (Symbol::CheeseBurger, Symbol::FlexOrder) => cf += 1,
                    (Symbol::HamBurger, Symbol::FlexOrder) => hf += 1,
                    _ => failures.push(format!("{x}: bad match")),
                }
            }
            let rows = [
                ("loops", extract_loops(&m, &t).len(), 1 + f),
                ("tree edges", pair.tree.edge_count(), x.count(Symbol::HamBurger)),
                ("dual tree edges", pair.dual_tree().edge_count(), x.count(Symbol::CheeseBurger)),
                ("T edges", t.edge_count(), hh + cf),
                ("T' edges", m.edge_count() - t.edge_count(), cc + hf),
            ];
            for (name, got, want) in rows {
                if got != want {
                    failures.push(format!("{x}: {name} {got} != {want}"));
                }
            }
            if !pair.is_valid(&m) {
                failures.push(format!("{x}: tree pair not spanning"));
            }
            let kt = t.components_spanning(&m);
            let kt_dual = t.dual_complement().components_spanning(&m.dual());
            if (kt, kt_dual) != (1 + cf, 1 + hf) {
                printed_component_misses += 1;
            }
            if (kt, kt_dual) != (1 + hf, 1 + cf) {
                swapped_component_misses += 1;
            }
        }
        if forms.len() != words.len() {
            failures.push(format!("n={n}: {} forms for {} words", forms.len(), words.len()));
        }
        sizes.push(words.len());
    }
    let ok = failures.is_empty();
    let mut detail = format!(
        "balanced words {sizes:?}; round trip, distinct forms, loop/edge rows {}; \
         component rows as printed fail on {printed_component_misses} words, \
         with the cheese/ham roles exchanged on {swapped_component_misses}",
        if ok { "hold" } else { "FAIL" }
    );
    if !ok {
        detail.push_str(&format!(": {}", failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ")));
    }
    (ok, detail)
}

fn variance_limits(seed: u64) -> (bool, String) {
    let trials = 20_000;
    let policy = InitialStackPolicy::Alternating;
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, p) in [0.0, 0.25, 0.5, 0.75].into_iter().enumerate() {
        let r = match estimate_variance_ratio(p, 4096, trials, &policy, derive_seed(seed, 40 + k as u64)) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let vd = r.var_d_over_n.value;
        let d_ok = match k {
            0 => (0.95..=1.05).contains(&vd),
            1 => (0.45..=0.55).contains(&vd),
            _ => vd <= 0.10,
        };
        let c_ok = (0.95..=1.05).contains(&r.var_c_over_n.value);
        let corr_ok = k > 1 || r.corr_dc.value.abs() <= 0.05;
        ok &= d_ok && c_ok && corr_ok;
        parts.push(format!(
            "p={p}: VarD/n={}{} VarC/n={}{} corr={:.4}{}",
            fmt_est(&r.var_d_over_n),
            if d_ok { "" } else { " (out of bound)" },
            fmt_est(&r.var_c_over_n),
            if c_ok { "" } else { " (out of bound)" },
            r.corr_dc.value,
            if corr_ok { "" } else { " (out of bound)" },
        ));
    }
    for (k, p) in [0.5, 0.75].into_iter().enumerate() {
        let mut series = Vec::new();
        for (j, n) in [1024usize, 4096, 16384].into_iter().enumerate() {
            match estimate_variance_ratio(p, n, trials, &policy, derive_seed(seed, 50 + 3 * k as u64 + j as u64)) {
                Ok(r) => series.push(r.var_d_over_n.value),
                Err(e) => return (false, e.to_string()),
            }
        }
        let decreasing = series.windows(2).all(|s| s[1] < s[0]);
        ok &= decreasing;
        parts.push(format!(
            "p={p} VarD/n over n=1024,4096,16384: {:.4}, {:.4}, {:.4} ({})",
            series[0],
            series[1],
            series[2],
            if decreasing { "decreasing" } else { "NOT decreasing" }
        ));
    }
    (ok, parts.join("; "))
}

fn chi_estimates(seed: u64) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, (p, target, tol)) in [(0.25, 2.0, 0.10), (0.75, 4.0 / 3.0, 0.05)].into_iter().enumerate() {
        let r = match estimate_chi(p, 100_000, 1_000_000, derive_seed(seed, 60 + k as u64)) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let trunc = r.chi.truncated_fraction.unwrap_or(1.0);
        let good = (r.chi.value - target).abs() <= tol && trunc < 0.01 && r.identity_violations == 0;
        ok &= good;
        parts.push(format!(
            "p={p}: chi={} (target {target:.3}±{tol}), truncated {:.5}, identity violations {}",
            fmt_est(&r.chi),
            trunc,
            r.identity_violations
        ));
    }
    (ok, parts.join("; "))
}

fn excursions(seed: u64) -> (bool, String) {
    let trials = 100_000;
    let cutoff = 100_000;
    let mut ok = true;
    let mut parts = Vec::new();
    let mut ks: Vec<Vec<u64>> = Vec::new();
    for (k, p) in [0.0, 0.5, 1.0].into_iter().enumerate() {
        let recs = match excursion_records(p, trials, cutoff, derive_seed(seed, 70 + k as u64)) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let s = summarize_excursions(&recs, cutoff);
        let mut good = s.flex_violations == 0 && s.balance_violations == 0;
        if p == 1.0 {
            good &= s.empty_fraction == 1.0;
        }
        ok &= good;
        parts.push(format!(
            "p={p}: median K {}, truncated {:.4}, flex {} / unbalanced {} violations{}",
            s.median_k,
            s.truncated_fraction,
            s.flex_violations,
            s.balance_violations,
            if p == 1.0 { format!(", empty fraction {}", s.empty_fraction) } else { String::new() }
        ));
        ks.push(recs.iter().map(|r| r.k).collect());
    }
    for (a, b, la, lb) in [(0, 1, "0", "0.5"), (0, 2, "0", "1"), (1, 2, "0.5", "1")] {
        let (d, pv) = ks_two_sample(&ks[a], &ks[b]);
        let good = pv > 0.01;
        ok &= good;
        parts.push(format!("KS p={la} vs p={lb}: D={d:.5}, p-value {pv:.3}"));
    }
    (ok, parts.join("; "))
}

/// `D_N` after each word of length `len`, indexed in base 5 with the first
/// symbol most significant, starting from a finite alternating stack.
fn all_final_d(len: usize) -> Vec<i32> {
    let stack: Vec<Burger> = (0..2 * len)
        .map(|i| if i % 2 == 0 { Burger::Ham } else { Burger::Cheese })
        .collect();
    let root = Inventory::explicit(&stack, (0, 0));
    let mut out = vec![0i32; 5usize.pow(len as u32)];
    fn go(inv: &Inventory, depth: usize, len: usize, code: usize, out: &mut [i32]) {
        if depth == len {
            out[code] = inv.position().0 as i32;
            return;
        }
        for (k, &s) in Symbol::ALL.iter().enumerate() {
            let mut next = inv.clone();
            next.step(s).expect("stack is deeper than the word");
            go(&next, depth + 1, len, code * 5 + k, out);
        }
    }
    go(&root, 0, len, 0, &mut out);
    out
}

fn perturbation_bound() -> (bool, String) {
    let len = 10;
    let d = all_final_d(len);
    let mut violations = 0u64;
    let mut worst = 0;
    let mut pairs = 0u64;
    for code in 0..d.len() {
        let mut place = 1;
        for _ in 0..len {
            let digit = (code / place) % 5;
            for other in 0..5 {
                if other != digit {
                    let alt = code - digit * place + other * place;
                    let delta = (d[code] - d[alt]).abs();
                    worst = worst.max(delta);
                    pairs += 1;
                    if delta > 2 {
                        violations += 1;
                    }
                }
            }
            place *= 5;
        }
    }
    (
        violations == 0,
        format!("{} words, {pairs} substitutions, max |dD| = {worst}, violations {violations}", d.len()),
    )
}

/// A random stack and a second one whose path lies weakly to its right.
fn comparable_pair(r: &mut rng::Rng, depth: usize) -> (EmbeddedStack, EmbeddedStack) {
    use rand::Rng as _;
    let c = r.gen_range(-5i64..=5);
    let d = 2 * r.gen_range(-5i64..=5) + c.rem_euclid(2);
    let shift = 2 * r.gen_range(0i64..=2);
    let mut left = Vec::with_capacity(depth);
    let mut right = Vec::with_capacity(depth);
    let mut gap = shift;
    for _ in 0..depth {
        let a = if r.gen::<bool>() { Burger::Cheese } else { Burger::Ham };
        // cheese moves right going down; the right path may not cross over
        let b = if (gap == 0 && a == Burger::Cheese) || r.gen::<bool>() {
            Burger::Cheese
        } else {
            Burger::Ham
        };
        let step = |x: Burger| if x == Burger::Cheese { 1 } else { -1 };
        gap += step(b) - step(a);
        left.push(a);
        right.push(b);
    }
    (
        EmbeddedStack::new(&left, (d, c)).expect("even tip"),
        EmbeddedStack::new(&right, (d + shift, c)).expect("even tip"),
    )
}

fn monotonicity(seed: u64) -> (bool, String) {
    use rayon::prelude::*;
    let trials = 10_000u64;
    let steps = 1000;
    let params = MuParams::new(0.5).expect("valid p");
    let outcome: Vec<(u64, u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::aux_stream(seed, t);
            let (mut a, mut b) = comparable_pair(&mut r, 4 * steps);
            let initial_ok = a.le(&b);
            let mut sym = rng::trial_stream(seed, t);
            let mut bad = 0;
            let mut underflow = 0;
            for _ in 0..steps {
                let s = params.sample(&mut sym);
                if a.step(s).is_err() || b.step(s).is_err() {
                    underflow += 1;
                    break;
                }
                if !a.le_changed(&b) {
                    bad += 1;
                }
            }
            if !a.le(&b) {
                bad += 1;
            }
            (bad, underflow, initial_ok)
        })
        .collect();
    let violations: u64 = outcome.iter().map(|o| o.0).sum();
    let underflows: u64 = outcome.iter().map(|o| o.1).sum();
    let bad_setup = outcome.iter().filter(|o| !o.2).count();
    (
        violations == 0 && underflows == 0 && bad_setup == 0,
        format!(
            "{trials} trials x {steps} steps: violations {violations}, underflows {underflows}, bad initial pairs {bad_setup}"
        ),
    )
}

fn fk_law(seed: u64) -> (bool, String) {
    let n = 4;
    let q = 2.0;
    let count = 1_000_000usize;
    let rows = match exact_enumerate(n, q) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let p = p_from_q(q).expect("q > 0");
    let samples = match sample_many(p, n, count, derive_seed(seed, 90), 10_000_000) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    let mut freq: HashMap<&Word, u64> = HashMap::new();
    let mut loops = [0u64; 6];
    for s in &samples {
        *freq.entry(&s.word).or_default() += 1;
        loops[s.loop_count.min(5)] += 1;
    }
    let total = count as f64;
    let tv = 0.5
        * rows
            .iter()
            .map(|r| (freq.get(&r.word).copied().unwrap_or(0) as f64 / total - r.probability).abs())
            .sum::<f64>();
    let unknown = samples.len() as u64 - rows.iter().map(|r| freq.get(&r.word).copied().unwrap_or(0)).sum::<u64>();
    // sampling noise floor of the distance for an exact sampler
    let floor = 0.5
        * (2.0 / (std::f64::consts::PI * total)).sqrt()
        * rows.iter().map(|r| r.probability.sqrt()).sum::<f64>();
    let chi2 = |obs: &mut dyn Iterator<Item = (f64, f64)>| -> (f64, usize) {
        let mut x = 0.0;
        let mut k = 0;
        for (o, e) in obs {
            x += (o - e) * (o - e) / e;
            k += 1;
        }
        (x, k)
    };
    let (x_all, k_all) = chi2(&mut rows.iter().map(|r| (freq.get(&r.word).copied().unwrap_or(0) as f64, r.probability * total)));
    let p_all = 1.0 - ChiSquared::new((k_all - 1) as f64).expect("df > 0").cdf(x_all);
    let mut exact_loops = [0f64; 6];
    for r in &rows {
        exact_loops[r.loops.min(5)] += r.probability;
    }
    let (x_l, k_l) = chi2(&mut (1..=5).map(|l| (loops[l] as f64, exact_loops[l] * total)));
    let p_l = 1.0 - ChiSquared::new((k_l - 1) as f64).expect("df > 0").cdf(x_l);
    let tv_ok = tv <= 0.02;
    let loops_ok = p_l > 0.01;
    let ok = tv_ok && loops_ok && unknown == 0;
    let emp: Vec<String> = (1..=5).map(|l| format!("{:.4}/{:.4}", loops[l] as f64 / total, exact_loops[l])).collect();
    (
        ok,
        format!(
            "TV={tv:.4} (bound 0.02; exact-sampler noise floor {floor:.4}), \
             full chi-square p={p_all:.3} over {k_all} words, \
             loop marginal (empirical/exact) [{}] chi-square p={p_l:.3}",
            emp.join(", ")
        ),
    )
}

/// `(p, n, trials, step cap)` for each flex-fraction run. Reaching the
/// `n`-th unfilled order has a heavy-tailed waiting time, so the caps bound
/// the cost of the slowest trials.
const FLEX_RUNS: [(f64, usize, u64, u64); 5] = [
    (0.75, 100, 400, 50_000_000),
    (0.75, 1000, 100, 50_000_000),
    (0.25, 100, 400, 50_000_000),
    (0.25, 1000, 100, 50_000_000),
    (0.25, 10_000, 8, 300_000_000),
];
const BALANCE_STEP_CAP: u64 = 100_000_000;

fn balance_and_flex(seed: u64) -> (bool, String) {
    let mut parts = Vec::new();
    let balance = match stack_balance(0.75, 10_000, 16, BALANCE_STEP_CAP, derive_seed(seed, 100)) {
        Ok(e) => e,
        Err(e) => return (false, e.to_string()),
    };
    let trunc = balance.truncated_fraction.unwrap_or(1.0);
    let balance_ok = trunc < 1.0 && (balance.value - 0.5).abs() <= 0.02;
    parts.push(format!(
        "p=0.75 ham fraction of top 10^4: {} over completed trials (truncated {trunc:.3})",
        fmt_est(&balance)
    ));
    let mut est = Vec::new();
    for (k, (p, n, trials, cap)) in FLEX_RUNS.into_iter().enumerate() {
        match f_fraction(p, n, trials, cap, derive_seed(seed, 101 + k as u64)) {
            Ok(e) => est.push(e),
            Err(e) => return (false, e.to_string()),
        }
    }
    let show = |e: &Estimate| format!("{} (truncated {:.2})", fmt_est(e), e.truncated_fraction.unwrap_or(1.0));
    let (hi_small, hi_large) = (&est[0], &est[1]);
    let se = (hi_small.std_error.powi(2) + hi_large.std_error.powi(2)).sqrt();
    let stable = (hi_large.value - hi_small.value).abs() <= 3.0 * se;
    let positive = hi_large.value - 3.0 * hi_large.std_error > 0.0;
    parts.push(format!(
        "p=0.75 flex fraction n=100: {}, n=1000: {} ({}, {})",
        show(hi_small),
        show(hi_large),
        if positive { "positive" } else { "NOT positive" },
        if stable { "stable within 3 s.e." } else { "NOT stable" }
    ));
    let low = &est[2..];
    let decreasing = low.windows(2).all(|w| w[1].value < w[0].value);
    parts.push(format!(
        "p=0.25 flex fraction n=10^2,10^3,10^4: {} ({})",
        low.iter().map(show).collect::<Vec<_>>().join(", "),
        if decreasing { "decreasing" } else { "NOT decreasing" }
    ));
    (balance_ok && stable && positive && decreasing, parts.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 2] {
            let r = run_criterion(id, DEFAULT_SEED).unwrap();
            assert!(r.passed, "{}", r.line());
        }
        assert!(run_criterion(11, 0).is_none());
    }

    #[test]
    fn catalan_recurrence() {
        assert_eq!(catalan(6), vec![1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn comparable_pairs_are_comparable() {
        let mut r = rng::aux_stream(1, 1);
        for _ in 0..200 {
            let (a, b) = comparable_pair(&mut r, 50);
            assert!(a.le(&b));
        }
    }

    #[test]
    fn final_d_table_matches_direct_evolution() {
        let d = all_final_d(3);
        let stack: Vec<Burger> = (0..6).map(|i| if i % 2 == 0 { Burger::Ham } else { Burger::Cheese }).collect();
        for (code, x) in all_words(&Symbol::ALL, 3).enumerate() {
            // all_words puts the first symbol least significant
            let mut inv = Inventory::explicit(&stack, (0, 0));
            for &s in x.symbols() {
                inv.step(s).unwrap();
            }
            let digits: Vec<usize> = x.symbols().iter().map(|s| Symbol::ALL.iter().position(|a| a == s).unwrap()).collect();
            let idx = digits[0] * 25 + digits[1] * 5 + digits[2];
            assert_eq!(d[idx], inv.position().0 as i32, "code {code}");
        }
    }
}
