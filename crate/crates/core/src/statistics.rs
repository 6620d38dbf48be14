//! Monte Carlo estimators for the walk and stack limit quantities.
//!
//! Every estimator is a pure function of its parameters and seed. Trial `t`
//! draws from `rng::trial_stream(seed, t)`, trials run in parallel and the
//! per-trial results are combined in trial order, so the output does not
//! depend on the number of threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::semigroup::{reduce, Burger, ReducedWord, Symbol, Word};
use crate::stack_sim::{endpoint, BurgerStack, InitialStackPolicy, MuParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    /// Share of trials stopped by a cutoff; `None` when there is no cutoff.
    pub truncated_fraction: Option<f64>,
}

/// Running count, mean and second moment (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.m2 / (self.count - 1) as f64
    }

    pub fn std_error_of_mean(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn of(xs: impl IntoIterator<Item = f64>) -> Moments {
        let mut m = Moments::default();
        for x in xs {
            m.push(x);
        }
        m
    }
}

/// Paired moments with the co-moment, mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PairMoments {
    pub x: Moments,
    pub y: Moments,
    cxy: f64,
}

impl PairMoments {
    pub fn push(&mut self, x: f64, y: f64) {
        let dx = x - self.x.mean;
        self.x.push(x);
        self.y.push(y);
        self.cxy += dx * (y - self.y.mean);
    }

    pub fn merge(&mut self, other: &PairMoments) {
        if other.x.count == 0 {
            return;
        }
        if self.x.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.x.count as f64, other.x.count as f64);
        let dx = other.x.mean - self.x.mean;
        let dy = other.y.mean - self.y.mean;
        self.cxy += other.cxy + dx * dy * na * nb / (na + nb);
        self.x.merge(&other.x);
        self.y.merge(&other.y);
    }

    pub fn covariance(&self) -> f64 {
        self.cxy / (self.x.count - 1) as f64
    }

    pub fn correlation(&self) -> f64 {
        self.covariance() / (self.x.variance() * self.y.variance()).sqrt()
    }
}

/// Runs `f` for trials `0..trials` in parallel and returns results in trial order.
pub fn run_trials<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// Number of batches used for batch-means standard errors.
const BATCHES: usize = 32;

/// Mean and standard error of `stat` across contiguous batches.
fn batch_error(batches: &[PairMoments], stat: impl Fn(&PairMoments) -> f64) -> f64 {
    let m = Moments::of(batches.iter().map(stat));
    m.std_error_of_mean()
}

fn split_batches(pairs: &[(f64, f64)]) -> Vec<PairMoments> {
    let k = BATCHES.min(pairs.len() / 2).max(1);
    let size = pairs.len().div_ceil(k);
    pairs
        .chunks(size)
        .map(|c| {
            let mut m = PairMoments::default();
            for &(x, y) in c {
                m.push(x, y);
            }
            m
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub var_d_over_n: Estimate,
    pub var_c_over_n: Estimate,
    pub corr_dc: Estimate,
}

/// `Var[D_n]/n`, `Var[C_n]/n` and `corr(D_n, C_n)` over independent trials.
pub fn estimate_variance_ratio(
    p: f64,
    n: usize,
    trials: u64,
    policy: &InitialStackPolicy,
    seed: u64,
) -> Result<VarianceReport> {
    if n == 0 || trials < 2 {
        return Err(Error::OutOfRange("need n >= 1 and at least two trials".into()));
    }
    let params = MuParams::new(p)?;
    let ends = run_trials(trials, |t| endpoint(&params, n, policy, seed, t))
        .into_iter()
        .map(|r| r.map(|(d, c)| (d as f64, c as f64)))
        .collect::<Result<Vec<_>>>()?;
    let batches = split_batches(&ends);
    let mut all = PairMoments::default();
    for b in &batches {
        all.merge(b);
    }
    let nf = n as f64;
    let est = |value: f64, se: f64| Estimate {
        value,
        std_error: se,
        trials,
        truncated_fraction: None,
    };
    Ok(VarianceReport {
        var_d_over_n: est(all.x.variance() / nf, batch_error(&batches, |b| b.x.variance() / nf)),
        var_c_over_n: est(all.y.variance() / nf, batch_error(&batches, |b| b.y.variance() / nf)),
        corr_dc: est(all.correlation(), batch_error(&batches, |b| b.correlation())),
    })
}

/// Orders of a word that is only ever extended on the left. A prepended
/// burger takes the leftmost order that accepts it.
#[derive(Clone, Debug, Default)]
pub struct OrderFront {
    // positions by kind: cheese, ham, flexible; larger = further left
    stacks: [Vec<u64>; 3],
    counter: u64,
}

impl OrderFront {
    fn kind(s: Symbol) -> usize {
        match s {
            Symbol::CheeseOrder => 0,
            Symbol::HamOrder => 1,
            Symbol::FlexOrder => 2,
            _ => unreachable!("burgers are not stored"),
        }
    }

    pub fn len(&self) -> usize {
        self.stacks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.stacks[Self::kind(s)].len()
    }

    pub fn prepend_order(&mut self, s: Symbol) {
        self.counter += 1;
        self.stacks[Self::kind(s)].push(self.counter);
    }

    /// Returns true if the burger was consumed.
    pub fn prepend_burger(&mut self, b: Burger) -> bool {
        let typed = b.index();
        let pick = match (self.stacks[typed].last(), self.stacks[2].last()) {
            (Some(&a), Some(&f)) => Some(if a > f { typed } else { 2 }),
            (Some(_), None) => Some(typed),
            (None, Some(_)) => Some(2),
            (None, None) => None,
        };
        match pick {
            Some(k) => {
                self.stacks[k].pop();
                true
            }
            None => false,
        }
    }

    /// Prepends any symbol; returns the burger if it survived.
    pub fn prepend(&mut self, s: Symbol) -> Option<Burger> {
        match s.burger() {
            Some(b) => (!self.prepend_burger(b)).then_some(b),
            None => {
                self.prepend_order(s);
                None
            }
        }
    }
}

/// One sample of `X(-J,-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiTrial {
    /// `None` when the cutoff was reached first.
    pub j: Option<u64>,
    pub length: u64,
    pub net_count: i64,
    /// `None` if a flexible order survived, which would make `D` undefined.
    pub discrepancy: Option<i64>,
}

/// Prepends symbols until the reduced word first holds a burger.
pub fn chi_trial(params: &MuParams, cutoff: u64, seed: u64, trial: u64) -> ChiTrial {
    let mut r = rng::trial_stream(seed, trial);
    let mut front = OrderFront::default();
    for j in 1..=cutoff {
        let s = params.sample(&mut r);
        if let Some(b) = front.prepend(s) {
            let orders = front.len() as i64;
            let discrepancy = (front.count(Symbol::FlexOrder) == 0).then(|| {
                front.count(Symbol::CheeseOrder) as i64 - front.count(Symbol::HamOrder) as i64
                    + b.symbol().discrepancy_step().expect("burger")
            });
            return ChiTrial {
                j: Some(j),
                length: orders as u64 + 1,
                net_count: 1 - orders,
                discrepancy,
            };
        }
    }
    ChiTrial {
        j: None,
        length: front.len() as u64,
        net_count: -(front.len() as i64),
        discrepancy: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiReport {
    pub chi: Estimate,
    /// Trials where `|X| = |D| = 2 - C` failed; always zero.
    pub identity_violations: u64,
}

/// `chi = E|X(-J,-1)|`, averaged over trials that finish before `cutoff`.
pub fn estimate_chi(p: f64, trials: u64, cutoff: u64, seed: u64) -> Result<ChiReport> {
    if cutoff == 0 || trials == 0 {
        return Err(Error::OutOfRange("need cutoff >= 1 and trials >= 1".into()));
    }
    let params = MuParams::new(p)?;
    let samples = run_trials(trials, |t| chi_trial(&params, cutoff, seed, t));
    let done: Vec<&ChiTrial> = samples.iter().filter(|s| s.j.is_some()).collect();
    let violations = done
        .iter()
        .filter(|s| {
            s.discrepancy.map(i64::abs) != Some(s.length as i64) || s.length as i64 != 2 - s.net_count
        })
        .count() as u64;
    let m = Moments::of(done.iter().map(|s| s.length as f64));
    Ok(ChiReport {
        chi: Estimate {
            value: m.mean,
            std_error: m.std_error_of_mean(),
            trials,
            truncated_fraction: Some(1.0 - done.len() as f64 / trials as f64),
        },
        identity_violations: violations,
    })
}

/// One excursion above the running minimum of the burger count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionRecord {
    /// First `k` with `C(1, k+1) < 0`; the cutoff when truncated.
    pub k: u64,
    pub truncated: bool,
    /// Length of the reduced excursion word.
    pub word_len: u64,
    /// Symbol counts of the reduced word, in the order `c h C H F`.
    pub counts: [u64; 5],
}

impl ExcursionRecord {
    pub fn is_balanced(&self) -> bool {
        self.counts[0] + self.counts[1] == self.counts[2] + self.counts[3] + self.counts[4]
    }
}

pub fn excursion_trial(params: &MuParams, cutoff: u64, seed: u64, trial: u64) -> ExcursionRecord {
    let mut r = rng::trial_stream(seed, trial);
    let mut stack = BurgerStack::new();
    let mut unfilled = [0u64; 3];
    let mut c = 0i64;
    let mut k = 0;
    let mut truncated = true;
    while k < cutoff {
        let s = params.sample(&mut r);
        c += s.count_step();
        if c < 0 {
            truncated = false;
            break;
        }
        k += 1;
        match s {
            Symbol::CheeseBurger | Symbol::HamBurger => stack.push(s.burger().expect("burger")),
            Symbol::CheeseOrder | Symbol::HamOrder => {
                let b = s.wants().expect("typed");
                if stack.pop_type(b).is_none() {
                    unfilled[b.index()] += 1;
                }
            }
            Symbol::FlexOrder => {
                if stack.pop_top().is_none() {
                    unfilled[2] += 1;
                }
            }
        }
    }
    let counts = [
        stack.count(Burger::Cheese) as u64,
        stack.count(Burger::Ham) as u64,
        unfilled[0],
        unfilled[1],
        unfilled[2],
    ];
    ExcursionRecord {
        k,
        truncated,
        word_len: counts.iter().sum(),
        counts,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcursionReport {
    pub trials: u64,
    pub truncated_fraction: f64,
    pub median_k: u64,
    /// `P(K > 10^j)` for `j = 0, 1, ...` up to the cutoff.
    pub k_tail: Vec<(u64, f64)>,
    /// Mean of `|E|` over completed excursions.
    pub truncated_mean_len: Estimate,
    pub median_len: u64,
    /// Completed excursions whose reduced word holds a flexible order.
    pub flex_violations: u64,
    /// Completed excursions whose reduced word is not balanced.
    pub balance_violations: u64,
    pub empty_fraction: f64,
}

pub fn excursion_records(p: f64, trials: u64, cutoff: u64, seed: u64) -> Result<Vec<ExcursionRecord>> {
    if cutoff == 0 {
        return Err(Error::OutOfRange("cutoff must be at least 1".into()));
    }
    let params = MuParams::new(p)?;
    Ok(run_trials(trials, |t| excursion_trial(&params, cutoff, seed, t)))
}

pub fn excursion_stats(p: f64, trials: u64, cutoff: u64, seed: u64) -> Result<ExcursionReport> {
    let recs = excursion_records(p, trials, cutoff, seed)?;
    Ok(summarize_excursions(&recs, cutoff))
}

fn median(mut xs: Vec<u64>) -> u64 {
    if xs.is_empty() {
        return 0;
    }
    xs.sort_unstable();
    xs[xs.len() / 2]
}

pub fn summarize_excursions(recs: &[ExcursionRecord], cutoff: u64) -> ExcursionReport {
    let trials = recs.len() as u64;
    let done: Vec<&ExcursionRecord> = recs.iter().filter(|r| !r.truncated).collect();
    let mut k_tail = Vec::new();
    let mut level = 1u64;
    while level < cutoff {
        let above = recs.iter().filter(|r| r.k > level).count();
        k_tail.push((level, above as f64 / trials.max(1) as f64));
        level *= 10;
    }
    let lens = Moments::of(done.iter().map(|r| r.word_len as f64));
    ExcursionReport {
        trials,
        truncated_fraction: 1.0 - done.len() as f64 / trials.max(1) as f64,
        median_k: median(recs.iter().map(|r| r.k).collect()),
        k_tail,
        truncated_mean_len: Estimate {
            value: lens.mean,
            std_error: lens.std_error_of_mean(),
            trials,
            truncated_fraction: Some(1.0 - done.len() as f64 / trials.max(1) as f64),
        },
        median_len: median(done.iter().map(|r| r.word_len).collect()),
        flex_violations: done.iter().filter(|r| r.counts[4] > 0).count() as u64,
        balance_violations: done.iter().filter(|r| !r.is_balanced()).count() as u64,
        empty_fraction: done.iter().filter(|r| r.word_len == 0).count() as f64
            / done.len().max(1) as f64,
    }
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[u64], b: &[u64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] == x {
            i += 1;
        }
        while j < m && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    (d, kolmogorov_q(((ne).sqrt() + 0.12 + 0.11 / ne.sqrt()) * d))
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k as f64 * x).powi(2)).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// One truncation of `X(-inf, 0)`: the top burgers, top first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackSample {
    pub burgers: Vec<Burger>,
    pub steps: u64,
    pub truncated: bool,
}

/// Prepends `X(0), X(-1), ...` until `depth` burgers survive.
pub fn stack_sample(params: &MuParams, depth: usize, max_steps: u64, seed: u64, trial: u64) -> StackSample {
    let mut r = rng::trial_stream(seed, trial);
    let mut front = OrderFront::default();
    let mut burgers = Vec::with_capacity(depth);
    let mut steps = 0;
    while burgers.len() < depth && steps < max_steps {
        steps += 1;
        if let Some(b) = front.prepend(params.sample(&mut r)) {
            burgers.push(b);
        }
    }
    StackSample {
        truncated: burgers.len() < depth,
        burgers,
        steps,
    }
}

/// Hamburger fraction among the top `depth` burgers of `X(-inf, 0)`,
/// averaged over trials that reach `depth` within `max_steps`.
pub fn stack_balance(p: f64, depth: usize, trials: u64, max_steps: u64, seed: u64) -> Result<Estimate> {
    if depth == 0 || trials == 0 {
        return Err(Error::OutOfRange("need depth >= 1 and trials >= 1".into()));
    }
    let params = MuParams::new(p)?;
    let samples = run_trials(trials, |t| stack_sample(&params, depth, max_steps, seed, t));
    let done: Vec<&StackSample> = samples.iter().filter(|s| !s.truncated).collect();
    let m = Moments::of(done.iter().map(|s| {
        s.burgers.iter().filter(|&&b| b == Burger::Ham).count() as f64 / depth as f64
    }));
    Ok(Estimate {
        value: m.mean,
        std_error: if done.len() > 1 { m.std_error_of_mean() } else { f64::NAN },
        trials,
        truncated_fraction: Some(1.0 - done.len() as f64 / trials as f64),
    })
}

/// The first `n` orders that stay unfilled in `X(1, m)` as `m` grows;
/// these are the leftmost orders of `X(1, inf)`.
pub fn leftmost_orders(params: &MuParams, n: usize, max_steps: u64, seed: u64, trial: u64) -> (Vec<Symbol>, bool) {
    let mut r = rng::trial_stream(seed, trial);
    let mut stack = BurgerStack::new();
    let mut orders = Vec::with_capacity(n);
    let mut steps = 0;
    while orders.len() < n && steps < max_steps {
        steps += 1;
        let s = params.sample(&mut r);
        let filled = match s {
            Symbol::CheeseBurger | Symbol::HamBurger => {
                stack.push(s.burger().expect("burger"));
                true
            }
            Symbol::CheeseOrder | Symbol::HamOrder => stack.pop_type(s.wants().expect("typed")).is_some(),
            Symbol::FlexOrder => stack.pop_top().is_some(),
        };
        if !filled {
            orders.push(s);
        }
    }
    let truncated = orders.len() < n;
    (orders, truncated)
}

/// Share of `[F]` among the leftmost `n` orders of `X(1, inf)`.
pub fn f_fraction(p: f64, n: usize, trials: u64, max_steps: u64, seed: u64) -> Result<Estimate> {
    if n == 0 || trials == 0 {
        return Err(Error::OutOfRange("need n >= 1 and trials >= 1".into()));
    }
    let params = MuParams::new(p)?;
    let samples = run_trials(trials, |t| leftmost_orders(&params, n, max_steps, seed, t));
    let done: Vec<&Vec<Symbol>> = samples.iter().filter(|(_, tr)| !tr).map(|(o, _)| o).collect();
    let m = Moments::of(done.iter().map(|o| {
        o.iter().filter(|&&s| s == Symbol::FlexOrder).count() as f64 / n as f64
    }));
    Ok(Estimate {
        value: m.mean,
        std_error: if done.len() > 1 { m.std_error_of_mean() } else { f64::NAN },
        trials,
        truncated_fraction: Some(1.0 - done.len() as f64 / trials as f64),
    })
}

/// A bottleneck at time zero: `X(m_-, 0)` is `k` burgers, `X(1, m_+)` is
/// `k` orders, and together they reduce to nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bottleneck {
    pub k: usize,
    /// `m_- <= 0`.
    pub m_minus: i64,
    pub m_plus: i64,
    /// `X(m_-)...X(m_+)`.
    pub word: Word,
}

/// Searches for the smallest bottleneck using at most `cutoff` symbols on
/// each side of zero.
pub fn bottleneck_trial(params: &MuParams, cutoff: u64, seed: u64, trial: u64) -> Option<Bottleneck> {
    // Backward side: X(0), X(-1), ... from the auxiliary stream.
    let mut rb = rng::aux_stream(seed, trial);
    let mut rf = rng::trial_stream(seed, trial);
    let mut back_syms: Vec<Symbol> = Vec::new();
    let mut front = OrderFront::default();
    let mut back_burgers: Vec<Burger> = Vec::new();
    // count k -> first j with X(-j, 0) exactly k burgers and no orders
    let mut back_clean: Vec<Option<u64>> = vec![None];
    let mut fwd_syms: Vec<Symbol> = Vec::new();
    let mut stack = BurgerStack::new();
    let mut fwd_orders: Vec<Symbol> = Vec::new();
    let mut fwd_clean: Vec<Option<u64>> = vec![None];

    let mut k = 1usize;
    loop {
        // back side: run until the burger count passes k or a clean moment at k
        while back_burgers.len() <= k && back_clean.get(k).copied().flatten().is_none() {
            if back_syms.len() as u64 >= cutoff {
                return None;
            }
            let s = params.sample(&mut rb);
            back_syms.push(s);
            if let Some(b) = front.prepend(s) {
                back_burgers.push(b);
            }
            if front.is_empty() {
                let c = back_burgers.len();
                if back_clean.len() <= c {
                    back_clean.resize(c + 1, None);
                }
                if back_clean[c].is_none() {
                    back_clean[c] = Some(back_syms.len() as u64 - 1);
                }
            }
        }
        while fwd_orders.len() <= k && fwd_clean.get(k).copied().flatten().is_none() {
            if fwd_syms.len() as u64 >= cutoff {
                return None;
            }
            let s = params.sample(&mut rf);
            fwd_syms.push(s);
            let filled = match s.burger() {
                Some(b) => {
                    stack.push(b);
                    true
                }
                None => match s.wants() {
                    Some(b) => stack.pop_type(b).is_some(),
                    None => stack.pop_top().is_some(),
                },
            };
            if !filled {
                fwd_orders.push(s);
            }
            if stack.is_empty() {
                let c = fwd_orders.len();
                if fwd_clean.len() <= c {
                    fwd_clean.resize(c + 1, None);
                }
                if fwd_clean[c].is_none() {
                    fwd_clean[c] = Some(fwd_syms.len() as u64);
                }
            }
        }
        if let (Some(Some(jb)), Some(Some(jf))) = (back_clean.get(k), fwd_clean.get(k)) {
            let mut s = BurgerStack::from_top_first(&back_burgers[..k]);
            let cancels = fwd_orders[..k].iter().all(|&o| match o.wants() {
                Some(b) => s.pop_type(b).is_some(),
                None => s.pop_top().is_some(),
            });
            if cancels && s.is_empty() {
                let jb = *jb as usize;
                let jf = *jf as usize;
                let mut word: Vec<Symbol> = back_syms[..=jb].iter().rev().copied().collect();
                word.extend_from_slice(&fwd_syms[..jf]);
                return Some(Bottleneck {
                    k,
                    m_minus: -(jb as i64),
                    m_plus: jf as i64,
                    word: Word::new(word),
                });
            }
        }
        k += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BottleneckReport {
    pub k: Estimate,
    /// Found witnesses whose word does not reduce to the empty word.
    pub reduce_violations: u64,
}

/// Mean of the smallest bottleneck size over trials that find one.
pub fn bottleneck_k(p: f64, trials: u64, cutoff: u64, seed: u64) -> Result<BottleneckReport> {
    if cutoff == 0 || trials == 0 {
        return Err(Error::OutOfRange("need cutoff >= 1 and trials >= 1".into()));
    }
    let params = MuParams::new(p)?;
    let found = run_trials(trials, |t| {
        bottleneck_trial(&params, cutoff, seed, t).map(|b| {
            let ok = reduce(&b.word).is_empty()
                && b.word.len() as i64 == b.m_plus - b.m_minus + 1
                && is_burgers_then_orders(&b);
            (b.k, ok)
        })
    });
    let done: Vec<(usize, bool)> = found.into_iter().flatten().collect();
    let m = Moments::of(done.iter().map(|&(k, _)| k as f64));
    Ok(BottleneckReport {
        k: Estimate {
            value: m.mean,
            std_error: if done.len() > 1 { m.std_error_of_mean() } else { f64::NAN },
            trials,
            truncated_fraction: Some(1.0 - done.len() as f64 / trials as f64),
        },
        reduce_violations: done.iter().filter(|&&(_, ok)| !ok).count() as u64,
    })
}

fn is_burgers_then_orders(b: &Bottleneck) -> bool {
    let split = (-b.m_minus) as usize + 1;
    let left = reduce(&b.word.slice(1, split));
    let right = reduce(&b.word.slice(split + 1, b.word.len()));
    left.orders().is_empty()
        && left.burgers().len() == b.k
        && right.burgers().is_empty()
        && right.orders().len() == b.k
}

/// `|X(1, n)|` for one trial.
pub fn reduced_length(params: &MuParams, n: usize, seed: u64, trial: u64) -> u64 {
    let mut r = rng::trial_stream(seed, trial);
    let mut stack = BurgerStack::new();
    let mut unfilled = 0u64;
    for _ in 0..n {
        let s = params.sample(&mut r);
        let filled = match s.burger() {
            Some(b) => {
                stack.push(b);
                true
            }
            None => match s.wants() {
                Some(b) => stack.pop_type(b).is_some(),
                None => stack.pop_top().is_some(),
            },
        };
        if !filled {
            unfilled += 1;
        }
    }
    unfilled + stack.len() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: usize,
    pub trials: u64,
    /// `(a, P(|X(1,n)| > a sqrt(n)))`.
    pub exceedance: Vec<(f64, f64)>,
    /// Least-squares slope of `ln P` against `a` over points with `P > 0`.
    pub log_slope: f64,
}

pub fn tail_exceedance(p: f64, n: usize, a_grid: &[f64], trials: u64, seed: u64) -> Result<TailReport> {
    if n == 0 || trials == 0 {
        return Err(Error::OutOfRange("need n >= 1 and trials >= 1".into()));
    }
    let params = MuParams::new(p)?;
    let lens = run_trials(trials, |t| reduced_length(&params, n, seed, t));
    let root = (n as f64).sqrt();
    let exceedance: Vec<(f64, f64)> = a_grid
        .iter()
        .map(|&a| {
            let above = lens.iter().filter(|&&l| l as f64 > a * root).count();
            (a, above as f64 / trials as f64)
        })
        .collect();
    let pts: Vec<(f64, f64)> = exceedance
        .iter()
        .filter(|&&(_, q)| q > 0.0)
        .map(|&(a, q)| (a, q.ln()))
        .collect();
    Ok(TailReport {
        n,
        trials,
        log_slope: least_squares_slope(&pts),
        exceedance,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Reduced word of a sampled word, for tests that need the full object.
pub fn reduce_sample(params: &MuParams, n: usize, seed: u64, trial: u64) -> ReducedWord {
    let mut r = rng::trial_stream(seed, trial);
    reduce(&params.sample_word(&mut r, n))
}

/// Output record shared by all estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub estimator: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    pub truncated_fraction: Option<f64>,
    pub seed: u64,
}

impl EstimateRecord {
    pub fn new(estimator: &str, params: serde_json::Value, e: &Estimate, seed: u64) -> Self {
        EstimateRecord {
            estimator: estimator.to_string(),
            params: match params {
                serde_json::Value::Object(m) => m,
                other => {
                    let mut m = serde_json::Map::new();
                    m.insert("value".into(), other);
                    m
                }
            },
            value: e.value,
            std_error: e.std_error,
            trials: e.trials,
            truncated_fraction: e.truncated_fraction,
            seed,
        }
    }
}

/// CSV with one row per record; parameters are folded into `k=v;k=v`.
pub fn records_csv(records: &[EstimateRecord]) -> String {
    let mut out = String::from("estimator,params,value,std_error,trials,truncated_fraction,seed\n");
    for r in records {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.estimator,
            params.join(";").replace(',', " "),
            r.value,
            r.std_error,
            r.trials,
            r.truncated_fraction.map(|t| t.to_string()).unwrap_or_default(),
            r.seed
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64).collect();
        let whole = Moments::of(xs.iter().copied());
        let mut a = Moments::of(xs[..40].iter().copied());
        a.merge(&Moments::of(xs[40..].iter().copied()));
        assert!((whole.variance() - a.variance()).abs() < 1e-12);
        assert!((whole.mean - a.mean).abs() < 1e-12);
    }

    #[test]
    fn order_front_takes_leftmost_acceptor() {
        let mut f = OrderFront::default();
        f.prepend_order(Symbol::FlexOrder);
        f.prepend_order(Symbol::CheeseOrder);
        // c takes the [C] (leftmost), leaving [F]
        assert!(f.prepend_burger(Burger::Cheese));
        assert_eq!(f.count(Symbol::FlexOrder), 1);
        assert!(f.prepend_burger(Burger::Ham));
        assert!(!f.prepend_burger(Burger::Ham));
    }

    #[test]
    fn chi_identity_on_every_trial() {
        let params = MuParams::new(0.6).unwrap();
        for t in 0..2000 {
            let s = chi_trial(&params, 100_000, 3, t);
            if s.j.is_none() {
                continue;
            }
            assert_eq!(Some(s.length as i64), s.discrepancy.map(i64::abs));
            assert_eq!(s.length as i64, 2 - s.net_count);
        }
    }

    #[test]
    fn p_one_excursions_are_empty() {
        let r = excursion_stats(1.0, 2000, 100_000, 5).unwrap();
        assert_eq!(r.empty_fraction, 1.0);
        assert_eq!(r.flex_violations, 0);
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<u64> = (0..1000).collect();
        let (d, pv) = ks_two_sample(&a, &a);
        assert_eq!(d, 0.0);
        assert_eq!(pv, 1.0);
        let b: Vec<u64> = (500..1500).collect();
        let (d, pv) = ks_two_sample(&a, &b);
        assert!((d - 0.5).abs() < 1e-12);
        assert!(pv < 1e-10);
    }

    #[test]
    fn bottleneck_witness_reduces() {
        let params = MuParams::new(0.75).unwrap();
        let mut found = 0;
        for t in 0..200 {
            if let Some(b) = bottleneck_trial(&params, 100_000, 1, t) {
                found += 1;
                assert!(reduce(&b.word).is_empty());
                assert!(is_burgers_then_orders(&b));
                assert!(b.m_minus <= 0 && b.m_plus > 0);
            }
        }
        assert!(found > 150);
    }

    #[test]
    fn depth_one_balance_near_half() {
        let e = stack_balance(0.75, 1, 4000, 1_000_000, 2).unwrap();
        assert!((e.value - 0.5).abs() < 4.0 * e.std_error + 1e-9);
    }
}
