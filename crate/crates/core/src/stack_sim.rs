//! Sampling symbol streams and evolving the burger stack.
//!
//! The stack is semi-infinite: burgers pushed during the run sit on top of an
//! initial stack that is materialized from an [`InitialStackPolicy`] only
//! when an order digs down to it.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng as _, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::semigroup::{Burger, Symbol, Word};

/// Parameters of the i.i.d. symbol law: `c`, `h` with 1/4 each, `C`, `H` with
/// `(1-p)/4` each and `F` with `p/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuParams {
    p: f64,
    #[serde(skip)]
    flex_threshold: u64,
}

const LOW_BITS: u32 = 62;
const LOW_MASK: u64 = (1 << LOW_BITS) - 1;

impl MuParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        let flex_threshold = if p >= 1.0 {
            1u64 << LOW_BITS
        } else {
            (p * (1u64 << LOW_BITS) as f64) as u64
        };
        Ok(MuParams { p, flex_threshold })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Probabilities of `c, h, C, H, F` in that order.
    pub fn probabilities(&self) -> [f64; 5] {
        let p = self.p;
        [0.25, 0.25, (1.0 - p) / 4.0, (1.0 - p) / 4.0, p / 2.0]
    }

    pub fn probability(&self, s: Symbol) -> f64 {
        let i = Symbol::ALL.iter().position(|&x| x == s).expect("alphabet symbol");
        self.probabilities()[i]
    }

    /// One 64-bit draw per symbol: the top bit picks burger or order, the
    /// next bit the type, and the low 62 bits decide whether an order is
    /// flexible.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Symbol {
        let u = rng.next_u64();
        let ham = (u >> 62) & 1 == 1;
        if u >> 63 == 0 {
            if ham {
                Symbol::HamBurger
            } else {
                Symbol::CheeseBurger
            }
        } else if (u & LOW_MASK) < self.flex_threshold {
            Symbol::FlexOrder
        } else if ham {
            Symbol::HamOrder
        } else {
            Symbol::CheeseOrder
        }
    }

    pub fn sample_word<R: RngCore + ?Sized>(&self, rng: &mut R, len: usize) -> Word {
        Word::new((0..len).map(|_| self.sample(rng)).collect())
    }
}

pub fn sample_symbol<R: RngCore + ?Sized>(params: &MuParams, rng: &mut R) -> Symbol {
    params.sample(rng)
}

/// How the stack below the starting tip is filled in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "burgers", rename_all = "snake_case")]
pub enum InitialStackPolicy {
    /// `...chch` with a hamburger on top.
    Alternating,
    /// Independent fair draws from a stream separate from the symbols.
    IidFair,
    /// A finite stack, listed top first.
    Explicit(Vec<Burger>),
}

impl InitialStackPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            InitialStackPolicy::Alternating => "alternating",
            InitialStackPolicy::IidFair => "iid_fair",
            InitialStackPolicy::Explicit(_) => "explicit",
        }
    }
}

/// Supplies burgers below the current bottom on demand.
#[derive(Clone, Debug)]
enum StackSource {
    Alternating { depth: u64 },
    Iid(Box<Rng>),
    Explicit { items: Vec<Burger>, next: usize },
}

impl StackSource {
    fn new(policy: &InitialStackPolicy, aux: Rng) -> Self {
        match policy {
            InitialStackPolicy::Alternating => StackSource::Alternating { depth: 0 },
            InitialStackPolicy::IidFair => StackSource::Iid(Box::new(aux)),
            InitialStackPolicy::Explicit(items) => StackSource::Explicit {
                items: items.clone(),
                next: 0,
            },
        }
    }

    fn deeper(&mut self) -> Option<Burger> {
        match self {
            StackSource::Alternating { depth } => {
                let b = if *depth % 2 == 0 { Burger::Ham } else { Burger::Cheese };
                *depth += 1;
                Some(b)
            }
            StackSource::Iid(rng) => Some(if rng.gen::<bool>() { Burger::Ham } else { Burger::Cheese }),
            StackSource::Explicit { items, next } => {
                let b = items.get(*next).copied();
                if b.is_some() {
                    *next += 1;
                }
                b
            }
        }
    }
}

/// A stack of burgers that supports taking the topmost burger of a given
/// type, taking the top burger, and growing at the bottom.
///
/// Slots are addressed by absolute position; removed slots below the top are
/// left as holes and skipped.
#[derive(Clone, Debug, Default)]
pub struct BurgerStack {
    slots: VecDeque<Option<Burger>>,
    base: i64,
    by_type: [VecDeque<i64>; 2],
    lowest_touched: Option<i64>,
}

impl BurgerStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a stack from a top-first list.
    pub fn from_top_first(burgers: &[Burger]) -> Self {
        let mut s = Self::new();
        for &b in burgers.iter().rev() {
            s.push(b);
        }
        s.lowest_touched = None;
        s
    }

    pub fn len(&self) -> usize {
        self.by_type[0].len() + self.by_type[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, b: Burger) -> usize {
        self.by_type[b.index()].len()
    }

    fn top_position(&self) -> i64 {
        self.base + self.slots.len() as i64 - 1
    }

    fn touch(&mut self, pos: i64) {
        self.lowest_touched = Some(self.lowest_touched.map_or(pos, |t| t.min(pos)));
    }

    fn trim(&mut self) {
        while let Some(None) = self.slots.back() {
            self.slots.pop_back();
        }
    }

    #[inline]
    pub fn push(&mut self, b: Burger) {
        self.slots.push_back(Some(b));
        let pos = self.top_position();
        self.by_type[b.index()].push_back(pos);
        self.touch(pos);
    }

    /// Adds a burger below everything currently in the stack.
    pub fn push_bottom(&mut self, b: Burger) {
        self.base -= 1;
        self.slots.push_front(Some(b));
        self.by_type[b.index()].push_front(self.base);
    }

    /// Removes the topmost burger of type `b`.
    #[inline]
    pub fn pop_type(&mut self, b: Burger) -> Option<()> {
        let pos = self.by_type[b.index()].pop_back()?;
        self.slots[(pos - self.base) as usize] = None;
        self.touch(pos);
        self.trim();
        Some(())
    }

    /// Removes the top burger.
    #[inline]
    pub fn pop_top(&mut self) -> Option<Burger> {
        let b = (*self.slots.back()?).expect("trimmed stack has a live top");
        let pos = self.top_position();
        let popped = self.by_type[b.index()].pop_back();
        debug_assert_eq!(popped, Some(pos));
        self.slots.pop_back();
        self.touch(pos);
        self.trim();
        Some(b)
    }

    pub fn top(&self) -> Option<Burger> {
        self.slots.back().copied().flatten()
    }

    /// Live burgers from the top down.
    pub fn iter_top_down(&self) -> impl Iterator<Item = Burger> + '_ {
        self.slots.iter().rev().filter_map(|s| *s)
    }

    /// Number of live burgers at or above the lowest slot ever pushed,
    /// popped or emptied. Everything below is as it was at construction.
    fn live_at_or_above_touched(&self) -> usize {
        match self.lowest_touched {
            None => 0,
            Some(t) => {
                let top = self.top_position();
                if t > top {
                    return 0;
                }
                let from = (t - self.base).max(0) as usize;
                self.slots.range(from..).filter(|s| s.is_some()).count()
            }
        }
    }
}

/// Stack plus tip position, evolved one symbol at a time.
#[derive(Clone, Debug)]
pub struct Inventory {
    stack: BurgerStack,
    source: StackSource,
    d: i64,
    c: i64,
    steps: usize,
}

impl Inventory {
    pub fn new(policy: &InitialStackPolicy, aux: Rng) -> Self {
        Inventory {
            stack: BurgerStack::new(),
            source: StackSource::new(policy, aux),
            d: 0,
            c: 0,
            steps: 0,
        }
    }

    /// A finite stack (top first) with the tip at `(d, c)`.
    pub fn explicit(burgers: &[Burger], tip: (i64, i64)) -> Self {
        Inventory {
            stack: BurgerStack::from_top_first(burgers),
            source: StackSource::Explicit {
                items: Vec::new(),
                next: 0,
            },
            d: tip.0,
            c: tip.1,
            steps: 0,
        }
    }

    pub fn position(&self) -> (i64, i64) {
        (self.d, self.c)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn stack(&self) -> &BurgerStack {
        &self.stack
    }

    fn underflow(&self, x: Symbol) -> Error {
        Error::StackUnderflow {
            step: self.steps + 1,
            symbol: x.to_char(),
        }
    }

    /// Applies one symbol and returns its resolved form (`[F]` becomes the
    /// typed order of the burger it took).
    #[inline]
    pub fn step(&mut self, x: Symbol) -> Result<Symbol> {
        let y = match x {
            Symbol::CheeseBurger | Symbol::HamBurger => {
                self.stack.push(x.burger().expect("burger"));
                x
            }
            Symbol::CheeseOrder | Symbol::HamOrder => {
                let b = x.wants().expect("typed order");
                while self.stack.pop_type(b).is_none() {
                    let deeper = self.source.deeper().ok_or_else(|| self.underflow(x))?;
                    self.stack.push_bottom(deeper);
                }
                x
            }
            Symbol::FlexOrder => loop {
                if let Some(b) = self.stack.pop_top() {
                    break b.order();
                }
                let deeper = self.source.deeper().ok_or_else(|| self.underflow(x))?;
                self.stack.push_bottom(deeper);
            },
        };
        self.c += y.count_step();
        self.d += y.discrepancy_step().expect("resolved symbol");
        self.steps += 1;
        Ok(y)
    }
}

/// The path `(D_k, C_k)` with its symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub p: f64,
    pub seed: u64,
    pub policy: InitialStackPolicy,
    pub d: Vec<i64>,
    pub c: Vec<i64>,
    pub x: Word,
    pub y: Word,
}

/// Metadata written next to a trajectory CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub p: f64,
    pub n: usize,
    pub policy: InitialStackPolicy,
    pub seed: u64,
    pub rng: String,
}

pub const TRAJECTORY_CSV_HEADER: &str = "step,D,C,symbol,y_symbol";

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn meta(&self) -> TrajectoryMeta {
        TrajectoryMeta {
            p: self.p,
            n: self.len(),
            policy: self.policy.clone(),
            seed: self.seed,
            rng: rng::RNG_NAME.to_string(),
        }
    }

    /// Checks the unit-increment and even-lattice invariants.
    pub fn check_invariants(&self) -> Result<()> {
        if self.d.first() != Some(&0) || self.c.first() != Some(&0) {
            return Err(Error::OutOfRange("trajectory does not start at the origin".into()));
        }
        for k in 1..self.d.len() {
            if (self.d[k] - self.d[k - 1]).abs() != 1 || (self.c[k] - self.c[k - 1]).abs() != 1 {
                return Err(Error::OutOfRange(format!("non-unit increment at step {k}")));
            }
        }
        if let Some(k) = (0..self.d.len()).find(|&k| (self.d[k] + self.c[k]).rem_euclid(2) != 0) {
            return Err(Error::OutOfRange(format!("odd lattice point at step {k}")));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.len() + 2));
        out.push_str(TRAJECTORY_CSV_HEADER);
        out.push('\n');
        out.push_str("0,0,0,,\n");
        for k in 1..=self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                k,
                self.d[k],
                self.c[k],
                self.x.at(k).to_char(),
                self.y.at(k).to_char()
            );
        }
        out
    }

    /// Parses the CSV form and checks it is internally consistent (each row's
    /// increment matches its resolved symbol). Leading `#` lines are skipped.
    pub fn from_csv(csv: &str, meta: &TrajectoryMeta) -> Result<Trajectory> {
        let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
        if lines.next() != Some(TRAJECTORY_CSV_HEADER) {
            return Err(Error::Parse("missing trajectory header".into()));
        }
        let mut d = Vec::new();
        let mut c = Vec::new();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!("row {row}: expected 5 fields")));
            }
            let step: usize = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("row {row}: bad step")))?;
            if step != row {
                return Err(Error::Parse(format!("row {row}: step {step} out of sequence")));
            }
            let dv: i64 = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("row {row}: bad D")))?;
            let cv: i64 = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("row {row}: bad C")))?;
            if row == 0 {
                if !fields[3].is_empty() || !fields[4].is_empty() {
                    return Err(Error::Parse("row 0 carries symbols".into()));
                }
            } else {
                let one = |f: &str| -> Result<Symbol> {
                    let mut it = f.chars();
                    match (it.next().and_then(Symbol::from_char), it.next()) {
                        (Some(s), None) => Ok(s),
                        _ => Err(Error::Parse(format!("row {row}: bad symbol {f:?}"))),
                    }
                };
                let xs = one(fields[3])?;
                let ys = one(fields[4])?;
                let consistent = match xs {
                    Symbol::FlexOrder => matches!(ys, Symbol::CheeseOrder | Symbol::HamOrder),
                    s => s == ys,
                };
                if !consistent {
                    return Err(Error::Parse(format!("row {row}: {xs} cannot resolve to {ys}")));
                }
                let dy = ys.discrepancy_step().expect("resolved");
                if dv - d[row - 1] != dy || cv - c[row - 1] != ys.count_step() {
                    return Err(Error::Parse(format!("row {row}: increment does not match symbol")));
                }
                x.push(xs);
                y.push(ys);
            }
            d.push(dv);
            c.push(cv);
        }
        if d.is_empty() || d[0] != 0 || c[0] != 0 {
            return Err(Error::Parse("trajectory must start with row 0 at the origin".into()));
        }
        if x.len() != meta.n {
            return Err(Error::Parse(format!("{} steps but sidecar says {}", x.len(), meta.n)));
        }
        Ok(Trajectory {
            p: meta.p,
            seed: meta.seed,
            policy: meta.policy.clone(),
            d,
            c,
            x: Word::new(x),
            y: Word::new(y),
        })
    }
}

/// Runs `n` steps of the walk from the origin. Symbols come from the trial-0
/// stream of `seed`; an `IidFair` initial stack uses the independent
/// auxiliary stream.
pub fn simulate_trajectory(
    p: f64,
    n: usize,
    policy: &InitialStackPolicy,
    seed: u64,
) -> Result<Trajectory> {
    let params = MuParams::new(p)?;
    let mut sym_rng = rng::trial_stream(seed, 0);
    let mut inv = Inventory::new(policy, rng::aux_stream(seed, 0));
    let mut d = Vec::with_capacity(n + 1);
    let mut c = Vec::with_capacity(n + 1);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    d.push(0);
    c.push(0);
    for _ in 0..n {
        let s = params.sample(&mut sym_rng);
        let r = inv.step(s)?;
        let (dd, cc) = inv.position();
        d.push(dd);
        c.push(cc);
        x.push(s);
        y.push(r);
    }
    Ok(Trajectory {
        p,
        seed,
        policy: policy.clone(),
        d,
        c,
        x: Word::new(x),
        y: Word::new(y),
    })
}

/// `(D_n, C_n)` of trial `trial` without storing the path.
pub fn endpoint(
    params: &MuParams,
    n: usize,
    policy: &InitialStackPolicy,
    seed: u64,
    trial: u64,
) -> Result<(i64, i64)> {
    let mut sym_rng = rng::trial_stream(seed, trial);
    let mut inv = Inventory::new(policy, rng::aux_stream(seed, trial));
    for _ in 0..n {
        inv.step(params.sample(&mut sym_rng))?;
    }
    Ok(inv.position())
}

/// Gnuplot script drawing the path stored in the CSV file `csv_name`.
pub fn gnuplot_script(t: &Trajectory, csv_name: &str) -> String {
    format!(
        "# (D_n, C_n) for p = {p}, n = {n}, seed = {seed}\n\
         set datafile separator ','\n\
         set key off\n\
         set size ratio -1\n\
         set xlabel 'D'\n\
         set ylabel 'C'\n\
         plot '{csv_name}' every ::1 using 2:3 with lines lw 0.5\n",
        p = t.p,
        n = t.len(),
        seed = t.seed,
    )
}

/// Writes `<stem>.csv`, `<stem>.json` and a gnuplot script `<stem>.gp`.
pub fn write_trajectory_files(t: &Trajectory, stem: &std::path::Path) -> Result<()> {
    let csv = stem.with_extension("csv");
    std::fs::write(&csv, t.to_csv())?;
    std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(&t.meta())? + "\n")?;
    let name = csv
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let script = gnuplot_script(t, &name);
    std::fs::write(stem.with_extension("gp"), script)?;
    Ok(())
}

/// A finite stack drawn in the plane: the tip sits at `(D, C)` and each
/// burger below it hangs one unit lower, one unit to the right for a
/// cheeseburger and one unit to the left for a hamburger.
#[derive(Clone, Debug)]
pub struct EmbeddedStack {
    inv: Inventory,
}

impl EmbeddedStack {
    /// `burgers` is listed top first; the tip must lie on the even lattice.
    pub fn new(burgers: &[Burger], tip: (i64, i64)) -> Result<Self> {
        if (tip.0 + tip.1).rem_euclid(2) != 0 {
            return Err(Error::OutOfRange(format!("tip {tip:?} has odd coordinate sum")));
        }
        Ok(EmbeddedStack {
            inv: Inventory::explicit(burgers, tip),
        })
    }

    pub fn tip(&self) -> (i64, i64) {
        self.inv.position()
    }

    pub fn depth(&self) -> usize {
        self.inv.stack.len()
    }

    pub fn burgers(&self) -> Vec<Burger> {
        self.inv.stack.iter_top_down().collect()
    }

    pub fn step(&mut self, x: Symbol) -> Result<Symbol> {
        self.inv.step(x)
    }

    /// Horizontal coordinates of the path at heights `C, C-1, ...`.
    fn path_x(&self) -> impl Iterator<Item = i64> + '_ {
        let start = self.inv.d;
        std::iter::once(start).chain(self.inv.stack.iter_top_down().scan(start, |x, b| {
            *x += match b {
                Burger::Cheese => 1,
                Burger::Ham => -1,
            };
            Some(*x)
        }))
    }

    /// `self <= other`: tips at the same height and this path weakly left
    /// of the other at every height both paths reach.
    pub fn le(&self, other: &EmbeddedStack) -> bool {
        self.inv.c == other.inv.c && self.path_x().zip(other.path_x()).all(|(a, b)| a <= b)
    }

    /// Same as [`le`](Self::le) but only inspects the heights where either
    /// stack has changed since construction. Valid when both stacks were
    /// built comparable and have been driven by the same symbols.
    pub fn le_changed(&self, other: &EmbeddedStack) -> bool {
        let levels = self
            .inv
            .stack
            .live_at_or_above_touched()
            .max(other.inv.stack.live_at_or_above_touched())
            + 1;
        self.inv.c == other.inv.c
            && self
                .path_x()
                .zip(other.path_x())
                .take(levels + 1)
                .all(|(a, b)| a <= b)
    }
}

/// Applies `w` to a copy of `s`.
pub fn evolve_embedded(s: &EmbeddedStack, w: &Word) -> Result<EmbeddedStack> {
    let mut out = s.clone();
    for &x in w.symbols() {
        out.step(x)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Burger::{Cheese, Ham};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn extreme_p_never_emit_excluded_symbols() {
        let mut r = rng::trial_stream(1, 0);
        let zero = MuParams::new(0.0).unwrap();
        let one = MuParams::new(1.0).unwrap();
        for _ in 0..100_000 {
            assert_ne!(zero.sample(&mut r), Symbol::FlexOrder);
            let s = one.sample(&mut r);
            assert!(s != Symbol::CheeseOrder && s != Symbol::HamOrder);
        }
        assert!(MuParams::new(1.5).is_err());
        assert!(MuParams::new(f64::NAN).is_err());
    }

    #[test]
    fn zero_steps() {
        let t = simulate_trajectory(0.3, 0, &InitialStackPolicy::Alternating, 5).unwrap();
        assert_eq!(t.d, vec![0]);
        assert_eq!(t.c, vec![0]);
        t.check_invariants().unwrap();
    }

    #[test]
    fn alternating_stack_order() {
        let mut inv = Inventory::new(&InitialStackPolicy::Alternating, rng::aux_stream(0, 0));
        // top is a hamburger, then a cheeseburger
        assert_eq!(inv.step(Symbol::FlexOrder).unwrap(), Symbol::HamOrder);
        assert_eq!(inv.step(Symbol::FlexOrder).unwrap(), Symbol::CheeseOrder);
        assert_eq!(inv.position(), (0, -2));
    }

    #[test]
    fn explicit_underflow() {
        let policy = InitialStackPolicy::Explicit(vec![Ham]);
        let mut inv = Inventory::new(&policy, rng::aux_stream(0, 0));
        let err = inv.step(Symbol::CheeseOrder).unwrap_err();
        assert_eq!(err, Error::StackUnderflow { step: 1, symbol: 'C' });
        let mut inv = Inventory::new(&policy, rng::aux_stream(0, 0));
        assert_eq!(inv.step(Symbol::FlexOrder).unwrap(), Symbol::HamOrder);
        assert!(inv.step(Symbol::FlexOrder).is_err());
    }

    #[test]
    fn typed_order_digs_past_other_type() {
        let mut inv = Inventory::explicit(&[Ham, Ham, Cheese, Ham], (0, 0));
        inv.step(Symbol::CheeseOrder).unwrap();
        assert_eq!(inv.stack().iter_top_down().collect::<Vec<_>>(), vec![Ham, Ham, Ham]);
        assert_eq!(inv.position(), (1, -1));
    }

    #[test]
    fn embedded_identity_and_order() {
        let s = EmbeddedStack::new(&[Cheese, Ham, Cheese], (0, 0)).unwrap();
        let same = evolve_embedded(&s, &Word::empty()).unwrap();
        assert_eq!(same.burgers(), s.burgers());
        assert_eq!(same.tip(), s.tip());
        let right = EmbeddedStack::new(&[Cheese, Ham, Cheese], (2, 0)).unwrap();
        assert!(s.le(&right));
        assert!(!right.le(&s));
        assert!(EmbeddedStack::new(&[Cheese], (1, 0)).is_err());
        let moved = evolve_embedded(&s, &w("hC")).unwrap();
        assert_eq!(moved.burgers(), vec![Ham, Ham, Cheese]);
        assert_eq!(moved.tip(), (2, 0));
    }

    #[test]
    fn csv_roundtrip() {
        let t = simulate_trajectory(0.5, 200, &InitialStackPolicy::IidFair, 11).unwrap();
        let back = Trajectory::from_csv(&t.to_csv(), &t.meta()).unwrap();
        assert_eq!(back, t);
        assert!(Trajectory::from_csv("step,D,C,symbol,y_symbol\n0,0,0,,\n1,1,1,c,c\n", &t.meta()).is_err());
    }
}
