//! The five-letter burger alphabet, words over it, and the canonical reduced
//! form of the semigroup generated by the four order-fulfillment relations
//! and the two commutativity relations.
//!
//! Text codec: `c h C H F` stand for cheeseburger, hamburger, cheeseburger
//! order, hamburger order and flexible order. A reduced word is written as
//! `<orders>|<burgers>`, e.g. `CCH|ch`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two burger types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Burger {
    Cheese,
    Ham,
}

impl Burger {
    pub const BOTH: [Burger; 2] = [Burger::Cheese, Burger::Ham];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Burger::Cheese => 0,
            Burger::Ham => 1,
        }
    }

    #[inline]
    pub fn other(self) -> Burger {
        match self {
            Burger::Cheese => Burger::Ham,
            Burger::Ham => Burger::Cheese,
        }
    }

    #[inline]
    pub fn symbol(self) -> Symbol {
        match self {
            Burger::Cheese => Symbol::CheeseBurger,
            Burger::Ham => Symbol::HamBurger,
        }
    }

    /// The order that asks for exactly this type.
    #[inline]
    pub fn order(self) -> Symbol {
        match self {
            Burger::Cheese => Symbol::CheeseOrder,
            Burger::Ham => Symbol::HamOrder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    CheeseBurger,
    HamBurger,
    CheeseOrder,
    HamOrder,
    FlexOrder,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [
        Symbol::CheeseBurger,
        Symbol::HamBurger,
        Symbol::CheeseOrder,
        Symbol::HamOrder,
        Symbol::FlexOrder,
    ];

    /// The alphabet without the flexible order.
    pub const FLEX_FREE: [Symbol; 4] = [
        Symbol::CheeseBurger,
        Symbol::HamBurger,
        Symbol::CheeseOrder,
        Symbol::HamOrder,
    ];

    #[inline]
    pub fn is_burger(self) -> bool {
        matches!(self, Symbol::CheeseBurger | Symbol::HamBurger)
    }

    #[inline]
    pub fn is_order(self) -> bool {
        !self.is_burger()
    }

    /// Burger type of a burger symbol.
    #[inline]
    pub fn burger(self) -> Option<Burger> {
        match self {
            Symbol::CheeseBurger => Some(Burger::Cheese),
            Symbol::HamBurger => Some(Burger::Ham),
            _ => None,
        }
    }

    /// The burger type a typed order asks for; `None` for burgers and `[F]`.
    #[inline]
    pub fn wants(self) -> Option<Burger> {
        match self {
            Symbol::CheeseOrder => Some(Burger::Cheese),
            Symbol::HamOrder => Some(Burger::Ham),
            _ => None,
        }
    }

    /// Whether an order symbol can be filled by burger `b`.
    #[inline]
    pub fn accepts(self, b: Burger) -> bool {
        match self {
            Symbol::FlexOrder => true,
            s => s.wants() == Some(b),
        }
    }

    #[inline]
    pub fn to_char(self) -> char {
        match self {
            Symbol::CheeseBurger => 'c',
            Symbol::HamBurger => 'h',
            Symbol::CheeseOrder => 'C',
            Symbol::HamOrder => 'H',
            Symbol::FlexOrder => 'F',
        }
    }

    pub fn from_char(ch: char) -> Option<Symbol> {
        Some(match ch {
            'c' => Symbol::CheeseBurger,
            'h' => Symbol::HamBurger,
            'C' => Symbol::CheeseOrder,
            'H' => Symbol::HamOrder,
            'F' => Symbol::FlexOrder,
            _ => return None,
        })
    }

    /// Net burger count contribution: +1 for burgers, -1 for orders.
    #[inline]
    pub fn count_step(self) -> i64 {
        if self.is_burger() {
            1
        } else {
            -1
        }
    }

    /// Discrepancy contribution (hamburgers over cheeseburgers). `None` for `[F]`.
    #[inline]
    pub fn discrepancy_step(self) -> Option<i64> {
        match self {
            Symbol::HamBurger | Symbol::CheeseOrder => Some(1),
            Symbol::CheeseBurger | Symbol::HamOrder => Some(-1),
            Symbol::FlexOrder => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite word. Positions are 1-based in the public accessors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> Symbol {
        assert!(i >= 1 && i <= self.0.len(), "position {i} out of 1..={}", self.0.len());
        self.0[i - 1]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The subword of 1-based positions `a..=b` (empty if `a > b`).
    pub fn slice(&self, a: usize, b: usize) -> Word {
        if a > b {
            return Word::empty();
        }
        Word(self.0[a - 1..b].to_vec())
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    pub fn contains_flex(&self) -> bool {
        self.0.contains(&Symbol::FlexOrder)
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.char_indices()
            .map(|(i, ch)| Symbol::from_char(ch).ok_or(Error::InvalidSymbol(ch, i)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Canonical representative: a list of orders followed by a list of burgers.
///
/// Burgers are listed in the order they were added, so the last element of
/// `burgers` is the top of the stack.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    orders: Vec<Symbol>,
    burgers: Vec<Burger>,
}

impl ReducedWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a reduced word from its two parts. Fails if `orders` contains a burger.
    pub fn from_parts(orders: Vec<Symbol>, burgers: Vec<Burger>) -> Result<Self> {
        if let Some(pos) = orders.iter().position(|s| s.is_burger()) {
            return Err(Error::MalformedReduced(format!(
                "burger in the order part at index {pos}"
            )));
        }
        Ok(ReducedWord { orders, burgers })
    }

    pub fn orders(&self) -> &[Symbol] {
        &self.orders
    }

    pub fn burgers(&self) -> &[Burger] {
        &self.burgers
    }

    pub fn len(&self) -> usize {
        self.orders.len() + self.burgers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty() && self.burgers.is_empty()
    }

    /// Flattened word: orders then burgers.
    pub fn to_word(&self) -> Word {
        let mut v = self.orders.clone();
        v.extend(self.burgers.iter().map(|b| b.symbol()));
        Word(v)
    }

    /// Right multiplication by one symbol.
    pub fn append(&mut self, s: Symbol) {
        match s.burger() {
            Some(b) => self.burgers.push(b),
            None => {
                let hit = self.burgers.iter().rposition(|&b| s.accepts(b));
                match hit {
                    Some(i) => {
                        self.burgers.remove(i);
                    }
                    None => self.orders.push(s),
                }
            }
        }
    }

    /// Left multiplication by one symbol.
    pub fn prepend(&mut self, s: Symbol) {
        match s.burger() {
            None => self.orders.insert(0, s),
            Some(b) => match self.orders.iter().position(|o| o.accepts(b)) {
                Some(i) => {
                    self.orders.remove(i);
                }
                None => self.burgers.insert(0, b),
            },
        }
    }

    pub fn appended(mut self, s: Symbol) -> Self {
        self.append(s);
        self
    }

    pub fn prepended(mut self, s: Symbol) -> Self {
        self.prepend(s);
        self
    }

    pub fn net_count(&self) -> i64 {
        self.burgers.len() as i64 - self.orders.len() as i64
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.orders {
            write!(f, "{}", s.to_char())?;
        }
        write!(f, "|")?;
        for b in &self.burgers {
            write!(f, "{}", b.symbol().to_char())?;
        }
        Ok(())
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bar = s
            .find('|')
            .ok_or_else(|| Error::MalformedReduced("missing '|' separator".into()))?;
        let (left, right) = (&s[..bar], &s[bar + 1..]);
        let mut orders = Vec::with_capacity(left.len());
        for (i, ch) in left.char_indices() {
            match Symbol::from_char(ch) {
                Some(sym) if sym.is_order() => orders.push(sym),
                Some(_) => {
                    return Err(Error::MalformedReduced(format!(
                        "burger {ch:?} left of the separator at byte {i}"
                    )))
                }
                None => return Err(Error::InvalidSymbol(ch, i)),
            }
        }
        let mut burgers = Vec::with_capacity(right.len());
        for (i, ch) in right.char_indices() {
            match Symbol::from_char(ch).and_then(Symbol::burger) {
                Some(b) => burgers.push(b),
                None => {
                    if Symbol::from_char(ch).is_some() {
                        return Err(Error::MalformedReduced(format!(
                            "order {ch:?} right of the separator at byte {}",
                            bar + 1 + i
                        )));
                    }
                    return Err(Error::InvalidSymbol(ch, bar + 1 + i));
                }
            }
        }
        Ok(ReducedWord { orders, burgers })
    }
}

/// Reduced form, built by right-multiplying one symbol at a time.
pub fn reduce(w: &Word) -> ReducedWord {
    let mut r = ReducedWord::empty();
    for &s in w.symbols() {
        r.append(s);
    }
    r
}

/// `reduce(r · s)`.
pub fn append(r: &ReducedWord, s: Symbol) -> ReducedWord {
    r.clone().appended(s)
}

/// `reduce(s · r)`.
pub fn prepend(s: Symbol, r: &ReducedWord) -> ReducedWord {
    r.clone().prepended(s)
}

/// Burgers minus orders.
pub fn net_count_c(w: &Word) -> i64 {
    w.symbols().iter().map(|s| s.count_step()).sum()
}

/// `#{h, C} - #{c, H}`; undefined (an error) if the word has a flexible order.
pub fn discrepancy_d(w: &Word) -> Result<i64> {
    let mut d = 0;
    for (i, s) in w.symbols().iter().enumerate() {
        d += s.discrepancy_step().ok_or(Error::FlexibleInDiscrepancy(i + 1))?;
    }
    Ok(d)
}

/// Both counts; the discrepancy is `None` when it is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub net_burger_count: i64,
    pub discrepancy: Option<i64>,
}

pub fn counts(w: &Word) -> Counts {
    Counts {
        net_burger_count: net_count_c(w),
        discrepancy: discrepancy_d(w).ok(),
    }
}

pub fn is_balanced(w: &Word) -> bool {
    reduce(w).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn r(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn worked_forward_example() {
        assert_eq!(reduce(&w("chCCFCcHh")), r("CCH|ch"));
        assert_eq!(reduce(&Word::empty()), ReducedWord::empty());
    }

    #[test]
    fn relations() {
        assert_eq!(reduce(&w("cH")), r("H|c"));
        assert_eq!(reduce(&w("hC")), r("C|h"));
        for s in ["cC", "hH", "cF", "hF"] {
            assert!(reduce(&w(s)).is_empty(), "{s}");
        }
    }

    #[test]
    fn append_and_prepend_examples() {
        assert_eq!(append(&r("C|h"), Symbol::FlexOrder), r("C|"));
        assert_eq!(append(&r("|"), Symbol::CheeseBurger), r("|c"));
        assert_eq!(append(&r("C|"), Symbol::CheeseOrder), r("CC|"));
        assert_eq!(prepend(Symbol::CheeseBurger, &r("C|hh")), r("|hh"));
        assert_eq!(prepend(Symbol::HamBurger, &r("CF|hh")), r("C|hh"));
        assert_eq!(prepend(Symbol::HamOrder, &r("|")), r("H|"));
    }

    #[test]
    fn counts_examples() {
        assert_eq!(net_count_c(&w("c")), 1);
        assert_eq!(net_count_c(&w("FF")), -2);
        assert_eq!(net_count_c(&w("hFcC")), 0);
        assert_eq!(discrepancy_d(&w("h")), Ok(1));
        assert_eq!(discrepancy_d(&w("C")), Ok(1));
        assert_eq!(discrepancy_d(&w("hH")), Ok(0));
        assert_eq!(discrepancy_d(&w("ccHH")), Ok(-4));
        assert_eq!(discrepancy_d(&w("cF")), Err(Error::FlexibleInDiscrepancy(2)));
    }

    #[test]
    fn codec_rejects_garbage() {
        assert!(matches!("cx".parse::<Word>(), Err(Error::InvalidSymbol('x', 1))));
        assert!("Cc".parse::<ReducedWord>().is_err());
        assert!("c|".parse::<ReducedWord>().is_err());
        assert!("|C".parse::<ReducedWord>().is_err());
        assert_eq!("|".parse::<ReducedWord>().unwrap(), ReducedWord::empty());
    }
}
