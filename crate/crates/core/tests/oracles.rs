use std::collections::HashMap;

use fkburger::fk_sampler::{exact_enumerate, q_from_p, sample_many};
use fkburger::rng::trial_stream;
use fkburger::semigroup::{reduce, Symbol, Word};
use fkburger::stack_sim::{simulate_trajectory, InitialStackPolicy, MuParams};
use fkburger::statistics::reduced_length;

/// Plain vector stack (bottom first) preloaded with an alternating stack,
/// hamburger on top, deep enough for `n` steps.
fn naive_walk(x: &Word) -> (Vec<i64>, Vec<i64>) {
    let n = x.len();
    let mut stack: Vec<Symbol> = (0..=n)
        .map(|depth| if depth % 2 == 0 { Symbol::HamBurger } else { Symbol::CheeseBurger })
        .rev()
        .collect();
    let (mut d, mut c) = (vec![0i64], vec![0i64]);
    for &s in x.symbols() {
        let y = match s {
            Symbol::CheeseBurger | Symbol::HamBurger => {
                stack.push(s);
                s
            }
            Symbol::FlexOrder => match stack.pop().unwrap() {
                Symbol::HamBurger => Symbol::HamOrder,
                _ => Symbol::CheeseOrder,
            },
            typed => {
                let want = if typed == Symbol::HamOrder { Symbol::HamBurger } else { Symbol::CheeseBurger };
                let i = stack.iter().rposition(|&b| b == want).unwrap();
                stack.remove(i);
                typed
            }
        };
        let dd = match y {
            Symbol::HamBurger | Symbol::CheeseOrder => 1,
            _ => -1,
        };
        let cc = if y.is_burger() { 1 } else { -1 };
        d.push(d.last().unwrap() + dd);
        c.push(c.last().unwrap() + cc);
    }
    (d, c)
}

#[test]
fn trajectories_match_a_naive_stack() {
    for (k, p) in [0.0, 0.3, 0.5, 0.8, 1.0].into_iter().enumerate() {
        let t = simulate_trajectory(p, 3000, &InitialStackPolicy::Alternating, 100 + k as u64).unwrap();
        t.check_invariants().unwrap();
        let (d, c) = naive_walk(&t.x);
        assert_eq!(t.d, d, "p = {p}");
        assert_eq!(t.c, c, "p = {p}");
        assert!(t.y.symbols().iter().all(|&s| s != Symbol::FlexOrder));
    }
}

#[test]
fn trajectories_are_reproducible() {
    for policy in [InitialStackPolicy::Alternating, InitialStackPolicy::IidFair] {
        let a = simulate_trajectory(0.6, 2000, &policy, 5).unwrap();
        assert_eq!(a, simulate_trajectory(0.6, 2000, &policy, 5).unwrap());
        assert_ne!(a.x, simulate_trajectory(0.6, 2000, &policy, 6).unwrap().x);
        a.check_invariants().unwrap();
    }
}

#[test]
fn flex_free_reduced_length_is_two_independent_reflections() {
    // at p = 0 each burger type is its own bracket sequence: the unmatched
    // part of a +-1 walk S is S(n) - 2 min S
    let params = MuParams::new(0.0).unwrap();
    for trial in 0..50 {
        let n = 500 + 37 * trial as usize;
        let x = params.sample_word(&mut trial_stream(9, trial), n);
        let mut expect = 0i64;
        for (burger, order) in [(Symbol::CheeseBurger, Symbol::CheeseOrder), (Symbol::HamBurger, Symbol::HamOrder)] {
            let (mut s, mut lo) = (0i64, 0i64);
            for &sym in x.symbols() {
                if sym == burger {
                    s += 1;
                } else if sym == order {
                    s -= 1;
                }
                lo = lo.min(s);
            }
            expect += s - 2 * lo;
        }
        assert_eq!(reduced_length(&params, n, 9, trial) as i64, expect);
        assert_eq!(reduce(&x).len() as i64, expect);
    }
}

/// All words of length `len`, first symbol varying fastest.
fn all_words(len: usize) -> impl Iterator<Item = Word> {
    (0..5usize.pow(len as u32)).map(move |mut code| {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(Symbol::ALL[code % 5]);
            code /= 5;
        }
        Word::new(v)
    })
}

#[test]
fn exact_law_is_the_conditioned_product_law() {
    for p in [0.1, 0.4, 0.7] {
        let params = MuParams::new(p).unwrap();
        let q = q_from_p(p).unwrap();
        for n in 1..=3 {
            let mut weights: HashMap<Word, f64> = HashMap::new();
            for x in all_words(2 * n).filter(|x| reduce(x).is_empty()) {
                let w: f64 = x.symbols().iter().map(|&s| params.probability(s)).product();
                weights.insert(x, w);
            }
            let total: f64 = weights.values().sum();
            let rows = exact_enumerate(n, q).unwrap();
            assert_eq!(rows.len(), weights.len());
            for r in rows {
                let want = weights[&r.word] / total;
                assert!((r.probability - want).abs() < 1e-12, "{} at p={p}: {} vs {want}", r.word, r.probability);
            }
        }
    }
}

#[test]
fn single_pair_sampler_at_p_zero_is_uniform_on_two_words() {
    let samples = sample_many(0.0, 1, 4000, 31, 1_000_000).unwrap();
    let hams = samples.iter().filter(|s| s.word.to_string() == "hH").count();
    let cheeses = samples.iter().filter(|s| s.word.to_string() == "cC").count();
    assert_eq!(hams + cheeses, 4000);
    // binomial(4000, 1/2): sd = 31.6
    assert!((hams as i64 - 2000).abs() < 130, "{hams}");
    assert!(samples.iter().all(|s| s.loop_count == 1));
}
