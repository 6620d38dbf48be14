use std::collections::HashSet;

use fkburger::fk_sampler::balanced_words;
use fkburger::matching::compute_matching;
use fkburger::planar_map::{
    canonical_form, d_walk, extract_loops, map_to_tree_pair, map_to_word, quadrangulation,
    word_to_map, word_to_tree_pair,
};
use fkburger::semigroup::{reduce, Symbol, Word};

/// Every word of length `len` over `alphabet`, in odometer order.
fn all_words(alphabet: &[Symbol], len: usize) -> impl Iterator<Item = Word> + '_ {
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

fn brute_balanced(n: usize) -> Vec<Word> {
    all_words(&Symbol::ALL, 2 * n)
        .filter(|w| reduce(w).is_empty())
        .collect()
}

struct Tally {
    h_to_h: usize,
    c_to_c: usize,
    f_to_c: usize,
    f_to_h: usize,
}

fn tally(w: &Word) -> Tally {
    let m = compute_matching(w);
    let mut t = Tally { h_to_h: 0, c_to_c: 0, f_to_c: 0, f_to_h: 0 };
    for (b, o) in m.pairs() {
        match (w.at(b), w.at(o)) {
            (Symbol::HamBurger, Symbol::HamOrder) => t.h_to_h += 1,
            (Symbol::CheeseBurger, Symbol::CheeseOrder) => t.c_to_c += 1,
            (Symbol::CheeseBurger, Symbol::FlexOrder) => t.f_to_c += 1,
            (Symbol::HamBurger, Symbol::FlexOrder) => t.f_to_h += 1,
            other => panic!("impossible match {other:?}"),
        }
    }
    t
}

#[test]
fn enumerator_matches_brute_force() {
    for n in 1..=3 {
        let fast: HashSet<Word> = balanced_words(n).into_iter().collect();
        let slow: HashSet<Word> = brute_balanced(n).into_iter().collect();
        assert_eq!(fast, slow, "n = {n}");
    }
    let counts: Vec<usize> = (1..=4).map(|n| balanced_words(n).len()).collect();
    assert_eq!(counts, [4, 36, 432, 6048]);
}

#[test]
fn exhaustive_round_trip_and_table() {
    for n in 1..=4 {
        let mut forms = HashSet::new();
        for w in balanced_words(n) {
            let (m, t, pair) = word_to_tree_pair(&w).unwrap();
            assert_eq!(map_to_word(&m, &t).unwrap(), w);
            assert_eq!(map_to_tree_pair(&m, &t).unwrap(), pair, "{w}");
            assert!(pair.is_valid(&m), "{w}");
            assert!(forms.insert(canonical_form(&m, &t)), "{w}");

            let loops = extract_loops(&m, &t);
            assert!(loops.covers_each_corner_once(m.half_edge_count()));
            let f = w.count(Symbol::FlexOrder);
            assert_eq!(loops.len(), 1 + f, "{w}");
            assert_eq!(pair.tree.edge_count(), w.count(Symbol::HamBurger));
            assert_eq!(pair.dual_tree().edge_count(), w.count(Symbol::CheeseBurger));
            let k = tally(&w);
            assert_eq!(t.edge_count(), k.h_to_h + k.f_to_c);
            assert_eq!(m.edge_count() - t.edge_count(), k.c_to_c + k.f_to_h);
            // Components on the spanning subgraphs: an [F] taking a
            // cheeseburger closes a cycle in T and so splits T'.
            assert_eq!(t.components_spanning(&m), 1 + k.f_to_h, "{w}");
            assert_eq!(t.dual_complement().components_spanning(&m.dual()), 1 + k.f_to_c, "{w}");

            let q = quadrangulation(&m);
            assert!(q.is_bipartite() && q.all_faces_quadrilateral());
            assert_eq!(q.map.edge_count(), 2 * m.edge_count());
        }
    }
}

#[test]
fn table_component_rows_as_printed_fail_under_both_conventions() {
    // The printed rows pair T with [F]s matched to cheeseburgers; the n = 1
    // word cF already contradicts that under either counting.
    let w: Word = "cF".parse().unwrap();
    let (m, t) = word_to_map(&w).unwrap();
    assert_eq!(t.components_spanning(&m), 1);
    assert_eq!(t.components_edge_induced(&m), 1);
    let k = tally(&w);
    assert_eq!(1 + k.f_to_c, 2);
}

#[test]
fn reverse_round_trip_up_to_isomorphism() {
    for n in 1..=3 {
        for w in balanced_words(n) {
            let (m, t) = word_to_map(&w).unwrap();
            let n_half = m.half_edge_count();
            // a fixed scramble of labels
            let perm: Vec<usize> = (0..n_half).map(|h| (h * 7 + 3) % n_half).collect();
            if perm.iter().collect::<HashSet<_>>().len() != n_half {
                continue;
            }
            let m2 = m.relabel(&perm).unwrap();
            let mut flags = vec![false; n_half];
            for h in 0..n_half {
                flags[perm[h]] = t.contains(h);
            }
            let t2 = fkburger::planar_map::EdgeSubset::from_flags(&m2, flags).unwrap();
            let w2 = map_to_word(&m2, &t2).unwrap();
            assert_eq!(w2, w);
            let (m3, t3) = word_to_map(&w2).unwrap();
            assert_eq!(canonical_form(&m3, &t3), canonical_form(&m2, &t2));
        }
    }
}

#[test]
fn flex_free_words_give_spanning_trees_and_quarter_plane_walks() {
    for n in 1..=4 {
        for w in all_words(&Symbol::FLEX_FREE, 2 * n).filter(|w| reduce(w).is_empty()) {
            let (m, t, pair) = word_to_tree_pair(&w).unwrap();
            assert!(t.is_spanning_tree(&m));
            assert_eq!(extract_loops(&m, &t).len(), 1);
            let walk = d_walk(&m, &pair);
            let mut h = 0i64;
            let mut c = 0i64;
            let mut expect = vec![(0usize, 0usize)];
            for &s in w.symbols() {
                match s {
                    Symbol::HamBurger => h += 1,
                    Symbol::HamOrder => h -= 1,
                    Symbol::CheeseBurger => c += 1,
                    Symbol::CheeseOrder => c -= 1,
                    Symbol::FlexOrder => unreachable!(),
                }
                expect.push((h as usize, c as usize));
            }
            assert_eq!(walk, expect, "{w}");
        }
    }
}

#[test]
fn sixteen_edge_spanning_tree_word() {
    let w: Word = "ccchchhChCCCccHhChCccHcHHCCHhHHC".parse().unwrap();
    assert_eq!(w.len(), 32);
    let (m, t, pair) = word_to_tree_pair(&w).unwrap();
    assert_eq!(m.edge_count(), 16);
    assert!(t.is_spanning_tree(&m));
    let walk = d_walk(&m, &pair);
    assert_eq!(walk.first(), Some(&(0, 0)));
    assert_eq!(walk.last(), Some(&(0, 0)));
    for s in walk.windows(2) {
        let dx = s[0].0 as i64 - s[1].0 as i64;
        let dy = s[0].1 as i64 - s[1].1 as i64;
        assert_eq!(dx.abs() + dy.abs(), 1);
    }
}
