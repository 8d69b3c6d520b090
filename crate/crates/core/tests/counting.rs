use std::collections::{HashMap, HashSet};

use laplaza::finmap::FinMap;
use laplaza::gen::{enumerate_terms, nodes_of_size};
use laplaza::nf::{project_monoid, MonoidNF};
use laplaza::term::{act_f, is_linear, OperadElem, Signature, Term};

fn all_maps(m: usize, n: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    let mut table = vec![1; m];
    if m > 0 && n == 0 {
        return out;
    }
    loop {
        out.push(FinMap::new(n, table.clone()).unwrap());
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            table[k] += 1;
            if table[k] <= n {
                break;
            }
            table[k] = 1;
        }
    }
}

/// Non-decreasing sequences of length `m` over `1..=n`, listed one by one.
fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(n, m - 1) {
        let low = rest.last().copied().unwrap_or(1);
        for v in low..=n {
            let mut s = rest.clone();
            s.push(v);
            out.push(s);
        }
    }
    out
}

/// Words with exactly `m` variable leaves, reading `x1..xm` left to right,
/// with at most `zeros` extra nullary leaves.
fn linear_shapes(sig: &Signature, m: usize, zeros: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for size in 1..=(2 * (m + zeros)).saturating_sub(1).max(1) {
        for node in nodes_of_size(sig, 1, size) {
            let mut leaves = Vec::new();
            node.leaves(&mut leaves);
            if leaves.len() != m {
                continue;
            }
            let mut next = 0;
            let root = node.map_vars(&mut |_| {
                next += 1;
                next
            });
            out.push(Term::new(sig, m, root).unwrap());
        }
    }
    out
}

#[test]
fn realized_elements_match_the_multiset_count() {
    let sig = Signature::cmon();
    for m in 0..=6 {
        let shapes = linear_shapes(&sig, m, if m <= 3 { 1 } else { 0 });
        assert!(!shapes.is_empty());
        for n in 1..=6 {
            let mut realized: HashSet<MonoidNF> = HashSet::new();
            for u in &shapes {
                for f in all_maps(m, n) {
                    let w = act_f(u, &f).unwrap();
                    let p = project_monoid(&sig, &w).unwrap();
                    assert_eq!(p.total() as usize, m);
                    realized.insert(p);
                }
            }
            let expected: HashSet<MonoidNF> = multisets(n, m)
                .iter()
                .map(|s| MonoidNF::from_vars(n, s).unwrap())
                .collect();
            assert_eq!(realized.len(), expected.len(), "n = {n}, m = {m}");
            assert_eq!(realized, expected);
        }
    }
}

#[test]
fn multiset_oracle_matches_known_values() {
    assert_eq!(multisets(6, 6).len(), 462);
    assert_eq!(multisets(3, 2).len(), 6);
    assert_eq!(multisets(1, 5).len(), 1);
    assert_eq!(multisets(4, 0).len(), 1);
}

#[test]
fn canonical_map_from_the_operad_is_injective() {
    let sig = Signature::cmon();
    for n in 0..=5 {
        let mut image: HashMap<Term, OperadElem> = HashMap::new();
        let mut classes = 0;
        for m in 0..=3 {
            let linear: Vec<Term> = enumerate_terms(&sig, m, 2 * m + 1)
                .into_iter()
                .filter(is_linear)
                .collect();
            for u in &linear {
                for f in all_maps(m, n) {
                    let e = OperadElem::new(f, u.clone()).unwrap().canonical();
                    let t = e.to_term();
                    match image.get(&t) {
                        Some(prev) => assert_eq!(prev, &e, "two classes hit {t:?}"),
                        None => {
                            classes += 1;
                            image.insert(t, e);
                        }
                    }
                }
            }
        }
        assert_eq!(classes, image.len());
        assert!(n == 0 || classes > 1);
    }
}

#[test]
fn representatives_related_by_a_permutation_share_a_canonical_form() {
    let sig = Signature::cmon();
    let u = Term::parse(&sig, "(plus (plus x1 x2) x3)", Some(3)).unwrap();
    let f = FinMap::new(2, vec![2, 1, 2]).unwrap();
    for sigma in all_maps(3, 3).into_iter().filter(FinMap::is_bijection) {
        let moved = act_f(&u, &sigma).unwrap();
        let back = sigma.inverse().unwrap().then(&f).unwrap();
        let a = OperadElem::new(f.clone(), u.clone()).unwrap();
        let b = OperadElem::new(back, moved).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.to_term(), b.to_term());
    }
}
