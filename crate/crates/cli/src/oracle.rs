//! Brute-force reference computations the self-test compares against.

use std::collections::BTreeSet;

use laplaza::finmap::FinMap;
use laplaza::gen::nodes_of_size;
use laplaza::term::{Signature, Term};
use laplaza::two_theory::cobordism::{Cobordism, Component};

/// Every map `{1..m} -> {1..n}`, in lexicographic order of tables.
pub fn all_maps(m: usize, n: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    if m > 0 && n == 0 {
        return out;
    }
    let mut table = vec![1; m];
    loop {
        out.push(FinMap::new(n, table.clone()).expect("entries stay in range"));
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
pub fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
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
pub fn linear_shapes(sig: &Signature, m: usize, zeros: usize) -> Vec<Term> {
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
            out.push(Term::new(sig, m, root).expect("leaves renumbered within arity"));
        }
    }
    out
}

/// A glued component: inbound labels, outbound labels and genus.
pub type Piece = (BTreeSet<String>, BTreeSet<String>, u32);

fn boundary(c: &Component) -> usize {
    c.inbound.len() + c.outbound.len()
}

/// Components of a self-gluing, each as `(inbound, outbound, genus)`, found
/// by a union of the glued pieces and their Euler characteristics. `None`
/// when a label is missing or the Euler count is inconsistent.
pub fn euler_glue(x: &Cobordism, labels: &[String]) -> Option<Vec<Piece>> {
    let comps = x.components();
    let n = comps.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut glued_in = vec![0usize; n];
    for l in labels {
        let i = comps.iter().position(|c| c.inbound.contains(l))?;
        let o = comps.iter().position(|c| c.outbound.contains(l))?;
        adj[i].push(o);
        adj[o].push(i);
        glued_in[i] += 1;
    }
    let glued: BTreeSet<&String> = labels.iter().collect();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut group = Vec::new();
        while let Some(v) = stack.pop() {
            group.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let chi: i64 = group
            .iter()
            .map(|&k| 2 - 2 * i64::from(comps[k].genus) - boundary(&comps[k]) as i64)
            .sum();
        let gluings: usize = group.iter().map(|&k| glued_in[k]).sum();
        let b = group.iter().map(|&k| boundary(&comps[k])).sum::<usize>() - 2 * gluings;
        let twice_genus = 2 - chi - b as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return None;
        }
        let side = |pick: fn(&Component) -> &BTreeSet<String>| -> BTreeSet<String> {
            group
                .iter()
                .flat_map(|&k| pick(&comps[k]).iter())
                .filter(|l| !glued.contains(l))
                .cloned()
                .collect()
        };
        out.push((
            side(|c| &c.inbound),
            side(|c| &c.outbound),
            (twice_genus / 2) as u32,
        ));
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts_are_binomials() {
        assert_eq!(multisets(6, 6).len(), 462);
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(1, 5).len(), 1);
        assert_eq!(multisets(4, 0).len(), 1);
    }

    #[test]
    fn map_counts_are_powers() {
        assert_eq!(all_maps(3, 4).len(), 64);
        assert_eq!(all_maps(0, 0).len(), 1);
        assert!(all_maps(2, 0).is_empty());
    }

    #[test]
    fn gluing_a_cylinder_to_itself_closes_a_torus() {
        let cyl: Cobordism = serde_json::from_str(
            r#"{"inbound":["a"],"outbound":["a"],"components":[{"in":["a"],"out":["a"],"genus":0}]}"#,
        )
        .unwrap();
        let got = euler_glue(&cyl, &["a".to_string()]).unwrap();
        assert_eq!(got, vec![(BTreeSet::new(), BTreeSet::new(), 1)]);
    }
}
