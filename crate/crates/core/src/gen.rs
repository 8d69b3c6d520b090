//! Enumeration and random generation of free words, shared by the sweeps and
//! the test suites.

use rand::Rng;

use crate::term::{Node, Op, Signature, Term};

/// All trees of exactly `size` nodes over `x1..x_arity` and the generators.
pub fn nodes_of_size(sig: &Signature, arity: usize, size: usize) -> Vec<Node> {
    let mut table: Vec<Vec<Node>> = vec![Vec::new(); size + 1];
    for s in 1..=size {
        let mut out = Vec::new();
        if s == 1 {
            out.extend((1..=arity).map(Node::Var));
        }
        for op in sig.ops() {
            let r = sig.arity(op);
            if r == 0 {
                if s == 1 {
                    out.push(Node::App(op, vec![]));
                }
                continue;
            }
            if s < 1 + r {
                continue;
            }
            for split in compositions(s - 1, r) {
                product_into(&table, op, &split, &mut out);
            }
        }
        table[s] = out;
    }
    std::mem::take(&mut table[size])
}

fn product_into(table: &[Vec<Node>], op: Op, split: &[usize], out: &mut Vec<Node>) {
    let mut idx = vec![0usize; split.len()];
    if split.iter().any(|&s| table[s].is_empty()) {
        return;
    }
    loop {
        out.push(Node::App(
            op,
            idx.iter()
                .zip(split)
                .map(|(&i, &s)| table[s][i].clone())
                .collect(),
        ));
        let mut k = split.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < table[split[k]].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Ordered ways to write `total` as a sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All words of size at most `max_size`, smallest first.
pub fn enumerate_terms(sig: &Signature, arity: usize, max_size: usize) -> Vec<Term> {
    (1..=max_size)
        .flat_map(|s| nodes_of_size(sig, arity, s))
        .map(|n| Term::from_parts(arity, n))
        .collect()
}

/// A random word with at most `max_size` nodes. Signatures without nullary
/// generators need `arity ≥ 1`.
pub fn random_term<R: Rng + ?Sized>(
    sig: &Signature,
    arity: usize,
    max_size: usize,
    rng: &mut R,
) -> Term {
    let root = random_node(sig, arity, max_size.max(1), rng);
    Term::from_parts(arity, root)
}

pub fn random_node<R: Rng + ?Sized>(
    sig: &Signature,
    arity: usize,
    budget: usize,
    rng: &mut R,
) -> Node {
    let nullary: Vec<Op> = sig.ops().filter(|&op| sig.arity(op) == 0).collect();
    let compound: Vec<Op> = sig
        .ops()
        .filter(|&op| sig.arity(op) > 0 && sig.arity(op) < budget)
        .collect();
    let leaf_count = arity + nullary.len();
    assert!(leaf_count > 0, "no leaves available");
    if compound.is_empty() || rng.gen_bool(0.3) {
        let k = rng.gen_range(0..leaf_count);
        return if k < arity {
            Node::Var(k + 1)
        } else {
            Node::App(nullary[k - arity], vec![])
        };
    }
    let op = compound[rng.gen_range(0..compound.len())];
    let r = sig.arity(op);
    let mut remaining = budget - 1;
    let mut args = Vec::with_capacity(r);
    for i in 0..r {
        let reserve = r - i - 1;
        let share = if i + 1 == r {
            remaining
        } else {
            rng.gen_range(1..=(remaining - reserve).max(1))
        };
        let child = random_node(sig, arity, share, rng);
        remaining -= child.size();
        args.push(child);
    }
    Node::App(op, args)
}
