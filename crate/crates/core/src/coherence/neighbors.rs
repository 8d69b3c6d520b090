use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::gen::nodes_of_size;
use crate::nf::{LaplazaSpec, Projection};
use crate::term::{Node, Signature, Term, Theory};

use super::{Caps, CoherencePath, CoherenceStep};

type Bucket = HashMap<Projection, Vec<Node>>;

/// Pattern words grouped by projection, per (variable count, size). Filled
/// lazily; lookups behave as if every bucket were precomputed.
#[derive(Debug)]
pub struct PatternCache {
    sig: Signature,
    buckets: Mutex<HashMap<(usize, usize), Arc<Bucket>>>,
}

impl PatternCache {
    pub fn new(sig: Signature) -> Self {
        PatternCache {
            sig,
            buckets: Mutex::new(HashMap::new()),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    fn bucket(&self, nvars: usize, size: usize) -> Arc<Bucket> {
        if let Some(b) = self.buckets.lock().expect("cache lock").get(&(nvars, size)) {
            return Arc::clone(b);
        }
        let mut bucket: Bucket = HashMap::new();
        for node in nodes_of_size(&self.sig, nvars, size) {
            let p = Projection::of_node(&self.sig, nvars, &node);
            bucket.entry(p).or_default().push(node);
        }
        let bucket = Arc::new(bucket);
        self.buckets
            .lock()
            .expect("cache lock")
            .entry((nvars, size))
            .or_insert(bucket)
            .clone()
    }
}

/// A subtree split into a pattern and the pieces plugged into it. Pattern
/// variable `i` stands for `pieces[i - 1]`, in leaf order.
type Cut = (Node, Vec<Node>);

fn cuts(node: &Node) -> Vec<Cut> {
    match node {
        Node::Var(_) => vec![(Node::Var(1), vec![node.clone()])],
        Node::App(op, args) if args.is_empty() => vec![(Node::App(*op, vec![]), vec![])],
        Node::App(op, args) => {
            let mut out = vec![(Node::Var(1), vec![node.clone()])];
            let mut partial: Vec<(Vec<Node>, Vec<Node>)> = vec![(Vec::new(), Vec::new())];
            for a in args {
                let sub = cuts(a);
                let mut next = Vec::with_capacity(partial.len() * sub.len());
                for (pats, pieces) in &partial {
                    for (pat, more) in &sub {
                        let offset = pieces.len();
                        let mut pats = pats.clone();
                        pats.push(pat.map_vars(&mut |i| i + offset));
                        let mut pieces = pieces.clone();
                        pieces.extend(more.iter().cloned());
                        next.push((pats, pieces));
                    }
                }
                partial = next;
            }
            out.extend(
                partial
                    .into_iter()
                    .map(|(pats, pieces)| (Node::App(*op, pats), pieces)),
            );
            out
        }
    }
}

/// Every way of sharing pattern variables between equal pieces, as
/// restricted-growth labelings (block numbers are 1-based).
fn sharings(pieces: &[Node]) -> Vec<Vec<usize>> {
    fn go(pieces: &[Node], cur: &mut Vec<usize>, reps: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == pieces.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..reps.len() {
            if pieces[reps[b]] == pieces[i] {
                cur.push(b + 1);
                go(pieces, cur, reps, out);
                cur.pop();
            }
        }
        reps.push(i);
        cur.push(reps.len());
        go(pieces, cur, reps, out);
        cur.pop();
        reps.pop();
    }
    let mut out = Vec::new();
    go(pieces, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn uses_var(node: &Node, var: usize) -> bool {
    match node {
        Node::Var(i) => *i == var,
        Node::App(_, args) => args.iter().any(|a| uses_var(a, var)),
    }
}

/// All single generator steps out of `object` whose result has at most
/// `size_cap` nodes, sorted by result and then by step.
///
/// In signatures with an absorbing element a step may drop or introduce
/// pieces; those pieces are restricted to bare variables, so that the
/// relation stays symmetric.
pub fn rewrite_neighbors(
    cache: &PatternCache,
    spec: LaplazaSpec,
    object: &Term,
    size_cap: usize,
) -> Result<Vec<(CoherenceStep, Term)>> {
    let sig = &cache.sig;
    spec.check_compatible(sig)?;
    let root = object.root();
    let total = root.size();
    let absorbing = sig.theory() == Some(Theory::Csr);
    let mut out = Vec::new();
    for position in root.positions() {
        let sub = root.at(&position).expect("own position");
        let room = match (size_cap + sub.size()).checked_sub(total) {
            Some(r) if r > 0 => r,
            _ => continue,
        };
        for (shape, pieces) in cuts(sub) {
            for labels in sharings(&pieces) {
                let nblocks = labels.iter().copied().max().unwrap_or(0);
                let mut pattern_pieces: Vec<Node> = vec![Node::Var(0); nblocks];
                for (piece, &b) in pieces.iter().zip(&labels) {
                    pattern_pieces[b - 1] = piece.clone();
                }
                if absorbing {
                    for i in 1..=object.arity() {
                        if !pieces.contains(&Node::Var(i)) {
                            pattern_pieces.push(Node::Var(i));
                        }
                    }
                }
                let k = pattern_pieces.len();
                let before = shape.map_vars(&mut |i| labels[i - 1]);
                let proj = Projection::of_node(sig, k, &before);
                if !proj.in_laplaza(spec) {
                    continue;
                }
                let compound: Vec<usize> = (1..=k)
                    .filter(|&j| !matches!(pattern_pieces[j - 1], Node::Var(_)))
                    .collect();
                for size in 1..=room {
                    let bucket = cache.bucket(k, size);
                    let Some(candidates) = bucket.get(&proj) else {
                        continue;
                    };
                    for after in candidates {
                        if *after == before {
                            continue;
                        }
                        if absorbing && !compound.iter().all(|&j| uses_var(after, j)) {
                            continue;
                        }
                        let step = CoherenceStep {
                            position: position.clone(),
                            before: before.clone(),
                            after: after.clone(),
                            pieces: pattern_pieces.clone(),
                        };
                        let result = step.apply_unchecked(root);
                        if result.size() <= size_cap {
                            out.push((step, Term::from_parts(object.arity(), result)));
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out.dedup();
    Ok(out)
}

/// Outcome of a bounded path search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSearch {
    Found(CoherencePath),
    /// The projections differ, so no path exists at any bound.
    Absent,
    /// Every object within the size cap was visited without reaching the
    /// target; a path through larger objects is not excluded.
    Exhausted {
        explored: usize,
    },
    /// The depth or state cap stopped the search.
    CapExhausted {
        explored: usize,
    },
}

/// Breadth-first search for a coherence path from `a` to `b`; the path
/// found is shortest, ties broken by the order of [`rewrite_neighbors`].
pub fn find_path(
    cache: &PatternCache,
    spec: LaplazaSpec,
    a: &Term,
    b: &Term,
    caps: Caps,
) -> Result<PathSearch> {
    let sig = &cache.sig;
    spec.check_compatible(sig)?;
    if a.arity() != b.arity() {
        return Err(Error::Arity(format!(
            "objects have arities {} and {}",
            a.arity(),
            b.arity()
        )));
    }
    if Projection::of(sig, a) != Projection::of(sig, b) {
        return Ok(PathSearch::Absent);
    }
    if a == b {
        return Ok(PathSearch::Found(CoherencePath::identity(a.clone())));
    }
    let size_cap = caps.size.max(a.size()).max(b.size());
    let mut parent: HashMap<Term, (Term, CoherenceStep)> = HashMap::new();
    let mut seen: HashSet<Term> = HashSet::from([a.clone()]);
    let mut frontier = VecDeque::from([(a.clone(), 0usize)]);
    let mut truncated = false;
    while let Some((cur, depth)) = frontier.pop_front() {
        if depth == caps.depth {
            truncated = true;
            continue;
        }
        for (step, next) in rewrite_neighbors(cache, spec, &cur, size_cap)? {
            if !seen.insert(next.clone()) {
                continue;
            }
            parent.insert(next.clone(), (cur.clone(), step));
            if next == *b {
                let mut steps = Vec::new();
                let mut at = b.clone();
                while let Some((prev, step)) = parent.get(&at) {
                    steps.push(step.clone());
                    at = prev.clone();
                }
                steps.reverse();
                return Ok(PathSearch::Found(CoherencePath::from_parts(
                    a.clone(),
                    b.clone(),
                    steps,
                )));
            }
            if seen.len() > caps.states {
                return Ok(PathSearch::CapExhausted {
                    explored: seen.len(),
                });
            }
            frontier.push_back((next, depth + 1));
        }
    }
    Ok(if truncated {
        PathSearch::CapExhausted {
            explored: seen.len(),
        }
    } else {
        PathSearch::Exhausted {
            explored: seen.len(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(sig: &Signature, s: &str, n: usize) -> Term {
        Term::parse(sig, s, Some(n)).unwrap()
    }

    #[test]
    fn commutativity_is_a_neighbor() {
        let sig = Signature::cmon();
        let cache = PatternCache::new(sig.clone());
        let a = t(&sig, "(plus x1 x2)", 2);
        let ns = rewrite_neighbors(&cache, LaplazaSpec::Operadic, &a, 3).unwrap();
        let results: Vec<_> = ns.iter().map(|(_, b)| b.clone()).collect();
        assert!(results.contains(&t(&sig, "(plus x2 x1)", 2)));
        for (s, b) in &ns {
            assert_eq!(&s.apply(&sig, LaplazaSpec::Operadic, &a).unwrap(), b);
        }
    }

    #[test]
    fn atomic_object_has_no_neighbors_at_its_own_size() {
        let sig = Signature::cmon();
        let cache = PatternCache::new(sig.clone());
        let a = t(&sig, "x1", 1);
        assert!(rewrite_neighbors(&cache, LaplazaSpec::Operadic, &a, 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        for (sig, spec, n) in [
            (Signature::cmon(), LaplazaSpec::Operadic, 3),
            (Signature::cmon(), LaplazaSpec::Full, 2),
            (Signature::csr(), LaplazaSpec::LaplazaSemiring, 2),
        ] {
            let cache = PatternCache::new(sig.clone());
            for a in crate::gen::enumerate_terms(&sig, n, 5) {
                for (_, b) in rewrite_neighbors(&cache, spec, &a, 5).unwrap() {
                    let back = rewrite_neighbors(&cache, spec, &b, 5).unwrap();
                    assert!(
                        back.iter().any(|(_, c)| *c == a),
                        "{} -> {} has no way back",
                        a.display(&sig),
                        b.display(&sig)
                    );
                }
            }
        }
    }

    #[test]
    fn associativity_path_exists() {
        let sig = Signature::cmon();
        let cache = PatternCache::new(sig.clone());
        let a = t(&sig, "(plus (plus x1 x2) x3)", 3);
        let b = t(&sig, "(plus x1 (plus x2 x3))", 3);
        match find_path(&cache, LaplazaSpec::Operadic, &a, &b, Caps::default()).unwrap() {
            PathSearch::Found(p) => {
                let replay =
                    CoherencePath::new(&sig, LaplazaSpec::Operadic, a.clone(), p.steps().to_vec())
                        .unwrap();
                assert_eq!(replay.target(), &b);
            }
            other => panic!("{other:?}"),
        }
        let c = t(&sig, "(plus x1 x1)", 3);
        assert_eq!(
            find_path(&cache, LaplazaSpec::Operadic, &a, &c, Caps::default()).unwrap(),
            PathSearch::Absent
        );
        assert_eq!(
            find_path(&cache, LaplazaSpec::Operadic, &a, &a, Caps::default()).unwrap(),
            PathSearch::Found(CoherencePath::identity(a.clone()))
        );
    }

    #[test]
    fn absorbing_steps_reach_annihilated_words() {
        let sig = Signature::csr();
        let cache = PatternCache::new(sig.clone());
        let a = t(&sig, "zero", 2);
        let b = t(&sig, "(times zero (plus x1 x2))", 2);
        let caps = Caps {
            size: 5,
            ..Caps::default()
        };
        assert!(matches!(
            find_path(&cache, LaplazaSpec::LaplazaSemiring, &a, &b, caps).unwrap(),
            PathSearch::Found(_)
        ));
    }
}
