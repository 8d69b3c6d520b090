//! Reachability under single applications of the six axioms, in both
//! directions, and the exhaustive comparison with the normal form.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nf::MonoidNF;

use super::{IndexWord, TwoNode, TwoTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    /// Rewrite steps explored from each end.
    pub depth: usize,
    /// Largest intermediate term, in nodes.
    pub nodes: usize,
}

/// Every sub-multiset of `c`.
fn submultisets(c: &MonoidNF) -> Vec<MonoidNF> {
    let mut out = vec![Vec::new()];
    for &k in c.counts() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=k).map(move |j| {
                    let mut p = prefix.clone();
                    p.push(j);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(MonoidNF::from_counts).collect()
}

/// Terms one axiom application away, within `max_nodes`.
pub fn rewrites(t: &TwoTerm, max_nodes: usize) -> Vec<TwoTerm> {
    let arity = t.arity();
    let size = t.size();
    let zero = MonoidNF::zero(arity);
    let mut positions = Vec::new();
    t.root().positions(&mut Vec::new(), &mut positions);
    let mut out = Vec::new();
    for pos in positions {
        let x = t.root().at(&pos).expect("position exists");
        let mut local: Vec<TwoNode> = Vec::new();
        match x {
            TwoNode::Plus(s, u) => {
                local.push(TwoNode::Plus(u.clone(), s.clone()));
                if let TwoNode::Plus(a, b) = &**s {
                    local.push(TwoNode::plus(
                        (**a).clone(),
                        TwoNode::Plus(b.clone(), u.clone()),
                    ));
                }
                if let TwoNode::Plus(b, c) = &**u {
                    local.push(TwoNode::plus(
                        TwoNode::Plus(s.clone(), b.clone()),
                        (**c).clone(),
                    ));
                }
                if **u == TwoNode::Zero {
                    local.push((**s).clone());
                }
                if **s == TwoNode::Zero {
                    local.push((**u).clone());
                }
                if let TwoNode::Check(inner, c) = &**s {
                    local.push(TwoNode::check(
                        TwoNode::Plus(inner.clone(), u.clone()),
                        c.clone(),
                    ));
                }
            }
            TwoNode::Check(s, c) => {
                if let TwoNode::Check(inner, d) = &**s {
                    local.push(TwoNode::Check(inner.clone(), c.add(d).expect("same arity")));
                }
                for d in submultisets(c) {
                    let rest = c.checked_sub(&d).expect("sub-multiset");
                    local.push(TwoNode::check(TwoNode::Check(s.clone(), d), rest));
                }
                if let TwoNode::Plus(a, u) = &**s {
                    let fits = a
                        .type_of(arity)
                        .ok()
                        .is_some_and(|ty| ty.cancel(c).is_some());
                    if fits {
                        local.push(TwoNode::Plus(
                            Box::new(TwoNode::Check(a.clone(), c.clone())),
                            u.clone(),
                        ));
                    }
                }
                if c.is_zero() {
                    local.push((**s).clone());
                }
            }
            TwoNode::Zero | TwoNode::Slot(..) => {}
        }
        local.push(TwoNode::plus(x.clone(), TwoNode::Zero));
        local.push(TwoNode::plus(TwoNode::Zero, x.clone()));
        local.push(TwoNode::check(x.clone(), zero.clone()));
        let old = x.size();
        for new in local {
            if size - old + new.size() <= max_nodes {
                out.push(TwoTerm::from_parts(arity, t.root().replace_at(&pos, new)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every term reachable from `t` within `caps`.
pub fn ball(t: &TwoTerm, caps: OracleCaps) -> HashSet<TwoTerm> {
    let mut seen: HashSet<TwoTerm> = HashSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    for _ in 0..caps.depth {
        let mut next = Vec::new();
        for x in &frontier {
            for y in rewrites(x, caps.nodes) {
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn meet(x: &HashSet<TwoTerm>, y: &HashSet<TwoTerm>) -> bool {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small.iter().any(|e| large.contains(e))
}

/// Whether `s` and `t` are joined by at most `2 · depth` axiom steps,
/// searching `depth` steps from each end through terms of at most
/// `max(|s|, |t|)` nodes.
pub fn axiom_rewrite_oracle(s: &TwoTerm, t: &TwoTerm, depth: usize) -> bool {
    let caps = OracleCaps {
        depth,
        nodes: s.size().max(t.size()),
    };
    meet(&ball(s, caps), &ball(t, caps))
}

#[derive(Clone, Copy)]
enum Shape {
    Slot,
    Zero,
    Check(usize),
    Plus(usize, usize),
}

struct Shapes {
    /// `by_size[n]`: shapes with `n` nodes, as `(arena index, slot count)`.
    arena: Vec<Shape>,
    by_size: Vec<Vec<(usize, usize)>>,
}

impl Shapes {
    fn new(max_nodes: usize, max_slots: usize) -> Shapes {
        let mut s = Shapes {
            arena: vec![Shape::Slot, Shape::Zero],
            by_size: vec![Vec::new(); max_nodes + 1],
        };
        if max_nodes == 0 {
            return s;
        }
        if max_slots > 0 {
            s.by_size[1].push((0, 1));
        }
        s.by_size[1].push((1, 0));
        for n in 2..=max_nodes {
            let mut made = Vec::new();
            for &(c, k) in &s.by_size[n - 1] {
                made.push((Shape::Check(c), k));
            }
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for &(l, kl) in &s.by_size[left] {
                    for &(r, kr) in &s.by_size[right] {
                        if kl + kr <= max_slots {
                            made.push((Shape::Plus(l, r), kl + kr));
                        }
                    }
                }
            }
            for (shape, k) in made {
                s.by_size[n].push((s.arena.len(), k));
                s.arena.push(shape);
            }
        }
        s
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}

/// Slot types in which each variable occurs in at most one inbound and at
/// most one outbound slot word.
fn linear_assignments(slots: usize, arity: usize) -> Vec<Vec<IndexWord>> {
    let choices = slots + 1;
    let total = choices.pow(2 * arity as u32);
    (0..total)
        .map(|mut code| {
            let mut words = vec![IndexWord::zero(arity); slots];
            let mut a = vec![vec![0u32; arity]; slots];
            let mut b = vec![vec![0u32; arity]; slots];
            for j in 0..arity {
                let i = code % choices;
                code /= choices;
                if i > 0 {
                    a[i - 1][j] = 1;
                }
                let o = code % choices;
                code /= choices;
                if o > 0 {
                    b[o - 1][j] = 1;
                }
            }
            for (k, w) in words.iter_mut().enumerate() {
                *w = IndexWord {
                    a: MonoidNF::from_counts(a[k].clone()),
                    b: MonoidNF::from_counts(b[k].clone()),
                };
            }
            words
        })
        .collect()
}

/// Instantiates shape `id`, consuming slot labels from `labels`; returns
/// every choice of cancellation words that typechecks.
fn instantiate(
    shapes: &Shapes,
    id: usize,
    labels: &[usize],
    types: &[IndexWord],
    arity: usize,
) -> Vec<(TwoNode, IndexWord, usize)> {
    match shapes.arena[id] {
        Shape::Slot => {
            let i = labels[0];
            vec![(
                TwoNode::Slot(i, types[i - 1].clone()),
                types[i - 1].clone(),
                1,
            )]
        }
        Shape::Zero => vec![(TwoNode::Zero, IndexWord::zero(arity), 0)],
        Shape::Check(c) => instantiate(shapes, c, labels, types, arity)
            .into_iter()
            .flat_map(|(node, ty, used)| {
                let common = MonoidNF::from_counts(
                    ty.a.counts()
                        .iter()
                        .zip(ty.b.counts())
                        .map(|(x, y)| *x.min(y))
                        .collect(),
                );
                submultisets(&common).into_iter().map(move |c| {
                    let t = ty.cancel(&c).expect("fits");
                    (TwoNode::check(node.clone(), c), t, used)
                })
            })
            .collect(),
        Shape::Plus(l, r) => {
            let mut out = Vec::new();
            for (ln, lt, lu) in instantiate(shapes, l, labels, types, arity) {
                for (rn, rt, ru) in instantiate(shapes, r, &labels[lu..], types, arity) {
                    out.push((
                        TwoNode::plus(ln.clone(), rn),
                        lt.add(&rt).expect("same arity"),
                        lu + ru,
                    ));
                }
            }
            out
        }
    }
}

/// Every well-typed word with at most `max_slots` slots and `max_nodes`
/// nodes over `arity` variables whose slot types are linear.
pub fn enumerate_two_terms(max_slots: usize, max_nodes: usize, arity: usize) -> Vec<TwoTerm> {
    let shapes = Shapes::new(max_nodes, max_slots);
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        for &(id, k) in &shapes.by_size[n] {
            let assignments = linear_assignments(k, arity);
            for labels in permutations(k) {
                for types in &assignments {
                    for (node, _, _) in instantiate(&shapes, id, &labels, types, arity) {
                        out.push(TwoTerm::from_parts(arity, node));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Outcome of comparing `two_equal` with the rewrite oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmcReport {
    pub terms: usize,
    pub groups: usize,
    pub pairs: usize,
    pub equal_pairs: usize,
    pub distinct_pairs: usize,
    pub disagreements: usize,
    pub examples: Vec<String>,
}

impl CmcReport {
    pub fn passed(&self) -> bool {
        self.terms > 0 && self.disagreements == 0
    }
}

/// Compares the normal form with the oracle on every pair of enumerated
/// terms sharing a source.
pub fn cmc_sweep(
    max_slots: usize,
    max_nodes: usize,
    arity: usize,
    depth: usize,
    jobs: usize,
) -> Result<CmcReport> {
    let terms = enumerate_two_terms(max_slots, max_nodes, arity);
    let mut groups: BTreeMap<Vec<IndexWord>, Vec<TwoTerm>> = BTreeMap::new();
    for t in &terms {
        groups
            .entry(t.typecheck()?.source)
            .or_default()
            .push(t.clone());
    }
    let caps = OracleCaps {
        depth,
        nodes: max_nodes,
    };
    let groups: Vec<Vec<TwoTerm>> = groups.into_values().collect();
    let jobs = jobs.max(1);
    let partials: Vec<Result<CmcReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let groups = &groups;
                scope.spawn(move || {
                    let mut r = CmcReport::default();
                    for group in groups.iter().skip(j).step_by(jobs) {
                        compare_group(group, caps, &mut r)?;
                    }
                    Ok(r)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut report = CmcReport {
        terms: terms.len(),
        groups: groups.len(),
        ..CmcReport::default()
    };
    for p in partials {
        let p = p?;
        report.pairs += p.pairs;
        report.equal_pairs += p.equal_pairs;
        report.distinct_pairs += p.distinct_pairs;
        report.disagreements += p.disagreements;
        report.examples.extend(p.examples);
    }
    report.examples.sort();
    report.examples.truncate(10);
    Ok(report)
}

/// Terms of one group interned to indices, with neighbor lists computed
/// on first use.
struct Graph {
    index: HashMap<TwoTerm, usize>,
    terms: Vec<TwoTerm>,
    neighbors: Vec<Option<Vec<usize>>>,
    nodes: usize,
}

impl Graph {
    fn id(&mut self, t: &TwoTerm) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        let i = self.terms.len();
        self.index.insert(t.clone(), i);
        self.terms.push(t.clone());
        self.neighbors.push(None);
        i
    }

    fn neighbors(&mut self, i: usize) -> Vec<usize> {
        if let Some(n) = &self.neighbors[i] {
            return n.clone();
        }
        let next = rewrites(&self.terms[i], self.nodes);
        let ids: Vec<usize> = next.iter().map(|t| self.id(t)).collect();
        self.neighbors[i] = Some(ids.clone());
        ids
    }

    fn ball(&mut self, start: usize, depth: usize) -> Vec<usize> {
        let mut seen = vec![start];
        let mut visited: HashSet<usize> = HashSet::from([start]);
        let mut frontier = vec![start];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &x in &frontier {
                for y in self.neighbors(x) {
                    if visited.insert(y) {
                        seen.push(y);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        seen
    }
}

fn compare_group(group: &[TwoTerm], caps: OracleCaps, r: &mut CmcReport) -> Result<()> {
    let mut graph = Graph {
        index: HashMap::new(),
        terms: Vec::new(),
        neighbors: Vec::new(),
        nodes: caps.nodes,
    };
    let ids: Vec<usize> = group.iter().map(|t| graph.id(t)).collect();
    let balls: Vec<Vec<usize>> = ids.iter().map(|&i| graph.ball(i, caps.depth)).collect();
    let words = graph.terms.len().div_ceil(64);
    let bits: Vec<Vec<u64>> = balls
        .iter()
        .map(|b| {
            let mut v = vec![0u64; words];
            for &i in b {
                v[i / 64] |= 1 << (i % 64);
            }
            v
        })
        .collect();
    let nfs = group
        .iter()
        .map(TwoTerm::normalize)
        .collect::<Result<Vec<_>>>()?;
    for i in 0..group.len() {
        for j in i + 1..group.len() {
            let equal = nfs[i] == nfs[j];
            let reached = bits[i].iter().zip(&bits[j]).any(|(x, y)| x & y != 0);
            r.pairs += 1;
            if equal {
                r.equal_pairs += 1;
            } else {
                r.distinct_pairs += 1;
            }
            if equal != reached {
                r.disagreements += 1;
                if r.examples.len() < 10 {
                    r.examples.push(format!(
                        "{} vs {}: normal form says {equal}, oracle says {reached}",
                        group[i], group[j]
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(text: &str) -> TwoTerm {
        TwoTerm::parse(text, Some(4)).unwrap()
    }

    #[test]
    fn rewrites_preserve_types() {
        let s = t("(plus (check (slot 1 [x1 x3] [x2 x3]) [x3]) (plus (slot 2 [x4] []) zero))");
        let ty = s.typecheck().unwrap();
        for r in rewrites(&s, 9) {
            assert_eq!(r.typecheck().unwrap(), ty, "{r}");
        }
    }

    #[test]
    fn axiom_pairs_are_one_step_apart() {
        let pairs = [
            (
                "(plus (slot 1 [x1] []) (slot 2 [] [x2]))",
                "(plus (slot 2 [] [x2]) (slot 1 [x1] []))",
            ),
            ("(plus (slot 1 [x1] []) zero)", "(slot 1 [x1] [])"),
            (
                "(check (check (slot 1 [x1 x2] [x1 x2]) [x2]) [x1])",
                "(check (slot 1 [x1 x2] [x1 x2]) [x1 x2])",
            ),
            (
                "(plus (check (slot 1 [x1] [x1]) [x1]) (slot 2 [x2] []))",
                "(check (plus (slot 1 [x1] [x1]) (slot 2 [x2] [])) [x1])",
            ),
            ("(check (slot 1 [x1] []) [])", "(slot 1 [x1] [])"),
        ];
        for (l, r) in pairs {
            let (l, r) = (t(l), t(r));
            assert!(rewrites(&l, 8).contains(&r), "{l} -> {r}");
            assert!(axiom_rewrite_oracle(&l, &r, 1), "{l} ~ {r}");
        }
        let s = t("(slot 1 [x1] [x1])");
        assert!(axiom_rewrite_oracle(&s, &s, 0));
    }

    #[test]
    fn different_targets_are_never_reached() {
        let s = t("(plus (slot 1 [x1] [x1]) (slot 2 [x2] [x2]))");
        let u = t("(check (plus (slot 1 [x1] [x1]) (slot 2 [x2] [x2])) [x1])");
        assert!(!axiom_rewrite_oracle(&s, &u, 3));
    }

    #[test]
    fn enumeration_is_typed_and_linear() {
        let terms = enumerate_two_terms(2, 4, 1);
        assert!(terms
            .iter()
            .any(|t| t.to_string() == "(check (plus (slot 1 [x1] []) (slot 2 [] [x1])) [x1])"));
        for t in &terms {
            let ty = t.typecheck().unwrap();
            assert!(t.size() <= 4 && ty.source.len() <= 2);
        }
    }

    #[test]
    fn small_sweep_agrees() {
        let r = cmc_sweep(2, 4, 1, 3, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.equal_pairs > 0 && r.distinct_pairs > 0);
    }
}
