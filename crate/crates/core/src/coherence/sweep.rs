//! Exhaustive desk-scale checks over connected components of the generator
//! graph. A component is explored breadth first; every object gets the path
//! along the search tree from the root, and every other edge closes a
//! cycle. Those cycles generate all loops of the component, so checking
//! them checks every pair of parallel paths inside it.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gen::enumerate_terms;
use crate::nf::{LaplazaSpec, Projection};
use crate::term::{Node, Signature, Term};

use super::decide::{decide_equal, Verdict};
use super::models::{step_bijection, ElementBijection};
use super::neighbors::{rewrite_neighbors, PatternCache};
use super::{Caps, CoherencePath, CoherenceStep};

/// Explored part of a component.
#[derive(Clone, Debug)]
pub struct Component {
    pub objects: Vec<Term>,
    /// Search-tree edge into each object; `None` for the root.
    pub parent: Vec<Option<(usize, CoherenceStep)>>,
    /// False if the state cap stopped the exploration.
    pub complete: bool,
}

impl Component {
    /// The tree path from the root to object `i`.
    pub fn tree_path(&self, i: usize) -> CoherencePath {
        let mut steps = Vec::new();
        let mut at = i;
        while let Some((prev, step)) = &self.parent[at] {
            steps.push(step.clone());
            at = *prev;
        }
        steps.reverse();
        CoherencePath::from_parts(self.objects[0].clone(), self.objects[i].clone(), steps)
    }
}

/// Breadth-first exploration within `caps.size` and `caps.states`. Each
/// edge not in the search tree is reported as `(from, step, to)` once both
/// ends are known.
pub fn explore(
    cache: &PatternCache,
    spec: LaplazaSpec,
    root: &Term,
    caps: Caps,
    mut on_edge: impl FnMut(&Component, usize, &CoherenceStep, usize) -> Result<()>,
) -> Result<Component> {
    let mut comp = Component {
        objects: vec![root.clone()],
        parent: vec![None],
        complete: true,
    };
    let mut index: HashMap<Term, usize> = HashMap::from([(root.clone(), 0)]);
    let mut next = 0;
    while next < comp.objects.len() {
        let cur = comp.objects[next].clone();
        for (step, b) in rewrite_neighbors(cache, spec, &cur, caps.size)? {
            match index.get(&b) {
                Some(&j) => {
                    let tree_edge =
                        matches!(&comp.parent[j], Some((p, s)) if *p == next && *s == step);
                    if !tree_edge {
                        on_edge(&comp, next, &step, j)?;
                    }
                }
                None => {
                    if comp.objects.len() >= caps.states {
                        comp.complete = false;
                        continue;
                    }
                    index.insert(b.clone(), comp.objects.len());
                    comp.objects.push(b);
                    comp.parent.push(Some((next, step)));
                }
            }
        }
        next += 1;
    }
    Ok(comp)
}

/// Outcome of the operadic commutative-monoid sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacLaneReport {
    pub objects: usize,
    pub components: usize,
    pub incomplete_components: usize,
    /// Same-projection objects left in different components.
    pub disconnected: usize,
    pub cycles: usize,
    pub forced: usize,
    pub model_agree: usize,
    pub unknown: usize,
    pub model_distinct: usize,
    pub failures: Vec<String>,
}

impl MacLaneReport {
    pub fn passed(&self) -> bool {
        self.objects > 0
            && self.incomplete_components == 0
            && self.disconnected == 0
            && self.forced == self.cycles
            && self.model_agree == self.cycles
            && self.failures.is_empty()
    }
}

fn injective(node: &Node) -> bool {
    let mut leaves = Vec::new();
    node.leaves(&mut leaves);
    let n = leaves.len();
    leaves.sort_unstable();
    leaves.dedup();
    leaves.len() == n
}

/// Every cmon word over `x1..x_n` (`n ≤ max_arity`) of size at most
/// `max_size` without repeated variables lies in the component of the words
/// with its projection, and every cycle there is forced and acts trivially
/// on strands.
pub fn maclane_sweep(max_arity: usize, max_size: usize, caps: Caps) -> Result<MacLaneReport> {
    let sig = Signature::cmon();
    let spec = LaplazaSpec::Operadic;
    let cache = PatternCache::new(sig.clone());
    let caps = Caps {
        size: max_size,
        ..caps
    };
    let mut report = MacLaneReport::default();
    for n in 0..=max_arity {
        let words: Vec<Term> = enumerate_terms(&sig, n, max_size)
            .into_iter()
            .filter(|t| injective(t.root()))
            .collect();
        report.objects += words.len();
        let mut covered: HashSet<Term> = HashSet::new();
        let mut roots: HashMap<Projection, usize> = HashMap::new();
        for w in &words {
            if covered.contains(w) {
                continue;
            }
            report.components += 1;
            *roots.entry(Projection::of(&sig, w)).or_default() += 1;
            let mut values: Vec<ElementBijection> = Vec::new();
            let comp = explore(&cache, spec, w, caps, |comp, from, step, to| {
                while values.len() < comp.objects.len() {
                    let i = values.len();
                    let v = match &comp.parent[i] {
                        None => super::models::path_model(&sig, &comp.tree_path(0))?,
                        Some((p, s)) => {
                            values[*p].then(&step_bijection(&sig, comp.objects[*p].root(), s)?)
                        }
                    };
                    values.push(v);
                }
                report.cycles += 1;
                let around = comp.tree_path(from).concat(&CoherencePath::from_parts(
                    comp.objects[from].clone(),
                    comp.objects[to].clone(),
                    vec![step.clone()],
                ))?;
                let direct = comp.tree_path(to);
                let d = decide_equal(&sig, spec, &around, &direct, caps)?;
                match d.verdict {
                    Verdict::ForcedEqual => report.forced += 1,
                    Verdict::Unknown => report.unknown += 1,
                    Verdict::ModelDistinct => report.model_distinct += 1,
                }
                let via =
                    values[from].then(&step_bijection(&sig, comp.objects[from].root(), step)?);
                if via == values[to] {
                    report.model_agree += 1;
                } else if report.failures.len() < 10 {
                    report.failures.push(format!(
                        "strands disagree around {} -> {}",
                        comp.objects[from].display(&sig),
                        comp.objects[to].display(&sig)
                    ));
                }
                Ok(())
            })?;
            if !comp.complete {
                report.incomplete_components += 1;
            }
            covered.extend(comp.objects);
        }
        report.disconnected += roots.values().map(|c| c - 1).sum::<usize>();
    }
    Ok(report)
}

/// Outcome of the semiring sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaplazaReport {
    pub words: usize,
    pub members: usize,
    /// Members projecting to `0`: every path between them has the empty
    /// bijection as value, so they are counted without exploring.
    pub vacuous: usize,
    pub components: usize,
    pub incomplete_components: usize,
    pub objects_visited: usize,
    pub cycles: usize,
    pub inconsistent: usize,
    pub failures: Vec<String>,
}

impl LaplazaReport {
    pub fn passed(&self) -> bool {
        self.members > 0 && self.inconsistent == 0 && self.failures.is_empty()
    }
}

/// For every csr word over `x1..x_arity` of size at most `max_size` whose
/// projection is a sum of distinct square-free monomials, all parallel
/// paths inside its component (within `caps`) have the same monomial value.
pub fn laplaza_sweep(arity: usize, max_size: usize, caps: Caps) -> Result<LaplazaReport> {
    let sig = Signature::csr();
    let spec = LaplazaSpec::LaplazaSemiring;
    let cache = PatternCache::new(sig.clone());
    let caps = Caps {
        size: max_size,
        ..caps
    };
    let words = enumerate_terms(&sig, arity, max_size);
    let mut report = LaplazaReport {
        words: words.len(),
        ..LaplazaReport::default()
    };
    let mut covered: HashSet<Term> = HashSet::new();
    for w in &words {
        let proj = Projection::of(&sig, w);
        if !proj.in_laplaza(spec) {
            continue;
        }
        report.members += 1;
        if matches!(&proj, Projection::Poly(p) if p.is_zero()) {
            report.vacuous += 1;
            continue;
        }
        if covered.contains(w) {
            continue;
        }
        report.components += 1;
        let mut values: Vec<ElementBijection> = Vec::new();
        let comp = explore(&cache, spec, w, caps, |comp, from, step, to| {
            while values.len() < comp.objects.len() {
                let i = values.len();
                let v = match &comp.parent[i] {
                    None => super::models::path_model(&sig, &comp.tree_path(0))?,
                    Some((p, s)) => {
                        values[*p].then(&step_bijection(&sig, comp.objects[*p].root(), s)?)
                    }
                };
                values.push(v);
            }
            report.cycles += 1;
            let via = values[from].then(&step_bijection(&sig, comp.objects[from].root(), step)?);
            if via != values[to] {
                report.inconsistent += 1;
                if report.failures.len() < 10 {
                    report.failures.push(format!(
                        "monomial values disagree around {} -> {}",
                        comp.objects[from].display(&sig),
                        comp.objects[to].display(&sig)
                    ));
                }
            }
            Ok(())
        })?;
        if !comp.complete {
            report.incomplete_components += 1;
        }
        report.objects_visited += comp.objects.len();
        covered.extend(comp.objects);
    }
    Ok(report)
}
