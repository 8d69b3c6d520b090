//! Equality of parallel coherence paths.
//!
//! `p = q` is derived by rewriting the loop `p · q⁻¹` to the empty path with
//! moves that are each an instance of the defining relations or of the
//! congruences: dropping identity steps, cancelling a step against its
//! inverse, interchanging steps in disjoint subterms, and collapsing a
//! segment acting inside one subterm into a single step when its end points
//! project into the Laplaza set (possibly after separating the variables of
//! that subterm, which is undone by functoriality).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nf::{LaplazaSpec, Projection};
use crate::term::{parse_node, Node, Signature, Term, Theory};

use super::models::{monomial_model, path_model, perm_model, ElementBijection};
use super::{Caps, CoherencePath, CoherenceStep, StepJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// The subterm itself projects into the Laplaza set.
    Identity,
    /// The subterm with all its leaves made distinct does.
    Linear,
}

/// A loop and the move that produced it from its parent state.
type LoopState = (Vec<CoherenceStep>, Option<(usize, Rewrite)>);

/// One move of a derivation, indexing into the current loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rewrite {
    Drop {
        index: usize,
    },
    Cancel {
        index: usize,
    },
    Swap {
        index: usize,
    },
    Collapse {
        start: usize,
        end: usize,
        position: Vec<usize>,
        mode: Mode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ForcedEqual,
    ModelDistinct,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelWitness {
    pub model: String,
    pub left: ElementBijection,
    pub right: ElementBijection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    /// Moves turning `p · q⁻¹` into the empty loop.
    pub derivation: Option<Vec<Rewrite>>,
    pub witness: Option<ModelWitness>,
    pub explored: usize,
}

fn objects(start: &Node, steps: &[CoherenceStep]) -> Vec<Node> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    out.push(start.clone());
    for s in steps {
        let next = s.apply_unchecked(out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

fn comparable(p: &[usize], q: &[usize]) -> bool {
    p.starts_with(q) || q.starts_with(p)
}

/// Binds pattern variables by matching `pattern` against `node`.
fn bind(pattern: &Node, node: &Node, binding: &mut [Option<Node>]) -> bool {
    match (pattern, node) {
        (Node::Var(j), _) => match &binding[j - 1] {
            Some(b) => b == node,
            None => {
                binding[j - 1] = Some(node.clone());
                true
            }
        },
        (Node::App(o, xs), Node::App(p, ys)) => {
            o == p && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| bind(x, y, binding))
        }
        _ => false,
    }
}

/// Replaces each leaf by a fresh variable, recording where it came from.
fn separate(node: &Node, origin: &mut Vec<usize>) -> Node {
    node.map_vars(&mut |i| {
        origin.push(i);
        origin.len()
    })
}

/// The single step replacing `steps` (all acting under `position`), if the
/// chosen mode licenses it. `None` inside the `Some` means the segment is
/// an identity and disappears.
#[allow(clippy::too_many_arguments)]
fn collapse(
    sig: &Signature,
    spec: LaplazaSpec,
    arity: usize,
    first: &Node,
    last: &Node,
    steps: &[CoherenceStep],
    position: &[usize],
    mode: Mode,
) -> Option<Option<CoherenceStep>> {
    if !steps.iter().all(|s| s.position.starts_with(position)) {
        return None;
    }
    let start = first.at(position)?;
    let end = last.at(position)?;
    let (before, after, pieces) = match mode {
        Mode::Identity => {
            if !Projection::of_node(sig, arity, start).in_laplaza(spec) {
                return None;
            }
            (
                start.clone(),
                end.clone(),
                (1..=arity).map(Node::Var).collect(),
            )
        }
        Mode::Linear => {
            let mut origin = Vec::new();
            let lifted = separate(start, &mut origin);
            let mut cur = lifted.clone();
            for s in steps {
                let rel = &s.position[position.len()..];
                let here = cur.at(rel)?;
                let mut binding = vec![None; s.pieces.len()];
                if !bind(&s.before, here, &mut binding) {
                    return None;
                }
                let binding: Vec<Node> = binding
                    .into_iter()
                    .zip(&s.pieces)
                    .map(|(b, piece)| b.unwrap_or_else(|| separate(piece, &mut origin)))
                    .collect();
                let replaced = s.after.substitute(&binding);
                cur = cur.replace_at(rel, replaced)?;
            }
            let m = origin.len();
            let pu = Projection::of_node(sig, m, &lifted);
            if pu != Projection::of_node(sig, m, &cur) || !pu.in_laplaza(spec) {
                return None;
            }
            let pieces: Vec<Node> = origin.into_iter().map(Node::Var).collect();
            if cur.substitute(&pieces) != *end {
                return None;
            }
            (lifted, cur, pieces)
        }
    };
    if before == after {
        return Some(None);
    }
    Some(Some(CoherenceStep {
        position: position.to_vec(),
        before,
        after,
        pieces,
    }))
}

struct Loop<'a> {
    sig: &'a Signature,
    spec: LaplazaSpec,
    arity: usize,
    start: &'a Node,
}

impl Loop<'_> {
    /// Applies one move; `None` if it does not apply.
    fn apply(&self, steps: &[CoherenceStep], rw: &Rewrite) -> Option<Vec<CoherenceStep>> {
        let mut out = steps.to_vec();
        match rw {
            Rewrite::Drop { index } => {
                if !steps.get(*index)?.is_identity() {
                    return None;
                }
                out.remove(*index);
            }
            Rewrite::Cancel { index } => {
                if *steps.get(index + 1)? != steps[*index].reverse() {
                    return None;
                }
                out.drain(*index..index + 2);
            }
            Rewrite::Swap { index } => {
                let (a, b) = (steps.get(*index)?, steps.get(index + 1)?);
                if comparable(&a.position, &b.position) {
                    return None;
                }
                out.swap(*index, index + 1);
            }
            Rewrite::Collapse {
                start,
                end,
                position,
                mode,
            } => {
                if start > end || *end >= steps.len() {
                    return None;
                }
                let objs = objects(self.start, &steps[..=*end]);
                let merged = collapse(
                    self.sig,
                    self.spec,
                    self.arity,
                    &objs[*start],
                    &objs[end + 1],
                    &steps[*start..=*end],
                    position,
                    *mode,
                )?;
                out.splice(*start..=*end, merged);
            }
        }
        Some(out)
    }

    fn moves(&self, steps: &[CoherenceStep]) -> Vec<(Rewrite, Vec<CoherenceStep>)> {
        let mut out = Vec::new();
        let mut push = |rw: Rewrite| {
            if let Some(next) = self.apply(steps, &rw) {
                out.push((rw, next));
            }
        };
        let n = steps.len();
        for index in 0..n {
            if steps[index].is_identity() {
                push(Rewrite::Drop { index });
            }
            if index + 1 < n {
                if steps[index + 1] == steps[index].reverse() {
                    push(Rewrite::Cancel { index });
                }
                if !comparable(&steps[index].position, &steps[index + 1].position) {
                    push(Rewrite::Swap { index });
                }
            }
        }
        let objs = objects(self.start, steps);
        for len in (1..=n).rev() {
            for start in 0..=n - len {
                let end = start + len - 1;
                let mut common = steps[start].position.clone();
                for s in &steps[start + 1..=end] {
                    let k = common
                        .iter()
                        .zip(&s.position)
                        .take_while(|(a, b)| a == b)
                        .count();
                    common.truncate(k);
                }
                for depth in (0..=common.len()).rev() {
                    let position = &common[..depth];
                    for mode in [Mode::Identity, Mode::Linear] {
                        let Some(merged) = collapse(
                            self.sig,
                            self.spec,
                            self.arity,
                            &objs[start],
                            &objs[end + 1],
                            &steps[start..=end],
                            position,
                            mode,
                        ) else {
                            continue;
                        };
                        if merged.is_some() && end == start {
                            continue;
                        }
                        let mut next = steps.to_vec();
                        next.splice(start..=end, merged);
                        let rw = Rewrite::Collapse {
                            start,
                            end,
                            position: position.to_vec(),
                            mode,
                        };
                        if next.is_empty() {
                            return vec![(rw, next)];
                        }
                        out.push((rw, next));
                        break;
                    }
                }
            }
        }
        out
    }

    /// Best-first search, shortest loops first, for a derivation to empty.
    fn derive(&self, steps: Vec<CoherenceStep>, cap: usize) -> (Option<Vec<Rewrite>>, usize) {
        let mut states: Vec<LoopState> = vec![(steps.clone(), None)];
        let mut seen: HashSet<Vec<CoherenceStep>> = HashSet::from([steps.clone()]);
        let mut heap = BinaryHeap::from([Reverse((steps.len(), 0usize))]);
        while let Some(Reverse((len, id))) = heap.pop() {
            if len == 0 {
                let mut moves = Vec::new();
                let mut at = id;
                while let Some((prev, rw)) = &states[at].1 {
                    moves.push(rw.clone());
                    at = *prev;
                }
                moves.reverse();
                return (Some(moves), states.len());
            }
            let current = states[id].0.clone();
            for (rw, next) in self.moves(&current) {
                if seen.contains(&next) {
                    continue;
                }
                if states.len() >= cap {
                    return (None, states.len());
                }
                seen.insert(next.clone());
                heap.push(Reverse((next.len(), states.len())));
                states.push((next, Some((id, rw))));
            }
        }
        (None, states.len())
    }
}

/// The model registered as faithful for the pair, if any.
fn faithful_model(sig: &Signature, spec: LaplazaSpec) -> Option<&'static str> {
    match (sig.theory(), spec) {
        (Some(Theory::Cmon), LaplazaSpec::Operadic) => Some("permutation"),
        (Some(Theory::Csr), LaplazaSpec::LaplazaSemiring) => Some("monomial"),
        _ => None,
    }
}

fn model_value(sig: &Signature, model: &str, path: &CoherencePath) -> Result<ElementBijection> {
    match model {
        "permutation" => {
            perm_model(sig, path)?;
            path_model(sig, path)
        }
        _ => monomial_model(sig, path),
    }
}

/// Decides whether two parallel paths are equal in the quotient theory.
pub fn decide_equal(
    sig: &Signature,
    spec: LaplazaSpec,
    p: &CoherencePath,
    q: &CoherencePath,
    caps: Caps,
) -> Result<Decision> {
    spec.check_compatible(sig)?;
    if p.source() != q.source() || p.target() != q.target() {
        return Err(Error::NotParallel(format!(
            "{} -> {} versus {} -> {}",
            p.source().display(sig),
            p.target().display(sig),
            q.source().display(sig),
            q.target().display(sig)
        )));
    }
    let lp = p.concat(&q.reverse())?;
    let ctx = Loop {
        sig,
        spec,
        arity: p.source().arity(),
        start: p.source().root(),
    };
    let (derivation, explored) = ctx.derive(lp.steps().to_vec(), caps.states.max(1));
    let model = faithful_model(sig, spec);
    let values = match model {
        Some(m) => Some((model_value(sig, m, p)?, model_value(sig, m, q)?)),
        None => None,
    };
    let witness = match (model, values) {
        (Some(m), Some((left, right))) if left != right => Some(ModelWitness {
            model: m.into(),
            left,
            right,
        }),
        _ => None,
    };
    let verdict = match (&derivation, &witness) {
        (Some(_), Some(_)) => {
            return Err(Error::Model(
                "a derivation and a model witness for the same pair".into(),
            ))
        }
        (Some(_), None) => Verdict::ForcedEqual,
        (None, Some(_)) => Verdict::ModelDistinct,
        (None, None) => Verdict::Unknown,
    };
    Ok(Decision {
        verdict,
        derivation,
        witness,
        explored,
    })
}

/// Re-checks a derivation for `p · q⁻¹` without search.
pub fn replay_derivation(
    sig: &Signature,
    spec: LaplazaSpec,
    p: &CoherencePath,
    q: &CoherencePath,
    derivation: &[Rewrite],
) -> Result<bool> {
    spec.check_compatible(sig)?;
    let p = CoherencePath::new(sig, spec, p.source().clone(), p.steps().to_vec())?;
    let q = CoherencePath::new(sig, spec, q.source().clone(), q.steps().to_vec())?;
    let lp = p.concat(&q.reverse())?;
    if lp.target() != lp.source() {
        return Err(Error::NotParallel("paths do not share a target".into()));
    }
    let ctx = Loop {
        sig,
        spec,
        arity: p.source().arity(),
        start: p.source().root(),
    };
    let mut steps = lp.steps().to_vec();
    for (i, rw) in derivation.iter().enumerate() {
        steps = ctx
            .apply(&steps, rw)
            .ok_or_else(|| Error::InvalidStep(format!("move {i} ({rw:?}) does not apply")))?;
    }
    Ok(steps.is_empty())
}

/// Machine-checked account of the commutative-monoid discrepancy: with every
/// word in the Laplaza set, the swap of a repeated summand is forced to be
/// the identity, yet strand tracking sees a transposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GouldReport {
    pub object: String,
    pub step: StepJson,
    /// Verdict under `S = T`.
    pub forced: bool,
    pub derivation: Vec<Rewrite>,
    /// Strand-tracking value of the swap.
    pub model_value: Vec<usize>,
    pub model_is_transposition: bool,
    /// Whether `x1 + x1` lies in the operadic Laplaza set.
    pub operadic_in_scope: bool,
    pub operadic_verdict: Verdict,
    /// The permutation groupoid is a pseudo algebra for `S = T` only if this
    /// is false; it is true.
    pub discrepancy: bool,
}

pub fn gould_certificate() -> Result<GouldReport> {
    let sig = Signature::cmon();
    let object = Term::parse(&sig, "(plus x1 x1)", Some(1))?;
    let step = CoherenceStep {
        position: vec![],
        before: parse_node(&sig, "(plus x1 x2)")?,
        after: parse_node(&sig, "(plus x2 x1)")?,
        pieces: vec![Node::Var(1), Node::Var(1)],
    };
    let swap = CoherencePath::new(&sig, LaplazaSpec::Full, object.clone(), vec![step.clone()])?;
    let id = CoherencePath::identity(object.clone());
    let full = decide_equal(&sig, LaplazaSpec::Full, &swap, &id, Caps::default())?;
    let value = perm_model(&sig, &swap)?;
    let operadic = decide_equal(&sig, LaplazaSpec::Operadic, &swap, &id, Caps::default())?;
    let forced = full.verdict == Verdict::ForcedEqual;
    Ok(GouldReport {
        object: object.display(&sig).to_string(),
        step: step.to_json(&sig),
        forced,
        derivation: full.derivation.unwrap_or_default(),
        model_value: value.table().table().to_vec(),
        model_is_transposition: value.is_transposition(),
        operadic_in_scope: Projection::of(&sig, &object).in_laplaza(LaplazaSpec::Operadic),
        operadic_verdict: operadic.verdict,
        discrepancy: forced && !value.is_identity(),
    })
}
