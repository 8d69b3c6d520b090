//! Coherence isomorphisms of the free theory on a Laplaza collection.
//!
//! Objects are free words whose generators lie in `S`; a morphism is a path
//! of [`CoherenceStep`]s, each replacing a sub-composite `u[c]` by `v[c]`
//! where the patterns `u`, `v` project to the same element of `S(k)`.
//! Searches are bounded by [`Caps`]; equality of parallel paths is decided
//! soundly by [`decide_equal`] with an honest `Unknown` outcome.

mod decide;
mod models;
mod neighbors;
pub mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::FinMap;
use crate::nf::{LaplazaSpec, Projection};
use crate::term::{parse_node, Node, Signature, Term};

pub use decide::{
    decide_equal, gould_certificate, replay_derivation, Decision, GouldReport, Mode, ModelWitness,
    Rewrite, Verdict,
};
pub use models::{
    elements, monomial_model, path_model, perm_model, step_bijection, Elem, ElementBijection,
    Permutation,
};
pub use neighbors::{find_path, rewrite_neighbors, PathSearch, PatternCache};

/// Search bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest object (node count) a search may visit.
    pub size: usize,
    /// Longest path explored by [`find_path`].
    pub depth: usize,
    /// Number of states explored before giving up.
    pub states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            size: 10,
            depth: 12,
            states: 20_000,
        }
    }
}

/// An object of the free theory on `S`: a word each of whose generators,
/// read as a word of `T`, lies in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SObject {
    term: Term,
    projection: Projection,
}

impl SObject {
    pub fn new(sig: &Signature, spec: LaplazaSpec, term: Term) -> Result<Self> {
        spec.check_compatible(sig)?;
        for op in sig.ops() {
            let generic = Node::App(op, (1..=sig.arity(op)).map(Node::Var).collect());
            if !Projection::of_node(sig, sig.arity(op), &generic).in_laplaza(spec) {
                return Err(Error::InvalidObject(format!(
                    "generator `{}` is not in the Laplaza set {spec}",
                    sig.symbol(op)
                )));
            }
        }
        let projection = Projection::of(sig, &term);
        Ok(SObject { term, projection })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }
}

/// Replacement of the sub-composite `before[pieces]` at `position` by
/// `after[pieces]`. Pattern variables `x_j` stand for `pieces[j-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoherenceStep {
    pub position: Vec<usize>,
    pub before: Node,
    pub after: Node,
    pub pieces: Vec<Node>,
}

impl CoherenceStep {
    pub fn reverse(&self) -> CoherenceStep {
        CoherenceStep {
            position: self.position.clone(),
            before: self.after.clone(),
            after: self.before.clone(),
            pieces: self.pieces.clone(),
        }
    }

    pub fn source_subterm(&self) -> Node {
        self.before.substitute(&self.pieces)
    }

    pub fn target_subterm(&self) -> Node {
        self.after.substitute(&self.pieces)
    }

    /// `ι_{a,a}`.
    pub fn is_identity(&self) -> bool {
        self.before == self.after
    }

    /// Checks the generator condition and applies the step to `object`.
    pub fn apply(&self, sig: &Signature, spec: LaplazaSpec, object: &Term) -> Result<Term> {
        let k = self.pieces.len();
        if self.before.max_var() > k || self.after.max_var() > k {
            return Err(Error::InvalidStep(format!(
                "pattern uses a variable beyond its {k} pieces"
            )));
        }
        self.before.check(sig, k)?;
        self.after.check(sig, k)?;
        let pu = Projection::of_node(sig, k, &self.before);
        let pv = Projection::of_node(sig, k, &self.after);
        if pu != pv {
            return Err(Error::InvalidStep(format!(
                "patterns project to different words ({pu} vs {pv})"
            )));
        }
        if !pu.in_laplaza(spec) {
            return Err(Error::InvalidStep(format!(
                "pattern projection {pu} is not in the Laplaza set {spec}"
            )));
        }
        let here = object.root().at(&self.position).ok_or_else(|| {
            Error::InvalidStep(format!("position {:?} not in object", self.position))
        })?;
        if *here != self.source_subterm() {
            return Err(Error::InvalidStep(format!(
                "step expects `{}` at {:?} but found `{}`",
                self.source_subterm().display(sig),
                self.position,
                here.display(sig)
            )));
        }
        let root = object
            .root()
            .replace_at(&self.position, self.target_subterm())
            .expect("position checked");
        Term::new(sig, object.arity(), root)
    }

    /// Applies without revalidating the generator condition.
    pub(crate) fn apply_unchecked(&self, object: &Node) -> Node {
        object
            .replace_at(&self.position, self.target_subterm())
            .expect("step position valid")
    }

    pub fn to_json(&self, sig: &Signature) -> StepJson {
        StepJson {
            position: self.position.clone(),
            before: self.before.display(sig).to_string(),
            after: self.after.display(sig).to_string(),
            pieces: self
                .pieces
                .iter()
                .map(|p| p.display(sig).to_string())
                .collect(),
        }
    }

    pub fn from_json(sig: &Signature, json: &StepJson) -> Result<Self> {
        Ok(CoherenceStep {
            position: json.position.clone(),
            before: parse_node(sig, &json.before)?,
            after: parse_node(sig, &json.after)?,
            pieces: json
                .pieces
                .iter()
                .map(|p| parse_node(sig, p))
                .collect::<Result<_>>()?,
        })
    }
}

/// Wire form of a step: patterns and pieces in the term grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub position: Vec<usize>,
    pub before: String,
    pub after: String,
    pub pieces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoherencePath {
    source: Term,
    target: Term,
    steps: Vec<CoherenceStep>,
}

impl CoherencePath {
    pub fn identity(object: Term) -> Self {
        CoherencePath {
            target: object.clone(),
            source: object,
            steps: Vec::new(),
        }
    }

    /// Replays `steps` from `source`, validating each one.
    pub fn new(
        sig: &Signature,
        spec: LaplazaSpec,
        source: Term,
        steps: Vec<CoherenceStep>,
    ) -> Result<Self> {
        spec.check_compatible(sig)?;
        let mut cur = source.clone();
        for (i, s) in steps.iter().enumerate() {
            cur = s
                .apply(sig, spec, &cur)
                .map_err(|e| Error::InvalidStep(format!("step {i}: {e}")))?;
        }
        Ok(CoherencePath {
            source,
            target: cur,
            steps,
        })
    }

    pub(crate) fn from_parts(source: Term, target: Term, steps: Vec<CoherenceStep>) -> Self {
        CoherencePath {
            source,
            target,
            steps,
        }
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> &Term {
        &self.target
    }

    pub fn steps(&self) -> &[CoherenceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The inverse path; each step is reversed, which is `ι_{ab} ∼ ι_{ba}^{-1}`.
    pub fn reverse(&self) -> CoherencePath {
        CoherencePath {
            source: self.target.clone(),
            target: self.source.clone(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(CoherenceStep::reverse)
                .collect(),
        }
    }

    pub fn concat(&self, next: &CoherencePath) -> Result<CoherencePath> {
        if self.target != next.source {
            return Err(Error::NotParallel(
                "concatenation: target of the first path is not the source of the second".into(),
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(CoherencePath {
            source: self.source.clone(),
            target: next.target.clone(),
            steps,
        })
    }

    /// The intermediate objects, `len() + 1` of them.
    pub fn objects(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.source.root().clone());
        for s in &self.steps {
            let next = s.apply_unchecked(out.last().expect("non-empty"));
            out.push(next);
        }
        out
    }

    /// Applies the variable relabeling `f` to every object of the path. This
    /// is `()_f` on morphisms; non-injective `f` identifies variables.
    pub fn act_f(&self, sig: &Signature, spec: LaplazaSpec, f: &FinMap) -> Result<CoherencePath> {
        if f.dom_size() != self.source.arity() {
            return Err(Error::Arity(format!(
                "map domain {} vs path arity {}",
                f.dom_size(),
                self.source.arity()
            )));
        }
        let source = crate::term::act_f(&self.source, f)?;
        let steps = self
            .steps
            .iter()
            .map(|s| CoherenceStep {
                position: s.position.clone(),
                before: s.before.clone(),
                after: s.after.clone(),
                pieces: s
                    .pieces
                    .iter()
                    .map(|p| p.map_vars(&mut |i| f.apply(i)))
                    .collect(),
            })
            .collect();
        CoherencePath::new(sig, spec, source, steps)
    }

    pub fn to_json(&self, sig: &Signature) -> PathJson {
        PathJson {
            source: self.source.display(sig).to_string(),
            target: self.target.display(sig).to_string(),
            arity: self.source.arity(),
            steps: self.steps.iter().map(|s| s.to_json(sig)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub source: String,
    pub target: String,
    pub arity: usize,
    pub steps: Vec<StepJson>,
}

impl PathJson {
    /// Rebuilds and revalidates the path; the stored target must match the
    /// replayed one.
    pub fn to_path(&self, sig: &Signature, spec: LaplazaSpec) -> Result<CoherencePath> {
        let source = Term::parse(sig, &self.source, Some(self.arity))?;
        let steps = self
            .steps
            .iter()
            .map(|s| CoherenceStep::from_json(sig, s))
            .collect::<Result<Vec<_>>>()?;
        let path = CoherencePath::new(sig, spec, source, steps)?;
        let target = Term::parse(sig, &self.target, Some(self.arity))?;
        if path.target() != &target {
            return Err(Error::InvalidStep(format!(
                "path ends at {}, not {}",
                path.target().display(sig),
                self.target
            )));
        }
        Ok(path)
    }
}

impl fmt::Display for CoherenceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {:?}: {:?} -> {:?} with {:?}",
            self.position, self.before, self.after, self.pieces
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmon(s: &str, n: usize) -> Term {
        Term::parse(&Signature::cmon(), s, Some(n)).unwrap()
    }

    pub(crate) fn swap_step(pieces: Vec<Node>) -> CoherenceStep {
        let sig = Signature::cmon();
        CoherenceStep {
            position: vec![],
            before: parse_node(&sig, "(plus x1 x2)").unwrap(),
            after: parse_node(&sig, "(plus x2 x1)").unwrap(),
            pieces,
        }
    }

    #[test]
    fn step_application_and_validation() {
        let sig = Signature::cmon();
        let a = cmon("(plus x1 x2)", 2);
        let s = swap_step(vec![Node::Var(1), Node::Var(2)]);
        let b = s.apply(&sig, LaplazaSpec::Operadic, &a).unwrap();
        assert_eq!(b, cmon("(plus x2 x1)", 2));
        assert!(s.apply(&sig, LaplazaSpec::Operadic, &b).is_err());
        let bad = CoherenceStep {
            after: parse_node(&sig, "(plus x1 x1)").unwrap(),
            ..s.clone()
        };
        assert!(bad.apply(&sig, LaplazaSpec::Full, &a).is_err());
    }

    #[test]
    fn path_reverse_and_concat() {
        let sig = Signature::cmon();
        let a = cmon("(plus x1 x2)", 2);
        let p = CoherencePath::new(
            &sig,
            LaplazaSpec::Operadic,
            a.clone(),
            vec![swap_step(vec![Node::Var(1), Node::Var(2)])],
        )
        .unwrap();
        let loop_ = p.concat(&p.reverse()).unwrap();
        assert_eq!(loop_.source(), &a);
        assert_eq!(loop_.target(), &a);
        assert_eq!(loop_.objects().len(), 3);
        assert!(p.concat(&p).is_err());
    }

    #[test]
    fn act_f_identifies_variables_along_a_path() {
        let sig = Signature::cmon();
        let p = CoherencePath::new(
            &sig,
            LaplazaSpec::Full,
            cmon("(plus x1 x2)", 2),
            vec![swap_step(vec![Node::Var(1), Node::Var(2)])],
        )
        .unwrap();
        let f: FinMap = "[1,1]:2->1".parse().unwrap();
        let q = p.act_f(&sig, LaplazaSpec::Full, &f).unwrap();
        assert_eq!(q.source(), &cmon("(plus x1 x1)", 1));
        assert_eq!(q.target(), &cmon("(plus x1 x1)", 1));
    }

    #[test]
    fn sobject_validation() {
        let sig = Signature::csr();
        let t = Term::parse(&sig, "(times x1 x1)", None).unwrap();
        assert!(SObject::new(&sig, LaplazaSpec::LaplazaSemiring, t.clone()).is_ok());
        assert!(SObject::new(&sig, LaplazaSpec::Operadic, t).is_err());
    }

    #[test]
    fn step_json_roundtrip() {
        let sig = Signature::cmon();
        let s = swap_step(vec![Node::Var(1), Node::Var(1)]);
        let back = CoherenceStep::from_json(&sig, &s.to_json(&sig)).unwrap();
        assert_eq!(back, s);
    }
}
