//! Normal forms for commutative monoids and commutative semi-rings, the
//! projections from free words onto them, and Laplaza-set membership.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::FinMap;
use crate::term::{ops, Node, Signature, Term, Theory};

/// A multiset over `{1..n}`; the empty multiset is the unit `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonoidNF {
    counts: Vec<u32>,
}

impl MonoidNF {
    pub fn zero(arity: usize) -> Self {
        MonoidNF {
            counts: vec![0; arity],
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MonoidNF { counts }
    }

    /// From a list of (1-based) variable occurrences.
    pub fn from_vars(arity: usize, vars: &[usize]) -> Result<Self> {
        let mut nf = MonoidNF::zero(arity);
        for &v in vars {
            if v == 0 || v > arity {
                return Err(Error::Arity(format!("x{v} outside arity {arity}")));
            }
            nf.counts[v - 1] += 1;
        }
        Ok(nf)
    }

    pub fn arity(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, var: usize) -> u32 {
        self.counts[var - 1]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Occurrences in increasing variable order.
    pub fn vars(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
            .collect()
    }

    pub fn add(&self, other: &MonoidNF) -> Result<MonoidNF> {
        self.same_arity(other)?;
        Ok(MonoidNF {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `self - other`, defined when `other ≤ self` pointwise.
    pub fn checked_sub(&self, other: &MonoidNF) -> Option<MonoidNF> {
        if self.arity() != other.arity() {
            return None;
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(MonoidNF { counts })
    }

    pub fn le(&self, other: &MonoidNF) -> bool {
        other.checked_sub(self).is_some()
    }

    fn same_arity(&self, other: &MonoidNF) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::Arity(format!(
                "monoid words over {} and {} variables",
                self.arity(),
                other.arity()
            )));
        }
        Ok(())
    }

    /// Image under `()_f`.
    pub fn pushforward(&self, f: &FinMap) -> Result<MonoidNF> {
        if f.dom_size() != self.arity() {
            return Err(Error::Arity(format!(
                "map domain {} vs arity {}",
                f.dom_size(),
                self.arity()
            )));
        }
        let mut counts = vec![0; f.cod_size()];
        for (i, &c) in self.counts.iter().enumerate() {
            counts[f.apply(i + 1) - 1] += c;
        }
        Ok(MonoidNF { counts })
    }

    /// `γ` in the theory of commutative monoids.
    pub fn gamma(&self, args: &[MonoidNF]) -> Result<MonoidNF> {
        if args.len() != self.arity() {
            return Err(Error::Arity(format!(
                "γ: {} arguments for arity {}",
                args.len(),
                self.arity()
            )));
        }
        let mut counts = Vec::with_capacity(args.iter().map(MonoidNF::arity).sum());
        for (a, &c) in args.iter().zip(&self.counts) {
            counts.extend(a.counts.iter().map(|&k| k * c));
        }
        Ok(MonoidNF { counts })
    }

    /// Re-reads the normal form as a left-nested word.
    pub fn to_term(&self) -> Term {
        let node = self
            .vars()
            .into_iter()
            .map(Node::Var)
            .reduce(|a, b| Node::App(ops::PLUS, vec![a, b]))
            .unwrap_or(Node::App(ops::CMON_ZERO, vec![]));
        Term::from_parts(self.arity(), node)
    }
}

impl fmt::Display for MonoidNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return write!(f, "0");
        }
        for (k, v) in vars.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// A sorted multiset of (sorted) variable occurrences.
pub type Monomial = Vec<usize>;

/// A multiset of monomials. The empty polynomial is `0` and the empty
/// monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyNF {
    arity: usize,
    monomials: Vec<Monomial>,
}

impl PolyNF {
    pub fn zero(arity: usize) -> Self {
        PolyNF {
            arity,
            monomials: Vec::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        PolyNF {
            arity,
            monomials: vec![Vec::new()],
        }
    }

    pub fn var(arity: usize, i: usize) -> Self {
        PolyNF {
            arity,
            monomials: vec![vec![i]],
        }
    }

    pub fn from_monomials(arity: usize, mut monomials: Vec<Monomial>) -> Result<Self> {
        for m in &mut monomials {
            if m.iter().any(|&v| v == 0 || v > arity) {
                return Err(Error::Arity(format!(
                    "monomial {m:?} outside arity {arity}"
                )));
            }
            m.sort_unstable();
        }
        monomials.sort();
        Ok(PolyNF { arity, monomials })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn add(&self, other: &PolyNF) -> PolyNF {
        let mut monomials = self.monomials.clone();
        monomials.extend(other.monomials.iter().cloned());
        monomials.sort();
        PolyNF {
            arity: self.arity.max(other.arity),
            monomials,
        }
    }

    pub fn mul(&self, other: &PolyNF) -> PolyNF {
        let mut monomials = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for a in &self.monomials {
            for b in &other.monomials {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                monomials.push(m);
            }
        }
        monomials.sort();
        PolyNF {
            arity: self.arity.max(other.arity),
            monomials,
        }
    }

    pub fn pushforward(&self, f: &FinMap) -> Result<PolyNF> {
        if f.dom_size() != self.arity {
            return Err(Error::Arity(format!(
                "map domain {} vs arity {}",
                f.dom_size(),
                self.arity
            )));
        }
        PolyNF::from_monomials(
            f.cod_size(),
            self.monomials
                .iter()
                .map(|m| m.iter().map(|&v| f.apply(v)).collect())
                .collect(),
        )
    }

    /// `γ` in the theory of commutative semi-rings: substitute `args[i]`
    /// (shifted past the earlier arguments) for `x_{i+1}` and expand.
    pub fn gamma(&self, args: &[PolyNF]) -> Result<PolyNF> {
        if args.len() != self.arity {
            return Err(Error::Arity(format!(
                "γ: {} arguments for arity {}",
                args.len(),
                self.arity
            )));
        }
        let total: usize = args.iter().map(|a| a.arity).sum();
        let mut offset = 0;
        let shifted: Vec<PolyNF> = args
            .iter()
            .map(|a| {
                let off = offset;
                offset += a.arity;
                PolyNF {
                    arity: total,
                    monomials: a
                        .monomials
                        .iter()
                        .map(|m| m.iter().map(|&v| v + off).collect())
                        .collect(),
                }
            })
            .collect();
        let mut out = PolyNF::zero(total);
        for m in &self.monomials {
            let mut prod = PolyNF::one(total);
            for &v in m {
                prod = prod.mul(&shifted[v - 1]);
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Re-reads the normal form as a sum of left-nested products.
    pub fn to_term(&self) -> Term {
        let mono = |m: &Monomial| {
            m.iter()
                .map(|&v| Node::Var(v))
                .reduce(|a, b| Node::App(ops::TIMES, vec![a, b]))
                .unwrap_or(Node::App(ops::ONE, vec![]))
        };
        let node = self
            .monomials
            .iter()
            .map(mono)
            .reduce(|a, b| Node::App(ops::PLUS, vec![a, b]))
            .unwrap_or(Node::App(ops::ZERO, vec![]));
        Term::from_parts(self.arity, node)
    }

    /// Distinct monomials, none with a repeated variable.
    pub fn is_distinct_square_free(&self) -> bool {
        self.monomials.windows(2).all(|w| w[0] != w[1])
            && self
                .monomials
                .iter()
                .all(|m| m.windows(2).all(|w| w[0] != w[1]))
    }
}

impl fmt::Display for PolyNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.monomials.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_empty() {
                write!(f, "1")?;
            }
            for (j, v) in m.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "x{v}")?;
            }
        }
        Ok(())
    }
}

fn require(sig: &Signature, theory: Theory) -> Result<()> {
    if sig.theory() != Some(theory) {
        let expected = match theory {
            Theory::Cmon => "cmon",
            Theory::Csr => "csr",
        };
        return Err(Error::WrongSignature {
            expected: expected.into(),
            got: sig.name().into(),
        });
    }
    Ok(())
}

pub fn project_monoid(sig: &Signature, w: &Term) -> Result<MonoidNF> {
    require(sig, Theory::Cmon)?;
    Ok(project_monoid_node(w.arity(), w.root()))
}

pub(crate) fn project_monoid_node(arity: usize, node: &Node) -> MonoidNF {
    let mut nf = MonoidNF::zero(arity);
    let mut leaves = Vec::new();
    node.leaves(&mut leaves);
    for v in leaves {
        nf.counts[v - 1] += 1;
    }
    nf
}

pub fn project_semiring(sig: &Signature, w: &Term) -> Result<PolyNF> {
    require(sig, Theory::Csr)?;
    Ok(project_semiring_node(w.arity(), w.root()))
}

pub(crate) fn project_semiring_node(arity: usize, node: &Node) -> PolyNF {
    match node {
        Node::Var(i) => PolyNF::var(arity, *i),
        Node::App(op, args) => {
            match *op {
                ops::PLUS => project_semiring_node(arity, &args[0])
                    .add(&project_semiring_node(arity, &args[1])),
                ops::TIMES => project_semiring_node(arity, &args[0])
                    .mul(&project_semiring_node(arity, &args[1])),
                ops::ZERO => PolyNF::zero(arity),
                _ => PolyNF::one(arity),
            }
        }
    }
}

/// Which words are forced to have commuting coherence diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplazaSpec {
    /// Every word: `S = T`.
    Full,
    /// The underlying operad: words using each variable exactly once.
    Operadic,
    /// Sums of distinct square-free monomials, for commutative semi-rings.
    LaplazaSemiring,
}

impl LaplazaSpec {
    pub fn as_str(self) -> &'static str {
        match self {
            LaplazaSpec::Full => "full",
            LaplazaSpec::Operadic => "operadic",
            LaplazaSpec::LaplazaSemiring => "laplaza-semiring",
        }
    }

    pub fn check_compatible(self, sig: &Signature) -> Result<()> {
        let ok = match self {
            LaplazaSpec::Full => true,
            // free theories and cmon are free on an operad; csr is not
            LaplazaSpec::Operadic => sig.theory() != Some(Theory::Csr),
            LaplazaSpec::LaplazaSemiring => sig.theory() == Some(Theory::Csr),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                spec: self.as_str().into(),
                signature: sig.name().into(),
            })
        }
    }
}

impl fmt::Display for LaplazaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LaplazaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(LaplazaSpec::Full),
            "operadic" => Ok(LaplazaSpec::Operadic),
            "laplaza-semiring" => Ok(LaplazaSpec::LaplazaSemiring),
            other => Err(Error::Parse(format!(
                "unknown laplaza spec `{other}` (full, operadic, laplaza-semiring)"
            ))),
        }
    }
}

/// The image of a free word in the quotient theory presented by its
/// signature. Signatures without a built-in theory are free, so the word is
/// its own image.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Projection {
    Free(Term),
    Monoid(MonoidNF),
    Poly(PolyNF),
}

impl Projection {
    pub fn of(sig: &Signature, w: &Term) -> Projection {
        Projection::of_node(sig, w.arity(), w.root())
    }

    pub(crate) fn of_node(sig: &Signature, arity: usize, node: &Node) -> Projection {
        match sig.theory() {
            Some(Theory::Cmon) => Projection::Monoid(project_monoid_node(arity, node)),
            Some(Theory::Csr) => Projection::Poly(project_semiring_node(arity, node)),
            None => Projection::Free(Term::from_parts(arity, node.clone())),
        }
    }

    /// Membership in `S(n)`; the caller has checked compatibility.
    pub fn in_laplaza(&self, spec: LaplazaSpec) -> bool {
        match (spec, self) {
            (LaplazaSpec::Full, _) => true,
            (LaplazaSpec::Operadic, Projection::Monoid(m)) => m.counts.iter().all(|&c| c == 1),
            (LaplazaSpec::Operadic, Projection::Free(t)) => crate::term::is_linear(t),
            (LaplazaSpec::LaplazaSemiring, Projection::Poly(p)) => p.is_distinct_square_free(),
            _ => false,
        }
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projection::Free(t) => write!(f, "{t:?}"),
            Projection::Monoid(m) => m.fmt(f),
            Projection::Poly(p) => p.fmt(f),
        }
    }
}

pub fn laplaza_member(spec: LaplazaSpec, sig: &Signature, w: &Term) -> Result<bool> {
    spec.check_compatible(sig)?;
    Ok(Projection::of(sig, w).in_laplaza(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csr(s: &str, n: usize) -> Term {
        Term::parse(&Signature::csr(), s, Some(n)).unwrap()
    }

    fn cmon(s: &str, n: usize) -> Term {
        Term::parse(&Signature::cmon(), s, Some(n)).unwrap()
    }

    #[test]
    fn monoid_projection() {
        let sig = Signature::cmon();
        assert!(project_monoid(&sig, &cmon("(zero)", 2)).unwrap().is_zero());
        let nf = project_monoid(&sig, &cmon("(plus (plus x1 x2) x1)", 2)).unwrap();
        assert_eq!(nf.vars(), vec![1, 1, 2]);
        assert_eq!(nf.to_string(), "x1 + x1 + x2");
        assert!(project_monoid(&Signature::csr(), &csr("x1", 1)).is_err());
    }

    #[test]
    fn semiring_projection() {
        let sig = Signature::csr();
        let p = |s: &str, n| project_semiring(&sig, &csr(s, n)).unwrap();
        assert_eq!(
            p("(times (plus x1 x2) x3)", 3).monomials(),
            &[vec![1, 3], vec![2, 3]]
        );
        assert!(p("(times (zero) x1)", 1).is_zero());
        assert_eq!(
            p("(times (plus x1 x2) (plus x1 x2))", 2).monomials(),
            &[vec![1, 1], vec![1, 2], vec![1, 2], vec![2, 2]]
        );
        assert_eq!(p("(times (one) x1)", 1).monomials(), &[vec![1]]);
        assert_eq!(p("(plus (one) (zero))", 0).to_string(), "1");
        assert!(project_semiring(&Signature::cmon(), &cmon("x1", 1)).is_err());
    }

    #[test]
    fn membership() {
        let sig = Signature::csr();
        let lap = LaplazaSpec::LaplazaSemiring;
        assert!(laplaza_member(lap, &sig, &csr("(times (plus x1 x2) x3)", 3)).unwrap());
        assert!(!laplaza_member(lap, &sig, &csr("(times x1 x1)", 1)).unwrap());
        assert!(!laplaza_member(lap, &sig, &csr("(plus (times x1 x2) (times x2 x1))", 2)).unwrap());
        assert!(laplaza_member(lap, &sig, &csr("(times (zero) (times x1 x1))", 1)).unwrap());
        let cm = Signature::cmon();
        assert!(!laplaza_member(LaplazaSpec::Operadic, &cm, &cmon("(plus x1 x1)", 1)).unwrap());
        assert!(laplaza_member(LaplazaSpec::Operadic, &cm, &cmon("(plus x2 x1)", 2)).unwrap());
        assert!(laplaza_member(LaplazaSpec::Full, &cm, &cmon("(plus x1 x1)", 1)).unwrap());
        assert!(laplaza_member(LaplazaSpec::Operadic, &sig, &csr("x1", 1)).is_err());
        assert!(laplaza_member(lap, &cm, &cmon("x1", 1)).is_err());
    }

    #[test]
    fn normal_forms_reread_as_terms() {
        let sig = Signature::csr();
        let w = csr("(times (plus x1 (one)) (plus x2 (zero)))", 2);
        let nf = project_semiring(&sig, &w).unwrap();
        assert_eq!(project_semiring(&sig, &nf.to_term()).unwrap(), nf);
        let m = project_monoid(&Signature::cmon(), &cmon("(plus x2 (plus (zero) x2))", 2)).unwrap();
        assert_eq!(project_monoid(&Signature::cmon(), &m.to_term()).unwrap(), m);
    }

    #[test]
    fn spec_parsing() {
        for s in ["full", "operadic", "laplaza-semiring"] {
            assert_eq!(s.parse::<LaplazaSpec>().unwrap().as_str(), s);
        }
        assert!("laplaza".parse::<LaplazaSpec>().is_err());
    }
}
