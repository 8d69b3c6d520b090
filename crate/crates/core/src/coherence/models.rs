//! Element semantics for coherence paths.
//!
//! A word denotes a finite set of elements: a variable has one element, `+`
//! is disjoint union, `*` is product, `0` is empty and `1` a point. For cmon
//! the elements are the variable occurrences; for csr they are the monomial
//! occurrences of the expansion, each with its factor occurrences. A step
//! sends the `k`-th occurrence of a variable in its source pattern to the
//! `k`-th occurrence in its target pattern, which is the only choice when the
//! pattern is linear or a sum of distinct square-free monomials.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::FinMap;
use crate::term::{ops, Node, Signature, Theory};

use super::{CoherencePath, CoherenceStep};

/// One element of a word's denotation. Atoms carry the variable they come
/// from and a tag used to follow them through a step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atom(usize, u32),
    Unit,
    Left(Box<Elem>),
    Right(Box<Elem>),
    Pair(Box<Elem>, Box<Elem>),
}

impl Elem {
    fn atoms(&self, out: &mut Vec<(usize, u32)>) {
        match self {
            Elem::Atom(v, t) => out.push((*v, *t)),
            Elem::Unit => {}
            Elem::Left(e) | Elem::Right(e) => e.atoms(out),
            Elem::Pair(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    fn atom_count(&self) -> usize {
        let mut v = Vec::new();
        self.atoms(&mut v);
        v.len()
    }

    fn retag(&self, next: &mut u32) -> Elem {
        match self {
            Elem::Atom(v, _) => {
                *next += 1;
                Elem::Atom(*v, *next - 1)
            }
            Elem::Unit => Elem::Unit,
            Elem::Left(e) => Elem::Left(Box::new(e.retag(next))),
            Elem::Right(e) => Elem::Right(Box::new(e.retag(next))),
            Elem::Pair(a, b) => Elem::Pair(Box::new(a.retag(next)), Box::new(b.retag(next))),
        }
    }

    fn untagged(&self) -> Elem {
        match self {
            Elem::Atom(v, _) => Elem::Atom(*v, 0),
            Elem::Unit => Elem::Unit,
            Elem::Left(e) => Elem::Left(Box::new(e.untagged())),
            Elem::Right(e) => Elem::Right(Box::new(e.untagged())),
            Elem::Pair(a, b) => Elem::Pair(Box::new(a.untagged()), Box::new(b.untagged())),
        }
    }

    fn monomial(&self) -> Vec<usize> {
        let mut atoms = Vec::new();
        self.atoms(&mut atoms);
        let mut m: Vec<usize> = atoms.into_iter().map(|(v, _)| v).collect();
        m.sort_unstable();
        m
    }
}

fn check_semantics(sig: &Signature) -> Result<()> {
    if sig.theory().is_none() {
        return Err(Error::WrongSignature {
            expected: "cmon or csr".into(),
            got: sig.name().into(),
        });
    }
    Ok(())
}

/// The elements of a word in canonical order, untagged.
pub fn elements(sig: &Signature, node: &Node) -> Result<Vec<Elem>> {
    check_semantics(sig)?;
    Ok(elements_of(sig.theory() == Some(Theory::Csr), node))
}

fn elements_of(csr: bool, node: &Node) -> Vec<Elem> {
    match node {
        Node::Var(i) => vec![Elem::Atom(*i, 0)],
        Node::App(op, args) => match (*op, args.as_slice()) {
            (ops::PLUS, [a, b]) => elements_of(csr, a)
                .into_iter()
                .map(|e| Elem::Left(Box::new(e)))
                .chain(
                    elements_of(csr, b)
                        .into_iter()
                        .map(|e| Elem::Right(Box::new(e))),
                )
                .collect(),
            (ops::TIMES, [a, b]) if csr => {
                let right = elements_of(csr, b);
                let mut out = Vec::new();
                for l in elements_of(csr, a) {
                    for r in &right {
                        out.push(Elem::Pair(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
                out
            }
            (ops::ONE, []) if csr => vec![Elem::Unit],
            _ => Vec::new(),
        },
    }
}

/// Splits an element of `pattern[pieces]` into an element of the pattern,
/// whose atoms are tagged by occurrence, and the piece elements filling
/// those atoms.
fn decompose(csr: bool, pattern: &Node, e: &Elem, fills: &mut Vec<(usize, Elem)>) -> Result<Elem> {
    let bad = || Error::Model("element does not match its word".into());
    match pattern {
        Node::Var(j) => {
            fills.push((*j, e.clone()));
            Ok(Elem::Atom(*j, fills.len() as u32 - 1))
        }
        Node::App(op, args) => match (*op, args.as_slice(), e) {
            (ops::PLUS, [a, _], Elem::Left(x)) => {
                Ok(Elem::Left(Box::new(decompose(csr, a, x, fills)?)))
            }
            (ops::PLUS, [_, b], Elem::Right(x)) => {
                Ok(Elem::Right(Box::new(decompose(csr, b, x, fills)?)))
            }
            (ops::TIMES, [a, b], Elem::Pair(x, y)) if csr => {
                let l = decompose(csr, a, x, fills)?;
                let r = decompose(csr, b, y, fills)?;
                Ok(Elem::Pair(Box::new(l), Box::new(r)))
            }
            (ops::ONE, [], Elem::Unit) if csr => Ok(Elem::Unit),
            _ => Err(bad()),
        },
    }
}

fn fill(skeleton: &Elem, fills: &mut HashMap<usize, std::vec::IntoIter<Elem>>) -> Result<Elem> {
    Ok(match skeleton {
        Elem::Atom(j, _) => fills
            .get_mut(j)
            .and_then(|it| it.next())
            .ok_or_else(|| Error::Model("pattern occurrence counts differ".into()))?,
        Elem::Unit => Elem::Unit,
        Elem::Left(e) => Elem::Left(Box::new(fill(e, fills)?)),
        Elem::Right(e) => Elem::Right(Box::new(fill(e, fills)?)),
        Elem::Pair(a, b) => Elem::Pair(Box::new(fill(a, fills)?), Box::new(fill(b, fills)?)),
    })
}

/// Image of the tagged element `e` of `object` under `step`.
fn map_element(csr: bool, object: &Node, step: &CoherenceStep, e: &Elem) -> Result<Elem> {
    fn descend(
        csr: bool,
        node: &Node,
        pos: &[usize],
        step: &CoherenceStep,
        e: &Elem,
    ) -> Result<Elem> {
        let Some((&k, rest)) = pos.split_first() else {
            return map_at(csr, step, e);
        };
        let Node::App(_, args) = node else {
            return Err(Error::Model("step position outside object".into()));
        };
        let child = &args[k];
        Ok(match (k, e) {
            (0, Elem::Left(x)) => Elem::Left(Box::new(descend(csr, child, rest, step, x)?)),
            (1, Elem::Right(x)) => Elem::Right(Box::new(descend(csr, child, rest, step, x)?)),
            (_, Elem::Left(_) | Elem::Right(_)) => e.clone(),
            (0, Elem::Pair(x, y)) => {
                Elem::Pair(Box::new(descend(csr, child, rest, step, x)?), y.clone())
            }
            (1, Elem::Pair(x, y)) => {
                Elem::Pair(x.clone(), Box::new(descend(csr, child, rest, step, y)?))
            }
            _ => return Err(Error::Model("element does not match its word".into())),
        })
    }
    descend(csr, object, &step.position, step, e)
}

fn map_at(csr: bool, step: &CoherenceStep, e: &Elem) -> Result<Elem> {
    let mut fills = Vec::new();
    let skeleton = decompose(csr, &step.before, e, &mut fills)?.untagged();
    let monomial = skeleton.monomial();
    let rank = elements_of(csr, &step.before)
        .iter()
        .filter(|s| s.monomial() == monomial)
        .position(|s| *s == skeleton)
        .ok_or_else(|| Error::Model("skeleton not among pattern elements".into()))?;
    let target = elements_of(csr, &step.after)
        .into_iter()
        .filter(|s| s.monomial() == monomial)
        .nth(rank)
        .ok_or_else(|| Error::Model("patterns have different elements".into()))?;
    let mut by_var: HashMap<usize, Vec<Elem>> = HashMap::new();
    for (j, x) in fills {
        by_var.entry(j).or_default().push(x);
    }
    let mut iters = by_var
        .into_iter()
        .map(|(j, v)| (j, v.into_iter()))
        .collect::<HashMap<_, _>>();
    fill(&target, &mut iters)
}

/// A bijection between the elements of two words that also permutes the
/// factor occurrences inside each element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementBijection {
    /// For each source element: its image and, for each of its atoms, the
    /// position of that atom in the image (both 1-based).
    pub images: Vec<(usize, Vec<usize>)>,
}

impl ElementBijection {
    pub fn identity(atom_counts: &[usize]) -> Self {
        ElementBijection {
            images: atom_counts
                .iter()
                .enumerate()
                .map(|(i, &n)| (i + 1, (1..=n).collect()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, (j, atoms))| {
            *j == i + 1 && atoms.iter().enumerate().all(|(a, &b)| b == a + 1)
        })
    }

    /// Apply `self`, then `next`.
    pub fn then(&self, next: &ElementBijection) -> ElementBijection {
        ElementBijection {
            images: self
                .images
                .iter()
                .map(|(j, atoms)| {
                    let (k, inner) = &next.images[j - 1];
                    (*k, atoms.iter().map(|&a| inner[a - 1]).collect())
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> ElementBijection {
        let mut images = vec![(0, Vec::new()); self.images.len()];
        for (i, (j, atoms)) in self.images.iter().enumerate() {
            let mut back = vec![0; atoms.len()];
            for (a, &b) in atoms.iter().enumerate() {
                back[b - 1] = a + 1;
            }
            images[j - 1] = (i + 1, back);
        }
        ElementBijection { images }
    }

    /// The map on elements alone.
    pub fn element_map(&self) -> FinMap {
        FinMap::new(
            self.images.len(),
            self.images.iter().map(|(j, _)| *j).collect(),
        )
        .expect("images in range")
    }
}

/// Value of a single step applied to `object`.
pub fn step_bijection(
    sig: &Signature,
    object: &Node,
    step: &CoherenceStep,
) -> Result<ElementBijection> {
    check_semantics(sig)?;
    let csr = sig.theory() == Some(Theory::Csr);
    let target = step.apply_unchecked(object);
    let index: HashMap<Elem, usize> = elements_of(csr, &target)
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i + 1))
        .collect();
    let mut images = Vec::new();
    for e in elements_of(csr, object) {
        let tagged = e.retag(&mut 0);
        let image = map_element(csr, object, step, &tagged)?;
        let j = *index
            .get(&image.untagged())
            .ok_or_else(|| Error::Model("image is not an element of the target".into()))?;
        let mut tags = Vec::new();
        image.atoms(&mut tags);
        let mut pos = vec![0; tags.len()];
        for (p, (_, t)) in tags.iter().enumerate() {
            pos[*t as usize] = p + 1;
        }
        images.push((j, pos));
    }
    Ok(ElementBijection { images })
}

/// Value of a path: the composite of its step values.
pub fn path_model(sig: &Signature, path: &CoherencePath) -> Result<ElementBijection> {
    check_semantics(sig)?;
    let csr = sig.theory() == Some(Theory::Csr);
    let counts: Vec<usize> = elements_of(csr, path.source().root())
        .iter()
        .map(Elem::atom_count)
        .collect();
    let mut value = ElementBijection::identity(&counts);
    let mut cur = path.source().root().clone();
    for step in path.steps() {
        value = value.then(&step_bijection(sig, &cur, step)?);
        cur = step.apply_unchecked(&cur);
    }
    Ok(value)
}

/// A bijection on `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(FinMap);

impl Permutation {
    pub fn new(table: FinMap) -> Result<Self> {
        if !table.is_bijection() {
            return Err(Error::FinMap(format!("{table} is not a bijection")));
        }
        Ok(Permutation(table))
    }

    pub fn identity(n: usize) -> Self {
        Permutation(FinMap::identity(n))
    }

    pub fn size(&self) -> usize {
        self.0.dom_size()
    }

    pub fn table(&self) -> &FinMap {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0 == FinMap::identity(self.size())
    }

    pub fn is_transposition(&self) -> bool {
        let moved = self
            .0
            .table()
            .iter()
            .enumerate()
            .filter(|(i, &j)| j != i + 1)
            .count();
        moved == 2
    }

    /// Apply `self`, then `next`.
    pub fn then(&self, next: &Permutation) -> Result<Permutation> {
        Ok(Permutation(self.0.then(&next.0)?))
    }

    pub fn inverse(&self) -> Permutation {
        Permutation(self.0.inverse().expect("bijection"))
    }
}

/// Strand-tracking permutation of the variable occurrences of a cmon path.
pub fn perm_model(sig: &Signature, path: &CoherencePath) -> Result<Permutation> {
    if sig.theory() != Some(Theory::Cmon) {
        return Err(Error::WrongSignature {
            expected: "cmon".into(),
            got: sig.name().into(),
        });
    }
    Permutation::new(path_model(sig, path)?.element_map())
}

/// Monomial-occurrence bijection of a csr path, with factor tracking.
pub fn monomial_model(sig: &Signature, path: &CoherencePath) -> Result<ElementBijection> {
    if sig.theory() != Some(Theory::Csr) {
        return Err(Error::WrongSignature {
            expected: "csr".into(),
            got: sig.name().into(),
        });
    }
    path_model(sig, path)
}
