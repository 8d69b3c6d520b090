//! Strictification of finite symmetric monoidal categories.
//!
//! Objects of the strict category are the chosen representatives `a_i` of
//! the isomorphism classes and the sorted formal sums `a_i1 + … + a_in`
//! (`0 < i1 ≤ … ≤ in`). The realization functor sends a sum to the
//! left-nested tensor of its entries and morphisms are pulled back along
//! it. Sums are truncated at a caller-chosen length, since the full object
//! set is infinite.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::FinMap;

/// Wire form of a finite symmetric monoidal category. Composition entries
/// `[f, g, h]` mean `h = g ∘ f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub unit: String,
    pub morphisms: Vec<MorphismJson>,
    pub identity: Vec<(String, String)>,
    pub compose: Vec<(String, String, String)>,
    pub tensor_objects: Vec<(String, String, String)>,
    pub tensor_morphisms: Vec<(String, String, String)>,
    pub associator: Vec<(String, String, String, String)>,
    pub left_unitor: Vec<(String, String)>,
    pub right_unitor: Vec<(String, String)>,
    pub braiding: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// A finite symmetric monoidal category given by tables, validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSymMonCat {
    objects: Vec<String>,
    unit: usize,
    names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    tensor_obj: Vec<Vec<usize>>,
    tensor_mor: HashMap<(usize, usize), usize>,
    alpha: Vec<usize>,
    lambda: Vec<usize>,
    rho: Vec<usize>,
    tau: Vec<usize>,
    inverse: Vec<Option<usize>>,
}

fn incoherent(msg: impl Into<String>) -> Error {
    Error::Incoherent(msg.into())
}

impl FinSymMonCat {
    /// Parses and checks every law expressible on the tables.
    pub fn from_json(json: &CategoryJson) -> Result<Self> {
        let cat = Self::build(json)?;
        cat.validate()?;
        Ok(cat)
    }

    fn build(json: &CategoryJson) -> Result<Self> {
        let obj: HashMap<&str, usize> = json
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        if obj.len() != json.objects.len() {
            return Err(incoherent("duplicate object names"));
        }
        let o = |name: &str| {
            obj.get(name)
                .copied()
                .ok_or_else(|| incoherent(format!("unknown object `{name}`")))
        };
        let mor: HashMap<&str, usize> = json
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.as_str(), i))
            .collect();
        if mor.len() != json.morphisms.len() {
            return Err(incoherent("duplicate morphism names"));
        }
        let m = |name: &str| {
            mor.get(name)
                .copied()
                .ok_or_else(|| incoherent(format!("unknown morphism `{name}`")))
        };
        let n = json.objects.len();
        let src = json
            .morphisms
            .iter()
            .map(|x| o(&x.src))
            .collect::<Result<Vec<_>>>()?;
        let tgt = json
            .morphisms
            .iter()
            .map(|x| o(&x.tgt))
            .collect::<Result<Vec<_>>>()?;
        let mut identity = vec![usize::MAX; n];
        for (a, f) in &json.identity {
            identity[o(a)?] = m(f)?;
        }
        let mut compose = HashMap::new();
        for (f, g, h) in &json.compose {
            compose.insert((m(f)?, m(g)?), m(h)?);
        }
        let mut tensor_obj = vec![vec![usize::MAX; n]; n];
        for (a, b, c) in &json.tensor_objects {
            tensor_obj[o(a)?][o(b)?] = o(c)?;
        }
        let mut tensor_mor = HashMap::new();
        for (f, g, h) in &json.tensor_morphisms {
            tensor_mor.insert((m(f)?, m(g)?), m(h)?);
        }
        let mut alpha = vec![usize::MAX; n * n * n];
        for (a, b, c, f) in &json.associator {
            alpha[(o(a)? * n + o(b)?) * n + o(c)?] = m(f)?;
        }
        let mut lambda = vec![usize::MAX; n];
        for (a, f) in &json.left_unitor {
            lambda[o(a)?] = m(f)?;
        }
        let mut rho = vec![usize::MAX; n];
        for (a, f) in &json.right_unitor {
            rho[o(a)?] = m(f)?;
        }
        let mut tau = vec![usize::MAX; n * n];
        for (a, b, f) in &json.braiding {
            tau[o(a)? * n + o(b)?] = m(f)?;
        }
        let mut cat = FinSymMonCat {
            objects: json.objects.clone(),
            unit: o(&json.unit)?,
            names: json.morphisms.iter().map(|x| x.name.clone()).collect(),
            src,
            tgt,
            identity,
            compose,
            tensor_obj,
            tensor_mor,
            alpha,
            lambda,
            rho,
            tau,
            inverse: Vec::new(),
        };
        cat.check_totality()?;
        cat.inverse = (0..cat.names.len()).map(|f| cat.find_inverse(f)).collect();
        Ok(cat)
    }

    fn check_totality(&self) -> Result<()> {
        let n = self.objects.len();
        for a in 0..n {
            let i = self.identity[a];
            if i == usize::MAX || self.src[i] != a || self.tgt[i] != a {
                return Err(incoherent(format!("no identity on `{}`", self.objects[a])));
            }
            for b in 0..n {
                if self.tensor_obj[a][b] == usize::MAX {
                    return Err(incoherent(format!(
                        "tensor of `{}` and `{}` missing",
                        self.objects[a], self.objects[b]
                    )));
                }
            }
        }
        let m = self.names.len();
        for f in 0..m {
            for g in 0..m {
                if self.tgt[f] == self.src[g] {
                    let h = *self.compose.get(&(f, g)).ok_or_else(|| {
                        incoherent(format!(
                            "composite of `{}` then `{}` missing",
                            self.names[f], self.names[g]
                        ))
                    })?;
                    if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                        return Err(incoherent(format!(
                            "composite `{}` has the wrong type",
                            self.names[h]
                        )));
                    }
                }
                let h = *self.tensor_mor.get(&(f, g)).ok_or_else(|| {
                    incoherent(format!(
                        "tensor of `{}` and `{}` missing",
                        self.names[f], self.names[g]
                    ))
                })?;
                if self.src[h] != self.ten(self.src[f], self.src[g])
                    || self.tgt[h] != self.ten(self.tgt[f], self.tgt[g])
                {
                    return Err(incoherent(format!(
                        "tensor `{}` has the wrong type",
                        self.names[h]
                    )));
                }
            }
        }
        let missing = |what: &str| incoherent(format!("{what} table incomplete"));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let f = self.alpha[(a * n + b) * n + c];
                    if f == usize::MAX {
                        return Err(missing("associator"));
                    }
                    self.expect_type(
                        f,
                        self.ten(self.ten(a, b), c),
                        self.ten(a, self.ten(b, c)),
                        "associator",
                    )?;
                }
                let f = self.tau[a * n + b];
                if f == usize::MAX {
                    return Err(missing("braiding"));
                }
                self.expect_type(f, self.ten(a, b), self.ten(b, a), "braiding")?;
            }
            if self.lambda[a] == usize::MAX || self.rho[a] == usize::MAX {
                return Err(missing("unitor"));
            }
            self.expect_type(self.lambda[a], self.ten(self.unit, a), a, "left unitor")?;
            self.expect_type(self.rho[a], self.ten(a, self.unit), a, "right unitor")?;
        }
        Ok(())
    }

    fn expect_type(&self, f: usize, s: usize, t: usize, what: &str) -> Result<()> {
        if self.src[f] != s || self.tgt[f] != t {
            return Err(incoherent(format!(
                "{what} `{}` should go `{}` -> `{}`",
                self.names[f], self.objects[s], self.objects[t]
            )));
        }
        Ok(())
    }

    fn find_inverse(&self, f: usize) -> Option<usize> {
        (0..self.names.len()).find(|&g| {
            self.src[g] == self.tgt[f]
                && self.tgt[g] == self.src[f]
                && self.compose[&(f, g)] == self.identity[self.src[f]]
                && self.compose[&(g, f)] == self.identity[self.tgt[f]]
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.names.len()
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.names[f]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn source(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn id(&self, a: usize) -> usize {
        self.identity[a]
    }

    pub fn ten(&self, a: usize, b: usize) -> usize {
        self.tensor_obj[a][b]
    }

    pub fn ten_mor(&self, f: usize, g: usize) -> usize {
        self.tensor_mor[&(f, g)]
    }

    /// `g ∘ f`.
    pub fn then(&self, f: usize, g: usize) -> usize {
        self.compose[&(f, g)]
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.inverse[f]
    }

    pub fn alpha(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.objects.len();
        self.alpha[(a * n + b) * n + c]
    }

    pub fn lambda(&self, a: usize) -> usize {
        self.lambda[a]
    }

    pub fn rho(&self, a: usize) -> usize {
        self.rho[a]
    }

    pub fn tau(&self, a: usize, b: usize) -> usize {
        self.tau[a * self.objects.len() + b]
    }

    fn inv(&self, f: usize) -> usize {
        self.inverse[f].expect("coherence maps are invertible")
    }

    /// `fs[0]`, then `fs[1]`, and so on.
    fn chain(&self, fs: &[usize]) -> usize {
        fs[1..].iter().fold(fs[0], |acc, &g| self.then(acc, g))
    }

    fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        let m = self.names.len();
        let ob = |a: usize| self.objects[a].as_str();
        for f in 0..m {
            if self.then(self.identity[self.src[f]], f) != f
                || self.then(f, self.identity[self.tgt[f]]) != f
            {
                return Err(incoherent(format!(
                    "identity law fails for `{}`",
                    self.names[f]
                )));
            }
            for g in (0..m).filter(|&g| self.src[g] == self.tgt[f]) {
                for h in (0..m).filter(|&h| self.src[h] == self.tgt[g]) {
                    if self.then(self.then(f, g), h) != self.then(f, self.then(g, h)) {
                        return Err(incoherent(format!(
                            "composition is not associative at `{}`, `{}`, `{}`",
                            self.names[f], self.names[g], self.names[h]
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.ten_mor(self.identity[a], self.identity[b]) != self.identity[self.ten(a, b)]
                {
                    return Err(incoherent(format!(
                        "id ⊗ id is not the identity at ({}, {})",
                        ob(a),
                        ob(b)
                    )));
                }
            }
        }
        for f in 0..m {
            for g in 0..m {
                for f2 in (0..m).filter(|&x| self.src[x] == self.tgt[f]) {
                    for g2 in (0..m).filter(|&x| self.src[x] == self.tgt[g]) {
                        let lhs = self.ten_mor(self.then(f, f2), self.then(g, g2));
                        let rhs = self.then(self.ten_mor(f, g), self.ten_mor(f2, g2));
                        if lhs != rhs {
                            return Err(incoherent(format!(
                                "tensor is not functorial at `{}`, `{}`",
                                self.names[f], self.names[g]
                            )));
                        }
                    }
                }
            }
        }
        let mut structure: Vec<(usize, &str)> = Vec::new();
        for a in 0..n {
            structure.push((self.lambda[a], "left unitor"));
            structure.push((self.rho[a], "right unitor"));
            for b in 0..n {
                structure.push((self.tau(a, b), "braiding"));
                for c in 0..n {
                    structure.push((self.alpha(a, b, c), "associator"));
                }
            }
        }
        for (f, what) in structure {
            if self.inverse[f].is_none() {
                return Err(incoherent(format!(
                    "{what} `{}` is not invertible",
                    self.names[f]
                )));
            }
        }
        let unit = self.unit;
        for f in 0..m {
            let (a, a2) = (self.src[f], self.tgt[f]);
            if self.then(self.lambda[a], f)
                != self.then(self.ten_mor(self.identity[unit], f), self.lambda[a2])
            {
                return Err(incoherent(format!(
                    "left unitor is not natural at `{}`",
                    self.names[f]
                )));
            }
            if self.then(self.rho[a], f)
                != self.then(self.ten_mor(f, self.identity[unit]), self.rho[a2])
            {
                return Err(incoherent(format!(
                    "right unitor is not natural at `{}`",
                    self.names[f]
                )));
            }
            for g in 0..m {
                let (b, b2) = (self.src[g], self.tgt[g]);
                if self.then(self.tau(a, b), self.ten_mor(g, f))
                    != self.then(self.ten_mor(f, g), self.tau(a2, b2))
                {
                    return Err(incoherent(format!(
                        "braiding is not natural at `{}`, `{}`",
                        self.names[f], self.names[g]
                    )));
                }
                for h in 0..m {
                    let (c, c2) = (self.src[h], self.tgt[h]);
                    let lhs =
                        self.then(self.ten_mor(self.ten_mor(f, g), h), self.alpha(a2, b2, c2));
                    let rhs = self.then(self.alpha(a, b, c), self.ten_mor(f, self.ten_mor(g, h)));
                    if lhs != rhs {
                        return Err(incoherent(format!(
                            "associator is not natural at `{}`, `{}`, `{}`",
                            self.names[f], self.names[g], self.names[h]
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let lhs = self.chain(&[
                            self.alpha(self.ten(a, b), c, d),
                            self.alpha(a, b, self.ten(c, d)),
                        ]);
                        let rhs = self.chain(&[
                            self.ten_mor(self.alpha(a, b, c), self.identity[d]),
                            self.alpha(a, self.ten(b, c), d),
                            self.ten_mor(self.identity[a], self.alpha(b, c, d)),
                        ]);
                        if lhs != rhs {
                            return Err(incoherent(format!(
                                "pentagon fails at ({}, {}, {}, {})",
                                ob(a),
                                ob(b),
                                ob(c),
                                ob(d)
                            )));
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let id = |x: usize| self.identity[x];
                let triangle_l =
                    self.then(self.alpha(a, unit, b), self.ten_mor(id(a), self.lambda[b]));
                if triangle_l != self.ten_mor(self.rho[a], id(b)) {
                    return Err(incoherent(format!(
                        "triangle fails at ({}, {})",
                        ob(a),
                        ob(b)
                    )));
                }
                if self.then(self.tau(a, b), self.tau(b, a)) != id(self.ten(a, b)) {
                    return Err(incoherent(format!(
                        "braiding is not symmetric at ({}, {})",
                        ob(a),
                        ob(b)
                    )));
                }
                for c in 0..n {
                    let bc = self.ten(b, c);
                    let hex =
                        self.chain(&[self.alpha(a, b, c), self.tau(a, bc), self.alpha(b, c, a)]);
                    let hex2 = self.chain(&[
                        self.ten_mor(self.tau(a, b), id(c)),
                        self.alpha(b, a, c),
                        self.ten_mor(id(b), self.tau(a, c)),
                    ]);
                    if hex != hex2 {
                        return Err(incoherent(format!(
                            "hexagon fails at ({}, {}, {})",
                            ob(a),
                            ob(b),
                            ob(c)
                        )));
                    }
                    let ab = self.ten(a, b);
                    let hex = self.chain(&[
                        self.inv(self.alpha(a, b, c)),
                        self.tau(ab, c),
                        self.inv(self.alpha(c, a, b)),
                    ]);
                    let hex2 = self.chain(&[
                        self.ten_mor(id(a), self.tau(b, c)),
                        self.inv(self.alpha(a, c, b)),
                        self.ten_mor(self.tau(a, c), id(b)),
                    ]);
                    if hex != hex2 {
                        return Err(incoherent(format!(
                            "inverse hexagon fails at ({}, {}, {})",
                            ob(a),
                            ob(b),
                            ob(c)
                        )));
                    }
                }
            }
        }
        if self.lambda[unit] != self.rho[unit] {
            return Err(incoherent("left and right unitors differ on the unit"));
        }
        Ok(())
    }

    /// Isomorphism classes, listed by first member in object order.
    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of: Vec<Option<usize>> = vec![None; self.objects.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.objects.len() {
            if class_of[a].is_some() {
                continue;
            }
            let k = classes.len();
            let members: Vec<usize> = (a..self.objects.len())
                .filter(|&b| {
                    class_of[b].is_none()
                        && (0..self.names.len()).any(|f| {
                            self.src[f] == a && self.tgt[f] == b && self.inverse[f].is_some()
                        })
                })
                .collect();
            for &b in &members {
                class_of[b] = Some(k);
            }
            classes.push(members);
        }
        classes
    }

    /// Some isomorphism `a -> b`.
    fn iso(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.names.len())
            .find(|&f| self.src[f] == a && self.tgt[f] == b && self.inverse[f].is_some())
    }
}

/// The strict category: objects are sorted index sequences (`[]` is `a_0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictAlgebra {
    /// Class representatives, `representatives[0]` being the unit.
    pub representatives: Vec<usize>,
    pub objects: Vec<Vec<usize>>,
    /// Morphisms `(source, target, underlying morphism of C)`.
    pub morphisms: Vec<(usize, usize, usize)>,
    pub identity: Vec<usize>,
    pub compose: HashMap<(usize, usize), usize>,
    /// `+` on objects; missing when the sum exceeds the length bound.
    pub plus_objects: HashMap<(usize, usize), usize>,
    pub plus_morphisms: HashMap<(usize, usize), usize>,
    pub max_length: usize,
}

/// The realization functor `A′ → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Strictification {
    pub algebra: StrictAlgebra,
    pub functor: Functor,
}

impl StrictAlgebra {
    pub fn object_label(&self, x: usize) -> String {
        label(&self.objects[x])
    }
}

fn label(seq: &[usize]) -> String {
    if seq.is_empty() {
        "a0".into()
    } else {
        seq.iter()
            .map(|i| format!("a{i}"))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Builds coherence isomorphisms between nested tensors in `C`.
struct Shuffler<'a> {
    cat: &'a FinSymMonCat,
    reps: &'a [usize],
}

impl Shuffler<'_> {
    fn nest(&self, seq: &[usize]) -> usize {
        match seq.split_first() {
            None => self.cat.unit,
            Some((&first, rest)) => rest
                .iter()
                .fold(self.reps[first], |acc, &i| self.cat.ten(acc, self.reps[i])),
        }
    }

    /// `nest(l) ⊗ nest(r) -> nest(l ++ r)`.
    fn join(&self, l: &[usize], r: &[usize]) -> usize {
        let c = self.cat;
        if r.is_empty() {
            return c.rho(self.nest(l));
        }
        if l.is_empty() {
            return c.lambda(self.nest(r));
        }
        let (last, init) = r.split_last().expect("non-empty");
        let last_obj = self.reps[*last];
        if init.is_empty() {
            return c.id(c.ten(self.nest(l), last_obj));
        }
        let reassoc = c.inv(c.alpha(self.nest(l), self.nest(init), last_obj));
        c.then(reassoc, c.ten_mor(self.join(l, init), c.id(last_obj)))
    }

    /// Swap of entries `k` and `k + 1` of `nest(seq)`.
    fn transpose(&self, seq: &[usize], k: usize) -> usize {
        let c = self.cat;
        let (x, y) = (self.reps[seq[k]], self.reps[seq[k + 1]]);
        let mut m = if k == 0 {
            c.tau(x, y)
        } else {
            let p = self.nest(&seq[..k]);
            c.chain(&[
                c.alpha(p, x, y),
                c.ten_mor(c.id(p), c.tau(x, y)),
                c.inv(c.alpha(p, y, x)),
            ])
        };
        for &i in &seq[k + 2..] {
            m = c.ten_mor(m, c.id(self.reps[i]));
        }
        m
    }

    /// Every coherence isomorphism `nest(x) ⊗ nest(y) -> nest(x + y)`
    /// obtained by joining and then sorting with adjacent swaps, one per
    /// sorting permutation.
    fn shuffles(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        let c = self.cat;
        let joined = self.join(x, y);
        let seq: Vec<usize> = x.iter().chain(y).copied().collect();
        let mut out = Vec::new();
        for order in sorting_orders(&seq) {
            let mut m = joined;
            let mut pos = order;
            let n = seq.len();
            let mut cur = seq.clone();
            for i in 0..n {
                for k in (i..n - 1).rev() {
                    if pos[k + 1] < pos[k] {
                        m = c.then(m, self.transpose(&cur, k));
                        cur.swap(k, k + 1);
                        pos.swap(k, k + 1);
                    }
                }
            }
            out.push(m);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// For each entry, its position after sorting; all orders that sort.
fn sorting_orders(seq: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted: Vec<(usize, usize)> = seq.iter().copied().zip(0..).collect();
    sorted.sort_unstable();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start;
        while end < sorted.len() && sorted[end].0 == sorted[start].0 {
            end += 1;
        }
        groups.push((start..end).collect());
        start = end;
    }
    let mut out = Vec::new();
    let mut current = vec![0; seq.len()];
    fn go(
        g: usize,
        groups: &[Vec<usize>],
        sorted: &[(usize, usize)],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if g == groups.len() {
            out.push(current.clone());
            return;
        }
        let slots = &groups[g];
        let members: Vec<usize> = slots.iter().map(|&s| sorted[s].1).collect();
        for perm in permutations(slots.len()) {
            for (k, &p) in perm.iter().enumerate() {
                current[members[k]] = slots[p];
            }
            go(g + 1, groups, sorted, current, out);
        }
    }
    go(0, &groups, &sorted, &mut current, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn merge(x: &[usize], y: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = x.iter().chain(y).copied().collect();
    out.sort_unstable();
    out
}

/// Where the construction depends on the shuffle chosen: pairs of sums
/// whose coherence isomorphisms to the sorted sum disagree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleReport {
    /// Representatives `a` whose switch `a ⊗ a -> a ⊗ a` is not the identity.
    pub nontrivial_switch: Vec<String>,
    /// Pairs of formal sums with more than one shuffle isomorphism.
    pub dependent_pairs: Vec<(String, String)>,
}

impl ShuffleReport {
    pub fn independent(&self) -> bool {
        self.nontrivial_switch.is_empty() && self.dependent_pairs.is_empty()
    }
}

/// Class representatives: the unit first, then the first member of each
/// other class in `order` (default: object order).
fn representatives(cat: &FinSymMonCat, order: Option<&[usize]>) -> Result<Vec<usize>> {
    let classes = cat.iso_classes();
    let unit_class = classes
        .iter()
        .position(|c| c.contains(&cat.unit))
        .expect("unit has a class");
    let rest: Vec<usize> = (0..classes.len()).filter(|&k| k != unit_class).collect();
    let ordered: Vec<usize> = match order {
        None => rest,
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != rest {
                return Err(incoherent(format!(
                    "order must list the non-unit classes {rest:?} exactly once"
                )));
            }
            o.to_vec()
        }
    };
    let mut reps = vec![cat.unit];
    reps.extend(ordered.into_iter().map(|k| classes[k][0]));
    Ok(reps)
}

fn sums_up_to(classes: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            let lo = s.last().copied().unwrap_or(1);
            for i in lo..classes {
                let mut t: Vec<usize> = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Shuffle dependence of the construction on sums of length `≤ max_len`.
pub fn shuffle_report(cat: &FinSymMonCat, max_len: usize) -> Result<ShuffleReport> {
    let reps = representatives(cat, None)?;
    let sh = Shuffler { cat, reps: &reps };
    let mut report = ShuffleReport::default();
    for (i, &a) in reps.iter().enumerate().skip(1) {
        if cat.tau(a, a) != cat.id(cat.ten(a, a)) {
            report
                .nontrivial_switch
                .push(format!("a{i} = {}", cat.objects[a]));
        }
    }
    let sums = sums_up_to(reps.len(), max_len);
    for x in &sums {
        for y in &sums {
            if x.len() + y.len() <= max_len && sh.shuffles(x, y).len() > 1 {
                report.dependent_pairs.push((label(x), label(y)));
            }
        }
    }
    Ok(report)
}

/// Builds `A′` and `F`, rejecting inputs where `f + g` would depend on the
/// chosen shuffle.
pub fn strictify(
    cat: &FinSymMonCat,
    order: Option<&[usize]>,
    max_len: usize,
) -> Result<Strictification> {
    let reps = representatives(cat, order)?;
    let sh = Shuffler { cat, reps: &reps };
    let objects = sums_up_to(reps.len(), max_len);
    let index: HashMap<Vec<usize>, usize> = objects.iter().cloned().zip(0..).collect();
    let f_obj: Vec<usize> = objects.iter().map(|s| sh.nest(s)).collect();
    let mut morphisms = Vec::new();
    let mut hom: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for x in 0..objects.len() {
        for y in 0..objects.len() {
            for f in 0..cat.names.len() {
                if cat.src[f] == f_obj[x] && cat.tgt[f] == f_obj[y] {
                    hom.insert((x, y, f), morphisms.len());
                    morphisms.push((x, y, f));
                }
            }
        }
    }
    let identity: Vec<usize> = (0..objects.len())
        .map(|x| hom[&(x, x, cat.id(f_obj[x]))])
        .collect();
    let mut compose = HashMap::new();
    for (i, &(x, y, f)) in morphisms.iter().enumerate() {
        for (j, &(y2, z, g)) in morphisms.iter().enumerate() {
            if y == y2 {
                compose.insert((i, j), hom[&(x, z, cat.then(f, g))]);
            }
        }
    }
    let mut plus_objects = HashMap::new();
    let mut shuffle: HashMap<(usize, usize), usize> = HashMap::new();
    for (x, sx) in objects.iter().enumerate() {
        for (y, sy) in objects.iter().enumerate() {
            let Some(&z) = index.get(&merge(sx, sy)) else {
                continue;
            };
            plus_objects.insert((x, y), z);
            let all = sh.shuffles(sx, sy);
            if all.len() > 1 {
                return Err(incoherent(format!(
                    "f + g depends on the shuffle for {} + {}: {} distinct coherence isomorphisms \
                     (the switch on a repeated summand is not the identity)",
                    label(sx),
                    label(sy),
                    all.len()
                )));
            }
            shuffle.insert((x, y), all[0]);
        }
    }
    let mut plus_morphisms = HashMap::new();
    for (i, &(x, x2, f)) in morphisms.iter().enumerate() {
        for (j, &(y, y2, g)) in morphisms.iter().enumerate() {
            let (Some(&z), Some(&z2)) = (plus_objects.get(&(x, y)), plus_objects.get(&(x2, y2)))
            else {
                continue;
            };
            let h = cat.chain(&[
                cat.inv(shuffle[&(x, y)]),
                cat.ten_mor(f, g),
                shuffle[&(x2, y2)],
            ]);
            plus_morphisms.insert((i, j), hom[&(z, z2, h)]);
        }
    }
    let functor = Functor {
        objects: f_obj,
        morphisms: morphisms.iter().map(|m| m.2).collect(),
    };
    Ok(Strictification {
        algebra: StrictAlgebra {
            representatives: reps,
            objects,
            morphisms,
            identity,
            compose,
            plus_objects,
            plus_morphisms,
            max_length: max_len,
        },
        functor,
    })
}

/// First violated law, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub witness: Option<String>,
}

impl Verification {
    fn pass() -> Self {
        Verification {
            ok: true,
            witness: None,
        }
    }

    fn fail(w: String) -> Self {
        Verification {
            ok: false,
            witness: Some(w),
        }
    }
}

/// Exhaustive check that `+` is strictly commutative, associative and
/// unital on objects and morphisms, and a functor, wherever defined.
pub fn verify_strict(a: &StrictAlgebra) -> Verification {
    let n = a.objects.len();
    let unit = match a.objects.iter().position(|s| s.is_empty()) {
        Some(u) => u,
        None => return Verification::fail("no unit object".into()),
    };
    let po = |x: usize, y: usize| a.plus_objects.get(&(x, y)).copied();
    for x in 0..n {
        if po(x, unit) != Some(x) || po(unit, x) != Some(x) {
            return Verification::fail(format!("unit law fails at {}", a.object_label(x)));
        }
        for y in 0..n {
            if po(x, y) != po(y, x) {
                return Verification::fail(format!(
                    "commutativity fails at ({}, {})",
                    a.object_label(x),
                    a.object_label(y)
                ));
            }
            for z in 0..n {
                let l = po(x, y).and_then(|xy| po(xy, z));
                let r = po(y, z).and_then(|yz| po(x, yz));
                if l.is_some() && r.is_some() && l != r {
                    return Verification::fail(format!(
                        "associativity fails at ({}, {}, {})",
                        a.object_label(x),
                        a.object_label(y),
                        a.object_label(z)
                    ));
                }
            }
        }
    }
    let pm = |f: usize, g: usize| a.plus_morphisms.get(&(f, g)).copied();
    let m = a.morphisms.len();
    let id_unit = a.identity[unit];
    for f in 0..m {
        if pm(f, id_unit) != Some(f) || pm(id_unit, f) != Some(f) {
            return Verification::fail(format!("unit law fails on morphism #{f}"));
        }
        for g in 0..m {
            if pm(f, g) != pm(g, f) {
                return Verification::fail(format!("commutativity fails on morphisms #{f}, #{g}"));
            }
            let Some(fg) = pm(f, g) else { continue };
            let (x, x2, _) = a.morphisms[f];
            let (y, y2, _) = a.morphisms[g];
            if a.morphisms[fg].0 != a.plus_objects[&(x, y)]
                || a.morphisms[fg].1 != a.plus_objects[&(x2, y2)]
            {
                return Verification::fail(format!("f + g has the wrong type at #{f}, #{g}"));
            }
            for h in 0..m {
                let l = pm(fg, h);
                let r = pm(g, h).and_then(|gh| pm(f, gh));
                if l.is_some() && r.is_some() && l != r {
                    return Verification::fail(format!(
                        "associativity fails on morphisms #{f}, #{g}, #{h}"
                    ));
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if let Some(&z) = a.plus_objects.get(&(x, y)) {
                if pm(a.identity[x], a.identity[y]) != Some(a.identity[z]) {
                    return Verification::fail(format!(
                        "id + id is not the identity at ({}, {})",
                        a.object_label(x),
                        a.object_label(y)
                    ));
                }
            }
        }
    }
    for (&(f, f2), &ff) in &a.compose {
        for (&(g, g2), &gg) in &a.compose {
            let (Some(top), Some(bottom)) = (pm(f, g), pm(f2, g2)) else {
                continue;
            };
            if pm(ff, gg) != a.compose.get(&(top, bottom)).copied() {
                return Verification::fail(format!(
                    "+ is not functorial at #{f}, #{f2}, #{g}, #{g2}"
                ));
            }
        }
    }
    Verification::pass()
}

/// Checks that `func` is a functor `A′ → C`, essentially surjective and
/// bijective on every hom-set.
pub fn verify_equivalence(cat: &FinSymMonCat, a: &StrictAlgebra, func: &Functor) -> Verification {
    if func.objects.len() != a.objects.len() || func.morphisms.len() != a.morphisms.len() {
        return Verification::fail("functor tables have the wrong size".into());
    }
    for (i, &(x, y, _)) in a.morphisms.iter().enumerate() {
        let f = func.morphisms[i];
        if cat.src[f] != func.objects[x] || cat.tgt[f] != func.objects[y] {
            return Verification::fail(format!(
                "morphism #{i} is sent to a morphism of the wrong type"
            ));
        }
    }
    for x in 0..a.objects.len() {
        if func.morphisms[a.identity[x]] != cat.id(func.objects[x]) {
            return Verification::fail(format!(
                "identity of {} is not preserved",
                a.object_label(x)
            ));
        }
    }
    for (&(f, g), &h) in &a.compose {
        if func.morphisms[h] != cat.then(func.morphisms[f], func.morphisms[g]) {
            return Verification::fail(format!("composition #{f}, #{g} is not preserved"));
        }
    }
    for c in 0..cat.objects.len() {
        if !func.objects.iter().any(|&fx| cat.iso(fx, c).is_some()) {
            return Verification::fail(format!(
                "`{}` is not in the essential image",
                cat.objects[c]
            ));
        }
    }
    let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, &(x, y, _)) in a.morphisms.iter().enumerate() {
        homs.entry((x, y)).or_default().push(func.morphisms[i]);
    }
    for x in 0..a.objects.len() {
        for y in 0..a.objects.len() {
            let mut image = homs.get(&(x, y)).cloned().unwrap_or_default();
            let before = image.len();
            image.sort_unstable();
            image.dedup();
            if image.len() != before {
                return Verification::fail(format!(
                    "not faithful on {} -> {}",
                    a.object_label(x),
                    a.object_label(y)
                ));
            }
            let (cx, cy) = (func.objects[x], func.objects[y]);
            let full = (0..cat.names.len())
                .filter(|&f| cat.src[f] == cx && cat.tgt[f] == cy)
                .count();
            if image.len() != full {
                return Verification::fail(format!(
                    "not full on {} -> {}",
                    a.object_label(x),
                    a.object_label(y)
                ));
            }
        }
    }
    Verification::pass()
}

/// How a formal sum's summands move under the symmetry `x + y -> y + x`:
/// entry `k` of `x ++ y` goes to entry `k` of `y ++ x` shuffled back into
/// sorted order.
pub fn symmetry_shuffle(x: &[usize], y: &[usize]) -> FinMap {
    let n = x.len() + y.len();
    let swapped: Vec<usize> = (x.len()..n).chain(0..x.len()).collect();
    let seq: Vec<usize> = x.iter().chain(y).copied().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (seq[swapped[k]], k));
    let mut table = vec![0; n];
    for (sorted_pos, &k) in order.iter().enumerate() {
        table[swapped[k]] = sorted_pos + 1;
    }
    FinMap::new(n, table).expect("permutation")
}

impl Strictification {
    /// The morphism of `A′` underlying the braiding `τ_{Fx,Fy}`
    /// transported along the shuffles; strictness makes it an endomorphism
    /// of `x + y`.
    pub fn transported_symmetry(&self, cat: &FinSymMonCat, x: usize, y: usize) -> Option<usize> {
        let a = &self.algebra;
        let z = *a.plus_objects.get(&(x, y))?;
        let sh = Shuffler {
            cat,
            reps: &a.representatives,
        };
        let (sx, sy) = (&a.objects[x], &a.objects[y]);
        let fx = self.functor.objects[x];
        let fy = self.functor.objects[y];
        let m = cat.chain(&[
            cat.inv(sh.shuffles(sx, sy)[0]),
            cat.tau(fx, fy),
            sh.shuffles(sy, sx)[0],
        ]);
        a.morphisms
            .iter()
            .position(|&(s, t, f)| s == z && t == z && f == m)
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("ok"),
            Some(w) => write!(f, "fails: {w}"),
        }
    }
}

/// Serializable view of a strictification, by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictReport {
    pub representatives: Vec<String>,
    pub max_length: usize,
    pub objects: Vec<String>,
    pub functor_objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String, String)>,
    pub plus_objects: Vec<(String, String, String)>,
    pub plus_morphisms: usize,
    pub verify_strict: Verification,
    pub verify_equivalence: Verification,
}

impl StrictReport {
    pub fn new(cat: &FinSymMonCat, s: &Strictification) -> Self {
        let a = &s.algebra;
        let mut plus_objects: Vec<(String, String, String)> = a
            .plus_objects
            .iter()
            .map(|(&(x, y), &z)| (a.object_label(x), a.object_label(y), a.object_label(z)))
            .collect();
        plus_objects.sort();
        StrictReport {
            representatives: a
                .representatives
                .iter()
                .map(|&r| cat.objects[r].clone())
                .collect(),
            max_length: a.max_length,
            objects: (0..a.objects.len()).map(|x| a.object_label(x)).collect(),
            functor_objects: (0..a.objects.len())
                .map(|x| (a.object_label(x), cat.objects[s.functor.objects[x]].clone()))
                .collect(),
            morphisms: a
                .morphisms
                .iter()
                .map(|&(x, y, f)| (a.object_label(x), a.object_label(y), cat.names[f].clone()))
                .collect(),
            plus_objects,
            plus_morphisms: a.plus_morphisms.len(),
            verify_strict: verify_strict(a),
            verify_equivalence: verify_equivalence(cat, a, &s.functor),
        }
    }
}

pub mod fixtures {
    //! Generated symmetric monoidal groupoids. Objects carry a class in a
    //! finite commutative monoid; every hom-set between objects of one class
    //! is a copy of a group `G ∈ {1, Z/2}`, composition is addition, all
    //! structure maps are `0` except the braiding, which is `sign(class a,
    //! class b)`.

    use super::*;

    pub struct Spec<'a> {
        pub objects: Vec<(&'a str, usize)>,
        pub unit: &'a str,
        /// Class addition; must be commutative and associative with unit 0.
        pub add: &'a dyn Fn(usize, usize) -> usize,
        pub group: usize,
        pub sign: &'a dyn Fn(usize, usize) -> usize,
        /// Constant value of the associator.
        pub associator: usize,
    }

    pub fn generate(spec: &Spec) -> CategoryJson {
        let names: Vec<String> = spec.objects.iter().map(|(n, _)| n.to_string()).collect();
        let class: Vec<usize> = spec.objects.iter().map(|&(_, c)| c).collect();
        let n = names.len();
        let g = spec.group;
        let mor = |a: usize, b: usize, k: usize| format!("{k}:{}->{}", names[a], names[b]);
        let mut morphisms = Vec::new();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in (0..n).filter(|&b| class[b] == class[a]) {
                for k in 0..g {
                    morphisms.push(MorphismJson {
                        name: mor(a, b, k),
                        src: names[a].clone(),
                        tgt: names[b].clone(),
                    });
                    for c in (0..n).filter(|&c| class[c] == class[a]) {
                        for l in 0..g {
                            compose.push((mor(a, b, k), mor(b, c, l), mor(a, c, (k + l) % g)));
                        }
                    }
                }
            }
        }
        // the tensor of a and b is the first object of the sum class
        let first_of = |c: usize| {
            (0..n)
                .find(|&x| class[x] == c)
                .expect("class sums must be inhabited")
        };
        let ten = |a: usize, b: usize| first_of((spec.add)(class[a], class[b]));
        let mut tensor_objects = Vec::new();
        let mut tensor_morphisms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                tensor_objects.push((names[a].clone(), names[b].clone(), names[ten(a, b)].clone()));
                for a2 in (0..n).filter(|&x| class[x] == class[a]) {
                    for b2 in (0..n).filter(|&x| class[x] == class[b]) {
                        for k in 0..g {
                            for l in 0..g {
                                tensor_morphisms.push((
                                    mor(a, a2, k),
                                    mor(b, b2, l),
                                    mor(ten(a, b), ten(a2, b2), (k + l) % g),
                                ));
                            }
                        }
                    }
                }
            }
        }
        let unit = names
            .iter()
            .position(|x| x == spec.unit)
            .expect("unit listed");
        let mut associator = Vec::new();
        let mut braiding = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let s = (spec.sign)(class[a], class[b]) % g.max(1);
                braiding.push((
                    names[a].clone(),
                    names[b].clone(),
                    mor(ten(a, b), ten(b, a), s),
                ));
                for c in 0..n {
                    let src = ten(ten(a, b), c);
                    let tgt = ten(a, ten(b, c));
                    associator.push((
                        names[a].clone(),
                        names[b].clone(),
                        names[c].clone(),
                        mor(src, tgt, spec.associator % g.max(1)),
                    ));
                }
            }
        }
        CategoryJson {
            objects: names.clone(),
            unit: spec.unit.into(),
            identity: (0..n).map(|a| (names[a].clone(), mor(a, a, 0))).collect(),
            morphisms,
            compose,
            tensor_objects,
            tensor_morphisms,
            associator,
            left_unitor: (0..n)
                .map(|a| (names[a].clone(), mor(ten(unit, a), a, 0)))
                .collect(),
            right_unitor: (0..n)
                .map(|a| (names[a].clone(), mor(ten(a, unit), a, 0)))
                .collect(),
            braiding,
        }
    }

    /// The unit alone.
    pub fn trivial() -> CategoryJson {
        generate(&Spec {
            objects: vec![("I", 0)],
            unit: "I",
            add: &|_, _| 0,
            group: 1,
            sign: &|_, _| 0,
            associator: 0,
        })
    }

    /// The unit and a second object isomorphic to it.
    pub fn unit_duplicate() -> CategoryJson {
        generate(&Spec {
            objects: vec![("I", 0), ("J", 0)],
            unit: "I",
            add: &|_, _| 0,
            group: 1,
            sign: &|_, _| 0,
            associator: 0,
        })
    }

    /// `{0, 1, 2, 3}` under truncated addition, discrete.
    pub fn truncated_monoid() -> CategoryJson {
        generate(&Spec {
            objects: vec![("0", 0), ("1", 1), ("2", 2), ("3", 3)],
            unit: "0",
            add: &|a, b| (a + b).min(3),
            group: 1,
            sign: &|_, _| 0,
            associator: 0,
        })
    }

    /// `Z/3` on objects with an extra copy of `1`; every object has the
    /// automorphism group `Z/2`, with trivial braiding signs.
    pub fn z2_automorphisms() -> CategoryJson {
        generate(&Spec {
            objects: vec![("e", 0), ("g", 1), ("g'", 1), ("h", 2)],
            unit: "e",
            add: &|a, b| (a + b) % 3,
            group: 2,
            sign: &|_, _| 0,
            associator: 0,
        })
    }

    /// Even and odd lines: the switch of two odd lines is `-1`. A valid
    /// symmetric monoidal category whose switch on `odd ⊗ odd` is not the
    /// identity.
    pub fn super_lines() -> CategoryJson {
        generate(&Spec {
            objects: vec![("even", 0), ("odd", 1)],
            unit: "even",
            add: &|a, b| (a + b) % 2,
            group: 2,
            sign: &|a, b| a * b,
            associator: 0,
        })
    }

    /// Same as [`super_lines`] but with a constant nonzero associator,
    /// which breaks the pentagon.
    pub fn broken_pentagon() -> CategoryJson {
        generate(&Spec {
            objects: vec![("even", 0), ("odd", 1)],
            unit: "even",
            add: &|a, b| (a + b) % 2,
            group: 2,
            sign: &|_, _| 0,
            associator: 1,
        })
    }

    /// Inputs on which the construction is expected to succeed.
    pub fn coherent() -> Vec<(&'static str, CategoryJson)> {
        vec![
            ("trivial", trivial()),
            ("unit-duplicate", unit_duplicate()),
            ("truncated-monoid", truncated_monoid()),
            ("z2-automorphisms", z2_automorphisms()),
        ]
    }

    /// Every named fixture, the rejected ones last.
    pub fn all() -> Vec<(&'static str, CategoryJson)> {
        let mut out = coherent();
        out.push(("super-lines", super_lines()));
        out.push(("broken-pentagon", broken_pentagon()));
        out
    }
}
