//! Words of free theories over a signature.
//!
//! A [`Term`] is a tree of generator applications over the variables
//! `x1..xn` of an explicit ambient arity `n`. The free theory makes no
//! identifications, so the tree itself is the element of `T(n)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::{block_map, FinMap};

/// Index of a generator inside its [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Op(pub u8);

/// The two quotient theories with built-in normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theory {
    /// Commutative monoids: `plus/2`, `zero/0`.
    Cmon,
    /// Commutative semi-rings: `plus/2`, `times/2`, `zero/0`, `one/0`.
    Csr,
}

pub mod ops {
    use super::Op;
    pub const PLUS: Op = Op(0);
    /// `zero` in `cmon`.
    pub const CMON_ZERO: Op = Op(1);
    pub const TIMES: Op = Op(1);
    pub const ZERO: Op = Op(2);
    pub const ONE: Op = Op(3);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    name: String,
    generators: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(name: impl Into<String>, generators: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (sym, _) in &generators {
            if sym.is_empty()
                || sym.starts_with('x') && sym[1..].chars().all(|c| c.is_ascii_digit())
            {
                return Err(Error::Parse(format!("invalid generator symbol `{sym}`")));
            }
            if seen.insert(sym.clone(), ()).is_some() {
                return Err(Error::Parse(format!("duplicate generator `{sym}`")));
            }
        }
        if generators.len() > u8::MAX as usize {
            return Err(Error::Parse("too many generators".into()));
        }
        Ok(Signature {
            name: name.into(),
            generators,
        })
    }

    pub fn cmon() -> Self {
        Signature {
            name: "cmon".into(),
            generators: vec![("plus".into(), 2), ("zero".into(), 0)],
        }
    }

    pub fn csr() -> Self {
        Signature {
            name: "csr".into(),
            generators: vec![
                ("plus".into(), 2),
                ("times".into(), 2),
                ("zero".into(), 0),
                ("one".into(), 0),
            ],
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "cmon" => Some(Self::cmon()),
            "csr" => Some(Self::csr()),
            _ => None,
        }
    }

    /// Reads `symbol arity` lines; `#` starts a comment.
    pub fn from_config(name: &str, text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(sym), Some(ar), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!(
                    "signature line {}: expected `symbol arity`",
                    lineno + 1
                )));
            };
            let ar: usize = ar.parse().map_err(|_| {
                Error::Parse(format!("signature line {}: bad arity `{ar}`", lineno + 1))
            })?;
            generators.push((sym.to_string(), ar));
        }
        Signature::new(name, generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        (0..self.generators.len()).map(|i| Op(i as u8))
    }

    pub fn arity(&self, op: Op) -> usize {
        self.generators[op.0 as usize].1
    }

    pub fn symbol(&self, op: Op) -> &str {
        &self.generators[op.0 as usize].0
    }

    pub fn lookup(&self, symbol: &str) -> Option<Op> {
        self.generators
            .iter()
            .position(|(s, _)| s == symbol)
            .map(|i| Op(i as u8))
    }

    /// Which built-in quotient theory this signature presents, if any.
    pub fn theory(&self) -> Option<Theory> {
        if self.generators == Self::cmon().generators {
            Some(Theory::Cmon)
        } else if self.generators == Self::csr().generators {
            Some(Theory::Csr)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Var(usize),
    App(Op, Vec<Node>),
}

impl Node {
    pub fn size(&self) -> usize {
        match self {
            Node::Var(_) => 1,
            Node::App(_, args) => 1 + args.iter().map(Node::size).sum::<usize>(),
        }
    }

    pub fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            Node::Var(i) => out.push(*i),
            Node::App(_, args) => args.iter().for_each(|a| a.leaves(out)),
        }
    }

    pub fn max_var(&self) -> usize {
        match self {
            Node::Var(i) => *i,
            Node::App(_, args) => args.iter().map(Node::max_var).max().unwrap_or(0),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(usize) -> usize) -> Node {
        match self {
            Node::Var(i) => Node::Var(f(*i)),
            Node::App(op, args) => Node::App(*op, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Replaces `Var(i)` by `subst[i - 1]`.
    pub fn substitute(&self, subst: &[Node]) -> Node {
        match self {
            Node::Var(i) => subst[*i - 1].clone(),
            Node::App(op, args) => {
                Node::App(*op, args.iter().map(|a| a.substitute(subst)).collect())
            }
        }
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Node> {
        let mut node = self;
        for &k in pos {
            match node {
                Node::App(_, args) => node = args.get(k)?,
                Node::Var(_) => return None,
            }
        }
        Some(node)
    }

    pub fn replace_at(&self, pos: &[usize], new: Node) -> Option<Node> {
        let Some((&first, rest)) = pos.split_first() else {
            return Some(new);
        };
        match self {
            Node::App(op, args) if first < args.len() => {
                let mut args = args.clone();
                args[first] = args[first].replace_at(rest, new)?;
                Some(Node::App(*op, args))
            }
            _ => None,
        }
    }

    /// All positions in preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        fn go(n: &Node, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            if let Node::App(_, args) = n {
                for (k, a) in args.iter().enumerate() {
                    cur.push(k);
                    go(a, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn encode(&self, out: &mut Vec<u32>) {
        match self {
            Node::Var(i) => out.push(*i as u32),
            Node::App(op, args) => {
                out.push(0x8000_0000 | op.0 as u32);
                args.iter().for_each(|a| a.encode(out));
            }
        }
    }

    fn decode(code: &[u32], at: &mut usize, sig_arity: &impl Fn(Op) -> usize) -> Node {
        let tok = code[*at];
        *at += 1;
        if tok & 0x8000_0000 == 0 {
            Node::Var(tok as usize)
        } else {
            let op = Op((tok & 0xff) as u8);
            let args = (0..sig_arity(op))
                .map(|_| Node::decode(code, at, sig_arity))
                .collect();
            Node::App(op, args)
        }
    }

    pub fn check(&self, sig: &Signature, arity: usize) -> Result<()> {
        match self {
            Node::Var(i) if *i == 0 || *i > arity => Err(Error::Arity(format!(
                "variable x{i} outside ambient arity {arity}"
            ))),
            Node::Var(_) => Ok(()),
            Node::App(op, args) => {
                if op.0 as usize >= sig.generators.len() {
                    return Err(Error::Arity(format!("unknown generator #{}", op.0)));
                }
                if sig.arity(*op) != args.len() {
                    return Err(Error::Arity(format!(
                        "`{}` takes {} arguments, got {}",
                        sig.symbol(*op),
                        sig.arity(*op),
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(sig, arity))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> NodeDisplay<'a> {
        NodeDisplay { node: self, sig }
    }
}

pub struct NodeDisplay<'a> {
    node: &'a Node,
    sig: &'a Signature,
}

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Var(i) => write!(f, "x{i}"),
            Node::App(op, args) => {
                write!(f, "({}", self.sig.symbol(*op))?;
                for a in args {
                    write!(f, " {}", a.display(self.sig))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An element of the free theory `T(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    arity: usize,
    root: Node,
}

impl Term {
    pub fn new(sig: &Signature, arity: usize, root: Node) -> Result<Self> {
        root.check(sig, arity)?;
        Ok(Term { arity, root })
    }

    /// Builds without validation; callers guarantee the invariants.
    pub(crate) fn from_parts(arity: usize, root: Node) -> Self {
        debug_assert!(root.max_var() <= arity);
        Term { arity, root }
    }

    /// The unit `1 ∈ T(1)`.
    pub fn unit() -> Self {
        Term {
            arity: 1,
            root: Node::Var(1),
        }
    }

    pub fn var(arity: usize, i: usize) -> Result<Self> {
        if i == 0 || i > arity {
            return Err(Error::Arity(format!("x{i} outside ambient arity {arity}")));
        }
        Ok(Term {
            arity,
            root: Node::Var(i),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.leaves(&mut out);
        out
    }

    /// Same word regarded in a larger ambient arity.
    pub fn widen(&self, arity: usize) -> Result<Term> {
        if arity < self.root.max_var() {
            return Err(Error::Arity(format!(
                "cannot narrow to arity {arity}: uses x{}",
                self.root.max_var()
            )));
        }
        Ok(Term {
            arity,
            root: self.root.clone(),
        })
    }

    pub fn parse(sig: &Signature, text: &str, arity: Option<usize>) -> Result<Term> {
        let root = parse_node(sig, text)?;
        let used = root.max_var();
        let arity = match arity {
            Some(a) if a < used => {
                return Err(Error::Arity(format!(
                    "term uses x{used} but ambient arity is {a}"
                )))
            }
            Some(a) => a,
            None => used,
        };
        Term::new(sig, arity, root)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> NodeDisplay<'a> {
        self.root.display(sig)
    }

    /// Prefix encoding; equal terms have equal keys and the order on keys is
    /// the tie-breaking order used by searches.
    pub fn key(&self) -> Vec<u32> {
        let mut out = vec![self.arity as u32];
        self.root.encode(&mut out);
        out
    }
}

/// Parses the bare tree of `term := var | "(" symbol term* ")"`. A nullary
/// symbol may also be written without parentheses.
pub fn parse_node(sig: &Signature, text: &str) -> Result<Node> {
    let tokens = tokenize(text)?;
    let mut at = 0;
    let node = parse_tokens(sig, &tokens, &mut at)?;
    if at != tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after term: `{}`",
            tokens[at..].join(" ")
        )));
    }
    node.check(sig, usize::MAX)?;
    Ok(node)
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' | '[' | ']' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() || c == ',' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    if tokens.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    Ok(tokens)
}

pub(crate) fn parse_var(tok: &str) -> Option<usize> {
    let digits = tok.strip_prefix('x')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&i| i > 0)
}

fn parse_tokens(sig: &Signature, tokens: &[String], at: &mut usize) -> Result<Node> {
    let tok = tokens
        .get(*at)
        .ok_or_else(|| Error::Parse("unexpected end of term".into()))?;
    *at += 1;
    if tok == "(" {
        let sym = tokens
            .get(*at)
            .ok_or_else(|| Error::Parse("expected symbol after `(`".into()))?;
        *at += 1;
        let op = sig
            .lookup(sym)
            .ok_or_else(|| Error::Parse(format!("unknown symbol `{sym}` in {}", sig.name)))?;
        let mut args = Vec::new();
        loop {
            match tokens.get(*at).map(String::as_str) {
                Some(")") => {
                    *at += 1;
                    break;
                }
                Some(_) => args.push(parse_tokens(sig, tokens, at)?),
                None => return Err(Error::Parse("unbalanced parentheses".into())),
            }
        }
        Ok(Node::App(op, args))
    } else if let Some(i) = parse_var(tok) {
        Ok(Node::Var(i))
    } else if let Some(op) = sig.lookup(tok).filter(|&op| sig.arity(op) == 0) {
        Ok(Node::App(op, Vec::new()))
    } else {
        Err(Error::Parse(format!("unexpected token `{tok}`")))
    }
}

/// Theory composition `γ(w; w_1..w_k)`: simultaneous substitution with the
/// variables of `w_i` shifted past those of `w_1..w_{i-1}`.
pub fn gamma(w: &Term, args: &[Term]) -> Result<Term> {
    if args.len() != w.arity {
        return Err(Error::Arity(format!(
            "γ: word has arity {} but {} arguments were given",
            w.arity,
            args.len()
        )));
    }
    let mut offset = 0;
    let mut subst = Vec::with_capacity(args.len());
    for a in args {
        let off = offset;
        subst.push(a.root.map_vars(&mut |i| i + off));
        offset += a.arity;
    }
    Ok(Term {
        arity: offset,
        root: w.root.substitute(&subst),
    })
}

/// Functoriality `w ↦ w_f`: every `x_i` becomes `x_{f(i)}`.
pub fn act_f(w: &Term, f: &FinMap) -> Result<Term> {
    if f.dom_size() != w.arity {
        return Err(Error::Arity(format!(
            "()_f: map has domain {} but word has arity {}",
            f.dom_size(),
            w.arity
        )));
    }
    Ok(Term {
        arity: f.cod_size(),
        root: w.root.map_vars(&mut |i| f.apply(i)),
    })
}

pub fn is_linear(w: &Term) -> bool {
    let mut count = vec![0u32; w.arity];
    for i in w.leaves() {
        count[i - 1] += 1;
    }
    count.iter().all(|&c| c == 1)
}

/// Structural canonical form. Free theories have no identifications, so this
/// rebuilds the tree from its prefix key.
pub fn canonicalize(sig: &Signature, w: &Term) -> Term {
    let key = w.key();
    let mut at = 1;
    let root = Node::decode(&key, &mut at, &|op| sig.arity(op));
    Term {
        arity: key[0] as usize,
        root,
    }
}

/// Convenience wrapper used in law checks: the block map of `f` for the
/// arities of `args`.
pub fn block_map_for(f: &FinMap, args: &[Term]) -> Result<FinMap> {
    block_map(f, &args.iter().map(Term::arity).collect::<Vec<_>>())
}

/// A finite algebra: one operation table per generator over `0..carrier`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    carrier: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Tables are row-major in the arguments.
    pub fn new(sig: &Signature, carrier: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        if tables.len() != sig.generators.len() {
            return Err(Error::Arity(format!(
                "{} tables for {} generators",
                tables.len(),
                sig.generators.len()
            )));
        }
        for (op, t) in sig.ops().zip(&tables) {
            let want = carrier.pow(sig.arity(op) as u32);
            if t.len() != want || t.iter().any(|&v| v >= carrier) {
                return Err(Error::Arity(format!(
                    "table for `{}` must have {want} entries in 0..{carrier}",
                    sig.symbol(op)
                )));
            }
        }
        Ok(FiniteAlgebra { carrier, tables })
    }

    pub fn from_fn(
        sig: &Signature,
        carrier: usize,
        f: impl Fn(Op, &[usize]) -> usize,
    ) -> Result<Self> {
        let tables = sig
            .ops()
            .map(|op| {
                let r = sig.arity(op);
                (0..carrier.pow(r as u32))
                    .map(|mut idx| {
                        let mut args = vec![0; r];
                        for slot in args.iter_mut().rev() {
                            *slot = idx % carrier;
                            idx /= carrier;
                        }
                        f(op, &args)
                    })
                    .collect()
            })
            .collect();
        FiniteAlgebra::new(sig, carrier, tables)
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn apply(&self, op: Op, args: &[usize]) -> usize {
        let idx = args.iter().fold(0, |acc, &a| acc * self.carrier + a);
        self.tables[op.0 as usize][idx]
    }
}

pub fn eval(w: &Term, model: &FiniteAlgebra, inputs: &[usize]) -> Result<usize> {
    if inputs.len() != w.arity {
        return Err(Error::Arity(format!(
            "eval: {} inputs for arity {}",
            inputs.len(),
            w.arity
        )));
    }
    if let Some(&bad) = inputs.iter().find(|&&x| x >= model.carrier) {
        return Err(Error::Arity(format!(
            "input {bad} outside carrier 0..{}",
            model.carrier
        )));
    }
    fn go(n: &Node, m: &FiniteAlgebra, xs: &[usize]) -> Result<usize> {
        match n {
            Node::Var(i) => Ok(xs[*i - 1]),
            Node::App(op, args) => {
                let t = m
                    .tables
                    .get(op.0 as usize)
                    .ok_or_else(|| Error::Arity(format!("no table for generator #{}", op.0)))?;
                let vals = args
                    .iter()
                    .map(|a| go(a, m, xs))
                    .collect::<Result<Vec<_>>>()?;
                let idx = vals.iter().fold(0, |acc, &a| acc * m.carrier + a);
                t.get(idx)
                    .copied()
                    .ok_or_else(|| Error::Arity("table arity mismatch".into()))
            }
        }
    }
    go(&w.root, model, inputs)
}

/// An element of the free theory on an operad, represented as `(f, u)` with
/// `u` a linear word in `m` variables and `f: m -> n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperadElem {
    relabel: FinMap,
    linear: Term,
}

impl OperadElem {
    pub fn new(relabel: FinMap, linear: Term) -> Result<Self> {
        if !is_linear(&linear) {
            return Err(Error::Arity("operad element needs a linear word".into()));
        }
        if relabel.dom_size() != linear.arity {
            return Err(Error::Arity(format!(
                "relabeling domain {} does not match word arity {}",
                relabel.dom_size(),
                linear.arity
            )));
        }
        Ok(OperadElem { relabel, linear })
    }

    pub fn relabel(&self) -> &FinMap {
        &self.relabel
    }

    pub fn linear(&self) -> &Term {
        &self.linear
    }

    /// Representative whose linear word reads `x1, x2, ..` left to right.
    /// `(f∘σ, u)` and `(f, u_σ)` have the same canonical form.
    pub fn canonical(&self) -> OperadElem {
        let leaves = self.linear.leaves();
        // sigma sends the variable at leaf k to k
        let mut sigma = vec![0; leaves.len()];
        for (k, &v) in leaves.iter().enumerate() {
            sigma[v - 1] = k + 1;
        }
        let sigma = FinMap::new(leaves.len(), sigma).expect("leaf permutation");
        let linear = act_f(&self.linear, &sigma).expect("arity checked");
        let relabel = sigma
            .inverse()
            .expect("bijection")
            .then(&self.relabel)
            .expect("sizes agree");
        OperadElem { relabel, linear }
    }

    /// The canonical map into the free theory: `u_f`.
    pub fn to_term(&self) -> Term {
        act_f(&self.linear, &self.relabel).expect("arity checked")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(sig: &Signature, s: &str, n: usize) -> Term {
        Term::parse(sig, s, Some(n)).unwrap()
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let sig = Signature::csr();
        let w = t(&sig, "(times (plus x1 x2) (one))", 2);
        assert_eq!(w.display(&sig).to_string(), "(times (plus x1 x2) (one))");
        assert_eq!(t(&sig, "(plus zero x1)", 1), t(&sig, "(plus (zero) x1)", 1));
        assert!(Term::parse(&sig, "(plus x1)", None).is_err());
        assert!(Term::parse(&sig, "(minus x1 x2)", None).is_err());
        assert!(Term::parse(&sig, "(plus x1 x3)", Some(2)).is_err());
        assert!(Term::parse(&sig, "(plus x1 x2", None).is_err());
        assert!(Term::parse(&sig, "x0", None).is_err());
    }

    #[test]
    fn gamma_examples() {
        let sig = Signature::cmon();
        let w = t(&sig, "(plus x1 x2)", 2);
        assert_eq!(gamma(&Term::unit(), std::slice::from_ref(&w)).unwrap(), w);
        assert_eq!(gamma(&w, &[Term::unit(), Term::unit()]).unwrap(), w);
        let got = gamma(&w, &[w.clone(), Term::unit()]).unwrap();
        assert_eq!(got, t(&sig, "(plus (plus x1 x2) x3)", 3));
        assert!(gamma(&w, &[Term::unit()]).is_err());
    }

    #[test]
    fn act_f_examples() {
        let sig = Signature::cmon();
        let w = t(&sig, "(plus x1 x2)", 2);
        assert_eq!(act_f(&w, &FinMap::identity(2)).unwrap(), w);
        let f: FinMap = "[1,1]:2->1".parse().unwrap();
        assert_eq!(act_f(&w, &f).unwrap(), t(&sig, "(plus x1 x1)", 1));
        assert!(act_f(&w, &FinMap::identity(3)).is_err());
    }

    #[test]
    fn linearity() {
        let sig = Signature::cmon();
        assert!(is_linear(&t(&sig, "(plus x1 x2)", 2)));
        assert!(!is_linear(&t(&sig, "(plus x1 x1)", 1)));
        assert!(is_linear(&t(&sig, "(zero)", 0)));
        assert!(!is_linear(&t(&sig, "(zero)", 1)));
    }

    #[test]
    fn canonical_form_is_structural() {
        let sig = Signature::csr();
        let a = t(&sig, "(plus x1 (times x2 x1))", 2);
        let b = t(&sig, "(plus (times x2 x1) x1)", 2);
        assert_eq!(canonicalize(&sig, &a), a);
        assert_eq!(
            canonicalize(&sig, &canonicalize(&sig, &a)),
            canonicalize(&sig, &a)
        );
        assert_ne!(canonicalize(&sig, &a), canonicalize(&sig, &b));
    }

    #[test]
    fn eval_examples() {
        let sig = Signature::cmon();
        let xor = FiniteAlgebra::from_fn(&sig, 2, |op, a| match op {
            ops::PLUS => a[0] ^ a[1],
            _ => 0,
        })
        .unwrap();
        assert_eq!(eval(&Term::unit(), &xor, &[1]).unwrap(), 1);
        let w = t(&sig, "(plus (plus x1 x2) x2)", 2);
        assert_eq!(eval(&w, &xor, &[1, 1]).unwrap(), 1);
        assert!(eval(&w, &xor, &[1]).is_err());
        assert!(eval(&w, &xor, &[1, 2]).is_err());
    }

    #[test]
    fn operad_elem_representatives_agree() {
        let sig = Signature::cmon();
        let u = t(&sig, "(plus x2 (plus x3 x1))", 3);
        let f: FinMap = "[1,2,1]:3->2".parse().unwrap();
        let sigma: FinMap = "[3,1,2]:3->3".parse().unwrap();
        let a = OperadElem::new(sigma.then(&f).unwrap(), u.clone()).unwrap();
        let b = OperadElem::new(f, act_f(&u, &sigma).unwrap()).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.to_term(), b.to_term());
        assert_eq!(a.canonical().linear().leaves(), vec![1, 2, 3]);
        assert!(OperadElem::new(FinMap::identity(1), t(&sig, "(plus x1 x1)", 1)).is_err());
    }

    #[test]
    fn signature_config() {
        let sig = Signature::from_config("mag", "# magma\nmul 2\nunit 0\n").unwrap();
        assert_eq!(sig.arity(sig.lookup("mul").unwrap()), 2);
        assert_eq!(sig.theory(), None);
        assert!(Signature::from_config("bad", "mul 2\nmul 1").is_err());
        assert!(Signature::from_config("bad", "mul").is_err());
        assert_eq!(Signature::csr().theory(), Some(Theory::Csr));
    }
}
