//! The 2-operad of commutative monoids with cancellation. A word is a tree
//! of `+`, cancellation and `0` over numbered input slots; every slot is
//! typed by a pair of commutative-monoid words over a shared set of
//! variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::FinMap;
use crate::nf::MonoidNF;
use crate::term::{parse_var, tokenize};

pub mod cobordism;
mod oracle;

pub use oracle::{
    axiom_rewrite_oracle, ball, cmc_sweep, enumerate_two_terms, rewrites, CmcReport, OracleCaps,
};

/// A pair `(a, b)` of monoid words over one ambient arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexWord {
    pub a: MonoidNF,
    pub b: MonoidNF,
}

impl IndexWord {
    pub fn new(a: MonoidNF, b: MonoidNF) -> Result<Self> {
        if a.arity() != b.arity() {
            return Err(Error::Arity(format!(
                "index word over {} and {} variables",
                a.arity(),
                b.arity()
            )));
        }
        Ok(IndexWord { a, b })
    }

    pub fn zero(arity: usize) -> Self {
        IndexWord {
            a: MonoidNF::zero(arity),
            b: MonoidNF::zero(arity),
        }
    }

    pub fn arity(&self) -> usize {
        self.a.arity()
    }

    pub fn add(&self, other: &IndexWord) -> Result<IndexWord> {
        Ok(IndexWord {
            a: self.a.add(&other.a)?,
            b: self.b.add(&other.b)?,
        })
    }

    /// `(a - c, b - c)` when `c` fits under both sides.
    pub fn cancel(&self, c: &MonoidNF) -> Option<IndexWord> {
        Some(IndexWord {
            a: self.a.checked_sub(c)?,
            b: self.b.checked_sub(c)?,
        })
    }

    pub fn pushforward(&self, f: &FinMap) -> Result<IndexWord> {
        Ok(IndexWord {
            a: self.a.pushforward(f)?,
            b: self.b.pushforward(f)?,
        })
    }

    pub fn gamma(&self, us: &[MonoidNF]) -> Result<IndexWord> {
        Ok(IndexWord {
            a: self.a.gamma(us)?,
            b: self.b.gamma(us)?,
        })
    }

    /// No variable occurs twice on either side.
    pub fn is_linear(&self) -> bool {
        self.a
            .counts()
            .iter()
            .chain(self.b.counts())
            .all(|&c| c <= 1)
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", Bracket(&self.a), Bracket(&self.b))
    }
}

struct Bracket<'a>(&'a MonoidNF);

impl fmt::Display for Bracket<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.0.vars().iter().map(|v| format!("x{v}")).collect();
        write!(f, "[{}]", vars.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoNode {
    Plus(Box<TwoNode>, Box<TwoNode>),
    Check(Box<TwoNode>, MonoidNF),
    Zero,
    Slot(usize, IndexWord),
}

impl TwoNode {
    pub fn plus(s: TwoNode, t: TwoNode) -> TwoNode {
        TwoNode::Plus(Box::new(s), Box::new(t))
    }

    pub fn check(s: TwoNode, c: MonoidNF) -> TwoNode {
        TwoNode::Check(Box::new(s), c)
    }

    pub fn size(&self) -> usize {
        match self {
            TwoNode::Plus(s, t) => 1 + s.size() + t.size(),
            TwoNode::Check(s, _) => 1 + s.size(),
            TwoNode::Zero | TwoNode::Slot(..) => 1,
        }
    }

    fn slots(&self, out: &mut Vec<(usize, IndexWord)>) {
        match self {
            TwoNode::Plus(s, t) => {
                s.slots(out);
                t.slots(out);
            }
            TwoNode::Check(s, _) => s.slots(out),
            TwoNode::Zero => {}
            TwoNode::Slot(i, w) => out.push((*i, w.clone())),
        }
    }

    /// Target index word, checking every node against its children.
    pub fn type_of(&self, arity: usize) -> Result<IndexWord> {
        self.type_at(arity, &mut Vec::new())
    }

    fn type_at(&self, arity: usize, path: &mut Vec<usize>) -> Result<IndexWord> {
        let fail = |path: &[usize], message: String| Error::Typing {
            path: path_string(path),
            message,
        };
        match self {
            TwoNode::Zero => Ok(IndexWord::zero(arity)),
            TwoNode::Slot(i, w) => {
                if *i == 0 {
                    return Err(fail(path, "slots are numbered from 1".into()));
                }
                if w.a.arity() != arity || w.b.arity() != arity {
                    return Err(fail(
                        path,
                        format!("slot {i} is not over {arity} variables"),
                    ));
                }
                Ok(w.clone())
            }
            TwoNode::Plus(s, t) => {
                path.push(0);
                let x = s.type_at(arity, path)?;
                path.pop();
                path.push(1);
                let y = t.type_at(arity, path)?;
                path.pop();
                x.add(&y)
            }
            TwoNode::Check(s, c) => {
                if c.arity() != arity {
                    return Err(fail(
                        path,
                        format!("cancellation word is not over {arity} variables"),
                    ));
                }
                path.push(0);
                let x = s.type_at(arity, path)?;
                path.pop();
                x.cancel(c)
                    .ok_or_else(|| fail(path, format!("cannot cancel {} from ({x})", Bracket(c))))
            }
        }
    }

    fn map_words(&self, f: &mut impl FnMut(&MonoidNF) -> Result<MonoidNF>) -> Result<TwoNode> {
        Ok(match self {
            TwoNode::Plus(s, t) => TwoNode::plus(s.map_words(f)?, t.map_words(f)?),
            TwoNode::Check(s, c) => TwoNode::check(s.map_words(f)?, f(c)?),
            TwoNode::Zero => TwoNode::Zero,
            TwoNode::Slot(i, w) => TwoNode::Slot(*i, IndexWord::new(f(&w.a)?, f(&w.b)?)?),
        })
    }

    fn map_slots(&self, f: &mut impl FnMut(usize, &IndexWord) -> TwoNode) -> TwoNode {
        match self {
            TwoNode::Plus(s, t) => TwoNode::plus(s.map_slots(f), t.map_slots(f)),
            TwoNode::Check(s, c) => TwoNode::check(s.map_slots(f), c.clone()),
            TwoNode::Zero => TwoNode::Zero,
            TwoNode::Slot(i, w) => f(*i, w),
        }
    }

    pub(crate) fn at(&self, pos: &[usize]) -> Option<&TwoNode> {
        match pos.split_first() {
            None => Some(self),
            Some((&k, rest)) => match (self, k) {
                (TwoNode::Plus(s, _), 0) | (TwoNode::Check(s, _), 0) => s.at(rest),
                (TwoNode::Plus(_, t), 1) => t.at(rest),
                _ => None,
            },
        }
    }

    pub(crate) fn replace_at(&self, pos: &[usize], new: TwoNode) -> TwoNode {
        match pos.split_first() {
            None => new,
            Some((&k, rest)) => match (self, k) {
                (TwoNode::Plus(s, t), 0) => TwoNode::plus(s.replace_at(rest, new), (**t).clone()),
                (TwoNode::Plus(s, t), 1) => TwoNode::plus((**s).clone(), t.replace_at(rest, new)),
                (TwoNode::Check(s, c), 0) => TwoNode::check(s.replace_at(rest, new), c.clone()),
                _ => panic!("position outside the term"),
            },
        }
    }

    pub(crate) fn positions(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        match self {
            TwoNode::Plus(s, t) => {
                prefix.push(0);
                s.positions(prefix, out);
                prefix.pop();
                prefix.push(1);
                t.positions(prefix, out);
                prefix.pop();
            }
            TwoNode::Check(s, _) => {
                prefix.push(0);
                s.positions(prefix, out);
                prefix.pop();
            }
            TwoNode::Zero | TwoNode::Slot(..) => {}
        }
    }
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        let parts: Vec<String> = path.iter().map(usize::to_string).collect();
        format!("root.{}", parts.join("."))
    }
}

impl fmt::Display for TwoNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoNode::Plus(s, t) => write!(f, "(plus {s} {t})"),
            TwoNode::Check(s, c) => write!(f, "(check {s} {})", Bracket(c)),
            TwoNode::Zero => write!(f, "zero"),
            TwoNode::Slot(i, w) => write!(f, "(slot {i} {w})"),
        }
    }
}

/// A well-typed word: each slot `1..=n` occurs exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTerm {
    arity: usize,
    root: TwoNode,
}

/// Source and target index words of a [`TwoTerm`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoType {
    pub source: Vec<IndexWord>,
    pub target: IndexWord,
}

impl TwoTerm {
    pub fn new(arity: usize, root: TwoNode) -> Result<Self> {
        let t = TwoTerm { arity, root };
        t.typecheck()?;
        Ok(t)
    }

    pub(crate) fn from_parts(arity: usize, root: TwoNode) -> Self {
        TwoTerm { arity, root }
    }

    /// The unit `1_w`.
    pub fn unit(w: IndexWord) -> Self {
        TwoTerm {
            arity: w.arity(),
            root: TwoNode::Slot(1, w),
        }
    }

    pub fn zero(arity: usize) -> Self {
        TwoTerm {
            arity,
            root: TwoNode::Zero,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &TwoNode {
        &self.root
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    pub fn slot_count(&self) -> usize {
        let mut s = Vec::new();
        self.root.slots(&mut s);
        s.len()
    }

    pub fn typecheck(&self) -> Result<TwoType> {
        let target = self.root.type_of(self.arity)?;
        let mut slots = Vec::new();
        self.root.slots(&mut slots);
        slots.sort_by_key(|s| s.0);
        for (k, (i, _)) in slots.iter().enumerate() {
            if *i != k + 1 {
                return Err(Error::Typing {
                    path: "root".into(),
                    message: format!("slots must be 1..={} each used once", slots.len()),
                });
            }
        }
        Ok(TwoType {
            source: slots.into_iter().map(|s| s.1).collect(),
            target,
        })
    }

    /// `term := (plus term term) | (check term [vars]) | zero | (slot i [vars] [vars])`.
    /// The arity defaults to the largest variable index mentioned.
    pub fn parse(text: &str, arity: Option<usize>) -> Result<TwoTerm> {
        let tokens = tokenize(text)?;
        let mut at = 0;
        let raw = parse_raw(&tokens, &mut at)?;
        if at != tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input after term: `{}`",
                tokens[at..].join(" ")
            )));
        }
        let used = raw.max_var();
        let arity = match arity {
            Some(m) if m < used => {
                return Err(Error::Arity(format!("x{used} outside arity {m}")));
            }
            Some(m) => m,
            None => used,
        };
        TwoTerm::new(arity, raw.build(arity)?)
    }

    pub fn normalize(&self) -> Result<TwoNF> {
        let ty = self.typecheck()?;
        let mut cancel = MonoidNF::zero(self.arity);
        collect_cancel(&self.root, &mut cancel)?;
        let total = ty
            .source
            .iter()
            .try_fold(IndexWord::zero(self.arity), |acc, w| acc.add(w))?;
        if total.cancel(&cancel).as_ref() != Some(&ty.target) {
            return Err(Error::Typing {
                path: "root".into(),
                message: "cancellation does not account for the target".into(),
            });
        }
        Ok(TwoNF {
            slots: (1..=ty.source.len()).collect(),
            cancel,
            source: ty.source,
            target: ty.target,
        })
    }

    /// `()_f`: pushes every index word forward along `f`.
    pub fn t_funct(&self, f: &FinMap) -> Result<TwoTerm> {
        if f.dom_size() != self.arity {
            return Err(Error::Arity(format!(
                "map domain {} vs arity {}",
                f.dom_size(),
                self.arity
            )));
        }
        TwoTerm::new(
            f.cod_size(),
            self.root.map_words(&mut |w| w.pushforward(f))?,
        )
    }

    /// `(u_1..u_m)^*`: substitutes `u_i` for `x_i` in every index word.
    pub fn t_subst(&self, us: &[MonoidNF]) -> Result<TwoTerm> {
        if us.len() != self.arity {
            return Err(Error::Arity(format!(
                "{} words substituted into arity {}",
                us.len(),
                self.arity
            )));
        }
        let arity = us.iter().map(MonoidNF::arity).sum();
        TwoTerm::new(arity, self.root.map_words(&mut |w| w.gamma(us))?)
    }

    /// `()^ι` for a bijection `ι`: slot `i` becomes slot `ι(i)`.
    pub fn theta_funct(&self, iota: &FinMap) -> Result<TwoTerm> {
        let n = self.slot_count();
        if !iota.is_bijection() || iota.dom_size() != n {
            return Err(Error::Arity(format!(
                "slot relabeling must be a bijection of {n} slots"
            )));
        }
        TwoTerm::new(
            self.arity,
            self.root
                .map_slots(&mut |i, w| TwoNode::Slot(iota.apply(i), w.clone())),
        )
    }

    /// `γ(α; α_1..α_q)`: plugs `α_j` into slot `j`, renumbering its slots
    /// after those of `α_1..α_{j-1}`.
    pub fn theta_compose(&self, args: &[TwoTerm]) -> Result<TwoTerm> {
        let ty = self.typecheck()?;
        if args.len() != ty.source.len() {
            return Err(Error::Arity(format!(
                "{} arguments for {} slots",
                args.len(),
                ty.source.len()
            )));
        }
        let mut offsets = Vec::with_capacity(args.len());
        let mut offset = 0;
        for (j, a) in args.iter().enumerate() {
            let at = a.typecheck()?;
            if a.arity != self.arity || at.target != ty.source[j] {
                return Err(Error::Typing {
                    path: format!("slot {}", j + 1),
                    message: format!(
                        "argument has target ({}) but the slot expects ({})",
                        at.target, ty.source[j]
                    ),
                });
            }
            offsets.push(offset);
            offset += at.source.len();
        }
        let root = self.root.map_slots(&mut |i, _| {
            let off = offsets[i - 1];
            args[i - 1]
                .root
                .map_slots(&mut |k, w| TwoNode::Slot(k + off, w.clone()))
        });
        TwoTerm::new(self.arity, root)
    }
}

impl fmt::Display for TwoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

fn collect_cancel(node: &TwoNode, acc: &mut MonoidNF) -> Result<()> {
    match node {
        TwoNode::Plus(s, t) => {
            collect_cancel(s, acc)?;
            collect_cancel(t, acc)
        }
        TwoNode::Check(s, c) => {
            *acc = acc.add(c)?;
            collect_cancel(s, acc)
        }
        TwoNode::Zero | TwoNode::Slot(..) => Ok(()),
    }
}

/// Normal form: the slots in increasing order under one `+`, followed by a
/// single cancellation of the total cancelled word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoNF {
    pub slots: Vec<usize>,
    pub cancel: MonoidNF,
    pub source: Vec<IndexWord>,
    pub target: IndexWord,
}

impl TwoNF {
    /// The normal form read back as a word.
    pub fn to_term(&self) -> TwoTerm {
        let arity = self.target.arity();
        let body = self
            .slots
            .iter()
            .map(|&i| TwoNode::Slot(i, self.source[i - 1].clone()))
            .reduce(TwoNode::plus)
            .unwrap_or(TwoNode::Zero);
        let root = if self.cancel.is_zero() {
            body
        } else {
            TwoNode::check(body, self.cancel.clone())
        };
        TwoTerm::from_parts(arity, root)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "slots": self.slots,
            "cancel": Bracket(&self.cancel).to_string(),
            "source": self.source.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "target": self.target.to_string(),
            "term": self.to_term().to_string(),
        })
    }
}

/// Equality in the free 2-operad. Terms with different sources are not
/// comparable; terms with the same source but different targets are
/// distinct.
pub fn two_equal(s: &TwoTerm, t: &TwoTerm) -> Result<bool> {
    let (x, y) = (s.normalize()?, t.normalize()?);
    if s.arity != t.arity || x.source != y.source {
        return Err(Error::Typing {
            path: "root".into(),
            message: "terms have different sources".into(),
        });
    }
    Ok(x == y)
}

/// The cancellation generator `X_{u+d, v+d} -> X_{u,v}` over `(u, v, d)`.
pub fn cancellation_generator() -> TwoTerm {
    let w = |v: &[usize]| MonoidNF::from_vars(3, v).expect("in range");
    TwoTerm::from_parts(
        3,
        TwoNode::check(
            TwoNode::Slot(
                1,
                IndexWord::new(w(&[1, 3]), w(&[2, 3])).expect("same arity"),
            ),
            w(&[3]),
        ),
    )
}

/// The first map of `X_{(a+c)+d,(b+c)+d} -> X_{a+c,b+c} -> X_{a,b}`,
/// obtained from the cancellation generator by substituting `a+e` for `u`
/// and `b+h` for `v`, then identifying `e` and `h` into `c`. Variables of
/// the result are `(a, b, c, d)`.
pub fn transitivity_first_map() -> Result<TwoTerm> {
    let two = |v: &[usize]| MonoidNF::from_vars(2, v);
    let substituted = cancellation_generator().t_subst(&[
        two(&[1, 2])?,
        two(&[1, 2])?,
        MonoidNF::from_vars(1, &[1])?,
    ])?;
    // variables after substitution: a, e, b, h, d
    substituted.t_funct(&FinMap::new(4, vec![1, 3, 2, 3, 4])?)
}

enum Raw {
    Plus(Box<Raw>, Box<Raw>),
    Check(Box<Raw>, Vec<usize>),
    Zero,
    Slot(usize, Vec<usize>, Vec<usize>),
}

impl Raw {
    fn max_var(&self) -> usize {
        let m = |v: &[usize]| v.iter().copied().max().unwrap_or(0);
        match self {
            Raw::Plus(s, t) => s.max_var().max(t.max_var()),
            Raw::Check(s, c) => s.max_var().max(m(c)),
            Raw::Zero => 0,
            Raw::Slot(_, a, b) => m(a).max(m(b)),
        }
    }

    fn build(&self, arity: usize) -> Result<TwoNode> {
        Ok(match self {
            Raw::Plus(s, t) => TwoNode::plus(s.build(arity)?, t.build(arity)?),
            Raw::Check(s, c) => TwoNode::check(s.build(arity)?, MonoidNF::from_vars(arity, c)?),
            Raw::Zero => TwoNode::Zero,
            Raw::Slot(i, a, b) => TwoNode::Slot(
                *i,
                IndexWord::new(
                    MonoidNF::from_vars(arity, a)?,
                    MonoidNF::from_vars(arity, b)?,
                )?,
            ),
        })
    }
}

fn expect(tokens: &[String], at: &mut usize, want: &str) -> Result<()> {
    match tokens.get(*at) {
        Some(t) if t == want => {
            *at += 1;
            Ok(())
        }
        Some(t) => Err(Error::Parse(format!("expected `{want}`, found `{t}`"))),
        None => Err(Error::Parse(format!(
            "expected `{want}`, found end of input"
        ))),
    }
}

fn parse_vars(tokens: &[String], at: &mut usize) -> Result<Vec<usize>> {
    expect(tokens, at, "[")?;
    let mut vars = Vec::new();
    loop {
        match tokens.get(*at).map(String::as_str) {
            Some("]") => {
                *at += 1;
                return Ok(vars);
            }
            Some("0") => *at += 1,
            Some(t) => {
                let v = parse_var(t)
                    .ok_or_else(|| Error::Parse(format!("expected a variable, found `{t}`")))?;
                vars.push(v);
                *at += 1;
            }
            None => return Err(Error::Parse("unclosed `[`".into())),
        }
    }
}

fn parse_raw(tokens: &[String], at: &mut usize) -> Result<Raw> {
    let tok = tokens
        .get(*at)
        .ok_or_else(|| Error::Parse("unexpected end of term".into()))?;
    *at += 1;
    if tok == "zero" {
        return Ok(Raw::Zero);
    }
    if tok != "(" {
        return Err(Error::Parse(format!("unexpected token `{tok}`")));
    }
    let head = tokens
        .get(*at)
        .ok_or_else(|| Error::Parse("expected a constructor after `(`".into()))?
        .clone();
    *at += 1;
    let raw = match head.as_str() {
        "plus" => {
            let s = parse_raw(tokens, at)?;
            let t = parse_raw(tokens, at)?;
            Raw::Plus(Box::new(s), Box::new(t))
        }
        "check" => {
            let s = parse_raw(tokens, at)?;
            Raw::Check(Box::new(s), parse_vars(tokens, at)?)
        }
        "zero" => Raw::Zero,
        "slot" => {
            let i = tokens
                .get(*at)
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse("expected a slot number".into()))?;
            *at += 1;
            let a = parse_vars(tokens, at)?;
            let b = parse_vars(tokens, at)?;
            Raw::Slot(i, a, b)
        }
        other => return Err(Error::Parse(format!("unknown constructor `{other}`"))),
    };
    expect(tokens, at, ")")?;
    Ok(raw)
}

/// One instance of each axiom of a commutative monoid with cancellation,
/// as a pair of words over five variables.
pub fn axiom_instances() -> Result<Vec<(&'static str, TwoTerm, TwoTerm)>> {
    let pairs = [
        (
            "commutativity",
            "(plus (slot 1 [x1] [x2]) (slot 2 [x3] [x4]))",
            "(plus (slot 2 [x3] [x4]) (slot 1 [x1] [x2]))",
        ),
        (
            "associativity",
            "(plus (plus (slot 1 [x1] []) (slot 2 [x2] [])) (slot 3 [] [x3]))",
            "(plus (slot 1 [x1] []) (plus (slot 2 [x2] []) (slot 3 [] [x3])))",
        ),
        (
            "unit",
            "(plus (slot 1 [x1] [x2]) zero)",
            "(slot 1 [x1] [x2])",
        ),
        (
            "transitivity",
            "(check (check (slot 1 [x1 x3 x4] [x2 x3 x4]) [x4]) [x3])",
            "(check (slot 1 [x1 x3 x4] [x2 x3 x4]) [x3 x4])",
        ),
        (
            "distributivity",
            "(plus (check (slot 1 [x1 x3] [x2 x3]) [x3]) (slot 2 [x4] [x5]))",
            "(check (plus (slot 1 [x1 x3] [x2 x3]) (slot 2 [x4] [x5])) [x3])",
        ),
        (
            "trivial cancellation",
            "(check (slot 1 [x1] [x2]) [])",
            "(slot 1 [x1] [x2])",
        ),
    ];
    pairs
        .into_iter()
        .map(|(name, l, r)| {
            Ok((
                name,
                TwoTerm::parse(l, Some(5))?,
                TwoTerm::parse(r, Some(5))?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(text: &str) -> TwoTerm {
        TwoTerm::parse(text, None).unwrap()
    }

    fn w(arity: usize, vars: &[usize]) -> MonoidNF {
        MonoidNF::from_vars(arity, vars).unwrap()
    }

    #[test]
    fn typing_rules() {
        let zero = TwoTerm::parse("zero", Some(2)).unwrap();
        assert_eq!(zero.typecheck().unwrap().target, IndexWord::zero(2));
        let plus = t("(plus (slot 1 [x1] [x2]) (slot 2 [x3] [x4]))");
        let ty = plus.typecheck().unwrap();
        assert_eq!(ty.target.a, w(4, &[1, 3]));
        assert_eq!(ty.target.b, w(4, &[2, 4]));
        let check = t("(check (slot 1 [x1 x3] [x2 x3]) [x3])");
        assert_eq!(
            check.typecheck().unwrap().target,
            IndexWord::new(w(3, &[1]), w(3, &[2])).unwrap()
        );
    }

    #[test]
    fn typing_errors_name_the_node() {
        let err = TwoTerm::parse(
            "(plus (slot 1 [x1] [x1]) (check (slot 2 [x2] []) [x2]))",
            None,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Typing { ref path, .. } if path == "root.1"),
            "{err}"
        );
        assert!(TwoTerm::parse("(plus (slot 1 [] []) (slot 1 [] []))", None).is_err());
        assert!(TwoTerm::parse("(slot 2 [] [])", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "(check (plus (slot 2 [x1 x3] [x2]) (slot 1 [] [x3])) [x3])",
            "zero",
            "(plus zero (slot 1 [x1 x1] []))",
        ] {
            let term = TwoTerm::parse(text, Some(3)).unwrap();
            assert_eq!(term.to_string(), text);
            assert_eq!(TwoTerm::parse(&term.to_string(), Some(3)).unwrap(), term);
        }
    }

    #[test]
    fn axioms_hold_as_normal_form_identities() {
        let instances = axiom_instances().unwrap();
        assert_eq!(instances.len(), 6);
        for (name, l, r) in instances {
            assert!(two_equal(&l, &r).unwrap(), "{name}: {l} = {r}");
        }
    }

    #[test]
    fn different_cancellation_is_distinct() {
        let s = TwoTerm::parse("(plus (slot 1 [x1] [x1]) (slot 2 [x2] [x2]))", None).unwrap();
        let u = TwoTerm::parse(
            "(check (plus (slot 1 [x1] [x1]) (slot 2 [x2] [x2])) [x1])",
            None,
        )
        .unwrap();
        assert!(!two_equal(&s, &u).unwrap());
        assert!(two_equal(&s, &s).unwrap());
        let other = TwoTerm::parse("(slot 1 [x1] [x1])", Some(2)).unwrap();
        assert!(two_equal(&s, &other).is_err());
    }

    #[test]
    fn normal_form_replays_to_an_equal_term() {
        let s = t("(plus (slot 2 [x1 x3] [x2]) (check (slot 1 [x4] [x4 x3]) [x4]))");
        let nf = s.normalize().unwrap();
        assert_eq!(nf.slots, vec![1, 2]);
        assert_eq!(nf.cancel, w(4, &[4]));
        let replay = nf.to_term();
        assert_eq!(
            replay.to_string(),
            "(check (plus (slot 1 [x4] [x3 x4]) (slot 2 [x1 x3] [x2])) [x4])"
        );
        assert_eq!(replay.normalize().unwrap(), nf);
    }

    #[test]
    fn identity_pushforward_is_trivial() {
        let s = t("(check (plus (slot 1 [x1 x3] [x2]) (slot 2 [] [x3])) [x3])");
        assert_eq!(s.t_funct(&FinMap::identity(3)).unwrap(), s);
        let units: Vec<MonoidNF> = (1..=3).map(|_| w(1, &[1])).collect();
        assert_eq!(s.t_subst(&units).unwrap(), s);
    }

    #[test]
    fn transitivity_first_map_replays() {
        let m = transitivity_first_map().unwrap();
        assert_eq!(m.to_string(), "(check (slot 1 [x1 x3 x4] [x2 x3 x4]) [x4])");
        let ty = m.typecheck().unwrap();
        assert_eq!(
            ty.target,
            IndexWord::new(w(4, &[1, 3]), w(4, &[2, 3])).unwrap()
        );
        let second = TwoTerm::parse("(check (slot 1 [x1 x3] [x2 x3]) [x3])", Some(4)).unwrap();
        let composite = second.theta_compose(&[m]).unwrap();
        let direct =
            TwoTerm::parse("(check (slot 1 [x1 x3 x4] [x2 x3 x4]) [x3 x4])", None).unwrap();
        assert!(two_equal(&composite, &direct).unwrap());
    }

    #[test]
    fn composition_checks_slot_types() {
        let outer = t("(plus (slot 1 [x1] []) (slot 2 [] [x2]))");
        let good = TwoTerm::parse("(check (slot 1 [x1 x2] [x2]) [x2])", Some(2)).unwrap();
        let unit2 = TwoTerm::unit(IndexWord::new(w(2, &[]), w(2, &[2])).unwrap());
        let c = outer.theta_compose(&[good.clone(), unit2.clone()]).unwrap();
        assert_eq!(
            c.to_string(),
            "(plus (check (slot 1 [x1 x2] [x2]) [x2]) (slot 2 [] [x2]))"
        );
        assert!(outer.theta_compose(&[unit2, good]).is_err());
    }
}
