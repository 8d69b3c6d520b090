//! Combinatorial worldsheets: connected components carrying a genus and
//! labeled inbound and outbound boundary circles. `+` is the disjoint
//! union with `L:`/`R:` tags on labels, cancellation glues the inbound and
//! outbound circles of a label, and `0` is the empty worldsheet.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nf::MonoidNF;

use super::{enumerate_two_terms, IndexWord, TwoNode, TwoTerm};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "in")]
    pub inbound: BTreeSet<String>,
    #[serde(rename = "out")]
    pub outbound: BTreeSet<String>,
    pub genus: u32,
}

impl Component {
    pub fn is_closed(&self) -> bool {
        self.inbound.is_empty() && self.outbound.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CobordismJson {
    inbound: BTreeSet<String>,
    outbound: BTreeSet<String>,
    components: Vec<Component>,
}

/// Components sorted, so equality is equality of worldsheets up to
/// diffeomorphism fixing the labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CobordismJson", into = "CobordismJson")]
pub struct Cobordism {
    inbound: BTreeSet<String>,
    outbound: BTreeSet<String>,
    components: Vec<Component>,
}

impl TryFrom<CobordismJson> for Cobordism {
    type Error = Error;

    fn try_from(j: CobordismJson) -> Result<Self> {
        Cobordism::new(j.inbound, j.outbound, j.components)
    }
}

impl From<Cobordism> for CobordismJson {
    fn from(c: Cobordism) -> Self {
        CobordismJson {
            inbound: c.inbound,
            outbound: c.outbound,
            components: c.components,
        }
    }
}

fn partition_check(
    all: &BTreeSet<String>,
    parts: Vec<&BTreeSet<String>>,
    side: &str,
) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in parts {
        for l in p {
            if !all.contains(l) {
                return Err(Error::Cobordism(format!(
                    "{side} label `{l}` is not declared"
                )));
            }
            if !seen.insert(l) {
                return Err(Error::Cobordism(format!(
                    "{side} label `{l}` is on two components"
                )));
            }
        }
    }
    if let Some(l) = all.iter().find(|l| !seen.contains(l)) {
        return Err(Error::Cobordism(format!(
            "{side} label `{l}` is on no component"
        )));
    }
    Ok(())
}

fn tagged(tag: &str, set: &BTreeSet<String>) -> BTreeSet<String> {
    set.iter().map(|l| format!("{tag}{l}")).collect()
}

impl Cobordism {
    pub fn new(
        inbound: BTreeSet<String>,
        outbound: BTreeSet<String>,
        mut components: Vec<Component>,
    ) -> Result<Self> {
        partition_check(
            &inbound,
            components.iter().map(|c| &c.inbound).collect(),
            "inbound",
        )?;
        partition_check(
            &outbound,
            components.iter().map(|c| &c.outbound).collect(),
            "outbound",
        )?;
        components.sort();
        Ok(Cobordism {
            inbound,
            outbound,
            components,
        })
    }

    pub fn empty() -> Self {
        Cobordism {
            inbound: BTreeSet::new(),
            outbound: BTreeSet::new(),
            components: Vec::new(),
        }
    }

    pub fn inbound(&self) -> &BTreeSet<String> {
        &self.inbound
    }

    pub fn outbound(&self) -> &BTreeSet<String> {
        &self.outbound
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn total_genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }

    pub fn disjoint_union(&self, other: &Cobordism) -> Cobordism {
        let tag = |t: &str, c: &Component| Component {
            inbound: tagged(t, &c.inbound),
            outbound: tagged(t, &c.outbound),
            genus: c.genus,
        };
        let mut components: Vec<Component> = self.components.iter().map(|c| tag("L:", c)).collect();
        components.extend(other.components.iter().map(|c| tag("R:", c)));
        components.sort();
        Cobordism {
            inbound: tagged("L:", &self.inbound)
                .union(&tagged("R:", &other.inbound))
                .cloned()
                .collect(),
            outbound: tagged("L:", &self.outbound)
                .union(&tagged("R:", &other.outbound))
                .cloned()
                .collect(),
            components,
        }
    }

    /// Glues, for each label in `labels` (in the given order), its inbound
    /// circle to its outbound circle.
    pub fn self_glue(&self, labels: &[String]) -> Result<Cobordism> {
        let mut distinct = BTreeSet::new();
        for l in labels {
            if !self.inbound.contains(l) || !self.outbound.contains(l) {
                return Err(Error::Cobordism(format!(
                    "label `{l}` is not both inbound and outbound"
                )));
            }
            if !distinct.insert(l) {
                return Err(Error::Cobordism(format!("label `{l}` glued twice")));
            }
        }
        let n = self.components.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut genus: Vec<u32> = self.components.iter().map(|c| c.genus).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let holder = |l: &String, out: bool| {
            self.components
                .iter()
                .position(|c| {
                    if out {
                        c.outbound.contains(l)
                    } else {
                        c.inbound.contains(l)
                    }
                })
                .expect("labels are partitioned")
        };
        for l in labels {
            let (i, o) = (
                find(&mut parent, holder(l, false)),
                find(&mut parent, holder(l, true)),
            );
            if i == o {
                genus[i] += 1;
            } else {
                parent[o] = i;
                genus[i] += genus[o];
            }
        }
        let mut merged: BTreeMap<usize, Component> = BTreeMap::new();
        for (k, c) in self.components.iter().enumerate() {
            let r = find(&mut parent, k);
            let entry = merged.entry(r).or_insert_with(|| Component {
                inbound: BTreeSet::new(),
                outbound: BTreeSet::new(),
                genus: genus[r],
            });
            entry
                .inbound
                .extend(c.inbound.iter().filter(|l| !distinct.contains(l)).cloned());
            entry
                .outbound
                .extend(c.outbound.iter().filter(|l| !distinct.contains(l)).cloned());
        }
        let mut components: Vec<Component> = merged.into_values().collect();
        components.sort();
        Ok(Cobordism {
            inbound: self
                .inbound
                .iter()
                .filter(|l| !distinct.contains(l))
                .cloned()
                .collect(),
            outbound: self
                .outbound
                .iter()
                .filter(|l| !distinct.contains(l))
                .cloned()
                .collect(),
            components,
        })
    }

    /// Pushes bijections `f` (inbound) and `g` (outbound) through the labels.
    pub fn relabel(
        &self,
        f: &BTreeMap<String, String>,
        g: &BTreeMap<String, String>,
    ) -> Result<Cobordism> {
        let check =
            |map: &BTreeMap<String, String>, set: &BTreeSet<String>, side: &str| -> Result<()> {
                let keys: BTreeSet<&String> = map.keys().collect();
                let values: BTreeSet<&String> = map.values().collect();
                if keys != set.iter().collect() || values.len() != map.len() {
                    return Err(Error::Cobordism(format!(
                        "{side} relabeling is not a bijection"
                    )));
                }
                Ok(())
            };
        check(f, &self.inbound, "inbound")?;
        check(g, &self.outbound, "outbound")?;
        let map = |m: &BTreeMap<String, String>, s: &BTreeSet<String>| {
            s.iter().map(|l| m[l].clone()).collect()
        };
        Cobordism::new(
            map(f, &self.inbound),
            map(g, &self.outbound),
            self.components
                .iter()
                .map(|c| Component {
                    inbound: map(f, &c.inbound),
                    outbound: map(g, &c.outbound),
                    genus: c.genus,
                })
                .collect(),
        )
    }

    /// Relabels by `h` on both sides.
    pub fn relabel_by(&self, h: impl Fn(&str) -> String) -> Result<Cobordism> {
        let f = self.inbound.iter().map(|l| (l.clone(), h(l))).collect();
        let g = self.outbound.iter().map(|l| (l.clone(), h(l))).collect();
        self.relabel(&f, &g)
    }

    /// Relabels through the canonical isomorphism that forgets the tags
    /// introduced by disjoint unions.
    pub fn untagged(&self) -> Result<Cobordism> {
        self.relabel_by(|l| core(l).to_string())
    }
}

/// A label with its `L:`/`R:` tags removed.
pub fn core(label: &str) -> &str {
    let mut l = label;
    while let Some(rest) = l.strip_prefix("L:").or_else(|| l.strip_prefix("R:")) {
        l = rest;
    }
    l
}

/// Each variable `x_j` is read as a finite set of base labels; a linear
/// monoid word is read as the union of the label sets `x_j:ℓ` of its
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    labels: Vec<Vec<String>>,
}

impl Interpretation {
    pub fn new(labels: Vec<Vec<String>>) -> Self {
        Interpretation { labels }
    }

    /// Variable `j` gets base labels `p1..p_k` with `k` cycling through `1..=width`.
    pub fn cycling(arity: usize, width: usize) -> Self {
        Interpretation {
            labels: (0..arity)
                .map(|j| {
                    (1..=1 + j % width.max(1))
                        .map(|k| format!("p{k}"))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    fn label(j: usize, base: &str) -> String {
        format!("x{j}:{base}")
    }

    pub fn labels_of(&self, w: &MonoidNF) -> Result<BTreeSet<String>> {
        if w.arity() != self.labels.len() {
            return Err(Error::Cobordism(format!(
                "word over {} variables, interpretation over {}",
                w.arity(),
                self.labels.len()
            )));
        }
        let mut out = BTreeSet::new();
        for (k, &c) in w.counts().iter().enumerate() {
            if c > 1 {
                return Err(Error::Cobordism(format!(
                    "x{} occurs {c} times; only linear words are interpreted",
                    k + 1
                )));
            }
            if c == 1 {
                out.extend(self.labels[k].iter().map(|b| Self::label(k + 1, b)));
            }
        }
        Ok(out)
    }
}

/// Evaluates a word on worldsheets, one per slot.
pub fn eval_two_term(
    t: &TwoTerm,
    interp: &Interpretation,
    inputs: &[Cobordism],
) -> Result<Cobordism> {
    let ty = t.typecheck()?;
    if inputs.len() != ty.source.len() {
        return Err(Error::Cobordism(format!(
            "{} worldsheets for {} slots",
            inputs.len(),
            ty.source.len()
        )));
    }
    eval_node(t.root(), interp, inputs)
}

fn eval_node(node: &TwoNode, interp: &Interpretation, inputs: &[Cobordism]) -> Result<Cobordism> {
    match node {
        TwoNode::Zero => Ok(Cobordism::empty()),
        TwoNode::Slot(i, w) => {
            let x = &inputs[i - 1];
            if x.inbound != interp.labels_of(&w.a)? || x.outbound != interp.labels_of(&w.b)? {
                return Err(Error::Cobordism(format!(
                    "worldsheet for slot {i} does not have boundary ({w})"
                )));
            }
            Ok(x.clone())
        }
        TwoNode::Plus(s, u) => {
            Ok(eval_node(s, interp, inputs)?.disjoint_union(&eval_node(u, interp, inputs)?))
        }
        TwoNode::Check(s, c) => {
            let x = eval_node(s, interp, inputs)?;
            let glued = interp.labels_of(c)?;
            let rename = |set: &BTreeSet<String>| -> BTreeMap<String, String> {
                set.iter()
                    .map(|l| {
                        let k = core(l);
                        let new = if glued.contains(k) {
                            format!("#{k}")
                        } else {
                            l.clone()
                        };
                        (l.clone(), new)
                    })
                    .collect()
            };
            let y = x.relabel(&rename(&x.inbound), &rename(&x.outbound))?;
            let labels: Vec<String> = glued.iter().map(|k| format!("#{k}")).collect();
            y.self_glue(&labels)
        }
    }
}

/// A random worldsheet with the given boundary: every label lands on one of
/// a few components, genera are small, and closed components may appear.
pub fn random_cobordism(
    rng: &mut impl Rng,
    inbound: &BTreeSet<String>,
    outbound: &BTreeSet<String>,
) -> Cobordism {
    let n = inbound.len() + outbound.len();
    let k = rng.gen_range(1..=n.max(1));
    let mut components: Vec<Component> = (0..k)
        .map(|_| Component {
            inbound: BTreeSet::new(),
            outbound: BTreeSet::new(),
            genus: rng.gen_range(0..=2),
        })
        .collect();
    for l in inbound {
        components[rng.gen_range(0..k)].inbound.insert(l.clone());
    }
    for l in outbound {
        components[rng.gen_range(0..k)].outbound.insert(l.clone());
    }
    components.retain(|c| !c.is_closed() || c.genus > 0);
    if rng.gen_bool(0.2) {
        components.push(Component {
            inbound: BTreeSet::new(),
            outbound: BTreeSet::new(),
            genus: rng.gen_range(0..=2),
        });
    }
    Cobordism::new(inbound.clone(), outbound.clone(), components).expect("labels partitioned")
}

fn random_inputs(
    rng: &mut impl Rng,
    interp: &Interpretation,
    source: &[IndexWord],
) -> Result<Vec<Cobordism>> {
    source
        .iter()
        .map(|w| {
            Ok(random_cobordism(
                rng,
                &interp.labels_of(&w.a)?,
                &interp.labels_of(&w.b)?,
            ))
        })
        .collect()
}

/// Tally for one family of diagrams.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramTally {
    pub checked: usize,
    pub commuted: usize,
    /// Instances where the two sides differ before the canonical relabeling.
    pub needed_relabeling: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub worldsheets: usize,
    pub commutative: DiagramTally,
    pub associative: DiagramTally,
    pub unit: DiagramTally,
    pub transitive: DiagramTally,
    pub distributive: DiagramTally,
    pub trivial_cancellation: DiagramTally,
    pub normal_form: DiagramTally,
    pub glue_order_checked: usize,
    pub glue_order_independent: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        let all = [
            &self.commutative,
            &self.associative,
            &self.unit,
            &self.transitive,
            &self.distributive,
            &self.trivial_cancellation,
            &self.normal_form,
        ];
        all.iter().all(|t| t.checked > 0 && t.checked == t.commuted)
            && self.transitive.needed_relabeling == 0
            && self.trivial_cancellation.needed_relabeling == 0
            && self.glue_order_checked == self.glue_order_independent
            && self.failures.is_empty()
    }
}

/// Draws disjoint linear words out of a pool of variables.
struct Pool {
    arity: usize,
    inbound: Vec<usize>,
    outbound: Vec<usize>,
}

impl Pool {
    fn new(rng: &mut impl Rng, arity: usize) -> Pool {
        let mut inbound: Vec<usize> = (1..=arity).collect();
        let mut outbound = inbound.clone();
        inbound.shuffle(rng);
        outbound.shuffle(rng);
        Pool {
            arity,
            inbound,
            outbound,
        }
    }

    fn take(side: &mut Vec<usize>, rng: &mut impl Rng, max: usize) -> Vec<usize> {
        let k = rng.gen_range(0..=max.min(side.len()));
        side.split_off(side.len() - k)
    }

    fn word(&mut self, rng: &mut impl Rng) -> IndexWord {
        let a = Self::take(&mut self.inbound, rng, 2);
        let b = Self::take(&mut self.outbound, rng, 2);
        IndexWord::new(
            MonoidNF::from_vars(self.arity, &a).expect("in range"),
            MonoidNF::from_vars(self.arity, &b).expect("in range"),
        )
        .expect("same arity")
    }

    /// A word available on both sides, removed from both.
    fn shared(&mut self, rng: &mut impl Rng) -> MonoidNF {
        let both: Vec<usize> = self
            .inbound
            .iter()
            .copied()
            .filter(|v| self.outbound.contains(v))
            .collect();
        let k = rng.gen_range(0..=both.len().min(2));
        let chosen: Vec<usize> = both.choose_multiple(rng, k).copied().collect();
        self.inbound.retain(|v| !chosen.contains(v));
        self.outbound.retain(|v| !chosen.contains(v));
        MonoidNF::from_vars(self.arity, &chosen).expect("in range")
    }
}

fn slot(i: usize, w: &IndexWord) -> TwoNode {
    TwoNode::Slot(i, w.clone())
}

fn with(w: &IndexWord, c: &MonoidNF) -> IndexWord {
    IndexWord::new(
        w.a.add(c).expect("same arity"),
        w.b.add(c).expect("same arity"),
    )
    .expect("same arity")
}

/// A random word on up to `max_slots` slots with linear slot types.
pub fn random_two_term(rng: &mut impl Rng, arity: usize, max_slots: usize) -> TwoTerm {
    let k = rng.gen_range(0..=max_slots);
    let mut a = vec![vec![0u32; arity]; k];
    let mut b = vec![vec![0u32; arity]; k];
    for j in 0..arity {
        if k > 0 && rng.gen_bool(0.7) {
            a[rng.gen_range(0..k)][j] = 1;
        }
        if k > 0 && rng.gen_bool(0.7) {
            b[rng.gen_range(0..k)][j] = 1;
        }
    }
    let mut labels: Vec<usize> = (1..=k).collect();
    labels.shuffle(rng);
    let mut pieces: Vec<(TwoNode, IndexWord)> = (0..k)
        .map(|s| {
            let w = IndexWord::new(
                MonoidNF::from_counts(a[s].clone()),
                MonoidNF::from_counts(b[s].clone()),
            )
            .expect("same arity");
            (TwoNode::Slot(labels[s], w.clone()), w)
        })
        .collect();
    if pieces.is_empty() || rng.gen_bool(0.2) {
        pieces.push((TwoNode::Zero, IndexWord::zero(arity)));
    }
    loop {
        if rng.gen_bool(0.35) {
            let i = rng.gen_range(0..pieces.len());
            let (node, ty) = pieces[i].clone();
            let common: Vec<usize> = (1..=arity)
                .filter(|&v| ty.a.count(v) > 0 && ty.b.count(v) > 0)
                .collect();
            let n = rng.gen_range(0..=common.len());
            let c = MonoidNF::from_vars(arity, &common[..n]).expect("in range");
            let t = ty.cancel(&c).expect("fits");
            pieces[i] = (TwoNode::check(node, c), t);
        }
        if pieces.len() == 1 {
            break;
        }
        let i = rng.gen_range(0..pieces.len());
        let (l, lt) = pieces.swap_remove(i);
        let j = rng.gen_range(0..pieces.len());
        let (r, rt) = pieces.swap_remove(j);
        pieces.push((TwoNode::plus(l, r), lt.add(&rt).expect("same arity")));
    }
    let (root, _) = pieces.pop().expect("one piece");
    TwoTerm::new(arity, root).expect("constructed well typed")
}

/// Checks the six diagrams of a commutative monoid with cancellation on
/// random worldsheets, the factorization of evaluation through the normal
/// form, and independence of the gluing order.
pub fn check_cmc_axioms(samples: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = 8;
    let interp = Interpretation::cycling(arity, 2);
    let mut r = AxiomReport::default();
    for _ in 0..samples {
        let mut pool = Pool::new(&mut rng, arity);
        let c = pool.shared(&mut rng);
        let d = pool.shared(&mut rng);
        let w1 = pool.word(&mut rng);
        let w2 = pool.word(&mut rng);
        let w3 = pool.word(&mut rng);
        let t = |root: TwoNode| TwoTerm::new(arity, root);
        let s1c = with(&w1, &c);
        let s1cd = with(&s1c, &d);
        let diagrams: Vec<(&str, TwoTerm, TwoTerm)> = vec![
            (
                "commutative",
                t(TwoNode::plus(slot(1, &w1), slot(2, &w2)))?,
                t(TwoNode::plus(slot(2, &w2), slot(1, &w1)))?,
            ),
            (
                "associative",
                t(TwoNode::plus(
                    TwoNode::plus(slot(1, &w1), slot(2, &w2)),
                    slot(3, &w3),
                ))?,
                t(TwoNode::plus(
                    slot(1, &w1),
                    TwoNode::plus(slot(2, &w2), slot(3, &w3)),
                ))?,
            ),
            (
                "unit",
                t(TwoNode::plus(slot(1, &w1), TwoNode::Zero))?,
                t(slot(1, &w1))?,
            ),
            (
                "transitive",
                t(TwoNode::check(
                    TwoNode::check(slot(1, &s1cd), d.clone()),
                    c.clone(),
                ))?,
                t(TwoNode::check(slot(1, &s1cd), c.add(&d)?))?,
            ),
            (
                "distributive",
                t(TwoNode::plus(
                    TwoNode::check(slot(1, &s1c), c.clone()),
                    slot(2, &w2),
                ))?,
                t(TwoNode::check(
                    TwoNode::plus(slot(1, &s1c), slot(2, &w2)),
                    c.clone(),
                ))?,
            ),
            (
                "trivial_cancellation",
                t(TwoNode::check(slot(1, &w1), MonoidNF::zero(arity)))?,
                t(slot(1, &w1))?,
            ),
        ];
        for (name, lhs, rhs) in diagrams {
            let inputs = random_inputs(&mut rng, &interp, &lhs.typecheck()?.source)?;
            r.worldsheets += inputs.len();
            let tally = match name {
                "commutative" => &mut r.commutative,
                "associative" => &mut r.associative,
                "unit" => &mut r.unit,
                "transitive" => &mut r.transitive,
                "distributive" => &mut r.distributive,
                _ => &mut r.trivial_cancellation,
            };
            compare(tally, &mut r.failures, name, &lhs, &rhs, &interp, &inputs)?;
        }
        let term = random_two_term(&mut rng, arity, 4);
        let inputs = random_inputs(&mut rng, &interp, &term.typecheck()?.source)?;
        r.worldsheets += inputs.len();
        let nf = term.normalize()?.to_term();
        compare(
            &mut r.normal_form,
            &mut r.failures,
            "normal_form",
            &term,
            &nf,
            &interp,
            &inputs,
        )?;

        let closed = random_glue_instance(&mut rng);
        let labels: Vec<String> = closed
            .inbound
            .intersection(&closed.outbound)
            .cloned()
            .collect();
        let reference = closed.self_glue(&labels)?;
        let mut order = labels.clone();
        order.shuffle(&mut rng);
        r.worldsheets += 1;
        r.glue_order_checked += 1;
        let mut stepwise = closed.clone();
        for l in &order {
            stepwise = stepwise.self_glue(std::slice::from_ref(l))?;
        }
        if closed.self_glue(&order)? == reference && stepwise == reference {
            r.glue_order_independent += 1;
        } else if r.failures.len() < 10 {
            r.failures
                .push(format!("gluing order matters for {closed:?}"));
        }
    }
    Ok(r)
}

/// A worldsheet with some labels present on both sides.
pub fn random_glue_instance(rng: &mut impl Rng) -> Cobordism {
    let n = rng.gen_range(0..=5);
    let shared: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
    let mut inbound: BTreeSet<String> = shared.iter().cloned().collect();
    let mut outbound = inbound.clone();
    for k in 0..rng.gen_range(0..=2) {
        inbound.insert(format!("a{k}"));
    }
    for k in 0..rng.gen_range(0..=2) {
        outbound.insert(format!("b{k}"));
    }
    random_cobordism(rng, &inbound, &outbound)
}

fn compare(
    tally: &mut DiagramTally,
    failures: &mut Vec<String>,
    name: &str,
    lhs: &TwoTerm,
    rhs: &TwoTerm,
    interp: &Interpretation,
    inputs: &[Cobordism],
) -> Result<()> {
    let x = eval_two_term(lhs, interp, inputs)?;
    let y = eval_two_term(rhs, interp, inputs)?;
    tally.checked += 1;
    if x != y {
        tally.needed_relabeling += 1;
    }
    if x.untagged()? == y.untagged()? {
        tally.commuted += 1;
    } else if failures.len() < 10 {
        failures.push(format!("{name}: {lhs} and {rhs} disagree"));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadicReport {
    pub terms: usize,
    pub parallel_classes: usize,
    pub evaluations: usize,
    pub mismatches: usize,
    pub failures: Vec<String>,
}

impl OperadicReport {
    pub fn passed(&self) -> bool {
        self.parallel_classes > 0 && self.mismatches == 0
    }
}

/// All words with at most `max_slots` slots and `max_nodes` nodes over
/// `arity` variables are grouped by source and target; within a group every
/// word is evaluated on `samples` random inputs and must agree with the
/// others after the canonical relabeling.
pub fn check_operadic_coherence(
    max_slots: usize,
    max_nodes: usize,
    arity: usize,
    samples: usize,
    seed: u64,
) -> Result<OperadicReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interp = Interpretation::cycling(arity, 2);
    let terms = enumerate_two_terms(max_slots, max_nodes, arity);
    let mut groups: BTreeMap<(Vec<IndexWord>, IndexWord), Vec<&TwoTerm>> = BTreeMap::new();
    for t in &terms {
        let ty = t.typecheck()?;
        groups.entry((ty.source, ty.target)).or_default().push(t);
    }
    let mut r = OperadicReport {
        terms: terms.len(),
        ..OperadicReport::default()
    };
    for ((source, _), members) in &groups {
        if members.len() < 2 {
            continue;
        }
        r.parallel_classes += 1;
        for _ in 0..samples {
            let inputs = random_inputs(&mut rng, &interp, source)?;
            let reference = eval_two_term(members[0], &interp, &inputs)?.untagged()?;
            for m in &members[1..] {
                r.evaluations += 1;
                if eval_two_term(m, &interp, &inputs)?.untagged()? != reference {
                    r.mismatches += 1;
                    if r.failures.len() < 10 {
                        r.failures
                            .push(format!("{} and {m} act differently", members[0]));
                    }
                }
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    fn comp(i: &[&str], o: &[&str], g: u32) -> Component {
        Component {
            inbound: set(i),
            outbound: set(o),
            genus: g,
        }
    }

    #[test]
    fn glue_on_one_component_adds_a_handle() {
        let x = Cobordism::new(set(&["c"]), set(&["c"]), vec![comp(&["c"], &["c"], 0)]).unwrap();
        let y = x.self_glue(&["c".into()]).unwrap();
        assert_eq!(y.components(), &[comp(&[], &[], 1)]);
        assert_eq!(x.self_glue(&[]).unwrap(), x);
    }

    #[test]
    fn glue_across_components_merges() {
        let x = Cobordism::new(
            set(&["c"]),
            set(&["c"]),
            vec![comp(&["c"], &[], 0), comp(&[], &["c"], 0)],
        )
        .unwrap();
        let y = x.self_glue(&["c".into()]).unwrap();
        assert_eq!(y.components(), &[comp(&[], &[], 0)]);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(Cobordism::new(set(&["a"]), set(&[]), vec![]).is_err());
        assert!(Cobordism::new(
            set(&["a"]),
            set(&[]),
            vec![comp(&["a"], &[], 0), comp(&["a"], &[], 0)]
        )
        .is_err());
        let x = Cobordism::new(set(&["a"]), set(&[]), vec![comp(&["a"], &[], 0)]).unwrap();
        assert!(x.self_glue(&["a".into()]).is_err());
        let bad: BTreeMap<String, String> =
            BTreeMap::from([("a".into(), "b".into()), ("z".into(), "c".into())]);
        assert!(x.relabel(&bad, &BTreeMap::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = Cobordism::new(
            set(&["a", "c"]),
            set(&["c"]),
            vec![comp(&["a"], &["c"], 2), comp(&["c"], &[], 0)],
        )
        .unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert!(text.contains("\"in\""));
        assert_eq!(serde_json::from_str::<Cobordism>(&text).unwrap(), x);
        assert!(serde_json::from_str::<Cobordism>(
            r#"{"inbound":["a"],"outbound":[],"components":[]}"#
        )
        .is_err());
    }

    #[test]
    fn plus_is_tagged_but_commutes_after_untagging() {
        let x = Cobordism::new(set(&["x1:p1"]), set(&[]), vec![comp(&["x1:p1"], &[], 0)]).unwrap();
        let y = Cobordism::new(set(&[]), set(&["x2:p1"]), vec![comp(&[], &["x2:p1"], 1)]).unwrap();
        let xy = x.disjoint_union(&y);
        let yx = y.disjoint_union(&x);
        assert_ne!(xy, yx);
        assert_eq!(xy.untagged().unwrap(), yx.untagged().unwrap());
        assert_eq!(core("L:R:x1:p1"), "x1:p1");
    }

    #[test]
    fn evaluation_glues_the_cancelled_labels() {
        let interp = Interpretation::cycling(2, 1);
        let t = TwoTerm::parse(
            "(check (plus (slot 1 [x1] []) (slot 2 [x2] [x1])) [x1])",
            None,
        )
        .unwrap();
        let x = Cobordism::new(set(&["x1:p1"]), set(&[]), vec![comp(&["x1:p1"], &[], 0)]).unwrap();
        let y = Cobordism::new(
            set(&["x2:p1"]),
            set(&["x1:p1"]),
            vec![comp(&["x2:p1"], &["x1:p1"], 0)],
        )
        .unwrap();
        let z = eval_two_term(&t, &interp, &[x.clone(), y]).unwrap();
        assert_eq!(
            z.untagged().unwrap().components(),
            &[comp(&["x2:p1"], &[], 0)]
        );
        assert!(eval_two_term(&t, &interp, &[x.clone(), x]).is_err());
    }

    #[test]
    fn axioms_and_coherence_hold_on_samples() {
        let r = check_cmc_axioms(60, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.commutative.needed_relabeling > 0);
        let o = check_operadic_coherence(2, 4, 2, 2, 3).unwrap();
        assert!(o.passed(), "{o:?}");
    }
}
