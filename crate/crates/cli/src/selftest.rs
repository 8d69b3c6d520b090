use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use laplaza::coherence::sweep::{laplaza_sweep, maclane_sweep};
use laplaza::coherence::{
    decide_equal, gould_certificate, monomial_model, Caps, CoherencePath, CoherenceStep, Verdict,
};
use laplaza::gen::enumerate_terms;
use laplaza::laws::theory_law_sweep;
use laplaza::nf::{laplaza_member, project_monoid, LaplazaSpec, MonoidNF};
use laplaza::strictify::{fixtures, strictify, verify_equivalence, verify_strict, FinSymMonCat};
use laplaza::term::{act_f, is_linear, parse_node, Node, OperadElem, Signature, Term};
use laplaza::two_theory::cobordism::{check_cmc_axioms, random_glue_instance};
use laplaza::two_theory::{axiom_instances, cmc_sweep, two_equal};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::Failure;
use crate::oracle::{all_maps, euler_glue, linear_shapes, multisets};

type Result<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Quick,
    Full,
}

/// Instance sizes for one scale.
#[derive(Clone, Copy, Debug)]
pub struct Sizes {
    pub law_samples: usize,
    pub count_max: usize,
    pub injective_max: usize,
    pub maclane: (usize, usize),
    pub laplaza: (usize, usize),
    pub cmc: (usize, usize, usize, usize),
    pub worldsheets: usize,
}

impl Scale {
    pub fn sizes(self) -> Sizes {
        match self {
            Scale::Full => Sizes {
                law_samples: 1000,
                count_max: 6,
                injective_max: 5,
                maclane: (5, 8),
                laplaza: (3, 8),
                cmc: (3, 6, 2, 4),
                worldsheets: 500,
            },
            Scale::Quick => Sizes {
                law_samples: 200,
                count_max: 4,
                injective_max: 3,
                maclane: (3, 6),
                laplaza: (2, 6),
                cmc: (2, 5, 2, 4),
                worldsheets: 100,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

pub const NAMES: [&str; 8] = [
    "theory laws",
    "free-theory counting",
    "operadic commutative-monoid coherence",
    "forced swap discrepancy and strictification",
    "semiring coherence",
    "cancellation 2-operad normal form",
    "worldsheet model",
    "determinism",
];

/// Wall-clock ceilings at full scale.
fn budget(id: usize) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(10)),
        3 | 5 => Some(Duration::from_secs(300)),
        6 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

pub fn run_all(
    scale: Scale,
    seed: u64,
    jobs: usize,
    log: &mut String,
) -> Result<Vec<CriterionResult>> {
    (1..=8)
        .map(|id| run_one(id, scale, seed, jobs, log))
        .collect()
}

pub fn run_one(
    id: usize,
    scale: Scale,
    seed: u64,
    jobs: usize,
    log: &mut String,
) -> Result<CriterionResult> {
    let sizes = scale.sizes();
    let start = Instant::now();
    let (mut passed, detail) = match id {
        1 => theory_laws(sizes, seed)?,
        2 => counting(sizes)?,
        3 => maclane(sizes)?,
        4 => gould_and_strictify()?,
        5 => semiring(sizes)?,
        6 => cmc(sizes, jobs)?,
        7 => worldsheets(sizes, seed)?,
        8 => determinism(seed)?,
        _ => return Err(Failure(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    if scale == Scale::Full {
        if let Some(limit) = budget(id) {
            if elapsed > limit {
                passed = false;
                let _ = writeln!(log, "criterion {id} exceeded {}s", limit.as_secs());
            }
        }
    }
    let _ = writeln!(log, "criterion {id}: {:.2}s", elapsed.as_secs_f64());
    Ok(CriterionResult {
        id,
        name: NAMES[id - 1],
        passed,
        detail,
    })
}

fn theory_laws(sizes: Sizes, seed: u64) -> Result<(bool, Value)> {
    let cmon = theory_law_sweep(&Signature::cmon(), sizes.law_samples, seed)?;
    let csr = theory_law_sweep(&Signature::csr(), sizes.law_samples, seed.wrapping_add(1))?;
    Ok((
        cmon.passed() && csr.passed(),
        json!({ "cmon": cmon, "csr": csr }),
    ))
}

fn counting(sizes: Sizes) -> Result<(bool, Value)> {
    let sig = Signature::cmon();
    let mut mismatches = Vec::new();
    let mut cells = 0;
    for m in 0..=sizes.count_max {
        let shapes = linear_shapes(&sig, m, if m <= 3 { 1 } else { 0 });
        for n in 1..=sizes.count_max {
            let mut realized: HashSet<MonoidNF> = HashSet::new();
            for u in &shapes {
                for f in all_maps(m, n) {
                    realized.insert(project_monoid(&sig, &act_f(u, &f)?)?);
                }
            }
            let expected: HashSet<MonoidNF> = multisets(n, m)
                .iter()
                .map(|s| MonoidNF::from_vars(n, s))
                .collect::<laplaza::Result<_>>()?;
            cells += 1;
            if realized != expected {
                mismatches.push(format!(
                    "n={n} m={m}: {} vs {}",
                    realized.len(),
                    expected.len()
                ));
            }
        }
    }
    let mut collisions = Vec::new();
    let mut classes = 0;
    for n in 0..=sizes.injective_max {
        let mut image: HashMap<Term, OperadElem> = HashMap::new();
        for m in 0..=3 {
            for u in enumerate_terms(&sig, m, 2 * m + 1)
                .iter()
                .filter(|u| is_linear(u))
            {
                for f in all_maps(m, n) {
                    let e = OperadElem::new(f, u.clone())?.canonical();
                    let t = e.to_term();
                    match image.get(&t) {
                        Some(prev) if prev != &e => collisions.push(format!("{t:?}")),
                        Some(_) => {}
                        None => {
                            classes += 1;
                            image.insert(t, e);
                        }
                    }
                }
            }
        }
    }
    Ok((
        mismatches.is_empty() && collisions.is_empty(),
        json!({
            "cells": cells,
            "count_mismatches": mismatches,
            "operad_classes": classes,
            "injectivity_collisions": collisions,
        }),
    ))
}

fn maclane(sizes: Sizes) -> Result<(bool, Value)> {
    let (arity, size) = sizes.maclane;
    let r = maclane_sweep(arity, size, Caps::default())?;
    Ok((r.passed(), serde_json::to_value(r)?))
}

fn gould_and_strictify() -> Result<(bool, Value)> {
    let g = gould_certificate()?;
    let mut ok = g.forced && g.model_is_transposition && g.discrepancy;
    let mut cats = Vec::new();
    for (name, json) in fixtures::coherent() {
        let cat = FinSymMonCat::from_json(&json)?;
        let s = strictify(&cat, None, 3)?;
        let strict = verify_strict(&s.algebra);
        let equiv = verify_equivalence(&cat, &s.algebra, &s.functor);
        ok &= strict.ok && equiv.ok;
        cats.push(json!({ "fixture": name, "verify_strict": strict, "verify_equivalence": equiv }));
    }
    Ok((ok, json!({ "gould": g, "strictify": cats })))
}

fn semiring(sizes: Sizes) -> Result<(bool, Value)> {
    let (arity, size) = sizes.laplaza;
    let r = laplaza_sweep(arity, size, Caps::default())?;
    let sig = Signature::csr();
    let spec = LaplazaSpec::LaplazaSemiring;
    let square = Term::parse(&sig, "(times x1 x1)", Some(1))?;
    let swap = CoherenceStep {
        position: vec![],
        before: parse_node(&sig, "(times x1 x2)")?,
        after: parse_node(&sig, "(times x2 x1)")?,
        pieces: vec![Node::Var(1), Node::Var(1)],
    };
    let p = CoherencePath::new(&sig, spec, square.clone(), vec![swap])?;
    let q = CoherencePath::identity(square.clone());
    let differ = monomial_model(&sig, &p)? != monomial_model(&sig, &q)?;
    let verdict = decide_equal(&sig, spec, &p, &q, Caps::default())?.verdict;
    let outside = !laplaza_member(spec, &sig, &square)?;
    Ok((
        r.passed() && differ && outside && verdict == Verdict::ModelDistinct,
        json!({
            "sweep": r,
            "square_outside_laplaza": outside,
            "square_paths_differ": differ,
            "square_verdict": verdict,
        }),
    ))
}

fn cmc(sizes: Sizes, jobs: usize) -> Result<(bool, Value)> {
    let (slots, nodes, arity, depth) = sizes.cmc;
    let r = cmc_sweep(slots, nodes, arity, depth, jobs)?;
    let mut axioms = Vec::new();
    let mut ok = r.passed();
    for (name, s, t) in axiom_instances()? {
        let holds = two_equal(&s, &t)?;
        ok &= holds;
        axioms.push(json!({ "axiom": name, "holds": holds }));
    }
    Ok((ok, json!({ "sweep": r, "axioms": axioms })))
}

fn worldsheets(sizes: Sizes, seed: u64) -> Result<(bool, Value)> {
    let r = check_cmc_axioms(sizes.worldsheets, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut genus_ok = 0;
    let mut order_ok = 0;
    let mut failures = Vec::new();
    for _ in 0..sizes.worldsheets {
        let x = random_glue_instance(&mut rng);
        let mut shared: Vec<String> = x.inbound().intersection(x.outbound()).cloned().collect();
        let take = rng.gen_range(0..=shared.len());
        let labels: Vec<String> = shared.choose_multiple(&mut rng, take).cloned().collect();
        let y = x.self_glue(&labels)?;
        let mut got: Vec<_> = y
            .components()
            .iter()
            .map(|c| (c.inbound.clone(), c.outbound.clone(), c.genus))
            .collect();
        got.sort();
        if Some(got) == euler_glue(&x, &labels) {
            genus_ok += 1;
        } else if failures.len() < 5 {
            failures.push(serde_json::to_string(&x)?);
        }
        let reference = x.self_glue(&shared)?;
        shared.shuffle(&mut rng);
        let mut stepwise = x.clone();
        for l in &shared {
            stepwise = stepwise.self_glue(std::slice::from_ref(l))?;
        }
        if x.self_glue(&shared)? == reference && stepwise == reference {
            order_ok += 1;
        }
    }
    let n = sizes.worldsheets;
    Ok((
        r.passed() && genus_ok == n && order_ok == n,
        json!({
            "axioms": r,
            "genus_checked": n,
            "genus_matches": genus_ok,
            "glue_order_independent": order_ok,
            "genus_failures": failures,
        }),
    ))
}

/// Invocations replayed by the determinism check.
pub fn determinism_argv() -> Vec<Vec<String>> {
    let cases: [&[&str]; 9] = [
        &["normalize", "--sig", "csr", "(times (plus x1 x2) x1)"],
        &[
            "laplaza-check",
            "--sig",
            "csr",
            "--laplaza",
            "laplaza-semiring",
            "(times x1 x1)",
        ],
        &[
            "coherence-exists",
            "--sig",
            "cmon",
            "--laplaza",
            "operadic",
            "(plus x1 (plus x2 x3))",
            "(plus (plus x3 x1) x2)",
        ],
        &[
            "coherence-exists",
            "--sig",
            "csr",
            "--laplaza",
            "laplaza-semiring",
            "--size-cap",
            "7",
            "(times x1 (plus x2 x3))",
            "(plus (times x1 x2) (times x1 x3))",
        ],
        &["strictify", "--fixture", "z2-automorphisms"],
        &[
            "two-normalize",
            "(check (plus (slot 1 [x1 x2] [x2]) (slot 2 [x1] [x1])) [x1])",
        ],
        &[
            "two-equal",
            "--oracle-depth",
            "3",
            "(plus (slot 1 [x1] [x2]) (slot 2 [x2] [x1]))",
            "(plus (slot 2 [x2] [x1]) (slot 1 [x1] [x2]))",
        ],
        &["gould"],
        &["schema"],
    ];
    cases
        .iter()
        .map(|c| {
            std::iter::once("laplaza")
                .chain(c.iter().copied())
                .map(String::from)
                .collect()
        })
        .collect()
}

fn determinism(seed: u64) -> Result<(bool, Value)> {
    let mut runs = Vec::new();
    let mut ok = true;
    for argv in determinism_argv() {
        let mut argv = argv;
        argv.extend(["--seed".to_string(), seed.to_string()]);
        let first = crate::run(&argv);
        let second = crate::run(&argv);
        let same = first == second;
        ok &= same;
        runs.push(json!({ "argv": argv[1..].join(" "), "exit": first.0, "identical": same }));
    }
    Ok((ok, json!({ "runs": runs })))
}
