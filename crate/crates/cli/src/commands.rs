use std::fs;
use std::path::{Path, PathBuf};

use laplaza::coherence::{
    decide_equal, find_path, gould_certificate, monomial_model, perm_model, replay_derivation,
    Caps, CoherencePath, CoherenceStep, PathJson, PathSearch, PatternCache, StepJson, Verdict,
};
use laplaza::nf::{laplaza_member, LaplazaSpec, Projection};
use laplaza::strictify::{
    fixtures, shuffle_report, strictify, CategoryJson, FinSymMonCat, StrictReport,
};
use laplaza::term::{canonicalize, Signature, Term, Theory};
use laplaza::two_theory::cobordism::Cobordism;
use laplaza::two_theory::{axiom_rewrite_oracle, two_equal, TwoTerm};
use laplaza::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Cli, Command, SearchArgs, TheoryArgs};
use crate::{schema, selftest};

/// Exit status and JSON body of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: Value,
}

impl Outcome {
    fn new(code: i32, body: Value) -> Self {
        Outcome { code, body }
    }
}

#[derive(Debug)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(format!("malformed JSON: {e}"))
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Resolved options shared by the term and coherence commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sig: Signature,
    pub spec: Option<LaplazaSpec>,
    pub caps: Caps,
    pub seed: u64,
}

impl RunConfig {
    fn new(
        theory: &TheoryArgs,
        laplaza: Option<&str>,
        search: Option<&SearchArgs>,
        seed: u64,
    ) -> Result<Self> {
        let sig = load_signature(&theory.sig)?;
        let spec = laplaza.map(str::parse::<LaplazaSpec>).transpose()?;
        if let Some(spec) = spec {
            spec.check_compatible(&sig)?;
        }
        let caps = match search {
            Some(s) => Caps {
                size: s.size_cap,
                depth: s.depth,
                states: s.states,
            },
            None => Caps::default(),
        };
        if caps.size == 0 || caps.depth == 0 || caps.states == 0 {
            return Err(Failure("caps must be at least 1".into()));
        }
        Ok(RunConfig {
            sig,
            spec,
            caps,
            seed,
        })
    }

    fn spec(&self) -> LaplazaSpec {
        self.spec.expect("commands needing a spec parse one")
    }
}

pub fn load_signature(name: &str) -> Result<Signature> {
    if let Some(sig) = Signature::builtin(name) {
        return Ok(sig);
    }
    let path = Path::new(name);
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("signature `{name}`: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name);
    Ok(Signature::from_config(stem, &text)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_steps(sig: &Signature, path: Option<&PathBuf>) -> Result<Vec<CoherenceStep>> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let steps: Vec<StepJson> = serde_json::from_str(&read(path)?)?;
    Ok(steps
        .iter()
        .map(|s| CoherenceStep::from_json(sig, s))
        .collect::<laplaza::Result<_>>()?)
}

fn normal_form(sig: &Signature, w: &Term) -> String {
    match Projection::of(sig, w) {
        Projection::Free(t) => canonicalize(sig, &t).display(sig).to_string(),
        other => other.to_string(),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::ForcedEqual => 0,
        Verdict::ModelDistinct => 1,
        Verdict::Unknown => 2,
    }
}

/// Replayable proof that two paths are equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub signature: String,
    pub laplaza: LaplazaSpec,
    pub left: PathJson,
    pub right: PathJson,
    pub derivation: Vec<laplaza::coherence::Rewrite>,
}

pub fn dispatch(cli: &Cli, log: &mut String) -> Result<Outcome> {
    match &cli.command {
        Command::Normalize { theory, term } => {
            let cfg = RunConfig::new(theory, None, None, cli.seed)?;
            let w = Term::parse(&cfg.sig, term, theory.arity)?;
            let normal_form = normal_form(&cfg.sig, &w);
            Ok(Outcome::new(
                0,
                json!({
                    "signature": cfg.sig.name(),
                    "arity": w.arity(),
                    "term": w.display(&cfg.sig).to_string(),
                    "normal_form": normal_form,
                }),
            ))
        }
        Command::LaplazaCheck {
            theory,
            laplaza,
            term,
        } => {
            let cfg = RunConfig::new(theory, Some(laplaza), None, cli.seed)?;
            let w = Term::parse(&cfg.sig, term, theory.arity)?;
            let member = laplaza_member(cfg.spec(), &cfg.sig, &w)?;
            Ok(Outcome::new(
                if member { 0 } else { 1 },
                json!({
                    "signature": cfg.sig.name(),
                    "laplaza": cfg.spec(),
                    "term": w.display(&cfg.sig).to_string(),
                    "normal_form": normal_form(&cfg.sig, &w),
                    "member": member,
                }),
            ))
        }
        Command::CoherenceExists {
            theory,
            search,
            source,
            target,
        } => {
            let cfg = RunConfig::new(theory, Some(&search.laplaza), Some(search), cli.seed)?;
            let a = Term::parse(&cfg.sig, source, theory.arity)?;
            let b = Term::parse(&cfg.sig, target, theory.arity)?;
            let n = a.arity().max(b.arity());
            let (a, b) = (a.widen(n)?, b.widen(n)?);
            let cache = PatternCache::new(cfg.sig.clone());
            let found = find_path(&cache, cfg.spec(), &a, &b, cfg.caps)?;
            let (code, verdict, explored, path) = match &found {
                PathSearch::Found(p) => (0, "found", None, Some(p.to_json(&cfg.sig))),
                PathSearch::Absent => (1, "absent", None, None),
                PathSearch::Exhausted { explored } => (2, "exhausted", Some(*explored), None),
                PathSearch::CapExhausted { explored } => {
                    (2, "cap-exhausted", Some(*explored), None)
                }
            };
            Ok(Outcome::new(
                code,
                json!({
                    "signature": cfg.sig.name(),
                    "laplaza": cfg.spec(),
                    "source": a.display(&cfg.sig).to_string(),
                    "target": b.display(&cfg.sig).to_string(),
                    "verdict": verdict,
                    "explored": explored,
                    "path": path,
                }),
            ))
        }
        Command::CoherenceEqual {
            sig,
            arity,
            laplaza,
            size_cap,
            depth,
            states,
            source,
            left,
            right,
            replay,
        } => {
            if let Some(file) = replay {
                return replay_certificate(file);
            }
            let theory = TheoryArgs {
                sig: sig.clone().expect("clap requires a signature"),
                arity: *arity,
            };
            let search = SearchArgs {
                laplaza: laplaza.clone().expect("clap requires a laplaza collection"),
                size_cap: *size_cap,
                depth: *depth,
                states: *states,
            };
            let cfg = RunConfig::new(&theory, Some(&search.laplaza), Some(&search), cli.seed)?;
            let source = source.as_deref().expect("clap requires a source");
            let a = Term::parse(&cfg.sig, source, *arity)?;
            let p = CoherencePath::new(
                &cfg.sig,
                cfg.spec(),
                a.clone(),
                read_steps(&cfg.sig, left.as_ref())?,
            )?;
            let q = CoherencePath::new(
                &cfg.sig,
                cfg.spec(),
                a,
                read_steps(&cfg.sig, right.as_ref())?,
            )?;
            let d = decide_equal(&cfg.sig, cfg.spec(), &p, &q, cfg.caps)?;
            let certificate = d.derivation.as_ref().map(|derivation| Certificate {
                signature: cfg.sig.name().into(),
                laplaza: cfg.spec(),
                left: p.to_json(&cfg.sig),
                right: q.to_json(&cfg.sig),
                derivation: derivation.clone(),
            });
            Ok(Outcome::new(
                verdict_code(d.verdict),
                json!({
                    "verdict": d.verdict,
                    "certificate": certificate,
                    "model_witness": d.witness,
                    "explored": d.explored,
                }),
            ))
        }
        Command::ModelEval {
            theory,
            laplaza,
            path,
            source,
        } => {
            let cfg = RunConfig::new(theory, Some(laplaza), None, cli.seed)?;
            let a = Term::parse(&cfg.sig, source, theory.arity)?;
            let p = CoherencePath::new(&cfg.sig, cfg.spec(), a, read_steps(&cfg.sig, Some(path))?)?;
            let (model, value, identity) = match cfg.sig.theory() {
                Some(Theory::Cmon) => {
                    let v = perm_model(&cfg.sig, &p)?;
                    (
                        "strand-permutation",
                        json!(v.table().table()),
                        v.is_identity(),
                    )
                }
                Some(Theory::Csr) => {
                    let v = monomial_model(&cfg.sig, &p)?;
                    let identity = v.is_identity();
                    ("monomial-bijection", serde_json::to_value(v)?, identity)
                }
                None => {
                    return Err(Failure(format!(
                        "signature `{}` has no built-in model",
                        cfg.sig.name()
                    )))
                }
            };
            Ok(Outcome::new(
                0,
                json!({
                    "signature": cfg.sig.name(),
                    "path": p.to_json(&cfg.sig),
                    "model": model,
                    "value": value,
                    "is_identity": identity,
                }),
            ))
        }
        Command::Strictify {
            file,
            fixture,
            max_len,
            order,
        } => {
            let (name, json) = match (file, fixture) {
                (Some(f), _) => (
                    f.display().to_string(),
                    serde_json::from_str::<CategoryJson>(&read(f)?)?,
                ),
                (None, Some(n)) => {
                    let found = fixtures::all()
                        .into_iter()
                        .find(|(k, _)| k == n)
                        .ok_or_else(|| Failure(format!("unknown fixture `{n}`")))?;
                    (n.clone(), found.1)
                }
                (None, None) => unreachable!("clap requires a file or a fixture"),
            };
            run_strictify(&name, &json, *max_len, order.as_deref())
        }
        Command::TwoNormalize { arity, term } => {
            let t = TwoTerm::parse(term, *arity)?;
            let ty = t.typecheck()?;
            Ok(Outcome::new(
                0,
                json!({
                    "term": t.to_string(),
                    "arity": t.arity(),
                    "source": ty.source.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "target": ty.target.to_string(),
                    "normal_form": t.normalize()?.to_json(),
                }),
            ))
        }
        Command::TwoEqual {
            arity,
            oracle_depth,
            left,
            right,
        } => {
            let s = TwoTerm::parse(left, *arity)?;
            let t = TwoTerm::parse(right, Some(arity.unwrap_or(s.arity())))?;
            let equal = two_equal(&s, &t)?;
            let oracle = oracle_depth.map(|d| axiom_rewrite_oracle(&s, &t, d));
            Ok(Outcome::new(
                if equal { 0 } else { 1 },
                json!({
                    "left": s.to_string(),
                    "right": t.to_string(),
                    "equal": equal,
                    "left_normal_form": s.normalize()?.to_json(),
                    "right_normal_form": t.normalize()?.to_json(),
                    "oracle": oracle,
                }),
            ))
        }
        Command::Glue { file, labels } => {
            let x: Cobordism = serde_json::from_str(&read(file)?)?;
            let y = x.self_glue(labels)?;
            Ok(Outcome::new(
                0,
                json!({
                    "labels": labels,
                    "result": y,
                    "total_genus": y.total_genus(),
                    "components": y.components().len(),
                }),
            ))
        }
        Command::Gould => {
            let r = gould_certificate()?;
            let ok = r.forced && r.model_is_transposition && r.discrepancy;
            Ok(Outcome::new(
                if ok { 0 } else { 1 },
                serde_json::to_value(r)?,
            ))
        }
        Command::Selftest { quick } => {
            let scale = if *quick {
                selftest::Scale::Quick
            } else {
                selftest::Scale::Full
            };
            let results = selftest::run_all(scale, cli.seed, cli.jobs.max(1), log)?;
            let passed = results.iter().all(|r| r.passed);
            Ok(Outcome::new(
                if passed { 0 } else { 1 },
                json!({
                    "scale": scale,
                    "seed": cli.seed,
                    "criteria": results,
                    "passed": passed,
                }),
            ))
        }
        Command::Schema { command } => match command {
            Some(c) => schema::of(c)
                .map(|s| Outcome::new(0, s))
                .ok_or_else(|| Failure(format!("no subcommand `{c}`"))),
            None => Ok(Outcome::new(0, schema::all())),
        },
    }
}

fn run_strictify(
    name: &str,
    json: &CategoryJson,
    max_len: usize,
    order: Option<&[usize]>,
) -> Result<Outcome> {
    let rejected = |reason: String| {
        Outcome::new(
            1,
            json!({
                "category": name,
                "coherent": false,
                "reason": reason,
                "shuffle": Value::Null,
                "report": Value::Null,
            }),
        )
    };
    let cat = match FinSymMonCat::from_json(json) {
        Ok(c) => c,
        Err(Error::Incoherent(reason)) => return Ok(rejected(reason)),
        Err(e) => return Err(e.into()),
    };
    let shuffle = shuffle_report(&cat, max_len)?;
    let s = match strictify(&cat, order, max_len) {
        Ok(s) => s,
        Err(Error::Incoherent(reason)) => return Ok(rejected(reason)),
        Err(e) => return Err(e.into()),
    };
    let report = StrictReport::new(&cat, &s);
    let ok = report.verify_strict.ok && report.verify_equivalence.ok;
    Ok(Outcome::new(
        if ok { 0 } else { 1 },
        json!({
            "category": name,
            "coherent": true,
            "reason": Value::Null,
            "shuffle": shuffle,
            "report": report,
        }),
    ))
}

fn replay_certificate(file: &Path) -> Result<Outcome> {
    let mut value: Value = serde_json::from_str(&read(file)?)?;
    if let Some(inner) = value.get_mut("certificate") {
        value = inner.take();
    }
    if value.is_null() {
        return Err(Failure(format!(
            "{}: no certificate to replay",
            file.display()
        )));
    }
    let cert: Certificate = serde_json::from_value(value)?;
    let sig = load_signature(&cert.signature)?;
    let p = cert.left.to_path(&sig, cert.laplaza)?;
    let q = cert.right.to_path(&sig, cert.laplaza)?;
    let (ok, reason) = match replay_derivation(&sig, cert.laplaza, &p, &q, &cert.derivation) {
        Ok(true) => (true, None),
        Ok(false) => (
            false,
            Some("the derivation leaves a non-empty loop".to_string()),
        ),
        Err(e) => (false, Some(e.to_string())),
    };
    Ok(Outcome::new(
        if ok { 0 } else { 1 },
        json!({
            "verdict": if ok { "replayed" } else { "rejected" },
            "reason": reason,
            "certificate": cert,
        }),
    ))
}
