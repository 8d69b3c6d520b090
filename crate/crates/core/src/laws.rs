//! Randomized checks of the theory axioms on free words and of the
//! projections onto normal forms being maps of theories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finmap::{block_map, juxtapose, FinMap};
use crate::gen::random_term;
use crate::nf::{project_monoid, project_semiring, MonoidNF, PolyNF};
use crate::term::{act_f, canonicalize, gamma, Signature, Term, Theory};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub signature: String,
    pub samples: usize,
    pub associative: usize,
    pub unital: usize,
    pub block_equivariant: usize,
    pub juxtapose_equivariant: usize,
    pub projection_homomorphic: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        let n = self.samples;
        n > 0
            && self.associative == n
            && self.unital == n
            && self.block_equivariant == n
            && self.juxtapose_equivariant == n
            && self.projection_homomorphic == n
            && self.failures.is_empty()
    }
}

pub fn random_map(rng: &mut impl Rng, dom: usize, cod: usize) -> FinMap {
    let cod = if dom > 0 { cod.max(1) } else { cod };
    FinMap::new(cod, (0..dom).map(|_| rng.gen_range(1..=cod)).collect()).expect("entries in range")
}

fn word(sig: &Signature, rng: &mut impl Rng, arity: usize) -> Term {
    random_term(sig, arity, 7, rng)
}

fn same(sig: &Signature, a: &Term, b: &Term) -> bool {
    canonicalize(sig, a) == canonicalize(sig, b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Value {
    Monoid(MonoidNF),
    Poly(PolyNF),
}

fn project(sig: &Signature, w: &Term) -> Result<Value> {
    Ok(match sig.theory() {
        Some(Theory::Csr) => Value::Poly(project_semiring(sig, w)?),
        _ => Value::Monoid(project_monoid(sig, w)?),
    })
}

fn project_gamma(w: &Value, args: &[Value]) -> Result<Value> {
    Ok(match w {
        Value::Monoid(m) => Value::Monoid(
            m.gamma(
                &args
                    .iter()
                    .map(|a| match a {
                        Value::Monoid(x) => x.clone(),
                        Value::Poly(_) => unreachable!("one theory per sweep"),
                    })
                    .collect::<Vec<_>>(),
            )?,
        ),
        Value::Poly(p) => Value::Poly(
            p.gamma(
                &args
                    .iter()
                    .map(|a| match a {
                        Value::Poly(x) => x.clone(),
                        Value::Monoid(_) => unreachable!("one theory per sweep"),
                    })
                    .collect::<Vec<_>>(),
            )?,
        ),
    })
}

fn project_push(w: &Value, f: &FinMap) -> Result<Value> {
    Ok(match w {
        Value::Monoid(m) => Value::Monoid(m.pushforward(f)?),
        Value::Poly(p) => Value::Poly(p.pushforward(f)?),
    })
}

/// Draws `samples` random instances of each axiom over `sig` (which must be
/// `cmon` or `csr`) and compares both sides structurally.
pub fn theory_law_sweep(sig: &Signature, samples: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = LawReport {
        signature: sig.name().into(),
        samples,
        ..LawReport::default()
    };
    let fail = |r: &mut LawReport, what: &str, w: &Term| {
        if r.failures.len() < 10 {
            r.failures
                .push(format!("{what} fails at {}", w.display(sig)));
        }
    };
    for _ in 0..samples {
        let k = rng.gen_range(0..=3);
        let w = word(sig, &mut rng, k);
        let firsts: Vec<Term> = (0..k)
            .map(|_| {
                let n = rng.gen_range(0..=3);
                word(sig, &mut rng, n)
            })
            .collect();
        let seconds: Vec<Vec<Term>> = firsts
            .iter()
            .map(|u| {
                (0..u.arity())
                    .map(|_| {
                        let n = rng.gen_range(0..=2);
                        word(sig, &mut rng, n)
                    })
                    .collect()
            })
            .collect();

        let inner: Vec<Term> = firsts
            .iter()
            .zip(&seconds)
            .map(|(u, vs)| gamma(u, vs))
            .collect::<Result<_>>()?;
        let lhs = gamma(&w, &inner)?;
        let flat: Vec<Term> = seconds.iter().flatten().cloned().collect();
        let rhs = gamma(&gamma(&w, &firsts)?, &flat)?;
        if same(sig, &lhs, &rhs) {
            r.associative += 1;
        } else {
            fail(&mut r, "associativity", &w);
        }

        let units = vec![Term::unit(); k];
        if same(sig, &gamma(&w, &units)?, &w)
            && same(sig, &gamma(&Term::unit(), std::slice::from_ref(&w))?, &w)
        {
            r.unital += 1;
        } else {
            fail(&mut r, "unit law", &w);
        }

        let l = rng.gen_range(usize::from(k > 0)..=3);
        let f = random_map(&mut rng, k, l);
        let args: Vec<Term> = (0..l)
            .map(|_| {
                let n = rng.gen_range(0..=3);
                word(sig, &mut rng, n)
            })
            .collect();
        let lhs = gamma(&act_f(&w, &f)?, &args)?;
        let picked: Vec<Term> = (1..=k).map(|i| args[f.apply(i) - 1].clone()).collect();
        let fbar = block_map(&f, &args.iter().map(Term::arity).collect::<Vec<_>>())?;
        let rhs = act_f(&gamma(&w, &picked)?, &fbar)?;
        if same(sig, &lhs, &rhs) {
            r.block_equivariant += 1;
        } else {
            fail(&mut r, "block equivariance", &w);
        }

        let gs: Vec<FinMap> = firsts
            .iter()
            .map(|u| {
                let n2 = rng.gen_range(usize::from(u.arity() > 0)..=3);
                random_map(&mut rng, u.arity(), n2)
            })
            .collect();
        let moved: Vec<Term> = firsts
            .iter()
            .zip(&gs)
            .map(|(u, g)| act_f(u, g))
            .collect::<Result<_>>()?;
        let lhs = gamma(&w, &moved)?;
        let rhs = act_f(&gamma(&w, &firsts)?, &juxtapose(&gs))?;
        if same(sig, &lhs, &rhs) {
            r.juxtapose_equivariant += 1;
        } else {
            fail(&mut r, "juxtapose equivariance", &w);
        }

        let pw = project(sig, &w)?;
        let pargs: Vec<Value> = firsts
            .iter()
            .map(|u| project(sig, u))
            .collect::<Result<_>>()?;
        let composed = project(sig, &gamma(&w, &firsts)?)? == project_gamma(&pw, &pargs)?;
        let pushed = project(sig, &act_f(&w, &f)?)? == project_push(&pw, &f)?;
        if composed && pushed {
            r.projection_homomorphic += 1;
        } else {
            fail(&mut r, "projection homomorphism", &w);
        }
    }
    Ok(r)
}
