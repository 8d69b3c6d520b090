use std::time::Instant;

use laplaza::finmap::{block_map, compose, juxtapose, FinMap};
use laplaza::gen::random_term;
use laplaza::laws::{random_map, theory_law_sweep};
use laplaza::nf::{project_monoid, project_semiring, PolyNF};
use laplaza::term::{act_f, eval, gamma, FiniteAlgebra, Signature, Term};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CARRIER: usize = 3;

fn scrambled_algebra(sig: &Signature, seed: u64) -> FiniteAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tables = sig
        .ops()
        .map(|op| {
            let r = sig.arity(op) as u32;
            (0..CARRIER.pow(r))
                .map(|_| rng.gen_range(0..CARRIER))
                .collect()
        })
        .collect();
    FiniteAlgebra::new(sig, CARRIER, tables).unwrap()
}

fn point(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..CARRIER)).collect()
}

fn blocks(x: &[usize], sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut at = 0;
    for &s in sizes {
        out.push(x[at..at + s].to_vec());
        at += s;
    }
    out
}

fn pull(x: &[usize], f: &FinMap) -> Vec<usize> {
    f.table().iter().map(|&j| x[j - 1]).collect()
}

fn word(sig: &Signature, rng: &mut impl Rng, max_arity: usize) -> Term {
    let n = rng.gen_range(0..=max_arity);
    random_term(sig, n, 7, rng)
}

#[test]
fn law_sweep_covers_a_thousand_words_per_theory_quickly() {
    let start = Instant::now();
    for sig in [Signature::cmon(), Signature::csr()] {
        let r = theory_law_sweep(&sig, 1000, 2024).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.samples, 1000);
    }
    assert!(start.elapsed().as_secs() < 10);
}

#[test]
fn composition_is_evaluation_in_endomorphisms() {
    for sig in [Signature::cmon(), Signature::csr()] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..300 {
            let model = scrambled_algebra(&sig, trial);
            let k = rng.gen_range(0..=3);
            let w = random_term(&sig, k, 7, &mut rng);
            let args: Vec<Term> = (0..k).map(|_| word(&sig, &mut rng, 2)).collect();
            let sizes: Vec<usize> = args.iter().map(Term::arity).collect();
            let composite = gamma(&w, &args).unwrap();
            for _ in 0..10 {
                let x = point(&mut rng, sizes.iter().sum());
                let inner: Vec<usize> = blocks(&x, &sizes)
                    .iter()
                    .zip(&args)
                    .map(|(xi, a)| eval(a, &model, xi).unwrap())
                    .collect();
                assert_eq!(
                    eval(&composite, &model, &x).unwrap(),
                    eval(&w, &model, &inner).unwrap()
                );
            }
        }
    }
}

#[test]
fn relabeling_is_precomposition_in_endomorphisms() {
    let sig = Signature::csr();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..300 {
        let model = scrambled_algebra(&sig, trial);
        let k = rng.gen_range(0..=4);
        let w = random_term(&sig, k, 8, &mut rng);
        let l = rng.gen_range(usize::from(k > 0)..=4);
        let f = random_map(&mut rng, k, l);
        let moved = act_f(&w, &f).unwrap();
        for _ in 0..10 {
            let x = point(&mut rng, l);
            assert_eq!(
                eval(&moved, &model, &x).unwrap(),
                eval(&w, &model, &pull(&x, &f)).unwrap()
            );
        }
    }
}

#[test]
fn block_map_rearranges_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let k = rng.gen_range(0..=4);
        let l = rng.gen_range(usize::from(k > 0)..=4);
        let f = random_map(&mut rng, k, l);
        let sizes: Vec<usize> = (0..l).map(|_| rng.gen_range(0..=3)).collect();
        let fbar = block_map(&f, &sizes).unwrap();
        let x: Vec<usize> = (100..100 + sizes.iter().sum::<usize>()).collect();
        let bs = blocks(&x, &sizes);
        let expected: Vec<usize> = f.table().iter().flat_map(|&i| bs[i - 1].clone()).collect();
        assert_eq!(pull(&x, &fbar), expected);
        assert_eq!(fbar.cod_size(), x.len());
    }
}

#[test]
fn juxtaposition_acts_blockwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let parts = rng.gen_range(0..=4);
        let gs: Vec<FinMap> = (0..parts)
            .map(|_| {
                let d = rng.gen_range(0..=3);
                let c = rng.gen_range(usize::from(d > 0)..=3);
                random_map(&mut rng, d, c)
            })
            .collect();
        let g = juxtapose(&gs);
        let cods: Vec<usize> = gs.iter().map(FinMap::cod_size).collect();
        let x: Vec<usize> = (0..cods.iter().sum::<usize>()).map(|i| 7 * i + 1).collect();
        let expected: Vec<usize> = blocks(&x, &cods)
            .iter()
            .zip(&gs)
            .flat_map(|(xi, gi)| pull(xi, gi))
            .collect();
        assert_eq!(pull(&x, &g), expected);
    }
}

#[test]
fn equivariance_axioms_hold_in_endomorphisms() {
    let sig = Signature::cmon();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..300 {
        let model = scrambled_algebra(&sig, 1000 + trial);
        let k = rng.gen_range(0..=3);
        let w = random_term(&sig, k, 7, &mut rng);
        let l = rng.gen_range(usize::from(k > 0)..=3);
        let f = random_map(&mut rng, k, l);
        let args: Vec<Term> = (0..l).map(|_| word(&sig, &mut rng, 2)).collect();
        let picked: Vec<Term> = f.table().iter().map(|&i| args[i - 1].clone()).collect();
        let fbar = block_map(&f, &args.iter().map(Term::arity).collect::<Vec<_>>()).unwrap();
        let lhs = gamma(&act_f(&w, &f).unwrap(), &args).unwrap();
        let rhs = act_f(&gamma(&w, &picked).unwrap(), &fbar).unwrap();
        assert_eq!(lhs, rhs);

        let firsts: Vec<Term> = (0..k).map(|_| word(&sig, &mut rng, 2)).collect();
        let gs: Vec<FinMap> = firsts
            .iter()
            .map(|u| {
                let c = rng.gen_range(usize::from(u.arity() > 0)..=2);
                random_map(&mut rng, u.arity(), c)
            })
            .collect();
        let moved: Vec<Term> = firsts
            .iter()
            .zip(&gs)
            .map(|(u, g)| act_f(u, g).unwrap())
            .collect();
        let lhs = gamma(&w, &moved).unwrap();
        let rhs = act_f(&gamma(&w, &firsts).unwrap(), &juxtapose(&gs)).unwrap();
        for _ in 0..10 {
            let x = point(&mut rng, lhs.arity());
            assert_eq!(
                eval(&lhs, &model, &x).unwrap(),
                eval(&rhs, &model, &x).unwrap()
            );
        }
    }
}

fn leaf_counts(w: &Term) -> Vec<u32> {
    let mut c = vec![0; w.arity()];
    for v in w.leaves() {
        c[v - 1] += 1;
    }
    c
}

fn poly_value(p: &PolyNF, x: &[u64], modulus: u64) -> u64 {
    p.monomials()
        .iter()
        .map(|m| m.iter().fold(1, |acc, &v| acc * x[v - 1] % modulus))
        .fold(0, |acc, t| (acc + t) % modulus)
}

fn ring_value(sig: &Signature, w: &Term, x: &[u64], modulus: u64) -> u64 {
    let model = FiniteAlgebra::from_fn(sig, modulus as usize, |op, a| match sig.symbol(op) {
        "plus" => (a[0] + a[1]) % modulus as usize,
        "times" => a[0] * a[1] % modulus as usize,
        "one" => 1,
        _ => 0,
    })
    .unwrap();
    let xs: Vec<usize> = x.iter().map(|&v| v as usize).collect();
    eval(w, &model, &xs).unwrap() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monoid_projection_counts_leaves(seed in any::<u64>(), n in 0usize..5) {
        let sig = Signature::cmon();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_term(&sig, n, 9, &mut rng);
        let m = project_monoid(&sig, &w).unwrap();
        prop_assert_eq!(m.counts(), &leaf_counts(&w)[..]);
    }

    #[test]
    fn semiring_projection_evaluates_like_the_word(seed in any::<u64>(), n in 0usize..4) {
        let sig = Signature::csr();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_term(&sig, n, 9, &mut rng);
        let p = project_semiring(&sig, &w).unwrap();
        for modulus in [5u64, 7] {
            for _ in 0..8 {
                let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..modulus)).collect();
                prop_assert_eq!(poly_value(&p, &x, modulus), ring_value(&sig, &w, &x, modulus));
            }
        }
    }

    #[test]
    fn projections_commute_with_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = Signature::csr();
        let k = rng.gen_range(0..=3);
        let w = random_term(&sig, k, 7, &mut rng);
        let args: Vec<Term> = (0..k).map(|_| word(&sig, &mut rng, 3)).collect();
        let lhs = project_semiring(&sig, &gamma(&w, &args).unwrap()).unwrap();
        let pa: Vec<PolyNF> = args.iter().map(|a| project_semiring(&sig, a).unwrap()).collect();
        prop_assert_eq!(lhs, project_semiring(&sig, &w).unwrap().gamma(&pa).unwrap());
    }

    #[test]
    fn finmap_composition_is_associative_and_unital(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rng.gen_range(0..=4);
        let b = rng.gen_range(usize::from(a > 0)..=4);
        let c = rng.gen_range(usize::from(b > 0)..=4);
        let d = rng.gen_range(usize::from(c > 0)..=4);
        let f = random_map(&mut rng, a, b);
        let g = random_map(&mut rng, b, c);
        let h = random_map(&mut rng, c, d);
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(compose(&FinMap::identity(a), &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &FinMap::identity(b)).unwrap(), f);
    }

    #[test]
    fn bijections_have_two_sided_inverses(perm in Just((1..=5usize).collect::<Vec<_>>()).prop_shuffle()) {
        let f = FinMap::new(5, perm).unwrap();
        prop_assert!(f.is_bijection());
        let g = f.inverse().unwrap();
        prop_assert_eq!(compose(&f, &g).unwrap(), FinMap::identity(5));
        prop_assert_eq!(compose(&g, &f).unwrap(), FinMap::identity(5));
    }
}
