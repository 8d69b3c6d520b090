use std::collections::BTreeSet;

use laplaza::finmap::{compose, FinMap};
use laplaza::laws::random_map;
use laplaza::nf::MonoidNF;
use laplaza::two_theory::cobordism::{
    check_cmc_axioms, check_operadic_coherence, eval_two_term, random_cobordism,
    random_glue_instance, random_two_term, Cobordism, Interpretation,
};
use laplaza::two_theory::{
    axiom_rewrite_oracle, cmc_sweep, two_equal, IndexWord, TwoNode, TwoTerm,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ARITY: usize = 4;

fn slot(i: usize, w: IndexWord) -> TwoNode {
    TwoNode::Slot(i, w)
}

fn split(rng: &mut impl Rng, m: &MonoidNF) -> (MonoidNF, MonoidNF) {
    let left: Vec<u32> = m.counts().iter().map(|&c| rng.gen_range(0..=c)).collect();
    let right: Vec<u32> = m.counts().iter().zip(&left).map(|(&c, &l)| c - l).collect();
    (MonoidNF::from_counts(left), MonoidNF::from_counts(right))
}

/// A random word whose target is `w`, built from units, binary sums and
/// single cancellations.
fn filler(rng: &mut impl Rng, w: &IndexWord, depth: usize) -> TwoTerm {
    let n = w.arity();
    if depth == 0 {
        return TwoTerm::unit(w.clone());
    }
    match rng.gen_range(0..3) {
        0 => TwoTerm::unit(w.clone()),
        1 => {
            let (a1, a2) = split(rng, &w.a);
            let (b1, b2) = split(rng, &w.b);
            let left = IndexWord::new(a1, b1).unwrap();
            let right = IndexWord::new(a2, b2).unwrap();
            let shape = TwoTerm::new(
                n,
                TwoNode::plus(slot(1, left.clone()), slot(2, right.clone())),
            )
            .unwrap();
            let args = [
                filler(rng, &left, depth - 1),
                filler(rng, &right, depth - 1),
            ];
            shape.theta_compose(&args).unwrap()
        }
        _ => {
            let free: Vec<usize> = (1..=n)
                .filter(|&v| w.a.count(v) == 0 && w.b.count(v) == 0)
                .collect();
            let take = rng.gen_range(0..=free.len());
            let c = MonoidNF::from_vars(n, &free[..take]).unwrap();
            let inner = w
                .add(&IndexWord::new(c.clone(), c.clone()).unwrap())
                .unwrap();
            let shape = TwoTerm::new(n, TwoNode::check(slot(1, inner.clone()), c)).unwrap();
            shape
                .theta_compose(&[filler(rng, &inner, depth - 1)])
                .unwrap()
        }
    }
}

fn fillers(rng: &mut impl Rng, t: &TwoTerm, depth: usize) -> Vec<TwoTerm> {
    t.typecheck()
        .unwrap()
        .source
        .iter()
        .map(|w| filler(rng, w, depth))
        .collect()
}

fn random_perm(rng: &mut impl Rng, n: usize) -> FinMap {
    let mut table: Vec<usize> = (1..=n).collect();
    table.shuffle(rng);
    FinMap::new(n, table).unwrap()
}

fn random_words(rng: &mut impl Rng, count: usize, arity: usize) -> Vec<MonoidNF> {
    (0..count)
        .map(|_| MonoidNF::from_counts((0..arity).map(|_| rng.gen_range(0..=2)).collect()))
        .collect()
}

#[test]
fn slot_composition_is_associative_and_unital() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let betas = fillers(&mut rng, &alpha, 2);
        let deltas: Vec<Vec<TwoTerm>> = betas.iter().map(|b| fillers(&mut rng, b, 1)).collect();
        let flat: Vec<TwoTerm> = deltas.iter().flatten().cloned().collect();
        let left = alpha
            .theta_compose(&betas)
            .unwrap()
            .theta_compose(&flat)
            .unwrap();
        let inner: Vec<TwoTerm> = betas
            .iter()
            .zip(&deltas)
            .map(|(b, ds)| b.theta_compose(ds).unwrap())
            .collect();
        let right = alpha.theta_compose(&inner).unwrap();
        assert_eq!(left, right);

        let ty = alpha.typecheck().unwrap();
        let units: Vec<TwoTerm> = ty.source.iter().cloned().map(TwoTerm::unit).collect();
        assert_eq!(alpha.theta_compose(&units).unwrap(), alpha);
        assert_eq!(
            TwoTerm::unit(ty.target)
                .theta_compose(std::slice::from_ref(&alpha))
                .unwrap(),
            alpha
        );
    }
}

#[test]
fn slot_relabeling_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 4);
        let k = alpha.slot_count();
        let iota = random_perm(&mut rng, k);
        let kappa = random_perm(&mut rng, k);
        let stepwise = alpha
            .theta_funct(&iota)
            .unwrap()
            .theta_funct(&kappa)
            .unwrap();
        assert_eq!(
            stepwise,
            alpha.theta_funct(&compose(&iota, &kappa).unwrap()).unwrap()
        );
        assert_eq!(alpha.theta_funct(&FinMap::identity(k)).unwrap(), alpha);
        let permuted = alpha.theta_funct(&iota).unwrap();
        assert!(two_equal(&permuted, &permuted).unwrap());
    }
}

#[test]
fn pushforwards_compose_and_commute_with_normal_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let m = rng.gen_range(1..=4);
        let l = rng.gen_range(1..=4);
        let f = random_map(&mut rng, ARITY, m);
        let g = random_map(&mut rng, m, l);
        let stepwise = alpha.t_funct(&f).unwrap().t_funct(&g).unwrap();
        assert_eq!(stepwise, alpha.t_funct(&compose(&f, &g).unwrap()).unwrap());
        assert_eq!(alpha.t_funct(&FinMap::identity(ARITY)).unwrap(), alpha);

        let nf = alpha.normalize().unwrap();
        let pushed = alpha.t_funct(&f).unwrap().normalize().unwrap();
        assert_eq!(pushed.cancel, nf.cancel.pushforward(&f).unwrap());
        assert_eq!(pushed.target, nf.target.pushforward(&f).unwrap());
        let sources: Vec<IndexWord> = nf
            .source
            .iter()
            .map(|w| w.pushforward(&f).unwrap())
            .collect();
        assert_eq!(pushed.source, sources);
    }
}

#[test]
fn substitutions_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let arities: Vec<usize> = (0..ARITY).map(|_| rng.gen_range(0..=2)).collect();
        let us: Vec<MonoidNF> = arities
            .iter()
            .map(|&a| random_words(&mut rng, 1, a).pop().unwrap())
            .collect();
        let inner_arity: usize = arities.iter().sum();
        let vs: Vec<MonoidNF> = (0..inner_arity)
            .map(|_| {
                let a = rng.gen_range(0..=2);
                random_words(&mut rng, 1, a).pop().unwrap()
            })
            .collect();
        let mut at = 0;
        let composite: Vec<MonoidNF> = us
            .iter()
            .map(|u| {
                let block = &vs[at..at + u.arity()];
                at += u.arity();
                u.gamma(block).unwrap()
            })
            .collect();
        let stepwise = alpha.t_subst(&us).unwrap().t_subst(&vs).unwrap();
        assert_eq!(stepwise, alpha.t_subst(&composite).unwrap());
        let ones: Vec<MonoidNF> = (0..ARITY)
            .map(|_| MonoidNF::from_vars(1, &[1]).unwrap())
            .collect();
        assert_eq!(alpha.t_subst(&ones).unwrap(), alpha);
    }
}

#[test]
fn substitution_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let l = rng.gen_range(1..=3);
        let f = random_map(&mut rng, ARITY, l);
        let us: Vec<MonoidNF> = (0..l)
            .map(|_| {
                let a = rng.gen_range(0..=2);
                random_words(&mut rng, 1, a).pop().unwrap()
            })
            .collect();
        let lhs = alpha.t_funct(&f).unwrap().t_subst(&us).unwrap();
        let picked: Vec<MonoidNF> = f.table().iter().map(|&i| us[i - 1].clone()).collect();
        let fbar =
            laplaza::finmap::block_map(&f, &us.iter().map(MonoidNF::arity).collect::<Vec<_>>())
                .unwrap();
        let rhs = alpha.t_subst(&picked).unwrap().t_funct(&fbar).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn slot_composition_commutes_with_pushforward() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let betas = fillers(&mut rng, &alpha, 2);
        let m = rng.gen_range(1..=4);
        let f = random_map(&mut rng, ARITY, m);
        let lhs = alpha.theta_compose(&betas).unwrap().t_funct(&f).unwrap();
        let pushed: Vec<TwoTerm> = betas.iter().map(|b| b.t_funct(&f).unwrap()).collect();
        let rhs = alpha.t_funct(&f).unwrap().theta_compose(&pushed).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn normal_form_equality_agrees_with_the_oracle_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut equal = 0;
    for _ in 0..400 {
        let alpha = random_two_term(&mut rng, 2, 2);
        let rebuilt = alpha.normalize().unwrap().to_term();
        assert!(two_equal(&alpha, &rebuilt).unwrap());
        let beta = random_two_term(&mut rng, 2, 2);
        if alpha.typecheck().unwrap().source != beta.typecheck().unwrap().source
            || alpha.size() > 6
            || beta.size() > 6
        {
            continue;
        }
        let decided = two_equal(&alpha, &beta).unwrap();
        assert_eq!(
            decided,
            axiom_rewrite_oracle(&alpha, &beta, 4),
            "{alpha} vs {beta}"
        );
        equal += usize::from(decided);
    }
    assert!(equal > 0);
}

#[test]
fn small_exhaustive_sweep_has_no_disagreements() {
    let r = cmc_sweep(2, 5, 2, 4, 1).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.equal_pairs > 0 && r.distinct_pairs > 0);
}

fn boundary(c: &laplaza::two_theory::cobordism::Component) -> usize {
    c.inbound.len() + c.outbound.len()
}

/// Components, genus and boundary of a gluing, from Euler characteristics.
fn euler_glue(x: &Cobordism, labels: &[String]) -> Vec<(BTreeSet<String>, BTreeSet<String>, u32)> {
    let comps = x.components();
    let n = comps.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut glued_in: Vec<usize> = vec![0; n];
    for l in labels {
        let i = comps.iter().position(|c| c.inbound.contains(l)).unwrap();
        let o = comps.iter().position(|c| c.outbound.contains(l)).unwrap();
        adj[i].push(o);
        adj[o].push(i);
        glued_in[i] += 1;
    }
    let glued: BTreeSet<&String> = labels.iter().collect();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut group = Vec::new();
        while let Some(v) = stack.pop() {
            group.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let chi: i64 = group
            .iter()
            .map(|&k| 2 - 2 * i64::from(comps[k].genus) - boundary(&comps[k]) as i64)
            .sum();
        let gluings: usize = group.iter().map(|&k| glued_in[k]).sum();
        let b = group.iter().map(|&k| boundary(&comps[k])).sum::<usize>() - 2 * gluings;
        let twice_genus = 2 - chi - b as i64;
        assert!(twice_genus >= 0 && twice_genus % 2 == 0);
        let inbound: BTreeSet<String> = group
            .iter()
            .flat_map(|&k| comps[k].inbound.iter())
            .filter(|l| !glued.contains(l))
            .cloned()
            .collect();
        let outbound: BTreeSet<String> = group
            .iter()
            .flat_map(|&k| comps[k].outbound.iter())
            .filter(|l| !glued.contains(l))
            .cloned()
            .collect();
        out.push((inbound, outbound, (twice_genus / 2) as u32));
    }
    out.sort();
    out
}

#[test]
fn genus_matches_the_euler_characteristic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    while checked < 600 {
        let x = random_glue_instance(&mut rng);
        let shared: Vec<String> = x.inbound().intersection(x.outbound()).cloned().collect();
        let take = rng.gen_range(0..=shared.len());
        let labels: Vec<String> = shared.choose_multiple(&mut rng, take).cloned().collect();
        let y = x.self_glue(&labels).unwrap();
        let mut got: Vec<(BTreeSet<String>, BTreeSet<String>, u32)> = y
            .components()
            .iter()
            .map(|c| (c.inbound.clone(), c.outbound.clone(), c.genus))
            .collect();
        got.sort();
        assert_eq!(got, euler_glue(&x, &labels));
        checked += 1;
    }
}

#[test]
fn gluing_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let x = random_glue_instance(&mut rng);
        let mut labels: Vec<String> = x.inbound().intersection(x.outbound()).cloned().collect();
        let reference = x.self_glue(&labels).unwrap();
        labels.shuffle(&mut rng);
        assert_eq!(x.self_glue(&labels).unwrap(), reference);
        let mut stepwise = x.clone();
        for l in &labels {
            stepwise = stepwise.self_glue(std::slice::from_ref(l)).unwrap();
        }
        assert_eq!(stepwise, reference);
    }
}

#[test]
fn evaluation_factors_through_slot_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let interp = Interpretation::cycling(ARITY, 2);
    for _ in 0..200 {
        let alpha = random_two_term(&mut rng, ARITY, 3);
        let betas = fillers(&mut rng, &alpha, 2);
        let mut inputs = Vec::new();
        let mut per_beta = Vec::new();
        for b in &betas {
            let own: Vec<Cobordism> = b
                .typecheck()
                .unwrap()
                .source
                .iter()
                .map(|w| {
                    random_cobordism(
                        &mut rng,
                        &interp.labels_of(&w.a).unwrap(),
                        &interp.labels_of(&w.b).unwrap(),
                    )
                })
                .collect();
            inputs.extend(own.iter().cloned());
            per_beta.push(eval_two_term(b, &interp, &own).unwrap().untagged().unwrap());
        }
        let whole = eval_two_term(&alpha.theta_compose(&betas).unwrap(), &interp, &inputs).unwrap();
        let staged = eval_two_term(&alpha, &interp, &per_beta).unwrap();
        assert_eq!(whole.untagged().unwrap(), staged.untagged().unwrap());
    }
}

#[test]
fn worldsheet_diagrams_commute_on_many_samples() {
    let r = check_cmc_axioms(500, 31).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.worldsheets >= 500);
    let o = check_operadic_coherence(2, 5, 3, 4, 32).unwrap();
    assert!(o.passed(), "{o:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cobordism_json_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_glue_instance(&mut rng);
        let text = serde_json::to_string(&x).unwrap();
        let back: Cobordism = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn normal_forms_are_stable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = random_two_term(&mut rng, ARITY, 4);
        let nf = alpha.normalize().unwrap();
        prop_assert_eq!(nf.to_term().normalize().unwrap(), nf);
        let parsed = TwoTerm::parse(&alpha.to_string(), Some(ARITY)).unwrap();
        prop_assert_eq!(parsed, alpha);
    }
}
