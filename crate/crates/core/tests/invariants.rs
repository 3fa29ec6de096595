use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use kcover_core::algorithms::GreedyState;
use kcover_core::*;

/// Random instance with up to `max_areas` areas and `max_subsets` subsets.
fn instance(
    max_areas: usize,
    max_subsets: usize,
    max_k: usize,
) -> impl Strategy<Value = ProblemInstance> {
    (1..=max_areas, 1..=max_subsets, 2..=max_k).prop_flat_map(|(a, n, k)| {
        proptest::collection::vec(proptest::collection::btree_set(0..a as u32, 0..=a), n).prop_map(
            move |sets| {
                ProblemInstance::new(
                    a,
                    k,
                    sets.into_iter().map(|s| s.into_iter().collect()).collect(),
                )
                .unwrap()
            },
        )
    })
}

fn partition_for(inst: &ProblemInstance) -> impl Strategy<Value = Partition> {
    let k = inst.k();
    proptest::collection::vec(0..k as u32, inst.num_subsets())
        .prop_map(move |a| Partition::new(k, a).unwrap())
}

/// Objective recomputed from explicit unions.
fn union_objective(inst: &ProblemInstance, p: &Partition) -> (u64, Vec<u32>) {
    let mut per_area = vec![0u32; inst.num_areas()];
    let mut total = 0;
    for cover in 0..inst.k() as u32 {
        let union: BTreeSet<u32> = p
            .members(cover)
            .flat_map(|j| inst.subset(j).iter().copied())
            .collect();
        total += union.len() as u64;
        for v in union {
            per_area[v as usize] += 1;
        }
    }
    (total, per_area)
}

/// k - k(1 - 1/k)^N_v summed, in exact arithmetic.
fn exact_expectation(inst: &ProblemInstance) -> BigRational {
    let k = BigRational::from_integer(BigInt::from(inst.k()));
    let q = BigRational::one() - BigRational::one() / k.clone();
    inst.area_degrees()
        .into_iter()
        .map(|n| k.clone() - k.clone() * num_traits::pow(q.clone(), n as usize))
        .fold(BigRational::zero(), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn report_matches_unions((inst, p) in instance(8, 8, 4).prop_flat_map(|i| {
        let p = partition_for(&i);
        (Just(i), p)
    })) {
        let r = evaluate(&inst, &p).unwrap();
        let (total, per_area) = union_objective(&inst, &p);
        prop_assert_eq!(r.objective, total);
        prop_assert_eq!(&r.per_area_cover_count, &per_area);
        prop_assert_eq!(r.cover_sizes.iter().sum::<u64>(), r.objective);
        prop_assert!(r.objective <= upper_bound(&inst).value);
        for (l, n) in r.per_area_cover_count.iter().zip(&r.per_area_subset_count) {
            prop_assert!(*l <= (inst.k() as u32).min(*n));
        }
        prop_assert!(r.check_invariants(&inst).is_ok());
    }

    #[test]
    fn greedy_traces_replay(inst in instance(10, 10, 5)) {
        for out in [distributed_greedy_partition(&inst), centralized_greedy_partition(&inst)] {
            prop_assert_eq!(out.trace.len(), inst.num_subsets());
            // Re-derive every decision's newly covered count from the prefix.
            let mut state = GreedyState::new(&inst);
            let mut total = 0u64;
            for (j, t) in out.trace.iter().enumerate() {
                prop_assert_eq!(t.subset, j);
                prop_assert_eq!(t.cover, out.partition.cover_of(j));
                let gain = inst.subset(j).iter().filter(|&&v| !state.is_covered(t.cover, v)).count() as u64;
                state.assign(inst.subset(j), t.cover);
                total += gain;
            }
            prop_assert_eq!(total, evaluate(&inst, &out.partition).unwrap().objective);
        }
        let dg = distributed_greedy_partition(&inst);
        prop_assert_eq!(&dg, &distributed_greedy_partition(&inst));
        let mut state = GreedyState::new(&inst);
        for t in &dg.trace {
            let gain = inst.subset(t.subset).iter().filter(|&&v| !state.is_covered(t.cover, v)).count();
            prop_assert_eq!(t.score, gain as f64);
            state.assign(inst.subset(t.subset), t.cover);
        }
    }

    #[test]
    fn centralized_dominates_expectation_exactly(inst in instance(12, 12, 6)) {
        let cg = evaluate(&inst, &centralized_greedy_partition(&inst).partition).unwrap().objective;
        let exact = exact_expectation(&inst);
        prop_assert!(BigRational::from_integer(BigInt::from(cg)) >= exact);
        prop_assert!((expected_randomized_objective(&inst) - to_f64(&exact)).abs() < 1e-9);
    }

    #[test]
    fn randomized_is_seed_stable(inst in instance(6, 6, 4), seed in any::<u64>()) {
        prop_assert_eq!(randomized_partition(&inst, seed), randomized_partition(&inst, seed));
    }

    #[test]
    fn text_id_ranges_respected(inst in instance(6, 6, 4)) {
        for alg in Algorithm::ALL {
            let p = alg.run(&inst, 0).partition;
            prop_assert!(p.assignment().iter().all(|&c| (c as usize) < inst.k()));
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

#[test]
fn generated_instances_dominate_on_larger_sizes() {
    for seed in 0..20 {
        let inst = generate_instance(200, 150, 1500, 2 + seed as usize % 9, seed).unwrap();
        let cg = evaluate(&inst, &centralized_greedy_partition(&inst).partition)
            .unwrap()
            .objective;
        assert!(
            BigRational::from_integer(BigInt::from(cg)) >= exact_expectation(&inst),
            "seed {seed}"
        );
    }
}

#[test]
fn per_area_randomized_mean_within_three_sigma() {
    let inst = generate_instance(12, 40, 200, 5, 77).unwrap();
    let runs = 10_000;
    let degrees = inst.area_degrees();
    let mut sum = vec![0.0; inst.num_areas()];
    for seed in 0..runs {
        let r = evaluate(&inst, &randomized_partition(&inst, seed).partition).unwrap();
        for (s, l) in sum.iter_mut().zip(r.per_area_cover_count) {
            *s += l as f64;
        }
    }
    let k = inst.k() as f64;
    let q = 1.0 - 1.0 / k;
    for (v, &n) in degrees.iter().enumerate() {
        // l_v sums k exchangeable cover indicators.
        let p = 1.0 - q.powi(n as i32);
        let expect = k * p;
        let var = k * p * (1.0 - p) + k * (k - 1.0) * cov_term(k, n as i32, p);
        let sigma = (var.max(0.0) / runs as f64).sqrt();
        let mean = sum[v] / runs as f64;
        assert!(
            (mean - expect).abs() <= 3.0 * sigma + 1e-12,
            "area {v}: {mean} vs {expect} (sigma {sigma})"
        );
    }
}

/// Covariance of two distinct cover indicators for an area held by `n`
/// subsets: P(both empty) - P(empty)^2 on the complements.
fn cov_term(k: f64, n: i32, p: f64) -> f64 {
    let both_empty = (1.0 - 2.0 / k).powi(n);
    let one_empty = 1.0 - p;
    both_empty - one_empty * one_empty
}
