//! Seeded random instance generation.
//!
//! Every random draw in this crate comes from [`SeedRng`], ChaCha with 8
//! rounds seeded through `SeedableRng::seed_from_u64`. Given the same seed
//! and arguments, output is bit-identical on every platform.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;

use crate::{Error, ProblemInstance, Result};

pub type SeedRng = rand_chacha::ChaCha8Rng;

pub fn seed_rng(seed: u64) -> SeedRng {
    SeedRng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream label into an independent 64-bit seed
/// (SplitMix64 finalizer).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `num_edges` distinct subset-area pairs uniformly without replacement
/// from all `num_areas · num_subsets` pairs.
pub fn generate_instance(
    num_areas: usize,
    num_subsets: usize,
    num_edges: usize,
    k: usize,
    seed: u64,
) -> Result<ProblemInstance> {
    if k < 2 {
        return Err(Error::TooFewCovers(k));
    }
    if num_areas == 0 {
        return Err(Error::NoAreas);
    }
    if num_subsets == 0 {
        return Err(Error::NoSubsets);
    }
    if num_edges == 0 {
        return Err(Error::InvalidParameter(
            "num_edges must be at least 1".into(),
        ));
    }
    let possible = num_areas as u64 * num_subsets as u64;
    if num_edges as u64 > possible {
        return Err(Error::TooManyEdges {
            requested: num_edges as u64,
            possible,
        });
    }
    if possible > u32::MAX as u64 {
        return Err(Error::InvalidParameter(format!(
            "pair space {possible} too large for sampling"
        )));
    }

    let mut rng = seed_rng(seed);
    let picks = index::sample(&mut rng, possible as usize, num_edges);
    let mut subsets = vec![Vec::new(); num_subsets];
    for p in picks.iter() {
        subsets[p / num_areas].push((p % num_areas) as u32);
    }
    ProblemInstance::new(num_areas, k, subsets)
}

/// A chain of instances over the same areas and subsets where each level's
/// edges are a superset of the previous level's. `edge_levels` must be
/// non-decreasing. Every level on its own is a uniform draw of its size.
pub fn generate_nested(
    num_areas: usize,
    num_subsets: usize,
    edge_levels: &[usize],
    k: usize,
    seed: u64,
) -> Result<Vec<ProblemInstance>> {
    if edge_levels.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "edge levels must be non-decreasing".into(),
        ));
    }
    let Some(&densest) = edge_levels.last() else {
        return Ok(Vec::new());
    };
    let top = generate_instance(num_areas, num_subsets, densest, k, seed)?;
    let mut pairs: Vec<(u32, u32)> = top
        .subsets()
        .enumerate()
        .flat_map(|(j, areas)| areas.iter().map(move |&v| (j as u32, v)))
        .collect();
    pairs.shuffle(&mut seed_rng(derive_seed(seed, u64::MAX)));

    edge_levels
        .iter()
        .map(|&e| {
            if e == 0 {
                return Err(Error::InvalidParameter(
                    "num_edges must be at least 1".into(),
                ));
            }
            let mut subsets = vec![Vec::new(); num_subsets];
            for &(j, v) in &pairs[..e] {
                subsets[j as usize].push(v);
            }
            ProblemInstance::new(num_areas, k, subsets)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_edge_count() {
        let inst = generate_instance(1000, 1000, 5000, 10, 42).unwrap();
        assert_eq!(inst.edge_count(), 5000);
        assert_eq!(inst.k(), 10);
    }

    #[test]
    fn only_possible_graph() {
        for seed in 0..5 {
            let inst = generate_instance(1, 1, 1, 2, seed).unwrap();
            assert_eq!(inst.subset(0), &[0]);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_instance(4, 6, 12, 2, 7).unwrap();
        let b = generate_instance(4, 6, 12, 2, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 12);
        let c = generate_instance(4, 6, 12, 2, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn complete_graph_when_saturated() {
        let inst = generate_instance(3, 4, 12, 2, 1).unwrap();
        assert!(inst.subsets().all(|s| s == [0, 1, 2]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            generate_instance(4, 6, 25, 2, 0),
            Err(Error::TooManyEdges {
                requested: 25,
                possible: 24
            })
        ));
        assert_eq!(
            generate_instance(4, 6, 5, 1, 0),
            Err(Error::TooFewCovers(1))
        );
    }

    #[test]
    fn nested_levels_grow_by_inclusion() {
        let levels = generate_nested(30, 40, &[50, 100, 200, 400], 3, 11).unwrap();
        for (inst, e) in levels.iter().zip([50, 100, 200, 400]) {
            assert_eq!(inst.edge_count(), e);
        }
        for w in levels.windows(2) {
            for (a, b) in w[0].subsets().zip(w[1].subsets()) {
                assert!(a.iter().all(|v| b.contains(v)));
            }
        }
        assert!(generate_nested(30, 40, &[100, 50], 3, 0).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(9, 3), derive_seed(9, 3));
    }
}
