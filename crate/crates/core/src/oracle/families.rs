//! Instance families tied to the 15/16 hardness regime: the reduction from
//! E4 set splitting to SET 2-COVER, and random k = 2 instances in which every
//! area lies in exactly four subsets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;

use crate::generate::seed_rng;
use crate::{Error, ProblemInstance, Result};

/// E4 set splitting: 4-element sets over the ground set `0..ground_set_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingInstance {
    ground_set_size: usize,
    sets: Vec<[u32; 4]>,
}

impl SplittingInstance {
    pub fn new(ground_set_size: usize, sets: Vec<[u32; 4]>) -> Result<Self> {
        for (i, set) in sets.iter().enumerate() {
            if set.iter().any(|&x| x as usize >= ground_set_size) {
                return Err(Error::InvalidSplittingSet {
                    set: i,
                    reason: "element outside the ground set",
                });
            }
            let mut sorted = *set;
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSplittingSet {
                    set: i,
                    reason: "repeated element",
                });
            }
        }
        Ok(SplittingInstance {
            ground_set_size,
            sets,
        })
    }

    pub fn ground_set_size(&self) -> usize {
        self.ground_set_size
    }

    pub fn sets(&self) -> &[[u32; 4]] {
        &self.sets
    }
}

/// One subset per ground element, one area per set, membership iff the
/// element belongs to the set; `k = 2`.
pub fn reduce_splitting(splitting: &SplittingInstance) -> Result<ProblemInstance> {
    let mut subsets = vec![Vec::new(); splitting.ground_set_size];
    for (area, set) in splitting.sets.iter().enumerate() {
        for &x in set {
            subsets[x as usize].push(area as u32);
        }
    }
    ProblemInstance::new(splitting.sets.len(), 2, subsets)
}

/// Number of sets with elements on both sides of `side`.
pub fn split_count(splitting: &SplittingInstance, side: &[bool]) -> usize {
    splitting
        .sets
        .iter()
        .filter(|set| {
            let first = side[set[0] as usize];
            set.iter().any(|&x| side[x as usize] != first)
        })
        .count()
}

/// Best split count over all 2-colorings of the ground set. Exponential;
/// refuses ground sets larger than 24.
pub fn max_split_count(splitting: &SplittingInstance) -> Result<usize> {
    let n = splitting.ground_set_size;
    if n > 24 {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} colorings is too many to enumerate"
        )));
    }
    let mut side = vec![false; n];
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        for (x, s) in side.iter_mut().enumerate() {
            *s = mask >> x & 1 == 1;
        }
        best = best.max(split_count(splitting, &side));
    }
    Ok(best)
}

/// `num_sets` disjoint quadruples over `4 · num_sets` elements; every set can
/// be split at once.
pub fn splittable_family(num_sets: usize) -> SplittingInstance {
    let sets = (0..num_sets as u32)
        .map(|i| [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3])
        .collect();
    SplittingInstance {
        ground_set_size: 4 * num_sets,
        sets,
    }
}

/// A `k = 2` instance over `num_areas` areas and `num_subsets` subsets in
/// which each area independently picks 4 distinct subsets uniformly, so
/// N_v = 4 for every area.
pub fn tightness_family(
    num_areas: usize,
    num_subsets: usize,
    seed: u64,
) -> Result<ProblemInstance> {
    if num_areas == 0 {
        return Err(Error::NoAreas);
    }
    if num_subsets < 4 {
        return Err(Error::InvalidParameter(format!(
            "every area needs 4 distinct subsets, got {num_subsets} subsets"
        )));
    }
    let mut rng = seed_rng(seed);
    let mut subsets = vec![Vec::new(); num_subsets];
    for v in 0..num_areas as u32 {
        for j in index::sample(&mut rng, num_subsets, 4).iter() {
            subsets[j].push(v);
        }
    }
    ProblemInstance::new(num_areas, 2, subsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_optimum, OracleBudget};

    #[test]
    fn rejects_malformed_sets() {
        assert!(SplittingInstance::new(4, vec![[0, 1, 2, 4]]).is_err());
        assert!(SplittingInstance::new(5, vec![[0, 1, 1, 3]]).is_err());
        assert!(SplittingInstance::new(4, vec![[3, 1, 2, 0]]).is_ok());
    }

    #[test]
    fn one_set_over_four_elements() {
        let s = SplittingInstance::new(4, vec![[0, 1, 2, 3]]).unwrap();
        let i = reduce_splitting(&s).unwrap();
        assert_eq!(i.k(), 2);
        assert_eq!(i.num_areas(), 1);
        assert_eq!(i.num_subsets(), 4);
        assert!(i.subsets().all(|a| a == [0]));
    }

    #[test]
    fn splittable_family_reaches_twice_the_areas() {
        let s = splittable_family(3);
        let i = reduce_splitting(&s).unwrap();
        assert!(i.area_degrees().iter().all(|&d| d == 4));
        let r = exact_optimum(&i, &OracleBudget::default()).unwrap();
        assert_eq!(r.optimum_objective, 2 * 3);
        assert_eq!(max_split_count(&s).unwrap(), 3);
    }

    #[test]
    fn split_counting() {
        let s = SplittingInstance::new(6, vec![[0, 1, 2, 3], [2, 3, 4, 5]]).unwrap();
        assert_eq!(
            split_count(&s, &[true, true, false, false, false, false]),
            1
        );
        assert_eq!(split_count(&s, &[true, false, true, false, true, false]), 2);
        assert_eq!(split_count(&s, &[false; 6]), 0);
    }

    #[test]
    fn tightness_family_degrees() {
        let i = tightness_family(1, 4, 0).unwrap();
        assert_eq!(i.k(), 2);
        assert_eq!(i.area_degrees(), vec![4]);
        for seed in 0..10 {
            let i = tightness_family(6, 8, seed).unwrap();
            assert!(i.area_degrees().iter().all(|&d| d == 4));
            assert_eq!(i.edge_count(), 24);
        }
        assert!(tightness_family(3, 3, 0).is_err());
    }
}
