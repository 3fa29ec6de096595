//! The bipartite subset/area structure of a SET K-COVER problem.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A SET K-COVER instance: `n` subsets over `num_areas` areas, to be split
/// into `k` covers.
///
/// Each subset's area list is sorted ascending and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProblemInstance {
    num_areas: usize,
    k: usize,
    subsets: Vec<Vec<u32>>,
}

impl ProblemInstance {
    /// Builds an instance, sorting each subset. Rejects `k < 2`, empty
    /// dimensions, out-of-range area ids and repeated areas within a subset.
    pub fn new(num_areas: usize, k: usize, mut subsets: Vec<Vec<u32>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewCovers(k));
        }
        if num_areas == 0 {
            return Err(Error::NoAreas);
        }
        if subsets.is_empty() {
            return Err(Error::NoSubsets);
        }
        for (j, areas) in subsets.iter_mut().enumerate() {
            areas.sort_unstable();
            if let Some(&area) = areas.last() {
                if area as usize >= num_areas {
                    return Err(Error::AreaOutOfRange {
                        subset: j,
                        area,
                        num_areas,
                    });
                }
            }
            if let Some(w) = areas.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateArea {
                    subset: j,
                    area: w[0],
                });
            }
        }
        Ok(ProblemInstance {
            num_areas,
            k,
            subsets,
        })
    }

    /// Same membership, different number of covers.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewCovers(k));
        }
        Ok(ProblemInstance {
            num_areas: self.num_areas,
            k,
            subsets: self.subsets.clone(),
        })
    }

    pub fn num_areas(&self) -> usize {
        self.num_areas
    }

    pub fn num_subsets(&self) -> usize {
        self.subsets.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Areas of subset `j`, ascending.
    pub fn subset(&self, j: usize) -> &[u32] {
        &self.subsets[j]
    }

    pub fn subsets(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.subsets.iter().map(Vec::as_slice)
    }

    /// |E|, the number of subset-area memberships.
    pub fn edge_count(&self) -> u64 {
        self.subsets.iter().map(|s| s.len() as u64).sum()
    }

    /// |S_max|, the largest subset cardinality.
    pub fn max_subset_size(&self) -> usize {
        self.subsets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// N_v for every area: how many subsets contain it.
    pub fn area_degrees(&self) -> Vec<u32> {
        let mut degrees = vec![0u32; self.num_areas];
        for areas in &self.subsets {
            for &v in areas {
                degrees[v as usize] += 1;
            }
        }
        degrees
    }

    /// For every area, the ids of the subsets containing it (ascending).
    pub fn area_members(&self) -> Vec<Vec<u32>> {
        let mut members = vec![Vec::new(); self.num_areas];
        for (j, areas) in self.subsets.iter().enumerate() {
            for &v in areas {
                members[v as usize].push(j as u32);
            }
        }
        members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_single_cover() {
        assert_eq!(
            ProblemInstance::new(1, 1, vec![vec![0]]),
            Err(Error::TooFewCovers(1))
        );
    }

    #[test]
    fn rejects_empty_dimensions() {
        assert_eq!(
            ProblemInstance::new(0, 2, vec![vec![]]),
            Err(Error::NoAreas)
        );
        assert_eq!(ProblemInstance::new(3, 2, vec![]), Err(Error::NoSubsets));
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert!(matches!(
            ProblemInstance::new(2, 2, vec![vec![0, 2]]),
            Err(Error::AreaOutOfRange {
                subset: 0,
                area: 2,
                ..
            })
        ));
        assert!(matches!(
            ProblemInstance::new(3, 2, vec![vec![1], vec![2, 1, 2]]),
            Err(Error::DuplicateArea { subset: 1, area: 2 })
        ));
    }

    #[test]
    fn derived_counts() {
        let inst = ProblemInstance::new(4, 3, vec![vec![3, 0], vec![], vec![0, 1, 2]]).unwrap();
        assert_eq!(inst.subset(0), &[0, 3]);
        assert_eq!(inst.edge_count(), 5);
        assert_eq!(inst.max_subset_size(), 3);
        assert_eq!(inst.area_degrees(), vec![2, 1, 1, 1]);
        assert_eq!(inst.area_members()[0], vec![0, 2]);
    }
}
