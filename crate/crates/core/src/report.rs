//! Objective evaluation and the trivial optimum bound.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Partition, ProblemInstance, Result};

/// Coverage statistics of one partition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverageReport {
    /// l_v: number of covers containing at least one subset that covers v.
    pub per_area_cover_count: Vec<u32>,
    /// N_v: number of subsets containing v.
    pub per_area_subset_count: Vec<u32>,
    /// Sum over areas of l_v.
    pub objective: u64,
    /// min over areas with N_v >= 1 of l_v / min(k, N_v). `None` when no
    /// area is covered by any subset.
    pub min_fair_ratio: Option<f64>,
    /// |union of the subsets in cover i| for each cover.
    pub cover_sizes: Vec<u64>,
    /// Smallest cover size over largest. 1.0 when every cover is empty.
    pub size_range_ratio: f64,
}

/// Scores `partition` on `instance`.
pub fn evaluate(instance: &ProblemInstance, partition: &Partition) -> Result<CoverageReport> {
    partition.check_against(instance)?;
    let k = instance.k();
    let num_areas = instance.num_areas();

    // covered[i * num_areas + v]
    let mut covered = vec![false; k * num_areas];
    for (j, areas) in instance.subsets().enumerate() {
        let row = partition.cover_of(j) as usize * num_areas;
        for &v in areas {
            covered[row + v as usize] = true;
        }
    }

    let cover_sizes: Vec<u64> = covered
        .chunks_exact(num_areas)
        .map(|row| row.iter().filter(|&&c| c).count() as u64)
        .collect();
    let per_area_cover_count: Vec<u32> = (0..num_areas)
        .map(|v| (0..k).filter(|&i| covered[i * num_areas + v]).count() as u32)
        .collect();
    let per_area_subset_count = instance.area_degrees();

    let objective = cover_sizes.iter().sum();
    let min_fair_ratio = per_area_cover_count
        .iter()
        .zip(&per_area_subset_count)
        .filter(|(_, &n)| n > 0)
        .map(|(&l, &n)| l as f64 / (k as u32).min(n) as f64)
        .reduce(f64::min);
    let size_range_ratio = size_range(&cover_sizes);

    Ok(CoverageReport {
        per_area_cover_count,
        per_area_subset_count,
        objective,
        min_fair_ratio,
        cover_sizes,
        size_range_ratio,
    })
}

fn size_range(sizes: &[u64]) -> f64 {
    let max = sizes.iter().copied().max().unwrap_or(0);
    let min = sizes.iter().copied().min().unwrap_or(0);
    if max == 0 {
        1.0
    } else {
        min as f64 / max as f64
    }
}

impl CoverageReport {
    /// Re-checks every structural invariant of the report against its
    /// instance.
    pub fn check_invariants(&self, instance: &ProblemInstance) -> Result<()> {
        let k = instance.k();
        let fail = |msg| Err(Error::ReportInvariant(msg));
        if self.per_area_cover_count.len() != instance.num_areas()
            || self.per_area_subset_count.len() != instance.num_areas()
        {
            return fail(format!(
                "per-area vectors must have {} entries",
                instance.num_areas()
            ));
        }
        if self.cover_sizes.len() != k {
            return fail(format!("expected {} cover sizes", k));
        }
        if self.per_area_subset_count != instance.area_degrees() {
            return fail("N_v does not match the instance".into());
        }
        for (v, (&l, &n)) in self
            .per_area_cover_count
            .iter()
            .zip(&self.per_area_subset_count)
            .enumerate()
        {
            if l > n || l as usize > k {
                return fail(format!("area {v}: l_v = {l} exceeds min(k, N_v)"));
            }
        }
        let by_area: u64 = self.per_area_cover_count.iter().map(|&l| l as u64).sum();
        let by_cover: u64 = self.cover_sizes.iter().sum();
        if by_area != self.objective || by_cover != self.objective {
            return fail(format!(
                "objective {} disagrees with sum of l_v {} or sum of cover sizes {}",
                self.objective, by_area, by_cover
            ));
        }
        let bound = upper_bound(instance).value;
        if self.objective > bound {
            return fail(format!(
                "objective {} above bound {}",
                self.objective, bound
            ));
        }
        Ok(())
    }
}

/// Which term of `min(k·|S|, |E|)` binds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BoundKind {
    /// Every area in every cover: `k·|S|`.
    AllAreasInAllCovers,
    /// No more coverage than edges: `|E|`. Reported on ties.
    EdgeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UpperBound {
    pub value: u64,
    pub which: BoundKind,
}

/// `min(k·|S|, |E|)`, an upper bound on the objective of every partition.
pub fn upper_bound(instance: &ProblemInstance) -> UpperBound {
    let slots = (instance.k() * instance.num_areas()) as u64;
    let edges = instance.edge_count();
    if edges <= slots {
        UpperBound {
            value: edges,
            which: BoundKind::EdgeCount,
        }
    } else {
        UpperBound {
            value: slots,
            which: BoundKind::AllAreasInAllCovers,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate_instance;

    #[test]
    fn single_subset_single_cover() {
        let inst = ProblemInstance::new(1, 2, vec![vec![0]]).unwrap();
        let p = Partition::new(2, vec![0]).unwrap();
        let r = evaluate(&inst, &p).unwrap();
        assert_eq!(r.per_area_cover_count, vec![1]);
        assert_eq!(r.objective, 1);
        assert_eq!(r.cover_sizes, vec![1, 0]);
        assert_eq!(r.size_range_ratio, 0.0);
        assert_eq!(r.min_fair_ratio, Some(1.0));
    }

    #[test]
    fn identical_subsets_split() {
        let inst = ProblemInstance::new(2, 2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let p = Partition::new(2, vec![0, 1]).unwrap();
        let r = evaluate(&inst, &p).unwrap();
        assert_eq!(r.per_area_cover_count, vec![2, 2]);
        assert_eq!(r.objective, 4);
        assert_eq!(r.size_range_ratio, 1.0);
        r.check_invariants(&inst).unwrap();
    }

    #[test]
    fn uncovered_area_excluded_from_fairness() {
        let inst = ProblemInstance::new(3, 2, vec![vec![0], vec![0, 1]]).unwrap();
        let p = Partition::new(2, vec![0, 0]).unwrap();
        let r = evaluate(&inst, &p).unwrap();
        assert_eq!(r.per_area_cover_count, vec![1, 1, 0]);
        assert_eq!(r.min_fair_ratio, Some(0.5));
    }

    // Per cover, collect the union of its subsets as a sorted, deduplicated
    // list and sum the lengths.
    fn recount(instance: &ProblemInstance, p: &Partition) -> u64 {
        (0..instance.k() as u32)
            .map(|i| {
                let mut union: Vec<u32> = p
                    .members(i)
                    .flat_map(|j| instance.subset(j).iter().copied())
                    .collect();
                union.sort_unstable();
                union.dedup();
                union.len() as u64
            })
            .sum()
    }

    #[test]
    fn objective_matches_union_recount() {
        let inst = generate_instance(6, 5, 14, 3, 11).unwrap();
        for assign in [[0, 1, 2, 0, 1], [0, 0, 0, 0, 0], [2, 2, 1, 1, 0]] {
            let p = Partition::new(3, assign.to_vec()).unwrap();
            let r = evaluate(&inst, &p).unwrap();
            assert_eq!(r.objective, recount(&inst, &p));
            r.check_invariants(&inst).unwrap();
        }
    }

    #[test]
    fn bound_values() {
        let small = ProblemInstance::new(1, 2, vec![vec![0]]).unwrap();
        assert_eq!(
            upper_bound(&small),
            UpperBound {
                value: 1,
                which: BoundKind::EdgeCount
            }
        );
        let row1 = generate_instance(1000, 1000, 5000, 10, 1).unwrap();
        assert_eq!(upper_bound(&row1).value, 5000);
        let row3 = generate_instance(1000, 1000, 20000, 10, 1).unwrap();
        assert_eq!(
            upper_bound(&row3),
            UpperBound {
                value: 10000,
                which: BoundKind::AllAreasInAllCovers
            }
        );
    }

    #[test]
    fn tampered_report_fails_invariants() {
        let inst = ProblemInstance::new(2, 2, vec![vec![0, 1], vec![0]]).unwrap();
        let p = Partition::new(2, vec![0, 1]).unwrap();
        let mut r = evaluate(&inst, &p).unwrap();
        r.objective += 1;
        assert!(r.check_invariants(&inst).is_err());
        let mut r = evaluate(&inst, &p).unwrap();
        r.per_area_cover_count[1] = 2;
        assert!(r.check_invariants(&inst).is_err());
    }
}
