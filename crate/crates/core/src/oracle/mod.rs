//! Exact optima for small instances by branch-and-bound enumeration.
//!
//! Covers are interchangeable, so the search only visits canonical
//! assignments: subset 0 goes to cover 0 and each later subset may open at
//! most one new cover (the next unused index). Witnesses are therefore the
//! lexicographically first optimal canonical assignment.

mod families;

pub use families::{
    max_split_count, reduce_splitting, split_count, splittable_family, tightness_family,
    SplittingInstance,
};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{upper_bound, Error, Partition, ProblemInstance, Result};

/// Refusal thresholds for [`exact_optimum`]. The node ceiling is counted
/// deterministically, never by wall clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_subsets: usize,
    pub max_covers: usize,
    pub max_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_subsets: 12,
            max_covers: 4,
            max_nodes: 4u64.pow(12),
        }
    }
}

impl OracleBudget {
    /// Only the node ceiling applies.
    pub fn nodes(max_nodes: u64) -> Self {
        OracleBudget {
            max_subsets: usize::MAX,
            max_covers: usize::MAX,
            max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// OPT: the best sum over areas of l_v.
    pub optimum_objective: u64,
    /// l*: the best achievable min over areas with N_v >= 1 of l_v; 0 when
    /// no area is covered at all.
    pub optimum_maxmin: u32,
    pub objective_witness: Partition,
    pub maxmin_witness: Partition,
    /// Search nodes visited across both searches.
    pub nodes: u64,
}

pub fn exact_optimum(instance: &ProblemInstance, budget: &OracleBudget) -> Result<OracleResult> {
    let n = instance.num_subsets();
    let k = instance.k();
    if n > budget.max_subsets || k > budget.max_covers {
        return Err(Error::BudgetExceeded(format!(
            "n = {n}, k = {k} exceeds the guard n <= {}, k <= {}",
            budget.max_subsets, budget.max_covers
        )));
    }

    let mut search = Search::new(instance, budget.max_nodes);
    let cap = upper_bound(instance).value;
    search.objective(0, 0, 0, cap)?;
    let optimum_objective = search.best;
    let objective_witness = search.best_assignment.clone();

    let degrees = instance.area_degrees();
    let maxmin_cap = degrees
        .iter()
        .filter(|&&d| d > 0)
        .map(|&d| d.min(k as u32))
        .min();
    let (optimum_maxmin, maxmin_witness) = match maxmin_cap {
        None => (0, vec![0; n]),
        Some(cap) => {
            search.reset();
            search.maxmin(0, 0, cap as u64)?;
            (search.best as u32, search.best_assignment.clone())
        }
    };

    Ok(OracleResult {
        optimum_objective,
        optimum_maxmin,
        objective_witness: Partition::new(k, objective_witness)?,
        maxmin_witness: Partition::new(k, maxmin_witness)?,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    instance: &'a ProblemInstance,
    k: usize,
    num_areas: usize,
    // counts[i * num_areas + v]: assigned subsets in cover i containing v
    counts: Vec<u16>,
    // l_v of the current partial assignment
    cover_count: Vec<u32>,
    // unassigned subsets containing v
    unassigned: Vec<u32>,
    covered_areas: Vec<u32>,
    suffix_cardinality: Vec<u64>,
    assignment: Vec<u32>,
    best: u64,
    best_assignment: Vec<u32>,
    found: bool,
    nodes: u64,
    max_nodes: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &'a ProblemInstance, max_nodes: u64) -> Self {
        let n = instance.num_subsets();
        let mut suffix_cardinality = vec![0u64; n + 1];
        for j in (0..n).rev() {
            suffix_cardinality[j] = suffix_cardinality[j + 1] + instance.subset(j).len() as u64;
        }
        let degrees = instance.area_degrees();
        let covered_areas = (0..instance.num_areas() as u32)
            .filter(|&v| degrees[v as usize] > 0)
            .collect();
        Search {
            instance,
            k: instance.k(),
            num_areas: instance.num_areas(),
            counts: vec![0; instance.k() * instance.num_areas()],
            cover_count: vec![0; instance.num_areas()],
            unassigned: degrees,
            covered_areas,
            suffix_cardinality,
            assignment: vec![0; n],
            best: 0,
            best_assignment: vec![0; n],
            found: false,
            nodes: 0,
            max_nodes,
        }
    }

    fn reset(&mut self) {
        self.best = 0;
        self.found = false;
    }

    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "search exceeded {} nodes",
                self.max_nodes
            )));
        }
        Ok(())
    }

    /// Places subset `j` in `cover`; returns the number of areas newly
    /// covered by that cover.
    fn place(&mut self, j: usize, cover: u32) -> u64 {
        self.assignment[j] = cover;
        let row = cover as usize * self.num_areas;
        let mut gain = 0;
        for &v in self.instance.subset(j) {
            let c = &mut self.counts[row + v as usize];
            if *c == 0 {
                gain += 1;
                self.cover_count[v as usize] += 1;
            }
            *c += 1;
            self.unassigned[v as usize] -= 1;
        }
        gain
    }

    fn unplace(&mut self, j: usize, cover: u32) {
        let row = cover as usize * self.num_areas;
        for &v in self.instance.subset(j) {
            let c = &mut self.counts[row + v as usize];
            *c -= 1;
            if *c == 0 {
                self.cover_count[v as usize] -= 1;
            }
            self.unassigned[v as usize] += 1;
        }
    }

    fn record(&mut self, value: u64) {
        if !self.found || value > self.best {
            self.best = value;
            self.best_assignment.copy_from_slice(&self.assignment);
            self.found = true;
        }
    }

    fn objective(&mut self, j: usize, used: usize, value: u64, cap: u64) -> Result<()> {
        self.visit()?;
        if j == self.assignment.len() {
            self.record(value);
            return Ok(());
        }
        // Optimistic completion: every remaining subset adds its full size.
        if self.found && value + self.suffix_cardinality[j] <= self.best {
            return Ok(());
        }
        for cover in 0..self.k.min(used + 1) {
            if self.found && self.best == cap {
                break;
            }
            let gain = self.place(j, cover as u32);
            self.objective(j + 1, used.max(cover + 1), value + gain, cap)?;
            self.unplace(j, cover as u32);
        }
        Ok(())
    }

    fn maxmin_bound(&self) -> u64 {
        self.covered_areas
            .iter()
            .map(|&v| {
                (self.cover_count[v as usize] + self.unassigned[v as usize]).min(self.k as u32)
            })
            .min()
            .unwrap_or(0) as u64
    }

    fn maxmin(&mut self, j: usize, used: usize, cap: u64) -> Result<()> {
        self.visit()?;
        if j == self.assignment.len() {
            let value = self
                .covered_areas
                .iter()
                .map(|&v| self.cover_count[v as usize])
                .min()
                .unwrap_or(0);
            self.record(value as u64);
            return Ok(());
        }
        if self.found && self.maxmin_bound() <= self.best {
            return Ok(());
        }
        for cover in 0..self.k.min(used + 1) {
            if self.found && self.best == cap {
                break;
            }
            self.place(j, cover as u32);
            self.maxmin(j + 1, used.max(cover + 1), cap)?;
            self.unplace(j, cover as u32);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{evaluate, generate_instance};

    fn inst(num_areas: usize, k: usize, subsets: Vec<Vec<u32>>) -> ProblemInstance {
        ProblemInstance::new(num_areas, k, subsets).unwrap()
    }

    #[test]
    fn identical_pair() {
        let r = exact_optimum(
            &inst(2, 2, vec![vec![0, 1], vec![0, 1]]),
            &OracleBudget::default(),
        )
        .unwrap();
        assert_eq!(r.optimum_objective, 4);
        assert_eq!(r.optimum_maxmin, 2);
        assert_eq!(r.objective_witness.assignment(), &[0, 1]);
    }

    #[test]
    fn single_subset() {
        let i = inst(5, 2, vec![vec![0, 2, 3]]);
        let r = exact_optimum(&i, &OracleBudget::default()).unwrap();
        assert_eq!(r.optimum_objective, 3);
        assert_eq!(r.optimum_maxmin, 1);
    }

    #[test]
    fn nothing_covered() {
        let i = inst(3, 3, vec![vec![], vec![]]);
        let r = exact_optimum(&i, &OracleBudget::default()).unwrap();
        assert_eq!(r.optimum_objective, 0);
        assert_eq!(r.optimum_maxmin, 0);
    }

    #[test]
    fn witnesses_achieve_optima() {
        for seed in 0..30 {
            let i = generate_instance(6, 8, 20, 2 + seed as usize % 3, seed).unwrap();
            let r = exact_optimum(&i, &OracleBudget::default()).unwrap();
            let obj = evaluate(&i, &r.objective_witness).unwrap();
            assert_eq!(obj.objective, r.optimum_objective);
            let mm = evaluate(&i, &r.maxmin_witness).unwrap();
            let min_l = mm
                .per_area_cover_count
                .iter()
                .zip(&mm.per_area_subset_count)
                .filter(|(_, &n)| n > 0)
                .map(|(&l, _)| l)
                .min()
                .unwrap_or(0);
            assert_eq!(min_l, r.optimum_maxmin);
            assert_eq!(r.objective_witness.cover_of(0), 0);
        }
    }

    #[test]
    fn default_guard_refuses_thirteen_subsets() {
        let i = inst(1, 2, vec![vec![0]; 13]);
        assert!(matches!(
            exact_optimum(&i, &OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
        // Lifting the guard lets it through.
        assert!(exact_optimum(&i, &OracleBudget::nodes(1 << 20)).is_ok());
    }

    #[test]
    fn node_ceiling_refuses_instead_of_approximating() {
        let i = generate_instance(8, 10, 40, 3, 5).unwrap();
        assert!(matches!(
            exact_optimum(&i, &OracleBudget::nodes(50)),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
