//! The three partitioning procedures: uniform random assignment, the
//! distributed greedy rule (largest number of still-uncovered areas) and the
//! centralized greedy rule (uncovered areas weighted by `(1 - 1/k)^(y_v - 1)`).
//!
//! Both greedy procedures visit subsets in ascending id order and break ties
//! toward the lowest cover index, so their output is fully determined by the
//! instance.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::generate::seed_rng;
use crate::{Error, Partition, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Algorithm {
    Randomized,
    DistributedGreedy,
    CentralizedGreedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Randomized,
        Algorithm::DistributedGreedy,
        Algorithm::CentralizedGreedy,
    ];

    /// Short CLI name: `random`, `dgreedy` or `cgreedy`.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Randomized => "random",
            Algorithm::DistributedGreedy => "dgreedy",
            Algorithm::CentralizedGreedy => "cgreedy",
        }
    }

    pub fn is_deterministic(self) -> bool {
        !matches!(self, Algorithm::Randomized)
    }

    /// Runs the algorithm. `seed` is ignored by the greedy procedures.
    pub fn run(self, instance: &ProblemInstance, seed: u64) -> AlgorithmOutcome {
        match self {
            Algorithm::Randomized => randomized_partition(instance, seed),
            Algorithm::DistributedGreedy => distributed_greedy_partition(instance),
            Algorithm::CentralizedGreedy => centralized_greedy_partition(instance),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown algorithm `{s}`")))
    }
}

/// One assignment decision.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    pub subset: usize,
    pub cover: u32,
    /// The chosen cover's marginal score at decision time: newly covered
    /// areas for the distributed rule and the random assignment, the weighted
    /// sum for the centralized rule.
    pub score: f64,
    /// Another cover reached the same score.
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlgorithmOutcome {
    pub partition: Partition,
    pub trace: Vec<TraceEntry>,
}

/// Coverage bookkeeping shared by the sequential procedures.
///
/// `covered` is the complement of the per-sensor decision matrix: entry
/// `(i, v)` is set once some already-assigned subset in cover `i` contains
/// `v`. `remaining[v]` is y_v, the number of not-yet-assigned subsets
/// containing `v`, including the one currently deciding.
#[derive(Debug, Clone)]
pub struct GreedyState {
    k: usize,
    num_areas: usize,
    covered: Vec<bool>,
    remaining: Vec<u32>,
}

impl GreedyState {
    pub fn new(instance: &ProblemInstance) -> Self {
        GreedyState {
            k: instance.k(),
            num_areas: instance.num_areas(),
            covered: vec![false; instance.k() * instance.num_areas()],
            remaining: instance.area_degrees(),
        }
    }

    pub fn is_covered(&self, cover: u32, area: u32) -> bool {
        self.covered[cover as usize * self.num_areas + area as usize]
    }

    pub fn remaining(&self, area: u32) -> u32 {
        self.remaining[area as usize]
    }

    /// The k × |S_j| indicator matrix for a deciding subset, row-major;
    /// entry `(i, c)` is 1 iff `areas[c]` is not yet covered by cover `i`.
    pub fn decision_matrix(&self, areas: &[u32]) -> Vec<u8> {
        (0..self.k as u32)
            .flat_map(|i| areas.iter().map(move |&v| (i, v)))
            .map(|(i, v)| u8::from(!self.is_covered(i, v)))
            .collect()
    }

    /// Score of every cover: sum of `weight(v)` over areas of the subset not
    /// yet covered by that cover.
    pub fn cover_scores(&self, areas: &[u32], weight: impl Fn(u32) -> f64) -> Vec<f64> {
        (0..self.k as u32)
            .map(|i| {
                areas
                    .iter()
                    .filter(|&&v| !self.is_covered(i, v))
                    .map(|&v| weight(v))
                    .sum()
            })
            .collect()
    }

    pub fn assign(&mut self, areas: &[u32], cover: u32) {
        let row = cover as usize * self.num_areas;
        for &v in areas {
            self.covered[row + v as usize] = true;
            self.remaining[v as usize] -= 1;
        }
    }
}

/// Lowest index among the maxima, and whether the maximum is shared.
fn argmax_lowest(scores: &[f64]) -> (u32, bool) {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    let tie = scores
        .iter()
        .enumerate()
        .any(|(i, &s)| i != best && s == scores[best]);
    (best as u32, tie)
}

/// Each subset independently picks a cover uniformly from `0..k`.
pub fn randomized_partition(instance: &ProblemInstance, seed: u64) -> AlgorithmOutcome {
    let mut rng = seed_rng(seed);
    let k = instance.k();
    let mut state = GreedyState::new(instance);
    let mut assignment = Vec::with_capacity(instance.num_subsets());
    let mut trace = Vec::with_capacity(instance.num_subsets());
    for (j, areas) in instance.subsets().enumerate() {
        let cover = rng.gen_range(0..k as u32);
        let gain = areas
            .iter()
            .filter(|&&v| !state.is_covered(cover, v))
            .count();
        state.assign(areas, cover);
        assignment.push(cover);
        trace.push(TraceEntry {
            subset: j,
            cover,
            score: gain as f64,
            tie: false,
        });
    }
    finish(k, assignment, trace)
}

fn greedy(
    instance: &ProblemInstance,
    weight: impl Fn(&GreedyState, u32) -> f64,
) -> AlgorithmOutcome {
    let k = instance.k();
    let mut state = GreedyState::new(instance);
    let mut assignment = Vec::with_capacity(instance.num_subsets());
    let mut trace = Vec::with_capacity(instance.num_subsets());
    for (j, areas) in instance.subsets().enumerate() {
        let scores = state.cover_scores(areas, |v| weight(&state, v));
        let (cover, tie) = argmax_lowest(&scores);
        state.assign(areas, cover);
        assignment.push(cover);
        trace.push(TraceEntry {
            subset: j,
            cover,
            score: scores[cover as usize],
            tie,
        });
    }
    finish(k, assignment, trace)
}

fn finish(k: usize, assignment: Vec<u32>, trace: Vec<TraceEntry>) -> AlgorithmOutcome {
    AlgorithmOutcome {
        partition: Partition::new(k, assignment).expect("covers drawn from 0..k"),
        trace,
    }
}

/// Subset `j` joins the cover in which it covers the most areas that cover
/// does not already contain.
pub fn distributed_greedy_partition(instance: &ProblemInstance) -> AlgorithmOutcome {
    greedy(instance, |_, _| 1.0)
}

/// Subset `j` joins the cover maximizing the sum of `(1 - 1/k)^(y_v - 1)`
/// over its areas not yet covered there. This is the conditional-expectation
/// derandomization of [`randomized_partition`]: each step picks the cover
/// with the largest expected final objective given all decisions so far, so
/// the result is never below [`expected_randomized_objective`].
pub fn centralized_greedy_partition(instance: &ProblemInstance) -> AlgorithmOutcome {
    let powers = survival_powers(
        instance.k(),
        instance.area_degrees().into_iter().max().unwrap_or(0),
    );
    greedy(instance, |state, v| powers[state.remaining(v) as usize - 1])
}

/// `(1 - 1/k)^e` for `e` in `0..=max_exp`, by repeated multiplication so the
/// same exponent always yields the same bits.
pub fn survival_powers(k: usize, max_exp: u32) -> Vec<f64> {
    let q = 1.0 - 1.0 / k as f64;
    let mut powers = Vec::with_capacity(max_exp as usize + 1);
    let mut p = 1.0;
    powers.push(p);
    for _ in 0..max_exp {
        p *= q;
        powers.push(p);
    }
    powers
}

/// Expected number of covers containing an area held by `n_v` subsets under
/// uniform random assignment: `k - k(1 - 1/k)^n_v`.
pub fn expected_area_cover_count(k: usize, n_v: u32) -> f64 {
    let powers = survival_powers(k, n_v);
    k as f64 - k as f64 * powers[n_v as usize]
}

/// Exact expected objective of [`randomized_partition`]:
/// `sum_v (k - k(1 - 1/k)^N_v)`.
pub fn expected_randomized_objective(instance: &ProblemInstance) -> f64 {
    let degrees = instance.area_degrees();
    let k = instance.k() as f64;
    let powers = survival_powers(instance.k(), degrees.iter().copied().max().unwrap_or(0));
    degrees.iter().map(|&n| k - k * powers[n as usize]).sum()
}
