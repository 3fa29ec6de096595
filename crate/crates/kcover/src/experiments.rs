//! Parameter sweeps over generated instances.
//!
//! Cells run in parallel but results come back in grid order, and every
//! random draw hangs off one base seed, so the emitted tables are the same
//! bytes on every run. Wall times are carried in the rows for the summary
//! but never written to the tables.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use kcover_core::generate::derive_seed;
use kcover_core::longevity::{longevity_search, BatteryModel, LongevityResult};
use kcover_core::{
    evaluate, expected_randomized_objective, generate_instance, generate_nested, upper_bound,
    Algorithm, ProblemInstance,
};

use crate::error::Result;

/// The nine (n, |E|) rows of the performance table; |S| = 1000, k = 10.
pub const TABLE2_GRID: [(usize, usize); 9] = [
    (1000, 5000),
    (1000, 10000),
    (1000, 20000),
    (500, 5000),
    (500, 10000),
    (500, 20000),
    (2000, 5000),
    (2000, 10000),
    (2000, 20000),
];
pub const TABLE2_AREAS: usize = 1000;
pub const TABLE2_K: usize = 10;
pub const TABLE2_TRIALS: usize = 10;

/// k, |S|, n, |E| of the per-area fairness configuration.
pub const FAIRNESS_CONFIG: (usize, usize, usize, usize) = (10, 200, 100, 2000);
pub const FAIRNESS_TRIALS: usize = 100;

pub const LONGEVITY_AREAS: usize = 50;
pub const LONGEVITY_SUBSETS: usize = 100;
pub const LONGEVITY_EDGES: [usize; 4] = [250, 500, 1000, 2000];
pub const LONGEVITY_SEEDS: usize = 10;

/// One generated instance scored by all three algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub seed: u64,
    pub bound: u64,
    /// Indexed like [`Algorithm::ALL`].
    pub objective: [u64; 3],
    pub size_range_ratio: [f64; 3],
    pub expected_random: f64,
}

/// Averages over the instances of one parameter cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub num_areas: usize,
    pub num_subsets: usize,
    pub num_edges: usize,
    pub k: usize,
    pub seed: u64,
    pub bound: u64,
    /// Mean objective per algorithm, indexed like [`Algorithm::ALL`].
    pub objective: [f64; 3],
    /// Mean objective over the bound.
    pub ratio: [f64; 3],
    pub size_range_ratio: [f64; 3],
    pub expected_random: f64,
    pub instances: Vec<InstanceResult>,
    pub wall_time: Duration,
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    values.sum::<f64>() / n.max(1) as f64
}

pub fn score_instance(instance: &ProblemInstance, seed: u64) -> Result<InstanceResult> {
    let mut objective = [0; 3];
    let mut size_range_ratio = [0.0; 3];
    for (a, alg) in Algorithm::ALL.into_iter().enumerate() {
        let outcome = alg.run(instance, derive_seed(seed, 0));
        let report = evaluate(instance, &outcome.partition)?;
        objective[a] = report.objective;
        size_range_ratio[a] = report.size_range_ratio;
    }
    Ok(InstanceResult {
        seed,
        bound: upper_bound(instance).value,
        objective,
        size_range_ratio,
        expected_random: expected_randomized_objective(instance),
    })
}

/// One row per `(n, |E|)` in `grid`, each averaging `trials` instances with
/// `num_areas` areas and `k` covers.
pub fn sweep(
    grid: &[(usize, usize)],
    num_areas: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let cells: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|r| (0..trials).map(move |t| (r, t)))
        .collect();
    let results: Vec<Result<(InstanceResult, Duration)>> = cells
        .par_iter()
        .map(|&(r, t)| {
            let start = Instant::now();
            let (n, edges) = grid[r];
            let inst_seed = derive_seed(derive_seed(seed, r as u64), t as u64);
            let instance = generate_instance(num_areas, n, edges, k, inst_seed)?;
            Ok((score_instance(&instance, inst_seed)?, start.elapsed()))
        })
        .collect();

    let mut results = results.into_iter();
    let mut rows = Vec::with_capacity(grid.len());
    for (r, &(n, edges)) in grid.iter().enumerate() {
        let mut instances = Vec::with_capacity(trials);
        let mut wall_time = Duration::ZERO;
        for _ in 0..trials {
            let (result, elapsed) = results.next().expect("one result per cell")?;
            instances.push(result);
            wall_time += elapsed;
        }
        let objective: [f64; 3] =
            std::array::from_fn(|a| mean(instances.iter().map(|i| i.objective[a] as f64)));
        let bound = instances.first().map_or(0, |i| i.bound);
        rows.push(SweepRow {
            num_areas,
            num_subsets: n,
            num_edges: edges,
            k,
            seed: derive_seed(seed, r as u64),
            bound,
            objective,
            ratio: objective.map(|o| o / bound.max(1) as f64),
            size_range_ratio: std::array::from_fn(|a| {
                mean(instances.iter().map(|i| i.size_range_ratio[a]))
            }),
            expected_random: mean(instances.iter().map(|i| i.expected_random)),
            instances,
            wall_time,
        });
    }
    Ok(rows)
}

pub fn table2_sweep(trials: usize, seed: u64) -> Result<Vec<SweepRow>> {
    sweep(&TABLE2_GRID, TABLE2_AREAS, TABLE2_K, trials, seed)
}

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "num_areas",
        "num_subsets",
        "num_edges",
        "k",
        "seed",
        "trials",
        "opt_bound",
        "random",
        "dgreedy",
        "cgreedy",
        "expected_random",
        "random_ratio",
        "dgreedy_ratio",
        "cgreedy_ratio",
        "random_size_range",
        "dgreedy_size_range",
        "cgreedy_size_range",
    ])?;
    for r in rows {
        let mut record = vec![
            r.num_areas.to_string(),
            r.num_subsets.to_string(),
            r.num_edges.to_string(),
            r.k.to_string(),
            r.seed.to_string(),
            r.instances.len().to_string(),
            r.bound.to_string(),
        ];
        record.extend(r.objective.iter().map(f64::to_string));
        record.push(r.expected_random.to_string());
        record.extend(r.ratio.iter().map(f64::to_string));
        record.extend(r.size_range_ratio.iter().map(f64::to_string));
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessPoint {
    pub area: usize,
    pub n_v: u32,
    /// Mean of l_v over the runs.
    pub mean_l: f64,
    /// Population standard deviation of l_v over the runs.
    pub std_l: f64,
    /// mean l_v / k.
    pub coverage: f64,
    /// min(N_v / k, 1): the largest possible l_v / k.
    pub optimum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessCurve {
    pub algorithm: Algorithm,
    pub runs: usize,
    /// Every area, in id order.
    pub points: Vec<FairnessPoint>,
    /// min over areas with N_v >= 1 of mean l_v / min(k, N_v).
    pub min_ratio: f64,
    /// Mean of the same ratio over those areas.
    pub mean_ratio: f64,
}

/// Per-area coverage of each algorithm on one instance. The randomized curve
/// averages `trials` runs; the greedy curves come from their single run.
pub fn fairness_study(
    instance: &ProblemInstance,
    trials: usize,
    seed: u64,
) -> Result<Vec<FairnessCurve>> {
    let k = instance.k();
    let degrees = instance.area_degrees();
    Algorithm::ALL
        .into_iter()
        .map(|alg| {
            let runs = if alg.is_deterministic() {
                1
            } else {
                trials.max(1)
            };
            let mut sum = vec![0.0; instance.num_areas()];
            let mut sum_sq = vec![0.0; instance.num_areas()];
            for t in 0..runs {
                let partition = alg.run(instance, derive_seed(seed, t as u64)).partition;
                let report = evaluate(instance, &partition)?;
                for (v, &l) in report.per_area_cover_count.iter().enumerate() {
                    sum[v] += l as f64;
                    sum_sq[v] += (l as f64) * (l as f64);
                }
            }
            let points: Vec<FairnessPoint> = (0..instance.num_areas())
                .map(|v| {
                    let mean_l = sum[v] / runs as f64;
                    let var = (sum_sq[v] / runs as f64 - mean_l * mean_l).max(0.0);
                    FairnessPoint {
                        area: v,
                        n_v: degrees[v],
                        mean_l,
                        std_l: var.sqrt(),
                        coverage: mean_l / k as f64,
                        optimum: (degrees[v] as f64 / k as f64).min(1.0),
                    }
                })
                .collect();
            let ratios: Vec<f64> = points
                .iter()
                .filter(|p| p.n_v > 0)
                .map(|p| p.mean_l / (k as u32).min(p.n_v) as f64)
                .collect();
            Ok(FairnessCurve {
                algorithm: alg,
                runs,
                min_ratio: ratios.iter().copied().reduce(f64::min).unwrap_or(0.0),
                mean_ratio: mean(ratios.iter().copied()),
                points,
            })
        })
        .collect()
}

pub fn write_fairness_csv(curves: &[FairnessCurve], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "algorithm",
        "runs",
        "area",
        "n_v",
        "mean_l",
        "std_l",
        "coverage",
        "optimum",
    ])?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                c.algorithm.name().to_string(),
                c.runs.to_string(),
                (p.area + 1).to_string(),
                p.n_v.to_string(),
                p.mean_l.to_string(),
                p.std_l.to_string(),
                p.coverage.to_string(),
                p.optimum.to_string(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// (|S|, n, |E|, k) cells of the cover-size study.
pub fn cover_range_grid() -> Vec<(usize, usize, usize, usize)> {
    let mut grid = Vec::new();
    for edges in [500, 1000, 2000] {
        for k in [2, 5, 10, 20] {
            grid.push((200, 100, edges, k));
        }
    }
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverRangeRow {
    pub num_areas: usize,
    pub num_subsets: usize,
    pub num_edges: usize,
    pub k: usize,
    pub trials: usize,
    /// Mean smallest-over-largest cover size per algorithm.
    pub mean: [f64; 3],
    /// Worst instance per algorithm.
    pub min: [f64; 3],
}

pub fn cover_range_study(
    grid: &[(usize, usize, usize, usize)],
    trials: usize,
    seed: u64,
) -> Result<Vec<CoverRangeRow>> {
    grid.par_iter()
        .enumerate()
        .map(|(r, &(num_areas, n, edges, k))| {
            let mut results = Vec::with_capacity(trials);
            for t in 0..trials {
                let inst_seed = derive_seed(derive_seed(seed, r as u64), t as u64);
                let instance = generate_instance(num_areas, n, edges, k, inst_seed)?;
                results.push(score_instance(&instance, inst_seed)?);
            }
            Ok(CoverRangeRow {
                num_areas,
                num_subsets: n,
                num_edges: edges,
                k,
                trials,
                mean: std::array::from_fn(|a| mean(results.iter().map(|i| i.size_range_ratio[a]))),
                min: std::array::from_fn(|a| {
                    results
                        .iter()
                        .map(|i| i.size_range_ratio[a])
                        .fold(f64::INFINITY, f64::min)
                }),
            })
        })
        .collect()
}

pub fn write_cover_range_csv(rows: &[CoverRangeRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "num_areas",
        "num_subsets",
        "num_edges",
        "k",
        "trials",
        "random_mean",
        "dgreedy_mean",
        "cgreedy_mean",
        "random_min",
        "dgreedy_min",
        "cgreedy_min",
    ])?;
    for r in rows {
        let mut record = vec![
            r.num_areas.to_string(),
            r.num_subsets.to_string(),
            r.num_edges.to_string(),
            r.k.to_string(),
            r.trials.to_string(),
        ];
        record.extend(r.mean.iter().map(f64::to_string));
        record.extend(r.min.iter().map(f64::to_string));
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongevityRow {
    pub num_areas: usize,
    pub num_subsets: usize,
    pub num_edges: usize,
    /// Seed of the nested instance family.
    pub seed: u64,
    pub algorithm: Algorithm,
    pub result: LongevityResult,
}

/// For each seed, a nested family over `edge_levels` (each level adds edges
/// to the previous one), searched for the largest useful `k` by every
/// algorithm.
pub fn longevity_study(
    num_areas: usize,
    num_subsets: usize,
    edge_levels: &[usize],
    seeds: usize,
    seed: u64,
    model: &BatteryModel,
) -> Result<Vec<LongevityRow>> {
    let per_seed: Vec<Result<Vec<LongevityRow>>> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let family_seed = derive_seed(seed, s as u64);
            let family = generate_nested(num_areas, num_subsets, edge_levels, 2, family_seed)?;
            let mut rows = Vec::new();
            for (instance, &edges) in family.iter().zip(edge_levels) {
                for alg in Algorithm::ALL {
                    rows.push(LongevityRow {
                        num_areas,
                        num_subsets,
                        num_edges: edges,
                        seed: family_seed,
                        algorithm: alg,
                        result: longevity_search(instance, alg, family_seed, model)?,
                    });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_longevity_csv(rows: &[LongevityRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "num_areas",
        "num_subsets",
        "num_edges",
        "seed",
        "algorithm",
        "achieved_k",
        "met_threshold",
        "lifetime",
        "baseline_lifetime",
        "ratio",
        "burst_bonus",
    ])?;
    for r in rows {
        w.write_record([
            r.num_areas.to_string(),
            r.num_subsets.to_string(),
            r.num_edges.to_string(),
            r.seed.to_string(),
            r.algorithm.name().to_string(),
            r.result.achieved_k.to_string(),
            r.result.met_threshold.to_string(),
            r.result.lifetime.to_string(),
            r.result.baseline_lifetime.to_string(),
            r.result.ratio.to_string(),
            r.result.burst_bonus.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_deterministic_and_bounded() {
        let grid = [(50, 200), (80, 400)];
        let a = sweep(&grid, 60, 4, 3, 9).unwrap();
        let b = sweep(&grid, 60, 4, 3, 9).unwrap();
        let strip = |rows: Vec<SweepRow>| {
            rows.into_iter()
                .map(|r| SweepRow {
                    wall_time: Duration::ZERO,
                    ..r
                })
                .collect::<Vec<_>>()
        };
        let (a, b) = (strip(a), strip(b));
        assert_eq!(a, b);
        for row in &a {
            assert_eq!(row.instances.len(), 3);
            for i in &row.instances {
                assert!(i.objective.iter().all(|&o| o <= i.bound));
            }
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        write_sweep_csv(&a, &mut x).unwrap();
        write_sweep_csv(&b, &mut y).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn greedy_fairness_curves_are_single_runs() {
        let inst = generate_instance(40, 30, 300, 5, 2).unwrap();
        let curves = fairness_study(&inst, 20, 0).unwrap();
        assert_eq!(curves.len(), 3);
        assert_eq!(curves[0].runs, 20);
        for c in &curves[1..] {
            assert_eq!(c.runs, 1);
            assert!(c.points.iter().all(|p| p.std_l == 0.0));
        }
        for c in &curves {
            assert!(c.points.iter().all(|p| p.coverage <= p.optimum + 1e-12));
            assert!(c.min_ratio <= c.mean_ratio);
        }
    }

    #[test]
    fn identical_pair_has_balanced_covers() {
        let inst = ProblemInstance::new(3, 2, vec![vec![0, 1, 2]; 2]).unwrap();
        let r = score_instance(&inst, 0).unwrap();
        assert_eq!(r.size_range_ratio[1], 1.0);
        assert_eq!(r.size_range_ratio[2], 1.0);
    }

    #[test]
    fn longevity_study_covers_every_cell() {
        let model = BatteryModel {
            battery: 5,
            ..BatteryModel::default()
        };
        let rows = longevity_study(10, 20, &[40, 80], 2, 3, &model).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert!(rows.iter().all(|r| r.result.achieved_k >= 1));
    }
}
