//! Slot-based message-passing simulation of the distributed greedy protocol
//! on a 2-D deployment.
//!
//! Preprocessing (slot 0): every sensor broadcasts a HELLO carrying its areas
//! and its distances to them, reaching twice the distance of its furthest
//! area. From the HELLOs it hears, a sensor sets its decision radius `d_j` to
//! the largest distance between a shared area and a sensor sharing it,
//! floored at its own HELLO radius.
//!
//! Partition phase: sensor `j` (0-based) decides at slot `j + 1`. It keeps a
//! k × |S_j| matrix of ones, zeroes entry `(i, v)` for every DECISION it has
//! received saying cover `i` now monitors `v`, joins the row with the largest
//! sum (lowest index on ties) and broadcasts its DECISION within `d_j`.
//!
//! All reach tests compare squared distances with closed balls, so no square
//! roots are taken.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::Rng;

use crate::algorithms::{AlgorithmOutcome, TraceEntry};
use crate::generate::seed_rng;
use crate::{Error, Partition, ProblemInstance, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSpec {
    pub position: Point,
    pub sensing_radius: f64,
}

/// Sensor and area positions on the plane. A sensor monitors every area
/// within its sensing radius (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    sensors: Vec<SensorSpec>,
    areas: Vec<Point>,
}

impl Deployment {
    pub fn new(sensors: Vec<SensorSpec>, areas: Vec<Point>) -> Result<Self> {
        if sensors.is_empty() {
            return Err(Error::NoSubsets);
        }
        if areas.is_empty() {
            return Err(Error::NoAreas);
        }
        let finite = |p: &Point| p.x.is_finite() && p.y.is_finite();
        for (j, s) in sensors.iter().enumerate() {
            if !finite(&s.position) || !s.sensing_radius.is_finite() || s.sensing_radius < 0.0 {
                return Err(Error::InvalidDeployment(format!(
                    "sensor {j} has a non-finite position or invalid sensing radius"
                )));
            }
        }
        if let Some(v) = areas.iter().position(|p| !finite(p)) {
            return Err(Error::InvalidDeployment(format!(
                "area {v} has a non-finite position"
            )));
        }
        Ok(Deployment { sensors, areas })
    }

    pub fn sensors(&self) -> &[SensorSpec] {
        &self.sensors
    }

    pub fn areas(&self) -> &[Point] {
        &self.areas
    }

    /// S_j for every sensor: areas within its sensing radius, ascending.
    pub fn coverage_sets(&self) -> Vec<Vec<u32>> {
        self.sensors
            .iter()
            .map(|s| {
                let r_sq = s.sensing_radius * s.sensing_radius;
                (0..self.areas.len() as u32)
                    .filter(|&v| s.position.dist_sq(self.areas[v as usize]) <= r_sq)
                    .collect()
            })
            .collect()
    }
}

/// The abstract instance induced by the sensing radii. Sensor `j` becomes
/// subset `j` and area `v` stays area `v`.
pub fn derive_instance(deployment: &Deployment, k: usize) -> Result<ProblemInstance> {
    ProblemInstance::new(deployment.areas.len(), k, deployment.coverage_sets())
}

/// Sensors and areas uniform on the unit square, all sensors with the same
/// sensing radius.
pub fn random_deployment(
    num_sensors: usize,
    num_areas: usize,
    sensing_radius: f64,
    seed: u64,
) -> Result<Deployment> {
    let mut rng = seed_rng(seed);
    let mut point = || Point::new(rng.gen::<f64>(), rng.gen::<f64>());
    let sensors = (0..num_sensors)
        .map(|_| SensorSpec {
            position: point(),
            sensing_radius,
        })
        .collect();
    let areas = (0..num_areas).map(|_| point()).collect();
    Deployment::new(sensors, areas)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MessageKind {
    /// Monitored areas with the squared distance to each.
    Hello { areas: Vec<(u32, f64)> },
    /// The sender joined `cover`, which now monitors `areas`.
    Decision { cover: u32, areas: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub sender: usize,
    pub kind: MessageKind,
    pub slot: u64,
    pub radius_sq: f64,
}

/// A deployment after the HELLO exchange.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    deployment: Deployment,
    coverage: Vec<Vec<u32>>,
    hello_radius_sq: Vec<f64>,
    broadcast_radius_sq: Vec<f64>,
    hellos: Vec<Message>,
}

/// Runs the two-step HELLO exchange and fixes every sensor's `d_j`.
///
/// A sensor with no areas broadcasts with radius 0 and gets `d_j = 0`.
pub fn preprocess(deployment: &Deployment) -> Preprocessed {
    let coverage = deployment.coverage_sets();
    let sensors = &deployment.sensors;
    let areas = &deployment.areas;

    let hellos: Vec<Message> = sensors
        .iter()
        .zip(&coverage)
        .enumerate()
        .map(|(j, (s, cov))| {
            let dists: Vec<(u32, f64)> = cov
                .iter()
                .map(|&v| (v, s.position.dist_sq(areas[v as usize])))
                .collect();
            let far_sq = dists.iter().map(|&(_, d)| d).fold(0.0, f64::max);
            Message {
                sender: j,
                kind: MessageKind::Hello { areas: dists },
                slot: 0,
                // (2 · far)^2
                radius_sq: 4.0 * far_sq,
            }
        })
        .collect();
    let hello_radius_sq: Vec<f64> = hellos.iter().map(|m| m.radius_sq).collect();

    let mut broadcast_radius_sq = hello_radius_sq.clone();
    for (j, receiver) in sensors.iter().enumerate() {
        for hello in &hellos {
            if hello.sender == j
                || sensors[hello.sender].position.dist_sq(receiver.position) > hello.radius_sq
            {
                continue;
            }
            let MessageKind::Hello { areas: theirs } = &hello.kind else {
                unreachable!()
            };
            for &(v, d_sq) in theirs {
                if coverage[j].binary_search(&v).is_ok() && d_sq > broadcast_radius_sq[j] {
                    broadcast_radius_sq[j] = d_sq;
                }
            }
        }
    }

    Preprocessed {
        deployment: deployment.clone(),
        coverage,
        hello_radius_sq,
        broadcast_radius_sq,
        hellos,
    }
}

impl Preprocessed {
    pub fn deployment(&self) -> &Deployment {
        &self.deployment
    }

    pub fn coverage(&self) -> &[Vec<u32>] {
        &self.coverage
    }

    pub fn hellos(&self) -> &[Message] {
        &self.hellos
    }

    /// Squared step-1 radius, `(2 · max_v dist(j, v))^2`.
    pub fn hello_radius_sq(&self, j: usize) -> f64 {
        self.hello_radius_sq[j]
    }

    /// Squared decision radius `d_j^2`.
    pub fn broadcast_radius_sq(&self, j: usize) -> f64 {
        self.broadcast_radius_sq[j]
    }

    /// Replaces the decision radii, bypassing preprocessing. Used to build
    /// deployments whose DECISIONs do not reach every neighbor.
    pub fn with_broadcast_radii_sq(mut self, radii_sq: Vec<f64>) -> Result<Self> {
        if radii_sq.len() != self.broadcast_radius_sq.len() {
            return Err(Error::InvalidDeployment(format!(
                "expected {} radii, got {}",
                self.broadcast_radius_sq.len(),
                radii_sq.len()
            )));
        }
        self.broadcast_radius_sq = radii_sq;
        Ok(self)
    }

    /// Sensors sharing at least one area with `j`, ascending, excluding `j`.
    pub fn neighbors(&self, j: usize) -> Vec<usize> {
        let mine = &self.coverage[j];
        (0..self.coverage.len())
            .filter(|&o| o != j && shares_area(mine, &self.coverage[o]))
            .collect()
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let s = &self.deployment.sensors;
        s[from].position.dist_sq(s[to].position) <= self.broadcast_radius_sq[from]
    }

    /// Ordered pairs `(j, j')` of sensors sharing an area where `j'` lies
    /// outside `j`'s decision radius.
    pub fn reachability_violations(&self) -> Vec<(usize, usize)> {
        (0..self.coverage.len())
            .flat_map(|j| {
                self.neighbors(j)
                    .into_iter()
                    .filter(move |&o| !self.reaches(j, o))
                    .map(move |o| (j, o))
            })
            .collect()
    }
}

fn shares_area(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delivery {
    /// Broadcasts arrive in the slot they are sent, before the next sensor
    /// decides.
    Instant,
    /// Broadcasts arrive this many slots later. A sensor waking in the
    /// arrival slot decides before the message is processed.
    Delayed(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub k: usize,
    pub delivery: Delivery,
}

impl SimConfig {
    pub fn new(k: usize) -> Self {
        SimConfig {
            k,
            delivery: Delivery::Instant,
        }
    }
}

/// What happened at one sensor's decision slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    pub sensor: usize,
    pub cover: u32,
    pub row_sums: Vec<u32>,
    pub tie: bool,
    /// Sensors the DECISION reached.
    pub recipients: Vec<usize>,
    /// Later-deciding neighbors that did not get this DECISION before their
    /// own slot.
    pub undelivered: Vec<usize>,
    /// Latest slot of any DECISION this sensor used; always below `slot`.
    pub latest_input_slot: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub outcome: AlgorithmOutcome,
    pub slots: Vec<SlotRecord>,
    pub hello_count: usize,
    pub decision_count: usize,
}

impl SimOutcome {
    /// Total undelivered (sender, neighbor) DECISION pairs.
    pub fn undelivered_count(&self) -> usize {
        self.slots.iter().map(|s| s.undelivered.len()).sum()
    }
}

struct SensorState {
    matrix: Vec<u8>,
    decided: bool,
    latest_input_slot: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Action {
    Wake(usize),
    Deliver { message: usize, to: usize },
}

/// Slot, then wakes before deliveries, then scheduling order.
type Event = Reverse<(u64, u8, u64, Action)>;

pub fn run_partition_phase(pre: &Preprocessed, config: &SimConfig) -> Result<SimOutcome> {
    let k = config.k;
    if k < 2 {
        return Err(Error::TooFewCovers(k));
    }
    let n = pre.coverage.len();
    let positions: Vec<Point> = pre.deployment.sensors.iter().map(|s| s.position).collect();
    let delay = match config.delivery {
        Delivery::Instant => 0,
        Delivery::Delayed(d) => d,
    };
    let decision_slot = |j: usize| j as u64 + 1;

    let mut sensors: Vec<SensorState> = pre
        .coverage
        .iter()
        .map(|cov| SensorState {
            matrix: vec![1; k * cov.len()],
            decided: false,
            latest_input_slot: None,
        })
        .collect();

    let mut queue: BinaryHeap<Event> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |queue: &mut BinaryHeap<Event>, slot: u64, order: u8, action: Action| {
        queue.push(Reverse((slot, order, seq, action)));
        seq += 1;
    };
    for j in 0..n {
        push(&mut queue, decision_slot(j), 0, Action::Wake(j));
    }

    let mut messages: Vec<Message> = Vec::with_capacity(n);
    let mut assignment = vec![0u32; n];
    let mut trace = Vec::with_capacity(n);
    let mut slots = Vec::with_capacity(n);

    while let Some(Reverse((slot, _, _, action))) = queue.pop() {
        match action {
            Action::Wake(j) => {
                let width = pre.coverage[j].len();
                let state = &mut sensors[j];
                let row_sums: Vec<u32> = (0..k)
                    .map(|i| {
                        state.matrix[i * width..(i + 1) * width]
                            .iter()
                            .map(|&e| e as u32)
                            .sum()
                    })
                    .collect();
                let mut cover = 0;
                for i in 1..k {
                    if row_sums[i] > row_sums[cover] {
                        cover = i;
                    }
                }
                let tie = row_sums
                    .iter()
                    .enumerate()
                    .any(|(i, &s)| i != cover && s == row_sums[cover]);
                state.decided = true;
                assignment[j] = cover as u32;

                let radius_sq = pre.broadcast_radius_sq[j];
                let recipients: Vec<usize> = (0..n)
                    .filter(|&o| o != j && positions[j].dist_sq(positions[o]) <= radius_sq)
                    .collect();
                let undelivered = pre
                    .neighbors(j)
                    .into_iter()
                    .filter(|&o| o > j)
                    .filter(|&o| {
                        recipients.binary_search(&o).is_err() || slot + delay >= decision_slot(o)
                    })
                    .collect();

                let message = messages.len();
                messages.push(Message {
                    sender: j,
                    kind: MessageKind::Decision {
                        cover: cover as u32,
                        areas: pre.coverage[j].clone(),
                    },
                    slot,
                    radius_sq,
                });
                for &to in &recipients {
                    push(&mut queue, slot + delay, 1, Action::Deliver { message, to });
                }

                trace.push(TraceEntry {
                    subset: j,
                    cover: cover as u32,
                    score: row_sums[cover] as f64,
                    tie,
                });
                slots.push(SlotRecord {
                    slot,
                    sensor: j,
                    cover: cover as u32,
                    row_sums,
                    tie,
                    recipients,
                    undelivered,
                    latest_input_slot: sensors[j].latest_input_slot,
                });
            }
            Action::Deliver { message, to } => {
                let state = &mut sensors[to];
                if state.decided {
                    continue;
                }
                let msg = &messages[message];
                let MessageKind::Decision { cover, areas } = &msg.kind else {
                    unreachable!()
                };
                let mine = &pre.coverage[to];
                let width = mine.len();
                let mut used = false;
                for (c, v) in mine.iter().enumerate() {
                    if areas.binary_search(v).is_ok() {
                        state.matrix[*cover as usize * width + c] = 0;
                        used = true;
                    }
                }
                if used {
                    state.latest_input_slot = Some(msg.slot);
                }
            }
        }
    }

    Ok(SimOutcome {
        outcome: AlgorithmOutcome {
            partition: Partition::new(k, assignment)?,
            trace,
        },
        slots,
        hello_count: pre.hellos.len(),
        decision_count: messages.len(),
    })
}
