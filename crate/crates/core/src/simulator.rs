//! Discrete-event simulation of a one-piece-flow hanger line.
//!
//! Stages run in plan order. Stage `i` has `s_i` identical servers fed by a
//! single FIFO queue; each server spends the full task time on a piece, so a
//! stage's effective cycle time is `t_i / s_i`. Servers are non-preemptive.
//! With a bounded queue capacity a server that finishes while the next queue
//! is full holds its piece (blocking after service) until a slot frees up.
//!
//! Events at equal times are processed by stage index, then piece id, then
//! creation order, so a fixed seed replays the same event sequence bit for
//! bit.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, bottlenecks, to_f64, Allocation, Exact, ModelError, ProcessPlan, TaskId};
use crate::robust::{self, Deviations, RobustError};

pub const DEFAULT_SAMPLE_INTERVAL: f64 = 60.0;
const UTILIZATION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("simulation horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("warmup {warmup} must be non-negative and shorter than the horizon {horizon}")]
    BadWarmup { warmup: f64, horizon: f64 },
    #[error("queue capacity must be at least 1")]
    ZeroCapacity,
    #[error("{what} must be positive and finite")]
    BadParameter { what: &'static str },
    #[error("simulation result does not belong to this plan and allocation: {0}")]
    Mismatch(String),
    #[error("static verification needs a deterministic service model")]
    NotDeterministic,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Robust(#[from] RobustError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServiceModel {
    /// Every service takes exactly the task time.
    Deterministic,
    /// Each service is drawn uniformly from the task's cycle-time interval,
    /// scaled from the stage's effective time to a single server. Without an
    /// explicit table the plan's own task deviations are used.
    UniformInterval {
        #[serde(with = "model::serde_exact")]
        alpha: Exact,
        deviations: Option<Deviations>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Release {
    /// Raw material is always waiting at the first stage.
    Saturated,
    /// One piece is released into the first queue every `interval` seconds.
    Paced { interval: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub horizon: f64,
    pub warmup: f64,
    pub service: ServiceModel,
    pub seed: u64,
    /// Per-stage queue limit; `None` is unbounded.
    pub queue_capacity: Option<u32>,
    pub release: Release,
    /// Hanger transfer time between consecutive stages.
    pub transfer_delay: f64,
    pub sample_interval: f64,
    /// Keep a per-piece event log in the result.
    #[serde(default)]
    pub record_trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            horizon: 8.0 * 3600.0,
            warmup: 3600.0,
            service: ServiceModel::Deterministic,
            seed: 0,
            queue_capacity: None,
            release: Release::Saturated,
            transfer_delay: 0.0,
            sample_interval: DEFAULT_SAMPLE_INTERVAL,
            record_trace: false,
        }
    }
}

impl SimConfig {
    pub fn hours(horizon_h: f64, warmup_h: f64) -> Self {
        SimConfig {
            horizon: horizon_h * 3600.0,
            warmup: warmup_h * 3600.0,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(SimError::NonPositiveHorizon(self.horizon));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.horizon) {
            return Err(SimError::BadWarmup {
                warmup: self.warmup,
                horizon: self.horizon,
            });
        }
        if self.queue_capacity == Some(0) {
            return Err(SimError::ZeroCapacity);
        }
        if !(self.transfer_delay >= 0.0 && self.transfer_delay.is_finite()) {
            return Err(SimError::BadParameter { what: "transfer delay" });
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return Err(SimError::BadParameter {
                what: "sample interval",
            });
        }
        if let Release::Paced { interval } = self.release {
            if !(interval > 0.0 && interval.is_finite()) {
                return Err(SimError::BadParameter {
                    what: "release interval",
                });
            }
        }
        Ok(())
    }
}

/// Queue lengths and piece counters sampled every `sample_interval` seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WipSeries {
    pub times: Vec<f64>,
    /// `queues[k][j]`: pieces waiting in front of stage `k` at `times[j]`.
    pub queues: Vec<Vec<u32>>,
    pub released: Vec<u64>,
    pub completed: Vec<u64>,
    pub in_flight: Vec<u64>,
}

impl WipSeries {
    /// Series for the queue feeding `stage`, as `f64` for fitting.
    pub fn queue(&self, stage: usize) -> Vec<f64> {
        self.queues[stage].iter().map(|&q| q as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conservation {
    pub released: u64,
    pub completed: u64,
    pub in_flight: u64,
}

impl Conservation {
    pub fn holds(&self) -> bool {
        self.released == self.completed + self.in_flight
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    /// Piece joined the queue in front of the stage.
    Enqueue,
    Start,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub time: f64,
    pub stage: usize,
    pub piece: u64,
    pub kind: TraceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Task id of each stage, in line order.
    pub stage_tasks: Vec<TaskId>,
    pub stations: Vec<u32>,
    pub deterministic: bool,
    pub horizon: f64,
    pub warmup: f64,
    /// Completions after warmup.
    pub completed: u64,
    /// Pieces per hour over the post-warmup window.
    pub throughput: f64,
    pub wip_timeseries: WipSeries,
    /// Busy fraction of each stage's servers over the post-warmup window.
    pub utilization: Vec<f64>,
    /// Counters at the horizon.
    pub conservation: Conservation,
    pub max_in_flight: u64,
    /// FNV-1a digest of the processed event sequence.
    pub trace_digest: u64,
    /// Present when `record_trace` was set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEvent>>,
}

impl SimResult {
    pub fn stage_of(&self, task: TaskId) -> Option<usize> {
        self.stage_tasks.iter().position(|&t| t == task)
    }
}

#[derive(Debug, Clone, Copy)]
enum ServiceDist {
    Fixed(f64),
    Uniform(f64, f64),
}

impl ServiceDist {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ServiceDist::Fixed(d) => d,
            ServiceDist::Uniform(lo, hi) => rng.gen_range(lo..=hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Server {
    Idle,
    Busy(u64),
    Blocked(u64),
}

struct Stage {
    servers: Vec<Server>,
    queue: VecDeque<u64>,
    /// Pieces in transit toward this stage's queue.
    inbound: u32,
    /// Blocked servers, oldest first.
    blocked: VecDeque<usize>,
    dist: ServiceDist,
    busy_time: f64,
}

#[derive(Debug, Clone, Copy)]
enum EventKind {
    Release,
    Arrival,
    ServiceEnd { server: usize },
}

impl EventKind {
    fn tag(&self) -> u64 {
        match self {
            EventKind::Release => 1,
            EventKind::Arrival => 2,
            EventKind::ServiceEnd { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    stage: usize,
    piece: u64,
    seq: u64,
    kind: EventKind,
}

impl Event {
    fn key(&self) -> (OrdF64, usize, u64, u64) {
        (OrdF64(self.time), self.stage, self.piece, self.seq)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    stages: Vec<Stage>,
    events: BinaryHeap<Reverse<Event>>,
    seq: u64,
    rng: ChaCha8Rng,
    now: f64,
    next_piece: u64,
    pending_release: u64,
    released: u64,
    completed_total: u64,
    completed_window: u64,
    digest: Fnv,
    series: WipSeries,
    next_sample: u64,
    max_in_flight: u64,
    log: Option<Vec<TraceEvent>>,
}

impl<'a> Engine<'a> {
    fn push(&mut self, time: f64, stage: usize, piece: u64, kind: EventKind) {
        self.seq += 1;
        self.events.push(Reverse(Event {
            time,
            stage,
            piece,
            seq: self.seq,
            kind,
        }));
    }

    fn room(&self, stage: usize) -> bool {
        let s = &self.stages[stage];
        self.cfg
            .queue_capacity
            .is_none_or(|cap| (s.queue.len() as u32 + s.inbound) < cap)
    }

    fn trace(&mut self, tag: u64, stage: usize, piece: u64) {
        self.digest.write(tag);
        self.digest.write(self.now.to_bits());
        self.digest.write(stage as u64);
        self.digest.write(piece);
    }

    fn log(&mut self, kind: TraceKind, stage: usize, piece: u64) {
        if let Some(log) = &mut self.log {
            log.push(TraceEvent {
                time: self.now,
                stage,
                piece,
                kind,
            });
        }
    }

    fn start_service(&mut self, stage: usize, server: usize, piece: u64) {
        let d = self.stages[stage].dist.sample(&mut self.rng);
        let (start, end) = (self.now, self.now + d);
        let lo = start.max(self.cfg.warmup);
        let hi = end.min(self.cfg.horizon);
        let st = &mut self.stages[stage];
        if hi > lo {
            st.busy_time += hi - lo;
        }
        st.servers[server] = Server::Busy(piece);
        self.trace(4, stage, piece);
        self.log(TraceKind::Start, stage, piece);
        self.push(end, stage, piece, EventKind::ServiceEnd { server });
    }

    /// Starts work on every idle server of `stage` that has a piece available.
    fn try_start(&mut self, stage: usize) {
        loop {
            let Some(server) = self.stages[stage].servers.iter().position(|s| *s == Server::Idle) else {
                return;
            };
            let saturated = stage == 0 && matches!(self.cfg.release, Release::Saturated);
            let piece = if saturated {
                let p = self.next_piece;
                self.next_piece += 1;
                self.released += 1;
                self.log(TraceKind::Enqueue, 0, p);
                p
            } else {
                match self.stages[stage].queue.pop_front() {
                    Some(p) => p,
                    None => return,
                }
            };
            self.start_service(stage, server, piece);
            if !saturated {
                if stage == 0 {
                    self.admit_releases();
                } else {
                    self.unblock(stage - 1);
                }
            }
        }
    }

    fn admit_releases(&mut self) {
        while self.pending_release > 0 && self.room(0) {
            self.pending_release -= 1;
            let p = self.next_piece;
            self.next_piece += 1;
            self.released += 1;
            self.stages[0].queue.push_back(p);
            self.log(TraceKind::Enqueue, 0, p);
            self.try_start(0);
        }
    }

    /// Moves the piece from `stage` toward `stage + 1`, reserving a slot.
    fn forward(&mut self, stage: usize, piece: u64) {
        self.stages[stage + 1].inbound += 1;
        let at = self.now + self.cfg.transfer_delay;
        self.push(at, stage + 1, piece, EventKind::Arrival);
    }

    fn unblock(&mut self, stage: usize) {
        while self.room(stage + 1) {
            let Some(server) = self.stages[stage].blocked.pop_front() else {
                return;
            };
            let Server::Blocked(piece) = self.stages[stage].servers[server] else {
                unreachable!("blocked list out of sync");
            };
            self.stages[stage].servers[server] = Server::Idle;
            self.forward(stage, piece);
            self.try_start(stage);
        }
    }

    fn handle(&mut self, ev: Event) {
        self.now = ev.time;
        self.trace(ev.kind.tag(), ev.stage, ev.piece);
        match ev.kind {
            EventKind::Release => {
                self.pending_release += 1;
                self.admit_releases();
                if let Release::Paced { interval } = self.cfg.release {
                    let next = self.now + interval;
                    if next <= self.cfg.horizon {
                        self.push(next, 0, ev.piece + 1, EventKind::Release);
                    }
                }
            }
            EventKind::Arrival => {
                let st = &mut self.stages[ev.stage];
                st.inbound -= 1;
                st.queue.push_back(ev.piece);
                self.log(TraceKind::Enqueue, ev.stage, ev.piece);
                self.try_start(ev.stage);
            }
            EventKind::ServiceEnd { server } => {
                self.log(TraceKind::End, ev.stage, ev.piece);
                let last = ev.stage + 1 == self.stages.len();
                if last {
                    self.completed_total += 1;
                    if self.now > self.cfg.warmup {
                        self.completed_window += 1;
                    }
                    self.stages[ev.stage].servers[server] = Server::Idle;
                    self.try_start(ev.stage);
                } else if self.room(ev.stage + 1) {
                    self.stages[ev.stage].servers[server] = Server::Idle;
                    self.forward(ev.stage, ev.piece);
                    self.try_start(ev.stage);
                } else {
                    let st = &mut self.stages[ev.stage];
                    st.servers[server] = Server::Blocked(ev.piece);
                    st.blocked.push_back(server);
                }
            }
        }
    }

    fn in_flight(&self) -> u64 {
        self.stages
            .iter()
            .map(|s| {
                let occupied = s.servers.iter().filter(|x| **x != Server::Idle).count();
                (s.queue.len() + occupied) as u64 + s.inbound as u64
            })
            .sum()
    }

    fn sample_until(&mut self, limit: f64, inclusive: bool) {
        loop {
            let t = self.next_sample as f64 * self.cfg.sample_interval;
            let due = if inclusive { t <= limit } else { t < limit };
            if !due || t > self.cfg.horizon {
                return;
            }
            for (k, st) in self.stages.iter().enumerate() {
                self.series.queues[k].push(st.queue.len() as u32);
            }
            let in_flight = self.in_flight();
            self.max_in_flight = self.max_in_flight.max(in_flight);
            self.series.times.push(t);
            self.series.released.push(self.released);
            self.series.completed.push(self.completed_total);
            self.series.in_flight.push(in_flight);
            self.next_sample += 1;
        }
    }
}

fn service_dists(plan: &ProcessPlan, allocation: &Allocation, service: &ServiceModel) -> Result<Vec<ServiceDist>, SimError> {
    let counts = allocation.counts_for(plan)?;
    match service {
        ServiceModel::Deterministic => Ok(plan
            .tasks()
            .iter()
            .map(|t| ServiceDist::Fixed(to_f64(t.cycle_time)))
            .collect()),
        ServiceModel::UniformInterval { alpha, deviations } => {
            let owned;
            let deviations = match deviations {
                Some(d) => d,
                None => {
                    owned = robust::plan_deviations(plan);
                    &owned
                }
            };
            let intervals = robust::task_intervals(plan, allocation, deviations, *alpha)?;
            Ok(intervals
                .iter()
                .zip(&counts)
                .map(|(ti, &s)| {
                    // Interval is on the stage's effective time; one server
                    // takes s times as long.
                    let scale = Exact::from_integer(s as i128);
                    let lo = to_f64(ti.interval.lo * scale);
                    let hi = to_f64(ti.interval.hi * scale);
                    if lo == hi {
                        ServiceDist::Fixed(lo)
                    } else {
                        ServiceDist::Uniform(lo, hi)
                    }
                })
                .collect())
        }
    }
}

pub fn simulate(plan: &ProcessPlan, allocation: &Allocation, config: &SimConfig) -> Result<SimResult, SimError> {
    config.validate()?;
    let counts = allocation.counts_for(plan)?;
    let dists = service_dists(plan, allocation, &config.service)?;
    let stages: Vec<Stage> = counts
        .iter()
        .zip(dists)
        .map(|(&s, dist)| Stage {
            servers: vec![Server::Idle; s as usize],
            queue: VecDeque::new(),
            inbound: 0,
            blocked: VecDeque::new(),
            dist,
            busy_time: 0.0,
        })
        .collect();
    let n = stages.len();

    let mut engine = Engine {
        cfg: config,
        stages,
        events: BinaryHeap::new(),
        seq: 0,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        now: 0.0,
        next_piece: 0,
        pending_release: 0,
        released: 0,
        completed_total: 0,
        completed_window: 0,
        digest: Fnv::new(),
        series: WipSeries {
            times: Vec::new(),
            queues: vec![Vec::new(); n],
            released: Vec::new(),
            completed: Vec::new(),
            in_flight: Vec::new(),
        },
        next_sample: 0,
        max_in_flight: 0,
        log: config.record_trace.then(Vec::new),
    };

    match config.release {
        Release::Saturated => engine.try_start(0),
        Release::Paced { .. } => engine.push(0.0, 0, 0, EventKind::Release),
    }

    while let Some(Reverse(ev)) = engine.events.peek().copied() {
        if ev.time > config.horizon {
            break;
        }
        engine.sample_until(ev.time, false);
        engine.events.pop();
        engine.handle(ev);
    }
    engine.now = config.horizon;
    engine.sample_until(config.horizon, true);

    let window = config.horizon - config.warmup;
    let utilization = engine
        .stages
        .iter()
        .map(|s| s.busy_time / (s.servers.len() as f64 * window))
        .collect();
    let in_flight = engine.in_flight();
    let max_in_flight = engine.max_in_flight.max(in_flight);
    Ok(SimResult {
        stage_tasks: plan.tasks().iter().map(|t| t.id).collect(),
        stations: counts,
        deterministic: matches!(config.service, ServiceModel::Deterministic),
        horizon: config.horizon,
        warmup: config.warmup,
        completed: engine.completed_window,
        throughput: engine.completed_window as f64 * 3600.0 / window,
        utilization,
        conservation: Conservation {
            released: engine.released,
            completed: engine.completed_total,
            in_flight,
        },
        max_in_flight,
        trace_digest: engine.digest.0,
        trace: engine.log,
        wip_timeseries: engine.series,
    })
}

/// Ordinary least-squares fit of `values` against `times`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 0 when the series is constant.
    pub r_squared: f64,
}

impl Trend {
    /// Sustained growth: positive slope with a fit that explains the series.
    pub fn is_growing(&self, min_r_squared: f64) -> bool {
        self.slope > 0.0 && self.r_squared > min_r_squared
    }
}

pub fn linear_trend(times: &[f64], values: &[f64]) -> Option<Trend> {
    let n = times.len().min(values.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean_t = times[..n].iter().sum::<f64>() / nf;
    let mean_v = values[..n].iter().sum::<f64>() / nf;
    let (mut stt, mut stv, mut svv) = (0.0, 0.0, 0.0);
    for (t, v) in times[..n].iter().zip(&values[..n]) {
        let (dt, dv) = (t - mean_t, v - mean_v);
        stt += dt * dt;
        stv += dt * dv;
        svv += dv * dv;
    }
    if stt == 0.0 {
        return None;
    }
    let slope = stv / stt;
    let r_squared = if svv == 0.0 { 0.0 } else { (stv * stv) / (stt * svv) };
    Some(Trend {
        slope,
        intercept: mean_v - slope * mean_t,
        r_squared,
    })
}

/// Trend of the queue feeding `stage`, restricted to samples after warmup.
pub fn queue_trend(result: &SimResult, stage: usize) -> Option<Trend> {
    let series = &result.wip_timeseries;
    let (times, values): (Vec<f64>, Vec<f64>) = series
        .times
        .iter()
        .zip(&series.queues[stage])
        .filter(|(t, _)| **t >= result.warmup)
        .map(|(t, q)| (*t, *q as f64))
        .unzip();
    linear_trend(&times, &values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub static_throughput: f64,
    pub simulated_throughput: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub bottleneck: TaskId,
    pub bottleneck_utilization: f64,
    pub failures: Vec<String>,
}

/// Checks a deterministic run against the static line arithmetic: throughput
/// within `tolerance` (relative) of `period / line CT`, and no stage busier
/// than the static bottleneck.
pub fn verify_against_static(
    result: &SimResult,
    plan: &ProcessPlan,
    allocation: &Allocation,
    tolerance: f64,
) -> Result<Verification, SimError> {
    let counts = allocation.counts_for(plan)?;
    let tasks: Vec<TaskId> = plan.tasks().iter().map(|t| t.id).collect();
    if result.stage_tasks != tasks {
        return Err(SimError::Mismatch(format!(
            "stages {:?} vs plan tasks {:?}",
            result.stage_tasks, tasks
        )));
    }
    if result.stations != counts {
        return Err(SimError::Mismatch(format!(
            "stations {:?} vs allocation {:?}",
            result.stations, counts
        )));
    }
    if !result.deterministic {
        return Err(SimError::NotDeterministic);
    }
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(SimError::BadParameter { what: "tolerance" });
    }

    let line_ct = model::line_cycle_time(plan, allocation)?;
    let static_throughput = 3600.0 / to_f64(line_ct);
    let relative_error = (result.throughput - static_throughput).abs() / static_throughput;
    let mut failures = Vec::new();
    if relative_error > tolerance {
        failures.push(format!(
            "throughput {:.3} pc/hr differs from static {:.3} pc/hr by {:.2}% (tolerance {:.2}%)",
            result.throughput,
            static_throughput,
            relative_error * 100.0,
            tolerance * 100.0
        ));
    }

    let bottleneck_stages: Vec<usize> = bottlenecks(plan, allocation)?
        .into_iter()
        .filter_map(|id| result.stage_of(id))
        .collect();
    let (bottleneck_stage, bottleneck_utilization) = bottleneck_stages
        .iter()
        .map(|&k| (k, result.utilization[k]))
        .fold(None, |best: Option<(usize, f64)>, (k, u)| match best {
            Some((_, bu)) if bu >= u => best,
            _ => Some((k, u)),
        })
        .expect("a line always has a bottleneck");
    for (k, &u) in result.utilization.iter().enumerate() {
        if u > bottleneck_utilization + UTILIZATION_EPS {
            failures.push(format!(
                "stage for task {} is busier ({:.4}) than the bottleneck task {} ({:.4})",
                tasks[k], u, tasks[bottleneck_stage], bottleneck_utilization
            ));
        }
    }

    Ok(Verification {
        passed: failures.is_empty(),
        static_throughput,
        simulated_throughput: result.throughput,
        relative_error,
        tolerance,
        bottleneck: tasks[bottleneck_stage],
        bottleneck_utilization,
        failures,
    })
}
