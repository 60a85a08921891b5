//! Domain types and the static arithmetic of a hanger line.
//!
//! All times are held as exact rationals. A task split across `s` parallel
//! stations has an effective cycle time of `t / s`, and the slowest effective
//! time sets the pace of the whole line. Rounding only ever happens when a
//! value is rendered for display.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number used for every time, rate and ratio in the crate.
pub type Exact = Ratio<i128>;

pub type TaskId = u32;

/// Default reporting period: one hour.
pub const SECONDS_PER_HOUR: i128 = 3600;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("task {id}: cycle time must be strictly positive, got {value}")]
    NonPositiveCycleTime { id: TaskId, value: Exact },
    #[error("task {id}: deviations must be non-negative")]
    NegativeDeviation { id: TaskId },
    #[error("task {id}: lower deviation {dev_minus} must be below cycle time {cycle_time}")]
    DeviationTooLarge {
        id: TaskId,
        dev_minus: Exact,
        cycle_time: Exact,
    },
    #[error("task id must be positive")]
    ZeroTaskId,
    #[error("duplicate task id {0}")]
    DuplicateTaskId(TaskId),
    #[error("process plan has no tasks")]
    EmptyPlan,
    #[error("seat budget {budget} cannot give each of {tasks} tasks a station")]
    InfeasibleBudget { budget: u32, tasks: usize },
    #[error("allocation has no entry for task {0}")]
    MissingTask(TaskId),
    #[error("allocation names task {0}, which is not in the plan")]
    UnknownTask(TaskId),
    #[error("task {0}: station count must be at least 1")]
    ZeroStations(TaskId),
    #[error("{what} must be strictly positive")]
    NonPositive { what: &'static str },
}

/// One sewing operation on the line.
///
/// `dev_plus` / `dev_minus` are the cycle-time deviation bounds applied to the
/// effective (post-allocation) cycle time in robustness analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: TaskId,
    pub description: String,
    #[serde(with = "serde_exact")]
    pub cycle_time: Exact,
    #[serde(with = "serde_exact")]
    pub dev_plus: Exact,
    #[serde(with = "serde_exact")]
    pub dev_minus: Exact,
}

impl Task {
    pub fn new(id: TaskId, description: impl Into<String>, cycle_time: Exact) -> Result<Self, ModelError> {
        Self::with_deviation(id, description, cycle_time, Exact::zero(), Exact::zero())
    }

    pub fn with_deviation(
        id: TaskId,
        description: impl Into<String>,
        cycle_time: Exact,
        dev_plus: Exact,
        dev_minus: Exact,
    ) -> Result<Self, ModelError> {
        let task = Task {
            id,
            description: description.into(),
            cycle_time,
            dev_plus,
            dev_minus,
        };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.id == 0 {
            return Err(ModelError::ZeroTaskId);
        }
        if !self.cycle_time.is_positive() {
            return Err(ModelError::NonPositiveCycleTime {
                id: self.id,
                value: self.cycle_time,
            });
        }
        if self.dev_plus.is_negative() || self.dev_minus.is_negative() {
            return Err(ModelError::NegativeDeviation { id: self.id });
        }
        if self.dev_minus >= self.cycle_time {
            return Err(ModelError::DeviationTooLarge {
                id: self.id,
                dev_minus: self.dev_minus,
                cycle_time: self.cycle_time,
            });
        }
        Ok(())
    }
}

/// The balancing instance: tasks in physical line order plus the seat budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessPlan {
    tasks: Vec<Task>,
    seat_budget: u32,
    #[serde(with = "serde_exact")]
    period: Exact,
}

impl ProcessPlan {
    pub fn new(tasks: Vec<Task>, seat_budget: u32) -> Result<Self, ModelError> {
        Self::with_period(tasks, seat_budget, Exact::from_integer(SECONDS_PER_HOUR))
    }

    pub fn with_period(tasks: Vec<Task>, seat_budget: u32, period: Exact) -> Result<Self, ModelError> {
        if tasks.is_empty() {
            return Err(ModelError::EmptyPlan);
        }
        if !period.is_positive() {
            return Err(ModelError::NonPositive { what: "period" });
        }
        let mut seen = HashSet::with_capacity(tasks.len());
        for task in &tasks {
            task.validate()?;
            if !seen.insert(task.id) {
                return Err(ModelError::DuplicateTaskId(task.id));
            }
        }
        if (seat_budget as usize) < tasks.len() {
            return Err(ModelError::InfeasibleBudget {
                budget: seat_budget,
                tasks: tasks.len(),
            });
        }
        Ok(ProcessPlan {
            tasks,
            seat_budget,
            period,
        })
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn seat_budget(&self) -> u32 {
        self.seat_budget
    }

    pub fn period(&self) -> Exact {
        self.period
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    /// Same tasks and period under a different seat budget.
    pub fn with_seat_budget(&self, seat_budget: u32) -> Result<Self, ModelError> {
        Self::with_period(self.tasks.clone(), seat_budget, self.period)
    }
}

/// Parallel workstation count per task.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Allocation {
    stations: BTreeMap<TaskId, u32>,
}

impl Allocation {
    /// Every task of the plan on `count` stations.
    pub fn uniform(plan: &ProcessPlan, count: u32) -> Self {
        Allocation {
            stations: plan.tasks().iter().map(|t| (t.id, count)).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (TaskId, u32)>) -> Self {
        Allocation {
            stations: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, id: TaskId) -> Option<u32> {
        self.stations.get(&id).copied()
    }

    pub fn set(&mut self, id: TaskId, count: u32) {
        self.stations.insert(id, count);
    }

    pub fn increment(&mut self, id: TaskId) {
        *self.stations.entry(id).or_insert(0) += 1;
    }

    pub fn total_stations(&self) -> u32 {
        self.stations.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TaskId, u32)> + '_ {
        self.stations.iter().map(|(&id, &s)| (id, s))
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    /// Station counts in plan order.
    pub fn counts_for(&self, plan: &ProcessPlan) -> Result<Vec<u32>, ModelError> {
        self.validate_for(plan)?;
        Ok(plan.tasks().iter().map(|t| self.stations[&t.id]).collect())
    }

    pub fn validate_for(&self, plan: &ProcessPlan) -> Result<(), ModelError> {
        for task in plan.tasks() {
            match self.stations.get(&task.id) {
                None => return Err(ModelError::MissingTask(task.id)),
                Some(0) => return Err(ModelError::ZeroStations(task.id)),
                Some(_) => {}
            }
        }
        if let Some(&id) = self.stations.keys().find(|id| plan.task(**id).is_none()) {
            return Err(ModelError::UnknownTask(id));
        }
        Ok(())
    }
}

/// Static summary of a line under one allocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineStats {
    #[serde(with = "serde_exact")]
    pub line_cycle_time: Exact,
    #[serde(with = "serde_exact")]
    pub throughput: Exact,
    #[serde(with = "serde_exact")]
    pub work_content: Exact,
    #[serde(with = "serde_exact")]
    pub parallel_lower_bound: Exact,
    #[serde(with = "serde_exact")]
    pub classic_lower_bound: Exact,
}

pub fn effective_cycle_time(cycle_time: Exact, stations: u32) -> Result<Exact, ModelError> {
    if !cycle_time.is_positive() {
        return Err(ModelError::NonPositive { what: "cycle time" });
    }
    if stations == 0 {
        return Err(ModelError::NonPositive { what: "station count" });
    }
    Ok(cycle_time / Exact::from_integer(stations as i128))
}

/// Effective cycle time of every task, in plan order.
pub fn effective_cycle_times(plan: &ProcessPlan, allocation: &Allocation) -> Result<Vec<(TaskId, Exact)>, ModelError> {
    allocation.validate_for(plan)?;
    plan.tasks()
        .iter()
        .map(|t| Ok((t.id, effective_cycle_time(t.cycle_time, allocation.stations[&t.id])?)))
        .collect()
}

/// Pace of the line: the largest effective cycle time over all tasks.
pub fn line_cycle_time(plan: &ProcessPlan, allocation: &Allocation) -> Result<Exact, ModelError> {
    let effective = effective_cycle_times(plan, allocation)?;
    Ok(effective
        .into_iter()
        .map(|(_, ct)| ct)
        .max()
        .expect("plan is never empty"))
}

/// Tasks whose effective cycle time equals the line cycle time, in plan order.
pub fn bottlenecks(plan: &ProcessPlan, allocation: &Allocation) -> Result<Vec<TaskId>, ModelError> {
    let effective = effective_cycle_times(plan, allocation)?;
    let max = effective.iter().map(|(_, ct)| *ct).max().expect("plan is never empty");
    Ok(effective
        .into_iter()
        .filter(|(_, ct)| *ct == max)
        .map(|(id, _)| id)
        .collect())
}

/// Pieces produced per `period` at a line cycle time of `ct`.
pub fn throughput(ct: Exact, period: Exact) -> Result<Exact, ModelError> {
    if !ct.is_positive() {
        return Err(ModelError::NonPositive { what: "line cycle time" });
    }
    Ok(period / ct)
}

/// Total work content of one unit.
pub fn work_content(tasks: &[Task]) -> Result<Exact, ModelError> {
    if tasks.is_empty() {
        return Err(ModelError::EmptyPlan);
    }
    Ok(tasks.iter().map(|t| t.cycle_time).sum())
}

/// `max(sum(t) / S, max(t))`.
///
/// Only a bound when a task cannot be duplicated across parallel stations;
/// balancing by duplication routinely beats `max(t)`.
pub fn classic_lower_bound(tasks: &[Task], seats: u32) -> Result<Exact, ModelError> {
    if seats == 0 {
        return Err(ModelError::NonPositive { what: "seat count" });
    }
    let mean = work_content(tasks)? / Exact::from_integer(seats as i128);
    let longest = tasks.iter().map(|t| t.cycle_time).max().expect("non-empty");
    Ok(mean.max(longest))
}

/// `sum(t) / S`: no allocation of `S` stations, duplicated or not, can pace
/// the line faster than this.
pub fn parallel_lower_bound(tasks: &[Task], seats: u32) -> Result<Exact, ModelError> {
    if (seats as usize) < tasks.len() || seats == 0 {
        return Err(ModelError::InfeasibleBudget {
            budget: seats,
            tasks: tasks.len(),
        });
    }
    Ok(work_content(tasks)? / Exact::from_integer(seats as i128))
}

pub fn line_stats(plan: &ProcessPlan, allocation: &Allocation) -> Result<LineStats, ModelError> {
    let line_cycle_time = line_cycle_time(plan, allocation)?;
    Ok(LineStats {
        line_cycle_time,
        throughput: throughput(line_cycle_time, plan.period())?,
        work_content: work_content(plan.tasks())?,
        parallel_lower_bound: parallel_lower_bound(plan.tasks(), plan.seat_budget())?,
        classic_lower_bound: classic_lower_bound(plan.tasks(), plan.seat_budget())?,
    })
}

pub fn to_f64(x: Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn from_int(n: i128) -> Exact {
    Exact::from_integer(n)
}

/// Renders `x` rounded half away from zero to `places` decimals.
pub fn format_rounded(x: Exact, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = (x * Exact::from_integer(scale)).round().to_integer();
    format_scaled(scaled, places)
}

/// Renders `x` truncated toward zero to `places` decimals.
pub fn format_truncated(x: Exact, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = (x * Exact::from_integer(scale)).trunc().to_integer();
    format_scaled(scaled, places)
}

fn format_scaled(scaled: i128, places: u32) -> String {
    if places == 0 {
        return scaled.to_string();
    }
    let scale = 10i128.pow(places);
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = places as usize)
}

/// Cycle-time display: one decimal, trailing `.0` dropped (`40`, `36.7`).
pub fn display_ct(x: Exact) -> String {
    let s = format_rounded(x, 1);
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

/// Exact decimal rendering when `x` has a terminating expansion of at most
/// `max_places` digits.
pub fn format_exact_decimal(x: Exact, max_places: u32) -> Option<String> {
    for places in 0..=max_places {
        let scaled = x * Exact::from_integer(10i128.pow(places));
        if scaled.is_integer() {
            return Some(format_scaled(scaled.to_integer(), places));
        }
    }
    None
}

/// Decimal when exact, otherwise rounded to `places`.
pub fn format_decimal(x: Exact, places: u32) -> String {
    format_exact_decimal(x, places).unwrap_or_else(|| format_rounded(x, places))
}

pub struct DisplayCt(pub Exact);

impl fmt::Display for DisplayCt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_ct(self.0))
    }
}

/// Serializes an [`Exact`] as its `numer/denom` string so JSON round trips
/// without loss.
pub mod serde_exact {
    use super::Exact;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Exact, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Exact, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Exact>().map_err(D::Error::custom)
    }
}
