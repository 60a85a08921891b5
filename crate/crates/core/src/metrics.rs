//! Workforce productivity: units per person-hour (UPPH) and its improvement.
//!
//! One operator sits at each station, so workers always equal the station
//! total of an allocation.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    effective_cycle_times, line_cycle_time, serde_exact, throughput, Allocation, Exact, ModelError, ProcessPlan,
    TaskId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("UPPH needs at least one worker")]
    NoWorkers,
    #[error("output must be non-negative")]
    NegativeOutput,
    #[error("baseline UPPH must be strictly positive")]
    NonPositiveBaseline,
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn upph(output_per_hour: Exact, workers: u32) -> Result<Exact, MetricsError> {
    if workers == 0 {
        return Err(MetricsError::NoWorkers);
    }
    if output_per_hour.is_negative() {
        return Err(MetricsError::NegativeOutput);
    }
    Ok(output_per_hour / Exact::from_integer(workers as i128))
}

/// Relative change `(new - base) / base`.
pub fn eff_improvement(upph_new: Exact, upph_base: Exact) -> Result<Exact, MetricsError> {
    if !upph_base.is_positive() {
        return Err(MetricsError::NonPositiveBaseline);
    }
    Ok((upph_new - upph_base) / upph_base)
}

/// Cuts `x` to two decimals toward zero: the way two-decimal UPPH figures are
/// commonly quoted (30/19 is quoted as 1.57).
pub fn truncate_2dp(x: Exact) -> Exact {
    (x * Exact::from_integer(100)).trunc() / Exact::from_integer(100)
}

/// Improvement computed from UPPH values first truncated to two decimals.
pub fn eff_improvement_quoted(upph_new: Exact, upph_base: Exact) -> Result<Exact, MetricsError> {
    eff_improvement(truncate_2dp(upph_new), truncate_2dp(upph_base))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskUtilization {
    pub task: TaskId,
    pub stations: u32,
    #[serde(with = "serde_exact")]
    pub effective_cycle_time: Exact,
    /// Effective cycle time over line cycle time, in (0, 1].
    #[serde(with = "serde_exact")]
    pub utilization: Exact,
    #[serde(with = "serde_exact")]
    pub idle_fraction: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductivityReport {
    #[serde(with = "serde_exact")]
    pub line_cycle_time: Exact,
    /// Pieces per plan period (one hour unless the plan says otherwise).
    #[serde(with = "serde_exact")]
    pub output_per_hour: Exact,
    pub workers: u32,
    #[serde(with = "serde_exact")]
    pub upph: Exact,
    pub utilization: Vec<TaskUtilization>,
}

pub fn productivity(plan: &ProcessPlan, allocation: &Allocation) -> Result<ProductivityReport, MetricsError> {
    let effective = effective_cycle_times(plan, allocation)?;
    let line_ct = line_cycle_time(plan, allocation)?;
    let output = throughput(line_ct, plan.period())?;
    let workers = allocation.total_stations();
    let utilization = effective
        .into_iter()
        .map(|(task, ct)| {
            let u = ct / line_ct;
            TaskUtilization {
                task,
                stations: allocation.get(task).expect("validated"),
                effective_cycle_time: ct,
                utilization: u,
                idle_fraction: Exact::from_integer(1) - u,
            }
        })
        .collect();
    Ok(ProductivityReport {
        line_cycle_time: line_ct,
        output_per_hour: output,
        workers,
        upph: upph(output, workers)?,
        utilization,
    })
}

/// Before/after productivity of two allocations of the same plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub before: ProductivityReport,
    pub after: ProductivityReport,
    /// Output multiple (after / before). Not the same thing as the UPPH
    /// improvement, which also accounts for the extra workers.
    #[serde(with = "serde_exact")]
    pub output_ratio: Exact,
    /// UPPH improvement at full precision.
    #[serde(with = "serde_exact")]
    pub improvement: Exact,
    /// UPPH improvement from UPPH values truncated to two decimals.
    #[serde(with = "serde_exact")]
    pub improvement_quoted: Exact,
}

pub fn compare(plan: &ProcessPlan, baseline: &Allocation, balanced: &Allocation) -> Result<Comparison, MetricsError> {
    let before = productivity(plan, baseline)?;
    let after = productivity(plan, balanced)?;
    let improvement = eff_improvement(after.upph, before.upph)?;
    let improvement_quoted = if truncate_2dp(before.upph).is_zero() {
        // Degenerate: the quoted baseline rounds down to zero.
        Exact::zero()
    } else {
        eff_improvement_quoted(after.upph, before.upph)?
    };
    Ok(Comparison {
        output_ratio: after.output_per_hour / before.output_per_hour,
        improvement,
        improvement_quoted,
        before,
        after,
    })
}
