//! Cycle-time uncertainty for a fixed allocation.
//!
//! Each effective cycle time `ct` is widened to `[ct - alpha * d_minus,
//! ct + alpha * d_plus]` with `alpha` in (0, 1]. The line is then evaluated at
//! its best (every task at its lower bound) and worst (every task at its
//! upper bound) corners.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{self, eff_improvement, eff_improvement_quoted, upph, MetricsError};
use crate::model::{
    effective_cycle_times, serde_exact, throughput, Allocation, Exact, ModelError, ProcessPlan, TaskId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustError {
    #[error("alpha must lie in (0, 1], got {0}")]
    AlphaOutOfRange(Exact),
    #[error("deviations must be non-negative")]
    NegativeDeviation,
    #[error("interval lower bound {lo} is not positive")]
    NonPositiveLowerBound { lo: Exact },
    #[error("task {task}: bounds [{lower}, {upper}] do not contain the effective cycle time {effective}")]
    BoundsExcludeNominal {
        task: TaskId,
        lower: Exact,
        upper: Exact,
        effective: Exact,
    },
    #[error("no interval supplied for task {0}")]
    MissingInterval(TaskId),
    #[error("alpha grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Deviation magnitudes (at `alpha = 1`) around an effective cycle time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Deviation {
    #[serde(with = "serde_exact")]
    pub plus: Exact,
    #[serde(with = "serde_exact")]
    pub minus: Exact,
}

impl Deviation {
    pub fn new(plus: Exact, minus: Exact) -> Result<Self, RobustError> {
        if plus.is_negative() || minus.is_negative() {
            return Err(RobustError::NegativeDeviation);
        }
        Ok(Deviation { plus, minus })
    }

    pub fn symmetric(d: Exact) -> Result<Self, RobustError> {
        Self::new(d, d)
    }

    /// Deviation implied by absolute upper/lower cycle-time bounds around an
    /// effective cycle time.
    pub fn from_bounds(task: TaskId, effective: Exact, upper: Exact, lower: Exact) -> Result<Self, RobustError> {
        if lower > effective || upper < effective {
            return Err(RobustError::BoundsExcludeNominal {
                task,
                lower,
                upper,
                effective,
            });
        }
        Self::new(upper - effective, effective - lower)
    }
}

pub type Deviations = BTreeMap<TaskId, Deviation>;

/// Deviations carried on the plan's own task records.
pub fn plan_deviations(plan: &ProcessPlan) -> Deviations {
    plan.tasks()
        .iter()
        .map(|t| {
            (
                t.id,
                Deviation {
                    plus: t.dev_plus,
                    minus: t.dev_minus,
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtInterval {
    #[serde(with = "serde_exact")]
    pub nominal: Exact,
    #[serde(with = "serde_exact")]
    pub lo: Exact,
    #[serde(with = "serde_exact")]
    pub hi: Exact,
    #[serde(with = "serde_exact")]
    pub alpha: Exact,
    #[serde(with = "serde_exact")]
    pub d_plus: Exact,
    #[serde(with = "serde_exact")]
    pub d_minus: Exact,
}

impl CtInterval {
    pub fn contains(&self, x: Exact) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn check_alpha(alpha: Exact) -> Result<(), RobustError> {
    if !alpha.is_positive() || alpha > Exact::one() {
        return Err(RobustError::AlphaOutOfRange(alpha));
    }
    Ok(())
}

pub fn ct_interval(nominal: Exact, d_plus: Exact, d_minus: Exact, alpha: Exact) -> Result<CtInterval, RobustError> {
    check_alpha(alpha)?;
    if d_plus.is_negative() || d_minus.is_negative() {
        return Err(RobustError::NegativeDeviation);
    }
    let lo = nominal - alpha * d_minus;
    if !lo.is_positive() {
        return Err(RobustError::NonPositiveLowerBound { lo });
    }
    Ok(CtInterval {
        nominal,
        lo,
        hi: nominal + alpha * d_plus,
        alpha,
        d_plus,
        d_minus,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskInterval {
    pub task: TaskId,
    pub interval: CtInterval,
}

/// Intervals on the post-allocation effective cycle times. Tasks without an
/// entry in `deviations` get a zero-width interval.
pub fn task_intervals(
    plan: &ProcessPlan,
    allocation: &Allocation,
    deviations: &Deviations,
    alpha: Exact,
) -> Result<Vec<TaskInterval>, RobustError> {
    effective_cycle_times(plan, allocation)?
        .into_iter()
        .map(|(task, ct)| {
            let d = deviations.get(&task).copied().unwrap_or_default();
            Ok(TaskInterval {
                task,
                interval: ct_interval(ct, d.plus, d.minus, alpha)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustReport {
    pub intervals: Vec<TaskInterval>,
    /// Line cycle time at nominal task times.
    #[serde(with = "serde_exact")]
    pub regular: Exact,
    /// Line cycle time with every task at its lower bound.
    #[serde(with = "serde_exact")]
    pub best: Exact,
    /// Line cycle time with every task at its upper bound.
    #[serde(with = "serde_exact")]
    pub worst: Exact,
    #[serde(with = "serde_exact")]
    pub throughput_regular: Exact,
    /// `ceil(period / best)`.
    pub throughput_best: u64,
    /// `floor(period / worst)`.
    pub throughput_worst: u64,
    pub workers: u32,
    #[serde(with = "serde_exact")]
    pub upph_regular: Exact,
    #[serde(with = "serde_exact")]
    pub upph_max: Exact,
    #[serde(with = "serde_exact")]
    pub upph_min: Exact,
    /// UPPH of the unbalanced line (one station per task).
    #[serde(with = "serde_exact")]
    pub upph_baseline: Exact,
    #[serde(with = "serde_exact")]
    pub eff_max: Exact,
    #[serde(with = "serde_exact")]
    pub eff_min: Exact,
    /// Improvements from UPPH values truncated to two decimals.
    #[serde(with = "serde_exact")]
    pub eff_max_quoted: Exact,
    #[serde(with = "serde_exact")]
    pub eff_min_quoted: Exact,
}

pub fn robust_line_report(
    plan: &ProcessPlan,
    allocation: &Allocation,
    intervals: &[TaskInterval],
) -> Result<RobustReport, RobustError> {
    let effective = effective_cycle_times(plan, allocation)?;
    let mut by_task = BTreeMap::new();
    for ti in intervals {
        by_task.insert(ti.task, ti);
    }
    let mut ordered = Vec::with_capacity(effective.len());
    for (task, _) in &effective {
        let ti = by_task.get(task).ok_or(RobustError::MissingInterval(*task))?;
        ordered.push((*ti).clone());
    }

    let regular = ordered.iter().map(|t| t.interval.nominal).max().expect("non-empty");
    let best = ordered.iter().map(|t| t.interval.lo).max().expect("non-empty");
    let worst = ordered.iter().map(|t| t.interval.hi).max().expect("non-empty");

    let period = plan.period();
    let throughput_regular = throughput(regular, period)?;
    let throughput_best = throughput(best, period)?.ceil().to_integer() as u64;
    let throughput_worst = throughput(worst, period)?.floor().to_integer() as u64;

    let workers = allocation.total_stations();
    let upph_regular = upph(throughput_regular, workers)?;
    let upph_max = upph(Exact::from_integer(throughput_best as i128), workers)?;
    let upph_min = upph(Exact::from_integer(throughput_worst as i128), workers)?;

    let baseline = metrics::productivity(plan, &Allocation::uniform(plan, 1))?;
    let upph_baseline = baseline.upph;

    let quoted_or_zero = |x: Exact| -> Result<Exact, RobustError> {
        if metrics::truncate_2dp(upph_baseline).is_zero() {
            Ok(Exact::zero())
        } else {
            Ok(eff_improvement_quoted(x, upph_baseline)?)
        }
    };

    Ok(RobustReport {
        intervals: ordered,
        regular,
        best,
        worst,
        throughput_regular,
        throughput_best,
        throughput_worst,
        workers,
        upph_regular,
        upph_max,
        upph_min,
        upph_baseline,
        eff_max: eff_improvement(upph_max, upph_baseline)?,
        eff_min: eff_improvement(upph_min, upph_baseline)?,
        eff_max_quoted: quoted_or_zero(upph_max)?,
        eff_min_quoted: quoted_or_zero(upph_min)?,
    })
}

/// Regular/best/worst cycle times of one task (or the whole line).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtTriple {
    /// `None` for the line summary.
    pub task: Option<TaskId>,
    #[serde(with = "serde_exact")]
    pub regular: Exact,
    #[serde(with = "serde_exact")]
    pub best: Exact,
    #[serde(with = "serde_exact")]
    pub worst: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(with = "serde_exact")]
    pub alpha: Exact,
    pub tasks: Vec<CtTriple>,
    pub line: CtTriple,
}

pub fn alpha_sweep(
    plan: &ProcessPlan,
    allocation: &Allocation,
    deviations: &Deviations,
    alpha_grid: &[Exact],
) -> Result<Vec<SweepPoint>, RobustError> {
    if alpha_grid.is_empty() {
        return Err(RobustError::EmptyGrid);
    }
    alpha_grid
        .iter()
        .map(|&alpha| {
            let intervals = task_intervals(plan, allocation, deviations, alpha)?;
            let report = robust_line_report(plan, allocation, &intervals)?;
            Ok(SweepPoint {
                alpha,
                tasks: intervals
                    .iter()
                    .map(|ti| CtTriple {
                        task: Some(ti.task),
                        regular: ti.interval.nominal,
                        best: ti.interval.lo,
                        worst: ti.interval.hi,
                    })
                    .collect(),
                line: CtTriple {
                    task: None,
                    regular: report.regular,
                    best: report.best,
                    worst: report.worst,
                },
            })
        })
        .collect()
}
