//! Station allocation.
//!
//! Three routes to the same min-max problem: minimize the line cycle time
//! `max_i t_i / s_i` subject to `sum s_i <= budget`, `s_i >= 1` integer.
//!
//! * [`greedy_balance`] repeatedly gives one more station to the current
//!   bottleneck. Each `t_i / s_i` is nonincreasing in `s_i`, so this is optimal
//!   for the min-max objective.
//! * [`optimal_balance`] searches the candidate cycle times `t_i / k` for the
//!   smallest one whose station demand `sum ceil(t_i / ct)` fits the budget.
//! * [`exhaustive_balance`] enumerates every allocation. It is only meant as an
//!   oracle on small instances.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    self, effective_cycle_time, serde_exact, Allocation, Exact, ModelError, ProcessPlan, TaskId,
};

pub const EXHAUSTIVE_MAX_TASKS: usize = 10;
pub const EXHAUSTIVE_MAX_SEATS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("exhaustive search refused: {tasks} tasks / {seats} seats exceeds the {max_tasks} task / {max_seats} seat limit")]
    TooLarge {
        tasks: usize,
        seats: u32,
        max_tasks: usize,
        max_seats: u32,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Greedy,
    Optimal,
    Exhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Greedy => "greedy",
            Method::Optimal => "optimal",
            Method::Exhaustive => "exhaustive",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "optimal" => Ok(Method::Optimal),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(format!("unknown balancing method `{other}`")),
        }
    }
}

/// One audited step: a station was added to `task`, leaving the line at
/// `line_cycle_time`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub task: TaskId,
    #[serde(with = "serde_exact")]
    pub line_cycle_time: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceResult {
    pub allocation: Allocation,
    #[serde(with = "serde_exact")]
    pub line_cycle_time: Exact,
    pub iterations: Vec<Split>,
    pub method: Method,
}

impl BalanceResult {
    pub fn total_stations(&self) -> u32 {
        self.allocation.total_stations()
    }
}

pub fn balance(plan: &ProcessPlan, method: Method, target_ct: Option<Exact>) -> Result<BalanceResult, BalanceError> {
    match method {
        Method::Greedy => greedy_balance(plan, target_ct),
        Method::Optimal => optimal_balance(plan),
        Method::Exhaustive => exhaustive_balance(plan),
    }
}

/// Working state shared by the greedy and padding loops.
struct Line<'a> {
    plan: &'a ProcessPlan,
    counts: Vec<u32>,
    effective: Vec<Exact>,
}

impl<'a> Line<'a> {
    fn new(plan: &'a ProcessPlan, counts: Vec<u32>) -> Result<Self, ModelError> {
        let effective = plan
            .tasks()
            .iter()
            .zip(&counts)
            .map(|(t, &s)| effective_cycle_time(t.cycle_time, s))
            .collect::<Result<_, _>>()?;
        Ok(Line { plan, counts, effective })
    }

    fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    fn line_cycle_time(&self) -> Exact {
        *self.effective.iter().max().expect("plan is never empty")
    }

    /// Index of the bottleneck; equal effective times go to the lowest task id.
    fn bottleneck(&self) -> usize {
        let tasks = self.plan.tasks();
        (0..tasks.len())
            .max_by(|&a, &b| {
                self.effective[a]
                    .cmp(&self.effective[b])
                    .then_with(|| tasks[b].id.cmp(&tasks[a].id))
            })
            .expect("plan is never empty")
    }

    fn split(&mut self, idx: usize) -> Split {
        self.counts[idx] += 1;
        let task = &self.plan.tasks()[idx];
        self.effective[idx] = task.cycle_time / Exact::from_integer(self.counts[idx] as i128);
        Split {
            task: task.id,
            line_cycle_time: self.line_cycle_time(),
        }
    }

    fn into_result(self, iterations: Vec<Split>, method: Method) -> BalanceResult {
        let line_cycle_time = self.line_cycle_time();
        let allocation = Allocation::from_pairs(self.plan.tasks().iter().map(|t| t.id).zip(self.counts));
        BalanceResult {
            allocation,
            line_cycle_time,
            iterations,
            method,
        }
    }
}

/// Start from one station per task and keep splitting the bottleneck.
///
/// Without a target the whole seat budget is spent, even once further splits
/// no longer lower the line cycle time. With a target, splitting stops as
/// soon as the line cycle time is at or below it (or the seats run out).
pub fn greedy_balance(plan: &ProcessPlan, target_ct: Option<Exact>) -> Result<BalanceResult, BalanceError> {
    let mut line = Line::new(plan, vec![1; plan.len()])?;
    let mut iterations = Vec::new();
    while line.total() < plan.seat_budget() {
        if target_ct.is_some_and(|target| line.line_cycle_time() <= target) {
            break;
        }
        let idx = line.bottleneck();
        iterations.push(line.split(idx));
    }
    Ok(line.into_result(iterations, Method::Greedy))
}

/// Stations needed to bring every task to `ct` or below.
fn station_demand(plan: &ProcessPlan, ct: Exact) -> u64 {
    plan.tasks()
        .iter()
        .map(|t| (t.cycle_time / ct).ceil().to_integer() as u64)
        .sum()
}

/// Parametric search over the candidate cycle times `t_i / k`.
///
/// The optimum is always one of these candidates, and station demand is
/// monotone in the cycle time, so a binary search over the sorted candidates
/// finds the smallest feasible one. Leftover seats are then handed to the
/// bottleneck one at a time so the reported station total matches the budget.
pub fn optimal_balance(plan: &ProcessPlan) -> Result<BalanceResult, BalanceError> {
    let budget = plan.seat_budget();
    let mut candidates: Vec<Exact> = plan
        .tasks()
        .iter()
        .flat_map(|t| (1..=budget).map(move |k| t.cycle_time / Exact::from_integer(k as i128)))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    // The largest candidate is max t_i, which needs exactly one station per
    // task and is feasible because the plan guarantees budget >= task count.
    let first_feasible = candidates.partition_point(|&ct| station_demand(plan, ct) > budget as u64);
    let best = candidates[first_feasible];

    let counts = plan
        .tasks()
        .iter()
        .map(|t| (t.cycle_time / best).ceil().to_integer() as u32)
        .collect();
    let mut line = Line::new(plan, counts)?;
    debug_assert_eq!(line.line_cycle_time(), best);
    let mut iterations = Vec::new();
    while line.total() < budget {
        let idx = line.bottleneck();
        iterations.push(line.split(idx));
    }
    Ok(line.into_result(iterations, Method::Optimal))
}

/// Brute force over every allocation with `sum s_i <= budget`.
///
/// Ties on line cycle time go to fewer total stations, then to the
/// lexicographically smallest station vector (plan order).
pub fn exhaustive_balance(plan: &ProcessPlan) -> Result<BalanceResult, BalanceError> {
    let budget = plan.seat_budget();
    if plan.len() > EXHAUSTIVE_MAX_TASKS || budget > EXHAUSTIVE_MAX_SEATS {
        return Err(BalanceError::TooLarge {
            tasks: plan.len(),
            seats: budget,
            max_tasks: EXHAUSTIVE_MAX_TASKS,
            max_seats: EXHAUSTIVE_MAX_SEATS,
        });
    }
    let times: Vec<Exact> = plan.tasks().iter().map(|t| t.cycle_time).collect();

    struct Search<'a> {
        times: &'a [Exact],
        budget: u32,
        current: Vec<u32>,
        best: Option<(Exact, u32, Vec<u32>)>,
    }

    impl Search<'_> {
        fn visit(&mut self, depth: usize, used: u32) {
            if depth == self.times.len() {
                let ct = self
                    .times
                    .iter()
                    .zip(&self.current)
                    .map(|(&t, &s)| t / Exact::from_integer(s as i128))
                    .max()
                    .expect("non-empty");
                let key = (ct, used, self.current.clone());
                if self.best.as_ref().is_none_or(|best| key < *best) {
                    self.best = Some(key);
                }
                return;
            }
            // Leave at least one seat for every remaining task.
            let remaining = (self.times.len() - depth - 1) as u32;
            let max_here = self.budget - used - remaining;
            for s in 1..=max_here {
                self.current[depth] = s;
                self.visit(depth + 1, used + s);
            }
        }
    }

    let mut search = Search {
        times: &times,
        budget,
        current: vec![0; times.len()],
        best: None,
    };
    search.visit(0, 0);
    let (line_cycle_time, _, counts) = search.best.expect("budget >= task count admits one allocation");
    let allocation = Allocation::from_pairs(plan.tasks().iter().map(|t| t.id).zip(counts));
    debug_assert_eq!(model::line_cycle_time(plan, &allocation)?, line_cycle_time);
    Ok(BalanceResult {
        allocation,
        line_cycle_time,
        iterations: Vec::new(),
        method: Method::Exhaustive,
    })
}
