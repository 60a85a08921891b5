//! Human-readable tables and JSON for every result type.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::balancer::BalanceResult;
use crate::metrics::{truncate_2dp, Comparison};
use crate::model::{
    display_ct, effective_cycle_times, format_decimal, format_rounded, format_truncated, Exact, ModelError,
    ProcessPlan,
};
use crate::robust::{RobustReport, SweepPoint};
use crate::simulator::{SimResult, Verification};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected table or json)")),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

fn pct(x: Exact) -> String {
    format!("{}%", format_rounded(x * Exact::from_integer(100), 2))
}

fn description(plan: &ProcessPlan, id: u32) -> &str {
    plan.task(id).map_or("", |t| t.description.as_str())
}

fn desc_width(plan: &ProcessPlan, at_least: usize) -> usize {
    plan.tasks()
        .iter()
        .map(|t| t.description.chars().count())
        .chain([at_least, "Description".len()])
        .max()
        .unwrap_or(0)
}

/// Allocation listing: task, description, cycle time, stations, effective
/// cycle time, then a totals row with the seat count and line cycle time.
pub fn emit_balance(plan: &ProcessPlan, result: &BalanceResult, format: Format) -> Result<String, ModelError> {
    let effective = effective_cycle_times(plan, &result.allocation)?;
    if format == Format::Json {
        return Ok(to_json(result));
    }
    let desc_width = desc_width(plan, 0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<desc_width$}  {:>19}  {:>12}  {:>21}",
        "Task", "Description", "Cycle Time (sec/pc)", "Workstations", "Effective CT (sec/pc)"
    );
    for (task, (id, eff)) in plan.tasks().iter().zip(&effective) {
        let _ = writeln!(
            out,
            "{:<6} {:<desc_width$}  {:>19}  {:>12}  {:>21}",
            id,
            task.description,
            display_ct(task.cycle_time),
            result.allocation.get(*id).unwrap_or(0),
            display_ct(*eff),
        );
    }
    let _ = writeln!(
        out,
        "{:<6} {:<desc_width$}  {:>19}  {:>12}  {:>21}",
        "Total:",
        "",
        display_ct(plan.tasks().iter().map(|t| t.cycle_time).sum()),
        format!("{} seats", result.total_stations()),
        format!("{} (output rate)", display_ct(result.line_cycle_time)),
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "method: {}  splits: {}  throughput: {} pc per {} s",
        result.method,
        result.iterations.len(),
        format_decimal(plan.period() / result.line_cycle_time, 2),
        display_ct(plan.period()),
    );
    Ok(out)
}

pub fn emit_comparison(comparison: &Comparison, format: Format) -> String {
    if format == Format::Json {
        return to_json(comparison);
    }
    let (b, a) = (&comparison.before, &comparison.after);
    let mut out = String::new();
    let _ = writeln!(out, "{:<24} {:>12} {:>12}", "", "Before", "After");
    let _ = writeln!(
        out,
        "{:<24} {:>12} {:>12}",
        "Line CT (sec/pc)",
        display_ct(b.line_cycle_time),
        display_ct(a.line_cycle_time)
    );
    let _ = writeln!(
        out,
        "{:<24} {:>12} {:>12}",
        "Output (pc/period)",
        format_decimal(b.output_per_hour, 2),
        format_decimal(a.output_per_hour, 2)
    );
    let _ = writeln!(out, "{:<24} {:>12} {:>12}", "Workers", b.workers, a.workers);
    let _ = writeln!(
        out,
        "{:<24} {:>12} {:>12}",
        "UPPH (pcs/man-hour)",
        format_rounded(b.upph, 4),
        format_rounded(a.upph, 4)
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "Output multiple: {}x", format_rounded(comparison.output_ratio, 2));
    let _ = writeln!(out, "UPPH improvement (full precision): {}", pct(comparison.improvement));
    let _ = writeln!(
        out,
        "UPPH improvement (UPPH cut to two decimals, {} -> {}): {}",
        format_truncated(truncate_2dp(b.upph), 2),
        format_truncated(truncate_2dp(a.upph), 2),
        pct(comparison.improvement_quoted)
    );
    let _ = writeln!(
        out,
        "The two improvement figures differ only because the second divides already-truncated UPPH values."
    );
    out
}

pub fn emit_robust(plan: &ProcessPlan, report: &RobustReport, format: Format) -> String {
    if format == Format::Json {
        return to_json(report);
    }
    let alpha = report
        .intervals
        .first()
        .map_or_else(|| "-".to_owned(), |t| format_decimal(t.interval.alpha, 4));
    let w = desc_width(plan, "max cycle time (sec/pc)".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<w$} {:>10} {:>10} {:>10}",
        "Task", "Description", "CT (reg)", "+alpha*D", "-alpha*D"
    );
    for ti in &report.intervals {
        let _ = writeln!(
            out,
            "{:<6} {:<w$} {:>10} {:>10} {:>10}",
            ti.task,
            description(plan, ti.task),
            display_ct(ti.interval.nominal),
            display_ct(ti.interval.hi),
            display_ct(ti.interval.lo),
        );
    }
    let _ = writeln!(
        out,
        "{:<6} {:<w$} {:>10} {:>10} {:>10}",
        "Line",
        "max cycle time (sec/pc)",
        display_ct(report.regular),
        display_ct(report.worst),
        display_ct(report.best)
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "alpha: {alpha}  workers: {}", report.workers);
    let _ = writeln!(
        out,
        "throughput (pc/period): regular {}  best {}  worst {}",
        format_decimal(report.throughput_regular, 2),
        report.throughput_best,
        report.throughput_worst
    );
    let _ = writeln!(
        out,
        "UPPH: baseline {}  regular {}  max {}  min {}",
        format_rounded(report.upph_baseline, 4),
        format_rounded(report.upph_regular, 4),
        format_rounded(report.upph_max, 4),
        format_rounded(report.upph_min, 4)
    );
    let _ = writeln!(
        out,
        "Eff improvement (full precision): max {}  min {}",
        pct(report.eff_max),
        pct(report.eff_min)
    );
    let _ = writeln!(
        out,
        "Eff improvement (UPPH cut to two decimals): max {}  min {}",
        pct(report.eff_max_quoted),
        pct(report.eff_min_quoted)
    );
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub result: SimResult,
    pub verification: Option<Verification>,
}

pub fn emit_sim(plan: &ProcessPlan, result: &SimResult, verification: Option<&Verification>, format: Format) -> String {
    if format == Format::Json {
        return to_json(&SimReport {
            result: result.clone(),
            verification: verification.cloned(),
        });
    }
    let mut out = String::new();
    let window_h = (result.horizon - result.warmup) / 3600.0;
    let _ = writeln!(
        out,
        "horizon {:.2} h, warmup {:.2} h, {} service",
        result.horizon / 3600.0,
        result.warmup / 3600.0,
        if result.deterministic { "deterministic" } else { "uniform-interval" }
    );
    let _ = writeln!(
        out,
        "completed {} pieces in {:.2} h -> {:.3} pc/hr",
        result.completed, window_h, result.throughput
    );
    let c = &result.conservation;
    let _ = writeln!(
        out,
        "released {}  completed {}  in flight {}  (max in flight {})",
        c.released, c.completed, c.in_flight, result.max_in_flight
    );
    let _ = writeln!(out);
    let w = desc_width(plan, 0);
    let _ = writeln!(
        out,
        "{:<6} {:<w$} {:>8} {:>11} {:>10} {:>10}",
        "Task", "Description", "Stations", "Utilization", "Queue end", "Queue max"
    );
    for (k, &task) in result.stage_tasks.iter().enumerate() {
        let q = &result.wip_timeseries.queues[k];
        let _ = writeln!(
            out,
            "{:<6} {:<w$} {:>8} {:>11.4} {:>10} {:>10}",
            task,
            description(plan, task),
            result.stations[k],
            result.utilization[k],
            q.last().copied().unwrap_or(0),
            q.iter().copied().max().unwrap_or(0)
        );
    }
    if let Some(v) = verification {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "verification: {}  (static {:.3} pc/hr, simulated {:.3} pc/hr, error {:.3}%, tolerance {:.2}%; bottleneck task {} at {:.4})",
            if v.passed { "PASS" } else { "FAIL" },
            v.static_throughput,
            v.simulated_throughput,
            v.relative_error * 100.0,
            v.tolerance * 100.0,
            v.bottleneck,
            v.bottleneck_utilization
        );
        for f in &v.failures {
            let _ = writeln!(out, "  - {f}");
        }
    }
    out
}

fn format_alpha(alpha: Exact) -> String {
    let s = format_decimal(alpha, 6);
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

/// Plot data for the regular/best/worst overlay: one row per task and α, plus
/// a `LINE` row per α for the whole line.
pub fn emit_plot_data(sweep: &[SweepPoint]) -> String {
    let mut out = String::from("task_id,alpha,regular_ct,best_ct,worst_ct\n");
    for point in sweep {
        let alpha = format_alpha(point.alpha);
        for row in point.tasks.iter().chain(std::iter::once(&point.line)) {
            let label = row.task.map_or_else(|| "LINE".to_owned(), |t| t.to_string());
            let _ = writeln!(
                out,
                "{label},{alpha},{},{},{}",
                format_decimal(row.regular, 4),
                format_decimal(row.best, 4),
                format_decimal(row.worst, 4)
            );
        }
    }
    out
}

/// A parsed row of [`emit_plot_data`] output.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub label: String,
    pub alpha: f64,
    pub regular: f64,
    pub best: f64,
    pub worst: f64,
}

pub fn parse_plot_data(text: &str) -> Result<Vec<PlotRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("task_id,alpha,regular_ct,best_ct,worst_ct") => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(format!("line {}: expected 5 fields", i + 2));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("line {}: {e}", i + 2));
            Ok(PlotRow {
                label: f[0].to_owned(),
                alpha: num(f[1])?,
                regular: num(f[2])?,
                best: num(f[3])?,
                worst: num(f[4])?,
            })
        })
        .collect()
}
