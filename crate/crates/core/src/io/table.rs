//! Delimited task tables.
//!
//! Task table columns: `task_id, description, cycle_time_sec` and optionally
//! `dev_plus_sec, dev_minus_sec`. Deviation tables carry `task_id` plus either
//! offsets (`dev_plus_sec, dev_minus_sec`) or absolute effective cycle-time
//! bounds (`ct_plus_sec, ct_minus_sec`).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use super::decimal::parse_decimal;
use crate::model::{effective_cycle_times, format_exact_decimal, Allocation, Exact, ProcessPlan, Task, TaskId};
use crate::robust::{Deviation, Deviations, RobustError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line in the source text; the header is line 1.
    pub line: Option<u64>,
    pub column: Option<String>,
    pub message: String,
}

impl ParseError {
    fn new(line: Option<u64>, column: Option<&str>, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column: column.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column `{c}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(c)) => write!(f, "column `{c}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

const TASK_ID: &str = "task_id";
const DESCRIPTION: &str = "description";
const CYCLE_TIME: &str = "cycle_time_sec";
const DEV_PLUS: &str = "dev_plus_sec";
const DEV_MINUS: &str = "dev_minus_sec";
const CT_PLUS: &str = "ct_plus_sec";
const CT_MINUS: &str = "ct_minus_sec";
/// Informational columns a deviation table may repeat from the task table.
const DEVIATION_INFO: &[&str] = &[DESCRIPTION, CYCLE_TIME, "stations", "effective_ct_sec"];

struct Table {
    headers: Vec<String>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read(data: &[u8]) -> Result<Self, ParseError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(data);
        let headers = reader
            .headers()
            .map_err(|e| csv_error(&e))?
            .iter()
            .map(str::to_owned)
            .collect::<Vec<_>>();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(ParseError::new(None, None, "missing header row"));
        }
        let mut seen = HashSet::new();
        for h in &headers {
            if !seen.insert(h.as_str()) {
                return Err(ParseError::new(Some(1), Some(h), "duplicate column"));
            }
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(&e))?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push((line, record));
        }
        Ok(Table { headers, rows })
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize, ParseError> {
        self.index(name)
            .ok_or_else(|| ParseError::new(Some(1), Some(name), "required column is missing"))
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<(), ParseError> {
        match self.headers.iter().find(|h| !allowed.contains(&h.as_str())) {
            Some(h) => Err(ParseError::new(Some(1), Some(h), "unknown column")),
            None => Ok(()),
        }
    }
}

fn csv_error(e: &csv::Error) -> ParseError {
    let line = e.position().map(|p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::Utf8 { .. } => "text is not valid UTF-8".to_owned(),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("row has {len} fields, header has {expected_len}")
        }
        _ => e.to_string(),
    };
    ParseError::new(line, None, message)
}

fn field(record: &csv::StringRecord, idx: usize) -> &str {
    record.get(idx).unwrap_or("")
}

fn parse_id(line: u64, record: &csv::StringRecord, idx: usize) -> Result<TaskId, ParseError> {
    let raw = field(record, idx);
    match raw.parse::<TaskId>() {
        Ok(0) => Err(ParseError::new(Some(line), Some(TASK_ID), "task id must be positive")),
        Ok(id) => Ok(id),
        Err(_) => Err(ParseError::new(
            Some(line),
            Some(TASK_ID),
            format!("`{raw}` is not a positive integer"),
        )),
    }
}

fn parse_value(line: u64, record: &csv::StringRecord, idx: usize, column: &str) -> Result<Exact, ParseError> {
    parse_decimal(field(record, idx)).map_err(|e| ParseError::new(Some(line), Some(column), e.to_string()))
}

/// Optional column: absent or blank means zero.
fn parse_optional(
    line: u64,
    record: &csv::StringRecord,
    idx: Option<usize>,
    column: &str,
) -> Result<Exact, ParseError> {
    match idx {
        Some(i) if !field(record, i).is_empty() => parse_value(line, record, i, column),
        _ => Ok(Exact::zero()),
    }
}

fn non_negative(line: u64, column: &str, x: Exact) -> Result<Exact, ParseError> {
    if x.is_negative() {
        Err(ParseError::new(Some(line), Some(column), "must not be negative"))
    } else {
        Ok(x)
    }
}

/// Parses a task table, keeping file order.
pub fn parse_tasks(data: &[u8]) -> Result<Vec<Task>, ParseError> {
    let table = Table::read(data)?;
    table.reject_unknown(&[TASK_ID, DESCRIPTION, CYCLE_TIME, DEV_PLUS, DEV_MINUS])?;
    let id_col = table.require(TASK_ID)?;
    let desc_col = table.require(DESCRIPTION)?;
    let ct_col = table.require(CYCLE_TIME)?;
    let plus_col = table.index(DEV_PLUS);
    let minus_col = table.index(DEV_MINUS);

    let mut seen = HashSet::new();
    let mut tasks = Vec::with_capacity(table.rows.len());
    for (line, record) in &table.rows {
        let line = *line;
        let id = parse_id(line, record, id_col)?;
        if !seen.insert(id) {
            return Err(ParseError::new(Some(line), Some(TASK_ID), format!("duplicate task id {id}")));
        }
        let cycle_time = parse_value(line, record, ct_col, CYCLE_TIME)?;
        if !cycle_time.is_positive() {
            return Err(ParseError::new(
                Some(line),
                Some(CYCLE_TIME),
                format!("cycle time must be positive, got `{}`", field(record, ct_col)),
            ));
        }
        let dev_plus = non_negative(line, DEV_PLUS, parse_optional(line, record, plus_col, DEV_PLUS)?)?;
        let dev_minus = non_negative(line, DEV_MINUS, parse_optional(line, record, minus_col, DEV_MINUS)?)?;
        let task = Task::with_deviation(id, field(record, desc_col), cycle_time, dev_plus, dev_minus)
            .map_err(|e| ParseError::new(Some(line), None, e.to_string()))?;
        tasks.push(task);
    }
    if tasks.is_empty() {
        return Err(ParseError::new(None, None, "task table has no rows"));
    }
    Ok(tasks)
}

/// Writes tasks back out in the task-table layout. Every value parsed from a
/// table is a terminating decimal, so this is lossless for parsed input.
pub fn emit_tasks(tasks: &[Task]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([TASK_ID, DESCRIPTION, CYCLE_TIME, DEV_PLUS, DEV_MINUS])
        .expect("in-memory write");
    let render = |x: Exact| format_exact_decimal(x, 6).unwrap_or_else(|| x.to_string());
    for t in tasks {
        writer
            .write_record([
                t.id.to_string(),
                t.description.clone(),
                render(t.cycle_time),
                render(t.dev_plus),
                render(t.dev_minus),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    /// `plus`/`minus` are offsets from the effective cycle time.
    Offsets,
    /// `plus`/`minus` are the upper/lower effective cycle times themselves.
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationRow {
    pub task: TaskId,
    pub plus: Exact,
    pub minus: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationTable {
    pub kind: DeviationKind,
    pub rows: Vec<DeviationRow>,
}

impl DeviationTable {
    /// Turns the table into per-task deviations for the given allocation.
    /// Bounds tables are resolved against each task's effective cycle time.
    pub fn resolve(&self, plan: &ProcessPlan, allocation: &Allocation) -> Result<Deviations, RobustError> {
        let effective: BTreeMap<TaskId, Exact> = effective_cycle_times(plan, allocation)?.into_iter().collect();
        let mut out = Deviations::new();
        for row in &self.rows {
            let Some(&eff) = effective.get(&row.task) else {
                // Rows for tasks outside the plan carry no information here.
                continue;
            };
            let d = match self.kind {
                DeviationKind::Offsets => Deviation::new(row.plus, row.minus)?,
                DeviationKind::Bounds => Deviation::from_bounds(row.task, eff, row.plus, row.minus)?,
            };
            out.insert(row.task, d);
        }
        Ok(out)
    }
}

pub fn parse_deviations(data: &[u8]) -> Result<DeviationTable, ParseError> {
    let table = Table::read(data)?;
    let offsets = table.index(DEV_PLUS).is_some() || table.index(DEV_MINUS).is_some();
    let bounds = table.index(CT_PLUS).is_some() || table.index(CT_MINUS).is_some();
    let (kind, plus_name, minus_name) = match (offsets, bounds) {
        (true, false) => (DeviationKind::Offsets, DEV_PLUS, DEV_MINUS),
        (false, true) => (DeviationKind::Bounds, CT_PLUS, CT_MINUS),
        (true, true) => {
            return Err(ParseError::new(
                Some(1),
                None,
                "use either dev_plus_sec/dev_minus_sec or ct_plus_sec/ct_minus_sec, not both",
            ))
        }
        (false, false) => {
            return Err(ParseError::new(
                Some(1),
                None,
                "expected dev_plus_sec/dev_minus_sec or ct_plus_sec/ct_minus_sec columns",
            ))
        }
    };
    let mut allowed = vec![TASK_ID, plus_name, minus_name];
    allowed.extend_from_slice(DEVIATION_INFO);
    table.reject_unknown(&allowed)?;
    let id_col = table.require(TASK_ID)?;
    let plus_col = table.require(plus_name)?;
    let minus_col = table.require(minus_name)?;

    let mut seen = HashSet::new();
    let mut rows = Vec::with_capacity(table.rows.len());
    for (line, record) in &table.rows {
        let line = *line;
        let task = parse_id(line, record, id_col)?;
        if !seen.insert(task) {
            return Err(ParseError::new(Some(line), Some(TASK_ID), format!("duplicate task id {task}")));
        }
        let plus = non_negative(line, plus_name, parse_value(line, record, plus_col, plus_name)?)?;
        let minus = non_negative(line, minus_name, parse_value(line, record, minus_col, minus_name)?)?;
        if kind == DeviationKind::Bounds && (minus > plus || !minus.is_positive()) {
            return Err(ParseError::new(
                Some(line),
                Some(minus_name),
                "lower bound must be positive and not above the upper bound",
            ));
        }
        rows.push(DeviationRow { task, plus, minus });
    }
    if rows.is_empty() {
        return Err(ParseError::new(None, None, "deviation table has no rows"));
    }
    Ok(DeviationTable { kind, rows })
}
