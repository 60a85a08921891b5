use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hangerline::balancer::{self, BalanceError, Method};
use hangerline::io::{self, Format, IoError};
use hangerline::metrics::{self, MetricsError};
use hangerline::model::{Allocation, Exact, ModelError, ProcessPlan};
use hangerline::robust::{self, Deviations, RobustError};
use hangerline::simulator::{self, Release, ServiceModel, SimConfig, SimError};

const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "hangerline", version, about = "Balance, analyse and simulate hanger sewing lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct PlanArgs {
    /// Task table (task_id, description, cycle_time_sec[, dev_plus_sec, dev_minus_sec])
    #[arg(long)]
    tasks: PathBuf,
    /// Seat budget (total workstations)
    #[arg(long)]
    seats: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Allocate parallel workstations under the seat budget
    Balance {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "greedy")]
        method: Method,
        /// Stop splitting once the line cycle time reaches this (greedy only)
        #[arg(long, value_parser = parse_exact)]
        target_ct: Option<Exact>,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// One station per task versus the balanced line
    Compare {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "greedy")]
        method: Method,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Best/worst line cycle time under cycle-time deviations
    Robust {
        #[command(flatten)]
        plan: PlanArgs,
        /// Deviation table (offsets or absolute bounds)
        #[arg(long)]
        deviations: PathBuf,
        #[arg(long, default_value = "1", value_parser = parse_exact)]
        alpha: Exact,
        #[arg(long, default_value = "greedy")]
        method: Method,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Regular/best/worst cycle times over a grid of alpha values, as CSV
    Sweep {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        deviations: PathBuf,
        /// start:stop:step
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value = "greedy")]
        method: Method,
    },
    /// Discrete-event simulation of the balanced line
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        /// Simulated hours
        #[arg(long)]
        hours: f64,
        /// Hours excluded from statistics
        #[arg(long, default_value_t = 0.0)]
        warmup: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "deterministic")]
        service: io::ServiceKind,
        /// Per-stage queue limit (unbounded when omitted)
        #[arg(long)]
        queue_cap: Option<u32>,
        /// Release one piece every N seconds instead of keeping the first stage saturated
        #[arg(long)]
        release_interval: Option<f64>,
        /// Deviation table for uniform service (task-table deviations otherwise)
        #[arg(long)]
        deviations: Option<PathBuf>,
        #[arg(long, default_value = "1", value_parser = parse_exact)]
        alpha: Exact,
        /// Check throughput and bottleneck utilization against the static model
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        #[arg(long, default_value = "greedy")]
        method: Method,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Balance, compare, analyse and simulate from a JSON run configuration
    Run {
        #[arg(long)]
        tasks: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        deviations: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: Format,
    },
}

fn parse_exact(s: &str) -> Result<Exact, String> {
    io::parse_decimal(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::input(e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::InfeasibleBudget { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<BalanceError> for CliError {
    fn from(e: BalanceError) -> Self {
        match e {
            BalanceError::Model(m) => m.into(),
            other => CliError::input(other),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Model(m) => m.into(),
            other => CliError::input(other),
        }
    }
}

impl From<RobustError> for CliError {
    fn from(e: RobustError) -> Self {
        match e {
            RobustError::Model(m) => m.into(),
            RobustError::Metrics(m) => m.into(),
            other => CliError::input(other),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(m) => m.into(),
            SimError::Robust(r) => r.into(),
            other => CliError::input(other),
        }
    }
}

fn load_plan(args: &PlanArgs) -> Result<ProcessPlan, CliError> {
    let tasks = io::load_tasks(&args.tasks)?;
    Ok(ProcessPlan::new(tasks, args.seats)?)
}

fn balanced(plan: &ProcessPlan, method: Method) -> Result<Allocation, CliError> {
    Ok(balancer::balance(plan, method, None)?.allocation)
}

fn deviations_for(
    plan: &ProcessPlan,
    allocation: &Allocation,
    path: Option<&PathBuf>,
) -> Result<Deviations, CliError> {
    let mut deviations = robust::plan_deviations(plan);
    if let Some(path) = path {
        let table = io::load_deviations(path)?;
        deviations.extend(table.resolve(plan, allocation)?);
    }
    Ok(deviations)
}

struct SimRequest<'a> {
    config: SimConfig,
    verify: bool,
    tol: f64,
    format: Format,
    plan: &'a ProcessPlan,
    allocation: &'a Allocation,
}

fn run_simulation(req: SimRequest<'_>) -> Result<String, CliError> {
    let result = simulator::simulate(req.plan, req.allocation, &req.config)?;
    if !result.conservation.holds() {
        return Err(CliError::internal(format!(
            "piece conservation violated: {:?}",
            result.conservation
        )));
    }
    let verification = if req.verify {
        Some(simulator::verify_against_static(&result, req.plan, req.allocation, req.tol)?)
    } else {
        None
    };
    let out = io::emit_sim(req.plan, &result, verification.as_ref(), req.format);
    if verification.as_ref().is_some_and(|v| !v.passed) {
        print!("{out}");
        return Err(CliError::internal("simulation disagrees with the static line model"));
    }
    Ok(out)
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Balance {
            plan,
            method,
            target_ct,
            format,
        } => {
            let plan = load_plan(&plan)?;
            let result = balancer::balance(&plan, method, target_ct)?;
            Ok(io::emit_balance(&plan, &result, format)?)
        }
        Command::Compare { plan, method, format } => {
            let plan = load_plan(&plan)?;
            let allocation = balanced(&plan, method)?;
            let comparison = metrics::compare(&plan, &Allocation::uniform(&plan, 1), &allocation)?;
            Ok(io::emit_comparison(&comparison, format))
        }
        Command::Robust {
            plan,
            deviations,
            alpha,
            method,
            format,
        } => {
            let plan = load_plan(&plan)?;
            let allocation = balanced(&plan, method)?;
            let deviations = deviations_for(&plan, &allocation, Some(&deviations))?;
            let intervals = robust::task_intervals(&plan, &allocation, &deviations, alpha)?;
            let report = robust::robust_line_report(&plan, &allocation, &intervals)?;
            Ok(io::emit_robust(&plan, &report, format))
        }
        Command::Sweep {
            plan,
            deviations,
            alphas,
            method,
        } => {
            let plan = load_plan(&plan)?;
            let allocation = balanced(&plan, method)?;
            let deviations = deviations_for(&plan, &allocation, Some(&deviations))?;
            let grid = io::parse_alpha_range(&alphas).map_err(CliError::input)?;
            let sweep = robust::alpha_sweep(&plan, &allocation, &deviations, &grid)?;
            Ok(io::emit_plot_data(&sweep))
        }
        Command::Simulate {
            plan,
            hours,
            warmup,
            seed,
            service,
            queue_cap,
            release_interval,
            deviations,
            alpha,
            verify,
            tol,
            method,
            format,
        } => {
            let plan = load_plan(&plan)?;
            let allocation = balanced(&plan, method)?;
            let service = match service {
                io::ServiceKind::Deterministic => ServiceModel::Deterministic,
                io::ServiceKind::Uniform => ServiceModel::UniformInterval {
                    alpha,
                    deviations: Some(deviations_for(&plan, &allocation, deviations.as_ref())?),
                },
            };
            let config = SimConfig {
                horizon: hours * 3600.0,
                warmup: warmup * 3600.0,
                service,
                seed,
                queue_capacity: queue_cap,
                release: release_interval.map_or(Release::Saturated, |interval| Release::Paced { interval }),
                ..SimConfig::default()
            };
            run_simulation(SimRequest {
                config,
                verify,
                tol,
                format,
                plan: &plan,
                allocation: &allocation,
            })
        }
        Command::Run {
            tasks,
            config,
            deviations,
            format,
        } => {
            let cfg = io::load_run_config(&config)?;
            let period = cfg.period().map_err(CliError::input)?;
            let plan = ProcessPlan::with_period(io::load_tasks(&tasks)?, cfg.seats, period)?;
            let result = balancer::balance(&plan, cfg.method, None)?;
            let allocation = &result.allocation;
            let mut out = io::emit_balance(&plan, &result, format)?;
            let comparison = metrics::compare(&plan, &Allocation::uniform(&plan, 1), allocation)?;
            out.push_str(&io::emit_comparison(&comparison, format));
            let devs = deviations_for(&plan, allocation, deviations.as_ref())?;
            let alpha = cfg.alpha_exact().map_err(CliError::input)?;
            let intervals = robust::task_intervals(&plan, allocation, &devs, alpha)?;
            let report = robust::robust_line_report(&plan, allocation, &intervals)?;
            out.push_str(&io::emit_robust(&plan, &report, format));
            if let Some(mut sim) = cfg.sim_config().map_err(CliError::input)? {
                if let ServiceModel::UniformInterval { deviations, .. } = &mut sim.service {
                    *deviations = Some(devs.clone());
                }
                let verify = matches!(sim.service, ServiceModel::Deterministic);
                out.push_str(&run_simulation(SimRequest {
                    config: sim,
                    verify,
                    tol: 0.02,
                    format,
                    plan: &plan,
                    allocation,
                })?);
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
