//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hangerline::balancer::{self, Method};
use hangerline::io::{self, fixtures, Format};
use hangerline::metrics;
use hangerline::model::{self, Allocation, Exact, ProcessPlan, Task};
use hangerline::robust;
use hangerline::simulator::{self, Release, ServiceModel, SimConfig};

const BIN: &str = env!("CARGO_BIN_EXE_hangerline");
const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn pct(x: Exact) -> f64 {
    model::to_f64(x) * 100.0
}

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn balanced_counts() -> BTreeMap<u32, u32> {
    let mut expected: BTreeMap<u32, u32> = fixtures::shirt_tasks().iter().map(|t| (t.id, 1)).collect();
    for id in [37, 40] {
        expected.insert(id, 3);
    }
    for id in [21, 25, 35, 36, 39, 42, 43, 44, 45] {
        expected.insert(id, 2);
    }
    expected
}

fn balanced_line() -> (ProcessPlan, Allocation) {
    let plan = fixtures::shirt_plan(32).unwrap();
    let alloc = balancer::balance(&plan, Method::Greedy, None).unwrap().allocation;
    (plan, alloc)
}

fn golden_allocation() -> Outcome {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(["balance", "--method", "greedy", "--seats", "32", "--format", "json", "--tasks"])
        .arg(fixture("shirt_main_assembly.csv"))
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let stations: BTreeMap<u32, u32> = json["allocation"]["stations"]
        .as_object()
        .ok_or("missing allocation")?
        .iter()
        .map(|(k, v)| (k.parse().unwrap(), v.as_u64().unwrap() as u32))
        .collect();
    ensure(stations == balanced_counts(), || format!("allocation {stations:?}"))?;
    let total: u32 = stations.values().sum();
    ensure(total == 32, || format!("{total} seats"))?;
    ensure(json["line_cycle_time"] == "40", || format!("line CT {}", json["line_cycle_time"]))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("expected counts, 32 seats, CT 40 sec/pc in {elapsed:?}"))
}

fn optimal_matches_greedy() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (seats, want) in [(32, 40), (19, 120)] {
        let plan = fixtures::shirt_plan(seats).unwrap();
        for method in [Method::Greedy, Method::Optimal] {
            let r = balancer::balance(&plan, method, None).map_err(|e| e.to_string())?;
            ensure(r.line_cycle_time == Exact::from_integer(want), || {
                format!("{method} at {seats} seats gave {}", r.line_cycle_time)
            })?;
            ensure(r.total_stations() <= seats, || format!("{method} used {} seats", r.total_stations()))?;
        }
        notes.push(format!("{seats} seats -> {want}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} for greedy and optimal in {elapsed:?}", notes.join(", ")))
}

fn random_plan(rng: &mut ChaCha8Rng) -> ProcessPlan {
    let n = rng.gen_range(1..=8u32);
    let budget = rng.gen_range(n..=12);
    let tasks = (1..=n)
        .map(|id| Task::new(id, format!("t{id}"), Exact::from_integer(rng.gen_range(1..=120))).unwrap())
        .collect();
    ProcessPlan::new(tasks, budget).unwrap()
}

fn oracle_equivalence() -> Outcome {
    const INSTANCES: usize = 1500;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1ab5);
    for i in 0..INSTANCES {
        let plan = random_plan(&mut rng);
        let g = balancer::balance(&plan, Method::Greedy, None).map_err(|e| e.to_string())?;
        let o = balancer::balance(&plan, Method::Optimal, None).map_err(|e| e.to_string())?;
        let x = balancer::balance(&plan, Method::Exhaustive, None).map_err(|e| e.to_string())?;
        let describe = || {
            let times: Vec<String> = plan.tasks().iter().map(|t| t.cycle_time.to_string()).collect();
            format!("instance {i} times [{}] budget {}", times.join(","), plan.seat_budget())
        };
        ensure(
            g.line_cycle_time == o.line_cycle_time && o.line_cycle_time == x.line_cycle_time,
            || format!("{}: greedy {} optimal {} exhaustive {}", describe(), g.line_cycle_time, o.line_cycle_time, x.line_cycle_time),
        )?;
        let lb = model::parallel_lower_bound(plan.tasks(), plan.seat_budget()).unwrap();
        let max_t = plan.tasks().iter().map(|t| t.cycle_time).max().unwrap();
        for r in [&g, &o, &x] {
            ensure(lb <= r.line_cycle_time && r.line_cycle_time <= max_t, || {
                format!("{}: {} CT {} outside [{lb}, {max_t}]", describe(), r.method, r.line_cycle_time)
            })?;
            ensure(r.total_stations() <= plan.seat_budget(), || format!("{}: over budget", describe()))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{INSTANCES} random instances agree and respect the bounds in {elapsed:?}"))
}

fn metrics_figures() -> Outcome {
    let (plan, alloc) = balanced_line();
    let work = model::work_content(plan.tasks()).unwrap();
    ensure(work == Exact::from_integer(1090), || format!("work content {work}"))?;
    let cmp = metrics::compare(&plan, &Allocation::uniform(&plan, 1), &alloc).map_err(|e| e.to_string())?;
    ensure(cmp.before.output_per_hour == Exact::from_integer(30), || "before throughput".into())?;
    ensure(cmp.after.output_per_hour == Exact::from_integer(90), || "after throughput".into())?;
    let (ub, ua) = (model::to_f64(cmp.before.upph), model::to_f64(cmp.after.upph));
    ensure(within(ub, 1.5789, 1e-4), || format!("UPPH before {ub}"))?;
    ensure(within(ua, 2.8125, 1e-4), || format!("UPPH after {ua}"))?;
    let (full, quoted) = (pct(cmp.improvement), pct(cmp.improvement_quoted));
    let show = |x: Exact| model::format_rounded(x * Exact::from_integer(100), 2);
    ensure(within(full, 78.13, 0.01), || format!("improvement {full}"))?;
    ensure(within(quoted, 78.98, 0.01), || format!("quoted improvement {quoted}"))?;
    let text = io::emit_comparison(&cmp, Format::Table);
    ensure(text.contains("78.13%") && text.contains("78.98%"), || "report lacks both figures".into())?;
    Ok(format!(
        "1090 s, 30 -> 90 pc/hr, UPPH {ub:.4} -> {ua:.4}, improvement {}% (truncated inputs {}%)",
        show(cmp.improvement),
        show(cmp.improvement_quoted)
    ))
}

fn robust_figures() -> Outcome {
    let (plan, alloc) = balanced_line();
    let devs = fixtures::shirt_deviations().resolve(&plan, &alloc).map_err(|e| e.to_string())?;
    let intervals = robust::task_intervals(&plan, &alloc, &devs, Exact::from_integer(1)).map_err(|e| e.to_string())?;
    let r = robust::robust_line_report(&plan, &alloc, &intervals).map_err(|e| e.to_string())?;
    ensure(r.worst == Exact::from_integer(42) && r.best == Exact::from_integer(38), || {
        format!("worst {} best {}", r.worst, r.best)
    })?;
    ensure(r.throughput_worst == 85 && r.throughput_best == 95, || {
        format!("throughput {}..{}", r.throughput_worst, r.throughput_best)
    })?;
    let (lo, hi) = (model::to_f64(r.upph_min), model::to_f64(r.upph_max));
    ensure(within(lo, 2.656, 0.005) && within(hi, 2.969, 0.005), || format!("UPPH {lo}..{hi}"))?;
    let (emin, emax) = (pct(r.eff_min_quoted), pct(r.eff_max_quoted));
    ensure(within(emin, 69.0, 1.0) && within(emax, 89.0, 1.0), || format!("Eff {emin}..{emax}"))?;
    Ok(format!(
        "CT 38..42, 85..95 pc/hr, UPPH {lo:.4}..{hi:.4}, Eff {emin:.2}%..{emax:.2}%"
    ))
}

fn simulator_vs_static() -> Outcome {
    let (plan, balanced) = balanced_line();
    let config = SimConfig {
        release: Release::Paced { interval: 40.0 },
        ..SimConfig::hours(8.0, 1.0)
    };

    let start = Instant::now();
    let r = simulator::simulate(&plan, &balanced, &config).map_err(|e| e.to_string())?;
    let balanced_throughput = r.throughput;
    let t2 = start.elapsed();
    ensure(within(r.throughput, 90.0, 0.02 * 90.0), || format!("balanced throughput {}", r.throughput))?;
    for (k, task) in r.stage_tasks.iter().enumerate() {
        if let Some(trend) = simulator::queue_trend(&r, k) {
            ensure(!(trend.slope > 1e-9 && trend.r_squared > 0.5), || {
                format!("queue before task {task} trends up: {trend:?}")
            })?;
        }
    }
    let max_queue = r.wip_timeseries.queues.iter().flatten().copied().max().unwrap_or(0);
    ensure(max_queue <= 2, || format!("balanced line queue reached {max_queue}"))?;
    ensure(t2 < Duration::from_secs(10), || format!("balanced run took {t2:?}"))?;

    let start = Instant::now();
    let r = simulator::simulate(&plan, &Allocation::uniform(&plan, 1), &config).map_err(|e| e.to_string())?;
    let t1 = start.elapsed();
    ensure(within(r.throughput, 30.0, 0.02 * 30.0), || format!("unbalanced throughput {}", r.throughput))?;
    let stage = r.stage_of(37).ok_or("no stage for task 37")?;
    let trend = simulator::queue_trend(&r, stage).ok_or("no samples")?;
    ensure(trend.is_growing(0.9), || format!("queue before task 37: {trend:?}"))?;
    ensure(t1 < Duration::from_secs(10), || format!("unbalanced run took {t1:?}"))?;

    Ok(format!(
        "release every 40 s; balanced {:.2} pc/hr, max queue {max_queue} ({t2:?}); one-per-task {:.2} pc/hr, queue before 37 slope {:.2}/h R2 {:.3} ({t1:?})",
        balanced_throughput,
        r.throughput,
        trend.slope * 3600.0,
        trend.r_squared
    ))
}

fn simulator_properties() -> Outcome {
    let (plan, alloc) = balanced_line();
    let devs = fixtures::shirt_deviations().resolve(&plan, &alloc).map_err(|e| e.to_string())?;
    let uniform = |seed| SimConfig {
        service: ServiceModel::UniformInterval {
            alpha: Exact::from_integer(1),
            deviations: Some(devs.clone()),
        },
        seed,
        ..SimConfig::hours(8.0, 1.0)
    };

    let mut checked = 0;
    let mut total = 0.0;
    const SEEDS: u64 = 10;
    for seed in 0..SEEDS {
        let r = simulator::simulate(&plan, &alloc, &uniform(seed)).map_err(|e| e.to_string())?;
        let w = &r.wip_timeseries;
        for j in 0..w.times.len() {
            ensure(w.released[j] == w.completed[j] + w.in_flight[j], || {
                format!("seed {seed}: conservation broken at t = {}", w.times[j])
            })?;
            checked += 1;
        }
        ensure(r.conservation.holds(), || format!("seed {seed}: final counters {:?}", r.conservation))?;
        total += r.throughput;
    }
    let mean = total / SEEDS as f64;
    let (lo, hi) = (85.0 * 0.95, 95.0 * 1.05);
    ensure((lo..=hi).contains(&mean), || format!("mean throughput {mean} outside [{lo}, {hi}]"))?;

    let a = simulator::simulate(&plan, &alloc, &uniform(42)).map_err(|e| e.to_string())?;
    let b = simulator::simulate(&plan, &alloc, &uniform(42)).map_err(|e| e.to_string())?;
    let same = a == b
        && serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap()
        && a.trace_digest == b.trace_digest;
    ensure(same, || "replay with seed 42 differs".into())?;
    let c = simulator::simulate(&plan, &alloc, &uniform(43)).map_err(|e| e.to_string())?;
    ensure(c.trace_digest != a.trace_digest, || "seeds 42 and 43 give the same trace".into())?;

    Ok(format!(
        "conservation at {checked} samples, replay identical, mean uniform throughput {mean:.2} pc/hr over {SEEDS} seeds"
    ))
}

fn exit_code(args: &[&str]) -> Result<i32, String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "killed by signal".to_owned())
}

fn round_trip_and_exit_codes() -> Outcome {
    let text = std::fs::read_to_string(fixture("shirt_main_assembly.csv")).map_err(|e| e.to_string())?;
    let tasks = io::parse_tasks(text.as_bytes()).map_err(|e| e.to_string())?;
    let emitted = io::emit_tasks(&tasks);
    let again = io::parse_tasks(emitted.as_bytes()).map_err(|e| e.to_string())?;
    ensure(again == tasks, || "parsed tasks differ after emit".into())?;
    ensure(io::emit_tasks(&again) == emitted, || "emitted text is not stable".into())?;

    let dir = std::env::temp_dir().join(format!("hangerline-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "task_id,description,cycle_time_sec\n1,a,abc\n").map_err(|e| e.to_string())?;
    let bad = bad.to_string_lossy().into_owned();
    let good = fixture("shirt_main_assembly.csv");

    let malformed = exit_code(&["balance", "--tasks", &bad, "--seats", "4"])?;
    let missing = exit_code(&["balance", "--tasks", "/nonexistent/tasks.csv", "--seats", "4"])?;
    let infeasible = exit_code(&["balance", "--tasks", &good, "--seats", "18"])?;
    let ok = exit_code(&["balance", "--tasks", &good, "--seats", "32"])?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(malformed == 2, || format!("malformed input exited {malformed}"))?;
    ensure(missing == 2, || format!("missing file exited {missing}"))?;
    ensure(infeasible == 3, || format!("18 seats for 19 tasks exited {infeasible}"))?;
    ensure(ok == 0, || format!("valid run exited {ok}"))?;
    Ok(format!("{} tasks round-trip exactly; exit codes 2/2/3/0", tasks.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden 32-seat allocation", golden_allocation),
        ("optimal equals greedy on the case study", optimal_matches_greedy),
        ("greedy/optimal/exhaustive agree on random instances", oracle_equivalence),
        ("productivity metrics", metrics_figures),
        ("robust bounds", robust_figures),
        ("simulation matches the static model", simulator_vs_static),
        ("simulator properties", simulator_properties),
        ("round trip and exit codes", round_trip_and_exit_codes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
