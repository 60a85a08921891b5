use proptest::prelude::*;

use hangerline::balancer::{self, Method};
use hangerline::io::fixtures;
use hangerline::metrics;
use hangerline::model::{self, Allocation, Exact, ProcessPlan, Task};

fn plan_from(times: &[i128], seats: u32) -> ProcessPlan {
    let tasks = times
        .iter()
        .enumerate()
        .map(|(i, &t)| Task::new(i as u32 + 1, format!("op{}", i + 1), Exact::from_integer(t)).unwrap())
        .collect();
    ProcessPlan::new(tasks, seats).unwrap()
}

/// Smallest achievable max(t_i / s_i) over every allocation with s_i >= 1 and
/// sum s_i <= seats, by plain enumeration.
fn brute_force_ct(times: &[i128], seats: u32) -> Exact {
    fn go(times: &[i128], left: u32, worst: Exact, best: &mut Option<Exact>) {
        let Some((&t, rest)) = times.split_first() else {
            if best.is_none_or(|b| worst < b) {
                *best = Some(worst);
            }
            return;
        };
        let reserve = rest.len() as u32;
        for s in 1..=left - reserve {
            let eff = Exact::new(t, s as i128);
            go(rest, left - s, worst.max(eff), best);
        }
    }
    let mut best = None;
    go(times, seats, Exact::from_integer(0), &mut best);
    best.unwrap()
}

fn instance() -> impl Strategy<Value = (Vec<i128>, u32)> {
    prop::collection::vec(1i128..=120, 1..=6).prop_flat_map(|times| {
        let n = times.len() as u32;
        (Just(times), n..=n + 6)
    })
}

#[test]
fn greedy_log_on_the_shirt_line() {
    let plan = fixtures::shirt_plan(32).unwrap();
    let r = balancer::balance(&plan, Method::Greedy, None).unwrap();
    let tasks: Vec<u32> = r.iterations.iter().map(|s| s.task).collect();
    assert_eq!(tasks, [37, 40, 39, 43, 44, 45, 21, 35, 36, 37, 42, 40, 25]);
    let cts: Vec<Exact> = r.iterations.iter().map(|s| s.line_cycle_time).collect();
    let want: Vec<Exact> = [110, 80, 80, 80, 70, 60, 60, 60, 60, 60, 55, 50, 40]
        .into_iter()
        .map(Exact::from_integer)
        .collect();
    assert_eq!(cts, want);
}

#[test]
fn balanced_effective_times() {
    let plan = fixtures::shirt_plan(32).unwrap();
    let r = balancer::balance(&plan, Method::Greedy, None).unwrap();
    let eff = model::effective_cycle_times(&plan, &r.allocation).unwrap();
    let shown: Vec<String> = eff.iter().map(|(_, e)| model::display_ct(*e)).collect();
    assert_eq!(
        shown,
        ["30", "40", "30", "40", "25", "20", "25", "30", "30", "40", "40", "40", "36.7", "30", "30", "40", "40", "35", "35"]
    );
    assert_eq!(model::bottlenecks(&plan, &r.allocation).unwrap(), [20, 22, 37, 38, 39, 43, 44]);
}

#[test]
fn target_ct_stops_early() {
    let plan = fixtures::shirt_plan(32).unwrap();
    let r = balancer::balance(&plan, Method::Greedy, Some(Exact::from_integer(60))).unwrap();
    assert_eq!(r.line_cycle_time, Exact::from_integer(60));
    assert_eq!(r.total_stations(), 25);
}

#[test]
fn lower_bounds_of_the_shirt_line() {
    let tasks = fixtures::shirt_tasks();
    assert_eq!(model::classic_lower_bound(&tasks, 32).unwrap(), Exact::from_integer(120));
    assert_eq!(model::parallel_lower_bound(&tasks, 32).unwrap(), Exact::new(1090, 32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn all_methods_match_brute_force((times, seats) in instance()) {
        let plan = plan_from(&times, seats);
        let oracle = brute_force_ct(&times, seats);
        for method in [Method::Greedy, Method::Optimal, Method::Exhaustive] {
            let r = balancer::balance(&plan, method, None).unwrap();
            prop_assert_eq!(r.line_cycle_time, oracle, "{}", method);
            prop_assert_eq!(model::line_cycle_time(&plan, &r.allocation).unwrap(), r.line_cycle_time);
            prop_assert!(r.total_stations() <= seats);
            r.allocation.validate_for(&plan).unwrap();
        }
    }

    #[test]
    fn greedy_spends_the_whole_budget((times, seats) in instance()) {
        let plan = plan_from(&times, seats);
        let g = balancer::balance(&plan, Method::Greedy, None).unwrap();
        prop_assert_eq!(g.total_stations(), seats);
        prop_assert_eq!(g.iterations.len() as u32, seats - times.len() as u32);
        let o = balancer::balance(&plan, Method::Optimal, None).unwrap();
        prop_assert_eq!(o.total_stations(), seats);
    }

    #[test]
    fn results_are_sandwiched((times, seats) in instance()) {
        let plan = plan_from(&times, seats);
        let lb = model::parallel_lower_bound(plan.tasks(), seats).unwrap();
        let max_t = Exact::from_integer(*times.iter().max().unwrap());
        for method in [Method::Greedy, Method::Optimal, Method::Exhaustive] {
            let ct = balancer::balance(&plan, method, None).unwrap().line_cycle_time;
            prop_assert!(lb <= ct && ct <= max_t);
        }
    }

    #[test]
    fn balancing_is_deterministic((times, seats) in instance()) {
        let plan = plan_from(&times, seats);
        for method in [Method::Greedy, Method::Optimal] {
            let a = balancer::balance(&plan, method, None).unwrap();
            let b = balancer::balance(&plan.clone(), method, None).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn adding_a_station_never_slows_the_line(
        (times, seats) in instance(),
        pick in any::<prop::sample::Index>(),
        extra in prop::collection::vec(0u32..3, 6),
    ) {
        let plan = plan_from(&times, seats);
        let alloc = Allocation::from_pairs(
            plan.tasks().iter().zip(&extra).map(|(t, e)| (t.id, 1 + e)),
        );
        let before = model::line_cycle_time(&plan, &alloc).unwrap();
        let mut more = alloc.clone();
        more.increment(pick.index(times.len()) as u32 + 1);
        prop_assert!(model::line_cycle_time(&plan, &more).unwrap() <= before);
        if alloc.total_stations() <= seats {
            prop_assert!(model::parallel_lower_bound(plan.tasks(), seats).unwrap() <= before);
        }
    }

    #[test]
    fn scaling_times_scales_the_line(
        (times, seats) in instance(),
        num in 1i128..50,
        den in 1i128..50,
        extra in prop::collection::vec(0u32..3, 6),
    ) {
        let c = Exact::new(num, den);
        let plan = plan_from(&times, seats);
        let scaled = ProcessPlan::new(
            plan.tasks()
                .iter()
                .map(|t| Task::new(t.id, t.description.clone(), t.cycle_time * c).unwrap())
                .collect(),
            seats,
        ).unwrap();
        let alloc = Allocation::from_pairs(plan.tasks().iter().zip(&extra).map(|(t, e)| (t.id, 1 + e)));
        prop_assert_eq!(
            model::line_cycle_time(&scaled, &alloc).unwrap(),
            model::line_cycle_time(&plan, &alloc).unwrap() * c
        );
        prop_assert_eq!(
            model::bottlenecks(&scaled, &alloc).unwrap(),
            model::bottlenecks(&plan, &alloc).unwrap()
        );
        prop_assert_eq!(
            model::parallel_lower_bound(scaled.tasks(), seats).unwrap(),
            model::parallel_lower_bound(plan.tasks(), seats).unwrap() * c
        );
        prop_assert_eq!(
            model::classic_lower_bound(scaled.tasks(), seats).unwrap(),
            model::classic_lower_bound(plan.tasks(), seats).unwrap() * c
        );
    }

    #[test]
    fn throughput_times_ct_is_the_period(n in 1i128..100_000, d in 1i128..1000, p in 1i128..100_000) {
        let ct = Exact::new(n, d);
        let period = Exact::from_integer(p);
        prop_assert_eq!(model::throughput(ct, period).unwrap() * ct, period);
    }

    #[test]
    fn upph_is_homogeneous(o in 1i128..10_000, w in 1u32..100, c in 1u32..50) {
        let out = Exact::from_integer(o);
        prop_assert_eq!(
            metrics::upph(out * Exact::from_integer(c as i128), w * c).unwrap(),
            metrics::upph(out, w).unwrap()
        );
    }

    #[test]
    fn improvement_is_antisymmetric(a in 1i128..10_000, b in 1i128..10_000, d in 1i128..100) {
        let (x, y) = (Exact::new(a, d), Exact::new(b, d));
        let up = metrics::eff_improvement(x, y).unwrap();
        let down = metrics::eff_improvement(y, x).unwrap();
        prop_assert_eq!(up > Exact::from_integer(0), down < Exact::from_integer(0));
        prop_assert_eq!(up == Exact::from_integer(0), x == y);
        prop_assert_eq!(down == Exact::from_integer(0), x == y);
    }

    #[test]
    fn utilizations_peak_at_one((times, seats) in instance()) {
        let plan = plan_from(&times, seats);
        let alloc = balancer::balance(&plan, Method::Greedy, None).unwrap().allocation;
        let report = metrics::productivity(&plan, &alloc).unwrap();
        let one = Exact::from_integer(1);
        prop_assert!(report.utilization.iter().all(|u| u.utilization > Exact::from_integer(0) && u.utilization <= one));
        prop_assert!(report.utilization.iter().any(|u| u.utilization == one));
    }
}
