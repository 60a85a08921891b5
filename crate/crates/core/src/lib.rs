//! Line balancing for one-piece-flow hanger sewing lines.
//!
//! Given an ordered task table and a seat budget, the crate decides how many
//! parallel workstations each task gets so the slowest stage is as fast as
//! possible, reports the resulting throughput and units per person-hour,
//! widens the result under cycle-time uncertainty, and replays the line in a
//! discrete-event simulator to check the static figures dynamically.
//!
//! ```
//! use hangerline::balancer::greedy_balance;
//! use hangerline::io::fixtures;
//! use hangerline::model::Exact;
//!
//! let plan = fixtures::shirt_plan(32).unwrap();
//! let result = greedy_balance(&plan, None).unwrap();
//! assert_eq!(result.line_cycle_time, Exact::from_integer(40));
//! assert_eq!(result.total_stations(), 32);
//! ```

pub mod balancer;
pub mod io;
pub mod metrics;
pub mod model;
pub mod robust;
pub mod simulator;

pub use balancer::{balance, BalanceError, BalanceResult, Method};
pub use model::{Allocation, Exact, ModelError, ProcessPlan, Task, TaskId};
pub use simulator::{simulate, SimConfig, SimResult};
