//! Double-edge computation offloading for sea-surface vessels served by
//! UAV and LEO-satellite edge servers.
//!
//! The library models the physical layer (air-sea Rician channel,
//! satellite pass geometry, transmit-power inversion, compute costs),
//! evaluates offloading plans against the full constraint set, and
//! minimizes system energy with a layered alternating solver: bisection
//! on convex per-ship objectives for the offloading ratio and volume,
//! and deadline-tight closed forms for the edge CPU shares. Three
//! comparison schemes and brute-force grid oracles round out the
//! experiment harness.
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --example channel_and_orbit
//! cargo run --example evaluate_plan
//! cargo run --example solve_default
//! cargo run --example compare_schemes
//! cargo run --example sweep_task_size
//! cargo run --example grid_oracle
//! ```
//!
//! or the `samin` binary (`solve`, `sweep`, `compare`, `plot`).

// `!(x > 0.0)` is the NaN-rejecting form of the positivity guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod channel;
pub mod cli;
pub mod config;
pub mod geometry;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod params;
pub mod plot;
pub mod scenario;
pub mod sweep;

pub use baselines::{eacr_solve, eos_solve, pomt_solve, solve_best, solve_scheme, Scheme};
pub use channel::{leo_channel_gain_sq, realize_channel, uav_channel_gain, ChannelMode, ChannelRealization};
pub use config::{parse_config, serialize_config, ScenarioConfig, SweepVariable};
pub use geometry::{distance3d, leo_geometry, LeoGeometry, Position3D};
pub use model::{compute_cost, evaluate_plan, leo_tx_power_energy, uav_tx_power_energy, Metrics, OffloadPlan};
pub use optimizer::{
    mris, optimal_rho_leo, optimal_rho_uav, stp_solve, stp_solve_with, MassContext, ScalarProblem,
    SolveConfig, SolveReport,
};
pub use oracle::{grid_min_scalar, joint_grid_min, Axis, GridSpec};
pub use params::SystemParams;
pub use scenario::{default_scenario, single_mass_scenario, Scenario, ScenarioBuilder, Task};
