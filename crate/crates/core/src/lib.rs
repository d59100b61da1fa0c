//! Finds user positions that maximize system throughput around a single
//! Wi-Fi access point.
//!
//! All users share one AP, so one slow user drags down everyone's share of
//! the medium. The library models per-user rates with a collision-weighted
//! Shannon formula over an SINR path-loss link budget, casts "where should
//! users stand" as a common-interest potential game between a pair of
//! moving users, and searches for its Nash equilibrium with spatial
//! adaptive play (annealed logit sampling). An all-pairs optimizer plays
//! the game for every pair of users and keeps the best outcome; three
//! baselines (no movement, interference-blind greedy, new-users-only game)
//! support comparisons. A brute-force oracle provides exhaustive ground
//! truth on coarse grids, and a sweep harness emits reproducible CSVs.
//!
//! Modules:
//! - [`radio`]: received power, SNR/SINR, capture constraint, rates.
//! - [`game`]: scenario/profile types, utilities, throughput, tie-breaks.
//! - [`sap`]: spatial adaptive play for a fixed moving pair.
//! - [`optimizer`]: the all-pairs method and the three baselines.
//! - [`oracle`]: exhaustive joint-grid search and Nash certificates.
//! - [`scenario`]: bundled patterns, scenario files, run manifests.
//! - [`report`]: sweeps, CSV/provenance output, summaries.
//!
//! # Example
//!
//! ```
//! use apmove::{optimizer, scenario, RateMode, SolveBackend, StrategyGrid};
//!
//! // Pattern II with user A starting 30 m out; solve the pair game for
//! // every pair of users by exhaustive search on the coarse grid.
//! let s = scenario::make_pattern(scenario::PatternId::II, 30.0, 90.0).unwrap();
//! let best = optimizer::optimize_all_pairs(
//!     &s,
//!     &StrategyGrid::coarse(),
//!     &SolveBackend::Exhaustive,
//!     RateMode::Exact,
//! )
//! .unwrap();
//!
//! let no_move = optimizer::baseline_no_move(&s, RateMode::Exact).unwrap();
//! assert!(best.theta_bps > no_move.theta_bps);
//! assert!(best.delta_theta.unwrap() > 1.0);
//! ```

pub mod game;
pub mod optimizer;
pub mod oracle;
pub mod radio;
pub mod report;
pub mod sap;
pub mod scenario;

pub use game::{
    Arena, GameError, MovingPair, Point, Position, PositionProfile, Role, Scenario, StrategyGrid,
    User, UserId,
};
pub use optimizer::{Method, OptimizationResult, OptimizerError, SolveBackend};
pub use oracle::{OracleError, OracleReport};
pub use radio::{RadioError, RadioParams, RateMode};
pub use report::{ReportError, RunArtifacts, SweepRow};
pub use sap::{BetaSchedule, SapConfig, SapError, SapOutcome, SapTrace};
pub use scenario::{PatternId, PatternTable, RunManifest, ScenarioError, ScenarioSource};
