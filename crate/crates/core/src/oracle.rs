//! Exhaustive ground truth for the stochastic solver: brute-force search
//! over the joint strategy grid of a moving pair, plus a Nash certificate.
//!
//! Kept deliberately plain (no incremental evaluation, no caching) so it
//! stays an independent check on the optimized solver path.

use serde::Serialize;
use thiserror::Error;

use crate::game::{
    compare_outcomes, GameError, MovingPair, Position, PositionProfile, Scenario, StrategyGrid,
    UserId,
};
use crate::radio::RateMode;

/// Upper bound on joint profiles enumerated by default (2^22).
pub const DEFAULT_JOINT_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("joint strategy space of {profiles} profiles exceeds the budget of {budget}")]
    BudgetExceeded { profiles: usize, budget: usize },
    #[error("no feasible joint strategy for the moving pair")]
    NoFeasibleProfile,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Outcome of an exhaustive search over a pair's joint strategies.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub distances_m: Vec<f64>,
    pub angles_deg: Vec<f64>,
    /// Final positions per user, in scenario order.
    pub best_positions: Vec<(UserId, Position)>,
    pub best_theta_bps: f64,
    /// Joint strategies that passed arena and capture feasibility.
    pub feasible_profiles: usize,
    /// Raw joint strategy count |grid|^2.
    pub total_profiles: usize,
    pub nash_at_best: bool,
    #[serde(skip)]
    pub best_profile: PositionProfile,
}

/// Exact maximum of the system throughput over all feasible joint
/// strategies of the pair, with non-movers fixed at their initial
/// positions. Uses [`DEFAULT_JOINT_BUDGET`].
pub fn brute_force_best(
    scenario: &Scenario,
    pair: MovingPair,
    grid: &StrategyGrid,
    mode: RateMode,
) -> Result<OracleReport, OracleError> {
    brute_force_best_with_budget(scenario, pair, grid, mode, DEFAULT_JOINT_BUDGET)
}

pub fn brute_force_best_with_budget(
    scenario: &Scenario,
    pair: MovingPair,
    grid: &StrategyGrid,
    mode: RateMode,
    budget: usize,
) -> Result<OracleReport, OracleError> {
    pair.validate_for(scenario)?;
    let total = grid.num_strategies() * grid.num_strategies();
    if total > budget {
        return Err(OracleError::BudgetExceeded {
            profiles: total,
            budget,
        });
    }

    let candidates = grid.feasible_positions(&scenario.arena);
    let initial = scenario.initial_profile();
    let mut feasible = 0usize;
    let mut best: Option<(PositionProfile, f64)> = None;

    for &pi in &candidates {
        for &pj in &candidates {
            let mut profile = initial.clone();
            profile.set(pair.first(), pi);
            profile.set(pair.second(), pj);
            match crate::game::system_throughput(scenario, &profile, mode) {
                Ok(theta) => {
                    feasible += 1;
                    let replace = match &best {
                        None => true,
                        Some((bp, bt)) => {
                            compare_outcomes(scenario, theta, &profile, *bt, bp)
                                == std::cmp::Ordering::Greater
                        }
                    };
                    if replace {
                        best = Some((profile, theta));
                    }
                }
                Err(GameError::InfeasibleProfile { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    let (best_profile, best_theta_bps) = best.ok_or(OracleError::NoFeasibleProfile)?;
    let nash_at_best = verify_nash(scenario, pair, grid, &best_profile, mode);
    Ok(OracleReport {
        distances_m: grid.distances_m().to_vec(),
        angles_deg: grid.angles_deg().to_vec(),
        best_positions: scenario
            .users
            .iter()
            .zip(best_profile.positions())
            .map(|(u, p)| (u.id.clone(), *p))
            .collect(),
        best_theta_bps,
        feasible_profiles: feasible,
        total_profiles: total,
        nash_at_best,
        best_profile,
    })
}

/// True iff no unilateral grid deviation by either mover strictly improves
/// the hat utility. Profiles that are themselves infeasible are never Nash.
pub fn verify_nash(
    scenario: &Scenario,
    pair: MovingPair,
    grid: &StrategyGrid,
    profile: &PositionProfile,
    mode: RateMode,
) -> bool {
    let current = match crate::game::hat_utility(scenario, profile, mode) {
        Ok(h) => h,
        Err(_) => return false,
    };
    let candidates = grid.feasible_positions(&scenario.arena);
    for mover in [pair.first(), pair.second()] {
        for &cand in &candidates {
            if cand == profile.get(mover) {
                continue;
            }
            let deviated = profile.with_position(mover, cand);
            if let Ok(h) = crate::game::hat_utility(scenario, &deviated, mode) {
                if h > current {
                    return false;
                }
            }
        }
    }
    true
}
