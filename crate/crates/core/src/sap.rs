//! Spatial adaptive play: annealed logit dynamics over the strategy grid
//! for a fixed pair of moving users.
//!
//! Each step picks one of the two movers at random and resamples its
//! position from a softmax over the hat utility of every feasible strategy,
//! with inverse temperature beta growing with the step count. The returned
//! profile is the best one visited by throughput, which guards against the
//! walk ending on a stochastic dip.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{
    self, compare_outcomes, GameError, MovingPair, MoverEval, Position, PositionProfile, Scenario,
    StrategyGrid, UserId,
};
use crate::radio::RateMode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SapError {
    #[error("invalid SAP config: {0}")]
    InvalidConfig(String),
    #[error("player index {player} is not part of the moving pair")]
    PlayerNotInPair { player: usize },
    #[error("no arena-feasible grid point available for user {player}")]
    NoGridPoint { player: UserId },
    #[error("user {player} has no feasible strategy under the current profile")]
    NoFeasibleStrategy { player: UserId },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Rule mapping the step index to the inverse temperature beta.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaSchedule {
    /// `beta(k) = rate * k`; the default uses rate 1 so beta equals the step.
    Linear { rate: f64 },
    /// Fixed beta for every step.
    Constant { beta: f64 },
}

impl BetaSchedule {
    fn raw_beta(&self, step: usize) -> f64 {
        match *self {
            BetaSchedule::Linear { rate } => rate * step as f64,
            BetaSchedule::Constant { beta } => beta,
        }
    }

    fn validate(&self) -> Result<(), SapError> {
        let ok = match *self {
            BetaSchedule::Linear { rate } => rate.is_finite() && rate > 0.0,
            BetaSchedule::Constant { beta } => beta.is_finite() && beta > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SapError::InvalidConfig(
                "beta schedule must produce positive finite beta".into(),
            ))
        }
    }
}

impl Default for BetaSchedule {
    fn default() -> Self {
        BetaSchedule::Linear { rate: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SapConfig {
    /// Iteration budget.
    pub max_steps: usize,
    pub beta_schedule: BetaSchedule,
    pub rng_seed: u64,
    /// Lower clamp on beta; keeps the first steps well-defined even for
    /// schedules that would start at zero.
    pub temperature_floor: f64,
}

impl SapConfig {
    pub fn with_seed(seed: u64) -> Self {
        SapConfig {
            rng_seed: seed,
            ..SapConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SapError> {
        if self.max_steps == 0 {
            return Err(SapError::InvalidConfig("max_steps must be >= 1".into()));
        }
        if !(self.temperature_floor.is_finite() && self.temperature_floor > 0.0) {
            return Err(SapError::InvalidConfig(
                "temperature_floor must be positive".into(),
            ));
        }
        self.beta_schedule.validate()
    }

    pub fn beta_at(&self, step: usize) -> f64 {
        self.beta_schedule.raw_beta(step).max(self.temperature_floor)
    }
}

impl Default for SapConfig {
    fn default() -> Self {
        SapConfig {
            max_steps: 1000,
            beta_schedule: BetaSchedule::default(),
            rng_seed: 0,
            temperature_floor: 1e-9,
        }
    }
}

/// Logit choice distribution over one mover's feasible strategies.
#[derive(Debug, Clone)]
pub struct LogitChoice {
    pub strategies: Vec<Position>,
    pub utilities: Vec<f64>,
    pub probabilities: Vec<f64>,
}

/// One SAP iteration record.
#[derive(Debug, Clone, PartialEq)]
pub struct SapStep {
    pub step: usize,
    pub player: UserId,
    pub strategy: Position,
    pub hat_utility: f64,
    pub theta_bps: f64,
    pub best_theta_bps: f64,
}

/// Full iteration history of one SAP run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SapTrace {
    pub steps: Vec<SapStep>,
}

impl SapTrace {
    /// Writes the trace as CSV rows `step,player,d_m,psi_deg,hat_utility,theta_bps`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,player,d_m,psi_deg,hat_utility,theta_bps")?;
        for s in &self.steps {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.step, s.player, s.strategy.distance_m, s.strategy.angle_deg, s.hat_utility,
                s.theta_bps
            )?;
        }
        Ok(())
    }
}

/// Result of a SAP run: best profile visited, its throughput, and the trace.
#[derive(Debug, Clone)]
pub struct SapOutcome {
    pub profile: PositionProfile,
    pub theta_bps: f64,
    pub trace: SapTrace,
}

// Candidate strategies grouped per radius. The hat utility depends on the
// mover's position only through its radius, so one evaluation per group
// covers all of its angles.
struct DistanceClasses {
    classes: Vec<(f64, Vec<Position>)>,
}

impl DistanceClasses {
    fn build(grid: &StrategyGrid, scenario: &Scenario) -> Self {
        DistanceClasses {
            classes: grid.feasible_by_distance(&scenario.arena),
        }
    }

    fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

struct ClassLogit {
    // (class index, hat utility) for capture-feasible classes.
    feasible: Vec<(usize, f64)>,
    max_utility: f64,
}

fn class_utilities(
    scenario: &Scenario,
    classes: &DistanceClasses,
    profile: &PositionProfile,
    player: usize,
    mode: RateMode,
) -> ClassLogit {
    let eval = MoverEval::new(scenario, profile, player, mode);
    let mut feasible = Vec::with_capacity(classes.classes.len());
    let mut max_utility = f64::NEG_INFINITY;
    for (ci, (d, _)) in classes.classes.iter().enumerate() {
        if let Some(u) = eval.hat_utility_at(*d) {
            max_utility = max_utility.max(u);
            feasible.push((ci, u));
        }
    }
    ClassLogit {
        feasible,
        max_utility,
    }
}

/// Softmax with max-shift for numerical stability. Not normalized; divide
/// by the sum of the returned weights.
pub fn softmax_weights(utilities: &[f64], beta: f64) -> Vec<f64> {
    let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    utilities.iter().map(|u| (beta * (u - max)).exp()).collect()
}

/// The logit choice distribution for `player` in the moving pair, given the
/// opponent's position; non-moving users sit at their initial positions.
///
/// Probabilities are proportional to `exp(beta * hat_utility)` over every
/// feasible strategy (in-arena and capture-feasible for all users).
pub fn logit_distribution(
    scenario: &Scenario,
    grid: &StrategyGrid,
    pair: MovingPair,
    player: usize,
    opponent_position: Position,
    beta: f64,
    mode: RateMode,
) -> Result<LogitChoice, SapError> {
    pair.validate_for(scenario)?;
    if !pair.contains(player) {
        return Err(SapError::PlayerNotInPair { player });
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(SapError::InvalidConfig(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    let mut profile = scenario.initial_profile();
    profile.set(pair.other(player), opponent_position);

    let classes = DistanceClasses::build(grid, scenario);
    let logit = class_utilities(scenario, &classes, &profile, player, mode);
    if logit.feasible.is_empty() {
        return Err(SapError::NoFeasibleStrategy {
            player: scenario.users[player].id.clone(),
        });
    }

    let mut strategies = Vec::new();
    let mut utilities = Vec::new();
    let mut weights = Vec::new();
    let mut z = 0.0;
    for &(ci, u) in &logit.feasible {
        let w = (beta * (u - logit.max_utility)).exp();
        for &pos in &classes.classes[ci].1 {
            strategies.push(pos);
            utilities.push(u);
            weights.push(w);
            z += w;
        }
    }
    let probabilities = weights.iter().map(|w| w / z).collect();
    Ok(LogitChoice {
        strategies,
        utilities,
        probabilities,
    })
}

/// Runs spatial adaptive play for the moving pair and returns the best
/// profile visited. Deterministic for a fixed seed.
pub fn run_sap(
    scenario: &Scenario,
    grid: &StrategyGrid,
    pair: MovingPair,
    config: &SapConfig,
    mode: RateMode,
) -> Result<SapOutcome, SapError> {
    config.validate()?;
    pair.validate_for(scenario)?;

    let classes = DistanceClasses::build(grid, scenario);
    if classes.is_empty() {
        return Err(SapError::NoGridPoint {
            player: scenario.users[pair.first()].id.clone(),
        });
    }

    // Movers enter the grid at the feasible point nearest their initial
    // position; non-movers never leave their initial positions.
    let mut profile = scenario.initial_profile();
    for mover in [pair.first(), pair.second()] {
        let snapped = grid
            .snap(&profile.get(mover), &scenario.arena)
            .ok_or_else(|| SapError::NoGridPoint {
                player: scenario.users[mover].id.clone(),
            })?;
        profile.set(mover, snapped);
    }

    let user_count = scenario.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    // Seed best-so-far with the starting profile when it is feasible; an
    // infeasible start just means the first feasible visit takes over.
    let mut best: Option<(PositionProfile, f64)> =
        match game::per_user_rates(scenario, &profile, mode) {
            Ok(rates) => Some((profile.clone(), game::rates_to_throughput(&rates))),
            Err(GameError::InfeasibleProfile { .. }) => None,
            Err(e) => return Err(e.into()),
        };

    let mut trace = SapTrace {
        steps: Vec::with_capacity(config.max_steps),
    };

    for step in 1..=config.max_steps {
        let beta = config.beta_at(step);
        let mover = if rng.random_range(0..2u8) == 0 {
            pair.first()
        } else {
            pair.second()
        };

        let logit = class_utilities(scenario, &classes, &profile, mover, mode);
        if logit.feasible.is_empty() {
            return Err(SapError::NoFeasibleStrategy {
                player: scenario.users[mover].id.clone(),
            });
        }

        // Sample a radius class from the softmax; each class carries one
        // weight per contained angle.
        let mut z = 0.0;
        let masses: Vec<f64> = logit
            .feasible
            .iter()
            .map(|&(ci, u)| {
                let w = (beta * (u - logit.max_utility)).exp();
                let m = w * classes.classes[ci].1.len() as f64;
                z += m;
                m
            })
            .collect();
        let draw = rng.random::<f64>() * z;
        let mut acc = 0.0;
        let mut picked = logit.feasible.len() - 1;
        for (i, m) in masses.iter().enumerate() {
            acc += m;
            if draw < acc {
                picked = i;
                break;
            }
        }
        let (class_idx, class_util) = logit.feasible[picked];

        // When the sampled strategy ties the maximal utility, move to the
        // tied position closest to the mover's current one.
        let chosen = if class_util == logit.max_utility {
            nearest_max_position(&classes, &logit, profile.get(mover), scenario)
        } else {
            let positions = &classes.classes[class_idx].1;
            positions[rng.random_range(0..positions.len())]
        };

        profile.set(mover, chosen);
        let hat = class_util_for_position(&classes, &logit, chosen);
        let theta = game::theta_from_hat(user_count, hat);

        let replace = match &best {
            None => true,
            Some((bp, bt)) => {
                compare_outcomes(scenario, theta, &profile, *bt, bp) == std::cmp::Ordering::Greater
            }
        };
        if replace {
            best = Some((profile.clone(), theta));
        }
        let best_theta = best.as_ref().map(|(_, t)| *t).unwrap_or(theta);

        trace.steps.push(SapStep {
            step,
            player: scenario.users[mover].id.clone(),
            strategy: chosen,
            hat_utility: hat,
            theta_bps: theta,
            best_theta_bps: best_theta,
        });
    }

    let (profile, theta_bps) = best.expect("at least one feasible step was recorded");
    Ok(SapOutcome {
        profile,
        theta_bps,
        trace,
    })
}

fn class_util_for_position(classes: &DistanceClasses, logit: &ClassLogit, pos: Position) -> f64 {
    for &(ci, u) in &logit.feasible {
        if classes.classes[ci].0 == pos.distance_m {
            return u;
        }
    }
    unreachable!("chosen position comes from a feasible class")
}

fn nearest_max_position(
    classes: &DistanceClasses,
    logit: &ClassLogit,
    current: Position,
    scenario: &Scenario,
) -> Position {
    let ap = scenario.arena.ap;
    let here = current.to_cartesian(ap);
    let mut best: Option<(f64, Position)> = None;
    for &(ci, u) in &logit.feasible {
        if u != logit.max_utility {
            continue;
        }
        for &pos in &classes.classes[ci].1 {
            let dist = here.distance_to(pos.to_cartesian(ap));
            let better = match &best {
                None => true,
                Some((bd, bp)) => {
                    dist < *bd
                        || (dist == *bd
                            && (pos.distance_m < bp.distance_m
                                || (pos.distance_m == bp.distance_m
                                    && pos.angle_deg < bp.angle_deg)))
                }
            };
            if better {
                best = Some((dist, pos));
            }
        }
    }
    best.expect("a maximal-utility class always has positions").1
}
