//! Game data model and the utility / throughput functions.
//!
//! Players are the two users selected to move; strategies are polar
//! positions around the AP taken from a discrete grid. All users share one
//! common-interest utility: the negated sum of inverse rates. Because every
//! user's rate depends on the complete position profile, the utility is a
//! single function of the profile and acts as its own potential function.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radio::{self, RadioError, RadioParams, RateMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("player index {index} out of range for {count} users")]
    InvalidPlayer { index: usize, count: usize },
    #[error("profile infeasible: user {user} has SINR {sinr:.6e} below capture threshold {threshold:.6e}")]
    InfeasibleProfile {
        user: UserId,
        sinr: f64,
        threshold: f64,
    },
    #[error("user {user} at ({x:.3}, {y:.3}) m lies outside the arena")]
    OutsideArena { user: UserId, x: f64, y: f64 },
    #[error("improvement ratio denominator must be positive, got {value}")]
    NonPositiveDenominator { value: f64 },
    #[error(transparent)]
    Radio(#[from] RadioError),
}

/// Cartesian point in meters, in arena coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance_to(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Polar position of a user relative to the AP: radial distance in meters
/// and angle in degrees from the AP's horizontal axis, normalized to
/// [0, 360).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Position {
    #[serde(rename = "d")]
    pub distance_m: f64,
    #[serde(rename = "psi")]
    pub angle_deg: f64,
}

impl Position {
    /// Builds a position, normalizing the angle. Negative or non-finite
    /// distances are a programming error here; file inputs are validated
    /// before this is called.
    pub fn new(distance_m: f64, angle_deg: f64) -> Self {
        assert!(
            distance_m.is_finite() && distance_m >= 0.0,
            "position distance must be finite and non-negative, got {distance_m}"
        );
        Position {
            distance_m,
            angle_deg: normalize_angle(angle_deg),
        }
    }

    pub fn to_cartesian(&self, ap: Point) -> Point {
        let rad = self.angle_deg.to_radians();
        Point {
            x: ap.x + self.distance_m * rad.cos(),
            y: ap.y + self.distance_m * rad.sin(),
        }
    }
}

pub(crate) fn normalize_angle(angle_deg: f64) -> f64 {
    let a = angle_deg.rem_euclid(360.0);
    // rem_euclid can return 360.0 for tiny negative inputs.
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

/// User identifier, unique within a scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub String);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UserId {
    fn from(s: &str) -> Self {
        UserId(s.to_string())
    }
}

/// Role tag used by the baseline methods that distinguish users already
/// associated with the AP from users that just arrived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Existing,
    New,
}

#[derive(Debug, Clone, PartialEq)]
pub struct User {
    pub id: UserId,
    pub initial: Position,
    pub label: Option<Role>,
}

/// Bounded rectangular area with the AP strictly inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arena {
    pub width_m: f64,
    pub height_m: f64,
    pub ap: Point,
}

impl Arena {
    pub fn new(width_m: f64, height_m: f64, ap: Point) -> Result<Self, GameError> {
        if !(width_m.is_finite() && height_m.is_finite() && width_m > 0.0 && height_m > 0.0) {
            return Err(GameError::InvalidScenario(format!(
                "arena dimensions must be positive, got {width_m} x {height_m}"
            )));
        }
        if !(ap.x > 0.0 && ap.x < width_m && ap.y > 0.0 && ap.y < height_m) {
            return Err(GameError::InvalidScenario(format!(
                "AP ({}, {}) must lie strictly inside the {width_m} x {height_m} arena",
                ap.x, ap.y
            )));
        }
        Ok(Arena {
            width_m,
            height_m,
            ap,
        })
    }

    /// Boundary-inclusive containment test.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0.0 && p.x <= self.width_m && p.y >= 0.0 && p.y <= self.height_m
    }

    pub fn contains_position(&self, pos: &Position) -> bool {
        self.contains(pos.to_cartesian(self.ap))
    }
}

/// A full problem instance: arena, radio constants, and the ordered user
/// list with initial positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub arena: Arena,
    pub radio: RadioParams,
    pub users: Vec<User>,
}

impl Scenario {
    pub fn new(arena: Arena, radio: RadioParams, users: Vec<User>) -> Result<Self, GameError> {
        if users.len() < 2 {
            return Err(GameError::InvalidScenario(format!(
                "at least 2 users required, got {}",
                users.len()
            )));
        }
        for (i, u) in users.iter().enumerate() {
            if u.id.0.is_empty() {
                return Err(GameError::InvalidScenario(format!(
                    "user at index {i} has an empty id"
                )));
            }
            if users[..i].iter().any(|v| v.id == u.id) {
                return Err(GameError::InvalidScenario(format!(
                    "duplicate user id {}",
                    u.id
                )));
            }
            let c = u.initial.to_cartesian(arena.ap);
            if !arena.contains(c) {
                return Err(GameError::OutsideArena {
                    user: u.id.clone(),
                    x: c.x,
                    y: c.y,
                });
            }
        }
        Ok(Scenario {
            arena,
            radio,
            users,
        })
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn user_index(&self, id: &UserId) -> Option<usize> {
        self.users.iter().position(|u| &u.id == id)
    }

    /// Indices of users labeled [`Role::New`], in scenario order.
    pub fn new_user_indices(&self) -> Vec<usize> {
        self.users
            .iter()
            .enumerate()
            .filter(|(_, u)| u.label == Some(Role::New))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn initial_profile(&self) -> PositionProfile {
        PositionProfile {
            positions: self.users.iter().map(|u| u.initial).collect(),
        }
    }
}

/// The two users selected to move. Stored with `first < second`; the mover
/// set, not the order, defines the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MovingPair {
    first: usize,
    second: usize,
}

impl MovingPair {
    pub fn new(a: usize, b: usize) -> Result<Self, GameError> {
        if a == b {
            return Err(GameError::InvalidPair(format!(
                "moving users must be distinct, got index {a} twice"
            )));
        }
        Ok(MovingPair {
            first: a.min(b),
            second: a.max(b),
        })
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn second(&self) -> usize {
        self.second
    }

    pub fn contains(&self, index: usize) -> bool {
        self.first == index || self.second == index
    }

    pub fn other(&self, index: usize) -> usize {
        if index == self.first {
            self.second
        } else {
            self.first
        }
    }

    pub fn validate_for(&self, scenario: &Scenario) -> Result<(), GameError> {
        if self.second >= scenario.len() {
            return Err(GameError::InvalidPlayer {
                index: self.second,
                count: scenario.len(),
            });
        }
        Ok(())
    }

    /// Every unordered pair of user indices for a scenario with `count` users.
    pub fn all_pairs(count: usize) -> Vec<MovingPair> {
        let mut out = Vec::new();
        for i in 0..count {
            for j in (i + 1)..count {
                out.push(MovingPair { first: i, second: j });
            }
        }
        out
    }
}

/// Discrete strategy space: candidate radii crossed with candidate angles.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyGrid {
    distances_m: Vec<f64>,
    angles_deg: Vec<f64>,
}

impl StrategyGrid {
    /// Builds a grid from strictly ascending distance and angle lists.
    pub fn new(distances_m: Vec<f64>, angles_deg: Vec<f64>) -> Result<Self, GameError> {
        if distances_m.is_empty() || angles_deg.is_empty() {
            return Err(GameError::InvalidGrid(
                "distance and angle lists must be non-empty".into(),
            ));
        }
        if distances_m.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err(GameError::InvalidGrid(
                "distances must be finite and positive".into(),
            ));
        }
        for w in distances_m.windows(2) {
            if w[1] <= w[0] {
                return Err(GameError::InvalidGrid(
                    "distances must be strictly ascending".into(),
                ));
            }
        }
        if angles_deg.iter().any(|a| !a.is_finite()) {
            return Err(GameError::InvalidGrid("angles must be finite".into()));
        }
        for w in angles_deg.windows(2) {
            if w[1] <= w[0] {
                return Err(GameError::InvalidGrid(
                    "angles must be strictly ascending".into(),
                ));
            }
        }
        if angles_deg.iter().any(|a| *a < 0.0 || *a >= 360.0) {
            return Err(GameError::InvalidGrid(
                "angles must lie in [0, 360)".into(),
            ));
        }
        Ok(StrategyGrid {
            distances_m,
            angles_deg,
        })
    }

    /// Default strategy space: radii 1..=30 m, angles every 10 degrees.
    pub fn standard() -> Self {
        StrategyGrid::new(
            (1..=30).map(f64::from).collect(),
            (0..36).map(|k| f64::from(k) * 10.0).collect(),
        )
        .expect("standard grid is valid")
    }

    /// Coarse grid for exhaustive verification: radii {5,10,...,30} m,
    /// angles every 45 degrees (48 strategies per player).
    pub fn coarse() -> Self {
        StrategyGrid::new(
            (1..=6).map(|k| f64::from(k) * 5.0).collect(),
            (0..8).map(|k| f64::from(k) * 45.0).collect(),
        )
        .expect("coarse grid is valid")
    }

    pub fn distances_m(&self) -> &[f64] {
        &self.distances_m
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    /// Number of raw strategies (before arena filtering).
    pub fn num_strategies(&self) -> usize {
        self.distances_m.len() * self.angles_deg.len()
    }

    /// All grid positions in canonical order (distance-major, angle-minor).
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.distances_m.iter().flat_map(move |&d| {
            self.angles_deg
                .iter()
                .map(move |&a| Position::new(d, a))
        })
    }

    /// Grid positions whose Cartesian image stays inside the arena, in
    /// canonical order.
    pub fn feasible_positions(&self, arena: &Arena) -> Vec<Position> {
        self.positions()
            .filter(|p| arena.contains_position(p))
            .collect()
    }

    /// Arena-feasible positions grouped per radius, preserving canonical
    /// order. Radii with no in-arena angle are dropped.
    pub fn feasible_by_distance(&self, arena: &Arena) -> Vec<(f64, Vec<Position>)> {
        self.distances_m
            .iter()
            .filter_map(|&d| {
                let ps: Vec<Position> = self
                    .angles_deg
                    .iter()
                    .map(|&a| Position::new(d, a))
                    .filter(|p| arena.contains_position(p))
                    .collect();
                if ps.is_empty() {
                    None
                } else {
                    Some((d, ps))
                }
            })
            .collect()
    }

    /// Nearest arena-feasible grid point by Cartesian distance; ties go to
    /// the smaller radius, then the smaller angle. `None` when no grid point
    /// lies inside the arena.
    pub fn snap(&self, pos: &Position, arena: &Arena) -> Option<Position> {
        let target = pos.to_cartesian(arena.ap);
        let mut best: Option<(f64, Position)> = None;
        for cand in self.positions() {
            let c = cand.to_cartesian(arena.ap);
            if !arena.contains(c) {
                continue;
            }
            let dist = target.distance_to(c);
            let better = match &best {
                None => true,
                Some((bd, bp)) => {
                    dist < *bd
                        || (dist == *bd
                            && (cand.distance_m < bp.distance_m
                                || (cand.distance_m == bp.distance_m
                                    && cand.angle_deg < bp.angle_deg)))
                }
            };
            if better {
                best = Some((dist, cand));
            }
        }
        best.map(|(_, p)| p)
    }
}

impl Default for StrategyGrid {
    fn default() -> Self {
        StrategyGrid::standard()
    }
}

/// A complete assignment of positions to every user in a scenario, aligned
/// with the scenario's user order.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionProfile {
    positions: Vec<Position>,
}

impl PositionProfile {
    pub fn new(scenario: &Scenario, positions: Vec<Position>) -> Result<Self, GameError> {
        if positions.len() != scenario.len() {
            return Err(GameError::InvalidScenario(format!(
                "profile must assign all {} users, got {}",
                scenario.len(),
                positions.len()
            )));
        }
        Ok(PositionProfile { positions })
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn get(&self, index: usize) -> Position {
        self.positions[index]
    }

    pub fn set(&mut self, index: usize, pos: Position) {
        self.positions[index] = pos;
    }

    pub fn with_position(&self, index: usize, pos: Position) -> Self {
        let mut p = self.clone();
        p.set(index, pos);
        p
    }

    pub fn distances(&self) -> Vec<f64> {
        self.positions.iter().map(|p| p.distance_m).collect()
    }

    /// Checks arena containment and the capture constraint for every user.
    pub fn validate(&self, scenario: &Scenario, mode: RateMode) -> Result<(), GameError> {
        for (u, pos) in scenario.users.iter().zip(&self.positions) {
            let c = pos.to_cartesian(scenario.arena.ap);
            if !scenario.arena.contains(c) {
                return Err(GameError::OutsideArena {
                    user: u.id.clone(),
                    x: c.x,
                    y: c.y,
                });
            }
        }
        per_user_rates(scenario, self, mode).map(|_| ())
    }

    /// JSON object mapping user id to its position, in scenario user order.
    pub fn to_json(&self, scenario: &Scenario) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (u, pos) in scenario.users.iter().zip(&self.positions) {
            map.insert(
                u.id.0.clone(),
                serde_json::json!({ "d": pos.distance_m, "psi": pos.angle_deg }),
            );
        }
        serde_json::Value::Object(map)
    }
}

// ---------------------------------------------------------------------------
// Utility and throughput
// ---------------------------------------------------------------------------

/// Effective rate of every user under the profile, in bits/s.
///
/// Fails when any user violates the capture constraint; such profiles are
/// excluded from every method's search space.
pub fn per_user_rates(
    scenario: &Scenario,
    profile: &PositionProfile,
    mode: RateMode,
) -> Result<Vec<f64>, GameError> {
    let dists = profile.distances();
    let mut rates = Vec::with_capacity(dists.len());
    for target in 0..dists.len() {
        match radio::effective_rate(target, &dists, &scenario.radio, mode) {
            Ok(r) => rates.push(r),
            Err(RadioError::CaptureViolation {
                target,
                sinr,
                threshold,
            }) => {
                return Err(GameError::InfeasibleProfile {
                    user: scenario.users[target].id.clone(),
                    sinr,
                    threshold,
                })
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(rates)
}

/// Negated sum of inverse rates. Strictly negative, identical for every
/// player, and equal to the game's potential function.
pub fn rates_to_hat_utility(rates: &[f64]) -> f64 {
    rates.iter().fold(0.0, |acc, r| acc + (-1.0 / r))
}

/// Harmonic-share utility: `1 / sum(1/R)`, exactly `-1 / hat_utility`.
pub fn rates_to_utility(rates: &[f64]) -> f64 {
    -1.0 / rates_to_hat_utility(rates)
}

/// System throughput: `L / sum(1/R)`, the harmonic mean of the user rates.
pub fn rates_to_throughput(rates: &[f64]) -> f64 {
    theta_from_hat(rates.len(), rates_to_hat_utility(rates))
}

/// Throughput from an already-computed hat utility for `count` users.
pub fn theta_from_hat(count: usize, hat: f64) -> f64 {
    (count as f64) * (-1.0 / hat)
}

pub fn hat_utility(
    scenario: &Scenario,
    profile: &PositionProfile,
    mode: RateMode,
) -> Result<f64, GameError> {
    Ok(rates_to_hat_utility(&per_user_rates(scenario, profile, mode)?))
}

/// The hat utility as seen by one player. Common interest makes this the
/// same value for every player; the player argument only gets validated.
pub fn hat_utility_for_player(
    scenario: &Scenario,
    profile: &PositionProfile,
    player: usize,
    mode: RateMode,
) -> Result<f64, GameError> {
    if player >= scenario.len() {
        return Err(GameError::InvalidPlayer {
            index: player,
            count: scenario.len(),
        });
    }
    hat_utility(scenario, profile, mode)
}

pub fn utility(
    scenario: &Scenario,
    profile: &PositionProfile,
    mode: RateMode,
) -> Result<f64, GameError> {
    Ok(-1.0 / hat_utility(scenario, profile, mode)?)
}

pub fn system_throughput(
    scenario: &Scenario,
    profile: &PositionProfile,
    mode: RateMode,
) -> Result<f64, GameError> {
    Ok((scenario.len() as f64) * utility(scenario, profile, mode)?)
}

/// Throughput improvement ratio against the no-movement reference.
pub fn improvement_ratio(theta_pro: f64, theta_non_move: f64) -> Result<f64, GameError> {
    if theta_non_move.is_nan() || theta_non_move <= 0.0 {
        return Err(GameError::NonPositiveDenominator {
            value: theta_non_move,
        });
    }
    Ok(theta_pro / theta_non_move)
}

/// Total Cartesian displacement of the profile from the scenario's initial
/// positions, used to break throughput ties in favor of least movement.
pub fn total_displacement(scenario: &Scenario, profile: &PositionProfile) -> f64 {
    scenario
        .users
        .iter()
        .zip(profile.positions())
        .map(|(u, p)| {
            u.initial
                .to_cartesian(scenario.arena.ap)
                .distance_to(p.to_cartesian(scenario.arena.ap))
        })
        .sum()
}

/// Orders candidate outcomes: higher throughput first, then smaller total
/// displacement, then lexicographically smaller positions in user order.
/// `Ordering::Greater` means `a` is preferred.
pub fn compare_outcomes(
    scenario: &Scenario,
    theta_a: f64,
    a: &PositionProfile,
    theta_b: f64,
    b: &PositionProfile,
) -> Ordering {
    match theta_a.partial_cmp(&theta_b) {
        Some(Ordering::Equal) | None => {}
        Some(ord) => return ord,
    }
    let da = total_displacement(scenario, a);
    let db = total_displacement(scenario, b);
    match db.partial_cmp(&da) {
        Some(Ordering::Equal) | None => {}
        Some(ord) => return ord, // smaller displacement preferred
    }
    for (pa, pb) in a.positions().iter().zip(b.positions()) {
        match (pb.distance_m, pb.angle_deg).partial_cmp(&(pa.distance_m, pa.angle_deg)) {
            Some(Ordering::Equal) | None => {}
            Some(ord) => return ord, // smaller position tuple preferred
        }
    }
    Ordering::Equal
}

// ---------------------------------------------------------------------------
// Incremental candidate evaluation
// ---------------------------------------------------------------------------

/// Evaluates the hat utility of profiles that differ only in one mover's
/// radius, with everything that does not depend on the mover precomputed.
///
/// Rates depend on positions only through distances to the AP, so one
/// evaluation covers every candidate angle at that radius. The arithmetic
/// mirrors [`per_user_rates`] operation for operation and produces
/// bit-identical results (checked by tests).
pub struct MoverEval<'a> {
    radio: &'a RadioParams,
    mode: RateMode,
    mover: usize,
    powers: Vec<f64>,
    snr_logs: Vec<f64>,
    threshold: f64,
}

impl<'a> MoverEval<'a> {
    pub fn new(
        scenario: &'a Scenario,
        profile: &PositionProfile,
        mover: usize,
        mode: RateMode,
    ) -> Self {
        let radio_params = &scenario.radio;
        let n = scenario.len();
        let mut powers = vec![0.0; n];
        let mut snr_logs = vec![0.0; n];
        for i in 0..n {
            if i != mover {
                let p = radio::received_power(profile.get(i).distance_m, radio_params);
                powers[i] = p;
                snr_logs[i] = (1.0 + p / radio_params.noise_w).log2();
            }
        }
        MoverEval {
            radio: radio_params,
            mode,
            mover,
            powers,
            snr_logs,
            threshold: radio_params.sinr_threshold_linear(),
        }
    }

    /// Hat utility with the mover at `distance_m`; `None` when any user
    /// would violate the capture constraint.
    pub fn hat_utility_at(&self, distance_m: f64) -> Option<f64> {
        let n = self.powers.len();
        let mover_power = radio::received_power(distance_m, self.radio);
        let mut hat = 0.0;
        for target in 0..n {
            let own = if target == self.mover {
                mover_power
            } else {
                self.powers[target]
            };
            let mut interference = 0.0;
            for other in 0..n {
                if other != target {
                    interference += if other == self.mover {
                        mover_power
                    } else {
                        self.powers[other]
                    };
                }
            }
            let sinr = own / (interference + self.radio.noise_w);
            // Same predicate as capture_ok, with NaN counting as a failure.
            if sinr.is_nan() || sinr < self.threshold {
                return None;
            }
            let rate = if target == self.mover {
                let snr = own / self.radio.noise_w;
                radio::rate_from_ratios(snr, sinr, self.radio, self.mode)
            } else {
                // Cached log2(1 + snr) term; identical to the plain path
                // because the rate formula is re-applied on the same pieces.
                rate_from_cached(self.snr_logs[target], sinr, self.radio, self.mode)
            };
            hat += -1.0 / rate;
        }
        Some(hat)
    }
}

fn rate_from_cached(snr_log: f64, sinr_linear: f64, params: &RadioParams, mode: RateMode) -> f64 {
    match mode {
        RateMode::Approximate if sinr_linear > 1.0 => params.bandwidth_hz * sinr_linear.log2(),
        _ => {
            params.p_non_collision * params.bandwidth_hz * snr_log
                + params.p_collision * params.bandwidth_hz * (1.0 + sinr_linear).log2()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn test_scenario(distances: &[f64]) -> Scenario {
        let arena = Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).unwrap();
        let users = distances
            .iter()
            .enumerate()
            .map(|(i, &d)| User {
                id: UserId(format!("U{i}")),
                initial: Position::new(d, (i as f64) * 90.0),
                label: if i >= distances.len().saturating_sub(2) {
                    Some(Role::New)
                } else {
                    Some(Role::Existing)
                },
            })
            .collect();
        Scenario::new(arena, RadioParams::default(), users).unwrap()
    }

    #[test]
    fn position_normalizes_angles() {
        assert_eq!(Position::new(5.0, -90.0).angle_deg, 270.0);
        assert_eq!(Position::new(5.0, 360.0).angle_deg, 0.0);
        assert_eq!(Position::new(5.0, 725.0).angle_deg, 5.0);
    }

    #[test]
    fn arena_requires_ap_strictly_inside() {
        assert!(Arena::new(60.0, 60.0, Point::new(0.0, 30.0)).is_err());
        assert!(Arena::new(60.0, 60.0, Point::new(60.0, 30.0)).is_err());
        assert!(Arena::new(-1.0, 60.0, Point::new(30.0, 30.0)).is_err());
        assert!(Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).is_ok());
    }

    #[test]
    fn arena_boundary_positions_count_as_inside() {
        let arena = Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).unwrap();
        for angle in [0.0, 90.0, 180.0, 270.0] {
            assert!(
                arena.contains_position(&Position::new(30.0, angle)),
                "radius 30 at {angle} degrees should sit on the boundary"
            );
        }
    }

    #[test]
    fn scenario_rejects_too_few_and_out_of_arena_users() {
        let arena = Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).unwrap();
        let one = vec![User {
            id: "A".into(),
            initial: Position::new(5.0, 0.0),
            label: None,
        }];
        assert!(Scenario::new(arena, RadioParams::default(), one).is_err());

        let outside = vec![
            User {
                id: "A".into(),
                initial: Position::new(5.0, 0.0),
                label: None,
            },
            User {
                id: "B".into(),
                initial: Position::new(31.0, 0.0),
                label: None,
            },
        ];
        let err = Scenario::new(arena, RadioParams::default(), outside).unwrap_err();
        match err {
            GameError::OutsideArena { user, .. } => assert_eq!(user, UserId::from("B")),
            other => panic!("expected OutsideArena, got {other:?}"),
        }
    }

    #[test]
    fn equal_distance_users_share_one_rate() {
        let s = test_scenario(&[5.0, 5.0, 5.0, 5.0]);
        let rates = per_user_rates(&s, &s.initial_profile(), RateMode::Exact).unwrap();
        assert_eq!(rates.len(), 4);
        for r in &rates[1..] {
            assert_eq!(*r, rates[0]);
        }
        // Independently derived: SINR = 1/3 per user at equal radius.
        assert_relative_eq!(rates[0], 32828925.45489128, max_relative = 1e-12);
        assert_relative_eq!(
            radio::sinr(0, &s.initial_profile().distances(), &s.radio),
            1.0 / 3.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn infeasible_profile_names_the_violating_user() {
        let s = test_scenario(&[30.0, 1.0, 1.0, 1.0]);
        let err = per_user_rates(&s, &s.initial_profile(), RateMode::Exact).unwrap_err();
        match err {
            GameError::InfeasibleProfile { user, .. } => assert_eq!(user, UserId::from("U0")),
            other => panic!("expected InfeasibleProfile, got {other:?}"),
        }
    }

    #[test]
    fn hat_utility_of_unit_rates() {
        assert_eq!(rates_to_hat_utility(&[1.0, 1.0]), -2.0);
        assert_eq!(rates_to_hat_utility(&[2.0, 2.0, 2.0, 2.0]), -2.0);
    }

    #[test]
    fn utility_identities() {
        assert_eq!(rates_to_utility(&[1.0, 1.0]), 0.5);
        // L equal rates give utility R / L and throughput R.
        let rates = [7.0; 5];
        assert_relative_eq!(rates_to_utility(&rates), 7.0 / 5.0, max_relative = 1e-12);
        assert_relative_eq!(rates_to_throughput(&rates), 7.0, max_relative = 1e-12);
        assert_eq!(rates_to_throughput(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn utility_is_exactly_negative_inverse_hat() {
        let s = test_scenario(&[4.0, 9.0, 17.0, 25.0]);
        let p = s.initial_profile();
        let hat = hat_utility(&s, &p, RateMode::Exact).unwrap();
        let u = utility(&s, &p, RateMode::Exact).unwrap();
        assert_eq!(u, -1.0 / hat);
        assert!(hat < 0.0);
        let theta = system_throughput(&s, &p, RateMode::Exact).unwrap();
        assert_eq!(theta, 4.0 * u);
    }

    #[test]
    fn hat_utility_matches_independent_summation() {
        let s = test_scenario(&[5.0, 5.0, 5.0, 5.0]);
        let p = s.initial_profile();
        let rates = per_user_rates(&s, &p, RateMode::Exact).unwrap();
        let by_hand: f64 = rates.iter().map(|r| -1.0 / r).sum();
        let hat = hat_utility(&s, &p, RateMode::Exact).unwrap();
        assert_relative_eq!(hat, by_hand, max_relative = 1e-15);
        assert_relative_eq!(hat, -1.218437687062349e-7, max_relative = 1e-12);
    }

    #[test]
    fn hat_utility_is_player_independent() {
        let s = test_scenario(&[5.0, 12.0, 20.0, 8.0]);
        let p = s.initial_profile();
        let u0 = hat_utility_for_player(&s, &p, 0, RateMode::Exact).unwrap();
        let u3 = hat_utility_for_player(&s, &p, 3, RateMode::Exact).unwrap();
        assert_eq!(u0, u3);
        assert!(hat_utility_for_player(&s, &p, 9, RateMode::Exact).is_err());
    }

    #[test]
    fn improvement_ratio_basics() {
        assert_eq!(improvement_ratio(100.0, 100.0).unwrap(), 1.0);
        assert_relative_eq!(
            improvement_ratio(106.0, 100.0).unwrap(),
            1.06,
            max_relative = 1e-12
        );
        assert_eq!(improvement_ratio(50.0, 100.0).unwrap(), 0.5);
        assert!(improvement_ratio(10.0, 0.0).is_err());
        assert!(improvement_ratio(10.0, -5.0).is_err());
    }

    #[test]
    fn grid_validation_and_shape() {
        assert!(StrategyGrid::new(vec![], vec![0.0]).is_err());
        assert!(StrategyGrid::new(vec![2.0, 1.0], vec![0.0]).is_err());
        assert!(StrategyGrid::new(vec![1.0], vec![0.0, 0.0]).is_err());
        assert!(StrategyGrid::new(vec![1.0], vec![360.0]).is_err());
        let std = StrategyGrid::standard();
        assert_eq!(std.num_strategies(), 30 * 36);
        let coarse = StrategyGrid::coarse();
        assert_eq!(coarse.num_strategies(), 48);
        assert_eq!(coarse.distances_m(), &[5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
    }

    #[test]
    fn grid_marks_out_of_arena_positions_infeasible() {
        // Off-center AP: radius 30 to the east leaves the arena.
        let arena = Arena::new(60.0, 60.0, Point::new(45.0, 30.0)).unwrap();
        let grid = StrategyGrid::coarse();
        let feasible = grid.feasible_positions(&arena);
        assert!(feasible.len() < grid.num_strategies());
        assert!(feasible
            .iter()
            .all(|p| arena.contains_position(p)));
        assert!(!feasible.contains(&Position::new(30.0, 0.0)));
    }

    #[test]
    fn snap_finds_nearest_grid_point() {
        let arena = Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).unwrap();
        let grid = StrategyGrid::coarse();
        // Already a grid point: snaps to itself.
        let p = Position::new(10.0, 45.0);
        assert_eq!(grid.snap(&p, &arena), Some(p));
        // Slightly off a grid point.
        let snapped = grid.snap(&Position::new(11.0, 47.0), &arena).unwrap();
        assert_eq!(snapped, Position::new(10.0, 45.0));
        // Dead center between radii on the same ray: tie goes to smaller radius.
        let mid = grid.snap(&Position::new(7.5, 0.0), &arena).unwrap();
        assert_eq!(mid, Position::new(5.0, 0.0));
    }

    #[test]
    fn mover_eval_matches_plain_path_bitwise() {
        let s = test_scenario(&[5.0, 12.0, 20.0, 8.0]);
        let profile = s.initial_profile();
        for mover in 0..4 {
            for mode in [RateMode::Exact, RateMode::Approximate] {
                let eval = MoverEval::new(&s, &profile, mover, mode);
                for d in [1.0, 2.0, 7.0, 13.0, 26.0, 30.0] {
                    let fast = eval.hat_utility_at(d);
                    let mut p = profile.clone();
                    p.set(mover, Position::new(d, p.get(mover).angle_deg));
                    let plain = match hat_utility(&s, &p, mode) {
                        Ok(h) => Some(h),
                        Err(GameError::InfeasibleProfile { .. }) => None,
                        Err(e) => panic!("unexpected error: {e:?}"),
                    };
                    assert_eq!(fast, plain, "mover {mover} at {d} m mode {mode:?}");
                }
            }
        }
    }

    #[test]
    fn comparator_prefers_theta_then_least_movement() {
        let s = test_scenario(&[5.0, 5.0]);
        let near = s.initial_profile();
        let far = near.with_position(0, Position::new(20.0, 0.0));
        assert_eq!(compare_outcomes(&s, 10.0, &near, 9.0, &far), Ordering::Greater);
        assert_eq!(compare_outcomes(&s, 9.0, &near, 10.0, &far), Ordering::Less);
        // Equal throughput: the unmoved profile wins on displacement.
        assert_eq!(compare_outcomes(&s, 10.0, &near, 10.0, &far), Ordering::Greater);
        assert_eq!(compare_outcomes(&s, 10.0, &near, 10.0, &near), Ordering::Equal);
    }

    #[test]
    fn moving_pair_is_canonical_and_validated() {
        assert!(MovingPair::new(2, 2).is_err());
        let p = MovingPair::new(3, 1).unwrap();
        assert_eq!((p.first(), p.second()), (1, 3));
        assert_eq!(p.other(1), 3);
        assert!(p.contains(3));
        assert_eq!(MovingPair::all_pairs(4).len(), 6);
        let s = test_scenario(&[5.0, 5.0]);
        assert!(MovingPair::new(0, 5).unwrap().validate_for(&s).is_err());
    }

    #[test]
    fn profile_json_uses_user_ids() {
        let s = test_scenario(&[5.0, 15.0]);
        let json = s.initial_profile().to_json(&s);
        assert_eq!(json["U0"]["d"], 5.0);
        assert_eq!(json["U1"]["psi"], 90.0);
    }
}
