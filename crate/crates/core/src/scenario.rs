//! Experiment pattern construction, scenario file I/O, and run manifests.
//!
//! Six bundled patterns place users B, C, D at fixed starting positions
//! while user A sweeps its initial distance. Patterns I-III use one common
//! radius for B, C, D; the mixed-radius layouts of IV-VI ship as an
//! editable data table and can be overridden from a file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Arena, GameError, Point, Position, Role, Scenario, StrategyGrid, User, UserId};
use crate::optimizer::Method;
use crate::radio::{RadioParams, RateMode};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown pattern id {0:?} (expected I..VI)")]
    UnknownPattern(String),
    #[error("pattern table is missing pattern {0}")]
    MissingPattern(PatternId),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("user {user}: {reason}")]
    InvalidUser { user: String, reason: String },
    #[error(transparent)]
    Validation(#[from] GameError),
}

/// The six bundled experiment patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash)]
pub enum PatternId {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl PatternId {
    pub const ALL: [PatternId; 6] = [
        PatternId::I,
        PatternId::II,
        PatternId::III,
        PatternId::IV,
        PatternId::V,
        PatternId::VI,
    ];
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PatternId::I => "I",
            PatternId::II => "II",
            PatternId::III => "III",
            PatternId::IV => "IV",
            PatternId::V => "V",
            PatternId::VI => "VI",
        };
        f.write_str(s)
    }
}

impl FromStr for PatternId {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(PatternId::I),
            "II" | "2" => Ok(PatternId::II),
            "III" | "3" => Ok(PatternId::III),
            "IV" | "4" => Ok(PatternId::IV),
            "V" | "5" => Ok(PatternId::V),
            "VI" | "6" => Ok(PatternId::VI),
            other => Err(ScenarioError::UnknownPattern(other.to_string())),
        }
    }
}

/// Fixed starting position of one of the non-swept users.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedUserSpec {
    pub id: String,
    pub d: f64,
    pub psi: f64,
}

/// Starting layouts of users B, C, D per pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternTable {
    #[serde(default)]
    pub note: String,
    pub patterns: BTreeMap<PatternId, Vec<FixedUserSpec>>,
}

impl PatternTable {
    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        serde_json::from_str(include_str!("../data/patterns.json"))
            .expect("bundled pattern table parses")
    }

    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ScenarioError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// The arena used by every bundled pattern: 60 x 60 m with the AP centered.
pub fn default_arena() -> Arena {
    Arena::new(60.0, 60.0, Point::new(30.0, 30.0)).expect("default arena is valid")
}

/// Default sweep for user A's initial distance: 1..=30 m.
pub fn default_sweep() -> Vec<f64> {
    (1..=30).map(f64::from).collect()
}

/// Builds a pattern scenario with user A at `(d_a, psi_a)`. Users A and B
/// are labeled existing, C and D new.
pub fn make_pattern(id: PatternId, d_a: f64, psi_a: f64) -> Result<Scenario, ScenarioError> {
    make_pattern_with(&PatternTable::bundled(), id, d_a, psi_a)
}

pub fn make_pattern_with(
    table: &PatternTable,
    id: PatternId,
    d_a: f64,
    psi_a: f64,
) -> Result<Scenario, ScenarioError> {
    let layout = table
        .patterns
        .get(&id)
        .ok_or(ScenarioError::MissingPattern(id))?;
    if !(d_a.is_finite() && d_a >= 0.0) {
        return Err(ScenarioError::InvalidUser {
            user: "A".into(),
            reason: format!("sweep distance must be finite and non-negative, got {d_a}"),
        });
    }
    let mut users = vec![User {
        id: UserId::from("A"),
        initial: Position::new(d_a, psi_a),
        label: Some(Role::Existing),
    }];
    for spec in layout {
        if !(spec.d.is_finite() && spec.d >= 0.0) {
            return Err(ScenarioError::InvalidUser {
                user: spec.id.clone(),
                reason: format!("distance must be finite and non-negative, got {}", spec.d),
            });
        }
        let label = if spec.id == "B" { Role::Existing } else { Role::New };
        users.push(User {
            id: UserId(spec.id.clone()),
            initial: Position::new(spec.d, spec.psi),
            label: Some(label),
        });
    }
    Ok(Scenario::new(default_arena(), RadioParams::default(), users)?)
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ScenarioFile {
    arena: ArenaFile,
    radio: RadioFile,
    users: Vec<UserFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArenaFile {
    width: f64,
    height: f64,
    ap: [f64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
struct RadioFile {
    bandwidth_hz: f64,
    noise_w: f64,
    tx_power_dbm: f64,
    antenna_gain: f64,
    path_loss_exp: f64,
    p_collision: f64,
    p_non_collision: f64,
    sinr_threshold_db: f64,
    min_distance_m: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct UserFile {
    id: String,
    d: f64,
    psi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<Role>,
}

/// Loads and validates a scenario from a JSON file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    scenario_from_json(&text).map_err(|e| match e {
        ScenarioError::Parse { source, .. } => ScenarioError::Parse {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn scenario_from_json(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|source| ScenarioError::Parse {
        path: PathBuf::from("<inline>"),
        source,
    })?;
    let arena = Arena::new(
        file.arena.width,
        file.arena.height,
        Point::new(file.arena.ap[0], file.arena.ap[1]),
    )?;
    let radio = RadioParams::new(
        file.radio.bandwidth_hz,
        file.radio.noise_w,
        file.radio.tx_power_dbm,
        file.radio.antenna_gain,
        file.radio.path_loss_exp,
        file.radio.p_collision,
        file.radio.p_non_collision,
        file.radio.sinr_threshold_db,
        file.radio.min_distance_m,
    )
    .map_err(GameError::from)?;
    let mut users = Vec::with_capacity(file.users.len());
    for u in &file.users {
        if !(u.d.is_finite() && u.d >= 0.0) {
            return Err(ScenarioError::InvalidUser {
                user: u.id.clone(),
                reason: format!("distance must be finite and non-negative, got {}", u.d),
            });
        }
        if !u.psi.is_finite() {
            return Err(ScenarioError::InvalidUser {
                user: u.id.clone(),
                reason: format!("angle must be finite, got {}", u.psi),
            });
        }
        users.push(User {
            id: UserId(u.id.clone()),
            initial: Position::new(u.d, u.psi),
            label: u.label,
        });
    }
    Ok(Scenario::new(arena, radio, users)?)
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let file = ScenarioFile {
        arena: ArenaFile {
            width: scenario.arena.width_m,
            height: scenario.arena.height_m,
            ap: [scenario.arena.ap.x, scenario.arena.ap.y],
        },
        radio: RadioFile {
            bandwidth_hz: scenario.radio.bandwidth_hz,
            noise_w: scenario.radio.noise_w,
            tx_power_dbm: scenario.radio.tx_power_dbm,
            antenna_gain: scenario.radio.antenna_gain,
            path_loss_exp: scenario.radio.path_loss_exp,
            p_collision: scenario.radio.p_collision,
            p_non_collision: scenario.radio.p_non_collision,
            sinr_threshold_db: scenario.radio.sinr_threshold_db,
            min_distance_m: scenario.radio.min_distance_m,
        },
        users: scenario
            .users
            .iter()
            .map(|u| UserFile {
                id: u.id.0.clone(),
                d: u.initial.distance_m,
                psi: u.initial.angle_deg,
                label: u.label,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("scenario serializes")
}

pub fn save_scenario(path: &Path, scenario: &Scenario) -> Result<(), ScenarioError> {
    std::fs::write(path, scenario_to_json(scenario)).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Run manifests
// ---------------------------------------------------------------------------

/// Where a run takes its scenarios from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioSource {
    /// Sweep user A's initial distance across one or more bundled patterns.
    Pattern {
        patterns: Vec<PatternId>,
        #[serde(default = "default_sweep")]
        d_a_values: Vec<f64>,
        #[serde(default = "default_psi_a")]
        psi_a_deg: f64,
        /// Optional pattern table override.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern_table: Option<PathBuf>,
    },
    /// A single scenario file, evaluated once per method.
    File { path: PathBuf },
}

fn default_psi_a() -> f64 {
    90.0
}

/// Strategy-grid selection in a manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    /// "standard" (1..=30 m x 10 degrees) or "coarse" (6 radii x 45 degrees).
    Preset(String),
    Explicit {
        distances_m: Vec<f64>,
        angles_deg: Vec<f64>,
    },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Preset("standard".into())
    }
}

impl GridSpec {
    pub fn resolve(&self) -> Result<StrategyGrid, ScenarioError> {
        match self {
            GridSpec::Preset(name) => match name.as_str() {
                "standard" | "default" => Ok(StrategyGrid::standard()),
                "coarse" | "oracle" => Ok(StrategyGrid::coarse()),
                other => Err(ScenarioError::Validation(GameError::InvalidGrid(format!(
                    "unknown grid preset {other:?} (expected standard or coarse)"
                )))),
            },
            GridSpec::Explicit {
                distances_m,
                angles_deg,
            } => Ok(StrategyGrid::new(distances_m.clone(), angles_deg.clone())?),
        }
    }
}

/// Solver settings carried by a manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SapSettings {
    #[serde(default = "default_steps")]
    pub max_steps: usize,
    /// Master seed; per-point and per-pair seeds derive from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_beta_rate")]
    pub beta_rate: f64,
    #[serde(default = "default_floor")]
    pub temperature_floor: f64,
}

fn default_steps() -> usize {
    1000
}

fn default_beta_rate() -> f64 {
    1.0
}

fn default_floor() -> f64 {
    1e-9
}

impl Default for SapSettings {
    fn default() -> Self {
        SapSettings {
            max_steps: default_steps(),
            seed: 0,
            beta_rate: default_beta_rate(),
            temperature_floor: default_floor(),
        }
    }
}

impl SapSettings {
    pub fn to_config(&self, seed: u64) -> crate::sap::SapConfig {
        crate::sap::SapConfig {
            max_steps: self.max_steps,
            beta_schedule: crate::sap::BetaSchedule::Linear {
                rate: self.beta_rate,
            },
            rng_seed: seed,
            temperature_floor: self.temperature_floor,
        }
    }
}

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}

/// A complete, reproducible description of one run of the tool.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: ScenarioSource,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub sap: SapSettings,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default)]
    pub mode: RateMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl RunManifest {
    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ScenarioError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

// ---------------------------------------------------------------------------
// Test helper
// ---------------------------------------------------------------------------

/// Seeded uniform user placement inside the default arena, rejected until
/// the whole initial profile is capture-feasible. Test support only.
pub fn random_scenario(seed: u64, n_users: usize) -> Scenario {
    assert!((2..=26).contains(&n_users), "supports 2..=26 users");
    let arena = default_arena();
    let radio = RadioParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let users: Vec<User> = (0..n_users)
            .map(|i| {
                let d = rng.random_range(1.0..28.0);
                let psi = rng.random_range(0.0..360.0);
                User {
                    id: UserId(format!("{}", (b'A' + i as u8) as char)),
                    initial: Position::new(d, psi),
                    label: Some(if i + 2 >= n_users { Role::New } else { Role::Existing }),
                }
            })
            .collect();
        let scenario =
            Scenario::new(arena, radio, users).expect("sampled users lie inside the arena");
        if crate::game::per_user_rates(&scenario, &scenario.initial_profile(), RateMode::Exact)
            .is_ok()
        {
            return scenario;
        }
    }
}
