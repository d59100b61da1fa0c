//! Physical-layer model: received power, SNR, SINR, capture gating, and
//! collision-weighted effective transmission rates.
//!
//! Every quantity here is a pure function of user distances to the access
//! point; angles never enter the link budget. Distances below the configured
//! floor are clamped so received power stays finite as a user walks up to
//! the AP.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadioError {
    #[error("invalid radio parameters: {0}")]
    InvalidParams(String),
    /// The target's SINR fell below the capture threshold. The placement is
    /// infeasible; callers exclude the strategy rather than zeroing the rate.
    #[error("capture violated for user index {target}: SINR {sinr:.6e} < threshold {threshold:.6e}")]
    CaptureViolation {
        target: usize,
        sinr: f64,
        threshold: f64,
    },
}

/// How the effective transmission rate is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateMode {
    /// Collision-weighted Shannon rate over both the SNR and SINR terms.
    #[default]
    Exact,
    /// High-SINR shortcut `W * log2(SINR)`. Only defined for SINR > 1;
    /// anything at or below 1 falls back to the exact form.
    #[serde(alias = "approx")]
    Approximate,
}

/// Physical-layer constants shared by every user in a scenario.
///
/// Constructed through [`RadioParams::new`], which validates the invariants
/// and converts the transmit power to linear watts once up front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Channel bandwidth W in Hz.
    pub bandwidth_hz: f64,
    /// Background noise power N0 in watts.
    pub noise_w: f64,
    /// Per-user transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Dimensionless antenna gain g.
    pub antenna_gain: f64,
    /// Path-loss exponent, constrained to (2, 4].
    pub path_loss_exp: f64,
    /// Probability that a transmission suffers a packet collision.
    pub p_collision: f64,
    /// Probability that a transmission does not collide.
    pub p_non_collision: f64,
    /// Capture threshold in dB: reception succeeds only when SINR meets it.
    pub sinr_threshold_db: f64,
    /// Distance clamp floor in meters.
    pub min_distance_m: f64,
    // Derived once at construction; private so struct literals cannot skip
    // validation.
    tx_power_w: f64,
    sinr_threshold_linear: f64,
}

impl RadioParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        bandwidth_hz: f64,
        noise_w: f64,
        tx_power_dbm: f64,
        antenna_gain: f64,
        path_loss_exp: f64,
        p_collision: f64,
        p_non_collision: f64,
        sinr_threshold_db: f64,
        min_distance_m: f64,
    ) -> Result<Self, RadioError> {
        let fields = [
            bandwidth_hz,
            noise_w,
            tx_power_dbm,
            antenna_gain,
            path_loss_exp,
            p_collision,
            p_non_collision,
            sinr_threshold_db,
            min_distance_m,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(RadioError::InvalidParams(
                "all parameters must be finite".into(),
            ));
        }
        if bandwidth_hz <= 0.0 || noise_w <= 0.0 || antenna_gain <= 0.0 || min_distance_m <= 0.0 {
            return Err(RadioError::InvalidParams(
                "bandwidth, noise, antenna gain and min distance must be positive".into(),
            ));
        }
        if !(path_loss_exp > 2.0 && path_loss_exp <= 4.0) {
            return Err(RadioError::InvalidParams(format!(
                "path loss exponent must satisfy 2 < alpha <= 4, got {path_loss_exp}"
            )));
        }
        if !(0.0..=1.0).contains(&p_collision) || !(0.0..=1.0).contains(&p_non_collision) {
            return Err(RadioError::InvalidParams(
                "collision probabilities must lie in [0, 1]".into(),
            ));
        }
        if (p_collision + p_non_collision - 1.0).abs() > 1e-12 {
            return Err(RadioError::InvalidParams(format!(
                "p_collision + p_non_collision must equal 1, got {}",
                p_collision + p_non_collision
            )));
        }
        Ok(RadioParams {
            bandwidth_hz,
            noise_w,
            tx_power_dbm,
            antenna_gain,
            path_loss_exp,
            p_collision,
            p_non_collision,
            sinr_threshold_db,
            min_distance_m,
            tx_power_w: dbm_to_watts(tx_power_dbm),
            sinr_threshold_linear: 10f64.powf(sinr_threshold_db / 10.0),
        })
    }

    /// Transmit power in linear watts.
    pub fn tx_power_watts(&self) -> f64 {
        self.tx_power_w
    }

    /// Capture threshold as a linear ratio.
    pub fn sinr_threshold_linear(&self) -> f64 {
        self.sinr_threshold_linear
    }
}

impl Default for RadioParams {
    /// 802.11g-style defaults used by the bundled experiment patterns:
    /// 20 MHz channel, 1e-13 W noise, 32 dBm transmit power, gain 5,
    /// path-loss exponent 2.1, 97% collision probability, -20 dB capture
    /// threshold, 1 m distance floor.
    fn default() -> Self {
        RadioParams::new(20e6, 1e-13, 32.0, 5.0, 2.1, 0.97, 0.03, -20.0, 1.0)
            .expect("default radio parameters are valid")
    }
}

/// Convert dBm to watts: `10^((p - 30) / 10)`.
pub fn dbm_to_watts(power_dbm: f64) -> f64 {
    10f64.powf((power_dbm - 30.0) / 10.0)
}

/// Power received by the AP from a user at the given distance, in watts.
///
/// Distances below `min_distance_m` are clamped to the floor, which keeps
/// the inverse power law finite at d = 0.
pub fn received_power(distance_m: f64, params: &RadioParams) -> f64 {
    let d = distance_m.max(params.min_distance_m);
    params.antenna_gain * params.tx_power_watts() / d.powf(params.path_loss_exp)
}

/// Signal-to-noise ratio for a user at the given distance (no interference).
pub fn snr(distance_m: f64, params: &RadioParams) -> f64 {
    received_power(distance_m, params) / params.noise_w
}

/// Signal-to-interference-plus-noise ratio for `target`, where every other
/// entry of `distances` acts as an interferer measured at the AP.
pub fn sinr(target: usize, distances: &[f64], params: &RadioParams) -> f64 {
    let own = received_power(distances[target], params);
    let mut interference = 0.0;
    for (i, &d) in distances.iter().enumerate() {
        if i != target {
            interference += received_power(d, params);
        }
    }
    own / (interference + params.noise_w)
}

/// Capture-effect test: reception succeeds iff the linear SINR meets the
/// threshold (boundary inclusive).
pub fn capture_ok(sinr_linear: f64, params: &RadioParams) -> bool {
    sinr_linear >= params.sinr_threshold_linear()
}

/// Effective transmission rate in bits/s for `target` given the whole
/// profile of user distances.
///
/// Fails with [`RadioError::CaptureViolation`] when the target cannot be
/// captured; callers treat such placements as excluded, not as zero rate.
pub fn effective_rate(
    target: usize,
    distances: &[f64],
    params: &RadioParams,
    mode: RateMode,
) -> Result<f64, RadioError> {
    let gamma = sinr(target, distances, params);
    if !capture_ok(gamma, params) {
        return Err(RadioError::CaptureViolation {
            target,
            sinr: gamma,
            threshold: params.sinr_threshold_linear(),
        });
    }
    let e = snr(distances[target], params);
    Ok(rate_from_ratios(e, gamma, params, mode))
}

/// Rate formula on already-computed SNR/SINR ratios. Shared by the plain
/// per-user path and the incremental evaluator in `game` so both produce
/// bit-identical results.
pub(crate) fn rate_from_ratios(
    snr_linear: f64,
    sinr_linear: f64,
    params: &RadioParams,
    mode: RateMode,
) -> f64 {
    match mode {
        RateMode::Approximate if sinr_linear > 1.0 => params.bandwidth_hz * sinr_linear.log2(),
        _ => {
            params.p_non_collision * params.bandwidth_hz * (1.0 + snr_linear).log2()
                + params.p_collision * params.bandwidth_hz * (1.0 + sinr_linear).log2()
        }
    }
}
