//! Air-sea and ship-to-satellite channel gains.
//!
//! The ship-to-UAV link follows a log-distance path loss with Rician
//! small-scale fading; the ship-to-satellite link is a quasi-static
//! power-law channel. Deterministic mode replaces every random term by
//! its line-of-sight mean so that runs are exactly reproducible;
//! stochastic mode draws shadowing and small-scale terms from a seeded
//! generator.

use crate::params::SystemParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("link distance must be strictly positive, got {0}")]
    NonPositiveDistance(f64),
}

/// How random channel terms are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelMode {
    /// Shadowing zeroed, small-scale magnitude at its LoS mean.
    #[default]
    Deterministic,
    /// Shadowing and small-scale terms drawn from the given seed.
    Stochastic { seed: u64 },
}

/// One resolved channel draw for a ship.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    /// Ship-to-UAV linear power gain.
    pub gain_uav: f64,
    /// Ship-to-satellite composite gain |h|^2 (linear).
    pub gain_leo_sq: f64,
    /// Seed the draw came from (0 in deterministic mode).
    pub seed: u64,
    pub mode: ChannelMode,
}

/// Standard normal from two uniform draws (Box-Muller).
fn normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Squared magnitude of the Rician small-scale term
/// sqrt(K/(1+K)) + sqrt(1/(1+K)) * o with o ~ CN(0,1).
fn rician_magnitude_sq(k: f64, rng: Option<&mut ChaCha12Rng>) -> f64 {
    let los = (k / (1.0 + k)).sqrt();
    match rng {
        // LoS mean: the scattered component averages to zero.
        None => los * los,
        Some(rng) => {
            let scale = (1.0 / (1.0 + k)).sqrt();
            let re = los + scale * normal(rng) / 2.0_f64.sqrt();
            let im = scale * normal(rng) / 2.0_f64.sqrt();
            re * re + im * im
        }
    }
}

/// Large-scale path loss in dB at distance `d`.
fn path_loss_db(params: &SystemParams, d: f64, shadow_db: f64) -> f64 {
    params.path_loss_ref_db
        + 10.0 * params.path_loss_exp_uav * (d / params.ref_distance).log10()
        + shadow_db
        + params.direction_sign * params.direction_adjust_db
}

/// Ship-to-UAV channel gain g = G_U * G_M * |Lambda|^2 / L(d).
pub fn uav_channel_gain(
    params: &SystemParams,
    distance: f64,
    mode: ChannelMode,
) -> Result<f64, ChannelError> {
    if !(distance > 0.0) {
        return Err(ChannelError::NonPositiveDistance(distance));
    }
    let (shadow_db, small_scale_sq) = match mode {
        ChannelMode::Deterministic => (0.0, rician_magnitude_sq(params.rician_k, None)),
        ChannelMode::Stochastic { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let shadow = params.shadow_sigma_db * normal(&mut rng);
            let ss = rician_magnitude_sq(params.rician_k, Some(&mut rng));
            (shadow, ss)
        }
    };
    let loss_db = path_loss_db(params, distance, shadow_db);
    let loss_linear = 10.0_f64.powf(-loss_db / 10.0);
    Ok(params.antenna_gain_uav * params.antenna_gain_mass * small_scale_sq * loss_linear)
}

/// Ship-to-satellite composite gain |h|^2 = B * |g|^2 * d^-gamma where
/// B is the configured link-budget scale. Rayleigh and extra fading
/// terms default to unit magnitude in deterministic mode.
pub fn leo_channel_gain_sq(
    params: &SystemParams,
    slant_distance: f64,
    mode: ChannelMode,
) -> Result<f64, ChannelError> {
    if !(slant_distance > 0.0) {
        return Err(ChannelError::NonPositiveDistance(slant_distance));
    }
    let rayleigh_sq = match mode {
        ChannelMode::Deterministic => 1.0,
        ChannelMode::Stochastic { seed } => {
            // |g|^2 for g ~ CN(0,1); offset the stream so the UAV and
            // LEO draws from one seed are independent.
            let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x4c45_4f5f_4c49_4e4b);
            let re = normal(&mut rng) / 2.0_f64.sqrt();
            let im = normal(&mut rng) / 2.0_f64.sqrt();
            re * re + im * im
        }
    };
    Ok(params.leo_link_budget
        * rayleigh_sq
        * slant_distance.powf(-params.path_loss_exp_leo))
}

/// Resolves both links of one ship in a single call.
pub fn realize_channel(
    params: &SystemParams,
    uav_distance: f64,
    slant_distance: f64,
    mode: ChannelMode,
) -> Result<ChannelRealization, ChannelError> {
    Ok(ChannelRealization {
        gain_uav: uav_channel_gain(params, uav_distance, mode)?,
        gain_leo_sq: leo_channel_gain_sq(params, slant_distance, mode)?,
        seed: match mode {
            ChannelMode::Deterministic => 0,
            ChannelMode::Stochastic { seed } => seed,
        },
        mode,
    })
}
