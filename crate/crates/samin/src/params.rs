//! System-wide physical and protocol constants.
//!
//! All values are stored in SI units (W, Hz, bits, s, m, cycles/s). Unit
//! conversions from config notation (mW, MHz, km, dB, ...) happen in the
//! config parser, never inside formulas.

use thiserror::Error;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Earth's standard gravitational parameter in m^3/s^2.
pub const EARTH_MU: f64 = 3.986004418e14;

/// Mean Earth radius in m.
pub const EARTH_RADIUS: f64 = 6.371e6;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("parameter `{0}` must be strictly positive, got {1}")]
    NonPositive(&'static str, f64),
    #[error("direction sign xi must be -1 or +1, got {0}")]
    BadDirectionSign(f64),
    #[error("elevation angle must lie in (0, pi/2], got {0} rad")]
    BadElevation(f64),
}

/// Every physical constant of the two-tier edge system.
///
/// Defaults combine the published simulation table with documented
/// fill-ins for the constants the table omits (antenna gains, link
/// budgets, compute powers, capacity caps). All of them can be
/// overridden from a scenario config file.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    // -- ship-to-UAV channel --
    /// Reference path loss at `ref_distance` (dB).
    pub path_loss_ref_db: f64,
    /// Reference distance d0 (m).
    pub ref_distance: f64,
    /// Path-loss exponent over the sea surface (ducting).
    pub path_loss_exp_uav: f64,
    /// Shadow-fading standard deviation (dB), stochastic mode only.
    pub shadow_sigma_db: f64,
    /// Travel-direction adjustment (dB).
    pub direction_adjust_db: f64,
    /// Direction sign: +1 toward the site, -1 away.
    pub direction_sign: f64,
    /// Rician K-factor (linear).
    pub rician_k: f64,
    /// UAV antenna gain (linear).
    pub antenna_gain_uav: f64,
    /// Ship antenna gain (linear).
    pub antenna_gain_mass: f64,
    /// AWGN power at the UAV receiver (W).
    pub noise_power_uav: f64,
    /// Ship-to-UAV bandwidth (Hz).
    pub bandwidth_uav: f64,

    // -- ship-to-LEO channel --
    /// Ship-to-LEO bandwidth (Hz).
    pub bandwidth_leo: f64,
    /// LEO noise power spectral density (W/Hz).
    pub noise_psd_leo: f64,
    /// LEO path exponent.
    pub path_loss_exp_leo: f64,
    /// Linear scale on the LEO composite gain |h|^2 = scale * d^-gamma.
    pub leo_link_budget: f64,
    /// Unused channel power gain exponent carried from the parameter
    /// table; stored for config round-trips only.
    pub channel_gain_exp: f64,

    // -- orbit geometry --
    /// LEO orbit altitude (m).
    pub orbit_altitude: f64,
    /// Earth radius (m).
    pub earth_radius: f64,
    /// Standard gravitational parameter (m^3/s^2).
    pub mu_grav: f64,
    /// Elevation angle to the satellite (rad).
    pub elevation_angle: f64,
    /// Speed of light (m/s).
    pub light_speed: f64,
    /// Optional fixed coverage window (s) overriding the orbital one.
    pub coverage_override: Option<f64>,

    // -- serving constraints --
    /// Maximum ship-to-UAV distance (m).
    pub max_link_distance: f64,

    // -- compute model --
    /// CPU cycles per bit at the ship.
    pub cycles_per_bit_local: f64,
    /// CPU cycles per bit at the UAV.
    pub cycles_per_bit_uav: f64,
    /// CPU cycles per bit at the satellite.
    pub cycles_per_bit_leo: f64,
    /// Ship compute power draw (W).
    pub compute_power_local: f64,
    /// UAV compute power draw (W).
    pub compute_power_uav: f64,
    /// Satellite compute power draw (W).
    pub compute_power_leo: f64,

    // -- caps and budgets --
    /// Ship transmit power cap toward the UAV (W).
    pub max_tx_power_uav: f64,
    /// Ship transmit power cap toward the satellite (W).
    pub max_tx_power_leo: f64,
    /// Per-UAV compute energy budget (J).
    pub max_energy_uav: f64,
    /// Satellite compute energy budget (J).
    pub max_energy_leo: f64,
    /// Per-UAV CPU capacity (cycles/s).
    pub max_cpu_uav: f64,
    /// Satellite CPU capacity shared by all ships (cycles/s).
    pub max_cpu_leo: f64,

    /// Per-task latency bound (s).
    pub deadline: f64,

    /// Exponent cap for 2^x terms; beyond this the link is treated as
    /// rate-infeasible instead of returning astronomic powers.
    pub exponent_cap: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            path_loss_ref_db: 40.0,
            ref_distance: 1.0,
            path_loss_exp_uav: 1.6,
            shadow_sigma_db: 4.0,
            direction_adjust_db: 0.0,
            direction_sign: 1.0,
            rician_k: 10.0,
            antenna_gain_uav: 10.0,
            antenna_gain_mass: 10.0,
            noise_power_uav: 7.9e-12,
            bandwidth_uav: 12.0e6,
            bandwidth_leo: 15.0e6,
            noise_psd_leo: 2.3e-20,
            path_loss_exp_leo: 2.0,
            leo_link_budget: 1.0,
            channel_gain_exp: 1.0,
            orbit_altitude: 784.0e3,
            earth_radius: EARTH_RADIUS,
            mu_grav: EARTH_MU,
            elevation_angle: 30.0_f64.to_radians(),
            light_speed: SPEED_OF_LIGHT,
            coverage_override: None,
            max_link_distance: 300.0,
            cycles_per_bit_local: 1.0e3,
            cycles_per_bit_uav: 1.0e3,
            cycles_per_bit_leo: 1.0e3,
            compute_power_local: 0.5,
            compute_power_uav: 2.0,
            compute_power_leo: 5.0,
            max_tx_power_uav: 1.0,
            max_tx_power_leo: 10.0,
            max_energy_uav: 50.0,
            max_energy_leo: 500.0,
            max_cpu_uav: 3.0e10,
            max_cpu_leo: 3.4e11,
            deadline: 1.0,
            exponent_cap: 64.0,
        }
    }
}

impl SystemParams {
    /// Checks the positivity and range invariants of every field.
    pub fn validate(&self) -> Result<(), ParamError> {
        let positive: [(&'static str, f64); 22] = [
            ("ref_distance", self.ref_distance),
            ("path_loss_exp_uav", self.path_loss_exp_uav),
            ("rician_k", self.rician_k),
            ("antenna_gain_uav", self.antenna_gain_uav),
            ("antenna_gain_mass", self.antenna_gain_mass),
            ("noise_power_uav", self.noise_power_uav),
            ("bandwidth_uav", self.bandwidth_uav),
            ("bandwidth_leo", self.bandwidth_leo),
            ("noise_psd_leo", self.noise_psd_leo),
            ("leo_link_budget", self.leo_link_budget),
            ("orbit_altitude", self.orbit_altitude),
            ("earth_radius", self.earth_radius),
            ("mu_grav", self.mu_grav),
            ("light_speed", self.light_speed),
            ("max_link_distance", self.max_link_distance),
            ("cycles_per_bit_local", self.cycles_per_bit_local),
            ("cycles_per_bit_uav", self.cycles_per_bit_uav),
            ("cycles_per_bit_leo", self.cycles_per_bit_leo),
            ("max_cpu_uav", self.max_cpu_uav),
            ("max_cpu_leo", self.max_cpu_leo),
            ("deadline", self.deadline),
            ("exponent_cap", self.exponent_cap),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(ParamError::NonPositive(name, v));
            }
        }
        if self.direction_sign != 1.0 && self.direction_sign != -1.0 {
            return Err(ParamError::BadDirectionSign(self.direction_sign));
        }
        if !(self.elevation_angle > 0.0
            && self.elevation_angle <= std::f64::consts::FRAC_PI_2)
        {
            return Err(ParamError::BadElevation(self.elevation_angle));
        }
        if let Some(t) = self.coverage_override {
            if !(t > 0.0) {
                return Err(ParamError::NonPositive("coverage_override", t));
            }
        }
        Ok(())
    }
}
