//! Cartesian node positions and LEO pass geometry.

use crate::params::SystemParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("arccos argument {0} outside [-1, 1]")]
    ArccosDomain(f64),
}

/// A point in the shared 3D Cartesian frame (meters). Sea level is z = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// Euclidean distance between two nodes.
pub fn distance3d(p: Position3D, q: Position3D) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Satellite pass geometry seen from a ship at the configured elevation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeoGeometry {
    /// Geocentric angle between ship and satellite (rad).
    pub geocentric_angle: f64,
    /// Slant distance ship-to-satellite (m).
    pub slant_distance: f64,
    /// Orbital speed (m/s).
    pub orbital_speed: f64,
    /// Maximum contiguous communication window during one pass (s).
    pub coverage_window: f64,
}

/// Derives the pass geometry from orbit altitude and elevation angle.
///
/// phi = arccos(Re/(Re+h) * cos(theta)) - theta, slant range by the law
/// of cosines, orbital speed v = sqrt(mu/(Re+h)), and the window
/// T = 2 (Re+h) phi / v unless a fixed override is configured.
pub fn leo_geometry(params: &SystemParams) -> Result<LeoGeometry, GeometryError> {
    let re = params.earth_radius;
    let r_orbit = re + params.orbit_altitude;
    let theta = params.elevation_angle;

    let cos_arg = re / r_orbit * theta.cos();
    if !(-1.0..=1.0).contains(&cos_arg) {
        return Err(GeometryError::ArccosDomain(cos_arg));
    }
    let phi = cos_arg.acos() - theta;

    let slant =
        (re * re + r_orbit * r_orbit - 2.0 * re * r_orbit * phi.cos()).sqrt();
    let speed = (params.mu_grav / r_orbit).sqrt();
    let window = params
        .coverage_override
        .unwrap_or(2.0 * r_orbit * phi / speed);

    Ok(LeoGeometry {
        geocentric_angle: phi,
        slant_distance: slant,
        orbital_speed: speed,
        coverage_window: window,
    })
}
