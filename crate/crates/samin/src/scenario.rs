//! Scenario assembly: UAV/ship geometry, task descriptors, and resolved
//! channel realizations for every ship.

use crate::channel::{realize_channel, ChannelError, ChannelMode, ChannelRealization};
use crate::geometry::{distance3d, leo_geometry, GeometryError, LeoGeometry, Position3D};
use crate::params::SystemParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("ship ({0},{1}) is {2:.1} m from its UAV, beyond the {3:.1} m limit")]
    OutOfRange(usize, usize, f64, f64),
    #[error("task invariant violated for ship ({0},{1}): {2}")]
    BadTask(usize, usize, String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("scenario needs at least one UAV and one ship per UAV")]
    Empty,
}

/// Per-ship task descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Task {
    /// Total input size (bits).
    pub size_bits: f64,
    /// Ship CPU capacity (cycles/s).
    pub cpu_local: f64,
    /// Latency bound (s).
    pub deadline: f64,
    /// Fixed ship-to-UAV transmission time (s).
    pub tx_time_uav: f64,
    /// Fixed ship-to-satellite transmission time including propagation (s).
    pub tx_time_leo: f64,
}

/// One ship: where it floats, what it must compute, what its links look like.
#[derive(Debug, Clone)]
pub struct MassNode {
    pub position: Position3D,
    pub task: Task,
    pub channel: ChannelRealization,
}

/// A fully resolved problem instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: SystemParams,
    pub uav_positions: Vec<Position3D>,
    /// Ships indexed `[uav][n]`; every UAV serves the same count.
    pub masses: Vec<Vec<MassNode>>,
    pub leo: LeoGeometry,
    pub channel_mode: ChannelMode,
}

impl Scenario {
    /// Number of UAVs (M).
    pub fn num_uavs(&self) -> usize {
        self.uav_positions.len()
    }

    /// Ships per UAV (N).
    pub fn masses_per_uav(&self) -> usize {
        self.masses.first().map_or(0, Vec::len)
    }

    /// Total ship count M * N.
    pub fn total_masses(&self) -> usize {
        self.masses.iter().map(Vec::len).sum()
    }

    /// Iterates `(m, n, &node)` over all ships.
    pub fn iter_masses(&self) -> impl Iterator<Item = (usize, usize, &MassNode)> {
        self.masses
            .iter()
            .enumerate()
            .flat_map(|(m, row)| row.iter().enumerate().map(move |(n, node)| (m, n, node)))
    }

    /// Static feasibility: every ship within range of its UAV, every
    /// task well-formed, and the satellite window long enough for the
    /// configured transmission times and deadlines.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.uav_positions.is_empty() || self.masses_per_uav() == 0 {
            return Err(ScenarioError::Empty);
        }
        let prop = 2.0 * self.leo.slant_distance / self.params.light_speed;
        for (m, uav) in self.uav_positions.iter().enumerate() {
            if uav.z < 0.0 {
                return Err(ScenarioError::BadTask(m, 0, format!("UAV below sea level: z = {}", uav.z)));
            }
        }
        for (m, n, node) in self.iter_masses() {
            if node.position.z < 0.0 {
                return Err(ScenarioError::BadTask(
                    m,
                    n,
                    format!("ship below sea level: z = {}", node.position.z),
                ));
            }
            let d = distance3d(self.uav_positions[m], node.position);
            if d > self.params.max_link_distance {
                return Err(ScenarioError::OutOfRange(
                    m,
                    n,
                    d,
                    self.params.max_link_distance,
                ));
            }
            let t = &node.task;
            if !(t.size_bits > 0.0) {
                return Err(ScenarioError::BadTask(m, n, format!("size {} <= 0", t.size_bits)));
            }
            if !(t.cpu_local > 0.0) {
                return Err(ScenarioError::BadTask(m, n, format!("cpu {} <= 0", t.cpu_local)));
            }
            if !(t.tx_time_uav > 0.0) {
                return Err(ScenarioError::BadTask(m, n, "tx_time_uav <= 0".into()));
            }
            if t.tx_time_leo <= prop {
                return Err(ScenarioError::BadTask(
                    m,
                    n,
                    format!("tx_time_leo {} within propagation floor {prop:.4}", t.tx_time_leo),
                ));
            }
            if t.deadline > self.leo.coverage_window {
                return Err(ScenarioError::BadTask(
                    m,
                    n,
                    format!(
                        "deadline {} exceeds satellite window {:.1}",
                        t.deadline, self.leo.coverage_window
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// What to do when a drawn ship position lands outside the link range
/// (possible when the disc radius fraction exceeds 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlacementPolicy {
    /// Fail scenario validation.
    #[default]
    Reject,
    /// Redraw the position until it is in range.
    Regenerate,
}

/// Builder for scenarios with seeded ship placement.
#[derive(Debug, Clone)]
pub struct ScenarioBuilder {
    pub params: SystemParams,
    pub uav_positions: Vec<Position3D>,
    pub masses_per_uav: usize,
    /// Explicit ship positions; when `None` ships are placed uniformly
    /// in a disc of `disc_radius_frac * max_link_distance` (ground
    /// projection) around each UAV.
    pub mass_positions: Option<Vec<Vec<Position3D>>>,
    pub disc_radius_frac: f64,
    pub placement_policy: PlacementPolicy,
    pub placement_seed: u64,
    pub task: Task,
    pub channel_mode: ChannelMode,
}

/// UAV hover points of the stock four-cell layout (m).
pub fn default_uav_positions() -> Vec<Position3D> {
    vec![
        Position3D::new(125.0, 125.0, 100.0),
        Position3D::new(125.0, 375.0, 100.0),
        Position3D::new(375.0, 125.0, 100.0),
        Position3D::new(375.0, 375.0, 100.0),
    ]
}

impl Default for ScenarioBuilder {
    fn default() -> Self {
        let params = SystemParams::default();
        Self {
            task: Task {
                size_bits: 1.0e7,
                cpu_local: 7.0e9,
                deadline: params.deadline,
                tx_time_uav: 0.4,
                tx_time_leo: 0.7,
            },
            params,
            uav_positions: default_uav_positions(),
            masses_per_uav: 5,
            mass_positions: None,
            disc_radius_frac: 0.9,
            placement_policy: PlacementPolicy::Reject,
            placement_seed: 42,
            channel_mode: ChannelMode::Deterministic,
        }
    }
}

impl ScenarioBuilder {
    pub fn build(&self) -> Result<Scenario, ScenarioError> {
        let leo = leo_geometry(&self.params)?;
        let mut rng = ChaCha12Rng::seed_from_u64(self.placement_seed);
        let mut masses = Vec::with_capacity(self.uav_positions.len());

        for (m, uav) in self.uav_positions.iter().enumerate() {
            let mut row = Vec::with_capacity(self.masses_per_uav);
            for n in 0..self.masses_per_uav {
                let position = match &self.mass_positions {
                    Some(explicit) => explicit[m][n],
                    None => {
                        // Ground radius capped so the 3D distance stays
                        // inside the link limit at the UAV's altitude.
                        let max_ground = (self.params.max_link_distance.powi(2)
                            - uav.z.powi(2))
                        .max(0.0)
                        .sqrt();
                        let mut draw = || {
                            let r = max_ground
                                * self.disc_radius_frac
                                * rng.gen::<f64>().sqrt();
                            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
                            Position3D::new(uav.x + r * angle.cos(), uav.y + r * angle.sin(), 0.0)
                        };
                        let mut pos = draw();
                        if self.placement_policy == PlacementPolicy::Regenerate {
                            let mut tries = 0;
                            while distance3d(*uav, pos) > self.params.max_link_distance
                                && tries < 200
                            {
                                pos = draw();
                                tries += 1;
                            }
                        }
                        pos
                    }
                };
                let d = distance3d(*uav, position);
                let mode = match self.channel_mode {
                    ChannelMode::Deterministic => ChannelMode::Deterministic,
                    ChannelMode::Stochastic { seed } => ChannelMode::Stochastic {
                        // Per-ship substream.
                        seed: seed
                            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                            .wrapping_add((m as u64) << 32 | n as u64),
                    },
                };
                let channel = realize_channel(&self.params, d, leo.slant_distance, mode)?;
                row.push(MassNode {
                    position,
                    task: self.task,
                    channel,
                });
            }
            masses.push(row);
        }

        let scenario = Scenario {
            params: self.params.clone(),
            uav_positions: self.uav_positions.clone(),
            masses,
            leo,
            channel_mode: self.channel_mode,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// The stock scenario: four UAVs, five ships each, 10 Mbit tasks.
pub fn default_scenario() -> Scenario {
    ScenarioBuilder::default()
        .build()
        .expect("default scenario must be feasible")
}

/// A single-UAV, single-ship instance with the stock constants, used by
/// the small-instance oracles.
pub fn single_mass_scenario() -> Scenario {
    let builder = ScenarioBuilder {
        uav_positions: vec![Position3D::new(0.0, 0.0, 100.0)],
        masses_per_uav: 1,
        mass_positions: Some(vec![vec![Position3D::new(150.0, 0.0, 0.0)]]),
        ..ScenarioBuilder::default()
    };
    builder.build().expect("single-mass scenario must be feasible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_shape() {
        let s = default_scenario();
        assert_eq!(s.num_uavs(), 4);
        assert_eq!(s.masses_per_uav(), 5);
        assert_eq!(s.total_masses(), 20);
        s.validate().unwrap();
    }

    #[test]
    fn placement_is_seed_deterministic() {
        let a = ScenarioBuilder::default().build().unwrap();
        let b = ScenarioBuilder::default().build().unwrap();
        for ((_, _, x), (_, _, y)) in a.iter_masses().zip(b.iter_masses()) {
            assert_eq!(x.position, y.position);
            assert_eq!(x.channel, y.channel);
        }
        let c = ScenarioBuilder {
            placement_seed: 43,
            ..ScenarioBuilder::default()
        }
        .build()
        .unwrap();
        let moved = a
            .iter_masses()
            .zip(c.iter_masses())
            .any(|((_, _, x), (_, _, y))| x.position != y.position);
        assert!(moved, "different seed should move ships");
    }

    #[test]
    fn placement_respects_link_limit() {
        for seed in 0..25 {
            let s = ScenarioBuilder {
                placement_seed: seed,
                ..ScenarioBuilder::default()
            }
            .build()
            .unwrap();
            for (m, _, node) in s.iter_masses() {
                let d = distance3d(s.uav_positions[m], node.position);
                assert!(d <= s.params.max_link_distance, "seed {seed}: {d}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range_ship() {
        let builder = ScenarioBuilder {
            uav_positions: vec![Position3D::new(125.0, 125.0, 100.0)],
            masses_per_uav: 1,
            mass_positions: Some(vec![vec![Position3D::new(500.0, 500.0, 0.0)]]),
            ..ScenarioBuilder::default()
        };
        match builder.build() {
            Err(ScenarioError::OutOfRange(0, 0, d, limit)) => {
                assert!((d - 291250.0_f64.sqrt()).abs() < 1e-6);
                assert_eq!(limit, 300.0);
            }
            other => panic!("expected OutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn regenerate_policy_redraws_out_of_range_ships() {
        // A disc fraction above 1 can put draws out of range; the
        // regenerate policy redraws them, the reject policy errors.
        let wide = |policy| ScenarioBuilder {
            disc_radius_frac: 1.6,
            placement_policy: policy,
            placement_seed: 3,
            ..ScenarioBuilder::default()
        };
        let ok = wide(PlacementPolicy::Regenerate).build().unwrap();
        for (m, _, node) in ok.iter_masses() {
            assert!(distance3d(ok.uav_positions[m], node.position) <= 300.0);
        }
        assert!(matches!(
            wide(PlacementPolicy::Reject).build(),
            Err(ScenarioError::OutOfRange(_, _, _, _))
        ));
    }

    #[test]
    fn rejects_ship_below_sea_level() {
        let builder = ScenarioBuilder {
            uav_positions: vec![Position3D::new(0.0, 0.0, 100.0)],
            masses_per_uav: 1,
            mass_positions: Some(vec![vec![Position3D::new(50.0, 0.0, -1.0)]]),
            ..ScenarioBuilder::default()
        };
        assert!(matches!(builder.build(), Err(ScenarioError::BadTask(_, _, _))));
    }

    #[test]
    fn rejects_tx_time_under_propagation_floor() {
        let mut builder = ScenarioBuilder::default();
        builder.task.tx_time_leo = 0.005; // below 2 d_L / c ~ 9.1 ms
        assert!(matches!(builder.build(), Err(ScenarioError::BadTask(_, _, _))));
    }
}
