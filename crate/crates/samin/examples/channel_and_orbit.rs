//! Physical-layer building blocks: air-sea channel gain over distance
//! and the satellite pass geometry behind the coverage window.
//!
//!     cargo run --example channel_and_orbit

use samin::{leo_channel_gain_sq, leo_geometry, uav_channel_gain, ChannelMode, SystemParams};

fn main() {
    let params = SystemParams::default();

    println!("ship-to-UAV channel gain (deterministic mode):");
    println!("{:>10} {:>14}", "d (m)", "gain (linear)");
    for d in [1.0, 50.0, 100.0, 150.0, 200.0, 288.0] {
        let g = uav_channel_gain(&params, d, ChannelMode::Deterministic).unwrap();
        println!("{d:>10.0} {g:>14.4e}");
    }

    let seeded = ChannelMode::Stochastic { seed: 7 };
    let g = uav_channel_gain(&params, 150.0, seeded).unwrap();
    println!("\nstochastic draw at 150 m with seed 7: {g:.4e} (reproducible)");

    let orbit = leo_geometry(&params).unwrap();
    println!("\nsatellite pass at {:.0} deg elevation:", params.elevation_angle.to_degrees());
    println!("  geocentric angle = {:.4} rad", orbit.geocentric_angle);
    println!("  slant distance   = {:.1} km", orbit.slant_distance / 1e3);
    println!("  orbital speed    = {:.1} m/s", orbit.orbital_speed);
    println!("  coverage window  = {:.1} s", orbit.coverage_window);

    let h = leo_channel_gain_sq(&params, orbit.slant_distance, ChannelMode::Deterministic).unwrap();
    println!("  |h|^2 at slant   = {h:.4e}");
    println!(
        "  round-trip propagation = {:.2} ms",
        2.0 * orbit.slant_distance / params.light_speed * 1e3
    );
}
