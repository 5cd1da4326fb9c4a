//! Geodesics from the origin of the ball are diameters, and arc length equals
//! `log((1 + r)/(1 - r))`.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::geometry::DEFAULT_GEODESIC_STEP;
use htype_spaces::group::Space;
use htype_spaces::radial::rho_from_r;
use htype_spaces::sampling::{seeded_rng, unit_vector, DEFAULT_SEED};

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    let mut rng = seeded_rng(DEFAULT_SEED);
    println!(
        "{:>4} {:>10} {:>12} {:>12} {:>12}",
        "dir", "r(end)", "rho - s", "transverse", "speed err"
    );
    for i in 0..5 {
        let dir = unit_vector(&mut rng, space.dim());
        let path = space.geodesic_integrate(&dir, 2.0, DEFAULT_GEODESIC_STEP)?;
        let end = path.end();
        let r = end.point.radius();
        println!(
            "{i:>4} {r:>10.7} {:>12.2e} {:>12.2e} {:>12.2e}",
            rho_from_r(r)? - end.arc_length,
            path.max_transverse_deviation(),
            path.max_speed_error()
        );
    }
    println!("tanh(1) = {:.7}", 1f64.tanh());
    Ok(())
}
