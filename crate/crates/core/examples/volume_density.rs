//! The volume density in polar coordinates about the origin: closed form
//! against `√det g` of the ball metric in random directions.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::group::Space;
use htype_spaces::sampling::{seeded_rng, unit_vector, DEFAULT_SEED};

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    let mut rng = seeded_rng(DEFAULT_SEED);
    println!(
        "{:>5} {:>14} {:>14} {:>10}",
        "rho", "omega", "numeric", "rel err"
    );
    for rho in [0.1, 0.3, 1.0, 2.0, 3.0, 4.0] {
        let closed = space.density_omega(rho);
        let worst = (0..16)
            .map(|_| space.volume_density_numeric(rho, &unit_vector(&mut rng, space.dim())))
            .collect::<htype_spaces::Result<Vec<_>>>()?
            .into_iter()
            .map(|v| (v - closed).abs() / closed)
            .fold(0.0, f64::max);
        let sample = space.volume_density_numeric(rho, &unit_vector(&mut rng, space.dim()))?;
        println!("{rho:>5} {closed:>14.6e} {sample:>14.6e} {worst:>10.2e}");
    }
    println!("drift at rho = 1: {}", space.radial_drift(1.0)?);
    Ok(())
}
