//! Laplacians of a radial function stay radial on `S`, but not after the
//! metric on the center is rescaled.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::group::Space;
use htype_spaces::radial::{Gaussian, HARMONIC_TOL};
use htype_spaces::sampling::{seeded_rng, DEFAULT_SEED};

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    let control = space.with_center_scale(2.0)?;
    let f = Gaussian::default();
    let mut rng = seeded_rng(DEFAULT_SEED);
    for (name, sp) in [("S", &space), ("rescaled", &control)] {
        for rho in [0.5, 1.0, 2.0] {
            let r = sp.harmonicity_check(&f, rho, 12, HARMONIC_TOL, &mut rng)?;
            println!(
                "{name:>9} rho = {rho}: radial {:>10.6} spread {:>9.2e} deviation {:>9.2e} {}",
                r.radial_value,
                r.spread,
                r.max_deviation,
                if r.matches_radial() {
                    "radial"
                } else {
                    "not radial"
                }
            );
        }
    }
    Ok(())
}
