//! The subgroups generated by `X₀, J_{Z₀}X₀, Z₀, T` are totally geodesic
//! copies of the complex hyperbolic plane.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::group::Space;
use htype_spaces::sampling::{seeded_rng, unit_vector, DEFAULT_SEED};

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    let mut rng = seeded_rng(DEFAULT_SEED);
    let x0 = unit_vector(&mut rng, space.m());
    let z0 = unit_vector(&mut rng, space.k());
    let report = space.totally_geodesic_check(&x0, &z0)?;
    println!(
        "second fundamental form {:.2e}",
        report.second_fundamental_form
    );
    println!("closure residual        {:.2e}", report.closure_residual);
    for ((plane, k), (_, reference)) in report.sectional.iter().zip(&report.reference_sectional) {
        println!("K({plane}) = {k:>8.5}   reference {reference:>8.5}");
    }
    Ok(())
}
