//! `‖∇R‖/‖R‖` for the symmetric families and for the smallest nonsymmetric
//! space of each table row.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::catalog::expected_symmetric;
use htype_spaces::group::Space;

fn main() -> htype_spaces::Result<()> {
    let specs = [
        CliffordSpec::single(1, 1)?,
        CliffordSpec::single(1, 3)?,
        CliffordSpec::chiral(3, 1, 0)?,
        CliffordSpec::chiral(7, 1, 0)?,
        CliffordSpec::single(2, 1)?,
        CliffordSpec::chiral(3, 1, 1)?,
        CliffordSpec::single(4, 1)?,
        CliffordSpec::single(5, 1)?,
        CliffordSpec::single(6, 1)?,
        CliffordSpec::chiral(7, 2, 0)?,
        CliffordSpec::single(8, 1)?,
    ];
    println!(
        "{:>3} {:>5} {:>4} {:>12} {:>13} {:>9}",
        "k", "mult", "dim", "|R|", "|∇R|/|R|", "verdict"
    );
    for spec in specs {
        let space = Space::from_spec(&spec)?;
        let data = space.curvature();
        let verdict = space.symmetry_verdict();
        println!(
            "{:>3} {:>5} {:>4} {:>12.6} {:>13.3e} {:>9}{}",
            spec.k(),
            spec.multiplicity().to_string(),
            space.dim(),
            data.riemann_norm(),
            data.relative_nabla_riemann(),
            verdict,
            if expected_symmetric(&spec) {
                " (Iwasawa)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
