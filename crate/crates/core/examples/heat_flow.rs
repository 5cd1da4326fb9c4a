//! Radial heat flow from a narrow bump at the origin.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::group::Space;
use htype_spaces::radial::{gaussian_bump, HeatConfig};

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    let config = HeatConfig::default();
    let grid = config.grid()?;
    let init = gaussian_bump(&space, &grid, 0.5)?;
    let sol = space.heat_solve(&config, &init)?;
    println!("{:>6} {:>16} {:>14} {:>12}", "t", "mass", "<rho^2>", "u(0)");
    for (t, p) in sol.times.iter().zip(&sol.profiles) {
        let rec = sol
            .ledger
            .iter()
            .find(|r| r.time == *t)
            .expect("ledger has every step");
        println!(
            "{t:>6.2} {:>16.12} {:>14.6} {:>12.6}",
            rec.mass,
            rec.second_moment,
            p.values()[0]
        );
    }
    println!(
        "mass drift {:.2e}, min value {:.2e}",
        sol.mass_drift, sol.min_value
    );
    for d in &sol.diagnostics {
        println!("note: {d}");
    }
    Ok(())
}
