//! Prints the table of dimensions in which nonsymmetric harmonic spaces occur.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::catalog::{expected_symmetric, render_table, table_for};

fn main() -> htype_spaces::Result<()> {
    let table = render_table(3);
    print!("{}", table.to_text());
    println!();
    print!("{}", table_for([9, 10], 1)?.to_text());
    println!();
    for spec in [
        CliffordSpec::single(1, 4)?,
        CliffordSpec::chiral(3, 2, 0)?,
        CliffordSpec::chiral(3, 1, 1)?,
        CliffordSpec::chiral(7, 1, 0)?,
        CliffordSpec::chiral(7, 1, 1)?,
    ] {
        println!(
            "k = {}, mult = {}: dim {} symmetric = {}",
            spec.k(),
            spec.multiplicity(),
            spec.space_dimension(),
            expected_symmetric(&spec)
        );
    }
    Ok(())
}
