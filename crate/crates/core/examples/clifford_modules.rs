//! Builds the smallest Clifford module for each center dimension and checks
//! the relations `E_i² = -I`, `E_i E_j = -E_j E_i`.

use htype_spaces::algebra::{
    build_module, has_chirality, min_dimension, verify_clifford, CliffordSpec,
};

fn main() -> htype_spaces::Result<()> {
    println!("{:>3} {:>5} {:>9} {:>12}", "k", "d(k)", "chiral", "max dev");
    for k in 1..=12 {
        let spec = CliffordSpec::minimal(k)?;
        let module = build_module(&spec);
        let report = verify_clifford(&module);
        println!(
            "{k:>3} {:>5} {:>9} {:>12.2e}",
            min_dimension(k)?,
            has_chirality(k),
            report.max_deviation()
        );
    }

    // the two chiralities of Cl(3) differ in the sign of E1 E2 E3
    for (p, m) in [(1, 0), (0, 1)] {
        let module = build_module(&CliffordSpec::chiral(3, p, m)?);
        println!(
            "k = 3, {p}+{m}: E1E2E3[0,0] = {}",
            module.volume_element()[(0, 0)]
        );
    }
    Ok(())
}
