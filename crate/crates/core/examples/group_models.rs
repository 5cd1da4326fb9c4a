//! The group law of `S = NA`, its Haar density, and the passage between the
//! group, the Siegel domain and the unit ball.

use htype_spaces::algebra::CliffordSpec;
use htype_spaces::group::Space;
use nalgebra::DVector;

fn main() -> htype_spaces::Result<()> {
    let space = Space::from_spec(&CliffordSpec::single(2, 1)?)?;
    println!(
        "dim S = {}, Q = {}",
        space.dim(),
        space.homogeneous_dimension()
    );

    let s = space.element(
        DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]),
        DVector::zeros(2),
        1.0,
    )?;
    let t = space.element(
        DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]),
        DVector::zeros(2),
        1.0,
    )?;
    let st = space.multiply(&s, &t);
    println!("s t = {:?}", st.to_coordinates().as_slice());
    println!("s⁻¹ = {:?}", space.inverse(&s).to_coordinates().as_slice());

    let g = space.element(DVector::zeros(4), DVector::zeros(2), 2.0)?;
    println!("Haar density at a = 2: {}", space.haar_density(&g));
    println!(
        "det dL_g = {} (a^(Q+1) = {})",
        space.left_translation_jacobian(&g, &st),
        2f64.powi(5)
    );

    let b = space.group_to_ball(&st)?;
    println!(
        "ball point {:?}, |b| = {:.6}",
        b.to_coordinates().as_slice(),
        b.radius()
    );
    let back = space.ball_to_group(&b)?;
    println!("round trip error {:.2e}", back.max_abs_diff(&st));
    Ok(())
}
