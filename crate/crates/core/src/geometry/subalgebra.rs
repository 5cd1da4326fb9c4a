//! The four-dimensional subalgebras `span{X₀, J_{Z₀}X₀, Z₀, T}`.

use nalgebra::DVector;
use serde::Serialize;

use super::curvature::CurvatureData;
use super::frame::Frame;
use crate::error::{check_dim, Error, Result};
use crate::group::Space;

/// Labels of the subalgebra basis, in order.
pub const SUBALGEBRA_BASIS: [&str; 4] = ["X0", "JX0", "Z0", "T"];

#[derive(Debug, Clone, Serialize)]
pub struct TotallyGeodesicReport {
    /// `max |⟨∇_U V, W⟩|` over the subalgebra basis `U, V` and unit `W` orthogonal to it.
    pub second_fundamental_form: f64,
    /// Largest component of a bracket of basis elements outside the subalgebra.
    pub closure_residual: f64,
    /// `⟨[X₀, J_{Z₀}X₀], Z₀⟩`; the bracket is exactly this multiple of `Z₀`.
    pub bracket_x_jx_along_z: f64,
    /// Sectional curvatures of the six coordinate planes, labelled `"A,B"`.
    pub sectional: Vec<(String, f64)>,
    /// The same planes in the complex hyperbolic plane (`k = 1`, `m = 2`).
    pub reference_sectional: Vec<(String, f64)>,
    pub max_sectional_deviation: f64,
    /// `‖∇R‖/‖R‖` of the induced metric on the subalgebra.
    pub relative_nabla_riemann: f64,
}

impl Space {
    /// Checks that the subgroup generated by `X₀, J_{Z₀}X₀, Z₀, T` is totally
    /// geodesic and compares its curvature with the complex hyperbolic plane.
    pub fn totally_geodesic_check(
        &self,
        x0: &DVector<f64>,
        z0: &DVector<f64>,
    ) -> Result<TotallyGeodesicReport> {
        check_dim(self.m(), x0.len())?;
        check_dim(self.k(), z0.len())?;
        let basis = self.subalgebra_basis(x0, z0)?;
        let data = self.curvature();
        let ours = analyze(data, &basis)?;

        let reference_space =
            Space::from_spec(&crate::algebra::CliffordSpec::single(1, 1).expect("valid spec"))?;
        let ref_basis = reference_space.subalgebra_basis(
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
        )?;
        let reference = analyze(reference_space.curvature(), &ref_basis)?;

        let max_sectional_deviation = ours
            .sectional
            .iter()
            .zip(&reference.sectional)
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max);

        let jx = self.algebra().j_map_unchecked(z0, x0);
        let bracket = self.algebra().bracket_unchecked(x0, &jx);

        Ok(TotallyGeodesicReport {
            second_fundamental_form: ours.second_fundamental_form,
            closure_residual: ours.closure_residual,
            bracket_x_jx_along_z: bracket.dot(z0),
            sectional: ours.sectional,
            reference_sectional: reference.sectional,
            max_sectional_deviation,
            relative_nabla_riemann: ours.relative_nabla_riemann,
        })
    }

    fn subalgebra_basis(&self, x0: &DVector<f64>, z0: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
        if !self.has_standard_metric() {
            return Err(Error::Domain(
                "subalgebra check needs the standard H-type metric".into(),
            ));
        }
        if (x0.norm() - 1.0).abs() > 1e-12 || (z0.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("X0 and Z0 must be unit vectors".into()));
        }
        let (m, k, n) = (self.m(), self.k(), self.dim());
        let jx = self.algebra().j_map_unchecked(z0, x0);
        let embed = |x: Option<&DVector<f64>>, z: Option<&DVector<f64>>, t: f64| {
            let mut v = DVector::zeros(n);
            if let Some(x) = x {
                v.rows_mut(0, m).copy_from(x);
            }
            if let Some(z) = z {
                v.rows_mut(m, k).copy_from(z);
            }
            v[n - 1] = t;
            v
        };
        Ok(vec![
            embed(Some(x0), None, 0.0),
            embed(Some(&jx), None, 0.0),
            embed(None, Some(z0), 0.0),
            embed(None, None, 1.0),
        ])
    }
}

struct SubalgebraAnalysis {
    second_fundamental_form: f64,
    closure_residual: f64,
    sectional: Vec<(String, f64)>,
    relative_nabla_riemann: f64,
}

fn analyze(data: &CurvatureData, basis: &[DVector<f64>]) -> Result<SubalgebraAnalysis> {
    let n = data.dim();
    let mut sff = 0.0_f64;
    for u in basis {
        for v in basis {
            let cov = data.connection().covariant(u, v);
            let mut normal = cov.clone();
            for w in basis {
                normal -= w * cov.dot(w);
            }
            sff = sff.max(normal.amax());
        }
    }
    debug_assert_eq!(basis[0].len(), n);
    let (sub, closure_residual) = data.frame().restrict(basis)?;
    let sub_curv = CurvatureData::from_frame(sub);
    let mut sectional = Vec::new();
    for a in 0..basis.len() {
        for b in (a + 1)..basis.len() {
            let k = data.sectional(&basis[a], &basis[b])?;
            sectional.push((
                format!("{},{}", SUBALGEBRA_BASIS[a], SUBALGEBRA_BASIS[b]),
                k,
            ));
        }
    }
    Ok(SubalgebraAnalysis {
        second_fundamental_form: sff,
        closure_residual,
        sectional,
        relative_nabla_riemann: sub_curv.relative_nabla_riemann(),
    })
}

/// Frame of an abstract subalgebra, re-exported for callers that want to run
/// the curvature machinery on it directly.
pub fn subalgebra_frame(space: &Space, x0: &DVector<f64>, z0: &DVector<f64>) -> Result<Frame> {
    let basis = space.subalgebra_basis(x0, z0)?;
    Ok(space.curvature().frame().restrict(&basis)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;
    use crate::sampling::{seeded_rng, unit_vector};

    #[test]
    fn dim7_subalgebras_are_totally_geodesic() {
        let sp = Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap();
        let mut rng = seeded_rng(61);
        for _ in 0..10 {
            let x0 = unit_vector(&mut rng, 4);
            let z0 = unit_vector(&mut rng, 2);
            let rep = sp.totally_geodesic_check(&x0, &z0).unwrap();
            assert!(rep.second_fundamental_form <= 1e-12, "{rep:?}");
            assert!(rep.closure_residual <= 1e-12);
            assert!((rep.bracket_x_jx_along_z - 1.0).abs() <= 1e-12);
            assert!(rep.max_sectional_deviation <= 1e-10, "{rep:?}");
            assert!(rep.relative_nabla_riemann <= 1e-10);
        }
    }

    #[test]
    fn reference_plane_values() {
        let sp = Space::from_spec(&CliffordSpec::single(1, 1).unwrap()).unwrap();
        let rep = sp
            .totally_geodesic_check(
                &DVector::from_vec(vec![1.0, 0.0]),
                &DVector::from_vec(vec![1.0]),
            )
            .unwrap();
        let get = |label: &str| rep.sectional.iter().find(|(l, _)| l == label).unwrap().1;
        assert!((get("X0,T") + 0.25).abs() <= 1e-14);
        assert!((get("Z0,T") + 1.0).abs() <= 1e-14);
        assert!((get("X0,JX0") + 1.0).abs() <= 1e-14);
        assert!((get("X0,Z0") + 0.25).abs() <= 1e-14);
    }

    #[test]
    fn non_unit_inputs_are_rejected() {
        let sp = Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap();
        let x0 = DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0]);
        let z0 = DVector::from_vec(vec![1.0, 0.0]);
        assert!(sp.totally_geodesic_check(&x0, &z0).is_err());
    }
}
