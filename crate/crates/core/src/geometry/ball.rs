//! The left-invariant metric pulled back to the ball model.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::group::{BallPoint, Space};

/// Points with `1 - r²` below this are rejected by [`Space::metric_at_ball`].
pub const MIN_BOUNDARY_MARGIN: f64 = 1e-9;

/// Central-difference step for derivatives of the ball metric.
pub const METRIC_FD_STEP: f64 = 1e-5;

/// `ρ = log((1 + r)/(1 - r))`.
pub fn distance_from_origin(b: &BallPoint) -> f64 {
    2.0 * b.radius().atanh()
}

impl Space {
    /// `g_B(b) = Dφᵀ (DL_{φ(b)⁻¹})ᵀ G (DL_{φ(b)⁻¹}) Dφ` with `φ` the ball chart
    /// and `G` the metric at the identity.
    pub fn metric_at_ball(&self, b: &BallPoint) -> Result<DMatrix<f64>> {
        check_dim(self.m(), b.x().len())?;
        check_dim(self.k(), b.z().len())?;
        let margin = 1.0 - b.radius_squared();
        if margin < MIN_BOUNDARY_MARGIN {
            return Err(Error::NearBoundary { margin });
        }
        let s = self.ball_to_group(b)?;
        let to_identity = self.left_translation_differential(&self.inverse(&s));
        let frame = to_identity * self.ball_chart_jacobian(b);
        let weighted = DMatrix::from_diagonal(self.gram()) * &frame;
        let g = frame.tr_mul(&weighted);
        Ok((&g + g.transpose()) * 0.5)
    }

    /// Metric at raw ball coordinates.
    pub(crate) fn metric_at_coordinates(&self, c: &DVector<f64>) -> Result<DMatrix<f64>> {
        let b = BallPoint::from_coordinates(c, self.m(), self.k()).map_err(|_| {
            Error::NearBoundary {
                margin: 1.0 - c.norm_squared(),
            }
        })?;
        self.metric_at_ball(&b)
    }

    /// Christoffel symbols of the ball metric, `out[l][(i, j)] = Γ^l_{ij}`, from
    /// central differences of [`Space::metric_at_ball`].
    pub fn christoffel_at_ball(&self, b: &BallPoint) -> Result<Vec<DMatrix<f64>>> {
        let n = self.dim();
        let x = b.to_coordinates();
        let g = self.metric_at_ball(b)?;
        let g_inv = g
            .clone()
            .cholesky()
            .ok_or(Error::NearBoundary {
                margin: 1.0 - b.radius_squared(),
            })?
            .inverse();
        let mut dg = Vec::with_capacity(n);
        for p in 0..n {
            let mut fwd = x.clone();
            let mut bwd = x.clone();
            fwd[p] += METRIC_FD_STEP;
            bwd[p] -= METRIC_FD_STEP;
            let d = (self.metric_at_coordinates(&fwd)? - self.metric_at_coordinates(&bwd)?)
                / (2.0 * METRIC_FD_STEP);
            dg.push(d);
        }
        // first kind: [ij, p] = ½(∂_i g_pj + ∂_j g_pi - ∂_p g_ij)
        let mut first = vec![DMatrix::zeros(n, n); n];
        for (p, fp) in first.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    fp[(i, j)] = 0.5 * (dg[i][(p, j)] + dg[j][(p, i)] - dg[p][(i, j)]);
                }
            }
        }
        let mut out = vec![DMatrix::zeros(n, n); n];
        for (l, ol) in out.iter_mut().enumerate() {
            for (p, fp) in first.iter().enumerate() {
                let w = g_inv[(l, p)];
                if w != 0.0 {
                    *ol += fp * w;
                }
            }
        }
        Ok(out)
    }

    /// `-Γ^l_{ij} vⁱ vʲ` at ball coordinates `x`, using only directional
    /// differences of the metric (`2 + 2n` metric evaluations).
    pub(crate) fn geodesic_acceleration(
        &self,
        x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let n = self.dim();
        let h = METRIC_FD_STEP;
        let g = self.metric_at_coordinates(x)?;
        // ∂_v g
        let dv_g = (self.metric_at_coordinates(&(x + v * h))?
            - self.metric_at_coordinates(&(x - v * h))?)
            / (2.0 * h);
        // ∂_p (vᵀ g v)
        let mut grad = DVector::zeros(n);
        for p in 0..n {
            let mut fwd = x.clone();
            let mut bwd = x.clone();
            fwd[p] += h;
            bwd[p] -= h;
            let qf = v.dot(&(self.metric_at_coordinates(&fwd)? * v));
            let qb = v.dot(&(self.metric_at_coordinates(&bwd)? * v));
            grad[p] = (qf - qb) / (2.0 * h);
        }
        let rhs = dv_g * v - grad * 0.5;
        let chol = g.cholesky().ok_or(Error::NearBoundary {
            margin: 1.0 - x.norm_squared(),
        })?;
        Ok(-chol.solve(&rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;
    use crate::sampling::{ball_vector, seeded_rng};

    fn dim7() -> Space {
        Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap()
    }

    #[test]
    fn metric_at_origin_is_four_identity() {
        for spec in [
            CliffordSpec::single(1, 1).unwrap(),
            CliffordSpec::single(2, 1).unwrap(),
            CliffordSpec::chiral(3, 1, 1).unwrap(),
            CliffordSpec::single(8, 1).unwrap(),
        ] {
            let sp = Space::from_spec(&spec).unwrap();
            let g = sp
                .metric_at_ball(&BallPoint::origin(sp.m(), sp.k()))
                .unwrap();
            let n = sp.dim();
            assert!((g - DMatrix::identity(n, n) * 4.0).amax() <= 1e-12);
        }
    }

    #[test]
    fn metric_is_symmetric_positive_definite() {
        let sp = dim7();
        let mut rng = seeded_rng(41);
        for _ in 0..200 {
            let b = BallPoint::from_coordinates(&ball_vector(&mut rng, 7, 0.95), 4, 2).unwrap();
            let g = sp.metric_at_ball(&b).unwrap();
            assert!((&g - g.transpose()).amax() <= 1e-12 * g.amax());
            assert!(g.cholesky().is_some());
        }
    }

    #[test]
    fn metric_on_t_axis_depends_on_abs_t() {
        let sp = dim7();
        for t in [0.1, 0.35, 0.6, 0.85] {
            let up = sp
                .metric_at_ball(&BallPoint::new(DVector::zeros(4), DVector::zeros(2), t).unwrap())
                .unwrap();
            let down = sp
                .metric_at_ball(&BallPoint::new(DVector::zeros(4), DVector::zeros(2), -t).unwrap())
                .unwrap();
            assert!((&up - &down).amax() <= 1e-8 * up.amax(), "t = {t}");
        }
    }

    #[test]
    fn boundary_points_are_rejected() {
        let sp = dim7();
        let b = BallPoint::new(DVector::zeros(4), DVector::zeros(2), 1.0 - 1e-12).unwrap();
        assert!(matches!(
            sp.metric_at_ball(&b),
            Err(Error::NearBoundary { .. })
        ));
    }

    #[test]
    fn contracted_christoffels_match_full_symbols() {
        let sp = dim7();
        let mut rng = seeded_rng(42);
        for _ in 0..5 {
            let x = ball_vector(&mut rng, 7, 0.6);
            let v = ball_vector(&mut rng, 7, 1.0);
            let b = BallPoint::from_coordinates(&x, 4, 2).unwrap();
            let gamma = sp.christoffel_at_ball(&b).unwrap();
            let full = DVector::from_iterator(7, gamma.iter().map(|gl| -v.dot(&(gl * &v))));
            let fast = sp.geodesic_acceleration(&x, &v).unwrap();
            assert!((full - fast).amax() <= 1e-7);
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_from_origin(&BallPoint::origin(2, 1)), 0.0);
        let b = BallPoint::new(
            DVector::from_vec(vec![0.3, 0.0]),
            DVector::from_vec(vec![0.4]),
            0.0,
        )
        .unwrap();
        assert!((distance_from_origin(&b) - 3f64.ln()).abs() <= 1e-15);
    }
}
