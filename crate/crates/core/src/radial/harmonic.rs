//! Numerical Laplace–Beltrami operator on the ball model and the direction
//! sweep that tests whether Laplacians of radial functions stay radial.

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use super::density::r_from_rho;
use crate::error::{Error, Result};
use crate::geometry::distance_from_origin;
use crate::group::{BallPoint, Space};
use crate::sampling::unit_vector;

/// Central-difference step for the nested flux stencil.
pub const LAPLACE_BELTRAMI_STEP: f64 = 1e-4;

/// Default relative tolerance of the harmonicity sweep.
pub const HARMONIC_TOL: f64 = 1e-4;

/// A function of the distance to the origin with known derivatives.
pub trait RadialFunction {
    fn value(&self, rho: f64) -> f64;
    fn d1(&self, rho: f64) -> f64;
    fn d2(&self, rho: f64) -> f64;

    /// The function on the ball, `b ↦ f(ρ(b))`.
    fn on_ball(&self, b: &BallPoint) -> f64 {
        self.value(distance_from_origin(b))
    }
}

/// `exp(-(ρ/width)²)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Gaussian {
    pub width: f64,
}

impl Default for Gaussian {
    fn default() -> Self {
        Self { width: 1.0 }
    }
}

impl RadialFunction for Gaussian {
    fn value(&self, rho: f64) -> f64 {
        let u = rho / self.width;
        (-u * u).exp()
    }

    fn d1(&self, rho: f64) -> f64 {
        let w2 = self.width * self.width;
        -2.0 * rho / w2 * self.value(rho)
    }

    fn d2(&self, rho: f64) -> f64 {
        let w2 = self.width * self.width;
        (4.0 * rho * rho / (w2 * w2) - 2.0 / w2) * self.value(rho)
    }
}

impl Space {
    /// `Δf = -(1/√det g) ∂_i(√det g · g^{ij} ∂_j f)` at `b` by nested central
    /// differences of step [`LAPLACE_BELTRAMI_STEP`] over the ball metric.
    pub fn laplace_beltrami_at(&self, b: &BallPoint, f: &dyn Fn(&BallPoint) -> f64) -> Result<f64> {
        let n = self.dim();
        let (m, k) = (self.m(), self.k());
        let h = LAPLACE_BELTRAMI_STEP;
        let x = b.to_coordinates();
        let eval = |c: &DVector<f64>| -> Result<f64> {
            Ok(f(&BallPoint::from_coordinates(c, m, k).map_err(|_| {
                Error::NearBoundary {
                    margin: 1.0 - c.norm_squared(),
                }
            })?))
        };
        let gradient = |c: &DVector<f64>| -> Result<DVector<f64>> {
            let mut grad = DVector::zeros(n);
            for j in 0..n {
                let mut fwd = c.clone();
                let mut bwd = c.clone();
                fwd[j] += h;
                bwd[j] -= h;
                grad[j] = (eval(&fwd)? - eval(&bwd)?) / (2.0 * h);
            }
            Ok(grad)
        };
        // √det g · g^{-1} ∇f at a point
        let flux = |c: &DVector<f64>| -> Result<DVector<f64>> {
            let g = self.metric_at_coordinates(c)?;
            let chol = g.cholesky().ok_or(Error::NearBoundary {
                margin: 1.0 - c.norm_squared(),
            })?;
            let sqrt_det = chol.l_dirty().diagonal().iter().product::<f64>();
            Ok(chol.solve(&gradient(c)?) * sqrt_det)
        };
        let mut divergence = 0.0;
        for i in 0..n {
            let mut fwd = x.clone();
            let mut bwd = x.clone();
            fwd[i] += h;
            bwd[i] -= h;
            divergence += (flux(&fwd)?[i] - flux(&bwd)?[i]) / (2.0 * h);
        }
        let g = self.metric_at_ball(b)?;
        let sqrt_det = g.determinant().sqrt();
        Ok(-divergence / sqrt_det)
    }

    /// Evaluates the Laplace–Beltrami operator of `f` at `n_directions`
    /// random points at distance `rho` from the origin and compares the spread
    /// and the radial operator `-(f'' + b f')` against `tol · (1 + |value|)`.
    pub fn harmonicity_check<R: Rng + ?Sized>(
        &self,
        f: &dyn RadialFunction,
        rho: f64,
        n_directions: usize,
        tol: f64,
        rng: &mut R,
    ) -> Result<HarmonicityReport> {
        if !(rho > 0.1 && rho < 3.0) {
            return Err(Error::Domain(format!(
                "rho must lie in (0.1, 3), got {rho}"
            )));
        }
        if n_directions < 8 {
            return Err(Error::Domain("need at least 8 directions".into()));
        }
        let r = r_from_rho(rho)?;
        let on_ball = |b: &BallPoint| f.on_ball(b);
        let mut values = Vec::with_capacity(n_directions);
        for _ in 0..n_directions {
            let dir = unit_vector(rng, self.dim());
            let b = BallPoint::from_coordinates(&(dir * r), self.m(), self.k())?;
            values.push(self.laplace_beltrami_at(&b, &on_ball)?);
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let radial_value = self.radial_generator(rho, f.d1(rho), f.d2(rho))?;
        let max_deviation = values
            .iter()
            .map(|v| (v - radial_value).abs())
            .fold(0.0, f64::max);
        let spread = max - min;
        let threshold = tol * (1.0 + radial_value.abs());
        Ok(HarmonicityReport {
            rho,
            values,
            spread,
            radial_value,
            max_deviation,
            threshold,
            passed: spread <= threshold,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarmonicityReport {
    pub rho: f64,
    /// Laplace–Beltrami values, one per sampled direction.
    pub values: Vec<f64>,
    /// `max - min` of `values`.
    pub spread: f64,
    /// `-(f'' + b f')` at `rho`.
    pub radial_value: f64,
    /// `max |value - radial_value|`.
    pub max_deviation: f64,
    /// `tol · (1 + |radial_value|)`.
    pub threshold: f64,
    /// `spread ≤ threshold`.
    pub passed: bool,
}

impl HarmonicityReport {
    /// Both the spread and the deviation from the radial operator are within the threshold.
    pub fn matches_radial(&self) -> bool {
        self.passed && self.max_deviation <= self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;
    use crate::sampling::seeded_rng;

    fn dim7() -> Space {
        Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap()
    }

    #[test]
    fn constant_has_zero_laplacian() {
        let sp = dim7();
        let b = BallPoint::from_coordinates(&DVector::from_element(7, 0.2), 4, 2).unwrap();
        let v = sp.laplace_beltrami_at(&b, &|_| 2.5).unwrap();
        assert!(v.abs() <= 1e-8, "{v}");
    }

    #[test]
    fn gaussian_derivatives() {
        let g = Gaussian { width: 1.3 };
        let h = 1e-5;
        for rho in [0.2, 1.0, 2.5] {
            let d1 = (g.value(rho + h) - g.value(rho - h)) / (2.0 * h);
            let d2 = (g.d1(rho + h) - g.d1(rho - h)) / (2.0 * h);
            assert!((d1 - g.d1(rho)).abs() <= 1e-9);
            assert!((d2 - g.d2(rho)).abs() <= 1e-9);
        }
    }

    #[test]
    fn dim7_is_harmonic_at_unit_distance() {
        let sp = dim7();
        let mut rng = seeded_rng(71);
        let rep = sp
            .harmonicity_check(&Gaussian::default(), 1.0, 8, HARMONIC_TOL, &mut rng)
            .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.matches_radial(), "{rep:?}");
    }

    #[test]
    fn scaled_center_breaks_harmonicity() {
        let sp = dim7().with_center_scale(2.0).unwrap();
        let mut rng = seeded_rng(72);
        let rep = sp
            .harmonicity_check(&Gaussian::default(), 1.0, 8, HARMONIC_TOL, &mut rng)
            .unwrap();
        assert!(!rep.passed, "{rep:?}");
    }

    #[test]
    fn argument_validation() {
        let sp = dim7();
        let mut rng = seeded_rng(73);
        assert!(sp
            .harmonicity_check(&Gaussian::default(), 0.05, 8, 1e-4, &mut rng)
            .is_err());
        assert!(sp
            .harmonicity_check(&Gaussian::default(), 1.0, 4, 1e-4, &mut rng)
            .is_err());
    }
}
