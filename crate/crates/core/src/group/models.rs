//! The Siegel-domain and ball models of `S` and the Cayley transform between them.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::space::{stack, GroupElement, Space};
use crate::error::{check_dim, Error, Result};

/// Round-trip tolerance used to accept the closed-form inverse Cayley transform.
pub const CAYLEY_ROUND_TRIP_TOL: f64 = 1e-10;

/// `(X, Z, t)` with `t > |X|²/4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiegelPoint {
    x: DVector<f64>,
    z: DVector<f64>,
    t: f64,
}

impl SiegelPoint {
    pub fn new(x: DVector<f64>, z: DVector<f64>, t: f64) -> Result<Self> {
        let margin = t - 0.25 * x.norm_squared();
        if !(margin > 0.0) {
            return Err(Error::Domain(format!(
                "Siegel point needs t > |X|^2/4 (margin {margin:e})"
            )));
        }
        Ok(Self { x, z, t })
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `t - |X|²/4`, the group coordinate `a`.
    pub fn margin(&self) -> f64 {
        self.t - 0.25 * self.x.norm_squared()
    }

    pub fn to_coordinates(&self) -> DVector<f64> {
        stack(&self.x, &self.z, self.t)
    }
}

/// `(X, Z, t)` in the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallPoint {
    x: DVector<f64>,
    z: DVector<f64>,
    t: f64,
}

impl BallPoint {
    pub fn new(x: DVector<f64>, z: DVector<f64>, t: f64) -> Result<Self> {
        let r2 = x.norm_squared() + z.norm_squared() + t * t;
        if !(r2 < 1.0) {
            return Err(Error::Domain(format!(
                "ball point needs r < 1 (r^2 = {r2})"
            )));
        }
        Ok(Self { x, z, t })
    }

    pub fn origin(m: usize, k: usize) -> Self {
        Self {
            x: DVector::zeros(m),
            z: DVector::zeros(k),
            t: 0.0,
        }
    }

    /// Splits a vector of length `m + k + 1` into `(X, Z, t)`.
    pub fn from_coordinates(c: &DVector<f64>, m: usize, k: usize) -> Result<Self> {
        check_dim(m + k + 1, c.len())?;
        Self::new(
            c.rows(0, m).into_owned(),
            c.rows(m, k).into_owned(),
            c[m + k],
        )
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn radius(&self) -> f64 {
        self.radius_squared().sqrt()
    }

    pub fn radius_squared(&self) -> f64 {
        self.x.norm_squared() + self.z.norm_squared() + self.t * self.t
    }

    pub fn to_coordinates(&self) -> DVector<f64> {
        stack(&self.x, &self.z, self.t)
    }
}

impl Space {
    fn check_triple(&self, x: &DVector<f64>, z: &DVector<f64>) -> Result<()> {
        check_dim(self.m(), x.len())?;
        check_dim(self.k(), z.len())
    }

    /// `h(X, Z, a) = (X, Z, a + |X|²/4)`.
    pub fn to_siegel(&self, s: &GroupElement) -> SiegelPoint {
        SiegelPoint {
            x: s.x().clone(),
            z: s.z().clone(),
            t: s.a() + 0.25 * s.x().norm_squared(),
        }
    }

    pub fn from_siegel(&self, d: &SiegelPoint) -> Result<GroupElement> {
        self.check_triple(&d.x, &d.z)?;
        let a = d.margin();
        if !(a > 0.0) {
            return Err(Error::Domain(format!(
                "point on or outside the Siegel boundary (a = {a:e})"
            )));
        }
        Ok(GroupElement::new_unchecked(d.x.clone(), d.z.clone(), a))
    }

    /// `C(X, Z, t) = ((1-t)² + |Z|²)⁻¹ (2(1 - t + J_Z)X, 2Z, 1 - t² - |Z|²)`.
    pub fn cayley(&self, b: &BallPoint) -> Result<SiegelPoint> {
        self.check_triple(&b.x, &b.z)?;
        Ok(self.cayley_unchecked(b))
    }

    fn cayley_unchecked(&self, b: &BallPoint) -> SiegelPoint {
        let s = 1.0 - b.t;
        let z2 = b.z.norm_squared();
        let den = s * s + z2;
        let jx = self.algebra().j_map_unchecked(&b.z, &b.x);
        SiegelPoint {
            x: (&b.x * s + jx) * (2.0 / den),
            z: &b.z * (2.0 / den),
            t: (1.0 - b.t * b.t - z2) / den,
        }
    }

    /// Jacobian of the Cayley transform at `b` in `(X, Z, t)` coordinates.
    pub fn cayley_jacobian(&self, b: &BallPoint) -> DMatrix<f64> {
        let (m, k, n) = (self.m(), self.k(), self.dim());
        let alg = self.algebra();
        let s = 1.0 - b.t;
        let z2 = b.z.norm_squared();
        let den = s * s + z2;
        let inv = 1.0 / den;
        let inv2 = inv * inv;
        let jx = alg.j_map_unchecked(&b.z, &b.x);
        let p = (&b.x * s + &jx) * 2.0;
        let num_t = 1.0 - b.t * b.t - z2;
        // d(den)/dZ_i = 2 Z_i, d(den)/dt = -2s
        let mut jac = DMatrix::zeros(n, n);

        // X_D = P / den
        let jz = alg.j_matrix(&b.z).expect("dimension checked");
        let mut dxdx = jz * (2.0 * inv);
        for i in 0..m {
            dxdx[(i, i)] += 2.0 * s * inv;
        }
        jac.view_mut((0, 0), (m, m)).copy_from(&dxdx);
        for (i, e) in alg.module().generators().iter().enumerate() {
            let col = (e * &b.x) * (2.0 * inv) - &p * (2.0 * b.z[i] * inv2);
            jac.view_mut((0, m + i), (m, 1)).copy_from(&col);
        }
        let col_t = &b.x * (-2.0 * inv) + &p * (2.0 * s * inv2);
        jac.view_mut((0, n - 1), (m, 1)).copy_from(&col_t);

        // Z_D = 2Z / den
        for r in 0..k {
            for c in 0..k {
                let delta = if r == c { 2.0 * inv } else { 0.0 };
                jac[(m + r, m + c)] = delta - 4.0 * b.z[r] * b.z[c] * inv2;
            }
            jac[(m + r, n - 1)] = 4.0 * b.z[r] * s * inv2;
        }

        // t_D = (1 - t² - |Z|²) / den
        for c in 0..k {
            jac[(n - 1, m + c)] = -2.0 * b.z[c] * inv - num_t * 2.0 * b.z[c] * inv2;
        }
        jac[(n - 1, n - 1)] = -2.0 * b.t * inv + num_t * 2.0 * s * inv2;
        jac
    }

    /// Inverse Cayley transform. Uses the closed form
    /// `C⁻¹(X, Z, t) = Δ⁻¹ ((1 + t - J_Z)X, 2Z, t² + |Z|² - 1)`,
    /// `Δ = (1 + t)² + |Z|²`, accepted only if the forward map reproduces
    /// the input; otherwise falls back to damped Newton on `C`.
    pub fn cayley_inv(&self, d: &SiegelPoint) -> Result<BallPoint> {
        self.check_triple(&d.x, &d.z)?;
        if let Some(b) = self.cayley_inv_closed_form(d) {
            if self.cayley_residual(&b, d) <= CAYLEY_ROUND_TRIP_TOL {
                return Ok(b);
            }
        }
        self.cayley_inv_newton(d)
    }

    fn cayley_inv_closed_form(&self, d: &SiegelPoint) -> Option<BallPoint> {
        let u = 1.0 + d.t;
        let z2 = d.z.norm_squared();
        let delta = u * u + z2;
        let jx = self.algebra().j_map_unchecked(&d.z, &d.x);
        let x = (&d.x * u - jx) / delta;
        let z = &d.z * (2.0 / delta);
        let t = (d.t * d.t + z2 - 1.0) / delta;
        BallPoint::new(x, z, t).ok()
    }

    /// Relative residual `‖C(b) - d‖_∞ / max(1, ‖d‖_∞)`.
    fn cayley_residual(&self, b: &BallPoint, d: &SiegelPoint) -> f64 {
        let target = d.to_coordinates();
        let image = self.cayley_unchecked(b).to_coordinates();
        (image - &target).amax() / target.amax().max(1.0)
    }

    /// Damped Newton iteration on `C(b) = d`, seeded on the `t` axis with the
    /// inverse of `t ↦ (1 + t)/(1 - t)`.
    pub(crate) fn cayley_inv_newton(&self, d: &SiegelPoint) -> Result<BallPoint> {
        const MAX_ITER: usize = 200;
        let (m, k) = (self.m(), self.k());
        let target = d.to_coordinates();
        let scale = target.amax().max(1.0);
        let seed_t = ((d.t - 1.0) / (d.t + 1.0)).clamp(-0.999, 0.999);
        let mut b = BallPoint {
            x: DVector::zeros(m),
            z: DVector::zeros(k),
            t: seed_t,
        };
        let mut residual = self.cayley_residual(&b, d);
        for _ in 0..MAX_ITER {
            if residual <= CAYLEY_ROUND_TRIP_TOL * 1e-2 {
                return Ok(b);
            }
            let f = self.cayley_unchecked(&b).to_coordinates() - &target;
            let jac = self.cayley_jacobian(&b);
            let Some(step) = jac.lu().solve(&f) else {
                break;
            };
            let current = b.to_coordinates();
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-8 {
                let trial = &current - &step * lambda;
                if let Ok(cand) = BallPoint::from_coordinates(&trial, m, k) {
                    let r = self.cayley_residual(&cand, d);
                    if r < residual {
                        b = cand;
                        residual = r;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if residual <= CAYLEY_ROUND_TRIP_TOL {
            Ok(b)
        } else {
            Err(Error::NonConvergence {
                residual: residual * scale,
                iterations: MAX_ITER,
            })
        }
    }

    /// `C⁻¹ ∘ h : S → B`.
    pub fn group_to_ball(&self, s: &GroupElement) -> Result<BallPoint> {
        self.cayley_inv(&self.to_siegel(s))
    }

    /// `h⁻¹ ∘ C : B → S`, the chart through which the metric is pulled back to the ball.
    pub fn ball_to_group(&self, b: &BallPoint) -> Result<GroupElement> {
        let d = self.cayley(b)?;
        // C maps B into D, so the margin is (1 - r²)/den > 0 up to rounding.
        let a = d.margin();
        if !(a > 0.0) {
            return Err(Error::NearBoundary {
                margin: 1.0 - b.radius_squared(),
            });
        }
        Ok(GroupElement::new_unchecked(d.x, d.z, a))
    }

    /// Jacobian of [`Space::ball_to_group`] at `b`.
    pub fn ball_chart_jacobian(&self, b: &BallPoint) -> DMatrix<f64> {
        let m = self.m();
        let n = self.dim();
        let jc = self.cayley_jacobian(b);
        let xd = self.cayley_unchecked(b).x;
        // a = t_D - |X_D|²/4
        let mut out = jc.clone();
        let correction = xd.transpose() * jc.rows(0, m) * 0.5;
        let mut last = out.row_mut(n - 1);
        last -= correction;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;
    use crate::sampling::{ball_vector, seeded_rng, standard_normal_vector};
    use rand::Rng;

    fn dim7() -> Space {
        Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap()
    }

    fn random_ball_point(sp: &Space, rng: &mut crate::sampling::SweepRng, max_r: f64) -> BallPoint {
        BallPoint::from_coordinates(&ball_vector(rng, sp.dim(), max_r), sp.m(), sp.k()).unwrap()
    }

    #[test]
    fn siegel_examples() {
        let sp = dim7();
        let e = sp.identity();
        let d = sp.to_siegel(&e);
        assert_eq!(d.to_coordinates(), sp.identity().to_coordinates());
        let s = sp
            .element(
                DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0]),
                DVector::zeros(2),
                1.0,
            )
            .unwrap();
        assert_eq!(sp.to_siegel(&s).t(), 2.0);
        assert_eq!(sp.from_siegel(&sp.to_siegel(&s)).unwrap(), s);
    }

    #[test]
    fn siegel_boundary_is_rejected() {
        assert!(
            SiegelPoint::new(DVector::from_vec(vec![2.0, 0.0]), DVector::zeros(1), 1.0).is_err()
        );
        assert!(SiegelPoint::new(
            DVector::from_vec(vec![2.0, 0.0]),
            DVector::zeros(1),
            1.0 + 1e-9
        )
        .is_ok());
    }

    #[test]
    fn siegel_round_trip_sweep() {
        let sp = dim7();
        let mut rng = seeded_rng(21);
        for _ in 0..1000 {
            let s = sp
                .element(
                    standard_normal_vector(&mut rng, 4) * 3.0,
                    standard_normal_vector(&mut rng, 2),
                    rng.random_range(0.05..20.0),
                )
                .unwrap();
            let back = sp.from_siegel(&sp.to_siegel(&s)).unwrap();
            assert!(back.max_abs_diff(&s) <= 1e-15 * (1.0 + s.to_coordinates().amax().powi(2)));
        }
    }

    #[test]
    fn cayley_on_t_axis() {
        let sp = dim7();
        let origin = BallPoint::origin(4, 2);
        assert_eq!(
            sp.cayley(&origin).unwrap().to_coordinates(),
            sp.identity().to_coordinates()
        );
        for t in [-0.9, -0.3, 0.0, 0.4, 0.95] {
            let b = BallPoint::new(DVector::zeros(4), DVector::zeros(2), t).unwrap();
            let d = sp.cayley(&b).unwrap();
            assert!((d.t() - (1.0 + t) / (1.0 - t)).abs() <= 1e-14 * d.t().abs());
            let back = sp.cayley_inv(&d).unwrap();
            assert!((back.t() - t).abs() <= 1e-14);
        }
    }

    #[test]
    fn cayley_maps_ball_into_siegel_domain() {
        let sp = dim7();
        let mut rng = seeded_rng(22);
        for _ in 0..10_000 {
            let b = random_ball_point(&sp, &mut rng, 0.999);
            let d = sp.cayley(&b).unwrap();
            assert!(d.margin() > 0.0);
        }
    }

    #[test]
    fn cayley_jacobian_matches_finite_differences() {
        let sp = Space::from_spec(&CliffordSpec::chiral(3, 1, 1).unwrap()).unwrap();
        let mut rng = seeded_rng(23);
        let n = sp.dim();
        for _ in 0..20 {
            let b = random_ball_point(&sp, &mut rng, 0.8);
            let jac = sp.cayley_jacobian(&b);
            let chart = sp.ball_chart_jacobian(&b);
            let c0 = b.to_coordinates();
            let h = 1e-6;
            for j in 0..n {
                let mut p = c0.clone();
                let mut q = c0.clone();
                p[j] += h;
                q[j] -= h;
                let bp = BallPoint::from_coordinates(&p, sp.m(), sp.k()).unwrap();
                let bq = BallPoint::from_coordinates(&q, sp.m(), sp.k()).unwrap();
                let fd = (sp.cayley(&bp).unwrap().to_coordinates()
                    - sp.cayley(&bq).unwrap().to_coordinates())
                    / (2.0 * h);
                let fd_chart = (sp.ball_to_group(&bp).unwrap().to_coordinates()
                    - sp.ball_to_group(&bq).unwrap().to_coordinates())
                    / (2.0 * h);
                let scale = jac.amax().max(1.0);
                assert!((fd - jac.column(j)).amax() <= 1e-6 * scale);
                assert!((fd_chart - chart.column(j)).amax() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn newton_fallback_inverts_cayley() {
        let sp = dim7();
        let mut rng = seeded_rng(24);
        for _ in 0..50 {
            let b = random_ball_point(&sp, &mut rng, 0.9);
            let d = sp.cayley(&b).unwrap();
            let back = sp.cayley_inv_newton(&d).unwrap();
            assert!((back.to_coordinates() - b.to_coordinates()).amax() <= 1e-9);
        }
    }

    #[test]
    fn ball_to_group_of_origin_is_identity() {
        let sp = dim7();
        let e = sp.ball_to_group(&BallPoint::origin(4, 2)).unwrap();
        assert_eq!(e, sp.identity());
        let b = sp.group_to_ball(&sp.identity()).unwrap();
        assert_eq!(b.to_coordinates(), DVector::zeros(7));
    }
}
