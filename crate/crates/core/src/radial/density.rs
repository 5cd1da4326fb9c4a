use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::group::{BallPoint, Space};

/// `r = tanh(ρ/2)`.
pub fn r_from_rho(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must be nonnegative, got {rho}"
        )));
    }
    Ok((0.5 * rho).tanh())
}

/// `ρ = log((1 + r)/(1 - r))`.
pub fn rho_from_r(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "ball radius must lie in [0, 1), got {r}"
        )));
    }
    Ok(2.0 * r.atanh())
}

impl Space {
    /// `ω(ρ) = 2^{m+k} cosh(ρ/2)^k sinh(ρ/2)^{m+k}`, the volume density in
    /// geodesic polar coordinates around the origin.
    pub fn density_omega(&self, rho: f64) -> f64 {
        let (m, k) = (self.m() as i32, self.k() as i32);
        let half = 0.5 * rho;
        2f64.powi(m + k) * half.cosh().powi(k) * half.sinh().powi(m + k)
    }

    /// `ln ω(ρ)`, usable far past the point where `ω` overflows.
    pub fn log_density_omega(&self, rho: f64) -> f64 {
        let (m, k) = (self.m() as f64, self.k() as f64);
        let half = 0.5 * rho;
        (m + k) * std::f64::consts::LN_2 + k * half.cosh().ln() + (m + k) * half.sinh().ln()
    }

    /// The same density written in the ball radius:
    /// `2^{m+k+1} (1 - r²)^{-Q-1} r^{m+k} · dr/dρ` with `r = tanh(ρ/2)`.
    pub fn density_omega_r_form(&self, rho: f64) -> f64 {
        let (m, k) = (self.m() as i32, self.k() as i32);
        let q = self.homogeneous_dimension() as i32;
        let r = (0.5 * rho).tanh();
        let one_minus = 1.0 - r * r;
        let dr_drho = 0.5 * one_minus;
        2f64.powi(m + k + 1) * one_minus.powi(-q - 1) * r.powi(m + k) * dr_drho
    }

    /// `b(ρ) = d/dρ ln ω = (k/2) tanh(ρ/2) + ((m+k)/2) coth(ρ/2)`.
    pub fn radial_drift(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "radial drift is singular at rho = {rho}"
            )));
        }
        Ok(self.radial_drift_unchecked(rho))
    }

    pub(crate) fn radial_drift_unchecked(&self, rho: f64) -> f64 {
        let (m, k) = (self.m() as f64, self.k() as f64);
        let half = 0.5 * rho;
        0.5 * k * half.tanh() + 0.5 * (m + k) / half.tanh()
    }

    /// Positive Laplacian of a radial function from its exact derivatives:
    /// `-(f'' + b(ρ) f')`.
    pub fn radial_generator(&self, rho: f64, d1: f64, d2: f64) -> Result<f64> {
        Ok(-(d2 + self.radial_drift(rho)? * d1))
    }

    /// `√det g_B` at `r(ρ)·direction` times the polar Jacobian `r^{m+k} dr/dρ`.
    pub fn volume_density_numeric(&self, rho: f64, direction: &DVector<f64>) -> Result<f64> {
        check_dim(self.dim(), direction.len())?;
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("direction must be a unit vector".into()));
        }
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        let r = r_from_rho(rho)?;
        let b = BallPoint::from_coordinates(&(direction * r), self.m(), self.k())?;
        let g = self.metric_at_ball(&b)?;
        let det = g.determinant();
        if !(det > 0.0) {
            return Err(Error::NearBoundary {
                margin: 1.0 - r * r,
            });
        }
        let polar = r.powi((self.m() + self.k()) as i32) * 0.5 * (1.0 - r * r);
        Ok(det.sqrt() * polar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;

    fn dim7() -> Space {
        Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap()
    }

    #[test]
    fn rho_r_conversions() {
        assert_eq!(r_from_rho(0.0).unwrap(), 0.0);
        assert_eq!(rho_from_r(0.0).unwrap(), 0.0);
        assert!((rho_from_r(0.5).unwrap() - 3f64.ln()).abs() <= 1e-15);
        assert!(rho_from_r(1.0).is_err());
        assert!(rho_from_r(-0.1).is_err());
        assert!(r_from_rho(-1.0).is_err());
        for i in 0..1000 {
            let rho = i as f64 * 0.004;
            let back = rho_from_r(r_from_rho(rho).unwrap()).unwrap();
            assert!((back - rho).abs() <= 1e-14, "{rho}");
            let r = i as f64 * 0.000999;
            let back = r_from_rho(rho_from_r(r).unwrap()).unwrap();
            assert!((back - r).abs() <= 1e-14, "{r}");
        }
    }

    #[test]
    fn density_value_at_one() {
        // 2^6 cosh(1/2)^2 sinh(1/2)^6
        let expected = 64.0 * 0.5f64.cosh().powi(2) * 0.5f64.sinh().powi(6);
        assert!((dim7().density_omega(1.0) - expected).abs() <= 1e-15 * expected);
        assert!((expected - 1.63).abs() < 0.01);
    }

    #[test]
    fn r_form_matches_rho_form() {
        let sp = dim7();
        for i in 0..800 {
            let rho = 0.01 + i as f64 * 0.01;
            let a = sp.density_omega(rho);
            let b = sp.density_omega_r_form(rho);
            assert!((a - b).abs() <= 1e-10 * a, "rho = {rho}");
            assert!((a.ln() - sp.log_density_omega(rho)).abs() <= 1e-12 * a.ln().abs().max(1.0));
        }
    }

    #[test]
    fn small_rho_is_euclidean() {
        let sp = dim7();
        let rho: f64 = 1e-4;
        let ratio = sp.density_omega(rho) / rho.powi(6);
        assert!((ratio - 1.0).abs() <= 1e-6, "{ratio}");
    }

    #[test]
    fn drift_limits_and_derivative() {
        let sp = dim7();
        assert!(sp.radial_drift(0.0).is_err());
        let tiny = 1e-6;
        assert!((sp.radial_drift(tiny).unwrap() * tiny - 6.0).abs() <= 1e-6);
        assert!((sp.radial_drift(60.0).unwrap() - 4.0).abs() <= 1e-12);
        // five-point central difference
        let h = 1e-4;
        let lw = |r: f64| sp.log_density_omega(r);
        for i in 0..50 {
            let rho = 0.1 + i as f64 * 0.1;
            let fd = (lw(rho - 2.0 * h) - 8.0 * lw(rho - h) + 8.0 * lw(rho + h)
                - lw(rho + 2.0 * h))
                / (12.0 * h);
            assert!(
                (fd - sp.radial_drift(rho).unwrap()).abs() <= 1e-8,
                "rho = {rho}"
            );
        }
    }

    #[test]
    fn radial_generator_of_square_at_center() {
        let sp = dim7();
        let rho = 1e-4;
        let value = sp.radial_generator(rho, 2.0 * rho, 2.0).unwrap();
        assert!((value + 14.0).abs() <= 1e-6);
    }
}
