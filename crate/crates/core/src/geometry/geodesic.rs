use nalgebra::DVector;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::group::{BallPoint, Space};

/// Default arc-length step of the RK4 geodesic integrator.
pub const DEFAULT_GEODESIC_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicSample {
    /// Arc length from the origin.
    pub arc_length: f64,
    pub point: BallPoint,
    /// `g(ẋ, ẋ) - 1`.
    pub speed_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicPath {
    pub direction: DVector<f64>,
    pub samples: Vec<GeodesicSample>,
    /// Set when the integration stopped early because the next step would
    /// leave the region where the ball metric is usable.
    pub truncated: bool,
}

impl GeodesicPath {
    pub fn end(&self) -> &GeodesicSample {
        self.samples.last().expect("path has at least the origin")
    }

    /// Largest distance of a sample from the line through the origin along `direction`.
    pub fn max_transverse_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| {
                let p = s.point.to_coordinates();
                let along = p.dot(&self.direction);
                (p - &self.direction * along).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_speed_error(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.speed_error.abs())
            .fold(0.0, f64::max)
    }
}

impl Space {
    /// Integrates the geodesic from the origin with unit initial direction
    /// `direction` (speed normalized in the ball metric, `ω/2` for the
    /// standard metric) up to arc length `length`, with classical RK4.
    pub fn geodesic_integrate(
        &self,
        direction: &DVector<f64>,
        length: f64,
        step: f64,
    ) -> Result<GeodesicPath> {
        let n = self.dim();
        check_dim(n, direction.len())?;
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(
                "geodesic direction must be a unit vector".into(),
            ));
        }
        if !(step > 0.0) || !(length >= 0.0) {
            return Err(Error::Domain(
                "geodesic step must be positive and length nonnegative".into(),
            ));
        }
        let origin = DVector::zeros(n);
        let g0 = self.metric_at_coordinates(&origin)?;
        let mut x = origin;
        let mut v = direction / direction.dot(&(g0 * direction)).sqrt();

        let sample = |s: f64, x: &DVector<f64>, v: &DVector<f64>| -> Result<GeodesicSample> {
            let g = self.metric_at_coordinates(x)?;
            Ok(GeodesicSample {
                arc_length: s,
                point: BallPoint::from_coordinates(x, self.m(), self.k())?,
                speed_error: v.dot(&(g * v)) - 1.0,
            })
        };

        let mut samples = vec![sample(0.0, &x, &v)?];
        let mut s = 0.0;
        let mut truncated = false;
        let steps = (length / step).ceil() as usize;
        for i in 0..steps {
            let h = if i + 1 == steps { length - s } else { step };
            match self.rk4_step(&x, &v, h) {
                Ok((nx, nv)) => {
                    match sample(s + h, &nx, &nv) {
                        Ok(smp) => samples.push(smp),
                        Err(_) => {
                            truncated = true;
                            break;
                        }
                    }
                    x = nx;
                    v = nv;
                    s += h;
                }
                Err(Error::NearBoundary { .. }) | Err(Error::Domain(_)) => {
                    truncated = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(GeodesicPath {
            direction: direction.clone(),
            samples,
            truncated,
        })
    }

    fn rk4_step(
        &self,
        x: &DVector<f64>,
        v: &DVector<f64>,
        h: f64,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        let acc = |x: &DVector<f64>, v: &DVector<f64>| self.geodesic_acceleration(x, v);
        let k1x = v.clone();
        let k1v = acc(x, v)?;
        let x2 = x + &k1x * (h / 2.0);
        let v2 = v + &k1v * (h / 2.0);
        let k2v = acc(&x2, &v2)?;
        let x3 = x + &v2 * (h / 2.0);
        let v3 = v + &k2v * (h / 2.0);
        let k3v = acc(&x3, &v3)?;
        let x4 = x + &v3 * h;
        let v4 = v + &k3v * h;
        let k4v = acc(&x4, &v4)?;
        let nx = x + (k1x + &v2 * 2.0 + &v3 * 2.0 + &v4) * (h / 6.0);
        let nv = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        Ok((nx, nv))
    }
}
