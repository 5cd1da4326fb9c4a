//! Radial profiles and the finite-volume discretization of the radial Laplacian.
//!
//! Nodes `ρ_0 < ρ_1 < …` carry values; node `i` owns the cell between the
//! midpoints to its neighbours, with volume `V_i = ∫ ω dρ` over the cell. The
//! flux through the face between nodes `i` and `i+1` is
//! `ω(ρ_{i+½}) (f_{i+1} - f_i)/(ρ_{i+1} - ρ_i)`, and
//! `(Δf)_i = -(flux_{i+½} - flux_{i-½}) / V_i`.
//! The stencil is three-point and second-order accurate away from `ρ = 0`;
//! at a node placed at `ρ = 0` the face flux vanishes with `ω`, which encodes
//! the even symmetry of radial functions. The resulting operator is exactly
//! symmetric and nonnegative for the weights `V_i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Space;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if grid.first().is_some_and(|&r| !(r >= 0.0)) {
            return Err(Error::Domain("radial grid must be nonnegative".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "radial grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on `grid`.
    pub fn sample(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, rho: f64) -> Option<f64> {
        let idx = self.grid.partition_point(|&r| r <= rho);
        if idx == 0 {
            return (rho == self.grid[0]).then_some(self.values[0]);
        }
        if idx == self.grid.len() {
            return (rho == self.grid[idx - 1]).then_some(self.values[idx - 1]);
        }
        let (r0, r1) = (self.grid[idx - 1], self.grid[idx]);
        let w = (rho - r0) / (r1 - r0);
        Some(self.values[idx - 1] * (1.0 - w) + self.values[idx] * w)
    }
}

/// `n` uniformly spaced nodes on `[0, rho_max]`.
pub fn uniform_grid(rho_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(rho_max > 0.0) || n < 3 {
        return Err(Error::Domain(
            "grid needs rho_max > 0 and at least 3 nodes".into(),
        ));
    }
    let h = rho_max / (n - 1) as f64;
    Ok((0..n).map(|i| i as f64 * h).collect())
}

/// Cell volumes and face conductances of the finite-volume operator.
#[derive(Debug, Clone)]
pub(crate) struct RadialStencil {
    /// `V_i`, relative to `scale`.
    pub volumes: Vec<f64>,
    /// `w_{i+½} = ω(ρ_{i+½}) / (ρ_{i+1} - ρ_i)`, relative to `scale`; one fewer than nodes.
    pub conductances: Vec<f64>,
}

impl RadialStencil {
    /// All weights are divided by a common factor `exp(scale)` to keep them
    /// finite on long grids; the operator `V⁻¹K` is unaffected.
    pub fn new(space: &Space, grid: &[f64], log_scale: f64) -> Self {
        let n = grid.len();
        let omega = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (space.log_density_omega(r) - log_scale).exp()
            }
        };
        let mut faces = Vec::with_capacity(n + 1);
        faces.push(grid[0]);
        faces.extend(grid.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        faces.push(grid[n - 1]);
        let volumes = (0..n)
            .map(|i| gauss_legendre(&omega, faces[i], faces[i + 1]))
            .collect();
        let conductances = grid
            .windows(2)
            .map(|w| omega(0.5 * (w[0] + w[1])) / (w[1] - w[0]))
            .collect();
        Self {
            volumes,
            conductances,
        }
    }

    /// `(K f)_i = -(flux_{i+½} - flux_{i-½})` with zero flux past both ends.
    pub fn apply_stiffness(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let mut out = vec![0.0; n];
        for i in 0..n - 1 {
            let flux = self.conductances[i] * (f[i + 1] - f[i]);
            out[i] -= flux;
            out[i + 1] += flux;
        }
        out
    }
}

/// Five-point Gauss–Legendre rule on `[a, b]`.
fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    if b <= a {
        return 0.0;
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * NODES
        .iter()
        .zip(WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// Output of [`Space::radial_laplacian`].
#[derive(Debug, Clone, Serialize)]
pub struct RadialLaplacian {
    /// `-(f'' + b f')` on the nodes that have both faces (plus `ρ = 0` when present).
    pub profile: RadialProfile,
    /// Set when the grid looks too coarse for second-order accuracy.
    pub accuracy_warning: Option<String>,
}

impl Space {
    /// Finite-volume approximation of the positive radial Laplacian
    /// `-(f'' + b(ρ) f')`. The last node is dropped (it has no outer face), as
    /// is the first unless it sits at `ρ = 0`.
    pub fn radial_laplacian(&self, f: &RadialProfile) -> Result<RadialLaplacian> {
        if f.len() < 3 {
            return Err(Error::Domain(
                "radial Laplacian needs at least 3 nodes".into(),
            ));
        }
        let grid = f.grid();
        let stencil = RadialStencil::new(self, grid, self.log_density_omega(grid[grid.len() - 1]));
        let kf = stencil.apply_stiffness(f.values());
        let first = if grid[0] == 0.0 { 0 } else { 1 };
        let nodes = first..grid.len() - 1;
        let profile = RadialProfile::new(
            grid[nodes.clone()].to_vec(),
            nodes.map(|i| kf[i] / stencil.volumes[i]).collect(),
        )?;
        Ok(RadialLaplacian {
            profile,
            accuracy_warning: self.coarseness_warning(f),
        })
    }

    /// The grid is flagged when a step exceeds `0.2 / (Q + 1)` (the drift
    /// approaches `Q`) or when `f` changes by more than 10% of its range
    /// between neighbouring nodes.
    fn coarseness_warning(&self, f: &RadialProfile) -> Option<String> {
        let max_step = f.grid().windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let limit = 0.2 / (self.homogeneous_dimension() as f64 + 1.0);
        if max_step > limit {
            return Some(format!("grid step {max_step:.3e} exceeds {limit:.3e}"));
        }
        let values = f.values();
        let range = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
            - values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let jump = values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        if range > 0.0 && jump > 0.1 * range {
            return Some(format!(
                "profile changes by {:.1}% of its range between neighbouring nodes",
                100.0 * jump / range
            ));
        }
        None
    }

    /// `Σ V_i u_i v_i`, the discrete counterpart of `∫ u v ω dρ`.
    pub fn radial_inner(&self, grid: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != grid.len() || v.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: u.len().min(v.len()),
            });
        }
        let stencil = RadialStencil::new(self, grid, 0.0);
        Ok(stencil
            .volumes
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| w * a * b)
            .sum())
    }

    /// `Δf` on every node with zero flux past both ends, for use with
    /// [`Space::radial_inner`] on compactly supported profiles.
    pub fn radial_laplacian_full(&self, f: &RadialProfile) -> Vec<f64> {
        let stencil = RadialStencil::new(self, f.grid(), 0.0);
        stencil
            .apply_stiffness(f.values())
            .iter()
            .zip(&stencil.volumes)
            .map(|(k, v)| k / v)
            .collect()
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
    fn profile_validation() {
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(RadialProfile::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(RadialProfile::new(vec![-1.0, 0.0], vec![1.0, 1.0]).is_err());
        let p = RadialProfile::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 6.0]).unwrap();
        assert_eq!(p.interpolate(1.5), Some(4.0));
        assert_eq!(p.interpolate(2.0), Some(6.0));
        assert_eq!(p.interpolate(2.5), None);
    }

    #[test]
    fn constant_profile_has_zero_laplacian() {
        let sp = dim7();
        let grid = uniform_grid(4.0, 401).unwrap();
        let f = RadialProfile::sample(grid, |_| 3.0).unwrap();
        let lap = sp.radial_laplacian(&f).unwrap();
        assert!(lap.profile.values().iter().all(|v| v.abs() <= 1e-12));
        assert_eq!(lap.profile.grid()[0], 0.0);
        assert!(lap.accuracy_warning.is_none());
    }

    #[test]
    fn square_at_origin_matches_center_limit() {
        let sp = dim7();
        let grid = uniform_grid(1.0, 1001).unwrap();
        let f = RadialProfile::sample(grid, |r| r * r).unwrap();
        let lap = sp.radial_laplacian(&f).unwrap();
        // -2(m + k + 1) at the center
        assert!(
            (lap.profile.values()[0] + 14.0).abs() <= 1e-3,
            "{}",
            lap.profile.values()[0]
        );
    }

    #[test]
    fn second_order_convergence_for_gaussian() {
        let sp = dim7();
        let exact = |r: f64| {
            let f1 = -2.0 * r * (-r * r).exp();
            let f2 = (4.0 * r * r - 2.0) * (-r * r).exp();
            sp.radial_generator(r, f1, f2).unwrap()
        };
        let err = |n: usize| {
            let grid = uniform_grid(3.0, n).unwrap();
            let f = RadialProfile::sample(grid, |r| (-r * r).exp()).unwrap();
            let lap = sp.radial_laplacian(&f).unwrap();
            let v = lap.profile.interpolate(1.0).unwrap();
            (v - exact(1.0)).abs()
        };
        let coarse = err(601);
        let fine = err(1201);
        assert!(fine < 1e-4, "{fine}");
        let order = (coarse / fine).log2();
        assert!((order - 2.0).abs() < 0.3, "order {order}");
    }

    #[test]
    fn coarse_grid_warns() {
        let sp = dim7();
        let grid = uniform_grid(3.0, 6).unwrap();
        let f = RadialProfile::sample(grid, |r| (-r * r).exp()).unwrap();
        assert!(sp.radial_laplacian(&f).unwrap().accuracy_warning.is_some());
    }
}
