use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::{CliffordSpec, HTypeAlgebra};
use crate::error::{check_dim, Error, Result};
use crate::geometry::CurvatureData;

/// The solvable group `S = NA` attached to an H-type algebra, with a
/// left-invariant metric.
///
/// The metric at the identity is diagonal in the basis `(v, z, T)`. It is the
/// standard orthonormal one unless built with [`Space::with_center_scale`],
/// which exists to produce non-harmonic control spaces.
#[derive(Debug)]
pub struct Space {
    algebra: HTypeAlgebra,
    gram: DVector<f64>,
    curvature: OnceLock<CurvatureData>,
}

impl Clone for Space {
    fn clone(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            gram: self.gram.clone(),
            curvature: OnceLock::new(),
        }
    }
}

impl Space {
    pub fn new(algebra: HTypeAlgebra) -> Self {
        assert!(
            algebra.m().is_multiple_of(2),
            "Clifford modules have even dimension"
        );
        let n = algebra.m() + algebra.k() + 1;
        Self {
            algebra,
            gram: DVector::from_element(n, 1.0),
            curvature: OnceLock::new(),
        }
    }

    pub fn from_spec(spec: &CliffordSpec) -> Result<Self> {
        Ok(Self::new(HTypeAlgebra::from_spec(spec)?))
    }

    /// Same group, but the center `z` is scaled by `scale` in the metric
    /// (`⟨Z, Z'⟩ ↦ scale² ⟨Z, Z'⟩`) while the bracket is left unchanged.
    /// For `scale ≠ 1` the result is no longer an H-type extension.
    pub fn with_center_scale(&self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!(
                "center scale must be positive, got {scale}"
            )));
        }
        let mut gram = self.gram.clone();
        let (m, k) = (self.m(), self.k());
        for w in gram.rows_mut(m, k).iter_mut() {
            *w *= scale * scale;
        }
        Ok(Self {
            algebra: self.algebra.clone(),
            gram,
            curvature: OnceLock::new(),
        })
    }

    pub fn algebra(&self) -> &HTypeAlgebra {
        &self.algebra
    }

    pub fn m(&self) -> usize {
        self.algebra.m()
    }

    pub fn k(&self) -> usize {
        self.algebra.k()
    }

    /// `dim S = m + k + 1`.
    pub fn dim(&self) -> usize {
        self.m() + self.k() + 1
    }

    /// Homogeneous dimension `Q = m/2 + k`; an integer since `m` is even.
    pub fn homogeneous_dimension(&self) -> u32 {
        (self.m() / 2 + self.k()) as u32
    }

    /// Diagonal of the metric at the identity in the basis `(v, z, T)`.
    pub fn gram(&self) -> &DVector<f64> {
        &self.gram
    }

    pub fn has_standard_metric(&self) -> bool {
        self.gram.iter().all(|&w| w == 1.0)
    }

    pub(crate) fn curvature_cell(&self) -> &OnceLock<CurvatureData> {
        &self.curvature
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            x: DVector::zeros(self.m()),
            z: DVector::zeros(self.k()),
            a: 1.0,
        }
    }

    pub fn element(&self, x: DVector<f64>, z: DVector<f64>, a: f64) -> Result<GroupElement> {
        check_dim(self.m(), x.len())?;
        check_dim(self.k(), z.len())?;
        GroupElement::new(x, z, a)
    }

    /// `[u, v]` in `s = v ⊕ z ⊕ RT` with `[T, X + Z] = X/2 + Z`.
    pub fn lie_bracket(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_algebra_element(u)?;
        self.check_algebra_element(v)?;
        let x = &v.x * (0.5 * u.t) - &u.x * (0.5 * v.t);
        let z = self.algebra.bracket_unchecked(&u.x, &v.x) + &v.z * u.t - &u.z * v.t;
        Ok(AlgebraElement { x, z, t: 0.0 })
    }

    fn check_algebra_element(&self, u: &AlgebraElement) -> Result<()> {
        check_dim(self.m(), u.x.len())?;
        check_dim(self.k(), u.z.len())
    }

    /// `(X, Z, a)(X', Z', a') = (X + a^{1/2} X', Z + a Z' + ½ a^{1/2} [X, X'], a a')`.
    pub fn multiply(&self, s: &GroupElement, t: &GroupElement) -> GroupElement {
        let sqrt_a = s.a.sqrt();
        let x = &s.x + &t.x * sqrt_a;
        let z = &s.z + &t.z * s.a + self.algebra.bracket_unchecked(&s.x, &t.x) * (0.5 * sqrt_a);
        GroupElement { x, z, a: s.a * t.a }
    }

    /// `(X, Z, a)⁻¹ = (-a^{-1/2} X, -a^{-1} Z, a^{-1})`.
    pub fn inverse(&self, s: &GroupElement) -> GroupElement {
        GroupElement {
            x: &s.x * (-1.0 / s.a.sqrt()),
            z: &s.z * (-1.0 / s.a),
            a: 1.0 / s.a,
        }
    }

    /// Density `a^{-Q-1}` of the left Haar measure in `(X, Z, a)` coordinates.
    pub fn haar_density(&self, s: &GroupElement) -> f64 {
        s.a.powi(-(self.homogeneous_dimension() as i32) - 1)
    }

    /// Differential of `x ↦ g·x` in `(X, Z, a)` coordinates. The product is
    /// affine in the right factor, so the differential does not depend on the base point.
    pub fn left_translation_differential(&self, g: &GroupElement) -> DMatrix<f64> {
        let (m, k) = (self.m(), self.k());
        let n = self.dim();
        let sqrt_a = g.a.sqrt();
        let mut d = DMatrix::zeros(n, n);
        d.view_mut((0, 0), (m, m)).fill_diagonal(sqrt_a);
        d.view_mut((m, m), (k, k)).fill_diagonal(g.a);
        d.view_mut((m, 0), (k, m))
            .copy_from(&(self.algebra.bracket_matrix(&g.x) * (0.5 * sqrt_a)));
        d[(n - 1, n - 1)] = g.a;
        d
    }

    /// `det d(L_g)_s`; equals `a_g^{Q+1}` for every `s`.
    pub fn left_translation_jacobian(&self, g: &GroupElement, _s: &GroupElement) -> f64 {
        self.left_translation_differential(g).determinant()
    }
}

/// A point `(X, Z, a) = exp(X + Z) exp(log a · T)` of `S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupElement {
    x: DVector<f64>,
    z: DVector<f64>,
    a: f64,
}

impl GroupElement {
    pub fn new(x: DVector<f64>, z: DVector<f64>, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!(
                "group coordinate a must be positive, got {a}"
            )));
        }
        Ok(Self { x, z, a })
    }

    pub(crate) fn new_unchecked(x: DVector<f64>, z: DVector<f64>, a: f64) -> Self {
        debug_assert!(a > 0.0);
        Self { x, z, a }
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `(X, Z, a)` stacked into one vector of length `m + k + 1`.
    pub fn to_coordinates(&self) -> DVector<f64> {
        stack(&self.x, &self.z, self.a)
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &GroupElement) -> f64 {
        (self.to_coordinates() - other.to_coordinates()).amax()
    }
}

/// `X + Z + tT ∈ s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraElement {
    pub x: DVector<f64>,
    pub z: DVector<f64>,
    pub t: f64,
}

impl AlgebraElement {
    pub fn new(x: DVector<f64>, z: DVector<f64>, t: f64) -> Self {
        Self { x, z, t }
    }

    pub fn zero(m: usize, k: usize) -> Self {
        Self::new(DVector::zeros(m), DVector::zeros(k), 0.0)
    }

    /// The generator `T` of `A`.
    pub fn t_generator(m: usize, k: usize) -> Self {
        Self::new(DVector::zeros(m), DVector::zeros(k), 1.0)
    }

    pub fn from_v(x: DVector<f64>, k: usize) -> Self {
        Self::new(x, DVector::zeros(k), 0.0)
    }

    pub fn from_z(m: usize, z: DVector<f64>) -> Self {
        Self::new(DVector::zeros(m), z, 0.0)
    }

    /// Coordinates in the basis `(e_1..e_m, f_1..f_k, T)`.
    pub fn to_coordinates(&self) -> DVector<f64> {
        stack(&self.x, &self.z, self.t)
    }

    pub fn from_coordinates(c: &DVector<f64>, m: usize, k: usize) -> Result<Self> {
        check_dim(m + k + 1, c.len())?;
        Ok(Self::new(
            c.rows(0, m).into_owned(),
            c.rows(m, k).into_owned(),
            c[m + k],
        ))
    }
}

pub(crate) fn stack(x: &DVector<f64>, z: &DVector<f64>, t: f64) -> DVector<f64> {
    let (m, k) = (x.len(), z.len());
    let mut out = DVector::zeros(m + k + 1);
    out.rows_mut(0, m).copy_from(x);
    out.rows_mut(m, k).copy_from(z);
    out[m + k] = t;
    out
}
