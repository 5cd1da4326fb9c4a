//! Levi-Civita connection and curvature of a left-invariant metric, computed
//! exactly on an orthonormal frame of the Lie algebra.
//!
//! Conventions: `Γ(i, j, l) = ⟨∇_{e_i} e_j, e_l⟩`,
//! `R(U, V)W = ∇_U ∇_V W - ∇_V ∇_U W - ∇_{[U,V]} W`, and
//! `K(u, v) = ⟨R(u, v)v, u⟩ / (|u|²|v|² - ⟨u, v⟩²)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::frame::{frame_coordinates, Frame};
use crate::error::{Error, Result};
use crate::group::{AlgebraElement, Space};

/// Default relative threshold below which `‖∇R‖/‖R‖` counts as zero.
pub const SYMMETRIC_REL_TOL: f64 = 1e-8;
/// Relative `‖∇R‖/‖R‖` above which a space is reported nonsymmetric.
pub const NONSYMMETRIC_REL_SEPARATION: f64 = 1e-3;

/// Connection matrices `G_i` with `∇_{e_i} e_p = Σ_l G_i[l, p] e_l`.
#[derive(Debug, Clone)]
pub struct Connection {
    matrices: Vec<DMatrix<f64>>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// `⟨∇_{e_i} e_j, e_l⟩`.
    pub fn gamma(&self, i: usize, j: usize, l: usize) -> f64 {
        self.matrices[i][(l, j)]
    }

    pub fn matrix(&self, i: usize) -> &DMatrix<f64> {
        &self.matrices[i]
    }

    /// `∇_u w` for left-invariant fields given in frame coordinates.
    pub fn covariant(&self, u: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut out = DVector::zeros(n);
        for (i, g) in self.matrices.iter().enumerate() {
            if u[i] != 0.0 {
                out.gemv(u[i], g, w, 1.0);
            }
        }
        out
    }
}

/// Koszul formula on an orthonormal frame:
/// `2⟨∇_{e_i} e_j, e_l⟩ = c(i,j,l) - c(j,l,i) + c(l,i,j)`.
pub fn koszul_connection(frame: &Frame) -> Connection {
    let n = frame.dim();
    let matrices = (0..n)
        .map(|i| {
            DMatrix::from_fn(n, n, |l, j| {
                0.5 * (frame.c(i, j, l) - frame.c(j, l, i) + frame.c(l, i, j))
            })
        })
        .collect();
    Connection { matrices }
}

/// Connection, curvature operators and the norms that decide local symmetry.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    frame: Frame,
    connection: Connection,
    /// `riemann[i * n + j]` is the operator `R(e_i, e_j)`.
    riemann: Vec<DMatrix<f64>>,
    riemann_norm: f64,
    nabla_riemann_norm: f64,
}

impl CurvatureData {
    pub fn from_frame(frame: Frame) -> Self {
        let connection = koszul_connection(&frame);
        let riemann = riemann_operators(&frame, &connection);
        let riemann_norm = riemann.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt();
        let mut data = Self {
            frame,
            connection,
            riemann,
            riemann_norm,
            nabla_riemann_norm: 0.0,
        };
        data.nabla_riemann_norm = data.compute_nabla_riemann_norm();
        data
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    /// The operator `R(e_i, e_j)`.
    pub fn riemann_operator(&self, i: usize, j: usize) -> &DMatrix<f64> {
        &self.riemann[i * self.dim() + j]
    }

    /// `R_{ijkl} = ⟨R(e_i, e_j) e_k, e_l⟩`.
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann_operator(i, j)[(l, k)]
    }

    /// Frobenius norm of `R`.
    pub fn riemann_norm(&self) -> f64 {
        self.riemann_norm
    }

    /// Frobenius norm of `∇R`.
    pub fn nabla_riemann_norm(&self) -> f64 {
        self.nabla_riemann_norm
    }

    /// `‖∇R‖ / ‖R‖` (zero for flat frames).
    pub fn relative_nabla_riemann(&self) -> f64 {
        if self.riemann_norm == 0.0 {
            0.0
        } else {
            self.nabla_riemann_norm / self.riemann_norm
        }
    }

    /// The operator `(∇_{e_a} R)(e_b, e_c)`.
    pub fn nabla_riemann_operator(&self, a: usize, b: usize, c: usize) -> DMatrix<f64> {
        let n = self.dim();
        let ga = self.connection.matrix(a);
        let rbc = self.riemann_operator(b, c);
        let mut out = ga * rbc - rbc * ga;
        for q in 0..n {
            let gb = ga[(q, b)];
            if gb != 0.0 {
                out -= self.riemann_operator(q, c) * gb;
            }
            let gc = ga[(q, c)];
            if gc != 0.0 {
                out -= self.riemann_operator(b, q) * gc;
            }
        }
        out
    }

    fn compute_nabla_riemann_norm(&self) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in (b + 1)..n {
                    sum += 2.0 * self.nabla_riemann_operator(a, b, c).norm_squared();
                }
            }
        }
        sum.sqrt()
    }

    /// `⟨R(u, v)v, u⟩ / (|u|²|v|² - ⟨u, v⟩²)` in frame coordinates.
    pub fn sectional(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        let denom = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
        if !(denom > 1e-14 * u.norm_squared() * v.norm_squared()) {
            return Err(Error::Domain(
                "sectional curvature needs independent vectors".into(),
            ));
        }
        let n = self.dim();
        let mut op = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let coef = u[i] * v[j];
                if coef != 0.0 && i != j {
                    op += self.riemann_operator(i, j) * coef;
                }
            }
        }
        Ok((op * v).dot(u) / denom)
    }

    /// Largest violation of the algebraic curvature identities:
    /// skew symmetry in both pairs, pair symmetry, and the first Bianchi identity.
    pub fn symmetry_residuals(&self) -> CurvatureSymmetries {
        let n = self.dim();
        let r = |i, j, k, l| self.riemann(i, j, k, l);
        let mut out = CurvatureSymmetries::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = r(i, j, k, l);
                        out.first_pair = out.first_pair.max((v + r(j, i, k, l)).abs());
                        out.second_pair = out.second_pair.max((v + r(i, j, l, k)).abs());
                        out.pair_exchange = out.pair_exchange.max((v - r(k, l, i, j)).abs());
                        out.bianchi = out.bianchi.max((v + r(j, k, i, l) + r(k, i, j, l)).abs());
                    }
                }
            }
        }
        out
    }

    /// Largest `|Γ(i,j,l) + Γ(i,l,j)|` (metric compatibility) and
    /// `|Γ(i,j,l) - Γ(j,i,l) - c(i,j,l)|` (zero torsion).
    pub fn connection_residuals(&self) -> (f64, f64) {
        let n = self.dim();
        let mut metric = 0.0_f64;
        let mut torsion = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let g = self.connection.gamma(i, j, l);
                    metric = metric.max((g + self.connection.gamma(i, l, j)).abs());
                    torsion = torsion
                        .max((g - self.connection.gamma(j, i, l) - self.frame.c(i, j, l)).abs());
                }
            }
        }
        (metric, torsion)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CurvatureSymmetries {
    pub first_pair: f64,
    pub second_pair: f64,
    pub pair_exchange: f64,
    pub bianchi: f64,
}

impl CurvatureSymmetries {
    pub fn max(&self) -> f64 {
        self.first_pair
            .max(self.second_pair)
            .max(self.pair_exchange)
            .max(self.bianchi)
    }
}

fn riemann_operators(frame: &Frame, conn: &Connection) -> Vec<DMatrix<f64>> {
    let n = frame.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let gi = conn.matrix(i);
            let gj = conn.matrix(j);
            let mut r = gi * gj - gj * gi;
            for p in 0..n {
                let c = frame.c(i, j, p);
                if c != 0.0 {
                    r -= conn.matrix(p) * c;
                }
            }
            out.push(r);
        }
    }
    out
}

/// Outcome of the `∇R` test with a gap between the two thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryVerdict {
    Symmetric,
    Nonsymmetric,
    /// `‖∇R‖/‖R‖` fell between the two thresholds.
    Indeterminate,
}

impl std::fmt::Display for SymmetryVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymmetryVerdict::Symmetric => "symmetric",
            SymmetryVerdict::Nonsymmetric => "nonsymmetric",
            SymmetryVerdict::Indeterminate => "indeterminate",
        })
    }
}

impl Space {
    /// Curvature data of the left-invariant metric, computed on first use.
    pub fn curvature(&self) -> &CurvatureData {
        self.curvature_cell()
            .get_or_init(|| CurvatureData::from_frame(Frame::of_space(self)))
    }

    pub fn koszul_connection(&self) -> &Connection {
        self.curvature().connection()
    }

    pub fn nabla_r_norm(&self) -> f64 {
        self.curvature().nabla_riemann_norm()
    }

    /// `‖∇R‖ ≤ rel_tol · ‖R‖`.
    pub fn is_symmetric(&self, rel_tol: f64) -> Result<bool> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::Domain(format!(
                "rel_tol must lie in (0, 1), got {rel_tol}"
            )));
        }
        let data = self.curvature();
        Ok(data.nabla_riemann_norm() <= rel_tol * data.riemann_norm())
    }

    pub fn symmetry_verdict(&self) -> SymmetryVerdict {
        let rel = self.curvature().relative_nabla_riemann();
        if rel <= SYMMETRIC_REL_TOL {
            SymmetryVerdict::Symmetric
        } else if rel >= NONSYMMETRIC_REL_SEPARATION {
            SymmetryVerdict::Nonsymmetric
        } else {
            SymmetryVerdict::Indeterminate
        }
    }

    pub fn sectional_curvature(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<f64> {
        let cu = frame_coordinates(self, u)?;
        let cv = frame_coordinates(self, v)?;
        self.curvature().sectional(&cu, &cv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;

    fn space(spec: CliffordSpec) -> Space {
        Space::from_spec(&spec).unwrap()
    }

    fn unit(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn connection_on_t() {
        let sp = space(CliffordSpec::single(2, 1).unwrap());
        let conn = sp.koszul_connection();
        let n = 7;
        let t = unit(n, 6);
        for a in 0..4 {
            let x = unit(n, a);
            assert_eq!(conn.covariant(&x, &t), -&x * 0.5);
        }
        for i in 4..6 {
            let z = unit(n, i);
            assert_eq!(conn.covariant(&z, &t), -&z);
        }
        assert_eq!(conn.covariant(&t, &t), DVector::zeros(n));
    }

    #[test]
    fn sectional_curvatures_with_t() {
        let sp = space(CliffordSpec::single(2, 1).unwrap());
        let t = AlgebraElement::t_generator(4, 2);
        for a in 0..4 {
            let x = AlgebraElement::from_v(unit(4, a), 2);
            let kx = sp.sectional_curvature(&x, &t).unwrap();
            assert!((kx + 0.25).abs() <= 1e-14, "{kx}");
        }
        for i in 0..2 {
            let z = AlgebraElement::from_z(4, unit(2, i));
            let kz = sp.sectional_curvature(&z, &t).unwrap();
            assert!((kz + 1.0).abs() <= 1e-14, "{kz}");
        }
        let x = AlgebraElement::from_v(DVector::from_vec(vec![0.3, -1.0, 0.2, 0.5]), 2);
        let y = AlgebraElement::new(
            DVector::from_vec(vec![1.0, 0.0, 0.4, 0.0]),
            DVector::from_vec(vec![0.5, 0.1]),
            0.7,
        );
        let k1 = sp.sectional_curvature(&x, &y).unwrap();
        let x2 = AlgebraElement::from_v(&x.x * 2.0, 2);
        assert!((sp.sectional_curvature(&x2, &y).unwrap() - k1).abs() <= 1e-12);
        assert!(sp.sectional_curvature(&x, &x2).is_err());
    }

    #[test]
    fn curvature_identities() {
        for spec in [
            CliffordSpec::single(1, 2).unwrap(),
            CliffordSpec::single(2, 1).unwrap(),
            CliffordSpec::chiral(3, 1, 1).unwrap(),
        ] {
            let sp = space(spec);
            let data = sp.curvature();
            let sym = data.symmetry_residuals();
            assert!(sym.max() <= 1e-10, "{sym:?}");
            let (metric, torsion) = data.connection_residuals();
            assert!(metric <= 1e-12 && torsion <= 1e-12);
        }
    }

    #[test]
    fn symmetric_and_nonsymmetric_examples() {
        let complex = space(CliffordSpec::single(1, 1).unwrap());
        assert!(complex.nabla_r_norm() <= 1e-10);
        assert!(complex.is_symmetric(1e-8).unwrap());
        let quaternionic = space(CliffordSpec::chiral(3, 1, 0).unwrap());
        assert!(quaternionic.nabla_r_norm() <= 1e-10);
        let dim7 = space(CliffordSpec::single(2, 1).unwrap());
        let rel = dim7.curvature().relative_nabla_riemann();
        assert!(rel > 1e-3, "{rel}");
        assert!(!dim7.is_symmetric(1e-8).unwrap());
        assert_eq!(dim7.symmetry_verdict(), SymmetryVerdict::Nonsymmetric);
        assert!(dim7.is_symmetric(0.0).is_err());
        assert!(dim7.is_symmetric(1.0).is_err());
    }

    #[test]
    fn octonionic_plane_is_symmetric() {
        let sp = space(CliffordSpec::chiral(7, 1, 0).unwrap());
        assert!(sp.is_symmetric(1e-8).unwrap());
    }
}
