use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::group::{AlgebraElement, Space};

/// Structure constants of a Lie algebra with respect to an orthonormal basis:
/// `c(i, j, l) = ⟨[e_i, e_j], e_l⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    n: usize,
    c: Vec<f64>,
}

impl Frame {
    /// Builds the frame from raw constants laid out as `c[(i * n + j) * n + l]`.
    pub fn from_structure_constants(n: usize, c: Vec<f64>) -> Result<Self> {
        check_dim(n * n * n, c.len())?;
        Ok(Self { n, c })
    }

    /// The orthonormal frame `(e_1..e_m, f_1..f_k, T)` of `s`, rescaled by the
    /// metric weights of `space`.
    pub fn of_space(space: &Space) -> Self {
        let (m, k, n) = (space.m(), space.k(), space.dim());
        let t = n - 1;
        let mut raw = vec![0.0; n * n * n];
        let idx = |i: usize, j: usize, l: usize| (i * n + j) * n + l;
        for (zi, e) in space.algebra().module().generators().iter().enumerate() {
            for a in 0..m {
                for b in 0..m {
                    // [e_a, e_b]_i = ⟨E_i e_a, e_b⟩ = E_i[b, a]
                    raw[idx(a, b, m + zi)] = e[(b, a)];
                }
            }
        }
        for a in 0..m {
            raw[idx(t, a, a)] = 0.5;
            raw[idx(a, t, a)] = -0.5;
        }
        for i in m..m + k {
            raw[idx(t, i, i)] = 1.0;
            raw[idx(i, t, i)] = -1.0;
        }
        let w: Vec<f64> = space.gram().iter().map(|g| g.sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    raw[idx(i, j, l)] *= w[l] / (w[i] * w[j]);
                }
            }
        }
        Self { n, c: raw }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, l: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + l]
    }

    /// `[u, w]` for vectors given in frame coordinates.
    pub fn bracket(&self, u: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let coef = u[i] * w[j];
                if coef == 0.0 {
                    continue;
                }
                for l in 0..n {
                    out[l] += coef * self.c(i, j, l);
                }
            }
        }
        out
    }

    /// Structure constants of the span of `basis` (orthonormal, in frame
    /// coordinates), together with the largest component of a bracket that
    /// leaves the span.
    pub fn restrict(&self, basis: &[DVector<f64>]) -> Result<(Frame, f64)> {
        let r = basis.len();
        for (a, u) in basis.iter().enumerate() {
            check_dim(self.n, u.len())?;
            for (b, w) in basis.iter().enumerate() {
                let expected = if a == b { 1.0 } else { 0.0 };
                if (u.dot(w) - expected).abs() > 1e-12 {
                    return Err(Error::Domain("subalgebra basis is not orthonormal".into()));
                }
            }
        }
        let mut c = vec![0.0; r * r * r];
        let mut leak = 0.0_f64;
        for a in 0..r {
            for b in 0..r {
                let br = self.bracket(&basis[a], &basis[b]);
                let mut inside = DVector::zeros(self.n);
                for (g, u) in basis.iter().enumerate() {
                    let coef = br.dot(u);
                    c[(a * r + b) * r + g] = coef;
                    inside += u * coef;
                }
                leak = leak.max((br - inside).amax());
            }
        }
        Ok((Frame { n: r, c }, leak))
    }

    /// Largest `|c(i,j,l) + c(j,i,l)|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    worst = worst.max((self.c(i, j, l) + self.c(j, i, l)).abs());
                }
            }
        }
        worst
    }
}

/// Frame coordinates `√w ⊙ (X, Z, t)` of an algebra element.
pub fn frame_coordinates(space: &Space, u: &AlgebraElement) -> Result<DVector<f64>> {
    check_dim(space.m(), u.x.len())?;
    check_dim(space.k(), u.z.len())?;
    Ok(u.to_coordinates()
        .component_mul(&space.gram().map(f64::sqrt)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordSpec;
    use crate::sampling::{seeded_rng, standard_normal_vector};

    #[test]
    fn reproduces_lie_bracket() {
        let sp = Space::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap();
        let frame = Frame::of_space(&sp);
        assert_eq!(frame.antisymmetry_residual(), 0.0);
        let mut rng = seeded_rng(31);
        for _ in 0..100 {
            let u = standard_normal_vector(&mut rng, 7);
            let w = standard_normal_vector(&mut rng, 7);
            let ue = AlgebraElement::from_coordinates(&u, 4, 2).unwrap();
            let we = AlgebraElement::from_coordinates(&w, 4, 2).unwrap();
            let expected = sp.lie_bracket(&ue, &we).unwrap().to_coordinates();
            assert!((frame.bracket(&u, &w) - expected).amax() <= 1e-13);
        }
    }

    #[test]
    fn restriction_to_non_subalgebra_leaks() {
        let sp = Space::from_spec(&CliffordSpec::single(1, 1).unwrap()).unwrap();
        let frame = Frame::of_space(&sp);
        let e = |i: usize| {
            let mut v = DVector::zeros(4);
            v[i] = 1.0;
            v
        };
        let (_, leak) = frame.restrict(&[e(0), e(1)]).unwrap();
        assert_eq!(leak, 1.0);
        let (sub, leak) = frame.restrict(&[e(0), e(3)]).unwrap();
        assert_eq!(leak, 0.0);
        assert_eq!(sub.c(1, 0, 0), 0.5);
    }
}
