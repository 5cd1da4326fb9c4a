use nalgebra::{DMatrix, DVector};

use super::clifford::{build_module, verify_clifford, CliffordModule, CliffordSpec};
use crate::error::{check_dim, Error, Result};

/// The two-step nilpotent algebra `n = v ⊕ z` with `v = R^m`, `z = R^k`, the
/// standard inner product, and `J_{f_i} = E_i` on the orthonormal basis `f_i` of `z`.
#[derive(Debug, Clone)]
pub struct HTypeAlgebra {
    module: CliffordModule,
    spec: Option<CliffordSpec>,
}

impl HTypeAlgebra {
    /// Fails if the module does not satisfy the Clifford relations.
    pub fn new(module: CliffordModule) -> Result<Self> {
        let report = verify_clifford(&module);
        if !report.passed {
            return Err(Error::InvalidSpec(format!(
                "generators violate the Clifford relations (max deviation {:e})",
                report.max_deviation()
            )));
        }
        Ok(Self { module, spec: None })
    }

    pub fn from_spec(spec: &CliffordSpec) -> Result<Self> {
        let mut alg = Self::new(build_module(spec))?;
        alg.spec = Some(*spec);
        Ok(alg)
    }

    pub fn module(&self) -> &CliffordModule {
        &self.module
    }

    /// The spec this algebra was built from, if any.
    pub fn spec(&self) -> Option<&CliffordSpec> {
        self.spec.as_ref()
    }

    pub fn m(&self) -> usize {
        self.module.m()
    }

    pub fn k(&self) -> usize {
        self.module.k()
    }

    /// The matrix of `J_Z = Σ Z_i E_i`.
    pub fn j_matrix(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
        check_dim(self.k(), z.len())?;
        let m = self.m();
        let mut out = DMatrix::zeros(m, m);
        for (zi, e) in z.iter().zip(self.module.generators()) {
            out += e * *zi;
        }
        Ok(out)
    }

    pub fn j_map(&self, z: &DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim(self.k(), z.len())?;
        check_dim(self.m(), x.len())?;
        Ok(self.j_map_unchecked(z, x))
    }

    pub(crate) fn j_map_unchecked(&self, z: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        for (zi, e) in z.iter().zip(self.module.generators()) {
            if *zi != 0.0 {
                out.gemv(*zi, e, x, 1.0);
            }
        }
        out
    }

    /// `[X, Y] ∈ z` with components `⟨E_i X, Y⟩`, so that `⟨J_Z X, Y⟩ = ⟨[X, Y], Z⟩`.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim(self.m(), x.len())?;
        check_dim(self.m(), y.len())?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.k(),
            self.module.generators().iter().map(|e| (e * x).dot(y)),
        )
    }

    /// The `k × m` matrix `B_X` with `B_X Y = [X, Y]`; row `i` is `(E_i X)ᵀ`.
    pub(crate) fn bracket_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.k(), self.m());
        for (i, e) in self.module.generators().iter().enumerate() {
            let row = e * x;
            b.row_mut(i).copy_from(&row.transpose());
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{seeded_rng, standard_normal_vector, unit_vector};

    fn k1() -> HTypeAlgebra {
        HTypeAlgebra::from_spec(&CliffordSpec::single(1, 1).unwrap()).unwrap()
    }

    #[test]
    fn k1_examples() {
        let alg = k1();
        let jx = alg
            .j_map(
                &DVector::from_vec(vec![1.0]),
                &DVector::from_vec(vec![1.0, 0.0]),
            )
            .unwrap();
        assert_eq!(jx, DVector::from_vec(vec![0.0, 1.0]));
        let br = alg
            .bracket(
                &DVector::from_vec(vec![1.0, 0.0]),
                &DVector::from_vec(vec![0.0, 1.0]),
            )
            .unwrap();
        assert_eq!(br, DVector::from_vec(vec![1.0]));
    }

    #[test]
    fn zero_center_vector_gives_zero() {
        let alg = HTypeAlgebra::from_spec(&CliffordSpec::single(2, 1).unwrap()).unwrap();
        let x = DVector::from_vec(vec![1.0, -2.0, 3.0, 0.5]);
        assert_eq!(
            alg.j_map(&DVector::zeros(2), &x).unwrap(),
            DVector::zeros(4)
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let alg = k1();
        let err = alg
            .j_map(&DVector::zeros(2), &DVector::zeros(2))
            .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                got: 2
            }
        );
        assert!(alg.bracket(&DVector::zeros(3), &DVector::zeros(2)).is_err());
    }

    #[test]
    fn rejects_non_clifford_generators() {
        let module = build_module(&CliffordSpec::single(1, 1).unwrap());
        let bad = CliffordModule::from_generators(vec![module.generator(0) * 2.0]).unwrap();
        assert!(HTypeAlgebra::new(bad).is_err());
    }

    #[test]
    fn h_type_identity_on_random_unit_vectors() {
        let mut rng = seeded_rng(7);
        for k in 1..=8 {
            let alg = HTypeAlgebra::from_spec(&CliffordSpec::minimal(k).unwrap()).unwrap();
            let id = DMatrix::<f64>::identity(alg.m(), alg.m());
            for _ in 0..100 {
                let z = unit_vector(&mut rng, k);
                let j = alg.j_matrix(&z).unwrap();
                let dev = (&j * &j + &id).amax();
                assert!(dev <= 1e-12, "k = {k}: {dev:e}");
                let x = standard_normal_vector(&mut rng, alg.m());
                let jx = alg.j_map(&z, &x).unwrap();
                assert!(jx.dot(&x).abs() <= 1e-14 * x.norm_squared().max(1.0));
                assert!((jx.norm() - x.norm()).abs() <= 1e-12 * x.norm());
            }
        }
    }

    #[test]
    fn duality_between_bracket_and_j() {
        let mut rng = seeded_rng(11);
        let alg = HTypeAlgebra::from_spec(&CliffordSpec::chiral(3, 1, 1).unwrap()).unwrap();
        let mut worst = 0.0_f64;
        for _ in 0..200 {
            let x = standard_normal_vector(&mut rng, alg.m());
            let y = standard_normal_vector(&mut rng, alg.m());
            let z = standard_normal_vector(&mut rng, alg.k());
            let lhs = alg.j_map(&z, &x).unwrap().dot(&y);
            let rhs = alg.bracket(&x, &y).unwrap().dot(&z);
            worst = worst.max((lhs - rhs).abs());
            assert!(alg.bracket(&x, &x).unwrap().amax() <= 1e-14 * x.norm_squared());
        }
        assert!(worst <= 1e-12, "{worst:e}");
    }
}
