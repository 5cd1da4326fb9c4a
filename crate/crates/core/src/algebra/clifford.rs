//! Real Clifford modules: skew-symmetric generators `E_1..E_k` on `R^m` with
//! `E_i E_j + E_j E_i = -2 δ_ij I`.
//!
//! Irreducible blocks are built explicitly for `k = 1..8` (complex, quaternion
//! and octonion left multiplications, plus one doubling step for `k = 8`) and
//! extended to larger `k` by the eightfold periodicity `d(k + 8) = 16 d(k)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identities on exact integer matrices only accumulate rounding, so this is tight.
pub const CLIFFORD_TOL: f64 = 1e-12;

/// Dimension of an irreducible module of `Cl(k)` with negative-definite generators.
pub fn min_dimension(k: usize) -> Result<usize> {
    const BASE: [usize; 8] = [2, 4, 4, 8, 8, 8, 8, 16];
    if k == 0 {
        return Err(Error::Domain(
            "center dimension k must be at least 1".into(),
        ));
    }
    let periods = (k - 1) / 8;
    Ok(BASE[(k - 1) % 8] * 16usize.pow(periods as u32))
}

/// Whether `Cl(k)` has two inequivalent irreducible modules (`k ≡ 3 mod 4`).
pub fn has_chirality(k: usize) -> bool {
    k % 4 == 3
}

/// How many irreducible blocks a module is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Multiplicity {
    /// Copies of the unique irreducible module (`k ≢ 3 mod 4`).
    Single(usize),
    /// Copies of each chirality (`k ≡ 3 mod 4`): blocks where `E_1⋯E_k = +I`
    /// and blocks where it equals `-I`.
    Chiral { plus: usize, minus: usize },
}

impl Multiplicity {
    pub fn total(&self) -> usize {
        match *self {
            Multiplicity::Single(n) => n,
            Multiplicity::Chiral { plus, minus } => plus + minus,
        }
    }

    /// A module built from a single chirality.
    pub fn is_isotypic(&self) -> bool {
        match *self {
            Multiplicity::Single(_) => true,
            Multiplicity::Chiral { plus, minus } => plus == 0 || minus == 0,
        }
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Multiplicity::Single(n) => write!(f, "{n}"),
            Multiplicity::Chiral { plus, minus } => write!(f, "{plus}+{minus}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordSpec {
    k: usize,
    multiplicity: Multiplicity,
}

impl CliffordSpec {
    pub fn new(k: usize, multiplicity: Multiplicity) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        match (has_chirality(k), multiplicity) {
            (false, Multiplicity::Chiral { .. }) => {
                return Err(Error::InvalidSpec(format!(
                    "k = {k} has a single irreducible module; use a plain multiplicity"
                )))
            }
            (true, Multiplicity::Single(_)) => {
                return Err(Error::InvalidSpec(format!(
                    "k = {k} needs a chiral multiplicity (n+, n-)"
                )))
            }
            _ => {}
        }
        if multiplicity.total() == 0 {
            return Err(Error::InvalidSpec(
                "at least one multiplicity must be positive".into(),
            ));
        }
        Ok(Self { k, multiplicity })
    }

    pub fn single(k: usize, n: usize) -> Result<Self> {
        Self::new(k, Multiplicity::Single(n))
    }

    pub fn chiral(k: usize, plus: usize, minus: usize) -> Result<Self> {
        Self::new(k, Multiplicity::Chiral { plus, minus })
    }

    /// The smallest module for `k`, with positive chirality when there is a choice.
    pub fn minimal(k: usize) -> Result<Self> {
        if has_chirality(k) {
            Self::chiral(k, 1, 0)
        } else {
            Self::single(k, 1)
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn multiplicity(&self) -> Multiplicity {
        self.multiplicity
    }

    /// `m = (total multiplicity) · d(k)`.
    pub fn module_dimension(&self) -> usize {
        self.multiplicity.total() * min_dimension(self.k).expect("k validated")
    }

    /// `dim S = m + k + 1`.
    pub fn space_dimension(&self) -> usize {
        self.module_dimension() + self.k + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordModule {
    generators: Vec<DMatrix<f64>>,
}

impl CliffordModule {
    /// Wraps raw generator matrices. Only shapes are checked here; the algebraic
    /// relations are checked by [`verify_clifford`].
    pub fn from_generators(generators: Vec<DMatrix<f64>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidSpec("need at least one generator".into()));
        };
        let m = first.nrows();
        for g in &generators {
            if g.nrows() != m || g.ncols() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: g.nrows().max(g.ncols()),
                });
            }
        }
        let d = min_dimension(generators.len())?;
        if m == 0 || m % d != 0 {
            return Err(Error::InvalidSpec(format!(
                "module dimension {m} is not a multiple of d({}) = {d}",
                generators.len()
            )));
        }
        Ok(Self { generators })
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn m(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &DMatrix<f64> {
        &self.generators[i]
    }

    /// `E_1 E_2 ⋯ E_k`.
    pub fn volume_element(&self) -> DMatrix<f64> {
        volume_element(&self.generators)
    }
}

fn volume_element(gens: &[DMatrix<f64>]) -> DMatrix<f64> {
    let m = gens[0].nrows();
    gens.iter().fold(DMatrix::identity(m, m), |acc, e| acc * e)
}

/// Maximum absolute deviations of the Clifford-module relations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliffordReport {
    /// `max_i ‖E_iᵀ + E_i‖_max`
    pub skew: f64,
    /// `max_i ‖E_i² + I‖_max`
    pub square: f64,
    /// Per-generator `‖E_i² + I‖_max`.
    pub square_by_generator: Vec<f64>,
    /// `max_{i<j} ‖E_i E_j + E_j E_i‖_max`
    pub anticommute: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CliffordReport {
    pub fn max_deviation(&self) -> f64 {
        self.skew.max(self.square).max(self.anticommute)
    }
}

pub fn verify_clifford(module: &CliffordModule) -> CliffordReport {
    let gens = module.generators();
    let m = module.m();
    let id = DMatrix::<f64>::identity(m, m);
    let max_abs = |a: &DMatrix<f64>| a.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));

    let skew = gens
        .iter()
        .map(|e| max_abs(&(e.transpose() + e)))
        .fold(0.0, f64::max);
    let square_by_generator: Vec<f64> = gens.iter().map(|e| max_abs(&(e * e + &id))).collect();
    let square = square_by_generator.iter().copied().fold(0.0, f64::max);
    let mut anticommute = 0.0_f64;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let ac = &gens[i] * &gens[j] + &gens[j] * &gens[i];
            anticommute = anticommute.max(max_abs(&ac));
        }
    }
    let passed = skew <= CLIFFORD_TOL && square <= CLIFFORD_TOL && anticommute <= CLIFFORD_TOL;
    CliffordReport {
        skew,
        square,
        square_by_generator,
        anticommute,
        tolerance: CLIFFORD_TOL,
        passed,
    }
}

/// Builds the module described by `spec` as a block sum of irreducible blocks.
pub fn build_module(spec: &CliffordSpec) -> CliffordModule {
    let k = spec.k();
    let block = irreducible_block(k);
    let d = block[0].nrows();

    // (block generators, count) pairs in the order they are laid out.
    let layout: Vec<(Vec<DMatrix<f64>>, usize)> = match spec.multiplicity() {
        Multiplicity::Single(n) => vec![(block, n)],
        Multiplicity::Chiral { plus, minus } => {
            let positive = with_chirality(&block, 1.0);
            let negative = with_chirality(&block, -1.0);
            vec![(positive, plus), (negative, minus)]
        }
    };

    let m = spec.module_dimension();
    let mut generators = vec![DMatrix::<f64>::zeros(m, m); k];
    let mut offset = 0;
    for (gens, count) in &layout {
        for _ in 0..*count {
            for (big, small) in generators.iter_mut().zip(gens) {
                big.view_mut((offset, offset), (d, d)).copy_from(small);
            }
            offset += d;
        }
    }
    debug_assert_eq!(offset, m);
    CliffordModule { generators }
}

/// Returns the block with `E_1⋯E_k = sign · I`, flipping all generators if needed
/// (for odd `k` this flips the sign of the volume element).
fn with_chirality(block: &[DMatrix<f64>], sign: f64) -> Vec<DMatrix<f64>> {
    let current = volume_element(block)[(0, 0)];
    if current * sign > 0.0 {
        block.to_vec()
    } else {
        block.iter().map(|e| -e).collect()
    }
}

/// Generators of an irreducible module for `k ≥ 1`.
pub(crate) fn irreducible_block(k: usize) -> Vec<DMatrix<f64>> {
    match k {
        1 => vec![DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])],
        2 | 3 => left_multiplications(4, &[(1, 2, 3)])
            .into_iter()
            .take(k)
            .collect(),
        4..=7 => left_multiplications(8, &OCTONION_TRIPLES)
            .into_iter()
            .take(k)
            .collect(),
        8 => double(&irreducible_block(7)),
        _ => periodic(&irreducible_block(k - 8), &irreducible_block(8)),
    }
}

/// Oriented Fano-plane triples: `e_a e_b = e_c` and cyclic permutations.
const OCTONION_TRIPLES: [(usize, usize, usize); 7] = [
    (1, 2, 4),
    (2, 3, 5),
    (3, 4, 6),
    (4, 5, 7),
    (5, 6, 1),
    (6, 7, 2),
    (7, 1, 3),
];

/// Left multiplication by the imaginary units `e_1..e_{n-1}` of the
/// (quaternion or octonion) algebra with basis `e_0 = 1, e_1, …, e_{n-1}`.
fn left_multiplications(n: usize, triples: &[(usize, usize, usize)]) -> Vec<DMatrix<f64>> {
    // table[i][j] = (sign, index) with e_i e_j = sign · e_index
    let mut table = vec![vec![(0.0, 0usize); n]; n];
    for (j, entry) in table[0].iter_mut().enumerate() {
        *entry = (1.0, j);
    }
    for (i, row) in table.iter_mut().enumerate().skip(1) {
        row[0] = (1.0, i);
        row[i] = (-1.0, 0);
    }
    for &(a, b, c) in triples {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            table[x][y] = (1.0, z);
            table[y][x] = (-1.0, z);
        }
    }
    (1..n)
        .map(|i| {
            let mut l = DMatrix::zeros(n, n);
            for j in 0..n {
                let (sign, idx) = table[i][j];
                l[(idx, j)] = sign;
            }
            l
        })
        .collect()
}

/// `Cl(k) → Cl(k+1)` on twice the dimension: `E_i ⊗ diag(1,-1)` and `I ⊗ J`.
fn double(block: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let d = block[0].nrows();
    let reflect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let rotate = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let mut out: Vec<DMatrix<f64>> = block.iter().map(|e| e.kronecker(&reflect)).collect();
    out.push(DMatrix::<f64>::identity(d, d).kronecker(&rotate));
    out
}

/// `Cl(k) → Cl(k+8)` on sixteen times the dimension, using the volume element
/// `ω` of the `Cl(8)` block (symmetric, `ω² = I`, anticommuting with every
/// `Cl(8)` generator): `E_i ⊗ ω` and `I ⊗ G_j`.
fn periodic(block: &[DMatrix<f64>], cl8: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let d = block[0].nrows();
    let omega = volume_element(cl8);
    let mut out: Vec<DMatrix<f64>> = block.iter().map(|e| e.kronecker(&omega)).collect();
    let id = DMatrix::<f64>::identity(d, d);
    out.extend(cl8.iter().map(|g| id.kronecker(g)));
    out
}
