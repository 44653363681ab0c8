//! Density-matrix tomography in the Weyl operator basis and from the N+1
//! MUB measurement distributions.
//!
//! Everything here is floating point. Weyl operators are still applied
//! structurally, so no N×N operator matrix is ever materialized.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::gf::GaloisField;
use crate::mub::MubFamily;
use crate::pauli::{u_op, weyl_group, WeylOperator};

/// Tolerance for Hermiticity and unit trace.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-8;
const ROW_SUM_TOL: f64 = 1e-9;
const ENTRY_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed measurement table: {0}")]
    MalformedTable(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, TomoError> {
        if !matrix.is_square() {
            return Err(TomoError::NotDensity("matrix is not square".into()));
        }
        let herm_err = (&matrix - matrix.adjoint()).norm();
        if herm_err > ALGEBRAIC_TOL {
            return Err(TomoError::NotDensity(format!("‖ρ − ρ†‖ = {herm_err:e}")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > ALGEBRAIC_TOL {
            return Err(TomoError::NotDensity(format!("trace {tr}")));
        }
        let rho = DensityMatrix { matrix };
        let low = rho.min_eigenvalue();
        if low < PSD_TOL {
            return Err(TomoError::NotDensity(format!("eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    /// Skips validation; used for reconstructions, which may be slightly
    /// outside the physical set.
    pub fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        DensityMatrix { matrix }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            matrix: DMatrix::identity(n, n) / Complex64::new(n as f64, 0.0),
        }
    }

    pub fn pure(v: &DVector<Complex64>) -> Result<Self, TomoError> {
        let norm = v.norm();
        let u = v / Complex64::new(norm, 0.0);
        DensityMatrix::new(&u * u.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn to_json(&self) -> Vec<Vec<ComplexJson>> {
        matrix_json(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

pub fn matrix_json(m: &DMatrix<Complex64>) -> Vec<Vec<ComplexJson>> {
    m.row_iter()
        .map(|row| {
            row.iter()
                .map(|z| ComplexJson { re: z.re, im: z.im })
                .collect()
        })
        .collect()
}

/// Outcome probabilities; row `i` is the distribution for basis `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementTable {
    pub probs: Vec<Vec<f64>>,
}

impl MeasurementTable {
    pub fn validate(&self, n: usize) -> Result<(), TomoError> {
        if self.probs.len() != n + 1 {
            return Err(TomoError::MalformedTable(format!(
                "{} rows, expected {}",
                self.probs.len(),
                n + 1
            )));
        }
        for (i, row) in self.probs.iter().enumerate() {
            if row.len() != n {
                return Err(TomoError::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(x) = row
                .iter()
                .find(|x| !(-ENTRY_SLACK..=1.0 + ENTRY_SLACK).contains(*x))
            {
                return Err(TomoError::MalformedTable(format!("row {i} contains {x}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(TomoError::MalformedTable(format!("row {i} sums to {sum}")));
            }
        }
        Ok(())
    }
}

/// `c_{j,i} = tr((V^j_i)† ρ)` at position `j·N + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylCoefficients {
    n: usize,
    values: Vec<Complex64>,
}

impl WeylCoefficients {
    pub fn get(&self, op: &WeylOperator<'_>) -> Complex64 {
        self.values[op.j().index() * self.n + op.i().index()]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn check_dim(f: &GaloisField, found: usize) -> Result<usize, TomoError> {
    let n = f.order() as usize;
    if n == found {
        Ok(n)
    } else {
        Err(TomoError::DimensionMismatch { expected: n, found })
    }
}

/// Uses `V = Σ_k φ_k |r_k⟩⟨k|`, so `tr(V†ρ) = Σ_k φ̄_k ρ[r_k, k]`.
fn weyl_trace_adjoint(op: &WeylOperator<'_>, rho: &DMatrix<Complex64>) -> Complex64 {
    op.field()
        .elements()
        .map(|k| {
            let (row, phase) = op.apply_basis(k);
            phase.to_complex().conj() * rho[(row.index(), k.index())]
        })
        .sum()
}

pub fn pauli_decompose(
    rho: &DensityMatrix,
    f: &GaloisField,
) -> Result<WeylCoefficients, TomoError> {
    let n = check_dim(f, rho.dim())?;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for op in weyl_group(f) {
        values[op.j().index() * n + op.i().index()] = weyl_trace_adjoint(&op, rho.matrix());
    }
    Ok(WeylCoefficients { n, values })
}

/// `ρ = (1/N) Σ c_{j,i} V^j_i`.
pub fn pauli_reconstruct(
    coeffs: &WeylCoefficients,
    f: &GaloisField,
) -> Result<DensityMatrix, TomoError> {
    let n = check_dim(f, coeffs.n)?;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for op in weyl_group(f) {
        let c = coeffs.get(&op);
        for k in f.elements() {
            let (row, phase) = op.apply_basis(k);
            m[(row.index(), k.index())] += c * phase.to_complex();
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        m / Complex64::new(n as f64, 0.0),
    ))
}

pub fn mub_probabilities(
    rho: &DensityMatrix,
    fam: &MubFamily<'_>,
) -> Result<MeasurementTable, TomoError> {
    let n = check_dim(fam.field(), rho.dim())?;
    let probs = fam
        .bases()
        .iter()
        .map(|basis| {
            basis
                .iter()
                .map(|s| {
                    let v = s.to_vector(n as u32);
                    let z = v.dotc(&(rho.matrix() * &v));
                    z.re.clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    Ok(MeasurementTable { probs })
}

/// `ρ̂ = Σ_{i,k} p[i][k] |e^i_k⟩⟨e^i_k| − I`.
pub fn mub_reconstruct(
    table: &MeasurementTable,
    fam: &MubFamily<'_>,
) -> Result<DensityMatrix, TomoError> {
    let n = fam.field().order() as usize;
    table.validate(n)?;
    let mut m = -DMatrix::<Complex64>::identity(n, n);
    for (basis, row) in fam.bases().iter().zip(&table.probs) {
        for (s, &p) in basis.iter().zip(row) {
            let v = s.to_vector(n as u32);
            m += &v * v.adjoint() * Complex64::new(p, 0.0);
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Second route from the same table: class expectations
/// `tr(U^i_l ρ) = Σ_k γ^{k⊙l} p[i][k]` give every Weyl coefficient, then
/// [`pauli_reconstruct`] finishes.
pub fn weyl_path_reconstruct(
    table: &MeasurementTable,
    fam: &MubFamily<'_>,
) -> Result<DensityMatrix, TomoError> {
    let f = fam.field();
    let n = f.order() as usize;
    table.validate(n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values[0] = Complex64::new(1.0, 0.0);
    for i in 0..=f.order() {
        for l in f.elements().skip(1) {
            let u = u_op(f, i, l, fam.convention()).expect("i ≤ N");
            let expectation: Complex64 = f
                .elements()
                .map(|k| {
                    crate::pauli::character(f, f.mul(k, l)).to_complex()
                        * table.probs[i as usize][k.index()]
                })
                .sum();
            // tr(V†ρ) is the conjugate of tr(Vρ) = tr(Uρ)/φ for Hermitian ρ.
            let c = (expectation / u.phase.to_complex()).conj();
            let op = u.underlying;
            values[op.j().index() * n + op.i().index()] = c;
        }
    }
    pauli_reconstruct(&WeylCoefficients { n, values }, f)
}

/// `tr((U^i_l)† ρ)` for every class and element.
pub fn u_coefficients(
    rho: &DensityMatrix,
    fam: &MubFamily<'_>,
) -> Result<Vec<Vec<Complex64>>, TomoError> {
    let f = fam.field();
    check_dim(f, rho.dim())?;
    Ok((0..=f.order())
        .map(|i| {
            f.elements()
                .map(|l| {
                    let u = u_op(f, i, l, fam.convention()).expect("i ≤ N");
                    u.phase.to_complex().conj() * weyl_trace_adjoint(&u.underlying, rho.matrix())
                })
                .collect()
        })
        .collect())
}

/// `G G† / tr(G G†)` for a seeded complex Gaussian `G`.
pub fn random_density(seed: u64, n: usize) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        Complex64::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        )
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::from_matrix_unchecked(m / tr)
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub seeds: Vec<u64>,
    pub max_pauli_error: f64,
    pub max_mub_error: f64,
    pub max_weyl_path_error: f64,
    pub max_path_disagreement: f64,
}

impl RoundTripReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_pauli_error < tol
            && self.max_mub_error < tol
            && self.max_weyl_path_error < tol
            && self.max_path_disagreement < tol
    }
}

/// Reconstructs one random state per seed along every path.
pub fn round_trip(fam: &MubFamily<'_>, seeds: &[u64]) -> Result<RoundTripReport, TomoError> {
    let f = fam.field();
    let mut report = RoundTripReport {
        n: f.order(),
        seeds: seeds.to_vec(),
        max_pauli_error: 0.0,
        max_mub_error: 0.0,
        max_weyl_path_error: 0.0,
        max_path_disagreement: 0.0,
    };
    for &seed in seeds {
        let rho = random_density(seed, f.order() as usize);
        let via_pauli = pauli_reconstruct(&pauli_decompose(&rho, f)?, f)?;
        let table = mub_probabilities(&rho, fam)?;
        let via_mub = mub_reconstruct(&table, fam)?;
        let via_weyl = weyl_path_reconstruct(&table, fam)?;
        report.max_pauli_error = report.max_pauli_error.max(via_pauli.distance(&rho));
        report.max_mub_error = report.max_mub_error.max(via_mub.distance(&rho));
        report.max_weyl_path_error = report.max_weyl_path_error.max(via_weyl.distance(&rho));
        report.max_path_disagreement = report
            .max_path_disagreement
            .max(via_mub.distance(&via_weyl));
    }
    Ok(report)
}
