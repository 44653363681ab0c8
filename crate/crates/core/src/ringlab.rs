//! The Weyl construction repeated over `Z_N` with modular arithmetic.
//!
//! For prime `N` this reproduces the field construction. For composite `N`
//! the commuting structure degenerates: there are more than N+1 maximal
//! commuting sets, they overlap, and their eigenbases stop being unbiased.
//! Without an exact phase structure, commutation and eigenbases are
//! computed numerically.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest N accepted for class enumeration.
pub const RING_CAP: u32 = 12;
/// Commutation and eigenvector residual tolerance.
pub const COMMUTE_TOL: f64 = 1e-10;
const DEGENERACY_GAP: f64 = 1e-8;
const EIGEN_RESIDUAL_TOL: f64 = 1e-8;
const MIXING_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring size {n} must be at least 2")]
    TooSmall { n: u32 },
    #[error("N = {n} exceeds the cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("class {class} has no joint eigenbasis (residual {residual})")]
    NotDiagonalizable { class: usize, residual: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing {
    n: u32,
}

impl ModRing {
    pub fn new(n: u32) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::TooSmall { n });
        }
        Ok(ModRing { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.n
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.n - a % self.n) % self.n
    }

    /// Non-zero `a` with `a·b = 0` for some non-zero `b`.
    pub fn zero_divisors(&self) -> Vec<u32> {
        (1..self.n)
            .filter(|&a| (1..self.n).any(|b| self.mul(a, b) == 0))
            .collect()
    }

    /// `e^{2πi t/N}`.
    pub fn root(&self, t: u32) -> Complex64 {
        Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * (t % self.n) as f64 / self.n as f64,
        )
    }
}

/// `V^j_i |k⟩ = ω^{(k+i)·j} |k+i⟩` over `Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingWeylOperator {
    pub ring: ModRing,
    pub j: u32,
    pub i: u32,
}

impl RingWeylOperator {
    pub fn is_identity(&self) -> bool {
        self.j == 0 && self.i == 0
    }

    pub fn dense_matrix(&self) -> DMatrix<Complex64> {
        let r = self.ring;
        let n = r.n as usize;
        let mut m = DMatrix::zeros(n, n);
        for k in 0..r.n {
            let row = r.add(k, self.i);
            m[(row as usize, k as usize)] = r.root(r.mul(row, self.j));
        }
        m
    }
}

fn check_cap(n: u32, cap: u32) -> Result<ModRing, RingError> {
    let ring = ModRing::new(n)?;
    if n > cap {
        return Err(RingError::CapExceeded { n, cap });
    }
    Ok(ring)
}

/// All N² operators, ordered by `(j, i)`.
pub fn ring_weyl_group(n: u32, cap: u32) -> Result<Vec<RingWeylOperator>, RingError> {
    let ring = check_cap(n, cap)?;
    Ok((0..n)
        .flat_map(|j| (0..n).map(move |i| RingWeylOperator { ring, j, i }))
        .collect())
}

fn commute_numerically(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
    (a * b - b * a).norm() < COMMUTE_TOL
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutingClass {
    /// `(j, i)` pairs in ascending order.
    pub members: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEnumeration {
    #[serde(rename = "N")]
    pub n: u32,
    pub class_count: usize,
    pub classes: Vec<CommutingClass>,
    pub sizes: Vec<usize>,
    /// Operators lying in more than one class.
    pub shared_operators: Vec<[u32; 2]>,
    /// Class index pairs with a non-empty intersection.
    pub overlapping_pairs: Vec<[usize; 2]>,
}

/// Maximal sets of mutually commuting non-identity operators, as maximal
/// cliques of the numerical commutation graph.
pub fn maximal_commuting_classes(n: u32) -> Result<ClassEnumeration, RingError> {
    let ops: Vec<RingWeylOperator> = ring_weyl_group(n, RING_CAP)?
        .into_iter()
        .filter(|op| !op.is_identity())
        .collect();
    let mats: Vec<_> = ops.iter().map(RingWeylOperator::dense_matrix).collect();
    let adj: Vec<Vec<bool>> = (0..ops.len())
        .map(|a| {
            (0..ops.len())
                .map(|b| a != b && commute_numerically(&mats[a], &mats[b]))
                .collect()
        })
        .collect();

    let mut cliques = Vec::new();
    bron_kerbosch(
        &adj,
        Vec::new(),
        (0..ops.len()).collect(),
        Vec::new(),
        &mut cliques,
    );

    let mut classes: Vec<CommutingClass> = cliques
        .into_iter()
        .map(|c| {
            let mut members: Vec<[u32; 2]> = c.iter().map(|&v| [ops[v].j, ops[v].i]).collect();
            members.sort_unstable();
            CommutingClass { members }
        })
        .collect();
    classes.sort_by(|a, b| a.members.cmp(&b.members));

    let mut shared = Vec::new();
    for op in &ops {
        let key = [op.j, op.i];
        if classes
            .iter()
            .filter(|c| c.members.binary_search(&key).is_ok())
            .count()
            > 1
        {
            shared.push(key);
        }
    }
    let mut overlapping = Vec::new();
    for a in 0..classes.len() {
        for b in (a + 1)..classes.len() {
            if classes[a]
                .members
                .iter()
                .any(|m| classes[b].members.binary_search(m).is_ok())
            {
                overlapping.push([a, b]);
            }
        }
    }
    Ok(ClassEnumeration {
        n,
        class_count: classes.len(),
        sizes: classes.iter().map(|c| c.members.len()).collect(),
        classes,
        shared_operators: shared,
        overlapping_pairs: overlapping,
    })
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("p or x non-empty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    let (mut p, mut x) = (p, x);
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&u| u != v);
        x.push(v);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassBasis {
    pub class: usize,
    /// Whether the class leaves a joint eigenspace of dimension above one,
    /// in which case the basis inside it is an arbitrary choice.
    pub degenerate: bool,
    pub min_eigenvalue_gap: f64,
    #[serde(skip)]
    pub vectors: DMatrix<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDeviation {
    pub a: usize,
    pub b: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnbiasednessScan {
    pub max_deviation: f64,
    pub pairs: Vec<PairDeviation>,
    pub degenerate_classes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub class_count: usize,
    pub classes: Vec<CommutingClass>,
    pub sizes: Vec<usize>,
    pub shared_operators: Vec<[u32; 2]>,
    pub overlapping_pairs: Vec<[usize; 2]>,
    pub zero_divisors: Vec<u32>,
    pub unbiasedness: UnbiasednessScan,
}

/// Diagonalizes a seeded generic Hermitian combination of the class and
/// checks every member against the resulting basis.
fn joint_eigenbasis(
    index: usize,
    class: &CommutingClass,
    ring: ModRing,
) -> Result<ClassBasis, RingError> {
    let n = ring.n as usize;
    let mats: Vec<DMatrix<Complex64>> = class
        .members
        .iter()
        .map(|&[j, i]| RingWeylOperator { ring, j, i }.dense_matrix())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(MIXING_SEED ^ index as u64);
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for m in &mats {
        let c = Complex64::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        );
        h += m * c + m.adjoint() * c.conj();
    }
    let eigen = SymmetricEigen::new(h);
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    let gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let vectors = eigen.eigenvectors;

    let mut worst = 0.0f64;
    for m in &mats {
        for col in vectors.column_iter() {
            let image = m * col;
            let lambda = col.dotc(&image);
            worst = worst.max((image - col * lambda).norm());
        }
    }
    if worst > EIGEN_RESIDUAL_TOL {
        return Err(RingError::NotDiagonalizable {
            class: index,
            residual: format!("{worst:e}"),
        });
    }
    Ok(ClassBasis {
        class: index,
        degenerate: gap < DEGENERACY_GAP,
        min_eigenvalue_gap: gap,
        vectors,
    })
}

/// Largest `| |⟨u|v⟩|² − 1/N |` over all basis pairs.
pub fn eigenbasis_unbiasedness_scan(
    enumeration: &ClassEnumeration,
) -> Result<UnbiasednessScan, RingError> {
    let ring = ModRing::new(enumeration.n)?;
    let inv_n = 1.0 / enumeration.n as f64;
    let bases: Vec<ClassBasis> = enumeration
        .classes
        .par_iter()
        .enumerate()
        .map(|(idx, class)| joint_eigenbasis(idx, class, ring))
        .collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    for a in 0..bases.len() {
        for b in (a + 1)..bases.len() {
            let overlaps = bases[a].vectors.adjoint() * &bases[b].vectors;
            let dev = overlaps
                .iter()
                .map(|z| (z.norm_sqr() - inv_n).abs())
                .fold(0.0, f64::max);
            pairs.push(PairDeviation {
                a,
                b,
                max_deviation: dev,
            });
        }
    }
    Ok(UnbiasednessScan {
        max_deviation: pairs.iter().map(|p| p.max_deviation).fold(0.0, f64::max),
        pairs,
        degenerate_classes: bases
            .iter()
            .filter(|b| b.degenerate)
            .map(|b| b.class)
            .collect(),
    })
}

pub fn ring_report(n: u32) -> Result<RingReport, RingError> {
    let enumeration = maximal_commuting_classes(n)?;
    let unbiasedness = eigenbasis_unbiasedness_scan(&enumeration)?;
    let ring = ModRing::new(n)?;
    Ok(RingReport {
        n,
        class_count: enumeration.class_count,
        classes: enumeration.classes,
        sizes: enumeration.sizes,
        shared_operators: enumeration.shared_operators,
        overlapping_pairs: enumeration.overlapping_pairs,
        zero_divisors: ring.zero_divisors(),
        unbiasedness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;
    use crate::pauli::weyl_group;

    #[test]
    fn ring_basics() {
        assert_eq!(ModRing::new(1), Err(RingError::TooSmall { n: 1 }));
        assert_eq!(ModRing::new(6).unwrap().zero_divisors(), vec![2, 3, 4]);
        assert!(ModRing::new(7).unwrap().zero_divisors().is_empty());
        let r4 = ModRing::new(4).unwrap();
        assert_eq!(r4.mul(2, 2), 0);
        assert_eq!(r4.neg(1), 3);
    }

    #[test]
    fn operators_are_unitary() {
        let ops = ring_weyl_group(6, RING_CAP).unwrap();
        assert_eq!(ops.len(), 36);
        for op in ops {
            let m = op.dense_matrix();
            assert!((m.adjoint() * &m - DMatrix::identity(6, 6)).norm() < 1e-10);
        }
        assert_eq!(
            ring_weyl_group(13, RING_CAP).unwrap_err(),
            RingError::CapExceeded { n: 13, cap: 12 }
        );
    }

    #[test]
    fn prime_ring_matches_field_operators() {
        for p in [2u32, 3, 5, 7] {
            let f = GaloisField::new(p, 1).unwrap();
            for op in weyl_group(&f) {
                let ring_op = RingWeylOperator {
                    ring: ModRing::new(p).unwrap(),
                    j: op.j().label(),
                    i: op.i().label(),
                };
                assert!((ring_op.dense_matrix() - op.dense_matrix(64).unwrap()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mod_four_shift_is_not_an_involution() {
        let shift = RingWeylOperator {
            ring: ModRing::new(4).unwrap(),
            j: 0,
            i: 1,
        }
        .dense_matrix();
        assert!((&shift * &shift - DMatrix::identity(4, 4)).norm() > 1.0);
        let f = GaloisField::new(2, 2).unwrap();
        for op in weyl_group(&f) {
            let m = op.dense_matrix(64).unwrap();
            let sq = &m * &m;
            let scalar = sq[(0, 0)];
            assert!((sq - DMatrix::identity(4, 4) * scalar).norm() < 1e-12);
        }
    }

    #[test]
    fn prime_rings_have_n_plus_one_disjoint_classes() {
        for n in [2u32, 3, 5, 7] {
            let e = maximal_commuting_classes(n).unwrap();
            assert_eq!(e.class_count, n as usize + 1);
            assert!(e.sizes.iter().all(|&s| s == n as usize - 1));
            assert!(e.overlapping_pairs.is_empty());
        }
    }

    #[test]
    fn qubit_ring_reproduces_pauli_bases() {
        let report = ring_report(2).unwrap();
        assert_eq!(
            report.classes,
            vec![
                CommutingClass {
                    members: vec![[0, 1]]
                },
                CommutingClass {
                    members: vec![[1, 0]]
                },
                CommutingClass {
                    members: vec![[1, 1]]
                },
            ]
        );
        assert!(report.unbiasedness.max_deviation < 1e-9);
    }

    #[test]
    fn composite_rings_overlap() {
        for n in [4u32, 6] {
            let e = maximal_commuting_classes(n).unwrap();
            assert!(!e.shared_operators.is_empty(), "N={n}");
        }
        assert!(maximal_commuting_classes(6).unwrap().class_count > 7);
    }

    #[test]
    fn dimension_six_is_not_unbiased() {
        let report = ring_report(6).unwrap();
        assert!(report.unbiasedness.max_deviation > 0.01);
    }

    #[test]
    fn enumeration_is_canonical() {
        let a = serde_json::to_string(&ring_report(4).unwrap()).unwrap();
        let b = serde_json::to_string(&ring_report(4).unwrap()).unwrap();
        assert_eq!(a, b);
        let e = maximal_commuting_classes(6).unwrap();
        let mut sorted = e.classes.clone();
        sorted.sort_by(|a, b| a.members.cmp(&b.members));
        assert_eq!(sorted, e.classes);
    }
}
