//! The N+1 mutually unbiased bases and their verifiers.
//!
//! Basis 0 is the computational basis. Basis `i ≥ 1` diagonalizes the class
//! `{U^i_l}` and has amplitudes
//!
//! ```text
//! ⟨q|e^i_k⟩ = N^{-1/2} · γ^{⊖(q⊙k)} · s_{i-1}(q)
//! ```
//!
//! where `s_c(q)` is the square root of `γ^{c⊙q⊙q}` conjugate to the phase
//! of `U^i_q`. Amplitudes are stored as ζ_2p exponents, so every identity
//! below is checked in exact arithmetic; dense matrices appear only in the
//! floating-point cross-checks.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycInt, PhaseExponent};
use crate::gf::{FieldElement, GaloisField};
use crate::pauli::{
    character, check_dense_cap, same_field, sqrt_phase, u_op, weyl_group, PauliError,
    PhaseConvention, WeylOperator,
};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MubError {
    #[error("basis index {i} out of range 1..={n}")]
    BasisOutOfRange { i: u32, n: u32 },
    #[error("states belong to different fields")]
    FieldMismatch,
    #[error("the Wootters–Fields comparison needs an odd characteristic")]
    EvenCharacteristic,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Amplitudes {
    /// A computational basis vector.
    Delta(FieldElement),
    /// N phases; every amplitude has modulus `1/√N`.
    Phases(Vec<PhaseExponent>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MubState {
    pub basis: u32,
    pub index: FieldElement,
    pub amplitudes: Amplitudes,
}

impl MubState {
    pub fn exponents(&self) -> Option<&[PhaseExponent]> {
        match &self.amplitudes {
            Amplitudes::Phases(e) => Some(e),
            Amplitudes::Delta(_) => None,
        }
    }

    pub fn to_vector(&self, n: u32) -> DVector<Complex64> {
        let mut v = DVector::zeros(n as usize);
        match &self.amplitudes {
            Amplitudes::Delta(k) => v[k.index()] = Complex64::new(1.0, 0.0),
            Amplitudes::Phases(exps) => {
                let scale = 1.0 / (n as f64).sqrt();
                for (q, e) in exps.iter().enumerate() {
                    v[q] = e.to_complex() * scale;
                }
            }
        }
        v
    }
}

pub fn computational_state(k: FieldElement) -> MubState {
    MubState {
        basis: 0,
        index: k,
        amplitudes: Amplitudes::Delta(k),
    }
}

/// `|j̃⟩ = N^{-1/2} Σ_k γ^{⊖(k⊙j)} |k⟩`.
pub fn dual_basis(f: &GaloisField) -> Vec<MubState> {
    f.elements()
        .map(|j| MubState {
            basis: 1,
            index: j,
            amplitudes: Amplitudes::Phases(
                f.elements()
                    .map(|k| character(f, f.neg(f.mul(k, j))))
                    .collect(),
            ),
        })
        .collect()
}

/// State `k` of basis `i ∈ 1..=N`.
pub fn mub_state(
    f: &GaloisField,
    i: u32,
    k: FieldElement,
    convention: PhaseConvention,
) -> Result<MubState, MubError> {
    let n = f.order();
    if i == 0 || i > n {
        return Err(MubError::BasisOutOfRange { i, n });
    }
    let c = f.element(i - 1).expect("i ≤ N");
    let label = f.sub(k, convention.shift);
    let exps = f
        .elements()
        .map(|q| {
            let chi = character(f, f.neg(f.mul(q, label)));
            chi.compose(sqrt_phase(f, c, q, convention.even_reading).inverse())
        })
        .collect();
    Ok(MubState {
        basis: i,
        index: k,
        amplitudes: Amplitudes::Phases(exps),
    })
}

#[derive(Debug, Clone)]
pub struct MubFamily<'f> {
    field: &'f GaloisField,
    convention: PhaseConvention,
    bases: Vec<Vec<MubState>>,
}

/// Computational basis followed by the N constructed bases. Nothing is
/// verified here.
pub fn mub_family(f: &GaloisField, convention: PhaseConvention) -> MubFamily<'_> {
    let mut bases = vec![f.elements().map(computational_state).collect::<Vec<_>>()];
    for i in 1..=f.order() {
        bases.push(
            f.elements()
                .map(|k| mub_state(f, i, k, convention).expect("i in range"))
                .collect(),
        );
    }
    MubFamily {
        field: f,
        convention,
        bases,
    }
}

impl<'f> MubFamily<'f> {
    pub fn field(&self) -> &'f GaloisField {
        self.field
    }

    pub fn convention(&self) -> PhaseConvention {
        self.convention
    }

    pub fn bases(&self) -> &[Vec<MubState>] {
        &self.bases
    }

    pub fn basis(&self, i: u32) -> &[MubState] {
        &self.bases[i as usize]
    }

    pub fn state(&self, i: u32, k: FieldElement) -> &MubState {
        &self.bases[i as usize][k.index()]
    }

    /// Adds `delta` to the exponent at position `q` of state `(i, k)`.
    /// Exists so verifiers can be exercised against a broken family.
    pub fn perturb_phase(&mut self, i: u32, k: FieldElement, q: FieldElement, delta: i64) {
        if let Amplitudes::Phases(exps) = &mut self.bases[i as usize][k.index()].amplitudes {
            let e = exps[q.index()];
            exps[q.index()] = PhaseExponent::new(e.t() as i64 + delta, e.den());
        }
    }

    /// Matrix whose columns are the states of basis `i`.
    pub fn basis_matrix(&self, i: u32) -> DMatrix<Complex64> {
        let n = self.field.order();
        let cols: Vec<_> = self.basis(i).iter().map(|s| s.to_vector(n)).collect();
        DMatrix::from_columns(&cols)
    }

    pub fn to_json(&self) -> FamilyJson {
        let f = self.field;
        FamilyJson {
            p: f.p(),
            m: f.m(),
            n: f.order(),
            poly: f.poly().to_vec(),
            phase_denominator: 2 * f.p(),
            bases: self
                .bases
                .iter()
                .enumerate()
                .map(|(i, states)| BasisJson {
                    i: i as u32,
                    states: states
                        .iter()
                        .map(|s| match &s.amplitudes {
                            Amplitudes::Delta(_) => StateJson {
                                k: s.index.label(),
                                kind: "delta",
                                exponents: Vec::new(),
                            },
                            Amplitudes::Phases(e) => StateJson {
                                k: s.index.label(),
                                kind: "phase",
                                exponents: e.iter().map(|x| x.t()).collect(),
                            },
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rows and columns are states `i:k`; entries are `N²·|⟨a|b⟩|²`.
    pub fn unbiasedness_csv(&self) -> String {
        let states: Vec<&MubState> = self.bases.iter().flatten().collect();
        let mut out = String::from("state");
        for s in &states {
            out.push_str(&format!(",{}:{}", s.basis, s.index));
        }
        out.push('\n');
        for a in &states {
            out.push_str(&format!("{}:{}", a.basis, a.index));
            for b in &states {
                out.push_str(&format!(",{}", overlap_sq_scaled(self.field, a, b)));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyJson {
    pub p: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub poly: Vec<u32>,
    pub phase_denominator: u32,
    pub bases: Vec<BasisJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisJson {
    pub i: u32,
    pub states: Vec<StateJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateJson {
    pub k: u32,
    pub kind: &'static str,
    pub exponents: Vec<u32>,
}

/// Unnormalized inner product `⟨a|b⟩`, exact.
///
/// The scale depends on the representations: `N·⟨a|b⟩` for two phase
/// vectors, `√N·⟨a|b⟩` when exactly one side is a delta, and `N·⟨a|b⟩` for
/// two deltas.
pub fn inner(f: &GaloisField, a: &MubState, b: &MubState) -> CycInt {
    let p = f.p();
    match (&a.amplitudes, &b.amplitudes) {
        (Amplitudes::Delta(x), Amplitudes::Delta(y)) => {
            CycInt::from_int(p, if x == y { f.order() } else { 0 })
        }
        (Amplitudes::Delta(x), Amplitudes::Phases(e)) => CycInt::from_phase(p, e[x.index()]),
        (Amplitudes::Phases(e), Amplitudes::Delta(y)) => {
            CycInt::from_phase(p, e[y.index()].inverse())
        }
        (Amplitudes::Phases(ea), Amplitudes::Phases(eb)) => {
            let mut counts = vec![0i64; 2 * p as usize];
            for (x, y) in ea.iter().zip(eb) {
                counts[y.compose(x.inverse()).t() as usize] += 1;
            }
            CycInt::from_exponent_counts(p, &counts)
        }
    }
}

/// `N²·|⟨a|b⟩|²` as an exact integer.
pub fn overlap_sq_scaled(f: &GaloisField, a: &MubState, b: &MubState) -> BigInt {
    let value = inner(f, a, b)
        .abs_sq()
        .as_integer()
        .expect("|z|² of a cyclotomic integer built from these states is rational");
    match (&a.amplitudes, &b.amplitudes) {
        (Amplitudes::Phases(_), Amplitudes::Delta(_))
        | (Amplitudes::Delta(_), Amplitudes::Phases(_)) => value * f.order(),
        _ => value,
    }
}

/// Same basis: `N²·|⟨a|b⟩|² ∈ {N², 0}` by state equality; different bases:
/// exactly `N`.
pub fn verify_unbiasedness(fam: &MubFamily<'_>) -> CheckReport {
    let f = fam.field;
    let n = BigInt::from(f.order());
    let n_sq = &n * &n;
    let zero = BigInt::from(0);
    let nb = fam.bases.len();
    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|a| (a..nb).map(move |b| (a, b))).collect();
    let parts: Vec<CheckReport> = pairs
        .par_iter()
        .map(|&(ba, bb)| {
            let mut report = CheckReport::new("unbiasedness");
            for (ka, sa) in fam.bases[ba].iter().enumerate() {
                let start = if ba == bb { ka } else { 0 };
                for sb in &fam.bases[bb][start..] {
                    let value = overlap_sq_scaled(f, sa, sb);
                    let expected = if ba != bb {
                        &n
                    } else if sa.index == sb.index {
                        &n_sq
                    } else {
                        &zero
                    };
                    report.record(&value == expected, || {
                        format!(
                            "N²|⟨e^{ba}_{}|e^{bb}_{}⟩|² = {value}, expected {expected}",
                            sa.index, sb.index
                        )
                    });
                }
            }
            report
        })
        .collect();
    let mut report = CheckReport::new("unbiasedness");
    for part in parts {
        report.merge(part);
    }
    report
}

fn apply_to_phases(
    op: &WeylOperator<'_>,
    phase: PhaseExponent,
    exps: &[PhaseExponent],
) -> Vec<PhaseExponent> {
    let f = op.field();
    let mut out = vec![PhaseExponent::zero(phase.den()); exps.len()];
    for q in f.elements() {
        let (row, chi) = op.apply_basis(q);
        out[row.index()] = exps[q.index()].compose(chi).compose(phase);
    }
    out
}

/// `U^i_l |e^i_k⟩ = γ^{k⊙l} |e^i_k⟩` for every `(i, k, l)`, by structural
/// application of `U` to the exponent vector.
pub fn verify_eigenstates(fam: &MubFamily<'_>) -> CheckReport {
    let f = fam.field;
    let mut report = CheckReport::new("eigenstates");
    for i in 0..=f.order() {
        for l in f.elements() {
            let u = u_op(f, i, l, fam.convention).expect("i ≤ N");
            for state in fam.basis(i) {
                let eigen = character(f, f.mul(state.index, l));
                let ok = match &state.amplitudes {
                    Amplitudes::Delta(k) => {
                        let (row, chi) = u.underlying.apply_basis(*k);
                        row == *k && chi.compose(u.phase) == eigen
                    }
                    Amplitudes::Phases(exps) => {
                        let image = apply_to_phases(&u.underlying, u.phase, exps);
                        image.iter().zip(exps).all(|(x, e)| *x == e.compose(eigen))
                    }
                };
                report.record(ok, || {
                    format!(
                        "U^{i}_{l} |e^{i}_{}⟩ is not γ^(k⊙l)|e^{i}_{}⟩",
                        state.index, state.index
                    )
                });
            }
        }
    }
    report
}

/// Dense check of `U^i_l = Σ_k γ^{k⊙l} |e^i_k⟩⟨e^i_k|`.
pub fn verify_spectral_resolution(
    fam: &MubFamily<'_>,
    cap: u32,
    tol: f64,
) -> Result<CheckReport, MubError> {
    let f = fam.field;
    check_dense_cap(f.order(), cap)?;
    let mut report = CheckReport::new("spectral_resolution");
    for i in 0..=f.order() {
        let vectors: Vec<_> = fam
            .basis(i)
            .iter()
            .map(|s| s.to_vector(f.order()))
            .collect();
        for l in f.elements() {
            let u = u_op(f, i, l, fam.convention)?
                .as_phased()
                .dense_matrix(cap)?;
            let mut sum = DMatrix::<Complex64>::zeros(f.order() as usize, f.order() as usize);
            for (state, v) in fam.basis(i).iter().zip(&vectors) {
                let w = character(f, f.mul(state.index, l)).to_complex();
                sum += v * v.adjoint() * w;
            }
            let err = (&u - &sum).norm();
            report.record(err < tol, || format!("class {i}, l={l}: error {err:e}"));
        }
    }
    Ok(report)
}

/// `(1/N) Σ_l γ^{⊖(k⊙l)} U^i_l`.
pub fn projector_from_u(
    f: &GaloisField,
    convention: PhaseConvention,
    i: u32,
    k: FieldElement,
    cap: u32,
) -> Result<DMatrix<Complex64>, MubError> {
    check_dense_cap(f.order(), cap)?;
    let n = f.order() as usize;
    let mut sum = DMatrix::<Complex64>::zeros(n, n);
    for l in f.elements() {
        let u = u_op(f, i, l, convention)?.as_phased().dense_matrix(cap)?;
        sum += u * character(f, f.neg(f.mul(k, l))).to_complex();
    }
    Ok(sum / Complex64::new(n as f64, 0.0))
}

/// `N^{-1/2} Σ_q γ^{Tr(⊖q⊙k)} γ^{Tr(r⊙q⊙q)} |q⟩`.
pub fn wootters_fields_state(
    f: &GaloisField,
    r: FieldElement,
    k: FieldElement,
) -> Result<MubState, MubError> {
    if f.p() == 2 {
        return Err(MubError::EvenCharacteristic);
    }
    let exps = f
        .elements()
        .map(|q| {
            let a = f.trace(f.neg(f.mul(q, k)));
            let b = f.trace(f.mul(r, f.mul(q, q)));
            PhaseExponent::from_character(f.p(), f.add(a, b).label())
        })
        .collect();
    Ok(MubState {
        basis: r.label(),
        index: k,
        amplitudes: Amplitudes::Phases(exps),
    })
}

/// Exponents rotated so that the `q = 0` entry is zero.
fn ray_fingerprint(exps: &[PhaseExponent]) -> Vec<u32> {
    let shift = exps[0].inverse();
    exps.iter().map(|e| e.compose(shift).t()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WfMatch {
    /// Basis index in the family.
    pub basis: u32,
    /// Parameter `r` of the matching Wootters–Fields basis.
    pub r: u32,
    /// `relabel[k]` is the Wootters–Fields label of state `k`.
    pub relabel: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WfReport {
    pub matches: Vec<WfMatch>,
    pub unmatched_bases: Vec<u32>,
    pub bijective: bool,
}

impl WfReport {
    pub fn passed(&self) -> bool {
        self.unmatched_bases.is_empty() && self.bijective
    }
}

/// Matches every constructed basis to a Wootters–Fields basis up to state
/// relabelling and global phases, by exact exponent fingerprints.
pub fn wf_equivalence_check(fam: &MubFamily<'_>) -> Result<WfReport, MubError> {
    let f = fam.field;
    if f.p() == 2 {
        return Err(MubError::EvenCharacteristic);
    }
    let mut index: HashMap<Vec<u32>, (u32, u32)> = HashMap::new();
    for r in f.elements() {
        for k in f.elements() {
            let s = wootters_fields_state(f, r, k)?;
            index.insert(
                ray_fingerprint(s.exponents().unwrap()),
                (r.label(), k.label()),
            );
        }
    }
    let mut matches = Vec::new();
    let mut unmatched = Vec::new();
    for i in 1..=f.order() {
        let hits: Option<Vec<(u32, u32)>> = fam
            .basis(i)
            .iter()
            .map(|s| index.get(&ray_fingerprint(s.exponents().unwrap())).copied())
            .collect();
        let matched = hits.and_then(|hits| {
            let r = hits[0].0;
            let mut relabel: Vec<u32> = hits.iter().map(|h| h.1).collect();
            let single_r = hits.iter().all(|h| h.0 == r);
            relabel.sort_unstable();
            relabel.dedup();
            (single_r && relabel.len() == hits.len()).then(|| WfMatch {
                basis: i,
                r,
                relabel: hits.iter().map(|h| h.1).collect(),
            })
        });
        match matched {
            Some(m) => matches.push(m),
            None => unmatched.push(i),
        }
    }
    let mut rs: Vec<u32> = matches.iter().map(|m| m.r).collect();
    rs.sort_unstable();
    rs.dedup();
    let bijective = rs.len() == matches.len();
    Ok(WfReport {
        matches,
        unmatched_bases: unmatched,
        bijective,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CovarianceEntry {
    /// Phase index of the original operator `V^n_m`.
    pub n: u32,
    /// Shift index of the original operator.
    pub m: u32,
    /// Indices `(a, b)` such that the operator acts as `phase·V^a_b` on the
    /// coordinates of the chosen basis.
    pub a: u32,
    pub b: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceReport {
    pub basis: u32,
    pub entries: Vec<CovarianceEntry>,
    pub unmatched: Vec<(u32, u32)>,
    pub bijective: bool,
    /// Entries whose image differs from `(m, ⊖n ⊕ (i−1)⊙m)`.
    pub formula_disagreements: usize,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty() && self.bijective
    }
}

/// Re-expresses every `V^n_m` in the coordinates of basis `i` and identifies
/// it numerically as a phase times a structural `V^a_b`.
pub fn verify_basis_covariance(
    fam: &MubFamily<'_>,
    i: u32,
    cap: u32,
    tol: f64,
) -> Result<CovarianceReport, MubError> {
    let f = fam.field;
    let n = f.order();
    if i == 0 || i > n {
        return Err(MubError::BasisOutOfRange { i, n });
    }
    check_dense_cap(n, cap)?;
    let e = fam.basis_matrix(i);
    let e_adj = e.adjoint();
    let c = f.element(i - 1).expect("i ≤ N");
    let mut entries = Vec::new();
    let mut unmatched = Vec::new();
    let mut disagreements = 0;
    for v in weyl_group(f) {
        let local = &e_adj * v.dense_matrix(cap)? * &e;
        match identify_weyl(f, &local, tol) {
            Some((a, b)) => {
                let expected = (v.i(), f.add(f.neg(v.j()), f.mul(c, v.i())));
                if (a, b) != expected {
                    disagreements += 1;
                }
                entries.push(CovarianceEntry {
                    n: v.j().label(),
                    m: v.i().label(),
                    a: a.label(),
                    b: b.label(),
                });
            }
            None => unmatched.push((v.j().label(), v.i().label())),
        }
    }
    let mut images: Vec<(u32, u32)> = entries.iter().map(|x| (x.a, x.b)).collect();
    images.sort_unstable();
    images.dedup();
    let bijective = images.len() == entries.len() && unmatched.is_empty();
    Ok(CovarianceReport {
        basis: i,
        entries,
        unmatched,
        bijective,
        formula_disagreements: disagreements,
    })
}

/// Finds `(a, b)` with `m ≈ φ·V^a_b` for a unit phase `φ`.
fn identify_weyl(
    f: &GaloisField,
    m: &DMatrix<Complex64>,
    tol: f64,
) -> Option<(FieldElement, FieldElement)> {
    let b = f
        .elements()
        .find(|r| (m[(r.index(), 0)].norm() - 1.0).abs() < tol)?;
    let anchor = m[(b.index(), 0)];
    let a = f.elements().find(|&a| {
        f.elements().all(|k| {
            let row = f.add(k, b);
            let ratio = m[(row.index(), k.index())] / anchor;
            let expected = character(f, f.mul(k, a)).to_complex();
            (ratio - expected).norm() < tol
        })
    })?;
    let candidate = WeylOperator::new(f, a, b).dense_matrix(u32::MAX).ok()?;
    let phase = anchor / candidate[(b.index(), 0)];
    ((m - candidate * phase).norm() < tol * f.order() as f64).then_some((a, b))
}

/// States from the same family share a field; guards mixed-field calls.
pub fn check_same_field(a: &GaloisField, b: &GaloisField) -> Result<(), MubError> {
    if same_field(a, b) {
        Ok(())
    } else {
        Err(MubError::FieldMismatch)
    }
}
