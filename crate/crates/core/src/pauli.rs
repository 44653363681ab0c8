//! The generalized Pauli (Weyl–Heisenberg) group over GF(p^m).
//!
//! `V^j_i` shifts the computational basis by `i` and multiplies by the
//! character of `j`: `V^j_i |k⟩ = γ^{d₀((k⊕i)⊙j)} |k⊕i⟩`. Operators are kept
//! as index pairs; products, adjoints and traces are computed exactly from
//! the composition law `V^j_i V^k_l = γ^{⊖(i⊙k)} V^{j⊕k}_{i⊕l}`. Dense
//! matrices only exist as a floating-point cross-check surface.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycInt, PhaseExponent};
use crate::gf::{FieldElement, GaloisField};
use crate::report::CheckReport;

/// Largest dimension for which dense matrices are built by default.
pub const DEFAULT_DENSE_CAP: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("operators belong to different fields")]
    FieldMismatch,
    #[error("class index {i} out of range 0..={n}")]
    ClassOutOfRange { i: u32, n: u32 },
    #[error("dimension {n} exceeds the dense cap {cap}")]
    DenseCapExceeded { n: u32, cap: u32 },
}

pub(crate) fn same_field(a: &GaloisField, b: &GaloisField) -> bool {
    std::ptr::eq(a, b) || a == b
}

pub(crate) fn check_dense_cap(n: u32, cap: u32) -> Result<(), PauliError> {
    if n > cap {
        Err(PauliError::DenseCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// γ^{d₀(x)} as a ζ_2p exponent.
pub(crate) fn character(f: &GaloisField, x: FieldElement) -> PhaseExponent {
    PhaseExponent::from_character(f.p(), f.char_exponent(x))
}

/// `V^j_i`.
#[derive(Clone, Copy)]
pub struct WeylOperator<'f> {
    field: &'f GaloisField,
    j: FieldElement,
    i: FieldElement,
}

impl PartialEq for WeylOperator<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j && self.i == other.i && same_field(self.field, other.field)
    }
}

impl Eq for WeylOperator<'_> {}

impl fmt::Debug for WeylOperator<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V^{}_{}", self.j, self.i)
    }
}

impl<'f> WeylOperator<'f> {
    pub fn new(field: &'f GaloisField, j: FieldElement, i: FieldElement) -> Self {
        WeylOperator { field, j, i }
    }

    pub fn identity(field: &'f GaloisField) -> Self {
        Self::new(field, FieldElement::ZERO, FieldElement::ZERO)
    }

    pub fn field(&self) -> &'f GaloisField {
        self.field
    }

    /// Phase ("impulsion") index.
    pub fn j(&self) -> FieldElement {
        self.j
    }

    /// Shift ("position") index.
    pub fn i(&self) -> FieldElement {
        self.i
    }

    pub fn is_identity(&self) -> bool {
        self.j.is_zero() && self.i.is_zero()
    }

    /// Image of `|k⟩`: the target row and the ζ_2p phase exponent.
    pub fn apply_basis(&self, k: FieldElement) -> (FieldElement, PhaseExponent) {
        let f = self.field;
        let row = f.add(k, self.i);
        (row, character(f, f.mul(row, self.j)))
    }

    fn check_field(&self, other: &WeylOperator<'_>) -> Result<(), PauliError> {
        if same_field(self.field, other.field) {
            Ok(())
        } else {
            Err(PauliError::FieldMismatch)
        }
    }

    pub fn as_phased(self) -> PhasedOp<'f> {
        PhasedOp {
            phase: PhaseExponent::zero(2 * self.field.p()),
            op: self,
        }
    }

    /// `V^j_i · V^k_l = γ^{⊖(i⊙k)} V^{j⊕k}_{i⊕l}`.
    pub fn compose(&self, other: &WeylOperator<'_>) -> Result<PhasedOp<'f>, PauliError> {
        self.check_field(other)?;
        let f = self.field;
        let phase = character(f, f.neg(f.mul(self.i, other.j)));
        let op = WeylOperator::new(f, f.add(self.j, other.j), f.add(self.i, other.i));
        Ok(PhasedOp { phase, op })
    }

    /// Decided from the composition law: `AB` and `BA` carry the phases
    /// `γ^{⊖(i⊙k)}` and `γ^{⊖(l⊙j)}` on the same operator.
    pub fn commutes(&self, other: &WeylOperator<'_>) -> Result<bool, PauliError> {
        self.check_field(other)?;
        let f = self.field;
        Ok(f.char_exponent(f.mul(self.i, other.j)) == f.char_exponent(f.mul(other.i, self.j)))
    }

    /// `(V^j_i)† = γ^{⊖(i⊙j)} V^{⊖j}_{⊖i}`.
    pub fn adjoint(&self) -> PhasedOp<'f> {
        let f = self.field;
        PhasedOp {
            phase: character(f, f.neg(f.mul(self.i, self.j))),
            op: WeylOperator::new(f, f.neg(self.j), f.neg(self.i)),
        }
    }

    /// Exact operator trace.
    pub fn trace(&self) -> CycInt {
        let f = self.field;
        let p = f.p();
        if !self.i.is_zero() {
            return CycInt::zero(p);
        }
        let mut counts = vec![0i64; 2 * p as usize];
        for k in f.elements() {
            counts[character(f, f.mul(k, self.j)).t() as usize] += 1;
        }
        CycInt::from_exponent_counts(p, &counts)
    }

    /// `tr(A† B)`, exact.
    pub fn hs_inner(&self, other: &WeylOperator<'_>) -> Result<CycInt, PauliError> {
        let product = self.adjoint().compose(&other.as_phased())?;
        Ok(product.trace())
    }

    pub fn dense_matrix(&self, cap: u32) -> Result<DMatrix<Complex64>, PauliError> {
        self.as_phased().dense_matrix(cap)
    }
}

/// A Weyl operator times an exact phase ζ_2p^t.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PhasedOp<'f> {
    pub phase: PhaseExponent,
    pub op: WeylOperator<'f>,
}

impl fmt::Debug for PhasedOp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ_{}^{}·{:?}", self.phase.den(), self.phase.t(), self.op)
    }
}

impl<'f> PhasedOp<'f> {
    pub fn compose(&self, other: &PhasedOp<'_>) -> Result<PhasedOp<'f>, PauliError> {
        let product = self.op.compose(&other.op)?;
        Ok(PhasedOp {
            phase: product.phase.compose(self.phase).compose(other.phase),
            op: product.op,
        })
    }

    pub fn adjoint(&self) -> PhasedOp<'f> {
        let adj = self.op.adjoint();
        PhasedOp {
            phase: adj.phase.compose(self.phase.inverse()),
            op: adj.op,
        }
    }

    pub fn pow(&self, n: u32) -> PhasedOp<'f> {
        let mut acc = WeylOperator::identity(self.op.field).as_phased();
        for _ in 0..n {
            acc = acc.compose(self).expect("same field");
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.phase.is_zero() && self.op.is_identity()
    }

    pub fn trace(&self) -> CycInt {
        let p = self.op.field.p();
        &CycInt::from_phase(p, self.phase) * &self.op.trace()
    }

    /// Dense N×N complex matrix; column `k` holds the image of `|k⟩`.
    pub fn dense_matrix(&self, cap: u32) -> Result<DMatrix<Complex64>, PauliError> {
        let f = self.op.field;
        let n = f.order();
        check_dense_cap(n, cap)?;
        let mut m = DMatrix::zeros(n as usize, n as usize);
        for k in f.elements() {
            let (row, phase) = self.op.apply_basis(k);
            m[(row.index(), k.index())] = phase.compose(self.phase).to_complex();
        }
        Ok(m)
    }
}

/// All N² operators `V^j_i`, ordered by `(j, i)`.
pub fn weyl_group(f: &GaloisField) -> Vec<WeylOperator<'_>> {
    f.elements()
        .flat_map(|j| f.elements().map(move |i| WeylOperator::new(f, j, i)))
        .collect()
}

/// Member `l` of class `i`: `V^l_0` for `i = 0`, else `V^{(i-1)⊙l}_l`.
pub fn class_member(
    f: &GaloisField,
    i: u32,
    l: FieldElement,
) -> Result<WeylOperator<'_>, PauliError> {
    let n = f.order();
    match i {
        0 => Ok(WeylOperator::new(f, l, FieldElement::ZERO)),
        _ if i <= n => {
            let c = f.element(i - 1).expect("i - 1 < N");
            Ok(WeylOperator::new(f, f.mul(c, l), l))
        }
        _ => Err(PauliError::ClassOutOfRange { i, n }),
    }
}

/// The N+1 commuting classes, each listed over `l = 0..N` (identity first).
pub fn classes(f: &GaloisField) -> Vec<Vec<WeylOperator<'_>>> {
    (0..=f.order())
        .map(|i| {
            f.elements()
                .map(|l| class_member(f, i, l).expect("i ≤ N"))
                .collect()
        })
        .collect()
}

/// Each class commutes internally, classes meet only in the identity, and
/// together they cover the N²−1 non-identity operators exactly once.
pub fn class_structure_check(f: &GaloisField) -> CheckReport {
    let mut report = CheckReport::new("class_structure");
    let n = f.order() as usize;
    let mut owner = vec![None::<usize>; n * n];
    for (ci, class) in classes(f).iter().enumerate() {
        for a in class {
            for b in class {
                report.record(a.commutes(b).unwrap(), || {
                    format!("class {ci}: {a:?} and {b:?} do not commute")
                });
            }
            if a.is_identity() {
                continue;
            }
            let slot = a.j().index() * n + a.i().index();
            let prev = owner[slot];
            report.record(prev.is_none(), || {
                format!("{a:?} lies in classes {} and {ci}", prev.unwrap())
            });
            owner[slot] = Some(ci);
        }
    }
    let covered = owner.iter().filter(|o| o.is_some()).count();
    report.record(covered == n * n - 1, || {
        format!(
            "classes cover {covered} of {} non-identity operators",
            n * n - 1
        )
    });
    report
}

/// How the square-root phase of the even case combines distinct binary
/// digits of `l`. The cross factor for digit `n` is `γ^{d₀(c⊙2^n⊙X)}`, where
/// `X` is chosen by the reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvenSqrtReading {
    /// `X = 2^{n'}` for the next set digit `n'`, and `X = 2^0` for the last.
    NextDigitWrap,
    /// `X = 2^{n'}` for the next set digit `n'`; no factor for the last.
    NextDigitOmit,
    /// `X` is the sum of all higher set digits, so every pair of set digits
    /// contributes once.
    AllHigherDigits,
}

/// Phase determination for the U operators. `shift` multiplies
/// `U^i_l` (`i ≥ 1`) by `γ^{d₀(shift⊙l)}`, which relabels the eigenbases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PhaseConvention {
    pub shift: FieldElement,
    pub even_reading: EvenSqrtReading,
}

impl Default for PhaseConvention {
    fn default() -> Self {
        PhaseConvention {
            shift: FieldElement::ZERO,
            even_reading: EvenSqrtReading::AllHigherDigits,
        }
    }
}

impl PhaseConvention {
    pub fn with_shift(shift: FieldElement) -> Self {
        PhaseConvention {
            shift,
            ..Self::default()
        }
    }
}

/// Square root of `γ^{⊖(c⊙l⊙l)}` used as the ratio `U/V` for the class with
/// multiplier `c = i−1`, before any convention shift.
///
/// Odd p: `γ^{⊖(c⊙l⊙l)/2}`, an integer power of γ. p = 2: product over the
/// set binary digits `n` of `l` of `i^{d₀(c⊙2^n⊙2^n)}` and the cross factors
/// selected by `reading`.
pub fn sqrt_phase(
    f: &GaloisField,
    c: FieldElement,
    l: FieldElement,
    reading: EvenSqrtReading,
) -> PhaseExponent {
    let p = f.p();
    let den = 2 * p;
    if p != 2 {
        let half = f.half().expect("odd characteristic");
        let x = f.mul(f.neg(f.mul(c, f.mul(l, l))), half);
        return character(f, x);
    }
    let set: Vec<u32> = (0..f.m()).filter(|&n| f.digit(l, n) == 1).collect();
    let mut t = 0i64;
    for (idx, &n) in set.iter().enumerate() {
        let pw = f.basis_power(n);
        t += f.char_exponent(f.mul(c, f.mul(pw, pw))) as i64;
        let partner = match reading {
            EvenSqrtReading::AllHigherDigits => set[idx + 1..]
                .iter()
                .fold(FieldElement::ZERO, |acc, &h| f.add(acc, f.basis_power(h))),
            EvenSqrtReading::NextDigitOmit => set
                .get(idx + 1)
                .map_or(FieldElement::ZERO, |&h| f.basis_power(h)),
            EvenSqrtReading::NextDigitWrap => set
                .get(idx + 1)
                .map_or(FieldElement::ONE, |&h| f.basis_power(h)),
        };
        t += 2 * f.char_exponent(f.mul(c, f.mul(pw, partner))) as i64;
    }
    PhaseExponent::new(t, den)
}

/// `U^i_l`: a class member with its normalizing phase.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct UOperator<'f> {
    pub class_index: u32,
    pub element: FieldElement,
    pub phase: PhaseExponent,
    pub underlying: WeylOperator<'f>,
}

impl fmt::Debug for UOperator<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "U^{}_{} = {:?}",
            self.class_index,
            self.element,
            self.as_phased()
        )
    }
}

/// JSON form `{"j", "i", "phase_num", "phase_den"}` of a phased operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorJson {
    pub j: u32,
    pub i: u32,
    pub phase_num: u32,
    pub phase_den: u32,
}

impl From<PhasedOp<'_>> for OperatorJson {
    fn from(op: PhasedOp<'_>) -> Self {
        OperatorJson {
            j: op.op.j().label(),
            i: op.op.i().label(),
            phase_num: op.phase.t(),
            phase_den: op.phase.den(),
        }
    }
}

impl<'f> UOperator<'f> {
    pub fn as_phased(&self) -> PhasedOp<'f> {
        PhasedOp {
            phase: self.phase,
            op: self.underlying,
        }
    }

    pub fn to_json(&self) -> OperatorJson {
        self.as_phased().into()
    }
}

pub fn u_op(
    f: &GaloisField,
    i: u32,
    l: FieldElement,
    convention: PhaseConvention,
) -> Result<UOperator<'_>, PauliError> {
    let underlying = class_member(f, i, l)?;
    let phase = if i == 0 {
        PhaseExponent::zero(2 * f.p())
    } else {
        let c = f.element(i - 1).expect("i ≤ N");
        sqrt_phase(f, c, l, convention.even_reading)
            .compose(character(f, f.mul(convention.shift, l)))
    };
    Ok(UOperator {
        class_index: i,
        element: l,
        phase,
        underlying,
    })
}

/// `U^i_l · U^i_{l'} = U^i_{l⊕l'}` with exact phases, for all `l, l'`.
pub fn u_group_law_check(
    f: &GaloisField,
    i: u32,
    convention: PhaseConvention,
) -> Result<CheckReport, PauliError> {
    let mut report = CheckReport::new(format!("u_group_law[{i}]"));
    let ops: Vec<UOperator<'_>> = f
        .elements()
        .map(|l| u_op(f, i, l, convention))
        .collect::<Result<_, _>>()?;
    for a in &ops {
        for b in &ops {
            let product = a.as_phased().compose(&b.as_phased())?;
            let expected = ops[f.add(a.element, b.element).index()].as_phased();
            report.record(product == expected, || {
                format!(
                    "U^{i}_{} U^{i}_{} = {product:?}, expected {expected:?}",
                    a.element, b.element
                )
            });
        }
    }
    Ok(report)
}

/// `(U^i_{p^n})^p = 1` for every class and digit position.
pub fn u_order_check(f: &GaloisField, convention: PhaseConvention) -> CheckReport {
    let mut report = CheckReport::new("u_order_p");
    for i in 0..=f.order() {
        for n in 0..f.m() {
            let u = u_op(f, i, f.basis_power(n), convention).expect("i ≤ N");
            let power = u.as_phased().pow(f.p());
            report.record(power.is_identity(), || {
                format!("(U^{i}_{})^{} = {power:?}", f.basis_power(n), f.p())
            });
        }
    }
    report
}

/// Every U operator equals its own adjoint (meaningful for p = 2).
pub fn u_hermitian_check(f: &GaloisField, convention: PhaseConvention) -> CheckReport {
    let mut report = CheckReport::new("u_hermitian");
    for i in 0..=f.order() {
        for l in f.elements() {
            let u = u_op(f, i, l, convention).expect("i ≤ N").as_phased();
            report.record(u.adjoint() == u, || format!("U^{i}_{l} is not Hermitian"));
        }
    }
    report
}

/// `tr((V^j_i)† V^k_l) = N·δ_{i,l}·δ_{j,k}` over all pairs.
pub fn trace_orthogonality_check(f: &GaloisField) -> CheckReport {
    let mut report = CheckReport::new("trace_orthogonality");
    let group = weyl_group(f);
    let n = CycInt::from_int(f.p(), f.order());
    let zero = CycInt::zero(f.p());
    for a in &group {
        for b in &group {
            let value = a.hs_inner(b).expect("same field");
            let expected = if a == b { &n } else { &zero };
            report.record(&value == expected, || format!("tr({a:?}† {b:?}) = {value}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn qubit_operators() {
        let f = GaloisField::new(2, 1).unwrap();
        let (o, one) = (FieldElement::ZERO, FieldElement::ONE);
        let z = WeylOperator::new(&f, one, o).dense_matrix(64).unwrap();
        let x = WeylOperator::new(&f, o, one).dense_matrix(64).unwrap();
        let v11 = WeylOperator::new(&f, one, one).dense_matrix(64).unwrap();
        let zero = c(0.0, 0.0);
        assert!(close(
            &z,
            &DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), zero, zero, c(-1.0, 0.0)])
        ));
        assert!(close(
            &x,
            &DMatrix::from_row_slice(2, 2, &[zero, c(1.0, 0.0), c(1.0, 0.0), zero])
        ));
        // |0⟩⟨1| − |1⟩⟨0|
        assert!(close(
            &v11,
            &DMatrix::from_row_slice(2, 2, &[zero, c(1.0, 0.0), c(-1.0, 0.0), zero])
        ));
        assert!(!WeylOperator::new(&f, o, one)
            .commutes(&WeylOperator::new(&f, one, o))
            .unwrap());
    }

    #[test]
    fn gf4_matrices_are_signed_permutations() {
        let f = GaloisField::new(2, 2).unwrap();
        let v = WeylOperator::new(&f, f.element(2).unwrap(), f.element(3).unwrap());
        let m = v.dense_matrix(64).unwrap();
        for col in 0..4 {
            let nonzero: Vec<_> = (0..4).filter(|&r| m[(r, col)].norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 1);
            let e = m[(nonzero[0], col)];
            assert!((e.re.abs() - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn composition_examples() {
        let f = GaloisField::new(2, 1).unwrap();
        let (o, one) = (FieldElement::ZERO, FieldElement::ONE);
        let prod = WeylOperator::new(&f, o, one)
            .compose(&WeylOperator::new(&f, one, o))
            .unwrap();
        assert_eq!(prod.phase, PhaseExponent::new(2, 4));
        assert_eq!(prod.op, WeylOperator::new(&f, one, one));
        let f9 = GaloisField::new(3, 2).unwrap();
        for j in f9.elements() {
            for i in f9.elements() {
                let p = WeylOperator::new(&f9, j, FieldElement::ZERO)
                    .compose(&WeylOperator::new(&f9, FieldElement::ZERO, i))
                    .unwrap();
                assert!(p.phase.is_zero());
                assert_eq!(p.op, WeylOperator::new(&f9, j, i));
            }
        }
    }

    #[test]
    fn field_mismatch() {
        let f = GaloisField::new(2, 2).unwrap();
        let g = GaloisField::new(3, 1).unwrap();
        let a = WeylOperator::identity(&f);
        let b = WeylOperator::identity(&g);
        assert_eq!(a.compose(&b).unwrap_err(), PauliError::FieldMismatch);
        assert_eq!(a.commutes(&b).unwrap_err(), PauliError::FieldMismatch);
        assert_eq!(a.hs_inner(&b).unwrap_err(), PauliError::FieldMismatch);
        // Structurally equal fields are interchangeable.
        let f2 = GaloisField::new(2, 2).unwrap();
        assert!(a.compose(&WeylOperator::identity(&f2)).is_ok());
    }

    #[test]
    fn dense_cap() {
        let f = GaloisField::new(2, 3).unwrap();
        assert_eq!(
            WeylOperator::identity(&f).dense_matrix(4).unwrap_err(),
            PauliError::DenseCapExceeded { n: 8, cap: 4 }
        );
        let id = WeylOperator::identity(&f).dense_matrix(8).unwrap();
        assert!(close(&id, &DMatrix::identity(8, 8)));
    }

    #[test]
    fn adjoint_inverts() {
        let f = GaloisField::new(3, 2).unwrap();
        for v in weyl_group(&f) {
            assert!(v.adjoint().compose(&v.as_phased()).unwrap().is_identity());
            let dense = v.dense_matrix(64).unwrap();
            let adj = v.adjoint().dense_matrix(64).unwrap();
            assert!(close(&adj, &dense.adjoint()));
        }
    }

    #[test]
    fn class_counts() {
        for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)] {
            let f = GaloisField::new(p, m).unwrap();
            let cls = classes(&f);
            assert_eq!(cls.len(), f.order() as usize + 1);
            assert!(class_structure_check(&f).passed());
        }
        assert_eq!(
            class_member(&GaloisField::new(2, 1).unwrap(), 3, FieldElement::ONE).unwrap_err(),
            PauliError::ClassOutOfRange { i: 3, n: 2 }
        );
    }

    #[test]
    fn qubit_u_operators() {
        let f = GaloisField::new(2, 1).unwrap();
        let one = FieldElement::ONE;
        let conv = PhaseConvention::default();
        for i in 0..=2 {
            let id = u_op(&f, i, FieldElement::ZERO, conv).unwrap();
            assert!(id.as_phased().is_identity());
        }
        let y = u_op(&f, 2, one, conv).unwrap();
        assert_eq!(y.underlying, WeylOperator::new(&f, one, one));
        assert_eq!(y.phase, PhaseExponent::new(1, 4));
        let m = y.as_phased().dense_matrix(64).unwrap();
        assert!(close(&(&m * &m), &DMatrix::identity(2, 2)));
        assert!(close(&m, &m.adjoint()));
        // ±Y
        assert!((m[(0, 1)].im.abs() - 1.0).abs() < 1e-12 && m[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn qutrit_u_has_order_three() {
        let f = GaloisField::new(3, 1).unwrap();
        let conv = PhaseConvention::default();
        for l in f.elements() {
            let u = u_op(&f, 2, l, conv).unwrap();
            let expected = character(&f, f.mul(f.neg(f.mul(l, l)), f.half().unwrap()));
            assert_eq!(u.phase, expected);
            assert!(u.as_phased().pow(3).is_identity());
        }
        assert!(u_order_check(&f, conv).passed());
    }

    #[test]
    fn group_laws_all_conventions() {
        for (p, m) in [(2, 2), (2, 3), (3, 2), (5, 1)] {
            let f = GaloisField::new(p, m).unwrap();
            for shift in f.elements() {
                let conv = PhaseConvention::with_shift(shift);
                for i in 0..=f.order() {
                    assert!(u_group_law_check(&f, i, conv).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn literal_even_readings_break_the_group_law() {
        let f8 = GaloisField::new(2, 3).unwrap();
        let f4 = GaloisField::new(2, 2).unwrap();
        let violations = |f: &GaloisField, reading| -> u64 {
            let conv = PhaseConvention {
                shift: FieldElement::ZERO,
                even_reading: reading,
            };
            (1..=f.order())
                .map(|i| u_group_law_check(f, i, conv).unwrap().violations)
                .sum()
        };
        assert_eq!(violations(&f4, EvenSqrtReading::NextDigitWrap), 12);
        assert_eq!(violations(&f4, EvenSqrtReading::NextDigitOmit), 0);
        assert_eq!(violations(&f8, EvenSqrtReading::NextDigitWrap), 168);
        assert_eq!(violations(&f8, EvenSqrtReading::NextDigitOmit), 72);
        assert_eq!(violations(&f8, EvenSqrtReading::AllHigherDigits), 0);
    }

    #[test]
    fn even_u_operators_are_hermitian() {
        for m in 1..=4 {
            let f = GaloisField::new(2, m).unwrap();
            assert!(u_hermitian_check(&f, PhaseConvention::default()).passed());
        }
    }

    #[test]
    fn operator_json() {
        let f = GaloisField::new(2, 1).unwrap();
        let y = u_op(&f, 2, FieldElement::ONE, PhaseConvention::default()).unwrap();
        let json = serde_json::to_string(&y.to_json()).unwrap();
        assert_eq!(json, r#"{"j":1,"i":1,"phase_num":1,"phase_den":4}"#);
    }
}
