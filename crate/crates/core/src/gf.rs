//! Galois fields GF(p^m).
//!
//! Elements are labelled by integers `0..N` whose p-ary digits are the
//! coefficients of the element written as a polynomial in the adjoined root
//! `x` (digit `n` is the coefficient of `x^n`). With this labelling field
//! addition is digit-wise addition mod p, and the "remainder after division
//! by p" of a label is the constant coefficient, which drives the additive
//! characters used everywhere else in the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::CycInt;
use crate::report::CheckReport;

/// Largest field order accepted by [`GaloisField::new`].
pub const DEFAULT_FIELD_CAP: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the size cap {cap}")]
    TooLarge { p: u32, m: u32, cap: u32 },
    #[error("label {label} is out of range for a field of order {order}")]
    OutOfRange { label: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires an odd characteristic")]
    EvenCharacteristic,
    #[error("unsupported table format `{0}`")]
    UnsupportedFormat(String),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` into `(p, m)` with `n = p^m`, if `n` is a prime power.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// A field element, identified by its integer label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn label(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Polynomial helpers over GF(p). Coefficient vectors are little-endian
/// (index = power) and kept without trailing zeros.
mod poly {
    pub(super) fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo the monic polynomial `b`.
    pub(super) fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let db = b.len() - 1;
        let mut r = trim(a.to_vec());
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            for (k, &c) in b.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub(super) fn eval(a: &[u32], x: u32, p: u32) -> u32 {
        a.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
    }

    /// The monic polynomial of degree `d` whose lower coefficients are the
    /// p-ary digits of `index`.
    pub(super) fn monic_from_index(index: u32, d: u32, p: u32) -> Vec<u32> {
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        let mut rest = index;
        for _ in 0..d {
            coeffs.push(rest % p);
            rest /= p;
        }
        coeffs.push(1);
        coeffs
    }

    /// All monic irreducible polynomials of degree `d`.
    pub(super) fn irreducibles(d: u32, p: u32) -> Vec<Vec<u32>> {
        let count = p.pow(d);
        (0..count)
            .map(|c| monic_from_index(c, d, p))
            .filter(|f| is_irreducible(f, p))
            .collect()
    }

    /// No roots and no monic irreducible factor of degree `2..=deg/2`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let d = (f.len() - 1) as u32;
        if d <= 1 {
            return d == 1;
        }
        if (0..p).any(|x| eval(f, x, p) == 0) {
            return false;
        }
        (2..=d / 2).all(|k| irreducibles(k, p).iter().all(|g| !rem(f, g, p).is_empty()))
    }
}

/// GF(p^m), immutable after construction.
#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u32,
    m: u32,
    order: u32,
    poly: Vec<u32>,
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, m, DEFAULT_FIELD_CAP)
    }

    /// Builds GF(p^m) from the lexicographically smallest monic irreducible
    /// polynomial of degree `m`, ordering candidates by `(c_{m-1}, ..., c_0)`.
    pub fn with_cap(p: u32, m: u32, cap: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = p
            .checked_pow(m)
            .filter(|&n| n <= cap)
            .ok_or(FieldError::TooLarge { p, m, cap })?;
        // Numeric order of the index coincides with the lexicographic order
        // on (c_{m-1}, ..., c_0).
        let poly = (0..order)
            .map(|c| poly::monic_from_index(c, m, p))
            .find(|f| poly::is_irreducible(f, p))
            .expect("every degree has a monic irreducible polynomial over GF(p)");
        Ok(Self::from_polynomial(p, m, poly))
    }

    fn from_polynomial(p: u32, m: u32, poly: Vec<u32>) -> Self {
        let order = p.pow(m);
        let place = (0..m).map(|n| p.pow(n)).collect();
        let mut field = GaloisField {
            p,
            m,
            order,
            poly,
            place,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_log_tables();
        field
    }

    fn build_log_tables(&mut self) {
        let group = self.order - 1;
        let generator = (1..self.order)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = self.poly_mul(x, g);
                    ord += 1;
                }
                ord == group
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1;
        for k in 0..group {
            exp.push(x);
            log[x as usize] = k;
            x = self.poly_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    /// Product of two labels as polynomials modulo the defining polynomial.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let da = self.digits_of(a);
        let db = self.digits_of(b);
        let mut prod = vec![0u32; 2 * self.m as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly::rem(&prod, &self.poly, self.p);
        r.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digits_of(&self, label: u32) -> Vec<u32> {
        let mut rest = label;
        (0..self.m)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The number of elements N = p^m.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Defining polynomial, `m + 1` coefficients, constant term first.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn element(&self, label: u32) -> Result<FieldElement, FieldError> {
        if label < self.order {
            Ok(FieldElement(label))
        } else {
            Err(FieldError::OutOfRange {
                label,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order).map(FieldElement)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The element `x^n`, labelled `p^n`.
    pub fn basis_power(&self, n: u32) -> FieldElement {
        FieldElement(self.place[n as usize])
    }

    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        self.digits_of(a.0)
    }

    pub fn digit(&self, a: FieldElement, n: u32) -> u32 {
        a.0 / self.place[n as usize] % self.p
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        debug_assert!(digits.len() <= self.m as usize);
        FieldElement(
            digits
                .iter()
                .rev()
                .fold(0, |acc, &d| acc * self.p + d % self.p),
        )
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &w in &self.place {
            out += ((x % self.p + y % self.p) % self.p) * w;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0);
        for &w in &self.place {
            out += ((self.p - x % self.p) % self.p) * w;
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = self.order - 1;
        let k = (self.log[a.index()] + self.log[b.index()]) % group;
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let group = self.order - 1;
        let k = (group - self.log[a.index()]) % group;
        Ok(FieldElement(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u64;
        let k = (self.log[a.index()] as u64 % group) * (e % group) % group;
        FieldElement(self.exp[k as usize])
    }

    /// `inv(1 ⊕ 1)`, used to divide by 2 in odd characteristic.
    pub fn half(&self) -> Result<FieldElement, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        self.inv(self.add(FieldElement::ONE, FieldElement::ONE))
    }

    /// The remainder of the label after division by p: the exponent of the
    /// additive character `a ↦ γ^{a_0}`, `γ = exp(2πi/p)`.
    #[inline]
    pub fn char_exponent(&self, a: FieldElement) -> u32 {
        a.0 % self.p
    }

    /// Field trace `a ⊕ a^p ⊕ … ⊕ a^{p^{m-1}}`; lands in the prime subfield.
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..self.m {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc
    }

    /// `Σ_j γ^{d₀(j⊙i)}`, evaluated exactly in Z[ζ_2p].
    pub fn character_sum(&self, i: FieldElement) -> BigInt {
        let mut counts = vec![0i64; 2 * self.p as usize];
        for j in self.elements() {
            counts[2 * self.char_exponent(self.mul(j, i)) as usize] += 1;
        }
        CycInt::from_exponent_counts(self.p, &counts)
            .as_integer()
            .expect("sums of p-th roots of unity over a whole field are rational")
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.m,
            n: self.order,
            poly: self.poly.clone(),
        }
    }

    /// The two bases of GF(p^m) over GF(p) dual to `{p^n}` under the trace
    /// form `Tr(x⊙y)` and under the remainder form `(x⊙y)_0`.
    pub fn dual_bases(&self) -> DualBases {
        let trace_dual = self.dual_basis(|x| self.trace(x).0);
        let remainder_dual = self.dual_basis(|x| self.char_exponent(x));
        DualBases {
            trace_dual,
            remainder_dual,
        }
    }

    fn dual_basis(&self, form: impl Fn(FieldElement) -> u32) -> Vec<FieldElement> {
        let m = self.m as usize;
        let gram: Vec<Vec<u32>> = (0..self.m)
            .map(|i| {
                (0..self.m)
                    .map(|s| form(self.mul(self.basis_power(i), self.basis_power(s))))
                    .collect()
            })
            .collect();
        let inverse = invert_mod_p(&gram, self.p)
            .expect("trace and remainder forms are non-degenerate on a field");
        (0..m)
            .map(|j| {
                let coords: Vec<u32> = (0..m).map(|s| inverse[s][j]).collect();
                self.from_digits(&coords)
            })
            .collect()
    }

    /// Exhaustive check that `Tr(r⊙k) = ((r'/2)⊙k)_0`, where `r` has
    /// coordinates `r_l` in the trace-dual basis and `r' = (Σ r_l t̃̃_l)⊙2`,
    /// and that `r ↦ r'` is a bijection.
    pub fn bilinear_relabel_check(&self) -> Result<CheckReport, FieldError> {
        let half = self.half()?;
        let two = self.add(FieldElement::ONE, FieldElement::ONE);
        let duals = self.dual_bases();
        let mut report = CheckReport::new("bilinear_relabel");
        let mut images = vec![false; self.order as usize];
        for r in self.elements() {
            let coords: Vec<u32> = (0..self.m)
                .map(|l| self.trace(self.mul(r, self.basis_power(l))).0)
                .collect();
            let rebuilt = self.combine(&coords, &duals.trace_dual);
            report.record(rebuilt == r, || {
                format!("r={r}: trace-dual expansion gives {rebuilt}")
            });
            let r_prime = self.mul(self.combine(&coords, &duals.remainder_dual), two);
            report.record(!images[r_prime.index()], || {
                format!("r'={r_prime} hit twice")
            });
            images[r_prime.index()] = true;
            let scaled = self.mul(r_prime, half);
            for k in self.elements() {
                let lhs = self.trace(self.mul(r, k)).0;
                let rhs = self.char_exponent(self.mul(scaled, k));
                report.record(lhs == rhs, || {
                    format!("r={r}, k={k}: Tr={lhs}, remainder={rhs}")
                });
            }
        }
        Ok(report)
    }

    fn combine(&self, coords: &[u32], basis: &[FieldElement]) -> FieldElement {
        coords
            .iter()
            .zip(basis)
            .fold(FieldElement::ZERO, |acc, (&c, &b)| {
                self.add(acc, self.mul(FieldElement(c), b))
            })
    }

    /// Field and mod-N operation tables.
    pub fn tables(&self) -> OperationTables {
        let n = self.order;
        let table = |op: &dyn Fn(u32, u32) -> u32| -> Vec<Vec<u32>> {
            (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect()
        };
        OperationTables {
            order: n,
            field_mul: table(&|a, b| self.mul(FieldElement(a), FieldElement(b)).0),
            field_add: table(&|a, b| self.add(FieldElement(a), FieldElement(b)).0),
            mod_mul: table(&|a, b| a * b % n),
            mod_add: table(&|a, b| (a + b) % n),
        }
    }

    pub fn export_tables(&self, format: &str) -> Result<String, FieldError> {
        let tables = self.tables();
        Ok(match format.parse::<TableFormat>()? {
            TableFormat::Csv => tables.to_csv(),
            TableFormat::Json => tables.to_json(),
        })
    }

    /// Exhaustive field-axiom check. Cost is cubic in N.
    pub fn axiom_check(&self) -> CheckReport {
        let mut report = CheckReport::new("field_axioms");
        let zero = FieldElement::ZERO;
        let one = FieldElement::ONE;
        for a in self.elements() {
            report.record(self.add(a, zero) == a, || format!("{a} ⊕ 0 ≠ {a}"));
            report.record(self.mul(a, one) == a, || format!("{a} ⊙ 1 ≠ {a}"));
            report.record(self.mul(a, zero) == zero, || format!("{a} ⊙ 0 ≠ 0"));
            report.record(self.add(a, self.neg(a)) == zero, || {
                format!("{a} has no additive inverse")
            });
            if !a.is_zero() {
                let ok = self.inv(a).map(|b| self.mul(a, b) == one).unwrap_or(false);
                report.record(ok, || format!("{a} has no multiplicative inverse"));
            }
            for b in self.elements() {
                report.record(self.add(a, b) == self.add(b, a), || {
                    format!("⊕ not commutative at ({a},{b})")
                });
                report.record(self.mul(a, b) == self.mul(b, a), || {
                    format!("⊙ not commutative at ({a},{b})")
                });
                report.record(
                    a.is_zero() || b.is_zero() || !self.mul(a, b).is_zero(),
                    || format!("zero divisor pair ({a},{b})"),
                );
                for c in self.elements() {
                    let ab = self.add(a, b);
                    report.record(self.add(ab, c) == self.add(a, self.add(b, c)), || {
                        format!("⊕ not associative at ({a},{b},{c})")
                    });
                    let ab = self.mul(a, b);
                    report.record(self.mul(ab, c) == self.mul(a, self.mul(b, c)), || {
                        format!("⊙ not associative at ({a},{b},{c})")
                    });
                    let lhs = self.mul(a, self.add(b, c));
                    let rhs = self.add(self.mul(a, b), self.mul(a, c));
                    report.record(lhs == rhs, || format!("not distributive at ({a},{b},{c})"));
                }
            }
        }
        report
    }

    /// Adding any element to itself p times gives 0.
    pub fn characteristic_check(&self) -> CheckReport {
        let mut report = CheckReport::new("characteristic");
        for a in self.elements() {
            let sum = (0..self.p).fold(FieldElement::ZERO, |acc, _| self.add(acc, a));
            report.record(sum.is_zero(), || {
                format!("{a} added {} times is {sum}", self.p)
            });
        }
        let mut acc = FieldElement::ONE;
        let mut steps = 1;
        while !acc.is_zero() {
            acc = self.add(acc, FieldElement::ONE);
            steps += 1;
        }
        report.record(steps == self.p, || {
            format!("characteristic {steps}, expected {}", self.p)
        });
        report
    }

    /// Character multiplicativity over ⊕ and orthogonality of the character
    /// sums, both exact.
    pub fn character_check(&self) -> CheckReport {
        let mut report = CheckReport::new("additive_characters");
        let p = self.p;
        for a in self.elements() {
            for b in self.elements() {
                let lhs = (self.char_exponent(a) + self.char_exponent(b)) % p;
                let rhs = self.char_exponent(self.add(a, b));
                report.record(lhs == rhs, || format!("χ({a})χ({b}) ≠ χ({a}⊕{b})"));
            }
            let expected = if a.is_zero() { self.order as i64 } else { 0 };
            let sum = self.character_sum(a);
            report.record(sum == BigInt::from(expected), || {
                format!("character sum at {a} is {sum}, expected {expected}")
            });
        }
        report
    }

    /// `(a⊕b)^p = a^p ⊕ b^p`.
    pub fn frobenius_check(&self) -> CheckReport {
        let mut report = CheckReport::new("frobenius");
        let p = self.p as u64;
        for a in self.elements() {
            for b in self.elements() {
                let lhs = self.pow(self.add(a, b), p);
                let rhs = self.add(self.pow(a, p), self.pow(b, p));
                report.record(lhs == rhs, || format!("Frobenius fails at ({a},{b})"));
            }
        }
        report
    }
}

/// Inverse of a square matrix over GF(p) by Gauss-Jordan elimination.
fn invert_mod_p(matrix: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = matrix.len();
    let p64 = p as u64;
    let inv_mod = |x: u64| -> u64 {
        // p is prime, so x^(p-2) is the inverse.
        let (mut base, mut e, mut acc) = (x % p64, p64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p64;
            }
            base = base * base % p64;
            e >>= 1;
        }
        acc
    };
    let mut a: Vec<Vec<u64>> = matrix
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut ext: Vec<u64> = row.iter().map(|&x| x as u64 % p64).collect();
            ext.extend((0..n).map(|c| u64::from(c == r)));
            ext
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let scale = inv_mod(a[col][col]);
        for x in a[col].iter_mut() {
            *x = *x * scale % p64;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p64 - factor * y % p64) % p64;
                }
            }
        }
    }
    Some(
        a.into_iter()
            .map(|row| row[n..].iter().map(|&x| x as u32).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualBases {
    pub trace_dual: Vec<FieldElement>,
    pub remainder_dual: Vec<FieldElement>,
}

/// JSON descriptor `{p, m, N, poly}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub poly: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            _ => Err(FieldError::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperationTables {
    #[serde(rename = "N")]
    pub order: u32,
    pub field_mul: Vec<Vec<u32>>,
    pub field_add: Vec<Vec<u32>>,
    pub mod_mul: Vec<Vec<u32>>,
    pub mod_add: Vec<Vec<u32>>,
}

impl OperationTables {
    /// Four blocks (`field_mul`, `field_add`, `mod_mul`, `mod_add`), each a
    /// header row of column labels followed by one row per left operand,
    /// separated by blank lines.
    pub fn to_csv(&self) -> String {
        let blocks = [
            ("field_mul", &self.field_mul),
            ("field_add", &self.field_add),
            ("mod_mul", &self.mod_mul),
            ("mod_add", &self.mod_add),
        ];
        let mut out = String::new();
        for (idx, (name, table)) in blocks.iter().enumerate() {
            if idx > 0 {
                out.push('\n');
            }
            out.push_str(name);
            for b in 0..self.order {
                out.push_str(&format!(",{b}"));
            }
            out.push('\n');
            for (a, row) in table.iter().enumerate() {
                out.push_str(&a.to_string());
                for v in row {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &GaloisField, x: u32) -> FieldElement {
        f.element(x).unwrap()
    }

    #[test]
    fn gf4_matches_appendix_tables() {
        let f = GaloisField::new(2, 2).unwrap();
        let t = f.tables();
        assert_eq!(
            t.field_mul,
            vec![
                vec![0, 0, 0, 0],
                vec![0, 1, 2, 3],
                vec![0, 2, 3, 1],
                vec![0, 3, 1, 2]
            ]
        );
        assert_eq!(
            t.field_add,
            vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0]
            ]
        );
        assert_eq!(f.mul(el(&f, 2), el(&f, 3)), el(&f, 1));
        assert_eq!(f.add(el(&f, 2), el(&f, 3)), el(&f, 1));
    }

    #[test]
    fn prime_fields_are_modular_arithmetic() {
        let f = GaloisField::new(3, 1).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f.add(el(&f, a), el(&f, b)).label(), (a + b) % 3);
                assert_eq!(f.mul(el(&f, a), el(&f, b)).label(), a * b % 3);
            }
        }
        let f7 = GaloisField::new(7, 1).unwrap();
        assert_eq!(f7.inv(el(&f7, 3)).unwrap(), el(&f7, 5));
    }

    #[test]
    fn gf8_uses_x3_plus_x_plus_1() {
        let f = GaloisField::new(2, 3).unwrap();
        assert_eq!(f.poly(), &[1, 1, 0, 1]);
    }

    #[test]
    fn gf9_addition_is_digitwise() {
        let f = GaloisField::new(3, 2).unwrap();
        assert_eq!(f.add(el(&f, 4), el(&f, 7)), el(&f, 2));
        assert_eq!(f.char_exponent(el(&f, 7)), 1);
        assert_eq!(f.neg(el(&f, 4)), el(&f, 8));
    }

    #[test]
    fn errors() {
        assert_eq!(GaloisField::new(6, 1), Err(FieldError::NotPrime(6)));
        assert_eq!(GaloisField::new(2, 0), Err(FieldError::ZeroDegree));
        assert!(matches!(
            GaloisField::new(2, 11),
            Err(FieldError::TooLarge { .. })
        ));
        assert!(matches!(
            GaloisField::with_cap(3, 3, 20),
            Err(FieldError::TooLarge { .. })
        ));
        let f = GaloisField::new(2, 2).unwrap();
        assert!(matches!(f.element(4), Err(FieldError::OutOfRange { .. })));
        assert_eq!(f.inv(f.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(f.div(f.one(), f.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(f.half(), Err(FieldError::EvenCharacteristic));
        assert!(f.bilinear_relabel_check().is_err());
        assert!(matches!(
            f.export_tables("xml"),
            Err(FieldError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn trace_examples() {
        let f = GaloisField::new(2, 2).unwrap();
        assert_eq!(f.trace(f.zero()), f.zero());
        assert_eq!(f.trace(el(&f, 2)), el(&f, 1));
        let f9 = GaloisField::new(3, 2).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(f9.trace(f9.add(a, b)), f9.add(f9.trace(a), f9.trace(b)));
            }
        }
    }

    #[test]
    fn character_sums() {
        let f4 = GaloisField::new(2, 2).unwrap();
        assert_eq!(f4.character_sum(f4.zero()), BigInt::from(4));
        assert_eq!(f4.character_sum(el(&f4, 2)), BigInt::from(0));
        let f27 = GaloisField::new(3, 3).unwrap();
        for i in f27.elements().skip(1) {
            assert_eq!(f27.character_sum(i), BigInt::from(0));
        }
    }

    #[test]
    fn dual_bases_satisfy_their_constraints() {
        let f3 = GaloisField::new(3, 1).unwrap();
        let d = f3.dual_bases();
        assert_eq!(d.trace_dual, vec![f3.one()]);
        assert_eq!(d.remainder_dual, vec![f3.one()]);
        for (p, m) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = GaloisField::new(p, m).unwrap();
            let d = f.dual_bases();
            for i in 0..m {
                for j in 0..m {
                    let delta = u32::from(i == j);
                    let x = f.basis_power(i);
                    assert_eq!(f.trace(f.mul(x, d.trace_dual[j as usize])).label(), delta);
                    assert_eq!(
                        f.char_exponent(f.mul(x, d.remainder_dual[j as usize])),
                        delta
                    );
                }
            }
        }
    }

    #[test]
    fn bilinear_relabel_holds() {
        for (p, m) in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)] {
            let f = GaloisField::new(p, m).unwrap();
            let report = f.bilinear_relabel_check().unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn small_field_axioms() {
        for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (5, 1), (2, 4)] {
            let f = GaloisField::new(p, m).unwrap();
            assert!(f.axiom_check().passed());
            assert!(f.characteristic_check().passed());
            assert!(f.character_check().passed());
            assert!(f.frobenius_check().passed());
        }
    }

    #[test]
    fn csv_layout() {
        let f = GaloisField::new(2, 1).unwrap();
        let csv = f.export_tables("csv").unwrap();
        assert_eq!(
            csv,
            "field_mul,0,1\n0,0,0\n1,0,1\n\nfield_add,0,1\n0,0,1\n1,1,0\n\n\
             mod_mul,0,1\n0,0,0\n1,0,1\n\nmod_add,0,1\n0,0,1\n1,1,0\n"
        );
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
