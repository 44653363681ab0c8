//! Exact arithmetic in Z[ζ_2p].
//!
//! Every phase that appears in the construction is a power of ζ_2p =
//! exp(iπ/p): integer powers of γ = exp(2πi/p) are the even powers, and the
//! square roots needed in the even case (±i for p = 2) are the odd ones.
//! Elements are stored as integer polynomials in ζ_2p reduced modulo the
//! cyclotomic polynomial Φ_2p, so two elements are equal iff their
//! coefficient vectors are.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("operands live in different rings (2p = {left} vs {right})")]
    MixedOrder { left: u32, right: u32 },
    #[error("element is not a rational integer")]
    NotAnInteger,
}

/// ζ_den^t with `den = 2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    t: u32,
    den: u32,
}

impl PhaseExponent {
    pub fn new(t: i64, den: u32) -> Self {
        PhaseExponent {
            t: t.rem_euclid(den as i64) as u32,
            den,
        }
    }

    pub fn zero(den: u32) -> Self {
        PhaseExponent { t: 0, den }
    }

    /// γ^e for the p-th root of unity γ, i.e. ζ_2p^{2e}.
    pub fn from_character(p: u32, e: u32) -> Self {
        PhaseExponent::new(2 * e as i64, 2 * p)
    }

    pub fn t(self) -> u32 {
        self.t
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.t == 0
    }

    pub fn compose(self, other: PhaseExponent) -> PhaseExponent {
        assert_eq!(self.den, other.den, "phases with different denominators");
        PhaseExponent::new(self.t as i64 + other.t as i64, self.den)
    }

    pub fn inverse(self) -> PhaseExponent {
        PhaseExponent::new(-(self.t as i64), self.den)
    }

    pub fn times(self, k: u64) -> PhaseExponent {
        PhaseExponent::new((self.t as u64 * (k % self.den as u64)) as i64, self.den)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.t as f64 / self.den as f64)
    }
}

/// Number of canonical coefficients, deg Φ_2p.
fn rank(p: u32) -> usize {
    if p == 2 {
        2
    } else {
        p as usize - 1
    }
}

/// Reduces a polynomial given on `ζ^0..ζ^{2p-1}` modulo Φ_2p.
fn reduce(p: u32, mut full: Vec<BigInt>) -> Vec<BigInt> {
    let p = p as usize;
    debug_assert_eq!(full.len(), 2 * p);
    // ζ^p = -1
    for t in (p..2 * p).rev() {
        let c = std::mem::take(&mut full[t]);
        full[t - p] -= c;
    }
    full.truncate(p);
    if p > 2 {
        // Φ_2p(x) = Σ_{j<p} (-x)^j, so x^{p-1} = Σ_{j<p-1} (-1)^{j+1} x^j.
        let top = full.pop().expect("p ≥ 3");
        for (j, c) in full.iter_mut().enumerate() {
            if j % 2 == 0 {
                *c -= &top;
            } else {
                *c += &top;
            }
        }
    }
    full
}

/// An element of Z[ζ_2p] in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); rank(p)],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = n.into();
        x
    }

    /// The monomial ζ_2p^t.
    pub fn from_phase(p: u32, t: PhaseExponent) -> Self {
        assert_eq!(t.den(), 2 * p, "phase denominator must be 2p");
        let mut counts = vec![0i64; 2 * p as usize];
        counts[t.t() as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// `Σ_t counts[t]·ζ_2p^t`; `counts` has length 2p.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), 2 * p as usize);
        let full = counts.iter().map(|&c| BigInt::from(c)).collect();
        CycInt {
            p,
            coeffs: reduce(p, full),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_ring(&self, other: &CycInt) -> Result<(), CycloError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycloError::MixedOrder {
                left: 2 * self.p,
                right: 2 * other.p,
            })
        }
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt, CycloError> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt, CycloError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt, CycloError> {
        self.same_ring(other)?;
        let mut full = vec![BigInt::zero(); 2 * self.p as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        Ok(CycInt {
            p: self.p,
            coeffs: reduce(self.p, full),
        })
    }

    /// Complex conjugation, ζ^t ↦ ζ^{-t}.
    pub fn conj(&self) -> CycInt {
        let den = 2 * self.p as usize;
        let mut full = vec![BigInt::zero(); den];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[(den - j) % den] += c;
        }
        CycInt {
            p: self.p,
            coeffs: reduce(self.p, full),
        }
    }

    /// `x · conj(x)`.
    pub fn abs_sq(&self) -> CycInt {
        self.checked_mul(&self.conj()).expect("same ring")
    }

    pub fn as_integer(&self) -> Result<BigInt, CycloError> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Ok(self.coeffs[0].clone())
        } else {
            Err(CycloError::NotAnInteger)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let w = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(w, PI * j as f64 / self.p as f64)
            })
            .sum()
    }
}

impl Add for &CycInt {
    type Output = CycInt;

    /// Panics on operands from different rings; see [`CycInt::checked_add`].
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("mixed cyclotomic rings")
    }
}

impl Add for CycInt {
    type Output = CycInt;

    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl Sub for &CycInt {
    type Output = CycInt;

    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("mixed cyclotomic rings")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;

    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("mixed cyclotomic rings")
    }
}

impl Mul for CycInt {
    type Output = CycInt;

    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl Neg for &CycInt {
    type Output = CycInt;

    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if j == 1 {
                        write!(f, "ζ")?;
                    } else {
                        write!(f, "ζ^{j}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " (ζ = ζ_{})", 2 * self.p)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
