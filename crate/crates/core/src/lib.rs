//! Exact construction of the N+1 mutually unbiased bases in prime power
//! dimensions N = p^m.
//!
//! The pipeline runs bottom-up:
//!
//! - [`gf`]: GF(p^m) with labels whose p-ary digits add componentwise.
//! - [`cyclo`]: exact arithmetic in Z[ζ_2p], the carrier of every phase.
//! - [`pauli`]: the Weyl operators `V^j_i`, their N+1 commuting classes and
//!   the phase-normalized `U^i_l` with an exact group law.
//! - [`mub`]: the bases as exact phase vectors and verifiers for
//!   unbiasedness, eigenstates, Wootters–Fields equivalence and covariance.
//! - [`tomo`]: density-matrix decomposition and MUB tomography.
//! - [`ringlab`]: the same construction over Z_N, where it breaks down for
//!   composite N.
//! - [`cli`]: the `mubs` command-line surface.

pub mod cli;
pub mod cyclo;
pub mod gf;
pub mod mub;
pub mod pauli;
pub mod report;
pub mod ringlab;
pub mod tomo;

pub use cyclo::{CycInt, PhaseExponent};
pub use gf::{FieldElement, GaloisField};
pub use mub::{mub_family, MubFamily, MubState};
pub use pauli::{u_op, EvenSqrtReading, PhaseConvention, UOperator, WeylOperator};
pub use report::CheckReport;
