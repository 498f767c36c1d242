// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation library for single-dissipator Lindbladian dynamics via wave
//! matrix Lindbladization (WML).
//!
//! The crate is organized around a dense complex matrix core and a small set
//! of physics layers on top of it:
//!
//! - [`tensor`] — dense complex matrices, Kronecker products, vectorization,
//!   partial traces, Schatten norms, matrix exponentials, Hermitian
//!   eigendecomposition. Generic over the real scalar type (`f32`/`f64`).
//! - [`lindblad`] — GKSL generators `L ρ L† − ½{L†L, ρ}`, exact channels
//!   `e^{𝓛t}`, Hermitian operator bases, and the Kossakowski-matrix ↔
//!   program-state ↔ jump-decomposition correspondence.
//! - [`wml`] — the WML jump operator `M`, its Lindbladian `𝓜`, and three
//!   interchangeable realizations of the one-step channel
//!   `Tr₂₃[e^{𝓜Δ}(ρ ⊗ π_L)]`, plus the residual generator `𝓛̃`.
//! - [`metrics`] — trace distance, fidelity, Choi matrices, diamond-distance
//!   sandwich bounds with a see-saw ascent, and sample-complexity bound
//!   formulas.
//! - [`ensembles`] — seeded random jump operators (Ginibre and subgaussian
//!   variants) and operator-norm concentration experiments.
//! - [`worstcase`] — the rank-one adversarial construction: its 2×2
//!   recurrence, closed-form trajectory, and cross-checks against the full
//!   simulator.
//!
//! All vectorization follows the row-major convention `|L⟩ = (L ⊗ I)|Γ⟩`,
//! so the map `X ↦ A X B` has superoperator matrix `A ⊗ Bᵀ`.

pub mod ensembles;
pub mod lindblad;
pub mod metrics;
pub mod tensor;
pub mod wml;
pub mod worstcase;

use num_complex::Complex;

pub use tensor::{ComplexMatrix, Scalar, SchattenP, SubsystemDims};

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: relative deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("eigensolver failed to converge after {iterations} iterations")]
    EigNoConvergence { iterations: usize },
    #[error("singular linear system in matrix exponential")]
    SingularSystem,
    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn shape(context: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            context: context.into(),
        }
    }

    pub(crate) fn arg(context: impl Into<String>) -> Self {
        Error::InvalidArgument(context.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar over `f32`.
pub type C32 = Complex<f32>;
/// Complex scalar over `f64`.
pub type C64 = Complex<f64>;
/// Dense complex matrix over `f32`.
pub type Mat32 = ComplexMatrix<f32>;
/// Dense complex matrix over `f64`.
pub type Mat64 = ComplexMatrix<f64>;

/// Cast an `f64` literal into the scalar type.
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from(x).expect("scalar cast out of range")
}

/// Tolerance floored at 32·ε of the scalar type, so the f64 contracts keep
/// their stated values while f32 instantiations validate at their own
/// precision.
pub(crate) fn scaled_tol<T: Scalar>(base: f64) -> T {
    real::<T>(base).max(T::epsilon() * real::<T>(32.0))
}

/// Lift an `f64` literal into a complex scalar with zero imaginary part.
pub(crate) fn creal<T: Scalar>(x: f64) -> Complex<T> {
    Complex::new(real(x), T::zero())
}
