// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-dissipator GKSL generators and exact channels, plus the
//! state-to-dynamics correspondence: Kossakowski matrix Π → program state π →
//! weighted jump decomposition.
//!
//! Superoperators act on row-major-vectorized operators, so
//! `X ↦ A X B  ⟷  A ⊗ Bᵀ`.

use num_complex::Complex;

use crate::tensor::{
    gamma_vector, herm_eig, herm_eigvals, kron, mat_exp, vectorize, ComplexMatrix, Scalar,
};
use crate::{creal, real, Error, Result};

/// Relative Hermiticity/state tolerance for validated constructors.
pub const STATE_TOL: f64 = 1e-10;
/// Relative PSD tolerance for user-supplied Kossakowski matrices.
pub const KOSSAKOWSKI_PSD_TOL: f64 = 1e-9;

/// A jump operator L, optionally Frobenius-normalized (‖L‖₂ = 1).
#[derive(Debug, Clone)]
pub struct JumpOperator<T> {
    matrix: ComplexMatrix<T>,
    frobenius_normalized: bool,
}

impl<T: Scalar> JumpOperator<T> {
    /// Wraps a square matrix; the normalization flag is set when
    /// ‖L‖₂ = 1 within 1e-10.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let norm = matrix.frobenius_norm();
        let frobenius_normalized = (norm - T::one()).abs() <= crate::scaled_tol::<T>(STATE_TOL);
        Ok(JumpOperator {
            matrix,
            frobenius_normalized,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn is_frobenius_normalized(&self) -> bool {
        self.frobenius_normalized
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.frobenius_normalized {
            Ok(())
        } else {
            Err(Error::arg(format!(
                "jump operator must be Frobenius-normalized (‖L‖₂ = {})",
                self.matrix.frobenius_norm()
            )))
        }
    }

    /// Squared operator norm ‖L‖∞².
    pub fn op_norm_sq(&self) -> T {
        let s = crate::tensor::schatten_norm(&self.matrix, crate::tensor::SchattenP::Inf);
        s * s
    }
}

/// A density matrix: Hermitian, PSD, unit trace (each within tolerance).
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_psd_tolerance(matrix, crate::scaled_tol::<T>(STATE_TOL))
    }

    /// Validated constructor with an explicit PSD/Hermiticity tolerance.
    pub fn with_psd_tolerance(matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let scale = matrix.max_abs().max(T::one());
        let dev = matrix.hermiticity_deviation();
        if dev > tol * scale {
            return Err(Error::NotHermitian {
                deviation: (dev / scale).to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::arg(format!("trace {} is not 1", tr.re)));
        }
        let vals = herm_eigvals(&matrix.hermitize())?;
        if let Some(min) = vals.last() {
            if *min < -tol * scale {
                return Err(Error::NotPsd {
                    min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(DensityMatrix { matrix })
    }

    /// |ψ⟩⟨ψ| from a column vector, normalized internally.
    pub fn from_pure(psi: &ComplexMatrix<T>) -> Result<Self> {
        if psi.cols() != 1 {
            return Err(Error::shape("pure state must be a column vector"));
        }
        let norm = psi.frobenius_norm();
        if norm == T::zero() {
            return Err(Error::arg("zero vector is not a state"));
        }
        let unit = psi.scaled_re(T::one() / norm);
        Ok(DensityMatrix {
            matrix: &unit * &unit.dagger(),
        })
    }

    pub fn basis_state(d: usize, i: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::matrix_unit(d, i, i),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(d).scaled_re(T::one() / real::<T>(d as f64)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix<T>) -> Self {
        DensityMatrix { matrix }
    }
}

/// A D²×D² matrix acting on row-major-vectorized D×D operators.
#[derive(Debug, Clone)]
pub struct Superoperator<T> {
    matrix: ComplexMatrix<T>,
    dim: usize,
    tag: String,
}

impl<T: Scalar> Superoperator<T> {
    pub fn new(matrix: ComplexMatrix<T>, tag: impl Into<String>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let dim = (matrix.rows() as f64).sqrt().round() as usize;
        if dim * dim != matrix.rows() {
            return Err(Error::shape(format!(
                "superoperator side {} is not a perfect square",
                matrix.rows()
            )));
        }
        Ok(Superoperator {
            matrix,
            dim,
            tag: tag.into(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Superoperator {
            matrix: ComplexMatrix::identity(d * d),
            dim: d,
            tag: "identity".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Applies the map to a D×D operator.
    pub fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::shape(format!(
                "operator is {}x{}, superoperator dimension is {}",
                x.rows(),
                x.cols(),
                self.dim
            )));
        }
        let v = vectorize(x)?;
        crate::tensor::devectorize(&(&self.matrix * &v), self.dim)
    }

    /// Composition self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::shape("superoperator dimension mismatch"));
        }
        Ok(Superoperator {
            matrix: &self.matrix * &other.matrix,
            dim: self.dim,
            tag: format!("{} ∘ {}", self.tag, other.tag),
        })
    }

    /// n-fold composition by repeated squaring.
    pub fn pow(&self, n: u64) -> Self {
        Superoperator {
            matrix: self.matrix.pow(n),
            dim: self.dim,
            tag: format!("{}^{}", self.tag, n),
        }
    }

    /// Maximum deviation of (vec I)†·S from (vec I)†; zero for
    /// trace-preserving maps.
    pub fn trace_preservation_deviation(&self) -> T {
        let g = gamma_vector::<T>(self.dim);
        let w = &self.matrix.dagger() * &g;
        w.max_abs_diff(&g)
    }

    /// Maximum entry of (vec I)†·S; zero for trace-annihilating generators.
    pub fn trace_annihilation_deviation(&self) -> T {
        let g = gamma_vector::<T>(self.dim);
        (&self.matrix.dagger() * &g).max_abs()
    }
}

/// Kossakowski coefficient matrix Π in a fixed Hermitian operator basis.
#[derive(Debug, Clone)]
pub struct KossakowskiSpec<T> {
    pi_matrix: ComplexMatrix<T>,
    basis_tag: String,
    dim: usize,
}

impl<T: Scalar> KossakowskiSpec<T> {
    /// Validates Π: d²×d², Hermitian and PSD within 1e-9 (relative).
    pub fn new(pi_matrix: ComplexMatrix<T>, basis_tag: impl Into<String>) -> Result<Self> {
        if !pi_matrix.is_square() {
            return Err(Error::NotSquare {
                rows: pi_matrix.rows(),
                cols: pi_matrix.cols(),
            });
        }
        let dim = (pi_matrix.rows() as f64).sqrt().round() as usize;
        if dim * dim != pi_matrix.rows() {
            return Err(Error::shape(format!(
                "Kossakowski side {} is not a perfect square",
                pi_matrix.rows()
            )));
        }
        let tol = crate::scaled_tol::<T>(KOSSAKOWSKI_PSD_TOL);
        let scale = pi_matrix.max_abs().max(T::one());
        if pi_matrix.hermiticity_deviation() > tol * scale {
            return Err(Error::NotHermitian {
                deviation: (pi_matrix.hermiticity_deviation() / scale)
                    .to_f64()
                    .unwrap_or(f64::NAN),
            });
        }
        let vals = herm_eigvals(&pi_matrix.hermitize())?;
        if let Some(min) = vals.last() {
            if *min < -tol * scale {
                return Err(Error::NotPsd {
                    min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(KossakowskiSpec {
            pi_matrix,
            basis_tag: basis_tag.into(),
            dim,
        })
    }

    /// Rank-one Π encoding a single jump operator: Π_{mn} = ū_m u_n with
    /// u_m = Tr[F_m L].
    pub fn from_jump(l: &JumpOperator<T>) -> Result<Self> {
        let d = l.dim();
        let basis = hermitian_basis::<T>(d);
        let u: Vec<Complex<T>> = basis.iter().map(|f| f.hs_inner(l.matrix())).collect();
        // F Hermitian, so Tr[F L] = ⟨F, L⟩.
        let mut pi = ComplexMatrix::zeros(d * d, d * d);
        for m in 0..d * d {
            for n in 0..d * d {
                pi.set(m, n, u[m].conj() * u[n]);
            }
        }
        Self::new(pi, GELL_MANN_BASIS_TAG)
    }

    /// System dimension d (Π itself is d²×d²).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pi(&self) -> &ComplexMatrix<T> {
        &self.pi_matrix
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }
}

/// Eigendecomposition of Π into weighted, Frobenius-normalized jumps.
#[derive(Debug, Clone)]
pub struct JumpDecomposition<T> {
    pub weights: Vec<T>,
    pub jumps: Vec<JumpOperator<T>>,
}

/// Basis convention identifier for [`hermitian_basis`].
pub const GELL_MANN_BASIS_TAG: &str = "gell-mann";

/// Superoperator of the single dissipator 𝓛(ρ) = LρL† − ½{L†L, ρ}.
///
/// Matrix form: L ⊗ L̄ − ½(L†L) ⊗ I − ½ I ⊗ (L†L)ᵀ.
pub fn dissipator_superop<T: Scalar>(l: &JumpOperator<T>) -> Superoperator<T> {
    let d = l.dim();
    let lm = l.matrix();
    let ldl = &lm.dagger() * lm;
    let id = ComplexMatrix::identity(d);
    let mut m = kron(lm, &lm.conj());
    m.axpy(creal(-0.5), &kron(&ldl, &id));
    m.axpy(creal(-0.5), &kron(&id, &ldl.transpose()));
    Superoperator {
        matrix: m,
        dim: d,
        tag: "generator".into(),
    }
}

/// Exact channel e^{𝓛t} for the single dissipator of `l`.
pub fn exact_channel<T: Scalar>(l: &JumpOperator<T>, t: T) -> Result<Superoperator<T>> {
    if t < T::zero() {
        return Err(Error::arg("evolution time must be nonnegative"));
    }
    let gen = dissipator_superop(l);
    let m = mat_exp(&gen.matrix.scaled_re(t))?;
    Ok(Superoperator {
        matrix: m,
        dim: l.dim(),
        tag: "channel".into(),
    })
}

/// Applies a channel to a state. The output is not renormalized: trace or
/// positivity drift is left visible as a diagnostic.
pub fn apply_channel<T: Scalar>(
    s: &Superoperator<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let out = s.apply(rho.matrix())?;
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Completely depolarizing channel 𝓓₁: X ↦ (I/d)·Tr X, as the rank-one
/// superoperator (1/d)|Γ⟩⟨Γ|.
pub fn depolarizing_superop<T: Scalar>(d: usize) -> Superoperator<T> {
    let g = gamma_vector::<T>(d);
    let m = (&g * &g.dagger()).scaled_re(T::one() / real::<T>(d as f64));
    Superoperator {
        matrix: m,
        dim: d,
        tag: "depolarizing".into(),
    }
}

/// Hermitian Hilbert–Schmidt basis {F_n} with Tr[F_n F_m] = δ_{nm}.
///
/// Returns F₀ = I/√d followed by the d²−1 traceless generalized Gell-Mann
/// matrices, ordered as: for each pair i<j (lexicographic) the symmetric
/// then the antisymmetric element, then the d−1 diagonal elements.
pub fn hermitian_basis<T: Scalar>(d: usize) -> Vec<ComplexMatrix<T>> {
    let mut basis = Vec::with_capacity(d * d);
    let inv_sqrt_d = T::one() / real::<T>(d as f64).sqrt();
    basis.push(ComplexMatrix::identity(d).scaled_re(inv_sqrt_d));

    let inv_sqrt2 = real::<T>(std::f64::consts::FRAC_1_SQRT_2);
    for i in 0..d {
        for j in i + 1..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym.set(i, j, Complex::new(inv_sqrt2, T::zero()));
            sym.set(j, i, Complex::new(inv_sqrt2, T::zero()));
            basis.push(sym);
            let mut asym = ComplexMatrix::zeros(d, d);
            asym.set(i, j, Complex::new(T::zero(), -inv_sqrt2));
            asym.set(j, i, Complex::new(T::zero(), inv_sqrt2));
            basis.push(asym);
        }
    }
    for l in 1..d {
        let c = T::one() / real::<T>((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for k in 0..l {
            diag.set(k, k, Complex::new(c, T::zero()));
        }
        diag.set(l, l, Complex::new(-c * real::<T>(l as f64), T::zero()));
        basis.push(diag);
    }
    basis
}

/// Program state π = (1/TrΠ) Σ_{mn} Π_{mn} |F_n⟩⟨F_m| on the d×d bipartite
/// space.
pub fn program_state<T: Scalar>(spec: &KossakowskiSpec<T>) -> Result<DensityMatrix<T>> {
    let d = spec.dim();
    let tr = spec.pi().trace().re;
    if tr <= real::<T>(1e-14) {
        return Err(Error::arg("Tr Π must be positive"));
    }
    let basis = hermitian_basis::<T>(d);
    // Columns of B are the vectorized basis elements, so the double sum is
    // B·Πᵀ·B†.
    let mut b = ComplexMatrix::zeros(d * d, d * d);
    for (n, f) in basis.iter().enumerate() {
        b.set_column(n, vectorize(f)?.data());
    }
    let pi_mat = &(&b * &spec.pi().transpose()) * &b.dagger();
    DensityMatrix::with_psd_tolerance(
        pi_mat.scaled_re(T::one() / tr),
        crate::scaled_tol::<T>(KOSSAKOWSKI_PSD_TOL),
    )
}

/// Diagonalizes Π = Σ_k γ_k ū_k ū_k† into weights γ_k and normalized jumps
/// L_k = Σ_m u_{mk} F_m; eigenvalues below 1e-12·TrΠ are dropped.
pub fn decompose_kossakowski<T: Scalar>(spec: &KossakowskiSpec<T>) -> Result<JumpDecomposition<T>> {
    let d = spec.dim();
    let (vals, vecs) = herm_eig(&spec.pi().hermitize())?;
    let tr: T = vals.iter().fold(T::zero(), |a, &b| a + b);
    let cutoff = real::<T>(1e-12) * tr.max(T::zero());
    let basis = hermitian_basis::<T>(d);

    let mut weights = Vec::new();
    let mut jumps = Vec::new();
    for (k, &gamma) in vals.iter().enumerate() {
        if gamma <= cutoff {
            continue;
        }
        // Π eigenvector v_k corresponds to u_k = v̄_k.
        let mut lk = ComplexMatrix::zeros(d, d);
        for (m, f) in basis.iter().enumerate() {
            lk.axpy(vecs.get(m, k).conj(), f);
        }
        let norm = lk.frobenius_norm();
        if norm == T::zero() {
            continue;
        }
        weights.push(gamma);
        jumps.push(JumpOperator::new(lk.scaled_re(T::one() / norm))?);
    }
    Ok(JumpDecomposition { weights, jumps })
}

/// GKSL superoperator built directly from Π by the double sum
/// Σ_{mn} Π_{mn} [F_n ρ F_m − ½{F_m F_n, ρ}].
pub fn gksl_superop<T: Scalar>(spec: &KossakowskiSpec<T>) -> Result<Superoperator<T>> {
    let d = spec.dim();
    let basis = hermitian_basis::<T>(d);
    let id = ComplexMatrix::identity(d);
    let mut total = ComplexMatrix::zeros(d * d, d * d);
    for m in 0..d * d {
        for n in 0..d * d {
            let coeff = spec.pi().get(m, n);
            if coeff.norm() == T::zero() {
                continue;
            }
            // F Hermitian: F_m† = F_m.
            let fm = &basis[m];
            let fn_ = &basis[n];
            let fmfn = fm * fn_;
            let mut term = kron(fn_, &fm.conj());
            term.axpy(creal(-0.5), &kron(&fmfn, &id));
            term.axpy(creal(-0.5), &kron(&id, &fmfn.transpose()));
            total.axpy(coeff, &term);
        }
    }
    Superoperator::new(total, "generator")
}
