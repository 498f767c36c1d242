// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and tensor-structure primitives.
//!
//! Matrices are stored row-major, which makes `vectorize` the plain
//! flattening of the entry array and fixes the superoperator convention
//! `X ↦ A X B  ⟷  A ⊗ Bᵀ` used by every module downstream.

mod eig;
mod expm;

pub use eig::{herm_eig, herm_eigvals};
pub use expm::mat_exp;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign};
use rayon::prelude::*;

use crate::{real, Error, Result};

/// Real scalar types the numerics are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Send + Sync + fmt::Debug + fmt::Display + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + NumAssign + Send + Sync + fmt::Debug + fmt::Display + 'static
{
}

/// Dense complex matrix with row-major storage.
#[derive(Clone)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Subsystem dimension metadata for tensor-product spaces.
///
/// The product of `dims` must equal the dimension of any matrix it
/// annotates; `labels`, when present, name the factors (e.g. "0" for the
/// reference system, "1" for the input, "2"/"3" for the program).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims {
    dims: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::arg("subsystem dimensions must be positive"));
        }
        Ok(SubsystemDims { dims, labels: None })
    }

    pub fn with_labels(dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(Error::shape("one label per subsystem required"));
        }
        let mut s = Self::new(dims)?;
        s.labels = Some(labels);
        Ok(s)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Total dimension: the product of the factor dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix entry-by-entry; panics on a non-finite entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = f(i, j);
                assert!(
                    z.re.is_finite() && z.im.is_finite(),
                    "non-finite entry at ({i}, {j})"
                );
                data.push(z);
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn diag(entries: &[Complex<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Column vector |i⟩ in dimension `n`.
    pub fn basis_column(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m.data[i] = Complex::new(T::one(), T::zero());
        m
    }

    /// Matrix unit |i⟩⟨j| in dimension `n`.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = Complex::new(T::one(), T::zero());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.cols + j] = z;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self.get(i, j))
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex<T>]) {
        assert_eq!(col.len(), self.rows, "column length mismatch");
        for (i, &z) in col.iter().enumerate() {
            self.data[i * self.cols + j] = z;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(|z| z.conj()).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Conjugate transpose A†.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, z| acc + z,
        )
    }

    /// Hilbert–Schmidt inner product ⟨A, B⟩ = Tr[A†B].
    pub fn hs_inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "hs_inner shape mismatch"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entry magnitude, max_{ij} |A_{ij}|.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest entry magnitude of A − B.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff shape mismatch"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Induced 1-norm: maximum absolute column sum.
    pub fn one_norm(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.cols {
            let mut s = T::zero();
            for i in 0..self.rows {
                s += self.get(i, j).norm();
            }
            best = best.max(s);
        }
        best
    }

    pub fn scaled(&self, z: Complex<T>) -> Self {
        let data = self.data.iter().map(|&w| w * z).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scaled_re(&self, x: T) -> Self {
        self.scaled(Complex::new(x, T::zero()))
    }

    /// In-place A ← A + z·B.
    pub fn axpy(&mut self, z: Complex<T>, other: &Self) {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "axpy shape mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += z * b;
        }
    }

    /// Maximum |A_{ij} − conj(A_{ji})|, the Hermiticity deviation.
    pub fn hermiticity_deviation(&self) -> T {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Hermitian within relative tolerance `tol` (deviation ≤ tol·max|A|).
    pub fn is_hermitian(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        self.hermiticity_deviation() <= tol * self.max_abs()
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitize(&self) -> Self {
        let dag = self.dagger();
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + dag.get(i, j)) * Complex::new(real::<T>(0.5), T::zero())
        })
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }
}

impl<T: Scalar> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        let rmax = self.rows.min(8);
        let cmax = self.cols.min(8);
        for i in 0..rmax {
            write!(f, "  ")?;
            for j in 0..cmax {
                let z = &self.data[i * self.cols + j];
                write!(f, "{:?}+{:?}i ", z.re, z.im)?;
            }
            writeln!(f, "{}", if cmax < self.cols { "..." } else { "" })?;
        }
        if rmax < self.rows {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

// Serial work below this many fused multiply-adds; rayon above.
const PAR_FLOP_THRESHOLD: usize = 1 << 16;

fn matmul<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    assert_eq!(
        a.cols, b.rows,
        "matmul shape mismatch: {}x{} * {}x{}",
        a.rows, a.cols, b.rows, b.cols
    );
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; m * n];

    let row_kernel = |i: usize, orow: &mut [Complex<T>]| {
        for p in 0..k {
            let aip = a.data[i * k + p];
            // Operators assembled from Kronecker products are mostly zeros;
            // skipping them makes the big superoperator products cheap.
            if aip.re == T::zero() && aip.im == T::zero() {
                continue;
            }
            let brow = &b.data[p * n..(p + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                *o += aip * bv;
            }
        }
    };

    if m * k * n >= PAR_FLOP_THRESHOLD {
        out.par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, orow)| row_kernel(i, orow));
    } else {
        for (i, orow) in out.chunks_mut(n).enumerate() {
            row_kernel(i, orow);
        }
    }
    ComplexMatrix::from_parts(m, n, out)
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        matmul(self, rhs)
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(x, y)| x + y)
            .collect();
        ComplexMatrix::from_parts(self.rows, self.cols, data)
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(x, y)| x - y)
            .collect();
        ComplexMatrix::from_parts(self.rows, self.cols, data)
    }
}

impl<T: Scalar> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.scaled_re(-T::one())
    }
}

/// Kronecker product A ⊗ B.
pub fn kron<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.get(i, j);
            if aij.re == T::zero() && aij.im == T::zero() {
                continue;
            }
            for p in 0..br {
                let dst = (i * br + p) * (ac * bc) + j * bc;
                let src = p * bc;
                for q in 0..bc {
                    out.data[dst + q] = aij * b.data[src + q];
                }
            }
        }
    }
    out
}

/// Unnormalized maximally entangled vector |Γ⟩ = Σᵢ |i⟩|i⟩ as a d²×1 column.
pub fn gamma_vector<T: Scalar>(d: usize) -> ComplexMatrix<T> {
    let mut v = ComplexMatrix::zeros(d * d, 1);
    for i in 0..d {
        v.data[i * d + i] = Complex::new(T::one(), T::zero());
    }
    v
}

/// SWAP operator Σ_{ij} |i⟩⟨j| ⊗ |j⟩⟨i| on a d×d bipartite space.
pub fn swap_operator<T: Scalar>(d: usize) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(i * d + j, j * d + i, Complex::new(T::one(), T::zero()));
        }
    }
    m
}

/// Row-major vectorization |L⟩ = (L ⊗ I)|Γ⟩.
///
/// Component (j, i) of the output equals L_{ji}, i.e. the column vector is
/// the row-major flattening of L.
pub fn vectorize<T: Scalar>(l: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !l.is_square() {
        return Err(Error::NotSquare {
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    let d = l.rows();
    Ok(ComplexMatrix::from_parts(d * d, 1, l.data.clone()))
}

/// Inverse of [`vectorize`]: reshape a d²-entry column back into a d×d matrix.
pub fn devectorize<T: Scalar>(v: &ComplexMatrix<T>, d: usize) -> Result<ComplexMatrix<T>> {
    if v.cols() != 1 || v.rows() != d * d {
        return Err(Error::shape(format!(
            "expected a {}x1 column, got {}x{}",
            d * d,
            v.rows(),
            v.cols()
        )));
    }
    Ok(ComplexMatrix::from_parts(d, d, v.data.clone()))
}

/// Partial trace over the subsystems listed in `traced`.
pub fn partial_trace<T: Scalar>(
    a: &ComplexMatrix<T>,
    dims: &SubsystemDims,
    traced: &[usize],
) -> Result<ComplexMatrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != dims.total() {
        return Err(Error::shape(format!(
            "matrix dimension {} does not match subsystem product {}",
            a.rows(),
            dims.total()
        )));
    }
    let nsys = dims.dims().len();
    let mut is_traced = vec![false; nsys];
    for &t in traced {
        if t >= nsys {
            return Err(Error::arg(format!("subsystem index {t} out of range")));
        }
        if is_traced[t] {
            return Err(Error::arg(format!("subsystem index {t} repeated")));
        }
        is_traced[t] = true;
    }

    // Row strides of each subsystem in the flat index.
    let mut strides = vec![1usize; nsys];
    for i in (0..nsys.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims.dims()[i + 1];
    }
    let kept: Vec<usize> = (0..nsys).filter(|&i| !is_traced[i]).collect();
    let kept_dim: usize = kept.iter().map(|&i| dims.dims()[i]).product();
    let traced_list: Vec<usize> = (0..nsys).filter(|&i| is_traced[i]).collect();
    let traced_dim: usize = traced_list.iter().map(|&i| dims.dims()[i]).product();

    let flat = |multi_kept: usize, multi_traced: usize| -> usize {
        let mut idx = 0;
        let mut mk = multi_kept;
        for &s in kept.iter().rev() {
            idx += (mk % dims.dims()[s]) * strides[s];
            mk /= dims.dims()[s];
        }
        let mut mt = multi_traced;
        for &s in traced_list.iter().rev() {
            idx += (mt % dims.dims()[s]) * strides[s];
            mt /= dims.dims()[s];
        }
        idx
    };

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for kr in 0..kept_dim {
        for kc in 0..kept_dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for t in 0..traced_dim {
                acc += a.get(flat(kr, t), flat(kc, t));
            }
            out.set(kr, kc, acc);
        }
    }
    Ok(out)
}

/// Schatten exponent selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenP {
    /// Trace norm: sum of singular values.
    One,
    /// Frobenius norm.
    Two,
    /// Operator norm: largest singular value.
    Inf,
}

/// Schatten p-norm for p ∈ {1, 2, ∞}.
pub fn schatten_norm<T: Scalar>(a: &ComplexMatrix<T>, p: SchattenP) -> T {
    match p {
        SchattenP::Two => a.frobenius_norm(),
        SchattenP::Inf => {
            let herm_tol = crate::scaled_tol::<T>(1e-10);
            if a.is_square() && a.hermiticity_deviation() <= herm_tol * a.max_abs() {
                let vals = herm_eigvals(&a.hermitize()).expect("Hermitian eigvals");
                vals.iter().map(|v| v.abs()).fold(T::zero(), |x, y| x.max(y))
            } else {
                // λ_max(A†A) is accurate for the top singular value.
                let gram = &a.dagger() * a;
                let vals = herm_eigvals(&gram.hermitize()).expect("Gram eigvals");
                vals.first().copied().unwrap_or(T::zero()).max(T::zero()).sqrt()
            }
        }
        SchattenP::One => {
            let herm_tol = crate::scaled_tol::<T>(1e-10);
            if a.is_square() && a.hermiticity_deviation() <= herm_tol * a.max_abs() {
                let vals = herm_eigvals(&a.hermitize()).expect("Hermitian eigvals");
                vals.iter().map(|v| v.abs()).fold(T::zero(), |x, y| x + y)
            } else {
                singular_values(a).iter().fold(T::zero(), |x, &y| x + y)
            }
        }
    }
}

/// Singular values in descending order.
///
/// Computed from the Hermitian embedding [[0, A], [A†, 0]], whose spectrum is
/// ±σᵢ plus padding zeros; this avoids the accuracy loss of squaring into
/// A†A for the small singular values.
pub fn singular_values<T: Scalar>(a: &ComplexMatrix<T>) -> Vec<T> {
    let (m, n) = (a.rows(), a.cols());
    let k = m + n;
    let mut h = ComplexMatrix::zeros(k, k);
    for i in 0..m {
        for j in 0..n {
            let z = a.get(i, j);
            h.set(i, m + j, z);
            h.set(m + j, i, z.conj());
        }
    }
    let vals = herm_eigvals(&h).expect("Hermitian embedding eigvals");
    vals.into_iter()
        .take(m.min(n))
        .map(|v| v.max(T::zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, Mat64};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_matrix(d: usize, rng: &mut ChaCha8Rng) -> Mat64 {
        Mat64::from_fn(d, d, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    fn pauli_x() -> Mat64 {
        Mat64::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn kron_identity_case() {
        let i2 = Mat64::identity(2);
        let i4 = kron(&i2, &i2);
        assert_eq!(i4.rows(), 4);
        assert!(i4.max_abs_diff(&Mat64::identity(4)) == 0.0);
    }

    #[test]
    fn kron_on_gamma_matches_vectorize() {
        // (X ⊗ I)|Γ⟩ = |X⟩ for Pauli X.
        let x = pauli_x();
        let lhs = &kron(&x, &Mat64::identity(2)) * &gamma_vector(2);
        let rhs = vectorize(&x).unwrap();
        assert!(lhs.max_abs_diff(&rhs) == 0.0);
    }

    #[test]
    fn kron_vectorize_compatibility() {
        // kron(A, Bᵀ)·vec(C) = vec(A·C·B), the convention every module uses.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=6 {
            let a = random_matrix(d, &mut rng);
            let b = random_matrix(d, &mut rng);
            let c = random_matrix(d, &mut rng);
            let lhs = &kron(&a, &b.transpose()) * &vectorize(&c).unwrap();
            let rhs = vectorize(&(&(&a * &c) * &b)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-11);
        }
    }

    #[test]
    fn kron_vec_identity_against_triple_product() {
        // kron(A, B)·vec(C) = vec(A·C·Bᵀ) for random 3x3 inputs.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(3, &mut rng);
        let b = random_matrix(3, &mut rng);
        let c = random_matrix(3, &mut rng);
        let lhs = &kron(&a, &b) * &vectorize(&c).unwrap();
        let rhs = vectorize(&(&(&a * &c) * &b.transpose())).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn vectorize_round_trip_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = random_matrix(4, &mut rng);
        let v = vectorize(&l).unwrap();
        let back = devectorize(&v, 4).unwrap();
        assert!(back.max_abs_diff(&l) == 0.0);
        // ⟨L|L⟩ = ‖L‖₂².
        let ip = v.hs_inner(&v).re;
        assert_abs_diff_eq!(ip, l.frobenius_norm().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn vectorize_identity_is_gamma() {
        for d in 2..=4 {
            let v = vectorize(&Mat64::identity(d)).unwrap();
            assert!(v.max_abs_diff(&gamma_vector(d)) == 0.0);
        }
    }

    #[test]
    fn gamma_norm_is_dimension() {
        for d in 2..=4 {
            let g = gamma_vector::<f64>(d);
            assert_abs_diff_eq!(g.hs_inner(&g).re, d as f64, epsilon = 0.0);
        }
    }

    #[test]
    fn swap_is_involutory_and_acts_on_basis() {
        for d in 2..=3 {
            let s = swap_operator::<f64>(d);
            let s2 = &s * &s;
            assert!(s2.max_abs_diff(&Mat64::identity(d * d)) == 0.0);
        }
        // SWAP(|0⟩⊗|1⟩) = |1⟩⊗|0⟩.
        let s = swap_operator::<f64>(2);
        let v01 = kron(&Mat64::basis_column(2, 0), &Mat64::basis_column(2, 1));
        let v10 = kron(&Mat64::basis_column(2, 1), &Mat64::basis_column(2, 0));
        assert!((&s * &v01).max_abs_diff(&v10) == 0.0);
    }

    #[test]
    fn partial_trace_product_state() {
        // Tr₂[ρ ⊗ π] = ρ when Tr π = 1.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(2, &mut rng);
        let mut pi = random_matrix(4, &mut rng);
        let tr = pi.trace();
        pi = pi.scaled(C64::new(1.0, 0.0) / tr);
        let joint = kron(&a, &pi);
        let dims = SubsystemDims::new(vec![2, 4]).unwrap();
        let red = partial_trace(&joint, &dims, &[1]).unwrap();
        assert!(red.max_abs_diff(&a) <= 1e-14);
    }

    #[test]
    fn partial_trace_maximally_entangled_marginal() {
        for d in 2..=3 {
            let g = gamma_vector::<f64>(d);
            let proj = &g * &g.dagger();
            let dims = SubsystemDims::new(vec![d, d]).unwrap();
            let marg = partial_trace(&proj.scaled_re(1.0 / d as f64), &dims, &[1]).unwrap();
            assert!(marg.max_abs_diff(&Mat64::identity(d).scaled_re(1.0 / d as f64)) <= 1e-15);
        }
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(12, &mut rng);
        let dims = SubsystemDims::new(vec![3, 4]).unwrap();
        for traced in [vec![0], vec![1], vec![0, 1]] {
            let red = partial_trace(&a, &dims, &traced).unwrap();
            let t = red.trace();
            assert_abs_diff_eq!(t.re, a.trace().re, epsilon = 1e-12);
            assert_abs_diff_eq!(t.im, a.trace().im, epsilon = 1e-12);
        }
    }

    #[test]
    fn subsystem_labels() {
        let dims = SubsystemDims::with_labels(
            vec![2, 2, 4],
            vec!["1".into(), "2".into(), "3".into()],
        )
        .unwrap();
        assert_eq!(dims.total(), 16);
        assert_eq!(dims.labels().unwrap()[2], "3");
        assert!(SubsystemDims::with_labels(vec![2], vec![]).is_err());
        assert!(SubsystemDims::new(vec![2, 0]).is_err());
    }

    #[test]
    fn partial_trace_rejects_bad_inputs() {
        let a = Mat64::identity(6);
        let dims = SubsystemDims::new(vec![2, 2]).unwrap();
        assert!(partial_trace(&a, &dims, &[0]).is_err());
        let dims = SubsystemDims::new(vec![2, 3]).unwrap();
        assert!(partial_trace(&a, &dims, &[2]).is_err());
    }

    #[test]
    fn schatten_norms_on_diagonals() {
        let m = Mat64::diag(&[C64::new(3.0, 0.0), C64::new(-4.0, 0.0)]);
        assert_abs_diff_eq!(schatten_norm(&m, SchattenP::One), 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(schatten_norm(&m, SchattenP::Inf), 4.0, epsilon = 1e-12);
        let id = Mat64::identity(5);
        assert_abs_diff_eq!(
            schatten_norm(&id, SchattenP::Two),
            5.0_f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn schatten_norm_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let g = random_matrix(5, &mut rng);
            let n_inf = schatten_norm(&g, SchattenP::Inf);
            let n_2 = schatten_norm(&g, SchattenP::Two);
            let n_1 = schatten_norm(&g, SchattenP::One);
            assert!(n_inf <= n_2 + 1e-12);
            assert!(n_2 <= n_1 + 1e-12);
        }
    }

    #[test]
    fn singular_values_match_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = random_matrix(6, &mut rng);
        let sv = singular_values(&g);
        let fro_sq: f64 = sv.iter().map(|s| s * s).sum();
        assert_abs_diff_eq!(fro_sq, g.frobenius_norm().powi(2), epsilon = 1e-10);
        assert!(sv.windows(2).all(|w| w[0] >= w[1] - 1e-14));
    }

    #[test]
    fn constructors_reject_non_finite() {
        let bad = vec![C64::new(f64::NAN, 0.0)];
        assert!(Mat64::new(1, 1, bad).is_err());
        assert!(Mat64::new(2, 2, vec![C64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_matrix(3, &mut rng).scaled_re(0.5);
        let mut expected = Mat64::identity(3);
        for _ in 0..7 {
            expected = &expected * &a;
        }
        assert!(a.pow(7).max_abs_diff(&expected) <= 1e-12);
        assert!(a.pow(0).max_abs_diff(&Mat64::identity(3)) == 0.0);
    }
}
