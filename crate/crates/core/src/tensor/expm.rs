// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by diagonal Padé approximants with scaling and
//! squaring, order selected from the 1-norm (Higham's method).

use num_complex::Complex;
use rayon::prelude::*;

use super::{ComplexMatrix, Scalar};
use crate::{creal, Error, Result};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential e^A of a square complex matrix.
pub fn mat_exp<T: Scalar>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }

    let norm = a.one_norm().to_f64().unwrap_or(f64::INFINITY);
    if !norm.is_finite() {
        return Err(Error::arg("matrix 1-norm overflow in mat_exp"));
    }

    if norm <= THETA_3 {
        return pade(a, &PADE_3, 1);
    }
    if norm <= THETA_5 {
        return pade(a, &PADE_5, 2);
    }
    if norm <= THETA_7 {
        return pade(a, &PADE_7, 3);
    }
    if norm <= THETA_9 {
        return pade(a, &PADE_9, 4);
    }

    let s = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
    let scaled = a.scaled(creal(0.5f64.powi(s as i32)));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// Diagonal Padé approximant with numerator/denominator coefficients `b`;
/// `npow` is the number of even powers (A², A⁴, …) needed.
fn pade<T: Scalar>(a: &ComplexMatrix<T>, b: &[f64], npow: usize) -> Result<ComplexMatrix<T>> {
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let mut powers: Vec<ComplexMatrix<T>> = Vec::with_capacity(npow);
    let a2 = a * a;
    powers.push(a2);
    for _ in 1..npow {
        let next = powers.last().unwrap() * &powers[0];
        powers.push(next);
    }

    // U = A·(Σ b_{2k+1} A^{2k}),  V = Σ b_{2k} A^{2k}
    let mut u_inner = id.scaled(creal(b[1]));
    let mut v = id.scaled(creal(b[0]));
    for (k, p) in powers.iter().enumerate() {
        u_inner.axpy(creal(b[2 * k + 3]), p);
        v.axpy(creal(b[2 * k + 2]), p);
    }
    let u = a * &u_inner;
    // (V − U)·X = (V + U)
    solve(&(&v - &u), &(&v + &u))
}

fn pade13<T: Scalar>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let b = &PADE_13;
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    // U = A·(A⁶·(b₁₃A⁶ + b₁₁A⁴ + b₉A²) + b₇A⁶ + b₅A⁴ + b₃A² + b₁I)
    let mut w1 = a6.scaled(creal(b[13]));
    w1.axpy(creal(b[11]), &a4);
    w1.axpy(creal(b[9]), &a2);
    let mut w = &a6 * &w1;
    w.axpy(creal(b[7]), &a6);
    w.axpy(creal(b[5]), &a4);
    w.axpy(creal(b[3]), &a2);
    w.axpy(creal(b[1]), &id);
    let u = a * &w;

    // V = A⁶·(b₁₂A⁶ + b₁₀A⁴ + b₈A²) + b₆A⁶ + b₄A⁴ + b₂A² + b₀I
    let mut z1 = a6.scaled(creal(b[12]));
    z1.axpy(creal(b[10]), &a4);
    z1.axpy(creal(b[8]), &a2);
    let mut v = &a6 * &z1;
    v.axpy(creal(b[6]), &a6);
    v.axpy(creal(b[4]), &a4);
    v.axpy(creal(b[2]), &a2);
    v.axpy(creal(b[0]), &id);

    solve(&(&v - &u), &(&v + &u))
}

/// Solves A·X = B by Gaussian elimination with partial pivoting.
fn solve<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = a.rows();
    assert!(a.is_square() && b.rows() == n, "solve shape mismatch");
    let m = b.cols();
    let mut lu = a.clone();
    let mut rhs = b.clone();

    for k in 0..n {
        // Partial pivot.
        let mut piv = k;
        let mut best = lu.get(k, k).norm();
        for i in k + 1..n {
            let mag = lu.get(i, k).norm();
            if mag > best {
                best = mag;
                piv = i;
            }
        }
        if best == T::zero() {
            return Err(Error::SingularSystem);
        }
        if piv != k {
            for j in 0..n {
                let t = lu.get(k, j);
                lu.set(k, j, lu.get(piv, j));
                lu.set(piv, j, t);
            }
            for j in 0..m {
                let t = rhs.get(k, j);
                rhs.set(k, j, rhs.get(piv, j));
                rhs.set(piv, j, t);
            }
        }

        let pivot = lu.get(k, k);
        let lu_row_k: Vec<Complex<T>> = lu.row(k)[k..].to_vec();
        let rhs_row_k: Vec<Complex<T>> = rhs.row(k).to_vec();
        let eliminate = |lu_row: &mut [Complex<T>], rhs_row: &mut [Complex<T>]| {
            let factor = lu_row[k] / pivot;
            if factor.re == T::zero() && factor.im == T::zero() {
                return;
            }
            lu_row[k] = factor;
            for (x, &y) in lu_row[k + 1..].iter_mut().zip(lu_row_k[1..].iter()) {
                *x -= factor * y;
            }
            for (x, &y) in rhs_row.iter_mut().zip(rhs_row_k.iter()) {
                *x -= factor * y;
            }
        };

        let remaining = n - k - 1;
        if remaining * (n - k + m) >= 1 << 15 {
            let lu_tail = &mut lu.data_mut()[(k + 1) * n..];
            let rhs_tail = &mut rhs.data_mut()[(k + 1) * m..];
            lu_tail
                .par_chunks_mut(n)
                .zip(rhs_tail.par_chunks_mut(m))
                .for_each(|(lrow, rrow)| eliminate(lrow, rrow));
        } else {
            for i in k + 1..n {
                let lrow = &mut lu.data_mut()[i * n..(i + 1) * n];
                let rrow = &mut rhs.data_mut()[i * m..(i + 1) * m];
                eliminate(lrow, rrow);
            }
        }
    }

    // Back substitution, bottom row up.
    let mut x = rhs;
    for i in (0..n).rev() {
        let (head, tail) = x.data_mut().split_at_mut((i + 1) * m);
        let xi = &mut head[i * m..];
        for j in i + 1..n {
            let lij = lu.get(i, j);
            if lij.re == T::zero() && lij.im == T::zero() {
                continue;
            }
            let xj = &tail[(j - i - 1) * m..(j - i) * m];
            for (a, &b) in xi.iter_mut().zip(xj.iter()) {
                *a -= lij * b;
            }
        }
        let diag = lu.get(i, i);
        for a in xi.iter_mut() {
            *a /= diag;
        }
    }
    Ok(x)
}
