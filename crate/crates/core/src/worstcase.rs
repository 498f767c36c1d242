// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Rank-one adversarial construction.
//!
//! For L = |u⟩⟨u| the exact dynamics fix |u⟩⟨u|, while span{|u⟩⟨u|, I} is
//! invariant under the one-step channel: with s = a + b and κ = c/d the
//! coefficient vector evolves by
//!
//! ```text
//! M_Δ = [[1+s, s], [κ, 1+κ]],   (y_0, z_0) = (1, 0),
//! (y_n, z_n) = (κ + s·λⁿ, κ(λⁿ − 1)) / (λ − 1),   λ = 1 + s + κ.
//! ```
//!
//! The residual z_n ≈ t²/4n drives the dimension-linear sample-complexity
//! floor: the simulated state keeps trace distance ≥ (d−1)/2·z_n from the
//! stationary target.

use crate::lindblad::{DensityMatrix, JumpOperator};
use crate::tensor::{ComplexMatrix, Scalar};
use crate::wml::{n_step_channel, transfer_coeffs, SimulationParams, WmlStepMethod};
use crate::{real, Error, Result};

/// Channel coefficients specialized to the rank-one jump operator.
#[derive(Debug, Clone, Copy)]
pub struct RankOneCoeffs<T> {
    pub d: usize,
    pub delta: T,
    pub a: T,
    pub b: T,
    pub c: T,
    /// s = a + b.
    pub s: T,
    /// κ = c/d.
    pub kappa: T,
    /// λ = 1 + s + κ.
    pub lambda: T,
}

/// Closed-form trajectory points (n, y_n, z_n) over a step-count grid at
/// fixed total time.
#[derive(Debug, Clone)]
pub struct RankOneTrajectory<T> {
    pub d: usize,
    pub t: T,
    pub points: Vec<(u64, T, T)>,
}

/// Result of the full-simulator cross-check.
#[derive(Debug, Clone)]
pub struct RankOneSim<T> {
    pub state: DensityMatrix<T>,
    /// Projection coefficients of the final state on {|u⟩⟨u|, I}.
    pub y: T,
    pub z: T,
    /// max(|y − y_n|, |z − z_n|) against the closed form.
    pub coeff_deviation: T,
    /// Frobenius norm of the component outside span{|u⟩⟨u|, I}.
    pub off_space_residual: T,
}

/// Evaluates (a, b, c, s, κ, λ) at the given dimension and step.
pub fn rankone_coeffs<T: Scalar>(d: usize, delta: T) -> Result<RankOneCoeffs<T>> {
    if d < 2 {
        return Err(Error::arg("rank-one coefficients require d >= 2"));
    }
    let tc = transfer_coeffs(d, delta)?;
    let s = tc.a + tc.b;
    let kappa = tc.c / real::<T>(d as f64);
    Ok(RankOneCoeffs {
        d,
        delta,
        a: tc.a,
        b: tc.b,
        c: tc.c,
        s,
        kappa,
        lambda: T::one() + s + kappa,
    })
}

fn crealify<T: Scalar>(x: T) -> num_complex::Complex<T> {
    num_complex::Complex::new(x, T::zero())
}

/// Iterates M_Δ n times from (1, 0); the independent oracle for
/// [`closed_form_yz`] and the fallback at λ = 1.
pub fn recurrence_yz<T: Scalar>(coeffs: &RankOneCoeffs<T>, n: u64) -> (T, T) {
    let mut y = T::one();
    let mut z = T::zero();
    for _ in 0..n {
        let ny = (T::one() + coeffs.s) * y + coeffs.s * z;
        let nz = coeffs.kappa * y + (T::one() + coeffs.kappa) * z;
        y = ny;
        z = nz;
    }
    (y, z)
}

/// Closed-form (y_n, z_n); falls back to the recurrence when λ − 1
/// underflows.
pub fn closed_form_yz<T: Scalar>(coeffs: &RankOneCoeffs<T>, n: u64) -> (T, T) {
    // λ − 1 = s + κ, computed without the cancellation of (1 + s + κ) − 1.
    let lam_m1 = coeffs.s + coeffs.kappa;
    if lam_m1.abs() <= real::<T>(1e3) * T::epsilon() {
        return recurrence_yz(coeffs, n);
    }
    let lam_pow = if n <= i32::MAX as u64 {
        coeffs.lambda.powi(n as i32)
    } else {
        coeffs.lambda.powf(real::<T>(n as f64))
    };
    let y = (coeffs.kappa + coeffs.s * lam_pow) / lam_m1;
    let z = coeffs.kappa * (lam_pow - T::one()) / lam_m1;
    (y, z)
}

/// Leading-order residual t²/(4n).
pub fn zn_asymptotic<T: Scalar>(t: T, n: u64) -> T {
    t * t / (real::<T>(4.0) * real::<T>(n as f64))
}

/// Trace-distance floor (d−1)/2 · z_n.
pub fn trace_distance_lb<T: Scalar>(d: usize, z_n: T) -> T {
    real::<T>((d - 1) as f64) / real::<T>(2.0) * z_n
}

/// Closed-form trajectory over a step-count grid at fixed total time: entry
/// n uses Δ = t/n and n applications.
pub fn rankone_trajectory<T: Scalar>(
    d: usize,
    t: T,
    n_grid: &[u64],
) -> Result<RankOneTrajectory<T>> {
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n == 0 {
            return Err(Error::arg("step counts must be positive"));
        }
        let coeffs = rankone_coeffs(d, t / real::<T>(n as f64))?;
        let (y, z) = closed_form_yz(&coeffs, n);
        points.push((n, y, z));
    }
    Ok(RankOneTrajectory { d, t, points })
}

/// Smallest n for which the simulated state reaches trace distance ≤ ε from
/// the stationary target; the distance is (d−1)·z_n exactly on the invariant
/// span.
pub fn steps_to_reach<T: Scalar>(d: usize, t: T, eps: T) -> Result<u64> {
    if eps <= T::zero() {
        return Err(Error::arg("target error must be positive"));
    }
    let error_at = |n: u64| -> Result<T> {
        let coeffs = rankone_coeffs(d, t / real::<T>(n as f64))?;
        let (_, z) = closed_form_yz(&coeffs, n);
        Ok(real::<T>((d - 1) as f64) * z)
    };
    let mut hi = 1u64;
    while error_at(hi)? > eps {
        hi = hi.checked_mul(2).ok_or_else(|| Error::arg("step search overflow"))?;
    }
    if hi == 1 {
        return Ok(1);
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if error_at(mid)? > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Runs the full n-step channel on ρ₀ = |u⟩⟨u| with L = |u⟩⟨u| (u the first
/// basis vector) and projects the result onto span{|u⟩⟨u|, I}.
pub fn simulate_rankone<T: Scalar>(
    d: usize,
    t: T,
    n: u64,
    method: WmlStepMethod,
) -> Result<RankOneSim<T>> {
    let l = JumpOperator::new(ComplexMatrix::matrix_unit(d, 0, 0))?;
    let params = SimulationParams::new(d, t, n)?;
    let channel = n_step_channel(&l, &params, method)?;
    let rho0 = ComplexMatrix::matrix_unit(d, 0, 0);
    let rho = channel.apply(&rho0)?;

    // Gram solve on {P, I}: ⟨P,P⟩ = 1, ⟨P,I⟩ = 1, ⟨I,I⟩ = d.
    let p_overlap = rho.get(0, 0).re;
    let tr = rho.trace().re;
    let denom = real::<T>((d - 1) as f64);
    let y = (real::<T>(d as f64) * p_overlap - tr) / denom;
    let z = (tr - p_overlap) / denom;

    let mut residual = rho.clone();
    residual.axpy(crealify(-y), &rho0);
    residual.axpy(crealify(-z), &ComplexMatrix::identity(d));
    let off_space_residual = residual.frobenius_norm();

    let coeffs = rankone_coeffs(d, params.delta())?;
    let (y_cf, z_cf) = closed_form_yz(&coeffs, n);
    let coeff_deviation = (y - y_cf).abs().max((z - z_cf).abs());

    let state = DensityMatrix::with_psd_tolerance(rho, real::<T>(1e-9))?;
    Ok(RankOneSim {
        state,
        y,
        z,
        coeff_deviation,
        off_space_residual,
    })
}
