// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Wave matrix Lindbladization.
//!
//! The one-step channel is `ρ ↦ Tr₂₃[e^{𝓜Δ}(ρ ⊗ π_L)]`, where the program
//! state `π_L = |L⟩⟨L|` encodes the jump operator and
//!
//! ```text
//! 𝓜(ω) = M ω M† − ½{M†M, ω},
//! M    = (1/√d)(I₁ ⊗ |Γ⟩⟨Γ|₂₃)(SWAP₁₂ ⊗ I₃).
//! ```
//!
//! Three interchangeable realizations are provided: brute-force
//! exponentiation of the d⁶×d⁶ generator, the analytic closed form obtained
//! from the 5×5 transfer matrix `T` acting on the superoperator family
//! 𝓢₀…𝓢₄, and the single-ancilla Stinespring isometry. Their agreement is
//! the library's central oracle.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;

use crate::lindblad::{depolarizing_superop, dissipator_superop, JumpOperator, Superoperator};
use crate::tensor::{
    devectorize, gamma_vector, kron, mat_exp, partial_trace, swap_operator, vectorize,
    ComplexMatrix, Scalar, SubsystemDims,
};
use crate::{creal, real, Error, Result};

/// Realization of the one-step WML channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmlStepMethod {
    /// Exponentiate the d⁶×d⁶ generator 𝓜 and trace out the program.
    BruteForce,
    /// Closed form from the first row of e^{TΔ}; requires d ≥ 2.
    Analytic,
    /// Kraus pair of the single-ancilla dilation; requires Δ ≤ 4/d.
    Stinespring,
}

impl fmt::Display for WmlStepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WmlStepMethod::BruteForce => "brute-force",
            WmlStepMethod::Analytic => "analytic",
            WmlStepMethod::Stinespring => "stinespring",
        };
        f.write_str(s)
    }
}

impl FromStr for WmlStepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brute-force" | "bruteforce" | "brute" => Ok(WmlStepMethod::BruteForce),
            "analytic" => Ok(WmlStepMethod::Analytic),
            "stinespring" => Ok(WmlStepMethod::Stinespring),
            other => Err(Error::arg(format!("unknown step method '{other}'"))),
        }
    }
}

/// First row of e^{TΔ} and the derived channel coefficients.
///
/// With d′ = d − 1/d:
///
/// ```text
/// c01 = −(e^{−Δd′} − 1)/d′          c02 = (e^{−Δd/2} − 1)/(d/2)
/// c03 = 2(c01 + c02)/(d² − 2)       c04 = −d²(c01 + c02)/(d² − 2)
/// a = c02,  b = (2c02 + d²c01)/(d² − 2),  c = c04
/// ```
#[derive(Debug, Clone, Copy)]
pub struct TransferCoeffs<T> {
    pub d: usize,
    pub delta: T,
    pub d_prime: T,
    pub c01: T,
    pub c02: T,
    pub c03: T,
    pub c04: T,
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Simulation grid parameters: total time t split into n steps of Δ = t/n.
#[derive(Debug, Clone, Copy)]
pub struct SimulationParams<T> {
    pub d: usize,
    pub t: T,
    pub n: u64,
}

impl<T: Scalar> SimulationParams<T> {
    pub fn new(d: usize, t: T, n: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::arg("dimension must be at least 2"));
        }
        if t < T::zero() {
            return Err(Error::arg("total time must be nonnegative"));
        }
        if n == 0 {
            return Err(Error::arg("step count must be at least 1"));
        }
        Ok(SimulationParams { d, t, n })
    }

    pub fn delta(&self) -> T {
        self.t / real::<T>(self.n as f64)
    }

    /// Whether n > 2dt holds; recorded, not enforced.
    pub fn step_bound_satisfied(&self) -> bool {
        real::<T>(self.n as f64) > real::<T>(2.0 * self.d as f64) * self.t
    }
}

/// The WML jump operator M = (1/√d)(I ⊗ |Γ⟩⟨Γ|)(SWAP ⊗ I), a d³×d³ matrix
/// on systems 1 ⊗ 2 ⊗ 3.
pub fn m_operator<T: Scalar>(d: usize) -> ComplexMatrix<T> {
    let id = ComplexMatrix::identity(d);
    let g = gamma_vector::<T>(d);
    let gg = &g * &g.dagger();
    let left = kron(&id, &gg);
    let right = kron(&swap_operator(d), &id);
    (&left * &right).scaled_re(T::one() / real::<T>(d as f64).sqrt())
}

/// The d⁶×d⁶ superoperator of 𝓜(ω) = MωM† − ½{M†M, ω}.
///
/// Supported for d ∈ {2, 3, 4}; the d = 4 case is a 4096×4096 matrix.
pub fn wml_generator_superop<T: Scalar>(d: usize) -> Result<Superoperator<T>> {
    if !(2..=4).contains(&d) {
        return Err(Error::arg(format!(
            "generator supported for d in 2..=4, got {d}"
        )));
    }
    let m = JumpOperator::new(m_operator::<T>(d))?;
    Ok(dissipator_superop(&m))
}

/// The closed superoperator family 𝓢₀…𝓢₄ (each d⁶×d⁶), for d ∈ {2, 3}:
///
/// ```text
/// 𝓢₀ = ρ,  𝓢₁ = MρM†,  𝓢₂ = ½{M†M, ρ},
/// 𝓢₃ = (√d/2)(M†MρM† + MρM†M),  𝓢₄ = (1/d)M†MρM†M.
/// ```
pub fn s_superops<T: Scalar>(d: usize) -> Result<Vec<Superoperator<T>>> {
    if !(2..=3).contains(&d) {
        return Err(Error::arg(format!(
            "superoperator family supported for d in 2..=3, got {d}"
        )));
    }
    let m = m_operator::<T>(d);
    let mdag = m.dagger();
    let mdm = &mdag * &m;
    let id = ComplexMatrix::identity(d * d * d);

    let s0 = ComplexMatrix::identity(d.pow(6));
    let s1 = kron(&m, &m.conj());
    let mut s2 = kron(&mdm, &id);
    s2.axpy(creal(1.0), &kron(&id, &mdm.transpose()));
    let s2 = s2.scaled_re(real::<T>(0.5));
    let mut s3 = kron(&mdm, &m.conj());
    s3.axpy(creal(1.0), &kron(&m, &mdm.transpose()));
    let s3 = s3.scaled_re(real::<T>(d as f64).sqrt() / real::<T>(2.0));
    let s4 = kron(&mdm, &mdm.transpose()).scaled_re(T::one() / real::<T>(d as f64));

    [s0, s1, s2, s3, s4]
        .into_iter()
        .enumerate()
        .map(|(k, mat)| Superoperator::new(mat, format!("S{k}")))
        .collect()
}

/// The 5×5 transfer matrix T with 𝓜𝓢_k = Σ_j T_{kj} 𝓢_j.
pub fn transfer_matrix<T: Scalar>(d: usize) -> ComplexMatrix<T> {
    let dd = d as f64;
    let rows: [[f64; 5]; 5] = [
        [0.0, 1.0, -1.0, 0.0, 0.0],
        [0.0, 1.0 / dd, 0.0, -1.0 / dd, 0.0],
        [0.0, dd, -dd / 2.0, 0.0, -dd / 2.0],
        [0.0, dd, 0.0, -dd / 2.0, -dd / 2.0],
        [0.0, dd, 0.0, 0.0, -dd],
    ];
    ComplexMatrix::from_fn(5, 5, |i, j| creal(rows[i][j]))
}

/// Closed-form evaluation of the first row of e^{TΔ} and the channel
/// coefficients (a, b, c).
pub fn transfer_coeffs<T: Scalar>(d: usize, delta: T) -> Result<TransferCoeffs<T>> {
    if d < 2 {
        return Err(Error::arg("transfer coefficients require d >= 2"));
    }
    if delta < T::zero() {
        return Err(Error::arg("step size must be nonnegative"));
    }
    let dd = real::<T>(d as f64);
    let d_prime = dd - T::one() / dd;
    let dsq_m2 = dd * dd - real::<T>(2.0);

    // exp_m1 keeps the small-Δ regime accurate.
    let c01 = -(-delta * d_prime).exp_m1() / d_prime;
    let c02 = (-delta * dd / real::<T>(2.0)).exp_m1() / (dd / real::<T>(2.0));
    let sum = c01 + c02;
    let c03 = real::<T>(2.0) * sum / dsq_m2;
    let c04 = -(dd * dd) * sum / dsq_m2;
    let a = c02;
    let b = (real::<T>(2.0) * c02 + dd * dd * c01) / dsq_m2;
    let c = c04;
    Ok(TransferCoeffs {
        d,
        delta,
        d_prime,
        c01,
        c02,
        c03,
        c04,
        a,
        b,
        c,
    })
}

/// π_L = |L⟩⟨L| on the d×d program space.
pub fn program_projector<T: Scalar>(l: &JumpOperator<T>) -> ComplexMatrix<T> {
    let v = vectorize(l.matrix()).expect("jump operators are square");
    &v * &v.dagger()
}

/// Channel step Δ(δ) = 2(1 − cos√(δd))/d realized by the isometry parameter δ.
pub fn step_from_isometry_param<T: Scalar>(d: usize, delta_param: T) -> T {
    let dd = real::<T>(d as f64);
    let theta = (delta_param * dd).sqrt();
    real::<T>(2.0) * (T::one() - theta.cos()) / dd
}

/// Inverse of [`step_from_isometry_param`] on the principal branch
/// √(δd) = arccos(1 − Δd/2); fails for Δ outside [0, 4/d].
pub fn isometry_param_from_step<T: Scalar>(d: usize, delta: T) -> Result<T> {
    let dd = real::<T>(d as f64);
    if delta < T::zero() || delta > real::<T>(4.0) / dd {
        return Err(Error::arg(format!(
            "step {} outside the Stinespring range [0, {}]",
            delta,
            4.0 / d as f64
        )));
    }
    let theta = (T::one() - delta * dd / real::<T>(2.0)).acos();
    Ok(theta * theta / dd)
}

/// Kraus pair of the dilation at block angle θ = √(δd):
/// A = I − ((1 − cos θ)/d)·M†M and B = −i(sin θ/√d)·M.
fn stinespring_kraus<T: Scalar>(d: usize, theta: T) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let dd = real::<T>(d as f64);
    let m = m_operator::<T>(d);
    let mdm = &m.dagger() * &m;
    let mut a = ComplexMatrix::identity(d * d * d);
    a.axpy(
        Complex::new(-(T::one() - theta.cos()) / dd, T::zero()),
        &mdm,
    );
    let b = m.scaled(Complex::new(T::zero(), -theta.sin() / dd.sqrt()));
    (a, b)
}

/// One step of WML as a d²×d² channel on system 1.
pub fn one_step_superop<T: Scalar>(
    l: &JumpOperator<T>,
    delta: T,
    method: WmlStepMethod,
) -> Result<Superoperator<T>> {
    l.require_normalized()?;
    if delta < T::zero() {
        return Err(Error::arg("step size must be nonnegative"));
    }
    let d = l.dim();
    if d < 2 {
        return Err(Error::arg("dimension must be at least 2"));
    }

    match method {
        WmlStepMethod::Analytic => {
            let tc = transfer_coeffs(d, delta)?;
            Ok(analytic_step(l, &tc))
        }
        WmlStepMethod::BruteForce => {
            if d > 3 {
                return Err(Error::arg("brute-force step restricted to d <= 3"));
            }
            let e = cached_generator_exp::<T>(d, delta)?;
            reduce_to_system1(d, l, "wml-step-brute-force", |omega| {
                let w = &*e * &vectorize(omega).expect("omega is square");
                devectorize(&w, d * d * d).expect("vector length")
            })
        }
        WmlStepMethod::Stinespring => {
            let dd = real::<T>(d as f64);
            if delta > real::<T>(4.0) / dd {
                return Err(Error::arg(format!(
                    "step {} exceeds the Stinespring maximum 4/d = {}",
                    delta,
                    4.0 / d as f64
                )));
            }
            let theta = (T::one() - delta * dd / real::<T>(2.0)).acos();
            let (a, b) = stinespring_kraus(d, theta);
            reduce_to_system1(d, l, "wml-step-stinespring", |omega| {
                let mut out = &(&a * omega) * &a.dagger();
                out.axpy(creal(1.0), &(&(&b * omega) * &b.dagger()));
                out
            })
        }
    }
}

/// The analytic one-step channel
/// ρ + a·½{L†L, ρ} + b·LρL† + c·𝓓₁[LρL†].
fn analytic_step<T: Scalar>(l: &JumpOperator<T>, tc: &TransferCoeffs<T>) -> Superoperator<T> {
    let d = l.dim();
    let lm = l.matrix();
    let ldl = &lm.dagger() * lm;
    let id = ComplexMatrix::identity(d);

    let jump = kron(lm, &lm.conj());
    let mut anti = kron(&ldl, &id);
    anti.axpy(creal(1.0), &kron(&id, &ldl.transpose()));
    let anti = anti.scaled_re(real::<T>(0.5));
    let depol_jump = depolarizing_superop::<T>(d).matrix() * &jump;

    let mut s = ComplexMatrix::identity(d * d);
    s.axpy(Complex::new(tc.a, T::zero()), &anti);
    s.axpy(Complex::new(tc.b, T::zero()), &jump);
    s.axpy(Complex::new(tc.c, T::zero()), &depol_jump);
    Superoperator::new(s, "wml-step-analytic").expect("square by construction")
}

/// Builds the channel on system 1 by pushing each matrix unit through the
/// given d³-level map and tracing out the program systems.
fn reduce_to_system1<T: Scalar>(
    d: usize,
    l: &JumpOperator<T>,
    tag: &str,
    apply: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
) -> Result<Superoperator<T>> {
    let pi = program_projector(l);
    let dims = SubsystemDims::new(vec![d, d, d])?;
    let mut sup = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let omega = kron(&ComplexMatrix::matrix_unit(d, i, j), &pi);
            let out = apply(&omega);
            let reduced = partial_trace(&out, &dims, &[1, 2])?;
            sup.set_column(i * d + j, vectorize(&reduced)?.data());
        }
    }
    Superoperator::new(sup, tag)
}

/// n-fold composition of the one-step channel.
pub fn n_step_channel<T: Scalar>(
    l: &JumpOperator<T>,
    params: &SimulationParams<T>,
    method: WmlStepMethod,
) -> Result<Superoperator<T>> {
    if params.d != l.dim() {
        return Err(Error::shape(format!(
            "params dimension {} does not match jump dimension {}",
            params.d,
            l.dim()
        )));
    }
    let one = one_step_superop(l, params.delta(), method)?;
    Ok(one.pow(params.n))
}

/// The 2d³×2d³ dilation unitary U = exp(−i√δ [[0, M†], [M, 0]]).
///
/// The exponential is cross-checked against the closed-form blocks
/// (the relations M² = M/√d, M†MM† = dM† collapse the series):
/// upper-left I − ((1−cos√(δd))/d)M†M and lower-left −i(sin√(δd)/√d)M.
pub fn stinespring_unitary<T: Scalar>(d: usize, delta_param: T) -> Result<ComplexMatrix<T>> {
    if delta_param < T::zero() {
        return Err(Error::arg("isometry parameter must be nonnegative"));
    }
    let dcube = d * d * d;
    let m = m_operator::<T>(d);
    let mut h = ComplexMatrix::zeros(2 * dcube, 2 * dcube);
    for i in 0..dcube {
        for j in 0..dcube {
            let z = m.get(i, j);
            h.set(dcube + i, j, z);
            h.set(j, dcube + i, z.conj());
        }
    }
    let sqrt_dp = delta_param.sqrt();
    let u = mat_exp(&h.scaled(Complex::new(T::zero(), -sqrt_dp)))?;

    let theta = (delta_param * real::<T>(d as f64)).sqrt();
    let (a_cf, b_cf) = stinespring_kraus(d, theta);
    let mut dev = T::zero();
    for i in 0..dcube {
        for j in 0..dcube {
            dev = dev.max((u.get(i, j) - a_cf.get(i, j)).norm());
            dev = dev.max((u.get(dcube + i, j) - b_cf.get(i, j)).norm());
        }
    }
    if dev > real::<T>(1e-9) {
        return Err(Error::arg(format!(
            "dilation blocks disagree with closed form by {dev}"
        )));
    }
    Ok(u)
}

/// Maximum deviation of the dilation channel from its exact quadratic
/// expansion, both before the program trace-out,
///
/// ```text
/// Tr_a[VωV†] = ω + Δ𝓜(ω) + (Δ²d/4)(M†MωM†M/d − MωM†),
/// ```
///
/// and after it, where the right side becomes
/// ρ + Δ𝓛(ρ) + (Δ²d/4)(𝓓₁ − 𝓘)(LρL†). Both are identities, not
/// truncations, so the result is rounding-level.
pub fn stinespring_exact_expansion_residual<T: Scalar>(
    l: &JumpOperator<T>,
    delta_param: T,
) -> Result<T> {
    if delta_param < T::zero() {
        return Err(Error::arg("isometry parameter must be nonnegative"));
    }
    let d = l.dim();
    let dd = real::<T>(d as f64);
    let theta = (delta_param * dd).sqrt();
    let delta = step_from_isometry_param(d, delta_param);
    let (a, b) = stinespring_kraus(d, theta);

    // d³-level: superoperators of both sides.
    let m = m_operator::<T>(d);
    let mdm = &m.dagger() * &m;
    let mut lhs = kron(&a, &a.conj());
    lhs.axpy(creal(1.0), &kron(&b, &b.conj()));

    let gen = wml_generator_superop::<T>(d)?;
    let quad_coeff = delta * delta * dd / real::<T>(4.0);
    let mut rhs = ComplexMatrix::identity(d.pow(6));
    rhs.axpy(Complex::new(delta, T::zero()), gen.matrix());
    rhs.axpy(
        Complex::new(quad_coeff / dd, T::zero()),
        &kron(&mdm, &mdm.transpose()),
    );
    rhs.axpy(Complex::new(-quad_coeff, T::zero()), &kron(&m, &m.conj()));
    let resid_full = lhs.max_abs_diff(&rhs);

    // Reduced to system 1.
    let reduced = reduce_to_system1(d, l, "expansion-check", |omega| {
        let mut out = &(&a * omega) * &a.dagger();
        out.axpy(creal(1.0), &(&(&b * omega) * &b.dagger()));
        out
    })?;
    let lm = l.matrix();
    let jump = kron(lm, &lm.conj());
    let mut rhs_red = ComplexMatrix::identity(d * d);
    rhs_red.axpy(
        Complex::new(delta, T::zero()),
        dissipator_superop(l).matrix(),
    );
    let mut depol_minus_id = depolarizing_superop::<T>(d).matrix().clone();
    depol_minus_id.axpy(creal(-1.0), &ComplexMatrix::identity(d * d));
    rhs_red.axpy(
        Complex::new(quad_coeff, T::zero()),
        &(&depol_minus_id * &jump),
    );
    let resid_reduced = reduced.matrix().max_abs_diff(&rhs_red);

    Ok(resid_full.max(resid_reduced))
}

/// The residual generator 𝓛̃ of the one-step decomposition
/// `one_step = 𝓘 + Δ(𝓘 − 𝓓₁)∘𝓛̃`:
///
/// ```text
/// 𝓛̃ = 𝓛 + f(Δd/2)·½{L†L, ·}
///        + (2f(Δd/2) − d²f(Δd′))/(d² − 2)·L(·)L†,   f(x) = 1 + (e^{−x}−1)/x.
/// ```
///
/// At Δ = 0 the limit 𝓛̃ = 𝓛 is returned explicitly.
pub fn residual_generator_superop<T: Scalar>(
    l: &JumpOperator<T>,
    delta: T,
) -> Result<Superoperator<T>> {
    if delta < T::zero() {
        return Err(Error::arg("step size must be nonnegative"));
    }
    let base = dissipator_superop(l);
    if delta == T::zero() {
        return Ok(base);
    }
    let d = l.dim();
    if d < 2 {
        return Err(Error::arg("dimension must be at least 2"));
    }
    let dd = real::<T>(d as f64);
    let d_prime = dd - T::one() / dd;
    let f2 = f_relax(delta * dd / real::<T>(2.0))?;
    let f1 = f_relax(delta * d_prime)?;
    let dsq_m2 = dd * dd - real::<T>(2.0);
    let g = (real::<T>(2.0) * f2 - dd * dd * f1) / dsq_m2;

    let lm = l.matrix();
    let ldl = &lm.dagger() * lm;
    let id = ComplexMatrix::identity(d);
    let mut anti = kron(&ldl, &id);
    anti.axpy(creal(1.0), &kron(&id, &ldl.transpose()));
    let anti = anti.scaled_re(real::<T>(0.5));
    let jump = kron(lm, &lm.conj());

    let mut mat = base.matrix().clone();
    mat.axpy(Complex::new(f2, T::zero()), &anti);
    mat.axpy(Complex::new(g, T::zero()), &jump);
    Superoperator::new(mat, "residual-generator")
}

/// f(x) = 1 + (e^{−x} − 1)/x for x > 0, extended by the limit f(0) = 0;
/// satisfies 0 ≤ f(x) ≤ x/2.
pub fn f_relax<T: Scalar>(x: T) -> Result<T> {
    if x < T::zero() {
        return Err(Error::arg("f_relax takes nonnegative arguments"));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    Ok(T::one() + (-x).exp_m1() / x)
}

/// e^x − x − 1, the quadratic remainder of the exponential; bounded by
/// ¾x² on [0, 1].
pub fn exp_quad_gap<T: Scalar>(x: T) -> Result<T> {
    if x < T::zero() {
        return Err(Error::arg("exp_quad_gap takes nonnegative arguments"));
    }
    Ok(x.exp_m1() - x)
}

type ExpCacheKey = (TypeId, usize, u64);

static GENERATOR_EXP_CACHE: OnceLock<Mutex<HashMap<ExpCacheKey, Arc<dyn Any + Send + Sync>>>> =
    OnceLock::new();

/// e^{𝓜Δ}, computed once per (scalar type, d, Δ) and shared.
fn cached_generator_exp<T: Scalar>(d: usize, delta: T) -> Result<Arc<ComplexMatrix<T>>> {
    let bits = delta.to_f64().unwrap_or(f64::NAN).to_bits();
    let key = (TypeId::of::<T>(), d, bits);
    let cache = GENERATOR_EXP_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("generator cache poisoned");
    if let Some(hit) = guard.get(&key) {
        let arc = hit
            .clone()
            .downcast::<ComplexMatrix<T>>()
            .expect("cache entry type");
        return Ok(arc);
    }
    let gen = wml_generator_superop::<T>(d)?;
    let e: Arc<ComplexMatrix<T>> = Arc::new(mat_exp(&gen.matrix().scaled_re(delta))?);
    guard.insert(key, e.clone());
    Ok(e)
}
