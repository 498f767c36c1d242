// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! The five experiment runners.
//!
//! Every runner is a pure function of its resolved config (timestamps
//! excepted): random draws always come from streams derived from the master
//! seed, rows are emitted in a fixed sort order, and each row echoes enough
//! provenance (command, config hash, seed, method) to re-derive it alone.

use wavematrix::ensembles::{normalize_frobenius, sample_matrix, EnsembleKind};
use wavematrix::lindblad::{
    depolarizing_superop, dissipator_superop, exact_channel, Superoperator,
};
use wavematrix::metrics::{choi, complexity_bounds, diamond_bounds, maxent_output_distance};
use wavematrix::tensor::{herm_eigvals, kron, mat_exp, partial_trace, SubsystemDims};
use wavematrix::wml::{
    f_relax, m_operator, n_step_channel, one_step_superop, residual_generator_superop, s_superops,
    stinespring_exact_expansion_residual, stinespring_unitary, transfer_coeffs, transfer_matrix,
    wml_generator_superop, SimulationParams, WmlStepMethod,
};
use wavematrix::{C64, Mat64};

use crate::config::{Command, ExperimentConfig};
use crate::records::{ResultRecord, Value};
use crate::{CliError, Result};

/// Stream tags for deriving per-purpose RNG streams from the master seed.
const STREAM_SCALING_JUMP: u64 = 0x5CA1;
const STREAM_VERIFY_STATE: u64 = 0xF1A7;
const STREAM_VERIFY_JUMP: u64 = 0xF1A8;

/// Rows plus human-readable summary lines plus hard failures (paper bounds
/// violated; they map to exit code 1).
#[derive(Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<ResultRecord>,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

/// Test hook: deliberate defects for the verify negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Adds 1e-3 to M[0][0] before checking the M-algebra identities.
    PerturbM,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    match config.command {
        Command::Verify => run_verify(config, None),
        Command::Scaling => run_scaling(config),
        Command::Typical => run_typical(config),
        Command::Worstcase => run_worstcase(config),
        Command::Bounds => run_bounds(config),
    }
}

fn base_record(config: &ExperimentConfig, timestamp: &str) -> ResultRecord {
    let mut rec = ResultRecord::new();
    rec.push("command", config.command.name())
        .push("config_hash", config.hash())
        .push("seed", config.seed.master)
        .push("method", config.method.to_string())
        .push("software_version", env!("CARGO_PKG_VERSION"))
        .push("timestamp", timestamp);
    rec
}

fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339()
}

struct IdentityCheck {
    name: &'static str,
    deviation: f64,
    tolerance: f64,
}

/// Runs the closed-form identity suite at `config.d` and reports one
/// PASS/FAIL line per identity.
pub fn run_verify(config: &ExperimentConfig, corruption: Option<Corruption>) -> Result<RunOutput> {
    let d = config.d;
    if !(2..=3).contains(&d) {
        return Err(CliError::usage("verify supports --d 2 or 3"));
    }
    let timestamp = timestamp_now();
    let mut checks: Vec<IdentityCheck> = Vec::new();

    let mut m = m_operator::<f64>(d);
    if corruption == Some(Corruption::PerturbM) {
        let bumped = m.get(0, 0) + C64::new(1e-3, 0.0);
        m.set(0, 0, bumped);
    }
    let sqrt_d = (d as f64).sqrt();
    let mdag = m.dagger();

    // M algebra.
    checks.push(IdentityCheck {
        name: "m_squared_scaling: sqrt(d)·M² = M",
        deviation: (&m * &m).scaled_re(sqrt_d).max_abs_diff(&m),
        tolerance: 1e-13,
    });
    checks.push(IdentityCheck {
        name: "m_triple_product: M†MM† = d·M†",
        deviation: (&(&mdag * &m) * &mdag).max_abs_diff(&mdag.scaled_re(d as f64)),
        tolerance: 1e-12,
    });

    // Program-state reductions with a seeded state and jump.
    let l = normalize_frobenius(&sample_matrix(
        EnsembleKind::ginibre(),
        d,
        &mut config.seed.stream(STREAM_VERIFY_JUMP),
    ))?;
    let rho = {
        let g = sample_matrix(
            EnsembleKind::ginibre(),
            d,
            &mut config.seed.stream(STREAM_VERIFY_STATE),
        );
        let p = &g * &g.dagger();
        let tr = p.trace().re;
        p.scaled_re(1.0 / tr)
    };
    let pi = wavematrix::wml::program_projector(&l);
    let omega = kron(&rho, &pi);
    let dims = SubsystemDims::new(vec![d, d, d])?;
    let lm = l.matrix();

    let reduced = partial_trace(&(&(&m * &omega) * &m.dagger()), &dims, &[1, 2])?;
    checks.push(IdentityCheck {
        name: "m_conjugation_reduction: Tr23[M(ρ⊗π)M†] = LρL†",
        deviation: reduced.max_abs_diff(&(&(lm * &rho) * &lm.dagger())),
        tolerance: 1e-12,
    });
    let reduced2 = partial_trace(&(&(&m.dagger() * &m) * &omega), &dims, &[1, 2])?;
    checks.push(IdentityCheck {
        name: "m_gram_reduction: Tr23[M†M(ρ⊗π)] = L†Lρ",
        deviation: reduced2.max_abs_diff(&(&(&lm.dagger() * lm) * &rho)),
        tolerance: 1e-12,
    });

    let gen = wml_generator_superop::<f64>(d)?;
    let gen_out = gen.apply(&omega)?;
    let reduced3 = partial_trace(&gen_out, &dims, &[1, 2])?;
    checks.push(IdentityCheck {
        name: "generator_reduction: Tr23[𝓜(ρ⊗π)] = 𝓛(ρ)",
        deviation: reduced3.max_abs_diff(&dissipator_superop(&l).apply(&rho)?),
        tolerance: 1e-12,
    });

    // Superoperator family and the transfer relation. Frobenius norms bound
    // the operator norm from above, so they certify the stated tolerances.
    let ss = s_superops::<f64>(d)?;
    let s1_minus_s2 = ss[1].matrix() - ss[2].matrix();
    checks.push(IdentityCheck {
        name: "generator_family: 𝓜 = S1 − S2",
        deviation: (&s1_minus_s2 - gen.matrix()).frobenius_norm(),
        tolerance: 1e-12,
    });
    let t_mat = transfer_matrix::<f64>(d);
    let mut worst = 0.0f64;
    for k in 0..5 {
        let lhs = gen.matrix() * ss[k].matrix();
        let mut rhs = Mat64::zeros(d.pow(6), d.pow(6));
        for (j, sj) in ss.iter().enumerate() {
            rhs.axpy(t_mat.get(k, j), sj.matrix());
        }
        worst = worst.max((&lhs - &rhs).frobenius_norm());
    }
    checks.push(IdentityCheck {
        name: "transfer_relation: 𝓜·S_k = Σ_j T_kj·S_j",
        deviation: worst,
        tolerance: 1e-10,
    });

    let delta = 0.1;
    let tc = transfer_coeffs::<f64>(d, delta)?;
    let e_t = mat_exp(&t_mat.scaled_re(delta))?;
    let expect_row = [1.0, tc.c01, tc.c02, tc.c03, tc.c04];
    let row_dev = (0..5)
        .map(|j| (e_t.get(0, j) - C64::new(expect_row[j], 0.0)).norm())
        .fold(0.0f64, f64::max);
    checks.push(IdentityCheck {
        name: "transfer_exponential_row: first row of exp(TΔ)",
        deviation: row_dev,
        tolerance: 1e-12,
    });

    let e_gen = mat_exp(&gen.matrix().scaled_re(delta))?;
    let mut s_sum = Mat64::zeros(d.pow(6), d.pow(6));
    for (j, c0j) in expect_row.iter().enumerate() {
        s_sum.axpy(C64::new(*c0j, 0.0), ss[j].matrix());
    }
    checks.push(IdentityCheck {
        name: "generator_exponential_expansion: e^{𝓜Δ} = Σ_j c0j·S_j",
        deviation: (&e_gen - &s_sum).frobenius_norm(),
        tolerance: 1e-10,
    });

    let analytic = one_step_superop(&l, delta, WmlStepMethod::Analytic)?;
    let brute = one_step_superop(&l, delta, WmlStepMethod::BruteForce)?;
    checks.push(IdentityCheck {
        name: "one_step_oracle: analytic = brute force",
        deviation: analytic.matrix().max_abs_diff(brute.matrix()),
        tolerance: 1e-10,
    });

    let ltilde = residual_generator_superop(&l, delta)?;
    let id_sup = Mat64::identity(d * d);
    let mut proj = id_sup.clone();
    proj.axpy(C64::new(-1.0, 0.0), depolarizing_superop::<f64>(d).matrix());
    let mut decomposed = id_sup.clone();
    decomposed.axpy(C64::new(delta, 0.0), &(&proj * ltilde.matrix()));
    checks.push(IdentityCheck {
        name: "residual_decomposition: step = 𝓘 + Δ(𝓘−𝓓₁)𝓛̃",
        deviation: analytic.matrix().max_abs_diff(&decomposed),
        tolerance: 1e-11,
    });

    checks.push(IdentityCheck {
        name: "dilation_expansion: exact quadratic remainder",
        deviation: stinespring_exact_expansion_residual(&l, 0.2)?,
        tolerance: 1e-10,
    });

    let dp = 0.3;
    let u = stinespring_unitary::<f64>(d, dp)?;
    let gram_dev = (&u.dagger() * &u).max_abs_diff(&Mat64::identity(2 * d.pow(3)));
    checks.push(IdentityCheck {
        name: "dilation_unitarity: U†U = I",
        deviation: gram_dev,
        tolerance: 1e-11,
    });

    let depol_gen = depolarizing_superop::<f64>(d).compose(&dissipator_superop(&l))?;
    checks.push(IdentityCheck {
        name: "depolarizing_annihilation: 𝓓₁∘𝓛 = 0",
        deviation: depol_gen.matrix().max_abs(),
        tolerance: 1e-12,
    });

    let small_exp = Superoperator::new(mat_exp(&gen.matrix().scaled_re(0.05))?, "exp")?;
    let j = choi(&small_exp);
    let eigs = herm_eigvals(&j.matrix().hermitize())?;
    let min_eig = eigs.last().copied().unwrap_or(0.0);
    checks.push(IdentityCheck {
        name: "generator_exponential_choi_psd: min eig ≥ −1e-9",
        deviation: (-min_eig).max(0.0),
        tolerance: 1e-9,
    });

    let mut out = RunOutput::default();
    for check in &checks {
        let pass = check.deviation <= check.tolerance;
        out.summary.push(format!(
            "{} {:<55} deviation {:.3e} (tolerance {:.0e})",
            if pass { "PASS" } else { "FAIL" },
            check.name,
            check.deviation,
            check.tolerance
        ));
        if !pass {
            out.failures.push(format!(
                "verify: {} deviated by {:.3e} > {:.0e}",
                check.name, check.deviation, check.tolerance
            ));
        }
        let mut rec = base_record(config, &timestamp);
        rec.push("d", d)
            .push("identity", check.name)
            .push("deviation", check.deviation)
            .push("tolerance", check.tolerance)
            .push("pass", pass);
        out.rows.push(rec);
    }
    Ok(out)
}

/// Error-vs-step-count sweep against the exact channel, with the Choi
/// sandwich and the first-order step bound on every row.
pub fn run_scaling(config: &ExperimentConfig) -> Result<RunOutput> {
    let timestamp = timestamp_now();
    let mut out = RunOutput::default();
    for &d in &config.d_list {
        let l = normalize_frobenius(&sample_matrix(
            EnsembleKind::ginibre(),
            d,
            &mut config.seed.substream(d as u64, STREAM_SCALING_JUMP),
        ))?;
        let l_inf_sq = l.op_norm_sq();
        let exact = exact_channel(&l, config.t)?;

        let mut log_points = Vec::new();
        for &n in &config.n_grid {
            let params = SimulationParams::new(d, config.t, n)?;
            let stepped = n_step_channel(&l, &params, config.method)?;
            let err_maxent = maxent_output_distance(&exact, &stepped)?;
            let bounds = diamond_bounds(&exact, &stepped, 2)?;
            let step_bound =
                (2.0 * d as f64 + 3.0) * config.t * config.t / (8.0 * n as f64) * l_inf_sq;
            let lemma_valid = params.step_bound_satisfied();

            if lemma_valid && bounds.lower > step_bound + 1e-12 {
                out.failures.push(format!(
                    "scaling: certified lower bound {:.3e} exceeds the step bound {:.3e} at d={d}, n={n}",
                    bounds.lower, step_bound
                ));
            }
            if err_maxent > 0.0 {
                log_points.push(((n as f64).ln(), err_maxent.ln()));
            }

            let mut rec = base_record(config, &timestamp);
            rec.push("d", d)
                .push("t", config.t)
                .push("n", n)
                .push("lemma1_valid", lemma_valid)
                .push("l_inf_sq", l_inf_sq)
                .push("err_maxent", err_maxent)
                .push("err_choi_lower", bounds.lower)
                .push("err_choi_upper", bounds.upper)
                .push("bound_lemma1", step_bound);
            out.rows.push(rec);
        }
        let slope = least_squares_slope(&log_points);
        out.summary.push(format!(
            "scaling d={d}: log-log slope of err_maxent vs n = {slope:.4} over {} points",
            log_points.len()
        ));
    }
    Ok(out)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    sxy / sxx
}

/// Ginibre concentration experiment: per-trial tail records plus the implied
/// per-trial sample bound against the typical-case bound.
pub fn run_typical(config: &ExperimentConfig) -> Result<RunOutput> {
    let timestamp = timestamp_now();
    let summary = wavematrix::ensembles::tail_experiment(
        EnsembleKind::ginibre(),
        &config.d_list,
        config.trials,
        config.delta,
        config.seed,
    )?;
    let rate = config.t * config.t / config.eps;
    let mut out = RunOutput::default();

    for record in &summary.records {
        let typical_upper =
            7.0 * (1.0 + (2.0 / config.delta).ln() / record.d as f64) * rate;
        let per_trial_upper = (2.0 * record.d as f64 + 3.0) / 8.0 * record.norm_sq * rate;
        let mut rec = base_record(config, &timestamp);
        rec.push("d", record.d)
            .push("trial", record.trial)
            .push("t", config.t)
            .push("eps", config.eps)
            .push("delta", config.delta)
            .push("norm_sq", record.norm_sq)
            .push("scaled", record.scaled)
            .push("tail_bound", record.bound)
            .push("violated", record.violated)
            .push("per_trial_upper", per_trial_upper)
            .push("typical_upper", typical_upper)
            .push("within_typical", per_trial_upper <= typical_upper);
        out.rows.push(rec);
    }

    for stats in &summary.per_d {
        let group: Vec<&ResultRecord> = out
            .rows
            .iter()
            .filter(|r| r.get("d") == Some(&Value::UInt(stats.d as u64)))
            .collect();
        let within = group
            .iter()
            .filter(|r| r.get("within_typical") == Some(&Value::Bool(true)))
            .count();
        let within_rate = within as f64 / group.len() as f64;
        out.summary.push(format!(
            "typical d={}: violation rate {:.4}, median d·‖L‖∞² = {:.4}, within-typical rate {:.4}",
            stats.d, stats.violation_rate, stats.median_scaled, within_rate
        ));
        if stats.violation_rate > config.delta {
            out.failures.push(format!(
                "typical: tail violation rate {:.4} exceeds δ = {} at d = {}",
                stats.violation_rate, config.delta, stats.d
            ));
        }
        if within_rate < 1.0 - config.delta {
            out.failures.push(format!(
                "typical: only {:.4} of trials satisfy the typical bound at d = {} (need ≥ {})",
                within_rate,
                stats.d,
                1.0 - config.delta
            ));
        }
    }
    Ok(out)
}

/// Rank-one worst-case curves; the closed form everywhere, cross-checked by
/// the full simulator for d ≤ 3.
pub fn run_worstcase(config: &ExperimentConfig) -> Result<RunOutput> {
    use wavematrix::worstcase::{
        closed_form_yz, rankone_coeffs, simulate_rankone, steps_to_reach, trace_distance_lb,
        zn_asymptotic,
    };
    let timestamp = timestamp_now();
    let mut out = RunOutput::default();
    for &d in &config.d_list {
        for &n in &config.n_grid {
            let delta = config.t / n as f64;
            let coeffs = rankone_coeffs::<f64>(d, delta)?;
            let (_, z_closed) = closed_form_yz(&coeffs, n);
            let lb = trace_distance_lb(d, z_closed);
            let asym = zn_asymptotic(config.t, n);
            let params = SimulationParams::new(d, config.t, n)?;

            let z_sim_dev = if d <= 3 {
                let sim = simulate_rankone::<f64>(d, config.t, n, config.method)?;
                if sim.coeff_deviation > 1e-10 || sim.off_space_residual > 1e-10 {
                    out.failures.push(format!(
                        "worstcase: simulator deviates from the closed form at d={d}, n={n}: coeff {:.3e}, off-space {:.3e}",
                        sim.coeff_deviation, sim.off_space_residual
                    ));
                }
                Value::Float(sim.coeff_deviation)
            } else {
                Value::Missing
            };

            let mut rec = base_record(config, &timestamp);
            rec.push("d", d)
                .push("t", config.t)
                .push("n", n)
                .push("lemma1_valid", params.step_bound_satisfied())
                .push("z_closed", z_closed)
                .push("z_sim_dev", z_sim_dev)
                .push("tdist_lb", lb)
                .push("asymptote", asym);
            out.rows.push(rec);
        }
        let fitted = steps_to_reach::<f64>(d, config.t, config.eps)?;
        let floor = d as f64 / 32.0 * config.t * config.t / config.eps;
        out.summary.push(format!(
            "worstcase d={d}: fitted n(ε={}) = {fitted}, dimension floor d/32·t²/ε = {floor:.3}",
            config.eps
        ));
        if (fitted as f64) < floor {
            out.failures.push(format!(
                "worstcase: fitted sample count {fitted} at d={d} undercuts the floor {floor:.3}"
            ));
        }
    }
    Ok(out)
}

/// Sample-complexity bound table over the dimension list (at ‖L‖∞² = 1).
pub fn run_bounds(config: &ExperimentConfig) -> Result<RunOutput> {
    let timestamp = timestamp_now();
    let mut out = RunOutput::default();
    for &d in &config.d_list {
        let report = complexity_bounds(d, config.t, config.eps, config.delta, 1.0)?;
        if report.worst_lower > report.new_upper + 1e-12 {
            out.failures.push(format!(
                "bounds: worst-case lower bound exceeds the upper bound at d={d}"
            ));
        }
        if report.new_upper > report.old_upper + 1e-12 {
            out.failures.push(format!(
                "bounds: refined upper bound exceeds the earlier d² bound at d={d}"
            ));
        }
        let mut rec = base_record(config, &timestamp);
        rec.push("d", d)
            .push("t", report.t)
            .push("eps", report.eps)
            .push("delta", report.delta)
            .push("l_inf_sq", report.l_inf_sq)
            .push("new_upper", report.new_upper)
            .push("old_upper", report.old_upper)
            .push("general_lower", report.general_lower)
            .push("general_lower_valid", report.general_lower_valid)
            .push("typical_upper", report.typical_upper)
            .push("worst_lower", report.worst_lower)
            .push("worst_lower_asymptotic", report.worst_lower_asymptotic)
            .push("ginibre_tail", report.ginibre_tail);
        out.rows.push(rec);
    }
    out.summary.push(format!(
        "bounds: {} rows at t={}, eps={}, delta={}, ‖L‖∞²=1",
        out.rows.len(),
        config.t,
        config.eps,
        config.delta
    ));
    Ok(out)
}

// Scalar-inequality sweep used by the verify suite's callers and tests.
pub fn scalar_inequalities_hold(grid_points: usize) -> bool {
    for k in 1..=grid_points {
        let x = 10.0 * k as f64 / grid_points as f64;
        match f_relax::<f64>(x) {
            Ok(f) if (0.0..=x / 2.0).contains(&f) => {}
            _ => return false,
        }
    }
    for k in 0..=grid_points {
        let x = k as f64 / grid_points as f64;
        match wavematrix::wml::exp_quad_gap::<f64>(x) {
            Ok(g) if g >= 0.0 && g <= 0.75 * x * x => {}
            _ => return false,
        }
    }
    true
}
