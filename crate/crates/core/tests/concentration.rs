// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Concentration properties of the Frobenius-normalized ensembles beyond the
//! per-module unit checks.

use wavematrix::ensembles::{tail_experiment, EnsembleKind, RngSeed};

#[test]
fn ginibre_upper_quantile_sits_below_the_tail_bound() {
    // 99th percentile of d·‖L‖∞² at d = 64 stays below d·(16/d + 8log(2/δ)/d²)
    // at δ = 0.01.
    let d = 64usize;
    let delta = 0.01;
    let summary = tail_experiment(EnsembleKind::ginibre(), &[d], 1000, delta, RngSeed::new(401))
        .unwrap();
    let mut scaled: Vec<f64> = summary.records.iter().map(|r| r.scaled).collect();
    scaled.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let p99 = scaled[989];
    let bound = d as f64 * (16.0 / d as f64 + 8.0 * (2.0 / delta).ln() / (d as f64 * d as f64));
    assert!(p99 < bound, "p99 {p99} vs bound {bound}");
    // And nothing in the sample violates the per-draw bound.
    assert!(summary.records.iter().all(|r| !r.violated));
}

#[test]
fn subgaussian_kinds_share_the_dimension_free_scale() {
    let seed = RngSeed::new(403);
    for kind in [EnsembleKind::uniform_disc(), EnsembleKind::rademacher()] {
        let summary = tail_experiment(kind, &[16, 32, 64], 300, 0.5, seed).unwrap();
        for stats in &summary.per_d {
            assert!(
                stats.median_scaled <= 6.0,
                "{}: d={} median {}",
                kind.name(),
                stats.d,
                stats.median_scaled
            );
        }
    }
}

#[test]
fn records_are_value_keyed_not_order_keyed() {
    // Reordering the dimension list permutes the rows but not their values.
    let seed = RngSeed::new(405);
    let fwd = tail_experiment(EnsembleKind::ginibre(), &[8, 16], 50, 0.5, seed).unwrap();
    let rev = tail_experiment(EnsembleKind::ginibre(), &[16, 8], 50, 0.5, seed).unwrap();
    for r in &fwd.records {
        let twin = rev
            .records
            .iter()
            .find(|s| s.d == r.d && s.trial == r.trial)
            .unwrap();
        assert_eq!(r.norm_sq.to_bits(), twin.norm_sq.to_bits());
    }
}
