mod common;

use common::*;
use dgldpc::ensemble::{build_ensemble, CnSpec, EnsembleError, VnSpec};
use dgldpc::gf2codes::{BinaryMatrix, EnumeratorKind};

#[test]
fn regular_ldpc_scalars() {
    let e = ldpc(3, 6);
    assert!((e.int_lambda - 1.0 / 3.0).abs() < 1e-15);
    assert!((e.int_rho - 1.0 / 6.0).abs() < 1e-15);
    assert!((e.design_rate - 0.5).abs() < 1e-15);
    assert!((e.k_s - 1.0).abs() < 1e-15);
    assert!((e.edge_ratio - 3.0).abs() < 1e-15);
    assert!((e.cn_ratio - 0.5).abs() < 1e-15);
    assert!((e.m_bar - 1.0).abs() < 1e-15);
    assert!((e.alpha_max - 1.0).abs() < 1e-15);
}

#[test]
fn checkhybrid_max_normalized_weight_is_six_sevenths() {
    let e = checkhybrid_q3();
    assert_eq!(e.m_bar, 6.0 / 7.0);
    assert!((e.alpha_max - 6.0 / 7.0).abs() < 1e-15);
    assert!(e.is_check_hybrid());
}

#[test]
fn rate_half_mixtures_have_design_rate_one_half() {
    for e in [rate_half_a(), rate_half_b()] {
        assert!((e.design_rate - 0.5).abs() < 1e-5, "rate {}", e.design_rate);
    }
}

#[test]
fn rate_half_b_block_length_ratio() {
    let e = rate_half_b();
    assert!((e.k_s - 5.62491).abs() < 1e-5, "K_s = {}", e.k_s);
    assert!((e.alpha_max - e.k_s).abs() < 1e-12);
}

#[test]
fn stopping_kind_caps_the_domain_at_the_block_length_ratio() {
    for kind in [EnumeratorKind::StoppingBd, EnumeratorKind::StoppingMap] {
        let e = tanner_hamming74(kind);
        assert_eq!(e.kind, kind);
        assert!((e.alpha_max - e.k_s).abs() < 1e-12);
    }
}

#[test]
fn fraction_sums_are_validated() {
    let err = build_ensemble(
        &[vn("rep2", 0.9, BinaryMatrix::repetition(2).unwrap())],
        &[cn("spc6", 1.0, BinaryMatrix::spc_cyclic(6).unwrap())],
        EnumeratorKind::Weight,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::FractionSum { side: "variable", .. }));
}

#[test]
fn stopping_kinds_require_check_matrices() {
    let err = build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn_wef("code53", 1.0, vec![1, 0, 3, 3, 0, 1])],
        EnumeratorKind::StoppingMap,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::KindNeedsMatrix { .. }));
}

#[test]
fn bounded_distance_stopping_checks_work_from_coefficients() {
    let e = build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn_wef("code53", 1.0, vec![1, 0, 3, 3, 0, 1])],
        EnumeratorKind::StoppingBd,
    )
    .unwrap();
    assert_eq!(e.cn_types[0].enumerator.coeffs(), &[1, 0, 10, 10, 5, 1]);
}

#[test]
fn wef_totals_must_be_powers_of_two() {
    let err = build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn_wef("bad", 1.0, vec![1, 0, 3, 3, 0, 2])],
        EnumeratorKind::Weight,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::BadMass { .. }));
}

#[test]
fn explicit_coefficients_must_match_the_matrix() {
    let err = build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[CnSpec {
            name: "clash".into(),
            rho: 1.0,
            matrix: Some(BinaryMatrix::spc_cyclic(6).unwrap()),
            wef_coeffs: Some(vec![1, 0, 3, 3, 0, 1]),
        }],
        EnumeratorKind::Weight,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::EnumeratorMismatch { .. }));
}

#[test]
fn degenerate_rates_are_rejected() {
    // Repetition variables with repetition checks leave no redundancy.
    let err = build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        EnumeratorKind::Weight,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::RateOutOfRange(_)));
}

#[test]
fn variable_minimum_distance_two_is_required() {
    let err = build_ensemble(
        &[VnSpec {
            name: "weight1".into(),
            lambda: 1.0,
            matrix: None,
            // A (2,1) encoder whose image contains a weight-1 word.
            io_coeffs: Some(vec![vec![1, 0, 0], vec![0, 1, 0]]),
        }],
        &[cn("spc6", 1.0, BinaryMatrix::spc_cyclic(6).unwrap())],
        EnumeratorKind::Weight,
    )
    .unwrap_err();
    assert!(matches!(err, EnsembleError::MinDistance { side: "variable", .. }));
}

#[test]
fn validation_report_flags() {
    let e = tanner_hamming74(EnumeratorKind::Weight);
    let r = e.validate_assumptions();
    assert!(r.vn_dual_distance_ok);
    assert!(r.cn_dual_distance_ok);
    assert!(r.stationary_identity_applicable);
    assert!(!r.has_distance2_cns);
    assert!(r.has_distance2_vns);
    assert!(r.all_cn_wefs_symmetric);
    assert!((r.parity_ratio - e.k_s * (1.0 - e.design_rate)).abs() < 1e-15);
    assert!(r.messages.is_empty());

    let mix = checkhybrid_q3();
    assert!(!mix.validate_assumptions().all_cn_wefs_symmetric);
}

#[test]
fn minimal_admissible_lengths() {
    assert_eq!(ldpc(3, 6).minimal_admissible_n(100).unwrap(), 2);
    assert_eq!(ldpc(2, 3).minimal_admissible_n(100).unwrap(), 3);
    assert_eq!(checkhybrid_q3().minimal_admissible_n(100).unwrap(), 42);
}

#[test]
fn check_hybrid_detection() {
    assert!(ldpc(3, 6).is_check_hybrid());
    assert!(tanner_code55().is_check_hybrid());
    assert!(!rate_half_a().is_check_hybrid());
}

#[test]
fn edge_fractions_and_node_fractions_are_consistent() {
    let e = rate_half_b();
    let delta_sum: f64 = e.vn_types.iter().map(|t| t.delta).sum();
    let gamma_sum: f64 = e.cn_types.iter().map(|t| t.gamma).sum();
    assert!((delta_sum - 1.0).abs() < 1e-12);
    assert!((gamma_sum - 1.0).abs() < 1e-12);
    for t in &e.vn_types {
        assert!((t.delta - t.lambda / (t.q as f64 * e.int_lambda)).abs() < 1e-15);
    }
    for t in &e.cn_types {
        assert!((t.gamma - t.rho / (t.s as f64 * e.int_rho)).abs() < 1e-15);
    }
}

#[test]
fn checkhybrid_gamma_fractions() {
    let e = checkhybrid_q3();
    assert!((e.cn_types[0].gamma - 13.0 / 18.0).abs() < 1e-12);
    assert!((e.cn_types[1].gamma - 5.0 / 18.0).abs() < 1e-12);
}
