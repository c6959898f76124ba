mod common;

use common::*;
use proptest::prelude::*;
use zeno::analysis::{find_transitions, DecayCurve, TauSpacing};
use zeno::config::{parse_config, parse_config_text};
use zeno::decay::{gamma_terms, SpinJ};
use zeno::quadrature::integrate_1d;
use zeno::spectral::{corr_strong, phi_i1, phi_r1, BathPair, SpectralParams, Temperature};

fn with_weak(cfg: &zeno::decay::ModelConfig, f: f64) -> zeno::decay::ModelConfig {
    let b = cfg.baths();
    (*cfg).with_baths(BathPair::new(b.strong, b.weak.with_strength(f).unwrap()))
}

#[test]
fn weak_terms_scale_with_f_and_the_rest_do_not() {
    for cfg in [baseline_sb(0.8), baseline_lsb(0.8)] {
        let base = gamma_terms(1.3, &with_weak(&cfg, 0.03), &q())
            .unwrap()
            .terms;
        let scaled = gamma_terms(1.3, &with_weak(&cfg, 0.09), &q())
            .unwrap()
            .terms;
        for k in 0..2 {
            assert!(relative_difference(scaled[k], 3.0 * base[k]) < 1e-9);
        }
        for k in 2..5 {
            assert_eq!(scaled[k], base[k]);
        }
    }
}

#[test]
fn delta_terms_scale_with_delta_squared() {
    let cfg = baseline_lsb(0.4);
    let base = gamma_terms(0.9, &cfg, &q()).unwrap().terms;
    let doubled = gamma_terms(0.9, &cfg.with_delta(0.1).unwrap(), &q())
        .unwrap()
        .terms;
    assert_eq!(doubled[0], base[0]);
    assert_eq!(doubled[1], base[1]);
    for k in 2..5 {
        assert!(relative_difference(doubled[k], 4.0 * base[k]) < 1e-12);
    }
}

#[test]
fn spin_half_large_spin_equals_spin_boson() {
    let sb = baseline_sb(0.8);
    let half = sb.with_spin_j(Some(SpinJ::from_twice(1).unwrap()));
    for tau in [0.2, 1.0, 2.5] {
        let a = gamma_terms(tau, &sb, &q()).unwrap().total();
        let b = gamma_terms(tau, &half, &q()).unwrap().total();
        assert!(relative_difference(b, a) < 1e-10);
    }
}

#[test]
fn log_and_linear_grids_share_endpoints() {
    let lin = zeno::analysis::tau_grid(0.05, 3.0, 60, TauSpacing::Linear).unwrap();
    let log = zeno::analysis::tau_grid(0.05, 3.0, 60, TauSpacing::Log).unwrap();
    assert_eq!(lin.first(), log.first());
    assert_eq!(lin.last(), log.last());
    assert!(lin.windows(2).all(|w| w[0] < w[1]));
    assert!(log.windows(2).all(|w| w[0] < w[1]));
}

fn curve(tau: Vec<f64>, gamma: Vec<f64>) -> DecayCurve {
    DecayCurve {
        config: baseline_sb(0.4),
        tau_grid: tau,
        gamma_values: gamma,
        survival_values: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phases_are_linear_in_strength(t in 0.0..8.0f64, g in 0.01..2.0f64, k in 0.1..5.0f64, s in 0.6..1.8f64) {
        let q = q();
        let p = SpectralParams::new(g, s, 1.0).unwrap();
        let pk = p.with_strength(g * k).unwrap();
        let zero = Temperature::Zero;
        let r = phi_r1(t, &p, &zero, &q).unwrap();
        let rk = phi_r1(t, &pk, &zero, &q).unwrap();
        prop_assert!((rk - k * r).abs() <= 1e-8 * rk.abs().max(1e-12));
        let i = phi_i1(t, &p, &q).unwrap();
        let ik = phi_i1(t, &pk, &q).unwrap();
        prop_assert!((ik - k * i).abs() <= 1e-8 * ik.abs().max(1e-12));
    }

    #[test]
    fn strong_correlation_is_bounded(t in 0.0..20.0f64, g in 0.0..2.0f64, beta in prop::option::of(0.5..20.0f64)) {
        let p = SpectralParams::ohmic(g, 1.0).unwrap();
        let temp = beta.map_or(Temperature::Zero, |b| Temperature::from_beta(b).unwrap());
        let c = corr_strong(t, &p, &temp, &q()).unwrap();
        prop_assert!(c.norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, w in 0.5..20.0f64) {
        let q = q();
        let f = |x: f64| (w * x).cos() * (-x).exp();
        let g = |x: f64| x * x;
        let lhs = integrate_1d(|x| a * f(x) + b * g(x), 0.0, 2.0, &q).unwrap();
        let ef = integrate_1d(f, 0.0, 2.0, &q).unwrap();
        let eg = integrate_1d(g, 0.0, 2.0, &q).unwrap();
        let rhs = a * ef.value + b * eg.value;
        let slack = 2.0 * (lhs.error_estimate + a.abs() * ef.error_estimate + b.abs() * eg.error_estimate) + 1e-14;
        prop_assert!((lhs.value - rhs).abs() <= slack);
    }

    #[test]
    fn transitions_are_invariant_under_affine_maps(
        ys in prop::collection::vec(-1.0..1.0f64, 3..40),
        scale in 0.1..10.0f64,
        offset in -5.0..5.0f64,
        tau_scale in 0.1..10.0f64,
    ) {
        let tau: Vec<f64> = (0..ys.len()).map(|i| 0.1 + i as f64).collect();
        let base = find_transitions(&curve(tau.clone(), ys.clone())).unwrap();
        let mapped_tau: Vec<f64> = tau.iter().map(|t| t * tau_scale).collect();
        let mapped: Vec<f64> = ys.iter().map(|y| scale * y + offset).collect();
        let moved = find_transitions(&curve(mapped_tau, mapped)).unwrap();
        prop_assert_eq!(base.extrema.len(), moved.extrema.len());
        for (a, b) in base.extrema.iter().zip(&moved.extrema) {
            prop_assert_eq!(a.kind, b.kind);
            prop_assert!((a.tau_star * tau_scale - b.tau_star).abs() <= 1e-9 * b.tau_star.abs().max(1.0));
        }
    }

    #[test]
    fn config_round_trips(
        g in 0.01..3.0f64,
        f in 0.001..0.5f64,
        eps in 0.1..5.0f64,
        steps in 3usize..200,
        lsb in any::<bool>(),
        twice_j in 1u32..20,
        beta in prop::option::of(0.1..100.0f64),
        json in any::<bool>(),
    ) {
        let mut overrides = vec![
            ("G".to_string(), g.to_string()),
            ("F".to_string(), f.to_string()),
            ("eps".to_string(), eps.to_string()),
            ("tau-steps".to_string(), steps.to_string()),
            ("format".to_string(), if json { "json" } else { "csv" }.to_string()),
        ];
        if lsb {
            overrides.push(("model".into(), "lsb".into()));
            overrides.push(("j".into(), (twice_j as f64 / 2.0).to_string()));
        }
        if let Some(b) = beta {
            overrides.push(("beta".into(), b.to_string()));
        }
        let spec = parse_config(None, &overrides).unwrap();
        let text = spec.to_config_string();
        prop_assert!(parse_config_text(&text).is_ok());
        let again = parse_config(Some(&text), &[]).unwrap();
        prop_assert_eq!(spec, again);
    }
}
