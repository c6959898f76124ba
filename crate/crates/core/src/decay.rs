//! Survival probabilities and modified decay rates.
//!
//! Both models share one structure. Writing `C(t)` and `K(t)` for the strong-
//! and weak-bath correlation functions, the survival probability after one
//! measurement interval `τ` is
//!
//! ```text
//! s(τ) = 1 − a·Re∫∫ C K e^{iφt'} − b·Re∫∫ C e^{iφt'}
//!          − c·|∫₀^τ e^{iεt} dt|² C(0) + d·Re[∫₀^τ e^{iε(t−τ)} dt · ∫₀^τ C(t') e^{i(ε−λ)t'} dt']
//! ```
//!
//! where `∫∫` is the triangle `0 ≤ t' ≤ t ≤ τ`. The spin-boson model has
//! `a = 2, b = Δ²/2, c = Δ²/4, d = Δ²/2, φ = ε, λ = 0`; the large-spin model
//! has `a = 4j, b = Δ²j, d = Δ²j, φ = ε + κ(1 − 2j), λ = κ(2j − 1)` and
//! `c = Δ²j/2` (or `Δ²j`, see [`SquareTermConvention`]). At `j = 1/2` the
//! large-spin coefficients collapse onto the spin-boson ones.
//!
//! The decay rate is evaluated as the five-term real expansion of `(1 − s)/τ`
//! rather than from `s` itself; [`gamma_from_survival`] gives the logarithmic
//! rate `−ln(s)/τ` for comparison.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_complex, oscillation_panels, reduce_double_complex, try_integrate_1d,
    try_reduce_double, QuadratureSpec,
};
use crate::spectral::{corr_strong, corr_weak, kappa, phi_i1, phi_i2, phi_r1, phi_r2};
use crate::spectral::{BathPair, SpectralParams, Temperature};

/// Collective spin `j = N/2`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinJ {
    twice: u32,
}

impl SpinJ {
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if twice >= 1.0 && twice.fract() == 0.0 && twice <= u32::MAX as f64 {
            Ok(Self {
                twice: twice as u32,
            })
        } else {
            Err(Error::InvalidParameter {
                name: "j",
                value: j,
                reason: "must be a positive half-integer",
            })
        }
    }

    pub fn from_twice(twice: u32) -> Result<Self> {
        Self::new(twice as f64 / 2.0)
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// Coefficient of the `C(0)` square-domain term in the large-spin survival.
///
/// The two available forms differ by a factor of two on that term. With
/// `DecayRateDisplay`, `(1 − s)/τ` equals the five-term decay rate exactly and
/// the `Δ²` contributions cancel at `O(τ)`. `SurvivalDisplay` keeps the
/// coefficient `Δ²j`, under which they do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SquareTermConvention {
    #[default]
    DecayRateDisplay,
    SurvivalDisplay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormulaOptions {
    /// Spin-boson boundary term with envelope `(1 + ω_c²t²)⁻¹` instead of
    /// `e^{−Φ_R1(t)}`. Comparison only.
    pub literal_envelope: bool,
    pub square_term: SquareTermConvention,
}

/// A complete physical scenario. `spin_j` absent selects the spin-boson model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    epsilon: f64,
    delta: f64,
    baths: BathPair,
    temperature: Temperature,
    spin_j: Option<SpinJ>,
    options: FormulaOptions,
}

impl ModelConfig {
    pub fn new(
        epsilon: f64,
        delta: f64,
        baths: BathPair,
        temperature: Temperature,
        spin_j: Option<SpinJ>,
    ) -> Result<Self> {
        if !(epsilon != 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "must be finite and non-zero",
            });
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "must be finite and non-negative",
            });
        }
        temperature.validate()?;
        Ok(Self {
            epsilon,
            delta,
            baths,
            temperature,
            spin_j,
            options: FormulaOptions::default(),
        })
    }

    /// Ohmic, zero-temperature scenario with `ε = 1`, `Δ = 0.05`,
    /// `ω_c = α_c = 1`, `F = 0.03` and the given strong coupling.
    pub fn ohmic_baseline(strong: f64, spin_j: Option<SpinJ>) -> Result<Self> {
        let baths = BathPair::new(
            SpectralParams::ohmic(strong, 1.0)?,
            SpectralParams::ohmic(0.03, 1.0)?,
        );
        Self::new(1.0, 0.05, baths, Temperature::Zero, spin_j)
    }

    pub fn with_options(mut self, options: FormulaOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(
            epsilon,
            self.delta,
            self.baths,
            self.temperature,
            self.spin_j,
        )
        .map(|c| c.with_options(self.options))
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(
            self.epsilon,
            delta,
            self.baths,
            self.temperature,
            self.spin_j,
        )
        .map(|c| c.with_options(self.options))
    }

    pub fn with_baths(mut self, baths: BathPair) -> Self {
        self.baths = baths;
        self
    }

    pub fn with_spin_j(mut self, spin_j: Option<SpinJ>) -> Self {
        self.spin_j = spin_j;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn baths(&self) -> &BathPair {
        &self.baths
    }

    pub fn temperature(&self) -> &Temperature {
        &self.temperature
    }

    pub fn spin_j(&self) -> Option<SpinJ> {
        self.spin_j
    }

    pub fn options(&self) -> FormulaOptions {
        self.options
    }

    fn require_spin(&self, function: &'static str) -> Result<f64> {
        self.spin_j.map(|j| j.value()).ok_or_else(|| {
            Error::Configuration(format!("{function} requires the large-spin model (j)"))
        })
    }
}

/// One measurement interval with its survival probability and decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint {
    pub tau: f64,
    pub survival: f64,
    pub gamma: f64,
}

impl DecayPoint {
    /// Decay rate from the logarithmic route.
    pub fn from_survival(tau: f64, survival: f64) -> Result<Self> {
        Ok(Self {
            tau,
            survival,
            gamma: gamma_from_survival(tau, survival)?,
        })
    }
}

/// The five contributions to the decay rate, in display order: the two
/// weak-bath triangle terms, the `Δ²` triangle term, the `sin²` term and the
/// boundary term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayTerms {
    pub terms: [f64; 5],
    /// Large-spin only: the `sin²` term with the survival-display coefficient,
    /// for comparison against `terms[3]`.
    pub alternative_sin2_term: Option<f64>,
}

impl DecayTerms {
    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

fn check_tau(function: &'static str, tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            argument: "tau",
            value: tau,
        })
    }
}

/// Coefficients shared by both models.
#[derive(Debug, Clone, Copy)]
struct Structure {
    /// Weight of the `C·K` triangle integral.
    weak: f64,
    /// Weight of the `Δ²` triangle integral.
    triangle: f64,
    /// Weight of the `C(0)` square integral.
    square: f64,
    /// Weight of the boundary square integral.
    boundary: f64,
    /// Angular frequency multiplying `t'` in the triangle phases.
    triangle_rate: f64,
    /// Extra angular frequency subtracted in the boundary phase.
    boundary_shift: f64,
    guard_frequency: f64,
}

impl Structure {
    fn spin_boson(cfg: &ModelConfig) -> Self {
        let d2 = cfg.delta * cfg.delta;
        Self {
            weak: 2.0,
            triangle: d2 / 2.0,
            square: d2 / 4.0,
            boundary: d2 / 2.0,
            triangle_rate: cfg.epsilon,
            boundary_shift: 0.0,
            guard_frequency: cfg.epsilon.abs(),
        }
    }

    fn large_spin(cfg: &ModelConfig, j: f64, convention: SquareTermConvention) -> Result<Self> {
        let d2 = cfg.delta * cfg.delta;
        let k = kappa(&cfg.baths.strong)?;
        let square = match convention {
            SquareTermConvention::DecayRateDisplay => d2 * j / 2.0,
            SquareTermConvention::SurvivalDisplay => d2 * j,
        };
        Ok(Self {
            weak: 4.0 * j,
            triangle: d2 * j,
            square,
            boundary: d2 * j,
            triangle_rate: cfg.epsilon + k * (1.0 - 2.0 * j),
            boundary_shift: k * (2.0 * j - 1.0),
            guard_frequency: cfg.epsilon.abs() + k * (2.0 * j - 1.0).max(0.0),
        })
    }

    fn panels(&self, tau: f64) -> usize {
        oscillation_panels(tau, self.guard_frequency)
    }
}

fn strong_phases(t: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<(f64, f64)> {
    let p = &cfg.baths.strong;
    Ok((phi_r1(t, p, &cfg.temperature, q)?, phi_i1(t, p, q)?))
}

fn weak_phases(t: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<(f64, f64)> {
    let p = &cfg.baths.weak;
    Ok((phi_r2(t, p, &cfg.temperature, q)?, phi_i2(t, p, q)?))
}

/// `D₁(t) = εt + κ(1 − 2j)t − Φ_I1(t)`.
pub fn d1_phase(t: f64, cfg: &ModelConfig, j: f64, q: &QuadratureSpec) -> Result<f64> {
    let k = kappa(&cfg.baths.strong)?;
    let i1 = phi_i1(t, &cfg.baths.strong, q)?;
    Ok(cfg.epsilon * t + k * (1.0 - 2.0 * j) * t - i1)
}

/// `D₂(t) = −κ(2j − 1)t + ε(t − τ/2) − Φ_I1(t)`.
pub fn d2_phase(t: f64, tau: f64, cfg: &ModelConfig, j: f64, q: &QuadratureSpec) -> Result<f64> {
    let k = kappa(&cfg.baths.strong)?;
    let i1 = phi_i1(t, &cfg.baths.strong, q)?;
    Ok(-k * (2.0 * j - 1.0) * t + cfg.epsilon * (t - 0.5 * tau) - i1)
}

/// The five real decay-rate terms for a given coefficient structure.
fn decay_terms(
    tau: f64,
    cfg: &ModelConfig,
    st: &Structure,
    literal_envelope: bool,
    q: &QuadratureSpec,
) -> Result<[f64; 5]> {
    let panels = st.panels(tau);
    let eps = cfg.epsilon;
    let triangle_phase = |u: f64| -> Result<(f64, f64)> {
        let (r1, i1) = strong_phases(u, cfg, q)?;
        Ok(((-r1).exp(), st.triangle_rate * u - i1))
    };

    let weak_cos = try_reduce_double(
        |u| {
            let (env, ph) = triangle_phase(u)?;
            let (r2, _) = weak_phases(u, cfg, q)?;
            Ok(env * ph.cos() * r2)
        },
        tau,
        panels,
        q,
    )?;
    let weak_sin = try_reduce_double(
        |u| {
            let (env, ph) = triangle_phase(u)?;
            let (_, i2) = weak_phases(u, cfg, q)?;
            Ok(env * ph.sin() * i2)
        },
        tau,
        panels,
        q,
    )?;
    let tri = try_reduce_double(
        |u| {
            let (env, ph) = triangle_phase(u)?;
            Ok(env * ph.cos())
        },
        tau,
        panels,
        q,
    )?;

    let wc = cfg.baths.strong.cutoff();
    let edge = try_integrate_1d(
        |t| {
            let (r1, i1) = strong_phases(t, cfg, q)?;
            let env = if literal_envelope {
                1.0 / (1.0 + wc * wc * t * t)
            } else {
                (-r1).exp()
            };
            Ok(env * (eps * (t - 0.5 * tau) - st.boundary_shift * t - i1).cos())
        },
        0.0,
        tau,
        panels,
        q,
    )?;

    let half = (0.5 * eps * tau).sin();
    // The square-term weights carry |∫e^{iεt}|² = (4/ε²) sin²(ετ/2) and
    // ∫e^{iε(t−τ)} = (2/ε) e^{−iετ/2} sin(ετ/2).
    Ok([
        st.weak / tau * weak_cos.value,
        st.weak / tau * weak_sin.value,
        st.triangle / tau * tri.value,
        4.0 * st.square / (tau * eps * eps) * half * half,
        -2.0 * st.boundary / (tau * eps) * half * edge.value,
    ])
}

/// Survival probability for a given coefficient structure, from the complex
/// correlation functions.
fn survival_from(tau: f64, cfg: &ModelConfig, st: &Structure, q: &QuadratureSpec) -> Result<f64> {
    let panels = st.panels(tau);
    let eps = cfg.epsilon;
    let strong = &cfg.baths.strong;
    let weak = &cfg.baths.weak;
    let temp = &cfg.temperature;

    let rotate = |rate: f64, u: f64| Complex64::from_polar(1.0, rate * u);
    let weak_tri = reduce_double_complex(
        |u| {
            Ok(corr_strong(u, strong, temp, q)?
                * corr_weak(u, weak, temp, q)?
                * rotate(st.triangle_rate, u))
        },
        tau,
        panels,
        q,
    )?;
    let tri = reduce_double_complex(
        |u| Ok(corr_strong(u, strong, temp, q)? * rotate(st.triangle_rate, u)),
        tau,
        panels,
        q,
    )?;
    let c0 = corr_strong(0.0, strong, temp, q)?;
    let half = (0.5 * eps * tau).sin();
    let square = 4.0 / (eps * eps) * half * half * c0.re;
    let boundary_inner = integrate_complex(
        |u| Ok(corr_strong(u, strong, temp, q)? * rotate(eps - st.boundary_shift, u)),
        0.0,
        tau,
        panels,
        q,
    )?;
    // ∫₀^τ e^{iε(t−τ)} dt
    let outer = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -eps * tau))
        / Complex64::new(0.0, eps);
    let boundary = (outer * boundary_inner.value).re;

    let s = 1.0 - st.weak * weak_tri.value.re - st.triangle * tri.value.re - st.square * square
        + st.boundary * boundary;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::PerturbativeBreakdown { tau, survival: s });
    }
    if 1.0 - s > 0.1 {
        log::warn!(
            "1 - s = {} at tau = {tau}; second-order expansion is marginal",
            1.0 - s
        );
    }
    Ok(s)
}

/// Spin-boson survival probability `s⁽⁰⁾(τ)`.
pub fn survival_sb(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    check_tau("survival_sb", tau)?;
    survival_from(tau, cfg, &Structure::spin_boson(cfg), q)
}

/// Per-term spin-boson decay rate.
pub fn gamma_sb_terms(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<DecayTerms> {
    check_tau("gamma_sb", tau)?;
    let terms = decay_terms(
        tau,
        cfg,
        &Structure::spin_boson(cfg),
        cfg.options.literal_envelope,
        q,
    )?;
    Ok(DecayTerms {
        terms,
        alternative_sin2_term: None,
    })
}

/// Spin-boson modified decay rate `Γ⁽⁰⁾(τ)`.
pub fn gamma_sb(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    gamma_sb_terms(tau, cfg, q).map(|t| t.total())
}

/// `Γ = −ln(s)/τ`.
pub fn gamma_from_survival(tau: f64, survival: f64) -> Result<f64> {
    check_tau("gamma_from_survival", tau)?;
    if !(survival > 0.0 && survival <= 1.0) {
        return Err(Error::Domain {
            function: "gamma_from_survival",
            argument: "survival",
            value: survival,
        });
    }
    Ok(-survival.ln() / tau)
}

/// Large-spin survival probability `s⁽¹⁾(τ)`.
pub fn survival_ls(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    check_tau("survival_ls", tau)?;
    let j = cfg.require_spin("survival_ls")?;
    let st = Structure::large_spin(cfg, j, cfg.options.square_term)?;
    survival_from(tau, cfg, &st, q)
}

/// Per-term large-spin decay rate; also reports the alternative `sin²` term.
pub fn gamma_ls_terms(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<DecayTerms> {
    check_tau("gamma_ls", tau)?;
    let j = cfg.require_spin("gamma_ls")?;
    let st = Structure::large_spin(cfg, j, SquareTermConvention::DecayRateDisplay)?;
    let terms = decay_terms(tau, cfg, &st, false, q)?;
    Ok(DecayTerms {
        terms,
        alternative_sin2_term: Some(2.0 * terms[3]),
    })
}

/// Large-spin modified decay rate `Γ⁽¹⁾(τ)`.
pub fn gamma_ls(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    gamma_ls_terms(tau, cfg, q).map(|t| t.total())
}

/// Survival for whichever model `cfg` describes.
pub fn survival(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    match cfg.spin_j {
        Some(_) => survival_ls(tau, cfg, q),
        None => survival_sb(tau, cfg, q),
    }
}

/// Decay-rate terms for whichever model `cfg` describes.
pub fn gamma_terms(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<DecayTerms> {
    match cfg.spin_j {
        Some(_) => gamma_ls_terms(tau, cfg, q),
        None => gamma_sb_terms(tau, cfg, q),
    }
}

pub fn gamma(tau: f64, cfg: &ModelConfig, q: &QuadratureSpec) -> Result<f64> {
    gamma_terms(tau, cfg, q).map(|t| t.total())
}

/// Survival after `n` measurements, `s(τ)^n = e^{−Γ n τ}`.
pub fn n_measurement_survival(
    tau: f64,
    n: u32,
    cfg: &ModelConfig,
    q: &QuadratureSpec,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain {
            function: "n_measurement_survival",
            argument: "n",
            value: 0.0,
        });
    }
    Ok(survival(tau, cfg, q)?.powf(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralParams;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn sb(g: f64) -> ModelConfig {
        ModelConfig::ohmic_baseline(g, None).unwrap()
    }

    fn ls(g: f64, j: f64) -> ModelConfig {
        ModelConfig::ohmic_baseline(g, Some(SpinJ::new(j).unwrap())).unwrap()
    }

    fn quiet(cfg: ModelConfig, f: f64, delta: f64) -> ModelConfig {
        let baths = BathPair::new(
            cfg.baths().strong,
            cfg.baths().weak.with_strength(f).unwrap(),
        );
        cfg.with_baths(baths).with_delta(delta).unwrap()
    }

    #[test]
    fn spin_validation() {
        assert!(SpinJ::new(0.0).is_err());
        assert!(SpinJ::new(0.75).is_err());
        assert!(SpinJ::new(-1.0).is_err());
        assert_eq!(SpinJ::new(1.5).unwrap().value(), 1.5);
        assert_eq!(SpinJ::from_twice(6).unwrap().value(), 3.0);
    }

    #[test]
    fn config_validation() {
        let baths = *sb(0.4).baths();
        assert!(ModelConfig::new(0.0, 0.05, baths, Temperature::Zero, None).is_err());
        assert!(ModelConfig::new(1.0, -0.05, baths, Temperature::Zero, None).is_err());
        assert!(ModelConfig::new(1.0, 0.05, baths, Temperature::InverseBeta(-1.0), None).is_err());
    }

    #[test]
    fn gamma_from_survival_values() {
        assert_eq!(gamma_from_survival(2.0, 1.0).unwrap(), 0.0);
        assert!((gamma_from_survival(1.0, (-0.1f64).exp()).unwrap() - 0.1).abs() < 1e-15);
        let g = gamma_from_survival(0.5, 0.99).unwrap();
        assert!((g - 0.020_100_671_707_002_9).abs() < 1e-15);
        assert!(((-g * 0.5).exp() - 0.99).abs() < 1e-15);
        assert!(gamma_from_survival(1.0, 0.0).is_err());
        assert!(gamma_from_survival(1.0, -0.5).is_err());
        assert!(gamma_from_survival(0.0, 0.5).is_err());
    }

    #[test]
    fn no_coupling_no_decay() {
        let cfg = quiet(sb(0.4), 0.0, 0.0);
        for &tau in &[0.1, 1.0, 2.5] {
            assert_eq!(survival_sb(tau, &cfg, &q()).unwrap(), 1.0);
            assert_eq!(gamma_sb(tau, &cfg, &q()).unwrap(), 0.0);
        }
    }

    #[test]
    fn survival_tends_to_one() {
        let s = survival_sb(1e-6, &sb(0.4), &q()).unwrap();
        assert!((1.0 - s) < 1e-12);
        let s = survival_ls(1e-6, &ls(0.4, 3.0), &q()).unwrap();
        assert!((1.0 - s) < 1e-11);
    }

    #[test]
    fn zeno_limit_ratio() {
        let g = gamma_sb(1e-3, &sb(0.4), &q()).unwrap();
        assert!((g / 1e-3 - 0.03).abs() < 0.03 * 0.01);
        let g = gamma_ls(1e-3, &ls(0.4, 3.0), &q()).unwrap();
        assert!((g / 1e-3 - 0.18).abs() < 0.18 * 0.01);
    }

    #[test]
    fn half_spin_reduces_to_spin_boson() {
        let a = gamma_sb_terms(1.3, &sb(0.8), &q()).unwrap();
        let b = gamma_ls_terms(1.3, &ls(0.8, 0.5), &q()).unwrap();
        for k in 0..5 {
            assert!((a.terms[k] - b.terms[k]).abs() <= 1e-14 * a.terms[k].abs().max(1e-3));
        }
        let sa = survival_sb(1.3, &sb(0.8), &q()).unwrap();
        let sl = survival_ls(1.3, &ls(0.8, 0.5), &q()).unwrap();
        assert!((sa - sl).abs() < 1e-14);
    }

    #[test]
    fn d_phases() {
        let cfg = ls(1.5, 3.0);
        assert_eq!(d1_phase(0.0, &cfg, 3.0, &q()).unwrap(), 0.0);
        let v = d1_phase(1.0, &cfg, 3.0, &q()).unwrap();
        assert!((v - (1.0 - 30.0 - 1.5 * std::f64::consts::PI)).abs() < 1e-12);
        assert!((v + 33.712389).abs() < 1e-6);
        let half = d1_phase(0.7, &cfg, 0.5, &q()).unwrap();
        let i1 = phi_i1(0.7, &cfg.baths().strong, &q()).unwrap();
        assert!((half - (0.7 - i1)).abs() < 1e-15);
        let d2 = d2_phase(0.0, 2.0, &cfg, 3.0, &q()).unwrap();
        assert!((d2 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_ls_requires_spin() {
        assert!(matches!(
            gamma_ls(1.0, &sb(0.4), &q()),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn alternative_sin2_term_is_reported() {
        let t = gamma_ls_terms(1.0, &ls(0.4, 3.0), &q()).unwrap();
        assert_eq!(t.alternative_sin2_term, Some(2.0 * t.terms[3]));
        assert!(gamma_sb_terms(1.0, &sb(0.4), &q())
            .unwrap()
            .alternative_sin2_term
            .is_none());
    }

    #[test]
    fn survival_convention_changes_only_square_term() {
        let cfg = ls(0.4, 3.0);
        let lit = cfg.with_options(FormulaOptions {
            square_term: SquareTermConvention::SurvivalDisplay,
            ..FormulaOptions::default()
        });
        let tau = 0.8;
        let a = survival_ls(tau, &cfg, &q()).unwrap();
        let b = survival_ls(tau, &lit, &q()).unwrap();
        let t4 = gamma_ls_terms(tau, &cfg, &q()).unwrap().terms[3];
        assert!(((a - b) - t4 * tau).abs() < 1e-13);
    }

    #[test]
    fn literal_envelope_changes_only_boundary_term() {
        let cfg = sb(0.8);
        let lit = cfg.with_options(FormulaOptions {
            literal_envelope: true,
            ..FormulaOptions::default()
        });
        let a = gamma_sb_terms(1.5, &cfg, &q()).unwrap();
        let b = gamma_sb_terms(1.5, &lit, &q()).unwrap();
        assert_eq!(a.terms[..4], b.terms[..4]);
        assert!(a.terms[4] != b.terms[4]);
    }

    #[test]
    fn n_measurements() {
        let cfg = sb(0.4);
        let s = survival_sb(1.0, &cfg, &q()).unwrap();
        assert_eq!(n_measurement_survival(1.0, 1, &cfg, &q()).unwrap(), s);
        let s10 = n_measurement_survival(1.0, 10, &cfg, &q()).unwrap();
        let g = gamma_from_survival(1.0, s).unwrap();
        assert!((s10 - (-10.0 * g).exp()).abs() < 1e-14);
        assert!(n_measurement_survival(1.0, 0, &cfg, &q()).is_err());
        let off = quiet(cfg, 0.0, 0.0);
        assert_eq!(n_measurement_survival(0.7, 25, &off, &q()).unwrap(), 1.0);
    }

    #[test]
    fn finite_temperature_path_runs() {
        let baths = BathPair::new(
            SpectralParams::ohmic(0.4, 1.0).unwrap(),
            SpectralParams::ohmic(0.03, 1.0).unwrap(),
        );
        let hot =
            ModelConfig::new(1.0, 0.05, baths, Temperature::from_beta(5.0).unwrap(), None).unwrap();
        let g = gamma_sb(0.5, &hot, &q()).unwrap();
        let s = survival_sb(0.5, &hot, &q()).unwrap();
        assert!(g.is_finite());
        assert!(((1.0 - s) / 0.5 - g).abs() < 1e-8);
    }
}
