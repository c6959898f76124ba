//! Spectral densities and the bath influence phases.
//!
//! Both baths share the exponential-cutoff power-law form
//! `J(ω) = G ω^s ω_c^{1−s} e^{−ω/ω_c}`. The strong (z-coupled) bath enters
//! through `C(t) = e^{−Φ_R1(t)} e^{−iΦ_I1(t)}`, the weak (x-coupled) bath
//! through `K(t) = Φ_R2(t) − iΦ_I2(t)`.
//!
//! For an Ohmic bath at zero temperature every phase has a closed form and
//! that form is used directly. All other cases integrate the definitions over
//! `[0, ∞)`. The phase functions are only defined here for `t ≥ 0`; `Φ_I1` and
//! `Φ_I2` are odd in `t` and `Φ_R1`, `Φ_R2` even, should negative times ever be
//! needed.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadratureSpec};

/// One bath: coupling strength, Ohmicity exponent, cutoff frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    strength: f64,
    ohmicity: f64,
    cutoff: f64,
}

impl SpectralParams {
    pub fn new(strength: f64, ohmicity: f64, cutoff: f64) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "strength",
                value: strength,
                reason: "must be finite and non-negative",
            });
        }
        if !(ohmicity > 0.0 && ohmicity.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "ohmicity",
                value: ohmicity,
                reason: "must be finite and positive",
            });
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                value: cutoff,
                reason: "must be finite and positive",
            });
        }
        Ok(Self {
            strength,
            ohmicity,
            cutoff,
        })
    }

    /// Ohmic (`s = 1`) bath.
    pub fn ohmic(strength: f64, cutoff: f64) -> Result<Self> {
        Self::new(strength, 1.0, cutoff)
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn ohmicity(&self) -> f64 {
        self.ohmicity
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_ohmic(&self) -> bool {
        self.ohmicity == 1.0
    }

    /// Same bath with a different coupling strength.
    pub fn with_strength(&self, strength: f64) -> Result<Self> {
        Self::new(strength, self.ohmicity, self.cutoff)
    }

    // J(ω)/ω², written so the ω → 0 limit stays finite for ohmicity ≥ 2.
    fn density_over_square(&self, omega: f64) -> f64 {
        self.strength
            * omega.powf(self.ohmicity - 2.0)
            * self.cutoff.powf(1.0 - self.ohmicity)
            * (-omega / self.cutoff).exp()
    }
}

/// The strong/weak bath pair of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathPair {
    pub strong: SpectralParams,
    pub weak: SpectralParams,
}

impl BathPair {
    pub fn new(strong: SpectralParams, weak: SpectralParams) -> Self {
        Self { strong, weak }
    }

    /// Non-fatal warnings when the pair leaves the strong/weak regime.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.strong.strength <= self.weak.strength {
            notes.push(format!(
                "strong coupling {} does not exceed weak coupling {}",
                self.strong.strength, self.weak.strength
            ));
        }
        if self.weak.strength >= 1.0 {
            notes.push(format!(
                "weak coupling {} is not below 1",
                self.weak.strength
            ));
        }
        notes
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Zero,
    /// Finite temperature given by the inverse temperature β.
    InverseBeta(f64),
}

impl Temperature {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self::InverseBeta(beta))
        } else {
            Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must be finite and positive",
            })
        }
    }

    /// β, or `+∞` at zero temperature.
    pub fn beta(&self) -> f64 {
        match *self {
            Self::Zero => f64::INFINITY,
            Self::InverseBeta(b) => b,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Self::Zero => Ok(()),
            Self::InverseBeta(b) => Self::from_beta(b).map(|_| ()),
        }
    }

    /// Thermal weight coth(βω/2); 1 at zero temperature.
    fn coth_weight(&self, omega: f64) -> f64 {
        match *self {
            Self::Zero => 1.0,
            Self::InverseBeta(b) => 1.0 / (0.5 * b * omega).tanh(),
        }
    }
}

fn check_nonnegative(function: &'static str, argument: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            argument,
            value,
        })
    }
}

fn closed_form_applies(p: &SpectralParams, temp: &Temperature) -> bool {
    temp.is_zero() && p.is_ohmic()
}

/// `J(ω) = G ω^s ω_c^{1−s} e^{−ω/ω_c}`.
pub fn spectral_density(omega: f64, p: &SpectralParams) -> Result<f64> {
    check_nonnegative("spectral_density", "omega", omega)?;
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(p.strength
        * omega.powf(p.ohmicity)
        * p.cutoff.powf(1.0 - p.ohmicity)
        * (-omega / p.cutoff).exp())
}

/// `Φ_R1(t) = ∫₀^∞ J(ω) (4 − 4cos ωt)/ω² coth(βω/2) dω`.
pub fn phi_r1(t: f64, p: &SpectralParams, temp: &Temperature, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_r1", "t", t)?;
    if t == 0.0 || p.strength == 0.0 {
        return Ok(0.0);
    }
    if closed_form_applies(p, temp) {
        return Ok(2.0 * p.strength * (p.cutoff * p.cutoff * t * t).ln_1p());
    }
    phi_r1_integral(t, p, temp, q)
}

/// Quadrature of the `Φ_R1` definition, bypassing any closed form.
pub fn phi_r1_integral(
    t: f64,
    p: &SpectralParams,
    temp: &Temperature,
    q: &QuadratureSpec,
) -> Result<f64> {
    check_nonnegative("phi_r1", "t", t)?;
    let est = integrate_semi_infinite(
        |w| {
            // 4 − 4cos ωt = 8 sin²(ωt/2), free of cancellation at small ωt.
            let s = (0.5 * w * t).sin();
            Ok(8.0 * s * s * p.density_over_square(w) * temp.coth_weight(w))
        },
        p.cutoff,
        q,
    )?;
    Ok(est.value)
}

/// `Φ_I1(t) = ∫₀^∞ J(ω) 4 sin(ωt)/ω² dω`; temperature independent.
pub fn phi_i1(t: f64, p: &SpectralParams, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_i1", "t", t)?;
    if t == 0.0 || p.strength == 0.0 {
        return Ok(0.0);
    }
    if p.is_ohmic() {
        return Ok(4.0 * p.strength * (p.cutoff * t).atan());
    }
    phi_i1_integral(t, p, q)
}

pub fn phi_i1_integral(t: f64, p: &SpectralParams, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_i1", "t", t)?;
    let est = integrate_semi_infinite(
        |w| Ok(4.0 * (w * t).sin() * p.density_over_square(w)),
        p.cutoff,
        q,
    )?;
    Ok(est.value)
}

/// `Φ_R2(t) = ∫₀^∞ H(α) cos(αt) coth(βα/2) dα`.
pub fn phi_r2(t: f64, p: &SpectralParams, temp: &Temperature, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_r2", "t", t)?;
    if p.strength == 0.0 {
        return Ok(0.0);
    }
    if closed_form_applies(p, temp) {
        let x = p.cutoff * t;
        let d = 1.0 + x * x;
        return Ok(p.strength * p.cutoff * p.cutoff * (1.0 - x * x) / (d * d));
    }
    phi_r2_integral(t, p, temp, q)
}

pub fn phi_r2_integral(
    t: f64,
    p: &SpectralParams,
    temp: &Temperature,
    q: &QuadratureSpec,
) -> Result<f64> {
    check_nonnegative("phi_r2", "t", t)?;
    let est = integrate_semi_infinite(
        |a| {
            if a == 0.0 {
                return Ok(0.0);
            }
            Ok(spectral_density(a, p)? * (a * t).cos() * temp.coth_weight(a))
        },
        p.cutoff,
        q,
    )?;
    Ok(est.value)
}

/// `Φ_I2(t) = ∫₀^∞ H(α) sin(αt) dα`; temperature independent.
pub fn phi_i2(t: f64, p: &SpectralParams, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_i2", "t", t)?;
    if t == 0.0 || p.strength == 0.0 {
        return Ok(0.0);
    }
    if p.is_ohmic() {
        let x = p.cutoff * t;
        let d = 1.0 + x * x;
        return Ok(2.0 * p.strength * p.cutoff.powi(3) * t / (d * d));
    }
    phi_i2_integral(t, p, q)
}

pub fn phi_i2_integral(t: f64, p: &SpectralParams, q: &QuadratureSpec) -> Result<f64> {
    check_nonnegative("phi_i2", "t", t)?;
    let est =
        integrate_semi_infinite(|a| Ok(spectral_density(a, p)? * (a * t).sin()), p.cutoff, q)?;
    Ok(est.value)
}

/// Polaron-frame strong-bath correlation `C(t) = e^{−Φ_R1(t)} e^{−iΦ_I1(t)}`.
pub fn corr_strong(
    t: f64,
    strong: &SpectralParams,
    temp: &Temperature,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    let r = phi_r1(t, strong, temp, q)?;
    let i = phi_i1(t, strong, q)?;
    Ok(Complex64::from_polar((-r).exp(), -i))
}

/// Weak-bath correlation `K(t) = Φ_R2(t) − iΦ_I2(t)`.
pub fn corr_weak(
    t: f64,
    weak: &SpectralParams,
    temp: &Temperature,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    Ok(Complex64::new(
        phi_r2(t, weak, temp, q)?,
        -phi_i2(t, weak, q)?,
    ))
}

/// Polaron shift `κ = 4∫₀^∞ J(ω)/ω dω = 4 G ω_c Γ(s)`.
pub fn kappa(strong: &SpectralParams) -> Result<f64> {
    if strong.ohmicity <= 0.0 {
        return Err(Error::DivergentIntegral("kappa requires ohmicity > 0"));
    }
    Ok(4.0 * strong.strength * strong.cutoff * gamma(strong.ohmicity))
}

/// `κ` by quadrature of its integral definition.
pub fn kappa_integral(strong: &SpectralParams, q: &QuadratureSpec) -> Result<f64> {
    if strong.ohmicity <= 0.0 {
        return Err(Error::DivergentIntegral("kappa requires ohmicity > 0"));
    }
    let est = integrate_semi_infinite(
        |w| Ok(4.0 * w * strong.density_over_square(w)),
        strong.cutoff,
        q,
    )?;
    Ok(est.value)
}
