#![allow(dead_code)]

use num_complex::Complex64;
use zeno::decay::{ModelConfig, SpinJ};
use zeno::quadrature::{
    integrate_2d_naive, integrate_complex, oscillation_panels, reduce_double_complex,
    QuadratureSpec,
};
use zeno::spectral::{kappa, phi_i1, phi_i2, phi_r1, phi_r2};

pub const NAIVE_PANELS: usize = 4000;

pub fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Spin-boson baseline with strong coupling `g`.
pub fn baseline_sb(g: f64) -> ModelConfig {
    ModelConfig::ohmic_baseline(g, None).unwrap()
}

/// Large-spin baseline with strong coupling `g` and `j = 3`.
pub fn baseline_lsb(g: f64) -> ModelConfig {
    ModelConfig::ohmic_baseline(g, Some(SpinJ::new(3.0).unwrap())).unwrap()
}

/// Coefficients of the decay-rate expansion, restated independently of the
/// library's internal structure.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    pub weak: f64,
    pub triangle: f64,
    pub square: f64,
    pub boundary: f64,
    pub phase_rate: f64,
    pub boundary_shift: f64,
}

impl Coefficients {
    pub fn of(cfg: &ModelConfig) -> Self {
        let d2 = cfg.delta().powi(2);
        match cfg.spin_j() {
            None => Self {
                weak: 2.0,
                triangle: d2 / 2.0,
                square: d2 / 4.0,
                boundary: d2 / 2.0,
                phase_rate: cfg.epsilon(),
                boundary_shift: 0.0,
            },
            Some(j) => {
                let j = j.value();
                let k = kappa(&cfg.baths().strong).unwrap();
                Self {
                    weak: 4.0 * j,
                    triangle: d2 * j,
                    square: d2 * j / 2.0,
                    boundary: d2 * j,
                    phase_rate: cfg.epsilon() + k * (1.0 - 2.0 * j),
                    boundary_shift: k * (2.0 * j - 1.0),
                }
            }
        }
    }

    pub fn guard_frequency(&self, cfg: &ModelConfig) -> f64 {
        cfg.epsilon().abs() + self.boundary_shift.max(0.0)
    }
}

pub struct Phases {
    pub r1: f64,
    pub i1: f64,
    pub r2: f64,
    pub i2: f64,
}

pub fn phases(t: f64, cfg: &ModelConfig) -> Phases {
    let q = q();
    let b = cfg.baths();
    let temp = cfg.temperature();
    Phases {
        r1: phi_r1(t, &b.strong, temp, &q).unwrap(),
        i1: phi_i1(t, &b.strong, &q).unwrap(),
        r2: phi_r2(t, &b.weak, temp, &q).unwrap(),
        i2: phi_i2(t, &b.weak, &q).unwrap(),
    }
}

/// One integrand family in its original two-dimensional form. `naive` is
/// integrated over the triangle `0 ≤ t' ≤ t ≤ τ`; square-domain families are
/// folded onto the triangle as `g(t, t') + g(t', t)`.
pub struct Family {
    pub name: &'static str,
    pub weight: f64,
    pub naive: Box<dyn Fn(f64, f64) -> f64 + Sync>,
}

impl Family {
    pub fn naive_value(&self, tau: f64, panels: usize) -> f64 {
        integrate_2d_naive(&self.naive, tau, panels).unwrap()
    }

    /// `weight/τ · ∬`, the family's contribution to `Γ`.
    pub fn naive_term(&self, tau: f64, panels: usize) -> f64 {
        self.weight / tau * self.naive_value(tau, panels)
    }
}

/// The five decay-rate families, in the order of `DecayTerms::terms`.
pub fn gamma_families(cfg: &ModelConfig, tau: f64) -> Vec<Family> {
    let c = Coefficients::of(cfg);
    let eps = cfg.epsilon();
    let phi = c.phase_rate;
    let lambda = c.boundary_shift;
    let (a, b, d, e) = (*cfg, *cfg, *cfg, *cfg);
    vec![
        Family {
            name: "weak_cos",
            weight: c.weak,
            naive: Box::new(move |_t, tp| {
                let p = phases(tp, &a);
                (-p.r1).exp() * (phi * tp - p.i1).cos() * p.r2
            }),
        },
        Family {
            name: "weak_sin",
            weight: c.weak,
            naive: Box::new(move |_t, tp| {
                let p = phases(tp, &b);
                (-p.r1).exp() * (phi * tp - p.i1).sin() * p.i2
            }),
        },
        Family {
            name: "triangle",
            weight: c.triangle,
            naive: Box::new(move |_t, tp| {
                let p = phases(tp, &d);
                (-p.r1).exp() * (phi * tp - p.i1).cos()
            }),
        },
        Family {
            name: "square",
            weight: c.square,
            naive: Box::new(move |t, tp| 2.0 * (eps * (t - tp)).cos()),
        },
        Family {
            name: "boundary",
            weight: -c.boundary,
            naive: Box::new(move |t, tp| {
                let g = |x: f64, y: f64| {
                    let p = phases(y, &e);
                    (-p.r1).exp() * (eps * (x - tau) + (eps - lambda) * y - p.i1).cos()
                };
                g(t, tp) + g(tp, t)
            }),
        },
    ]
}

/// The survival-probability families: real and imaginary parts of the two
/// complex triangle integrals, the `C(0)` square, and the boundary product.
/// Each entry carries its naive integrand and the value from the library's
/// one-dimensional quadrature.
pub fn survival_families(cfg: &ModelConfig, tau: f64) -> Vec<(Family, f64)> {
    let c = Coefficients::of(cfg);
    let q = q();
    let eps = cfg.epsilon();
    let phi = c.phase_rate;
    let lambda = c.boundary_shift;
    let panels = oscillation_panels(tau, c.guard_frequency(cfg));

    let corr = |_u: f64, p: &Phases| Complex64::from_polar((-p.r1).exp(), -p.i1);
    let rot = |rate: f64, u: f64| Complex64::from_polar(1.0, rate * u);
    let ck = reduce_double_complex(
        |u| {
            let p = phases(u, cfg);
            Ok(corr(u, &p) * Complex64::new(p.r2, -p.i2) * rot(phi, u))
        },
        tau,
        panels,
        &q,
    )
    .unwrap()
    .value;
    let cc = reduce_double_complex(
        |u| Ok(corr(u, &phases(u, cfg)) * rot(phi, u)),
        tau,
        panels,
        &q,
    )
    .unwrap()
    .value;
    let square = 4.0 / (eps * eps) * (0.5 * eps * tau).sin().powi(2);
    let inner = integrate_complex(
        |u| Ok(corr(u, &phases(u, cfg)) * rot(eps - lambda, u)),
        0.0,
        tau,
        panels,
        &q,
    )
    .unwrap()
    .value;
    let outer = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -eps * tau))
        / Complex64::new(0.0, eps);
    let boundary = (outer * inner).re;

    let weak_part = move |cfg: ModelConfig, imag: bool| -> Box<dyn Fn(f64, f64) -> f64 + Sync> {
        Box::new(move |_t, tp| {
            let p = phases(tp, &cfg);
            let v =
                Complex64::from_polar((-p.r1).exp(), phi * tp - p.i1) * Complex64::new(p.r2, -p.i2);
            if imag {
                v.im
            } else {
                v.re
            }
        })
    };
    let strong_part = move |cfg: ModelConfig, imag: bool| -> Box<dyn Fn(f64, f64) -> f64 + Sync> {
        Box::new(move |_t, tp| {
            let p = phases(tp, &cfg);
            let v = Complex64::from_polar((-p.r1).exp(), phi * tp - p.i1);
            if imag {
                v.im
            } else {
                v.re
            }
        })
    };
    let e = *cfg;
    vec![
        (
            Family {
                name: "ck_re",
                weight: -c.weak,
                naive: weak_part(*cfg, false),
            },
            ck.re,
        ),
        (
            Family {
                name: "ck_im",
                weight: -c.weak,
                naive: weak_part(*cfg, true),
            },
            ck.im,
        ),
        (
            Family {
                name: "c_re",
                weight: -c.triangle,
                naive: strong_part(*cfg, false),
            },
            cc.re,
        ),
        (
            Family {
                name: "c_im",
                weight: -c.triangle,
                naive: strong_part(*cfg, true),
            },
            cc.im,
        ),
        (
            Family {
                name: "square",
                weight: -c.square,
                naive: Box::new(move |t, tp| 2.0 * (eps * (t - tp)).cos()),
            },
            square,
        ),
        (
            Family {
                name: "boundary",
                weight: c.boundary,
                naive: Box::new(move |t, tp| {
                    let g = |x: f64, y: f64| {
                        let p = phases(y, &e);
                        (-p.r1).exp() * (eps * (x - tau) + (eps - lambda) * y - p.i1).cos()
                    };
                    g(t, tp) + g(tp, t)
                }),
            },
            boundary,
        ),
    ]
}

/// Survival probability assembled from the naive double integrals, with one
/// Richardson step on the `O(h²)` midpoint error.
pub fn naive_survival(cfg: &ModelConfig, tau: f64, panels: usize) -> f64 {
    let mut s = 1.0;
    for (f, _) in survival_families(cfg, tau) {
        if f.name.ends_with("_im") {
            continue;
        }
        let coarse = f.naive_value(tau, panels);
        let fine = f.naive_value(tau, 2 * panels);
        s += f.weight * (4.0 * fine - coarse) / 3.0;
    }
    s
}

pub fn relative_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
