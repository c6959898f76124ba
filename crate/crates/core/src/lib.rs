//! Modified decay rates of the spin-boson and large spin-boson models with one
//! strongly and one weakly coupled harmonic bath, and the Zeno/anti-Zeno
//! structure of those rates as functions of the measurement interval.
//!
//! Modules build on each other bottom-up: [`quadrature`] integrates,
//! [`spectral`] provides the bath phases and correlation functions,
//! [`decay`] evaluates survival probabilities and decay rates, and
//! [`analysis`] turns those into curves, sweeps and transition reports.
//! [`config`], [`emit`] and [`cli`] make up the `zeno` command.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod decay;
pub mod emit;
pub mod error;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
