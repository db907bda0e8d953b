//! # steinkit
//!
//! Maximum mean discrepancies and Langevin kernel Stein discrepancies.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`kernel`] | scalar / diagonal matrix base kernels with analytic derivative oracles, PD-preserving combinators, spectral ironing |
//! | [`target`] | target distributions (log-density, score, samplers) and tail diagnostics |
//! | [`stein`] | Stein kernels, the Langevin Stein operator, bounded and score-tilted constructions, P-centered kernels |
//! | [`discrepancy`] | V/U-statistic and quadrature estimators of KSD and MMD, embeddability diagnostics |
//! | [`inference`] | wild-bootstrap goodness-of-fit test, SVGD, sample ranking |
//! | [`experiments`] | escape sequences, convergence curves and boundedness scans |
//!
//! A Stein kernel turns a base kernel `k` and the score `s_p = ∇ log p` of a
//! target into a kernel whose RKHS functions all have zero mean under `p`:
//!
//! ```text
//! k_p(x, y) = Σᵢ ∂_{xⁱ}∂_{yⁱ}k + sᵢ(x) ∂_{yⁱ}k + sᵢ(y) ∂_{xⁱ}k + sᵢ(x) sᵢ(y) k
//! ```
//!
//! The KSD of a sample `Q` is then `√(∬ k_p dQ dQ)`; no normalising constant
//! of `p` is needed.
//!
//! ```rust
//! use steinkit::{kernel::ScalarKernel, target::Target, stein::SteinKernel};
//! use steinkit::discrepancy::{ksd_v_stat, SampleSet};
//!
//! let p = Target::gaussian(vec![0.0], vec![1.0]).unwrap();
//! let k = ScalarKernel::imq(1, 1.0, 0.5).unwrap();
//! let sk = SteinKernel::new(k, p).unwrap();
//! let q = SampleSet::from_rows(&[vec![0.0]]).unwrap();
//! let est = ksd_v_stat(&sk, &q).unwrap();
//! assert!((est.value - 1.0).abs() < 1e-12);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discrepancy;
pub mod experiments;
pub mod inference;
pub mod kernel;
pub mod quad;
pub mod reduce;
pub mod rng;
pub mod stein;
pub mod target;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("tilt function must be strictly positive, got {value} at {point:?}")]
    NonPositiveTilt { value: f64, point: Vec<f64> },

    #[error("custom kernel is missing the `{0}` derivative oracle")]
    MissingOracle(&'static str),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("density is not normalised on the domain: integral = {integral}")]
    NotNormalized { integral: f64 },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("SVGD diverged at iteration {iteration}")]
    Diverged { iteration: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
