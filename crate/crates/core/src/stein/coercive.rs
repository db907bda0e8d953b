//! Coercive Stein function `h = S_p(g)` with `g(x) = −x (a² + ‖x‖²)^{α−1}`.
//!
//! Under generalized dissipativity with rate `u` and `α > 1 − u`, `h` grows
//! without bound while staying bounded below, so it lies in the Stein RKHS of
//! an IMQ base with exponent `γ` when `α < (1 − γ)/2`.

use crate::target::Target;
use crate::{positive, Error, Result};

/// `S_p(g)(x) = −⟨s_p(x), x⟩ f − d f + 2(1 − α)‖x‖² f / (a² + ‖x‖²)` where
/// `f = (a² + ‖x‖²)^{α−1}`.
pub fn coercive_stein_function(target: &Target, a: f64, alpha: f64, x: &[f64]) -> Result<f64> {
    positive("a", a)?;
    if !alpha.is_finite() || alpha >= 1.0 {
        return Err(Error::InvalidParameter { name: "alpha", reason: format!("must be below 1, got {alpha}") });
    }
    let s = target.score(x)?;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let inner: f64 = s.iter().zip(x).map(|(a, b)| a * b).sum();
    let base = a * a + r2;
    let f = base.powf(alpha - 1.0);
    let d = x.len() as f64;
    let h = -inner * f - d * f + 2.0 * (1.0 - alpha) * r2 * f / base;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::NonFinite(format!("coercive function at {x:?}")))
    }
}

/// Whether `1 − u < α < (1 − γ)/2`; logs a warning otherwise.
pub fn check_coercive_exponent(alpha: f64, u: f64, gamma: f64) -> bool {
    let (lo, hi) = (1.0 - u, 0.5 * (1.0 - gamma));
    let ok = alpha > lo && alpha < hi;
    if !ok {
        log::warn!("alpha = {alpha} lies outside ({lo}, {hi}); coercivity is not certified");
    }
    ok
}
