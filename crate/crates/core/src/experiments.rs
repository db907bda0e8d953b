//! Tabulated experiments on convergence control and its failure.
//!
//! The failure sequence is `δ_{n·e₁}` (a point mass escaping along the first
//! axis). Convergence curves use one-dimensional targets so every KSD is a
//! quadrature value and every Wasserstein-1 distance is exact.

use serde::{Deserialize, Serialize};

use crate::discrepancy::ksd_quadrature_1d;
use crate::quad;
use crate::stein::SteinKernel;
use crate::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EscapeRow {
    pub n: usize,
    /// First coordinate of `n·e₁`.
    pub point: f64,
    /// `k_p(n·e₁, n·e₁)`.
    pub kp_diag: f64,
    /// `KSD(δ_{n·e₁}) = √k_p(n·e₁, n·e₁)`.
    pub ksd_delta: f64,
}

fn axis_point(d: usize, t: f64) -> Vec<f64> {
    let mut x = vec![0.0; d];
    x[0] = t;
    x
}

/// `k_p(n·e₁, n·e₁)` and `KSD(δ_{n·e₁})` for `n = 1, …, n_max`.
pub fn escape_sequence(sk: &SteinKernel, n_max: usize) -> Result<Vec<EscapeRow>> {
    if n_max == 0 {
        return Err(Error::EmptyInput("escape sequence length"));
    }
    (1..=n_max)
        .map(|n| {
            let x = axis_point(sk.dim(), n as f64);
            let kp = sk.diag(&x)?;
            Ok(EscapeRow { n, point: n as f64, kp_diag: kp, ksd_delta: kp.max(0.0).sqrt() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceFamily {
    /// `Q_n = P(· − 1/n)`, i.e. `N(1/n, 1)` for `P = N(0, 1)`.
    ShrinkingShift,
    /// `Q_n = (1 − 1/n) P + (1/n) δ_n`.
    EscapingMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ksd: f64,
    pub wasserstein1: f64,
}

/// KSD and exact `W₁(Q_n, P)` along a one-dimensional sequence.
///
/// For the escaping mixture `W₁ = (1/n) E_P|X − n|`, which tends to 1: the
/// sequence converges weakly but not in `W₁`.
pub fn convergence_curve(
    sk: &SteinKernel,
    family: SequenceFamily,
    ns: &[usize],
    domain: (f64, f64),
    tol: f64,
) -> Result<Vec<ConvergenceRow>> {
    if sk.dim() != 1 {
        return Err(Error::Unsupported(format!("convergence curves need d = 1, got d = {}", sk.dim())));
    }
    if ns.is_empty() {
        return Err(Error::EmptyInput("n grid"));
    }
    if ns.contains(&0) {
        return Err(Error::InvalidParameter { name: "n", reason: "grid values must be positive".into() });
    }
    positive("tol", tol)?;
    let p = sk.target();
    if !p.has_density() {
        return Err(Error::MissingOracle("target density"));
    }
    let density = |x: f64| p.density(&[x]).unwrap_or(0.0);
    let mut rows = Vec::with_capacity(ns.len());
    match family {
        SequenceFamily::ShrinkingShift => {
            for &n in ns {
                let h = 1.0 / n as f64;
                let shifted = |x: f64| density(x - h);
                let est = ksd_quadrature_1d(sk, &shifted, (domain.0 + h, domain.1 + h), tol)?;
                rows.push(ConvergenceRow { n, ksd: est.value, wasserstein1: h });
            }
        }
        SequenceFamily::EscapingMixture => {
            let pp = ksd_quadrature_1d(sk, &density, domain, tol)?.squared_value;
            for &n in ns {
                let w = 1.0 / n as f64;
                let z = [n as f64];
                let sz = p.score(&z)?;
                let cross = quad::integrate_with_breaks(
                    |x| {
                        let sx = p.score_unchecked(&[x]);
                        sk.eval_with_scores(&[x], &sx, &z, &sz).unwrap_or(f64::NAN) * density(x)
                    },
                    &quad::ladder_breaks(domain.0, domain.1, z[0].clamp(domain.0, domain.1)),
                    0.1 * tol,
                );
                let point = sk.diag(&z)?;
                let squared = (1.0 - w).powi(2) * pp + 2.0 * (1.0 - w) * w * cross.value + w * w * point;
                if !squared.is_finite() {
                    return Err(Error::NonFinite("escaping mixture KSD".into()));
                }
                let abs_dev = quad::integrate_with_breaks(
                    |x| (x - z[0]).abs() * density(x),
                    &quad::ladder_breaks(domain.0, domain.1, z[0].clamp(domain.0, domain.1)),
                    1e-12,
                );
                rows.push(ConvergenceRow { n, ksd: squared.max(0.0).sqrt(), wasserstein1: w * abs_dev.value });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundednessRow {
    /// First coordinate of the probe point `x·e₁`.
    pub x: f64,
    pub kp_diag: f64,
}

/// `k_p(x·e₁, x·e₁)` over a grid of `x` values.
pub fn boundedness_scan(sk: &SteinKernel, grid: &[f64]) -> Result<Vec<BoundednessRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("boundedness grid"));
    }
    grid.iter().map(|&x| Ok(BoundednessRow { x, kp_diag: sk.diag(&axis_point(sk.dim(), x))? })).collect()
}
