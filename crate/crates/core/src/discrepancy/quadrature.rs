use crate::kernel::MatrixBaseKernel;
use crate::quad;
use crate::stein::SteinKernel;
use crate::target::Target;
use crate::{check_dim, positive, Error, Result};

use super::{DiscrepancyEstimate, Estimator};

const NORMALIZATION_TOL: f64 = 1e-6;

fn check_domain(domain: (f64, f64), tol: f64) -> Result<()> {
    if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
        return Err(Error::InvalidParameter { name: "domain", reason: format!("{domain:?} is not a finite interval") });
    }
    positive("tol", tol)?;
    Ok(())
}

fn one_dimensional(d: usize) -> Result<()> {
    if d != 1 {
        return Err(Error::Unsupported(format!("quadrature estimators need d = 1, got d = {d}")));
    }
    Ok(())
}

fn check_normalized(density: &dyn Fn(f64) -> f64, domain: (f64, f64)) -> Result<()> {
    let mass = quad::integrate_with_breaks(density, &quad::ladder_breaks(domain.0, domain.1, 0.0f64.clamp(domain.0, domain.1)), 1e-10);
    if !mass.value.is_finite() || (mass.value - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { integral: mass.value });
    }
    Ok(())
}

fn estimate(squared: f64, tol: f64, what: &str) -> Result<DiscrepancyEstimate> {
    if !squared.is_finite() {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(DiscrepancyEstimate::new(Estimator::Quadrature, squared, None, Some(tol), None))
}

/// `∬k_p(x, y) q(x) q(y) dx dy` over `domain²` for a one-dimensional target.
pub fn ksd_quadrature_1d(
    sk: &SteinKernel,
    q_density: &dyn Fn(f64) -> f64,
    domain: (f64, f64),
    tol: f64,
) -> Result<DiscrepancyEstimate> {
    one_dimensional(sk.dim())?;
    check_domain(domain, tol)?;
    check_normalized(q_density, domain)?;
    let p = sk.target();
    let r = quad::integrate_2d(
        |x, y| {
            let (qx, qy) = (q_density(x), q_density(y));
            if qx == 0.0 || qy == 0.0 {
                return 0.0;
            }
            let sx = p.score_unchecked(&[x]);
            let sy = p.score_unchecked(&[y]);
            sk.eval_with_scores(&[x], &sx, &[y], &sy).unwrap_or(f64::NAN) * qx * qy
        },
        domain,
        domain,
        tol,
    );
    estimate(r.value, tol, "KSD quadrature")
}

/// `∬⟨s_p(y) − s_q(y), K(y, x)(s_p(x) − s_q(x))⟩ q(x) q(y) dx dy`, the
/// score-difference form of the squared KSD.
pub fn ksd_score_diff_quadrature(
    base: &MatrixBaseKernel,
    p: &Target,
    q: &Target,
    domain: (f64, f64),
    tol: f64,
) -> Result<DiscrepancyEstimate> {
    one_dimensional(p.dim())?;
    check_dim(1, q.dim())?;
    check_dim(1, base.dim())?;
    check_domain(domain, tol)?;
    if !q.has_density() {
        return Err(Error::MissingOracle("alternative density"));
    }
    let qd = |x: f64| q.density(&[x]).unwrap_or(f64::NAN);
    check_normalized(&qd, domain)?;
    let weighted_diff = |x: f64| {
        let qx = qd(x);
        if qx == 0.0 {
            0.0
        } else {
            (p.score_unchecked(&[x])[0] - q.score_unchecked(&[x])[0]) * qx
        }
    };
    let r = quad::integrate_2d(
        |x, y| {
            let (dx, dy) = (weighted_diff(x), weighted_diff(y));
            if dx == 0.0 || dy == 0.0 {
                return 0.0;
            }
            let k = base.diag_values(&[y], &[x]).map(|v| v[0]).unwrap_or(f64::NAN);
            dy * k * dx
        },
        domain,
        domain,
        tol,
    );
    estimate(r.value, tol, "score-difference quadrature")
}
