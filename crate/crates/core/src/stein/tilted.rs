//! Bounded Stein kernel constructions.
//!
//! `bounded_stein_base` builds `K(x, y) = diag(a(‖x‖)(xⁱyⁱ + k(x, y))a(‖y‖))`
//! with `a(r) = (c² + r²)^{−γ}`; for a dissipative target with `γ ≤ u` and
//! `‖s_p(x)‖·‖x‖ ≤ (c² + ‖x‖²)^γ` the induced Stein kernel is bounded yet
//! still controls convergence. `score_tilted_base` divides any base by
//! `θ(x)θ(y)` with `θ ≥ ‖s_p‖`.

use serde::Serialize;

use crate::kernel::{MatrixBaseKernel, ScalarKernel, TiltFunction};
use crate::target::{sphere_points, Target};
use crate::{Error, Result};

/// Diagonal base with entries `a(x)(xⁱyⁱ + k(x, y))a(y)`.
pub fn bounded_stein_base(k: &ScalarKernel, tilt: &TiltFunction) -> Result<MatrixBaseKernel> {
    let d = k.dim();
    let entries = (0..d)
        .map(|i| Ok(ScalarKernel::sum(vec![ScalarKernel::coordinate(d, i)?, k.clone()])?.tilt(tilt.clone())))
        .collect::<Result<Vec<_>>>()?;
    MatrixBaseKernel::diagonal(entries)
}

/// Sphere grid used to check `θ ≥ ‖s_p‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationGrid {
    pub radii: Vec<f64>,
    pub points_per_radius: usize,
}

impl Default for VerificationGrid {
    fn default() -> Self {
        Self { radii: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0], points_per_radius: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBoundViolation {
    pub point: Vec<f64>,
    pub theta: f64,
    pub score_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ScoreTiltedBase {
    pub kernel: MatrixBaseKernel,
    /// Grid points where `θ(x) < ‖s_p(x)‖`; the kernel is returned anyway.
    pub violations: Vec<ScoreBoundViolation>,
}

/// `K(x, y) / (θ(x) θ(y))`, after checking `θ > 0` and `θ ≥ ‖s_p‖` on the grid
/// (plus the origin).
pub fn score_tilted_base(
    base: &MatrixBaseKernel,
    theta: TiltFunction,
    target: &Target,
    grid: &VerificationGrid,
) -> Result<ScoreTiltedBase> {
    crate::check_dim(target.dim(), base.dim())?;
    let d = base.dim();
    let mut points = vec![vec![0.0; d]];
    for &r in &grid.radii {
        points.extend(sphere_points(d, r, grid.points_per_radius));
    }
    let mut violations = Vec::new();
    for x in points {
        let (t, g) = theta.eval(&x);
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveTilt { value: t, point: x });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("theta gradient at {x:?}")));
        }
        let s = target.score(&x)?;
        let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        if t < norm {
            violations.push(ScoreBoundViolation { point: x, theta: t, score_norm: norm });
        }
    }
    if !violations.is_empty() {
        log::warn!(
            "theta is below the score norm at {} grid point(s), e.g. {:?}",
            violations.len(),
            violations[0].point
        );
    }
    Ok(ScoreTiltedBase { kernel: base.tilted(TiltFunction::reciprocal(theta)), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stein::SteinKernel;

    fn grid(max: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|i| -max + 2.0 * max * i as f64 / steps as f64).collect()
    }

    #[test]
    fn bounded_base_entries_at_origin() {
        let k = ScalarKernel::gaussian(2, 1.0).unwrap();
        let a = TiltFunction::inverse_multiquadric(1.0, 1.0).unwrap();
        let m = bounded_stein_base(&k, &a).unwrap();
        assert_eq!(m.diag_values(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn bounded_base_keeps_stein_diagonal_bounded() {
        let p = Target::standard_normal(1).unwrap();
        let k = ScalarKernel::gaussian(1, 1.0).unwrap();
        let a = TiltFunction::inverse_multiquadric(1.0, 1.0).unwrap();
        let sk = SteinKernel::new(bounded_stein_base(&k, &a).unwrap(), p.clone()).unwrap();
        let sup = |m: f64| grid(m, 2000).iter().map(|x| sk.diag(&[*x]).unwrap()).fold(f64::MIN, f64::max);
        assert!(sup(50.0).is_finite() && sup(50.0) <= 10.0 * sup(5.0));

        let plain = SteinKernel::new(k, p).unwrap();
        assert!(plain.diag(&[50.0]).unwrap() > 100.0 * plain.diag(&[0.0]).unwrap());
    }

    #[test]
    fn unit_theta_is_identity() {
        let p = Target::standard_normal(2).unwrap();
        let base = MatrixBaseKernel::scalar(ScalarKernel::imq(2, 1.0, 0.5).unwrap());
        let t = score_tilted_base(&base, TiltFunction::Constant(1.0), &p, &VerificationGrid { radii: vec![0.5], points_per_radius: 8 }).unwrap();
        let (x, y) = ([0.1, 0.2], [-1.0, 0.5]);
        assert_eq!(t.kernel.diag_values(&x, &y).unwrap(), base.diag_values(&x, &y).unwrap());
        // ‖s_p‖ = 0.5 on the grid, below θ ≡ 1
        assert!(t.violations.is_empty());
    }

    #[test]
    fn score_tilt_bounds_stein_diagonal() {
        let p = Target::standard_normal(1).unwrap();
        let base = MatrixBaseKernel::scalar(ScalarKernel::gaussian(1, 1.0).unwrap());
        let theta = TiltFunction::custom(|x: &[f64]| (1.0 + x[0].abs(), vec![x[0].signum() * (x[0] != 0.0) as u8 as f64]));
        let t = score_tilted_base(&base, theta, &p, &VerificationGrid::default()).unwrap();
        assert!(t.violations.is_empty());
        let sk = SteinKernel::new(t.kernel, p).unwrap();
        let vals: Vec<f64> = grid(50.0, 1000).iter().map(|x| sk.diag(&[*x]).unwrap()).collect();
        let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(*v), h.max(*v)));
        assert!(lo > 0.0 && hi / lo <= 100.0, "{lo} {hi}");
    }

    #[test]
    fn violations_are_reported_not_fatal() {
        let p = Target::standard_normal(1).unwrap();
        let base = MatrixBaseKernel::scalar(ScalarKernel::gaussian(1, 1.0).unwrap());
        let t = score_tilted_base(&base, TiltFunction::Constant(1.0), &p, &VerificationGrid::default()).unwrap();
        assert!(!t.violations.is_empty());
        assert!(t.violations.iter().all(|v| v.score_norm > v.theta));
    }

    #[test]
    fn nonpositive_theta_is_an_error() {
        let p = Target::standard_normal(1).unwrap();
        let base = MatrixBaseKernel::scalar(ScalarKernel::gaussian(1, 1.0).unwrap());
        let theta = TiltFunction::custom(|x: &[f64]| (x[0], vec![1.0]));
        assert!(matches!(
            score_tilted_base(&base, theta, &p, &VerificationGrid::default()),
            Err(Error::NonPositiveTilt { .. })
        ));
    }
}
