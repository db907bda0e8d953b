//! Langevin Stein kernels and related constructions.
//!
//! For a diagonal base `K = diag(k₁, …, k_d)` and target score `s = s_p`,
//!
//! ```text
//! k_p(x, y) = Σᵢ (1 / p(x)p(y)) ∂_{xⁱ}∂_{yⁱ}(p(x) kᵢ(x, y) p(y))
//!           = Σᵢ ∂_{xⁱ}∂_{yⁱ}kᵢ + sᵢ(x) ∂_{yⁱ}kᵢ + sᵢ(y) ∂_{xⁱ}kᵢ + sᵢ(x) sᵢ(y) kᵢ
//! ```
//!
//! which needs only the derivative oracles of [`crate::kernel`].

mod centered;
mod coercive;
pub mod spec;
mod tilted;

pub use centered::{centered_kernel, CenteredKernel, Reference};
pub use coercive::{check_coercive_exponent, coercive_stein_function};
pub use tilted::{bounded_stein_base, score_tilted_base, ScoreBoundViolation, ScoreTiltedBase, VerificationGrid};

use crate::kernel::{MatrixBaseKernel, Vector};
use crate::target::Target;
use crate::{check_dim, Error, Result};

/// The scalar Stein kernel `k_p` induced by a base kernel and a target.
#[derive(Debug, Clone)]
pub struct SteinKernel {
    base: MatrixBaseKernel,
    target: Target,
}

impl SteinKernel {
    /// Fails if dimensions differ or a custom base lacks derivative oracles.
    pub fn new(base: impl Into<MatrixBaseKernel>, target: Target) -> Result<Self> {
        let base = base.into();
        check_dim(target.dim(), base.dim())?;
        if !base.has_derivative_oracles() {
            return Err(Error::MissingOracle("base kernel derivatives"));
        }
        Ok(Self { base, target })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &MatrixBaseKernel {
        &self.base
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    /// `k_p(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        let sx = self.target.score(x)?;
        let sy = self.target.score(y)?;
        self.eval_with_scores(x, &sx, y, &sy)
    }

    /// `k_p(x, x)`.
    pub fn diag(&self, x: &[f64]) -> Result<f64> {
        self.eval(x, x)
    }

    /// `k_p(x, y)` with precomputed scores.
    pub fn eval_with_scores(&self, x: &[f64], sx: &[f64], y: &[f64], sy: &[f64]) -> Result<f64> {
        let d = self.dim();
        let mut acc = 0.0;
        let term = |j: usize, dv: &crate::kernel::KernelDerivatives| {
            dv.mixed_diag[j] + sx[j] * dv.grad_y[j] + sy[j] * dv.grad_x[j] + sx[j] * sy[j] * dv.value
        };
        self.base.for_each_entry(x, y, |entry, dv| match entry {
            None => {
                for j in 0..d {
                    acc += term(j, dv);
                }
            }
            Some(j) => acc += term(j, dv),
        })?;
        Ok(acc)
    }

    /// Scores of every row of a row-major point array.
    pub(crate) fn scores(&self, points: &[f64]) -> Result<Vec<Vector>> {
        let d = self.dim();
        let n = points.len() / d;
        crate::reduce::par_rows(n, |i| self.target.score(&points[i * d..(i + 1) * d])).into_iter().collect()
    }
}

/// Builds the Stein kernel of `base` for `target`.
pub fn stein_kernel(base: impl Into<MatrixBaseKernel>, target: &Target) -> Result<SteinKernel> {
    SteinKernel::new(base, target.clone())
}

/// A vector field `v : ℝᵈ → ℝᵈ` with divergence oracle.
pub trait VectorField {
    fn value(&self, x: &[f64]) -> Vec<f64>;
    fn divergence(&self, x: &[f64]) -> f64;
}

/// Vector field from a pair of closures.
pub struct FnField<V, D> {
    pub value: V,
    pub divergence: D,
}

impl<V, D> VectorField for FnField<V, D>
where
    V: Fn(&[f64]) -> Vec<f64>,
    D: Fn(&[f64]) -> f64,
{
    fn value(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }
    fn divergence(&self, x: &[f64]) -> f64 {
        (self.divergence)(x)
    }
}

/// Langevin Stein operator `(S_p v)(x) = ⟨s_p(x), v(x)⟩ + ∇·v(x)`.
pub fn apply_stein_operator(target: &Target, v: &dyn VectorField, x: &[f64]) -> Result<f64> {
    let s = target.score(x)?;
    let vx = v.value(x);
    check_dim(target.dim(), vx.len())?;
    let out = s.iter().zip(&vx).map(|(a, b)| a * b).sum::<f64>() + v.divergence(x);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite(format!("Stein operator at {x:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ScalarKernel;
    use crate::quad;

    fn n01() -> Target {
        Target::standard_normal(1).unwrap()
    }

    #[test]
    fn gaussian_base_at_origin() {
        let sk = SteinKernel::new(ScalarKernel::gaussian(1, 1.0).unwrap(), n01()).unwrap();
        assert!((sk.eval(&[0.0], &[0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric() {
        let t = Target::gaussian_mixture(vec![0.5, 0.5], vec![vec![-1.0, 0.0], vec![1.0, 1.0]], vec![vec![1.0, 1.0]; 2]).unwrap();
        for k in [ScalarKernel::imq(2, 1.0, 0.5).unwrap(), ScalarKernel::matern32(2, 1.3).unwrap()] {
            let sk = SteinKernel::new(k, t.clone()).unwrap();
            let (x, y) = ([0.3, -2.0], [1.7, 0.4]);
            assert!((sk.eval(&x, &y).unwrap() - sk.eval(&y, &x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_mismatched_and_oracle_free_bases() {
        assert!(SteinKernel::new(ScalarKernel::gaussian(2, 1.0).unwrap(), n01()).is_err());
        let custom = ScalarKernel::custom(1, crate::kernel::CustomKernel::new(|x, y| (-(x[0] - y[0]).powi(2)).exp())).unwrap();
        assert!(matches!(SteinKernel::new(custom, n01()), Err(Error::MissingOracle(_))));
    }

    #[test]
    fn stein_operator_examples() {
        let one = FnField { value: |_: &[f64]| vec![1.0], divergence: |_: &[f64]| 0.0 };
        assert_eq!(apply_stein_operator(&n01(), &one, &[2.0]).unwrap(), -2.0);
        let id = FnField { value: |x: &[f64]| x.to_vec(), divergence: |x: &[f64]| x.len() as f64 };
        assert_eq!(apply_stein_operator(&n01(), &id, &[0.0]).unwrap(), 1.0);
        let p = n01();
        let mean = quad::integrate(|x| apply_stein_operator(&p, &id, &[x]).unwrap() * p.density(&[x]).unwrap(), -10.0, 10.0, 1e-12);
        assert!(mean.value.abs() < 1e-6);
    }
}
