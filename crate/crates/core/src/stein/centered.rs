//! Kernels centred at a reference measure.
//!
//! `k^P(x, y) = k(x, y) − μ(x) − μ(y) + ∬k dP dP` with `μ(x) = ∫k(x, ·) dP`.
//! The RKHS of `k^P` holds the `P`-mean-zero elements of the RKHS of `k`.

use crate::discrepancy::SampleSet;
use crate::kernel::ScalarKernel;
use crate::quad;
use crate::reduce::{pairwise_sum, par_rows};
use crate::target::Target;
use crate::{check_dim, Error, Result};

/// Measure used to centre a kernel.
#[derive(Debug, Clone)]
pub enum Reference {
    /// Weighted empirical measure.
    Empirical(SampleSet),
    /// One-dimensional target density integrated over `domain`.
    Quadrature { target: Target, domain: (f64, f64), tol: f64 },
}

#[derive(Debug, Clone)]
pub struct CenteredKernel {
    kernel: ScalarKernel,
    reference: Reference,
    double_integral: f64,
}

pub fn centered_kernel(k: &ScalarKernel, reference: Reference) -> Result<CenteredKernel> {
    CenteredKernel::new(k.clone(), reference)
}

impl CenteredKernel {
    pub fn new(kernel: ScalarKernel, reference: Reference) -> Result<Self> {
        match &reference {
            Reference::Empirical(s) => check_dim(kernel.dim(), s.dim())?,
            Reference::Quadrature { target, domain, tol } => {
                if target.dim() != 1 || kernel.dim() != 1 {
                    return Err(Error::Unsupported("quadrature centring needs a one-dimensional target".into()));
                }
                if !target.has_density() {
                    return Err(Error::MissingOracle("target density"));
                }
                if !(domain.0 < domain.1) {
                    return Err(Error::InvalidParameter { name: "domain", reason: format!("{domain:?} is empty") });
                }
                crate::positive("tol", *tol)?;
            }
        }
        let mut out = Self { kernel, reference, double_integral: 0.0 };
        out.double_integral = out.compute_double_integral()?;
        Ok(out)
    }

    pub fn base(&self) -> &ScalarKernel {
        &self.kernel
    }

    /// `∬k dP dP`.
    pub fn double_integral(&self) -> f64 {
        self.double_integral
    }

    /// Kernel mean embedding `μ(x) = ∫k(x, ·) dP`.
    pub fn embedding(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.kernel.dim(), x.len())?;
        match &self.reference {
            Reference::Empirical(s) => {
                let terms = (0..s.n())
                    .map(|j| Ok(s.weight(j) * self.kernel.value_unchecked(x, s.point(j))?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(pairwise_sum(&terms))
            }
            Reference::Quadrature { target, domain, tol } => {
                let breaks = quad::ladder_breaks(domain.0, domain.1, x[0].clamp(domain.0, domain.1));
                let r = quad::integrate_with_breaks(
                    |z| self.kernel.value_unchecked(x, &[z]).unwrap_or(f64::NAN) * target.density(&[z]).unwrap_or(0.0),
                    &breaks,
                    0.1 * tol,
                );
                finite(r.value, "kernel mean embedding")
            }
        }
    }

    /// `k^P(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let k = self.kernel.value(x, y)?;
        Ok(k - self.embedding(x)? - self.embedding(y)? + self.double_integral)
    }

    fn compute_double_integral(&self) -> Result<f64> {
        match &self.reference {
            Reference::Empirical(s) => {
                if s.n() == 0 {
                    return Err(Error::EmptyInput("reference sample"));
                }
                let rows = par_rows(s.n(), |i| self.embedding(s.point(i)).map(|m| s.weight(i) * m));
                let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
                Ok(pairwise_sum(&rows))
            }
            Reference::Quadrature { target, domain, tol } => {
                let r = quad::integrate_2d(
                    |a, b| {
                        self.kernel.value_unchecked(&[a], &[b]).unwrap_or(f64::NAN)
                            * target.density(&[a]).unwrap_or(0.0)
                            * target.density(&[b]).unwrap_or(0.0)
                    },
                    *domain,
                    *domain,
                    0.1 * tol,
                );
                finite(r.value, "kernel double integral")
            }
        }
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn single_point_reference_vanishes_there() {
        let k = ScalarKernel::imq(2, 1.0, 0.5).unwrap();
        let c = centered_kernel(&k, Reference::Empirical(SampleSet::from_rows(&[vec![0.3, -1.0]]).unwrap())).unwrap();
        assert!(c.eval(&[0.3, -1.0], &[0.3, -1.0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gram_rows_sum_to_zero_over_reference() {
        let p = Target::gaussian(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let s = p.sample(40, &mut rng::seeded(3)).unwrap();
        let k = ScalarKernel::gaussian(2, 1.5).unwrap();
        let c = centered_kernel(&k, Reference::Empirical(s.clone())).unwrap();
        let mut total = 0.0;
        for i in 0..s.n() {
            let row: f64 = (0..s.n()).map(|j| s.weight(j) * c.eval(s.point(i), s.point(j)).unwrap()).sum();
            assert!(row.abs() < 1e-10, "{row}");
            total += s.weight(i) * row;
        }
        assert!(total.abs() < 1e-10);
    }

    #[test]
    fn standard_normal_closed_form() {
        let p = Target::standard_normal(1).unwrap();
        let k = ScalarKernel::gaussian(1, 1.0).unwrap();
        let c = centered_kernel(&k, Reference::Quadrature { target: p, domain: (-12.0, 12.0), tol: 1e-10 }).unwrap();
        // μ(0) = 1/√2 and ∬k = 1/√3 for a unit Gaussian kernel under N(0, 1)
        let expected = 1.0 - 2.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt();
        assert!((c.eval(&[0.0], &[0.0]).unwrap() - expected).abs() < 1e-6);
        assert!((c.embedding(&[1.0]).unwrap() - (-0.25f64).exp() / 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn quadrature_needs_one_dimension() {
        let p = Target::standard_normal(2).unwrap();
        let k = ScalarKernel::gaussian(2, 1.0).unwrap();
        assert!(centered_kernel(&k, Reference::Quadrature { target: p, domain: (-5.0, 5.0), tol: 1e-8 }).is_err());
    }
}
