use super::{KernelDerivatives, ScalarKernel, TiltFunction};
use crate::{check_dim, Error, Result};

/// Diagonal matrix-valued kernel `K(x, y) = diag(k₁(x, y), …, k_d(x, y))`.
///
/// A scalar kernel `k` is promoted to `k·Id` without duplicating it, so the
/// Stein kernel evaluates its derivatives once per pair.
#[derive(Debug, Clone)]
pub struct MatrixBaseKernel {
    dim: usize,
    entries: Entries,
}

#[derive(Debug, Clone)]
enum Entries {
    Uniform(ScalarKernel),
    Diagonal(Vec<ScalarKernel>),
}

impl MatrixBaseKernel {
    pub fn scalar(k: ScalarKernel) -> Self {
        Self { dim: k.dim(), entries: Entries::Uniform(k) }
    }

    pub fn diagonal(entries: Vec<ScalarKernel>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::EmptyInput("diagonal kernel entries"));
        }
        for e in &entries {
            check_dim(dim, e.dim())?;
        }
        Ok(Self { dim, entries: Entries::Diagonal(entries) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `a(x) K(x, y) a(y)`.
    pub fn tilted(&self, a: TiltFunction) -> Self {
        let entries = match &self.entries {
            Entries::Uniform(k) => Entries::Uniform(k.tilt(a)),
            Entries::Diagonal(ks) => Entries::Diagonal(ks.iter().map(|k| k.tilt(a.clone())).collect()),
        };
        Self { dim: self.dim, entries }
    }

    /// The `i`-th diagonal entry.
    pub fn entry(&self, i: usize) -> &ScalarKernel {
        match &self.entries {
            Entries::Uniform(k) => k,
            Entries::Diagonal(ks) => &ks[i],
        }
    }

    /// The underlying scalar kernel when `K = k·Id`.
    pub fn as_scalar(&self) -> Option<&ScalarKernel> {
        match &self.entries {
            Entries::Uniform(k) => Some(k),
            Entries::Diagonal(_) => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match &self.entries {
            Entries::Uniform(k) => k.is_bounded(),
            Entries::Diagonal(ks) => ks.iter().all(ScalarKernel::is_bounded),
        }
    }

    pub fn has_derivative_oracles(&self) -> bool {
        match &self.entries {
            Entries::Uniform(k) => k.has_derivative_oracles(),
            Entries::Diagonal(ks) => ks.iter().all(ScalarKernel::has_derivative_oracles),
        }
    }

    /// Diagonal of `K(x, y)`.
    pub fn diag_values(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        match &self.entries {
            Entries::Uniform(k) => Ok(vec![k.value_unchecked(x, y)?; self.dim]),
            Entries::Diagonal(ks) => ks.iter().map(|k| k.value_unchecked(x, y)).collect(),
        }
    }

    /// Calls `f(Some(i), derivs)` with the derivative bundle of entry `i`;
    /// for `k·Id` the bundle is computed once and passed as `f(None, derivs)`,
    /// meaning it governs every coordinate.
    pub(crate) fn for_each_entry<F>(&self, x: &[f64], y: &[f64], mut f: F) -> Result<()>
    where
        F: FnMut(Option<usize>, &KernelDerivatives),
    {
        match &self.entries {
            Entries::Uniform(k) => f(None, &k.derivs(x, y)?),
            Entries::Diagonal(ks) => {
                for (i, k) in ks.iter().enumerate() {
                    f(Some(i), &k.derivs(x, y)?);
                }
            }
        }
        Ok(())
    }
}

impl From<ScalarKernel> for MatrixBaseKernel {
    fn from(k: ScalarKernel) -> Self {
        Self::scalar(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_promotion_repeats_entry() {
        let k = ScalarKernel::gaussian(3, 1.0).unwrap();
        let m = MatrixBaseKernel::scalar(k.clone());
        let v = m.diag_values(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        let kv = k.value(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, vec![kv; 3]);
    }

    #[test]
    fn diagonal_requires_matching_dims() {
        let a = ScalarKernel::gaussian(2, 1.0).unwrap();
        let b = ScalarKernel::gaussian(3, 1.0).unwrap();
        assert!(MatrixBaseKernel::diagonal(vec![a, b]).is_err());
        assert!(MatrixBaseKernel::diagonal(vec![]).is_err());
    }

    #[test]
    fn transpose_symmetry() {
        let m = MatrixBaseKernel::diagonal(vec![
            ScalarKernel::gaussian(2, 1.0).unwrap(),
            ScalarKernel::imq(2, 1.0, 0.5).unwrap(),
        ])
        .unwrap()
        .tilted(TiltFunction::inverse_multiquadric(1.0, 0.5).unwrap());
        let (x, y) = ([0.2, -1.0], [1.5, 0.3]);
        assert_eq!(m.diag_values(&x, &y).unwrap(), m.diag_values(&y, &x).unwrap());
    }
}
