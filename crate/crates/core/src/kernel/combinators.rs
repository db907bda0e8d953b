//! Tilt functions, coordinate maps and user-supplied kernels.

use std::fmt;
use std::sync::Arc;

use super::Vector;
use crate::{positive, Error, Result};

type TiltClosure = Arc<dyn Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync>;
type MapClosure = Arc<dyn Fn(&[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync>;
pub(crate) type PairFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;
pub(crate) type PairVecFn = Arc<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;

/// A strictly positive scalar weight `a(x)` with gradient, used to tilt
/// kernels as `a(x) k(x, y) a(y)`.
#[derive(Clone)]
pub enum TiltFunction {
    Constant(f64),
    /// `a(x) = (c² + ‖x‖²)^{-γ}`.
    InverseMultiquadric { c: f64, gamma: f64 },
    /// `1 / θ(x)`; turns a score bound `θ` into a tilt.
    Reciprocal(Box<TiltFunction>),
    /// Closure returning `(a(x), ∇a(x))`.
    Custom(TiltClosure),
}

impl fmt::Debug for TiltFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => write!(f, "Constant({v})"),
            Self::InverseMultiquadric { c, gamma } => write!(f, "InverseMultiquadric {{ c: {c}, gamma: {gamma} }}"),
            Self::Reciprocal(t) => write!(f, "Reciprocal({t:?})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl TiltFunction {
    pub fn inverse_multiquadric(c: f64, gamma: f64) -> Result<Self> {
        positive("c", c)?;
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma", reason: "must be finite".into() });
        }
        Ok(Self::InverseMultiquadric { c, gamma })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    pub fn reciprocal(theta: TiltFunction) -> Self {
        Self::Reciprocal(Box::new(theta))
    }

    /// `(a(x), ∇a(x))`, without the positivity check.
    pub fn eval(&self, x: &[f64]) -> (f64, Vector) {
        match self {
            Self::Constant(v) => (*v, Vector::from_elem(0.0, x.len())),
            Self::InverseMultiquadric { c, gamma } => {
                let base = c * c + x.iter().map(|v| v * v).sum::<f64>();
                let value = base.powf(-gamma);
                let coef = -2.0 * gamma * value / base;
                (value, x.iter().map(|v| coef * v).collect())
            }
            Self::Reciprocal(theta) => {
                let (t, g) = theta.eval(x);
                let inv = 1.0 / t;
                (inv, g.iter().map(|v| -v * inv * inv).collect())
            }
            Self::Custom(f) => {
                let (v, g) = f(x);
                (v, Vector::from_vec(g))
            }
        }
    }

    /// `(a(x), ∇a(x))`, failing unless `a(x) > 0` and everything is finite.
    pub fn eval_checked(&self, x: &[f64]) -> Result<(f64, Vector)> {
        let (v, g) = self.eval(x);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveTilt { value: v, point: x.to_vec() });
        }
        if g.len() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: g.len() });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("tilt gradient at {x:?}")));
        }
        Ok((v, g))
    }

    /// Whether `sup_x a(x) < ∞` is known.
    pub fn is_bounded(&self) -> bool {
        match self {
            Self::Constant(_) => true,
            Self::InverseMultiquadric { gamma, .. } => *gamma >= 0.0,
            Self::Reciprocal(_) | Self::Custom(_) => false,
        }
    }
}

/// A C¹ bijection `b : ℝᵈ → ℝᵈ` with Jacobian oracle.
#[derive(Clone)]
pub enum Diffeomorphism {
    Identity,
    /// `b(x) = s·x`.
    Scale(f64),
    /// `b(x)ᵢ = xᵢ + ε tanh(xᵢ)`, bijective for `ε > -1`.
    TanhPerturbation { eps: f64 },
    /// Closure returning `(b(x), J_b(x))` with `J` row-major, `J[a][i] = ∂bᵃ/∂xⁱ`.
    Custom(MapClosure),
}

impl fmt::Debug for Diffeomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => write!(f, "Identity"),
            Self::Scale(s) => write!(f, "Scale({s})"),
            Self::TanhPerturbation { eps } => write!(f, "TanhPerturbation {{ eps: {eps} }}"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Image of a point together with its Jacobian.
pub(crate) struct Mapped {
    pub point: Vector,
    pub jacobian: Vec<f64>,
    pub diagonal: bool,
}

impl Diffeomorphism {
    pub fn scale(s: f64) -> Result<Self> {
        if !s.is_finite() || s == 0.0 {
            return Err(Error::InvalidParameter { name: "factor", reason: format!("must be finite and nonzero, got {s}") });
        }
        Ok(Self::Scale(s))
    }

    pub fn tanh_perturbation(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps <= -1.0 {
            return Err(Error::InvalidParameter { name: "eps", reason: format!("must exceed -1, got {eps}") });
        }
        Ok(Self::TanhPerturbation { eps })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    pub(crate) fn apply(&self, x: &[f64]) -> Result<Mapped> {
        let d = x.len();
        let diag = |entries: &mut dyn Iterator<Item = f64>| {
            let mut j = vec![0.0; d * d];
            for (i, v) in entries.enumerate() {
                j[i * d + i] = v;
            }
            j
        };
        let mapped = match self {
            Self::Identity => Mapped { point: Vector::from_slice(x), jacobian: diag(&mut std::iter::repeat_n(1.0, d)), diagonal: true },
            Self::Scale(s) => Mapped {
                point: x.iter().map(|v| s * v).collect(),
                jacobian: diag(&mut std::iter::repeat_n(*s, d)),
                diagonal: true,
            },
            Self::TanhPerturbation { eps } => Mapped {
                point: x.iter().map(|v| v + eps * v.tanh()).collect(),
                jacobian: diag(&mut x.iter().map(|v| {
                    let sech = 1.0 / v.cosh();
                    1.0 + eps * sech * sech
                })),
                diagonal: true,
            },
            Self::Custom(f) => {
                let (point, jacobian) = f(x);
                if point.len() != d || jacobian.len() != d * d {
                    return Err(Error::DimensionMismatch { expected: d, got: point.len() });
                }
                let diagonal = (0..d).all(|a| (0..d).all(|i| a == i || jacobian[a * d + i] == 0.0));
                Mapped { point: Vector::from_vec(point), jacobian, diagonal }
            }
        };
        if mapped.jacobian.iter().chain(mapped.point.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("map or Jacobian at {x:?}")));
        }
        Ok(mapped)
    }
}

/// A kernel given by user closures: the value plus the three derivative
/// oracles `∇ₓk`, `∇ᵧk` and the per-coordinate mixed derivatives
/// `(∂_{xⁱ}∂_{yⁱ}k)ᵢ`. A full cross Hessian `(∂_{xᵃ}∂_{yᵇ}k)` is optional
/// and only needed when composing with a non-diagonal map.
#[derive(Clone)]
pub struct CustomKernel {
    pub(crate) value: PairFn,
    pub(crate) grad_x: Option<PairVecFn>,
    pub(crate) grad_y: Option<PairVecFn>,
    pub(crate) mixed_diag: Option<PairVecFn>,
    pub(crate) cross_hessian: Option<PairVecFn>,
    pub(crate) bounded: bool,
}

impl fmt::Debug for CustomKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomKernel")
            .field("grad_x", &self.grad_x.is_some())
            .field("grad_y", &self.grad_y.is_some())
            .field("mixed_diag", &self.mixed_diag.is_some())
            .field("cross_hessian", &self.cross_hessian.is_some())
            .field("bounded", &self.bounded)
            .finish()
    }
}

impl CustomKernel {
    pub fn new<F>(value: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        Self { value: Arc::new(value), grad_x: None, grad_y: None, mixed_diag: None, cross_hessian: None, bounded: false }
    }

    pub fn with_grad_x<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.grad_x = Some(Arc::new(f));
        self
    }

    pub fn with_grad_y<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.grad_y = Some(Arc::new(f));
        self
    }

    pub fn with_mixed_diag<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.mixed_diag = Some(Arc::new(f));
        self
    }

    pub fn with_cross_hessian<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.cross_hessian = Some(Arc::new(f));
        self
    }

    /// Marks the kernel as bounded (metadata used by diagnostics).
    pub fn bounded(mut self, bounded: bool) -> Self {
        self.bounded = bounded;
        self
    }

    pub fn has_derivative_oracles(&self) -> bool {
        self.grad_x.is_some() && self.grad_y.is_some() && self.mixed_diag.is_some()
    }
}
