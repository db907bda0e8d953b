//! Scalar and diagonal matrix-valued base kernels.
//!
//! Every kernel exposes the derivative bundle the Stein kernel needs:
//! the value, both gradients, and the diagonal of the cross Hessian
//! `∂_{xⁱ}∂_{yⁱ}k`. Radial families are written as `k = φ(‖x − y‖²)`, for
//! which
//!
//! ```text
//! ∇ₓk = 2φ'·u,   ∇ᵧk = −2φ'·u,   ∂_{xᵃ}∂_{yᵇ}k = −2φ'δ_{ab} − 4φ''uₐu_b,   u = x − y.
//! ```
//!
//! Matérn-3/2 is only once differentiable in `r`; at `x = y` its mixed
//! derivative is reported as the limit `3/ℓ²`.

mod combinators;
mod matrix;
pub mod spec;
mod spectral;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub use combinators::{CustomKernel, Diffeomorphism, TiltFunction};
pub use matrix::MatrixBaseKernel;
pub use spectral::{iron_spectral, ironed_rescaled, SpectralProfile};

use crate::{check_dim, positive, Error, Result};

/// Short vectors (gradients, scores) stay inline for `d ≤ 4`.
pub type Vector = SmallVec<[f64; 4]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    Gaussian,
    Imq,
    Matern32,
    InverseLog,
    Sech,
    Linear,
    Custom,
}

/// Value and first/mixed derivatives of a kernel at a pair of points.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDerivatives {
    pub value: f64,
    pub grad_x: Vector,
    pub grad_y: Vector,
    /// `∂_{xⁱ}∂_{yⁱ}k` for each coordinate `i`.
    pub mixed_diag: Vector,
}

impl KernelDerivatives {
    /// `Σᵢ ∂_{xⁱ}∂_{yⁱ}k`.
    pub fn mixed(&self) -> f64 {
        self.mixed_diag.iter().sum()
    }

    fn zeros(d: usize) -> Self {
        Self { value: 0.0, grad_x: Vector::from_elem(0.0, d), grad_y: Vector::from_elem(0.0, d), mixed_diag: Vector::from_elem(0.0, d) }
    }
}

/// A scalar positive-definite kernel on ℝᵈ.
#[derive(Debug, Clone)]
pub struct ScalarKernel {
    dim: usize,
    form: Form,
}

#[derive(Debug, Clone)]
enum Form {
    Gaussian { bandwidth: f64 },
    Imq { c: f64, gamma: f64 },
    Matern32 { bandwidth: f64 },
    InverseLog { c: f64, gamma: f64 },
    Sech { bandwidth: f64 },
    Linear,
    /// `xⁱyⁱ`.
    Coordinate(usize),
    Sum(Vec<ScalarKernel>),
    Tilted { base: Box<ScalarKernel>, tilt: TiltFunction },
    Composed { base: Box<ScalarKernel>, map: Diffeomorphism },
    Custom(CustomKernel),
}

/// `(φ, 2φ', 4φ'')` for a radial profile; the last entry multiplies `uₐu_b`.
struct Radial {
    phi: f64,
    p1: f64,
    q: f64,
}

fn dim_ok(d: usize) -> Result<usize> {
    if d == 0 {
        Err(Error::InvalidParameter { name: "dim", reason: "must be positive".into() })
    } else {
        Ok(d)
    }
}

impl ScalarKernel {
    /// `exp(−‖x − y‖² / (2ℓ²))`.
    pub fn gaussian(dim: usize, bandwidth: f64) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Gaussian { bandwidth: positive("bandwidth", bandwidth)? } })
    }

    /// `(c² + ‖x − y‖²)^{−γ}`.
    pub fn imq(dim: usize, c: f64, gamma: f64) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Imq { c: positive("c", c)?, gamma: positive("gamma", gamma)? } })
    }

    /// `(1 + √3 r/ℓ) exp(−√3 r/ℓ)` with `r = ‖x − y‖`.
    pub fn matern32(dim: usize, bandwidth: f64) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Matern32 { bandwidth: positive("bandwidth", bandwidth)? } })
    }

    /// `(c + log(1 + ‖x − y‖²))^{−γ}`.
    pub fn inverse_log(dim: usize, c: f64, gamma: f64) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::InverseLog { c: positive("c", c)?, gamma: positive("gamma", gamma)? } })
    }

    /// `Πᵢ sech((xⁱ − yⁱ)/ℓ)`.
    pub fn sech(dim: usize, bandwidth: f64) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Sech { bandwidth: positive("bandwidth", bandwidth)? } })
    }

    /// `xᵀy`.
    pub fn linear(dim: usize) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Linear })
    }

    /// `xⁱyⁱ` for a single coordinate `i`.
    pub fn coordinate(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter { name: "index", reason: format!("{index} out of range for dim {dim}") });
        }
        Ok(Self { dim: dim_ok(dim)?, form: Form::Coordinate(index) })
    }

    /// Pointwise sum of kernels of equal dimension.
    pub fn sum(terms: Vec<ScalarKernel>) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyInput("kernel sum"))?;
        let dim = first.dim;
        for t in &terms {
            check_dim(dim, t.dim)?;
        }
        Ok(Self { dim, form: Form::Sum(terms) })
    }

    pub fn custom(dim: usize, kernel: CustomKernel) -> Result<Self> {
        Ok(Self { dim: dim_ok(dim)?, form: Form::Custom(kernel) })
    }

    /// `a(x) k(x, y) a(y)`; derivative oracles follow from the product rule.
    pub fn tilt(&self, a: TiltFunction) -> Self {
        Self { dim: self.dim, form: Form::Tilted { base: Box::new(self.clone()), tilt: a } }
    }

    /// `k(b(x), b(y))`; derivative oracles follow from the chain rule.
    pub fn compose(&self, b: Diffeomorphism) -> Self {
        Self { dim: self.dim, form: Form::Composed { base: Box::new(self.clone()), map: b } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Family of the outermost form; combinators report [`KernelFamily::Custom`].
    pub fn family(&self) -> KernelFamily {
        match self.form {
            Form::Gaussian { .. } => KernelFamily::Gaussian,
            Form::Imq { .. } => KernelFamily::Imq,
            Form::Matern32 { .. } => KernelFamily::Matern32,
            Form::InverseLog { .. } => KernelFamily::InverseLog,
            Form::Sech { .. } => KernelFamily::Sech,
            Form::Linear => KernelFamily::Linear,
            _ => KernelFamily::Custom,
        }
    }

    /// Whether `sup k(x, x) < ∞` is known for this kernel.
    pub fn is_bounded(&self) -> bool {
        match &self.form {
            Form::Gaussian { .. } | Form::Imq { .. } | Form::Matern32 { .. } | Form::InverseLog { .. } | Form::Sech { .. } => true,
            Form::Linear | Form::Coordinate(_) => false,
            Form::Sum(ts) => ts.iter().all(Self::is_bounded),
            Form::Tilted { base, tilt } => base.is_bounded() && tilt.is_bounded(),
            Form::Composed { base, .. } => base.is_bounded(),
            Form::Custom(c) => c.bounded,
        }
    }

    /// Caller-facing metadata: families treated as characteristic to
    /// integrable signed measures with C¹₀ RKHS (Gaussian, IMQ, Matérn).
    /// Not machine-checked.
    pub fn is_characteristic(&self) -> bool {
        matches!(self.form, Form::Gaussian { .. } | Form::Imq { .. } | Form::Matern32 { .. })
    }

    pub fn has_derivative_oracles(&self) -> bool {
        match &self.form {
            Form::Sum(ts) => ts.iter().all(Self::has_derivative_oracles),
            Form::Tilted { base, .. } | Form::Composed { base, .. } => base.has_derivative_oracles(),
            Form::Custom(c) => c.has_derivative_oracles(),
            _ => true,
        }
    }

    fn check_pair(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())
    }

    /// `k(x, y)`.
    pub fn value(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_pair(x, y)?;
        self.value_unchecked(x, y)
    }

    /// `k(x, y)` and its derivative oracles.
    pub fn derivatives(&self, x: &[f64], y: &[f64]) -> Result<KernelDerivatives> {
        self.check_pair(x, y)?;
        self.derivs(x, y)
    }

    /// Full cross Hessian `H[a·d + b] = ∂_{xᵃ}∂_{yᵇ}k(x, y)`.
    pub fn cross_hessian(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_pair(x, y)?;
        self.hessian(x, y)
    }

    fn radial(&self, s: f64) -> Option<Radial> {
        Some(match self.form {
            Form::Gaussian { bandwidth } => {
                let l2 = bandwidth * bandwidth;
                let phi = (-0.5 * s / l2).exp();
                Radial { phi, p1: -phi / l2, q: phi / (l2 * l2) }
            }
            Form::Imq { c, gamma } => {
                let b = c * c + s;
                let phi = b.powf(-gamma);
                Radial { phi, p1: -2.0 * gamma * phi / b, q: 4.0 * gamma * (gamma + 1.0) * phi / (b * b) }
            }
            Form::InverseLog { c, gamma } => {
                let l = c + s.ln_1p();
                let phi = l.powf(-gamma);
                let one_s = 1.0 + s;
                let d1 = -gamma * phi / l / one_s;
                let d2 = (gamma * (gamma + 1.0) * phi / (l * l) + gamma * phi / l) / (one_s * one_s);
                Radial { phi, p1: 2.0 * d1, q: 4.0 * d2 }
            }
            Form::Matern32 { bandwidth } => {
                let a = 3f64.sqrt() / bandwidth;
                let r = s.sqrt();
                let e = (-a * r).exp();
                // q multiplies uₐu_b, which vanishes at r = 0
                let q = if r > 0.0 { a * a * a * e / r } else { 0.0 };
                Radial { phi: (1.0 + a * r) * e, p1: -a * a * e, q }
            }
            _ => return None,
        })
    }

    pub(crate) fn value_unchecked(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(match &self.form {
            Form::Gaussian { .. } | Form::Imq { .. } | Form::InverseLog { .. } | Form::Matern32 { .. } => {
                let s = sq_dist(x, y);
                self.radial(s).expect("radial family").phi
            }
            Form::Sech { bandwidth } => x.iter().zip(y).map(|(a, b)| 1.0 / ((a - b) / bandwidth).cosh()).product(),
            Form::Linear => x.iter().zip(y).map(|(a, b)| a * b).sum(),
            Form::Coordinate(i) => x[*i] * y[*i],
            Form::Sum(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.value_unchecked(x, y)?;
                }
                acc
            }
            Form::Tilted { base, tilt } => {
                let (ax, _) = tilt.eval_checked(x)?;
                let (ay, _) = tilt.eval_checked(y)?;
                ax * ay * base.value_unchecked(x, y)?
            }
            Form::Composed { base, map } => {
                let bx = map.apply(x)?;
                let by = map.apply(y)?;
                base.value_unchecked(&bx.point, &by.point)?
            }
            Form::Custom(c) => (c.value)(x, y),
        })
    }

    pub(crate) fn derivs(&self, x: &[f64], y: &[f64]) -> Result<KernelDerivatives> {
        let d = x.len();
        match &self.form {
            Form::Gaussian { .. } | Form::Imq { .. } | Form::InverseLog { .. } | Form::Matern32 { .. } => {
                let u: Vector = x.iter().zip(y).map(|(a, b)| a - b).collect();
                let s = u.iter().map(|v| v * v).sum();
                let Radial { phi, p1, q } = self.radial(s).expect("radial family");
                let grad_x: Vector = u.iter().map(|v| p1 * v).collect();
                let grad_y = grad_x.iter().map(|v| -v).collect();
                let mixed_diag = u.iter().map(|v| -p1 - q * v * v).collect();
                Ok(KernelDerivatives { value: phi, grad_x, grad_y, mixed_diag })
            }
            Form::Sech { bandwidth } => {
                let l = *bandwidth;
                let t: Vector = x.iter().zip(y).map(|(a, b)| ((a - b) / l).tanh()).collect();
                let value: f64 = x.iter().zip(y).map(|(a, b)| 1.0 / ((a - b) / l).cosh()).product();
                let grad_x: Vector = t.iter().map(|ti| -value * ti / l).collect();
                let grad_y = grad_x.iter().map(|v| -v).collect();
                let mixed_diag = t.iter().map(|ti| -value * (2.0 * ti * ti - 1.0) / (l * l)).collect();
                Ok(KernelDerivatives { value, grad_x, grad_y, mixed_diag })
            }
            Form::Linear => Ok(KernelDerivatives {
                value: x.iter().zip(y).map(|(a, b)| a * b).sum(),
                grad_x: Vector::from_slice(y),
                grad_y: Vector::from_slice(x),
                mixed_diag: Vector::from_elem(1.0, d),
            }),
            Form::Coordinate(i) => {
                let mut out = KernelDerivatives::zeros(d);
                out.value = x[*i] * y[*i];
                out.grad_x[*i] = y[*i];
                out.grad_y[*i] = x[*i];
                out.mixed_diag[*i] = 1.0;
                Ok(out)
            }
            Form::Sum(ts) => {
                let mut out = KernelDerivatives::zeros(d);
                for t in ts {
                    let p = t.derivs(x, y)?;
                    out.value += p.value;
                    for i in 0..d {
                        out.grad_x[i] += p.grad_x[i];
                        out.grad_y[i] += p.grad_y[i];
                        out.mixed_diag[i] += p.mixed_diag[i];
                    }
                }
                Ok(out)
            }
            Form::Tilted { base, tilt } => {
                let (ax, gax) = tilt.eval_checked(x)?;
                let (ay, gay) = tilt.eval_checked(y)?;
                let b = base.derivs(x, y)?;
                let k = b.value;
                Ok(KernelDerivatives {
                    value: ax * ay * k,
                    grad_x: (0..d).map(|i| (gax[i] * k + ax * b.grad_x[i]) * ay).collect(),
                    grad_y: (0..d).map(|i| ax * (k * gay[i] + b.grad_y[i] * ay)).collect(),
                    mixed_diag: (0..d)
                        .map(|i| gax[i] * gay[i] * k + gax[i] * ay * b.grad_y[i] + ax * b.grad_x[i] * gay[i] + ax * ay * b.mixed_diag[i])
                        .collect(),
                })
            }
            Form::Composed { base, map } => {
                let mx = map.apply(x)?;
                let my = map.apply(y)?;
                let b = base.derivs(&mx.point, &my.point)?;
                let jx = &mx.jacobian;
                let jy = &my.jacobian;
                let grad_x = (0..d).map(|i| (0..d).map(|a| jx[a * d + i] * b.grad_x[a]).sum()).collect();
                let grad_y = (0..d).map(|i| (0..d).map(|a| jy[a * d + i] * b.grad_y[a]).sum()).collect();
                let mixed_diag = if mx.diagonal && my.diagonal {
                    (0..d).map(|i| jx[i * d + i] * jy[i * d + i] * b.mixed_diag[i]).collect()
                } else {
                    let h = base.hessian(&mx.point, &my.point)?;
                    (0..d)
                        .map(|i| {
                            let mut acc = 0.0;
                            for a in 0..d {
                                for c in 0..d {
                                    acc += jx[a * d + i] * jy[c * d + i] * h[a * d + c];
                                }
                            }
                            acc
                        })
                        .collect()
                };
                Ok(KernelDerivatives { value: b.value, grad_x, grad_y, mixed_diag })
            }
            Form::Custom(c) => {
                let fetch = |f: &Option<combinators::PairVecFn>, name: &'static str| -> Result<Vector> {
                    let f = f.as_ref().ok_or(Error::MissingOracle(name))?;
                    let v = f(x, y);
                    check_dim(d, v.len())?;
                    Ok(Vector::from_vec(v))
                };
                Ok(KernelDerivatives {
                    value: (c.value)(x, y),
                    grad_x: fetch(&c.grad_x, "grad_x")?,
                    grad_y: fetch(&c.grad_y, "grad_y")?,
                    mixed_diag: fetch(&c.mixed_diag, "mixed")?,
                })
            }
        }
    }

    fn hessian(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let d = x.len();
        let mut h = vec![0.0; d * d];
        match &self.form {
            Form::Gaussian { .. } | Form::Imq { .. } | Form::InverseLog { .. } | Form::Matern32 { .. } => {
                let u: Vector = x.iter().zip(y).map(|(a, b)| a - b).collect();
                let s = u.iter().map(|v| v * v).sum();
                let Radial { p1, q, .. } = self.radial(s).expect("radial family");
                for a in 0..d {
                    for b in 0..d {
                        h[a * d + b] = -q * u[a] * u[b] - if a == b { p1 } else { 0.0 };
                    }
                }
            }
            Form::Sech { bandwidth } => {
                let l = *bandwidth;
                let t: Vector = x.iter().zip(y).map(|(a, b)| ((a - b) / l).tanh()).collect();
                let value: f64 = x.iter().zip(y).map(|(a, b)| 1.0 / ((a - b) / l).cosh()).product();
                for a in 0..d {
                    for b in 0..d {
                        h[a * d + b] = if a == b { -value * (2.0 * t[a] * t[a] - 1.0) } else { -value * t[a] * t[b] } / (l * l);
                    }
                }
            }
            Form::Linear => {
                for a in 0..d {
                    h[a * d + a] = 1.0;
                }
            }
            Form::Coordinate(i) => h[i * d + i] = 1.0,
            Form::Sum(ts) => {
                for t in ts {
                    for (acc, v) in h.iter_mut().zip(t.hessian(x, y)?) {
                        *acc += v;
                    }
                }
            }
            Form::Tilted { base, tilt } => {
                let (ax, gax) = tilt.eval_checked(x)?;
                let (ay, gay) = tilt.eval_checked(y)?;
                let b = base.derivs(x, y)?;
                let hb = base.hessian(x, y)?;
                for a in 0..d {
                    for c in 0..d {
                        h[a * d + c] = gax[a] * gay[c] * b.value + gax[a] * ay * b.grad_y[c] + ax * b.grad_x[a] * gay[c] + ax * ay * hb[a * d + c];
                    }
                }
            }
            Form::Composed { base, map } => {
                let mx = map.apply(x)?;
                let my = map.apply(y)?;
                let hb = base.hessian(&mx.point, &my.point)?;
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0.0;
                        for a in 0..d {
                            for c in 0..d {
                                acc += mx.jacobian[a * d + i] * my.jacobian[c * d + j] * hb[a * d + c];
                            }
                        }
                        h[i * d + j] = acc;
                    }
                }
            }
            Form::Custom(c) => {
                let f = c.cross_hessian.as_ref().ok_or(Error::MissingOracle("cross_hessian"))?;
                h = f(x, y);
                check_dim(d * d, h.len())?;
            }
        }
        Ok(h)
    }

    pub(crate) fn spec_form(&self) -> SpecView<'_> {
        match &self.form {
            Form::Gaussian { bandwidth } => SpecView::Family(KernelFamily::Gaussian, Some(*bandwidth), None, None),
            Form::Imq { c, gamma } => SpecView::Family(KernelFamily::Imq, None, Some(*c), Some(*gamma)),
            Form::Matern32 { bandwidth } => SpecView::Family(KernelFamily::Matern32, Some(*bandwidth), None, None),
            Form::InverseLog { c, gamma } => SpecView::Family(KernelFamily::InverseLog, None, Some(*c), Some(*gamma)),
            Form::Sech { bandwidth } => SpecView::Family(KernelFamily::Sech, Some(*bandwidth), None, None),
            Form::Linear => SpecView::Family(KernelFamily::Linear, None, None, None),
            Form::Tilted { base, tilt } => SpecView::Tilted(base, tilt),
            Form::Composed { base, map } => SpecView::Composed(base, map),
            _ => SpecView::Opaque,
        }
    }
}

pub(crate) enum SpecView<'a> {
    Family(KernelFamily, Option<f64>, Option<f64>, Option<f64>),
    Tilted(&'a ScalarKernel, &'a TiltFunction),
    Composed(&'a ScalarKernel, &'a Diffeomorphism),
    Opaque,
}

pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Gram matrix `[k(xᵢ, xⱼ)]` over row-major points, `n × n` row-major.
pub fn gram_matrix(k: &ScalarKernel, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = points.len();
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = k.value(&points[i], &points[j])?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = 1e-5;

    fn fd_check(k: &ScalarKernel, x: &[f64], y: &[f64]) {
        let d = x.len();
        let dv = k.derivatives(x, y).unwrap();
        let shift = |p: &[f64], i: usize, h: f64| {
            let mut q = p.to_vec();
            q[i] += h;
            q
        };
        for i in 0..d {
            let gx = (k.value(&shift(x, i, H), y).unwrap() - k.value(&shift(x, i, -H), y).unwrap()) / (2.0 * H);
            let gy = (k.value(x, &shift(y, i, H)).unwrap() - k.value(x, &shift(y, i, -H)).unwrap()) / (2.0 * H);
            let m = (k.value(&shift(x, i, H), &shift(y, i, H)).unwrap() - k.value(&shift(x, i, H), &shift(y, i, -H)).unwrap()
                - k.value(&shift(x, i, -H), &shift(y, i, H)).unwrap()
                + k.value(&shift(x, i, -H), &shift(y, i, -H)).unwrap())
                / (4.0 * H * H);
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(a.abs()).max(1e-3);
            assert!(rel(dv.grad_x[i], gx) < 1e-4, "grad_x[{i}] {} vs {gx} for {k:?}", dv.grad_x[i]);
            assert!(rel(dv.grad_y[i], gy) < 1e-4, "grad_y[{i}] {} vs {gy}", dv.grad_y[i]);
            assert!(rel(dv.mixed_diag[i], m) < 1e-4, "mixed[{i}] {} vs {m} for {k:?}", dv.mixed_diag[i]);
        }
    }

    #[test]
    fn gaussian_at_coincident_origin() {
        let k = ScalarKernel::gaussian(1, 1.0).unwrap();
        let d = k.derivatives(&[0.0], &[0.0]).unwrap();
        assert_eq!(d.value, 1.0);
        assert_eq!(d.grad_x[0], 0.0);
        assert!((d.mixed() - 1.0).abs() < 1e-15);
        fd_check(&k, &[0.0], &[0.0]);
    }

    #[test]
    fn imq_formula() {
        let k = ScalarKernel::imq(1, 1.0, 0.5).unwrap();
        assert!((k.value(&[0.0], &[3f64.sqrt()]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matern_limit_at_diagonal() {
        let k = ScalarKernel::matern32(2, 1.5).unwrap();
        let d = k.derivatives(&[0.3, -0.2], &[0.3, -0.2]).unwrap();
        assert!((d.mixed_diag[0] - 3.0 / 2.25).abs() < 1e-14);
        assert_eq!(d.grad_x[0], 0.0);
    }

    #[test]
    fn derivative_oracles_match_finite_differences() {
        let x = [0.3, -1.1, 0.7];
        let y = [-0.4, 0.2, 1.5];
        for k in [
            ScalarKernel::gaussian(3, 2.0).unwrap(),
            ScalarKernel::imq(3, 1.0, 0.5).unwrap(),
            ScalarKernel::matern32(3, 1.0).unwrap(),
            ScalarKernel::inverse_log(3, 1.0, 1.0).unwrap(),
            ScalarKernel::sech(3, 1.3).unwrap(),
            ScalarKernel::linear(3).unwrap(),
            ScalarKernel::coordinate(3, 1).unwrap(),
        ] {
            fd_check(&k, &x, &y);
        }
    }

    #[test]
    fn tilt_and_compose_oracles() {
        let base = ScalarKernel::gaussian(2, 1.0).unwrap();
        let tilted = base.tilt(TiltFunction::inverse_multiquadric(1.0, 1.0).unwrap());
        fd_check(&tilted, &[0.5, -0.3], &[1.2, 0.4]);
        let composed = base.compose(Diffeomorphism::tanh_perturbation(0.1).unwrap());
        fd_check(&composed, &[0.5, -0.3], &[1.2, 0.4]);
        // rotation: non-diagonal Jacobian exercises the cross-Hessian path
        let (cs, sn) = (0.6f64, 0.8f64);
        let rot = Diffeomorphism::custom(move |x: &[f64]| {
            (vec![cs * x[0] - sn * x[1], sn * x[0] + cs * x[1]], vec![cs, -sn, sn, cs])
        });
        let tilted_rot = ScalarKernel::sech(2, 1.0).unwrap().tilt(TiltFunction::inverse_multiquadric(1.0, 0.5).unwrap()).compose(rot);
        fd_check(&tilted_rot, &[0.5, -0.3], &[1.2, 0.4]);
    }

    #[test]
    fn scale_map_rescales_bandwidth() {
        let k = ScalarKernel::gaussian(2, 1.0).unwrap().compose(Diffeomorphism::scale(2.0).unwrap());
        let k2 = ScalarKernel::gaussian(2, 0.5).unwrap();
        let (x, y) = ([0.3, 0.1], [-0.5, 0.9]);
        assert!((k.value(&x, &y).unwrap() - k2.value(&x, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_tilt_is_rejected() {
        let k = ScalarKernel::gaussian(1, 1.0).unwrap().tilt(TiltFunction::custom(|x| (x[0], vec![1.0])));
        assert!(matches!(k.value(&[-1.0], &[1.0]), Err(Error::NonPositiveTilt { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let k = ScalarKernel::gaussian(2, 1.0).unwrap();
        assert!(matches!(k.value(&[0.0], &[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn custom_without_oracles() {
        let k = ScalarKernel::custom(1, CustomKernel::new(|x, y| (x[0] * y[0]).exp())).unwrap();
        assert!(!k.has_derivative_oracles());
        assert!(matches!(k.derivatives(&[0.0], &[0.0]), Err(Error::MissingOracle(_))));
    }

    #[test]
    fn invalid_parameters() {
        assert!(ScalarKernel::gaussian(1, 0.0).is_err());
        assert!(ScalarKernel::imq(1, -1.0, 0.5).is_err());
        assert!(ScalarKernel::gaussian(0, 1.0).is_err());
    }
}
