//! JSON kernel specifications.
//!
//! ```json
//! {"family": "imq", "params": {"c": 1.0, "gamma": 0.5}, "dim": 1}
//! {"tilt": {"c": 1.0, "gamma": 1.0}, "base": {"family": "gaussian", "params": {"bandwidth": 1.0}, "dim": 2}}
//! {"compose": {"map": "scale", "factor": 2.0}, "base": {...}}
//! ```

use serde::{Deserialize, Serialize};

use super::{Diffeomorphism, KernelFamily, ScalarKernel, SpecView, TiltFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelSpec {
    Tilted { tilt: TiltSpec, base: Box<KernelSpec> },
    Composed { compose: MapSpec, base: Box<KernelSpec> },
    Family {
        family: KernelFamily,
        #[serde(default, skip_serializing_if = "KernelParams::is_empty")]
        params: KernelParams,
        dim: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl KernelParams {
    fn is_empty(&self) -> bool {
        self.bandwidth.is_none() && self.c.is_none() && self.gamma.is_none()
    }
}

/// `a(x) = (c² + ‖x‖²)^{−γ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TiltSpec {
    pub c: f64,
    pub gamma: f64,
}

impl TiltSpec {
    pub fn build(&self) -> Result<TiltFunction> {
        TiltFunction::inverse_multiquadric(self.c, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Identity,
    Scale { factor: f64 },
    TanhPerturbation { eps: f64 },
}

impl MapSpec {
    pub fn build(&self) -> Result<Diffeomorphism> {
        match *self {
            MapSpec::Identity => Ok(Diffeomorphism::Identity),
            MapSpec::Scale { factor } => Diffeomorphism::scale(factor),
            MapSpec::TanhPerturbation { eps } => Diffeomorphism::tanh_perturbation(eps),
        }
    }
}

impl KernelSpec {
    pub fn build(&self) -> Result<ScalarKernel> {
        match self {
            KernelSpec::Tilted { tilt, base } => Ok(base.build()?.tilt(tilt.build()?)),
            KernelSpec::Composed { compose, base } => Ok(base.build()?.compose(compose.build()?)),
            KernelSpec::Family { family, params, dim } => {
                let bw = params.bandwidth.unwrap_or(1.0);
                match family {
                    KernelFamily::Gaussian => ScalarKernel::gaussian(*dim, bw),
                    KernelFamily::Imq => ScalarKernel::imq(*dim, params.c.unwrap_or(1.0), params.gamma.unwrap_or(0.5)),
                    KernelFamily::Matern32 => ScalarKernel::matern32(*dim, bw),
                    KernelFamily::InverseLog => ScalarKernel::inverse_log(*dim, params.c.unwrap_or(1.0), params.gamma.unwrap_or(1.0)),
                    KernelFamily::Sech => ScalarKernel::sech(*dim, bw),
                    KernelFamily::Linear => ScalarKernel::linear(*dim),
                    KernelFamily::Custom => Err(Error::Unsupported("custom kernels are constructed programmatically".into())),
                }
            }
        }
    }

    /// Dimension of the kernel described.
    pub fn dim(&self) -> usize {
        match self {
            KernelSpec::Tilted { base, .. } | KernelSpec::Composed { base, .. } => base.dim(),
            KernelSpec::Family { dim, .. } => *dim,
        }
    }
}

impl ScalarKernel {
    /// JSON description, if the kernel is built from serialisable parts.
    pub fn to_spec(&self) -> Option<KernelSpec> {
        match self.spec_form() {
            SpecView::Family(family, bandwidth, c, gamma) => {
                Some(KernelSpec::Family { family, params: KernelParams { bandwidth, c, gamma }, dim: self.dim() })
            }
            SpecView::Tilted(base, TiltFunction::InverseMultiquadric { c, gamma }) => {
                Some(KernelSpec::Tilted { tilt: TiltSpec { c: *c, gamma: *gamma }, base: Box::new(base.to_spec()?) })
            }
            SpecView::Composed(base, map) => {
                let compose = match map {
                    Diffeomorphism::Identity => MapSpec::Identity,
                    Diffeomorphism::Scale(factor) => MapSpec::Scale { factor: *factor },
                    Diffeomorphism::TanhPerturbation { eps } => MapSpec::TanhPerturbation { eps: *eps },
                    Diffeomorphism::Custom(_) => return None,
                };
                Some(KernelSpec::Composed { compose, base: Box::new(base.to_spec()?) })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_specs() {
        let s: KernelSpec = serde_json::from_str(
            r#"{"tilt": {"c": 1, "gamma": 1}, "base": {"compose": {"map": "scale", "factor": 2}, "base": {"family": "gaussian", "params": {"bandwidth": 1}, "dim": 2}}}"#,
        )
        .unwrap();
        let k = s.build().unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.to_spec().unwrap(), s);
        let v = k.value(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defaults_and_rejections() {
        let s: KernelSpec = serde_json::from_str(r#"{"family": "imq", "dim": 1}"#).unwrap();
        let k = s.build().unwrap();
        assert!((k.value(&[0.0], &[3f64.sqrt()]).unwrap() - 0.5).abs() < 1e-15);
        assert!(serde_json::from_str::<KernelSpec>(r#"{"family": "imq", "params": {"bogus": 1}, "dim": 1}"#).is_err());
        assert!(serde_json::from_str::<KernelSpec>(r#"{"family": "wendland", "dim": 1}"#).is_err());
        let bad: KernelSpec = serde_json::from_str(r#"{"family": "gaussian", "params": {"bandwidth": -1}, "dim": 1}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
