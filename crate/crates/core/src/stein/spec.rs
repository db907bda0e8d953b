//! JSON Stein kernel specifications:
//! `{"base": <kernel>, "target": <target>, "tilt": {"c": 1, "gamma": 1}}`.
//!
//! With `tilt` present the base is the bounded diagonal construction
//! `diag(a(x)(xⁱyⁱ + k(x, y))a(y))`; otherwise it is `k·Id`.

use serde::{Deserialize, Serialize};

use super::{bounded_stein_base, SteinKernel};
use crate::kernel::spec::{KernelSpec, TiltSpec};
use crate::kernel::MatrixBaseKernel;
use crate::target::spec::TargetSpec;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteinSpec {
    pub base: KernelSpec,
    pub target: TargetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilt: Option<TiltSpec>,
}

impl SteinSpec {
    pub fn build_base(&self) -> Result<MatrixBaseKernel> {
        let k = self.base.build()?;
        match &self.tilt {
            Some(t) => bounded_stein_base(&k, &t.build()?),
            None => Ok(MatrixBaseKernel::scalar(k)),
        }
    }

    pub fn build(&self) -> Result<SteinKernel> {
        SteinKernel::new(self.build_base()?, self.target.build()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_plain_and_bounded() {
        let plain: SteinSpec = serde_json::from_str(
            r#"{"base": {"family": "gaussian", "dim": 1}, "target": {"family": "gaussian", "mean": [0], "cov_diag": [1]}}"#,
        )
        .unwrap();
        assert!((plain.build().unwrap().eval(&[0.0], &[0.0]).unwrap() - 1.0).abs() < 1e-15);
        let bounded: SteinSpec = serde_json::from_str(
            r#"{"base": {"family": "gaussian", "dim": 1}, "target": {"family": "gaussian", "mean": [0], "cov_diag": [1]}, "tilt": {"c": 1, "gamma": 1}}"#,
        )
        .unwrap();
        assert!(bounded.build().unwrap().base().as_scalar().is_none());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s: SteinSpec = serde_json::from_str(
            r#"{"base": {"family": "gaussian", "dim": 2}, "target": {"family": "cauchy", "loc": [0]}}"#,
        )
        .unwrap();
        assert!(s.build().is_err());
    }
}
