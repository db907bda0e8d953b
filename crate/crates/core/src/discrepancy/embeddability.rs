use serde::Serialize;

use crate::reduce::{pairwise_sum, par_rows};
use crate::stein::SteinKernel;
use crate::{rng, Error, Result};

use super::estimators::ksd_u_stat;

const MIN_SAMPLES: usize = 100;

/// Monte Carlo checks of the Stein embeddability conditions under `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddabilityReport {
    pub n: usize,
    /// `E_P √k_p(x, x)`.
    pub mean_sqrt_kp: f64,
    pub mean_sqrt_kp_stderr: f64,
    /// `E_P ‖s_p(x)‖`.
    pub mean_score_norm: f64,
    pub mean_score_norm_stderr: f64,
    /// Unbiased estimate of `∬k_p dP dP`.
    pub double_integral_kp: f64,
    pub double_integral_stderr: f64,
    /// `|double_integral_kp| ≤ 3 · double_integral_stderr`.
    pub zero_mean_plausible: bool,
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = pairwise_sum(v) / n;
    let dev: Vec<f64> = v.iter().map(|x| (x - mean).powi(2)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1.0) / n).sqrt())
}

/// Draws `n` points from the target of `sk` and estimates its embeddability
/// diagnostics.
pub fn embeddability_diagnostics(sk: &SteinKernel, n: usize, seed: u64) -> Result<EmbeddabilityReport> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter { name: "n", reason: format!("need at least {MIN_SAMPLES} samples, got {n}") });
    }
    let p = sk.target();
    let sample = p.sample(n, &mut rng::seeded(seed))?;
    let scores = sk.scores(sample.points())?;
    let sqrt_kp = par_rows(n, |i| {
        let x = sample.point(i);
        sk.eval_with_scores(x, &scores[i], x, &scores[i]).map(|v| v.max(0.0).sqrt())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = scores.iter().map(|s| s.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let (mean_sqrt_kp, mean_sqrt_kp_stderr) = mean_and_stderr(&sqrt_kp);
    let (mean_score_norm, mean_score_norm_stderr) = mean_and_stderr(&norms);
    let u = ksd_u_stat(sk, &sample)?;
    let se = u.standard_error.unwrap_or(f64::INFINITY);
    Ok(EmbeddabilityReport {
        n,
        mean_sqrt_kp,
        mean_sqrt_kp_stderr,
        mean_score_norm,
        mean_score_norm_stderr,
        double_integral_kp: u.squared_value,
        double_integral_stderr: se,
        zero_mean_plausible: u.squared_value.abs() <= 3.0 * se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ScalarKernel;
    use crate::target::Target;

    #[test]
    fn standard_normal_imq() {
        let sk = SteinKernel::new(ScalarKernel::imq(1, 1.0, 0.5).unwrap(), Target::standard_normal(1).unwrap()).unwrap();
        let r = embeddability_diagnostics(&sk, 2000, 11).unwrap();
        assert!(r.zero_mean_plausible, "{r:?}");
        let exact = (2.0 / std::f64::consts::PI).sqrt();
        assert!((r.mean_score_norm - exact).abs() <= 3.0 * r.mean_score_norm_stderr, "{r:?}");
        assert!(embeddability_diagnostics(&sk, 10, 0).is_err());
    }

    #[test]
    fn custom_target_has_no_sampler() {
        let t = Target::custom(1, |x| -0.5 * x[0] * x[0], |x| vec![-x[0]]).unwrap();
        let sk = SteinKernel::new(ScalarKernel::imq(1, 1.0, 0.5).unwrap(), t).unwrap();
        assert!(matches!(embeddability_diagnostics(&sk, 200, 0), Err(Error::Unsupported(_))));
    }
}
