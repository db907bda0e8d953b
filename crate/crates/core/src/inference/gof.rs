use rand::Rng;
use serde::Serialize;

use crate::discrepancy::{stein_gram, u_stat_from_rows, SampleSet};
use crate::reduce::par_rows;
use crate::stein::SteinKernel;
use crate::{rng, Error, Result};

const MIN_SAMPLES: usize = 10;
const MIN_BOOTSTRAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    /// `n` times the squared U-statistic KSD.
    pub statistic: f64,
    /// `1 − α` quantile of the bootstrap statistics.
    pub threshold: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub n_bootstrap: usize,
    pub seed: u64,
}

/// KSD goodness-of-fit test of `H₀: Q = P` calibrated by a Rademacher wild
/// bootstrap. Replicate `b` draws its signs from stream `b + 1` of `seed`.
pub fn gof_test(sk: &SteinKernel, q: &SampleSet, alpha: f64, n_bootstrap: usize, seed: u64) -> Result<TestResult> {
    let n = q.n();
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter { name: "n", reason: format!("need at least {MIN_SAMPLES} samples, got {n}") });
    }
    if n_bootstrap < MIN_BOOTSTRAP {
        return Err(Error::InvalidParameter {
            name: "n_bootstrap",
            reason: format!("need at least {MIN_BOOTSTRAP} replicates, got {n_bootstrap}"),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { name: "alpha", reason: format!("must lie in (0, 1), got {alpha}") });
    }
    if !q.is_uniform() {
        return Err(Error::Unsupported("goodness-of-fit test requires uniform weights".into()));
    }
    let mut gram = stein_gram(sk, q)?;
    for i in 0..n {
        gram[i * n + i] = 0.0;
    }
    let rows: Vec<f64> = gram.chunks_exact(n).map(crate::reduce::pairwise_sum).collect();
    let nf = n as f64;
    let statistic = nf * u_stat_from_rows(&rows).0;
    if !statistic.is_finite() {
        return Err(Error::NonFinite("test statistic".into()));
    }
    let scale = 1.0 / (nf - 1.0);
    let mut boot = par_rows(n_bootstrap, |b| {
        let mut r = rng::stream(seed, b as u64 + 1);
        let eps: Vec<f64> = (0..n).map(|_| if r.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let mut total = 0.0;
        for (i, row) in gram.chunks_exact(n).enumerate() {
            let inner: f64 = row.iter().zip(&eps).map(|(g, e)| g * e).sum();
            total += eps[i] * inner;
        }
        total * scale
    });
    let exceed = boot.iter().filter(|t| **t >= statistic).count();
    let p_value = exceed as f64 / n_bootstrap as f64;
    boot.sort_by(f64::total_cmp);
    let idx = ((1.0 - alpha) * n_bootstrap as f64).ceil() as usize;
    let threshold = boot[idx.clamp(1, n_bootstrap) - 1];
    Ok(TestResult { statistic, threshold, p_value, alpha, reject: p_value <= alpha, n_bootstrap, seed })
}
