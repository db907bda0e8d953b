use crate::kernel::{ScalarKernel, Vector};
use crate::reduce::{pairwise_sum, par_rows};
use crate::stein::SteinKernel;
use crate::{check_dim, Error, Result};

use super::{DiscrepancyEstimate, Estimator, SampleSet};

/// Relative size of negative round-off tolerated in a V-statistic.
const NEGATIVE_GUARD: f64 = 1e-10;

fn stein_row_upper(sk: &SteinKernel, q: &SampleSet, scores: &[Vector], i: usize) -> Result<(f64, f64)> {
    let xi = q.point(i);
    let kii = sk.eval_with_scores(xi, &scores[i], xi, &scores[i])?;
    let mut terms = Vec::with_capacity(q.n() - i);
    terms.push(q.weight(i) * kii);
    for j in i + 1..q.n() {
        let kij = sk.eval_with_scores(xi, &scores[i], q.point(j), &scores[j])?;
        terms.push(2.0 * q.weight(j) * kij);
    }
    Ok((q.weight(i) * pairwise_sum(&terms), kii))
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

/// Squares within the negative guard are clamped; anything below it means the
/// kernel is not positive semidefinite on the sample.
fn guarded(squared: f64, scale: f64, what: &str) -> Result<f64> {
    let squared = finite(squared, what)?;
    if squared < -NEGATIVE_GUARD * scale.max(1.0) {
        return Err(Error::Inconsistent(format!("{what} has negative square {squared:e}")));
    }
    Ok(squared)
}

/// `Σᵢⱼ wᵢ wⱼ k_p(xᵢ, xⱼ)`.
pub fn ksd_v_stat(sk: &SteinKernel, q: &SampleSet) -> Result<DiscrepancyEstimate> {
    check_dim(sk.dim(), q.dim())?;
    let scores = sk.scores(q.points())?;
    let rows = par_rows(q.n(), |i| stein_row_upper(sk, q, &scores, i)).into_iter().collect::<Result<Vec<_>>>()?;
    let sums: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let diag_scale = pairwise_sum(&rows.iter().map(|r| r.1.abs()).collect::<Vec<_>>()) / q.n() as f64;
    let squared = guarded(pairwise_sum(&sums), diag_scale, "KSD V-statistic")?;
    Ok(DiscrepancyEstimate::new(Estimator::VStat, squared, Some(q.n()), None, None))
}

/// Row sums `rᵢ = Σ_{j≠i} k_p(xᵢ, xⱼ)` of the Stein Gram matrix.
fn stein_off_diagonal_row_sums(sk: &SteinKernel, q: &SampleSet) -> Result<Vec<f64>> {
    let scores = sk.scores(q.points())?;
    par_rows(q.n(), |i| {
        let xi = q.point(i);
        let terms = (0..q.n())
            .filter(|&j| j != i)
            .map(|j| sk.eval_with_scores(xi, &scores[i], q.point(j), &scores[j]))
            .collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&terms))
    })
    .into_iter()
    .collect()
}

/// Unbiased `(1 / n(n−1)) Σ_{i≠j} k_p(xᵢ, xⱼ)` with a jackknife standard
/// error (for `n ≥ 3`).
pub fn ksd_u_stat(sk: &SteinKernel, q: &SampleSet) -> Result<DiscrepancyEstimate> {
    check_dim(sk.dim(), q.dim())?;
    if q.n() < 2 {
        return Err(Error::InvalidParameter { name: "n", reason: "U-statistic needs at least 2 points".into() });
    }
    if !q.is_uniform() {
        return Err(Error::Unsupported("U-statistic requires uniform weights".into()));
    }
    let rows = stein_off_diagonal_row_sums(sk, q)?;
    let (squared, stderr) = u_stat_from_rows(&rows);
    let squared = finite(squared, "KSD U-statistic")?;
    Ok(DiscrepancyEstimate::new(Estimator::UStat, squared, Some(q.n()), None, stderr))
}

/// U-statistic and jackknife standard error from off-diagonal row sums.
pub(crate) fn u_stat_from_rows(rows: &[f64]) -> (f64, Option<f64>) {
    let n = rows.len() as f64;
    let total = pairwise_sum(rows);
    let u = total / (n * (n - 1.0));
    if rows.len() < 3 {
        return (u, None);
    }
    let denom = (n - 1.0) * (n - 2.0);
    let loo: Vec<f64> = rows.iter().map(|r| (total - 2.0 * r) / denom).collect();
    let mean = pairwise_sum(&loo) / n;
    let dev: Vec<f64> = loo.iter().map(|v| (v - mean).powi(2)).collect();
    (u, Some(((n - 1.0) / n * pairwise_sum(&dev)).sqrt()))
}

/// Full symmetric Stein Gram matrix, row-major.
pub fn stein_gram(sk: &SteinKernel, q: &SampleSet) -> Result<Vec<f64>> {
    check_dim(sk.dim(), q.dim())?;
    let n = q.n();
    let scores = sk.scores(q.points())?;
    let upper = par_rows(n, |i| {
        (i..n)
            .map(|j| sk.eval_with_scores(q.point(i), &scores[i], q.point(j), &scores[j]))
            .collect::<Result<Vec<_>>>()
    });
    let mut g = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row?.into_iter().enumerate() {
            let j = i + off;
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    }
    Ok(g)
}

fn cross_sum(k: &ScalarKernel, a: &SampleSet, b: &SampleSet) -> Result<f64> {
    let rows = par_rows(a.n(), |i| {
        let terms = (0..b.n())
            .map(|j| Ok(b.weight(j) * k.value_unchecked(a.point(i), b.point(j))?))
            .collect::<Result<Vec<_>>>()?;
        Ok(a.weight(i) * pairwise_sum(&terms))
    });
    Ok(pairwise_sum(&rows.into_iter().collect::<Result<Vec<_>>>()?))
}

/// `∬k d(Q−P) d(Q−P)` for two weighted samples.
pub fn mmd_v_stat(k: &ScalarKernel, q: &SampleSet, p: &SampleSet) -> Result<DiscrepancyEstimate> {
    check_dim(k.dim(), q.dim())?;
    check_dim(k.dim(), p.dim())?;
    let qq = cross_sum(k, q, q)?;
    let qp = cross_sum(k, q, p)?;
    let pp = cross_sum(k, p, p)?;
    let squared = guarded(qq - 2.0 * qp + pp, qq.abs().max(pp.abs()), "MMD V-statistic")?;
    Ok(DiscrepancyEstimate::new(Estimator::VStat, squared, Some(q.n()), None, None))
}
