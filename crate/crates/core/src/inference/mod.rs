//! Goodness-of-fit testing, SVGD sampling and sample ranking.

mod gof;
mod svgd;

pub use gof::{gof_test, TestResult};
pub use svgd::{svgd_run, svgd_run_matrix, KernelChoice, SvgdConfig};

use serde::Serialize;

use crate::discrepancy::{ksd_v_stat, SampleSet};
use crate::stein::SteinKernel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedSample {
    /// Position in the input list.
    pub index: usize,
    pub ksd: f64,
}

/// Candidates ordered by V-statistic KSD, ascending; ties keep input order.
pub fn rank_samples(sk: &SteinKernel, candidates: &[SampleSet]) -> Result<Vec<RankedSample>> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput("candidate samples"));
    }
    let mut ranked = candidates
        .iter()
        .enumerate()
        .map(|(index, c)| Ok(RankedSample { index, ksd: ksd_v_stat(sk, c)?.value }))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.ksd.total_cmp(&b.ksd));
    Ok(ranked)
}
