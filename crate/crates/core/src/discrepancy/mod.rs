//! MMD and KSD estimators.
//!
//! Every squared discrepancy is a double integral of a kernel against a
//! signed measure; the estimators here evaluate it over weighted samples
//! (V- and U-statistics) or by deterministic quadrature in one dimension.
//! Pair sums run row-parallel and reduce with [`crate::reduce::pairwise_sum`]
//! in a fixed order, so results do not depend on the thread count.

mod embeddability;
mod estimators;
mod quadrature;
mod sample;

pub use embeddability::{embeddability_diagnostics, EmbeddabilityReport};
pub use estimators::{ksd_u_stat, ksd_v_stat, mmd_v_stat, stein_gram};
pub(crate) use estimators::u_stat_from_rows;
pub use quadrature::{ksd_quadrature_1d, ksd_score_diff_quadrature};
pub use sample::SampleSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    VStat,
    UStat,
    Quadrature,
}

/// A discrepancy and how it was estimated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyEstimate {
    pub estimator: Estimator,
    /// `√max(0, squared_value)`.
    pub value: f64,
    #[serde(rename = "squared")]
    pub squared_value: f64,
    #[serde(rename = "n")]
    pub n_points: Option<usize>,
    #[serde(rename = "tol", skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(rename = "stderr")]
    pub standard_error: Option<f64>,
}

impl DiscrepancyEstimate {
    pub(crate) fn new(
        estimator: Estimator,
        squared_value: f64,
        n_points: Option<usize>,
        tolerance: Option<f64>,
        standard_error: Option<f64>,
    ) -> Self {
        Self { estimator, value: squared_value.max(0.0).sqrt(), squared_value, n_points, tolerance, standard_error }
    }
}
