use serde::{Deserialize, Serialize};

use crate::discrepancy::SampleSet;
use crate::kernel::spec::TiltSpec;
use crate::kernel::{MatrixBaseKernel, ScalarKernel};
use crate::reduce::par_rows;
use crate::stein::bounded_stein_base;
use crate::target::Target;
use crate::{check_dim, positive, Error, Result};

/// Kernel driving the particle updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelChoice {
    /// `k·Id` with the supplied scalar kernel.
    BaseKernelOnParticles,
    /// `diag(a(x)(xⁱyⁱ + k(x, y))a(y))` built from the supplied kernel.
    BoundedSteinConstruction { tilt: TiltSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvgdConfig {
    pub step_size: f64,
    pub iterations: usize,
    pub kernel_choice: KernelChoice,
    /// Seed for drawing initial particles when none are supplied; the updates
    /// themselves are deterministic.
    pub seed: u64,
}

impl SvgdConfig {
    pub fn new(step_size: f64, iterations: usize) -> Result<Self> {
        positive("step_size", step_size)?;
        Ok(Self { step_size, iterations, kernel_choice: KernelChoice::BaseKernelOnParticles, seed: 0 })
    }

    /// Matrix kernel selected by `kernel_choice` from `k`.
    pub fn driving_kernel(&self, k: &ScalarKernel) -> Result<MatrixBaseKernel> {
        match self.kernel_choice {
            KernelChoice::BaseKernelOnParticles => Ok(MatrixBaseKernel::scalar(k.clone())),
            KernelChoice::BoundedSteinConstruction { tilt } => bounded_stein_base(k, &tilt.build()?),
        }
    }
}

/// Runs SVGD from `initial` with the kernel selected by `config`.
pub fn svgd_run(target: &Target, config: &SvgdConfig, initial: &SampleSet, k: &ScalarKernel) -> Result<SampleSet> {
    let kernel = config.driving_kernel(k)?;
    svgd_run_matrix(target, config, initial, &kernel, |_, _| {})
}

/// Runs SVGD with a diagonal matrix kernel, calling `observe(t, particles)`
/// after every iteration `t = 1, …, iterations`.
///
/// Coordinate `i` of particle `x` moves by
/// `ε (1/n) Σⱼ [Kᵢᵢ(xⱼ, x) sᵢ(xⱼ) + ∂_{xⱼⁱ} Kᵢᵢ(xⱼ, x)]`, all particles reading
/// the previous iterate.
pub fn svgd_run_matrix<F>(
    target: &Target,
    config: &SvgdConfig,
    initial: &SampleSet,
    kernel: &MatrixBaseKernel,
    mut observe: F,
) -> Result<SampleSet>
where
    F: FnMut(usize, &SampleSet),
{
    positive("step_size", config.step_size)?;
    let d = target.dim();
    check_dim(d, initial.dim())?;
    check_dim(d, kernel.dim())?;
    let n = initial.n();
    let mut current = initial.clone();
    for t in 1..=config.iterations {
        let pts = current.points();
        let diverged = |e: Error| match e {
            Error::NonFinite(_) => Error::Diverged { iteration: t },
            e => e,
        };
        let scores = par_rows(n, |j| target.score(&pts[j * d..(j + 1) * d]))
            .into_iter()
            .collect::<Result<Vec<_>>>()
            .map_err(diverged)?;
        let moved = par_rows(n, |i| -> Result<Vec<f64>> {
            let x = &pts[i * d..(i + 1) * d];
            let mut phi = vec![0.0; d];
            for j in 0..n {
                let xj = &pts[j * d..(j + 1) * d];
                kernel.for_each_entry(xj, x, |entry, dv| {
                    let mut apply = |c: usize| phi[c] += dv.value * scores[j][c] + dv.grad_x[c];
                    match entry {
                        None => (0..d).for_each(&mut apply),
                        Some(c) => apply(c),
                    }
                })?;
            }
            Ok(x.iter().zip(&phi).map(|(xi, p)| xi + config.step_size * p / n as f64).collect())
        });
        let mut next = Vec::with_capacity(n * d);
        for row in moved {
            let row = row.map_err(diverged)?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Diverged { iteration: t });
            }
            next.extend(row);
        }
        current = current.with_points(next)?;
        observe(t, &current);
    }
    Ok(current)
}
