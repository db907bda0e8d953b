use std::path::{Path, PathBuf};

use serde::Serialize;
use steinkit::discrepancy::{
    embeddability_diagnostics, ksd_u_stat, ksd_v_stat, mmd_v_stat, EmbeddabilityReport, Estimator, SampleSet,
};
use steinkit::experiments::{boundedness_scan, convergence_curve, escape_sequence, SequenceFamily};
use steinkit::inference::{gof_test, svgd_run_matrix, SvgdConfig};
use steinkit::stein::spec::SteinSpec;
use steinkit::stein::SteinKernel;
use steinkit::target::{check_dissipativity, score_growth_probe, DissipativityReport, GrowthReport};
use steinkit::{rng, Error};

use crate::config::{self, DiagnoseConfig, ExperimentConfig, ExperimentKind, GofConfig, KsdConfig, MmdConfig, SvgdFileConfig};
use crate::io;
use crate::CliError;

pub struct Global<'a> {
    pub config: Option<&'a Path>,
    pub seed: Option<u64>,
    pub output: Option<&'a Path>,
}

impl Global<'_> {
    fn seed(&self, from_config: Option<u64>) -> u64 {
        self.seed.or(from_config).unwrap_or(0)
    }
}

fn required(flag: Option<PathBuf>, from_config: Option<PathBuf>, what: &str) -> Result<PathBuf, CliError> {
    flag.or(from_config).ok_or_else(|| CliError::Input(format!("no {what} given (flag or configuration)")))
}

fn stein(spec: &SteinSpec, samples: Option<&SampleSet>) -> Result<SteinKernel, CliError> {
    let sk = spec.build()?;
    if let Some(s) = samples {
        if s.dim() != sk.dim() {
            return Err(Error::DimensionMismatch { expected: sk.dim(), got: s.dim() }.into());
        }
    }
    Ok(sk)
}

pub fn ksd(g: &Global, samples: Option<PathBuf>, estimator: Option<Estimator>) -> Result<(), CliError> {
    let cfg: KsdConfig = config::load(g.config)?;
    let q = io::read_samples(&required(samples, cfg.samples.clone(), "samples")?)?;
    let sk = stein(&cfg.stein(), Some(&q))?;
    let est = match estimator.or(cfg.estimator).unwrap_or(Estimator::VStat) {
        Estimator::VStat => ksd_v_stat(&sk, &q)?,
        Estimator::UStat => ksd_u_stat(&sk, &q)?,
        Estimator::Quadrature => return Err(CliError::Input("the quadrature estimator needs a density, not samples".into())),
    };
    io::write_json(g.output, &est)
}

pub fn mmd(g: &Global, samples: Option<PathBuf>, reference: Option<PathBuf>) -> Result<(), CliError> {
    let cfg: MmdConfig = config::load(g.config)?;
    let q = io::read_samples(&required(samples, cfg.samples.clone(), "samples")?)?;
    let p = io::read_samples(&required(reference, cfg.reference.clone(), "reference")?)?;
    let k = cfg.kernel.build()?;
    io::write_json(g.output, &mmd_v_stat(&k, &q, &p)?)
}

pub fn gof(g: &Global, samples: Option<PathBuf>, alpha: Option<f64>, bootstrap: Option<usize>) -> Result<(), CliError> {
    let cfg: GofConfig = config::load(g.config)?;
    let q = io::read_samples(&required(samples, cfg.samples.clone(), "samples")?)?;
    let sk = stein(&cfg.stein(), Some(&q))?;
    let res = gof_test(&sk, &q, alpha.unwrap_or(cfg.alpha), bootstrap.unwrap_or(cfg.n_bootstrap), g.seed(cfg.seed))?;
    io::write_json(g.output, &res)
}

#[derive(Serialize)]
struct SvgdOutput {
    iterations: usize,
    step_size: f64,
    seed: u64,
    n: usize,
    mean: Vec<f64>,
    variance: Vec<f64>,
    ksd: f64,
    particles: Vec<Vec<f64>>,
}

pub fn svgd(g: &Global, initial: Option<PathBuf>, trace: Option<PathBuf>) -> Result<(), CliError> {
    let cfg: SvgdFileConfig = config::load(g.config)?;
    let seed = g.seed(cfg.seed);
    let target = cfg.target.build()?;
    let init = match (initial.or(cfg.initial.clone()), &cfg.draw) {
        (Some(path), _) => io::read_samples(&path)?,
        (None, Some(draw)) => draw.from.build()?.sample(draw.n, &mut rng::seeded(seed))?,
        (None, None) => return Err(CliError::Input("svgd needs `initial` particles or a `draw` block".into())),
    };
    let run_cfg = SvgdConfig { step_size: cfg.step_size, iterations: cfg.iterations, kernel_choice: cfg.kernel_choice, seed };
    let kernel = run_cfg.driving_kernel(&cfg.kernel.build()?)?;
    let sk = SteinKernel::new(kernel.clone(), target.clone())?;
    let trace_path = trace.or(cfg.trace.clone());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut trace_err = None;
    let mut summarise = |t: usize, s: &SampleSet| {
        if trace_path.is_none() || trace_err.is_some() {
            return;
        }
        match ksd_v_stat(&sk, s) {
            Ok(est) => {
                let mut row = vec![t as f64];
                row.extend(s.mean());
                row.extend(s.variance());
                row.push(est.value);
                rows.push(row);
            }
            Err(e) => trace_err = Some(e),
        }
    };
    summarise(0, &init);
    let out = svgd_run_matrix(&target, &run_cfg, &init, &kernel, &mut summarise)?;
    if let Some(e) = trace_err {
        return Err(e.into());
    }
    if let Some(path) = &trace_path {
        let d = init.dim();
        let mut header = vec!["iteration".to_string()];
        header.extend((0..d).map(|j| format!("mean_{j}")));
        header.extend((0..d).map(|j| format!("variance_{j}")));
        header.push("ksd".into());
        io::write_table(Some(path), &header, &rows)?;
    }
    let result = SvgdOutput {
        iterations: cfg.iterations,
        step_size: cfg.step_size,
        seed,
        n: out.n(),
        mean: out.mean(),
        variance: out.variance(),
        ksd: ksd_v_stat(&sk, &out)?.value,
        particles: out.rows().map(<[f64]>::to_vec).collect(),
    };
    io::write_json(g.output, &result)
}

#[derive(Debug, Serialize)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

pub const FAILURE_WARNING: &str = "bounded_kernel_decaying_score";

#[derive(Serialize)]
struct DiagnoseReport {
    dim: usize,
    base_kernel_bounded: bool,
    embeddability: Option<EmbeddabilityReport>,
    embeddability_error: Option<String>,
    dissipativity: DissipativityReport,
    score_growth: GrowthReport,
    warnings: Vec<Warning>,
}

pub fn diagnose(g: &Global) -> Result<(), CliError> {
    let cfg: DiagnoseConfig = config::load(g.config)?;
    let sk = stein(&cfg.stein(), None)?;
    let target = sk.target();
    let (embeddability, embeddability_error) = match embeddability_diagnostics(&sk, cfg.n, g.seed(cfg.seed)) {
        Ok(r) => (Some(r), None),
        Err(Error::Unsupported(m)) => (None, Some(m)),
        Err(e) => return Err(e.into()),
    };
    let dissipativity = check_dissipativity(target, &cfg.dissipativity, &cfg.radii, cfg.directions_per_radius)?;
    let mut radii = cfg.radii.clone();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let score_growth = score_growth_probe(target, &radii)?;
    let bounded = sk.base().is_bounded();

    let mut warnings = Vec::new();
    if bounded && score_growth.score_decaying() {
        warnings.push(Warning {
            code: FAILURE_WARNING,
            message: format!(
                "the base kernel is bounded and the score norm decays past radius {}; this KSD cannot control convergence to the target",
                radii[radii.len() - 2]
            ),
        });
    }
    if !dissipativity.holds {
        warnings.push(Warning {
            code: "not_dissipative",
            message: format!(
                "generalized dissipativity fails on the probe grid (worst margin {:e} at {:?})",
                dissipativity.worst_margin, dissipativity.worst_point
            ),
        });
    }
    if let Some(e) = &embeddability {
        if !e.zero_mean_plausible {
            warnings.push(Warning {
                code: "nonzero_mean",
                message: format!(
                    "the Stein kernel double integral {:e} exceeds 3 standard errors ({:e})",
                    e.double_integral_kp, e.double_integral_stderr
                ),
            });
        }
    }
    for w in &warnings {
        log::warn!("{}", w.message);
    }
    let report = DiagnoseReport {
        dim: sk.dim(),
        base_kernel_bounded: bounded,
        embeddability,
        embeddability_error,
        dissipativity,
        score_growth,
        warnings,
    };
    io::write_json(g.output, &report)
}

pub fn experiment(g: &Global) -> Result<(), CliError> {
    let cfg: ExperimentConfig = config::load(g.config)?;
    let output = g.output.or(cfg.output.as_deref());
    let grid = &cfg.grid;
    let stein_kernel = || -> Result<SteinKernel, CliError> {
        let base = cfg.kernel.clone().ok_or_else(|| CliError::Input("this experiment needs a `kernel`".into()))?;
        stein(&SteinSpec { base, target: cfg.target.clone(), tilt: cfg.tilt }, None)
    };
    match cfg.experiment {
        ExperimentKind::EscapeSequence => io::write_csv(output, &escape_sequence(&stein_kernel()?, grid.n_max)?),
        ExperimentKind::ConvergenceCurve => {
            let ns = grid.ns.clone().unwrap_or_else(|| (1..=50).collect());
            let family = grid.family.unwrap_or(SequenceFamily::ShrinkingShift);
            io::write_csv(output, &convergence_curve(&stein_kernel()?, family, &ns, grid.domain, grid.tol)?)
        }
        ExperimentKind::BoundednessScan => {
            let points = grid.points.clone().unwrap_or_else(|| (0..=500).map(|i| i as f64 * 0.1).collect());
            io::write_csv(output, &boundedness_scan(&stein_kernel()?, &points)?)
        }
        ExperimentKind::DissipativityReport => {
            let target = cfg.target.build()?;
            let report = check_dissipativity(&target, &grid.dissipativity, &grid.radii, grid.directions_per_radius)?;
            io::write_json(output, &report)
        }
    }
}
