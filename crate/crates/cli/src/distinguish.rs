//! `distinguish`: repeat a circuit many times on pairs drawn from a labeled
//! source and classify each pair by its acceptance frequency.
//!
//! With `--source both`, a calibration round estimates the mean acceptance of
//! each source on fresh pairs; the threshold is their midpoint and accuracy is
//! measured on a second, independent set of pairs.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use forriqp_core::circuits::{
    even_circuit, odd_circuit, AbsoluteProcedure, CombinedProcedure, PreparedCircuit,
};
use forriqp_core::forrelation::{
    phi, sample_forrelated_pair, sample_uniform_pair, BooleanFunction,
};
use forriqp_core::iqp::reference::{reference_fig1, reference_fig2, REFERENCE_MAX_N};
use forriqp_core::par;
use forriqp_core::rng::{self, CounterRng, ALGORITHM_ID};
use rand_core::RngCore;
use serde::Serialize;

use crate::output::{self, sig12};
use crate::phi::load_pair;
use crate::{Format, Globals, Report};

/// Cap on the default `n⁴` repetition count.
pub const DEFAULT_TRIALS_CAP: u64 = 100_000;
pub const DEFAULT_INSTANCES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitKind {
    Odd,
    Even,
    Combined,
    Absolute,
    BqpFig1,
    BqpFig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Uniform,
    Forrelated,
    Files,
    /// Calibrate and classify uniform against forrelated
    Both,
}

#[derive(Debug, Args)]
pub struct DistinguishArgs {
    /// Number of variables
    #[arg(long)]
    pub n: usize,
    /// Repetitions per pair (default n⁴, capped at 100000)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Pairs drawn per source and round
    #[arg(long, default_value_t = DEFAULT_INSTANCES)]
    pub instances: usize,
    #[arg(long, value_enum, default_value_t = CircuitKind::Absolute)]
    pub circuit: CircuitKind,
    #[arg(long, value_enum, default_value_t = SourceKind::Both)]
    pub source: SourceKind,
    /// f for --source files
    #[arg(long)]
    pub f: Option<PathBuf>,
    /// g for --source files
    #[arg(long)]
    pub g: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: u64,
    pub instances: usize,
    pub seed: u64,
    pub circuit: CircuitKind,
    pub source: SourceKind,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.n == 0 {
            bail!("n must be at least 1");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.instances == 0 {
            bail!("instances must be at least 1");
        }
        if matches!(self.circuit, CircuitKind::Odd | CircuitKind::Even) && self.n % 2 == 0 {
            bail!("the {:?} circuit needs odd n; use combined or absolute", self.circuit);
        }
        if matches!(self.source, SourceKind::Forrelated | SourceKind::Both) && self.n < 2 {
            bail!("the forrelated source needs n >= 2");
        }
        if matches!(self.circuit, CircuitKind::BqpFig1 | CircuitKind::BqpFig2)
            && self.n + 1 > REFERENCE_MAX_N
        {
            bail!("reference circuits are limited to n < {REFERENCE_MAX_N}");
        }
        Ok(())
    }
}

pub fn default_trials(n: usize) -> u64 {
    (n as u64).saturating_pow(4).clamp(1, DEFAULT_TRIALS_CAP)
}

/// One pair, prepared for repeated runs.
enum Engine {
    Circuit(PreparedCircuit),
    Combined(CombinedProcedure),
    Absolute(AbsoluteProcedure),
    Bernoulli(f64),
}

impl Engine {
    fn new(kind: CircuitKind, f: &BooleanFunction, g: &BooleanFunction) -> anyhow::Result<Self> {
        Ok(match kind {
            CircuitKind::Odd => Engine::Circuit(PreparedCircuit::new(odd_circuit(f, g)?)?),
            CircuitKind::Even => Engine::Circuit(PreparedCircuit::new(even_circuit(f, g)?)?),
            CircuitKind::Combined => Engine::Combined(CombinedProcedure::new(f, g)?),
            CircuitKind::Absolute => Engine::Absolute(AbsoluteProcedure::new(f, g)?),
            CircuitKind::BqpFig1 => Engine::Bernoulli(reference_fig1(f, g)?),
            CircuitKind::BqpFig2 => Engine::Bernoulli(reference_fig2(f, g)?),
        })
    }

    fn exact(&self) -> f64 {
        match self {
            Engine::Circuit(c) => c.acceptance(),
            Engine::Combined(c) => c.exact(),
            Engine::Absolute(c) => c.exact(),
            Engine::Bernoulli(p) => *p,
        }
    }

    fn accept(&self, rng: &mut CounterRng) -> bool {
        match self {
            Engine::Circuit(c) => c.sample_accept(rng),
            Engine::Combined(c) => c.sample(rng),
            Engine::Absolute(c) => c.sample(rng),
            Engine::Bernoulli(p) => rng::unit_f64(rng) < *p,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceResult {
    pub phi: f64,
    pub exact: f64,
    pub accepted: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceSummary {
    pub source: String,
    pub instances: usize,
    pub trials_per_instance: u64,
    pub mean_acceptance: f64,
    pub bias: f64,
    pub std_error: f64,
    pub mean_exact: f64,
    pub mean_phi_sq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration_mean: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinguishReport {
    pub command: &'static str,
    pub rng: &'static str,
    pub config: ExperimentConfig,
    pub sources: Vec<SourceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

const ROUND_CALIBRATE: u64 = 1;
const ROUND_EVALUATE: u64 = 2;

fn source_id(s: SourceKind) -> u64 {
    match s {
        SourceKind::Uniform => 1,
        SourceKind::Forrelated => 2,
        SourceKind::Files => 3,
        SourceKind::Both => 4,
    }
}

fn source_name(s: SourceKind) -> &'static str {
    match s {
        SourceKind::Uniform => "uniform",
        SourceKind::Forrelated => "forrelated",
        SourceKind::Files => "files",
        SourceKind::Both => "both",
    }
}

/// Runs every repetition of one pair. Pair draws and trial streams are keyed
/// by (seed, round, source, instance) so results do not depend on scheduling.
fn run_instance(
    cfg: &ExperimentConfig,
    source: SourceKind,
    round: u64,
    instance: usize,
    files: Option<&(BooleanFunction, BooleanFunction)>,
) -> anyhow::Result<InstanceResult> {
    let stream = (round << 48) | (source_id(source) << 40) | instance as u64;
    let mut pair_rng = CounterRng::new(cfg.seed, stream);
    let (f, g) = match (source, files) {
        (SourceKind::Files, Some((f, g))) => (f.clone(), g.clone()),
        (SourceKind::Uniform, _) => {
            let p = sample_uniform_pair(cfg.n, &mut pair_rng)?;
            (p.f, p.g)
        }
        (SourceKind::Forrelated, _) => {
            let p = sample_forrelated_pair(cfg.n, &mut pair_rng)?;
            (p.f, p.g)
        }
        _ => bail!("internal: no pair for source {source:?}"),
    };
    let engine = Engine::new(cfg.circuit, &f, &g)?;
    let trial_master = pair_rng.next_u64();
    let accepted = par::map_indexed(cfg.trials as usize, |j| {
        engine.accept(&mut CounterRng::for_trial(trial_master, j as u64)) as u64
    })
    .into_iter()
    .sum::<u64>();
    Ok(InstanceResult {
        phi: phi(&f, &g)?,
        exact: engine.exact(),
        accepted,
        frequency: accepted as f64 / cfg.trials as f64,
    })
}

fn run_round(
    cfg: &ExperimentConfig,
    source: SourceKind,
    round: u64,
    count: usize,
    files: Option<&(BooleanFunction, BooleanFunction)>,
) -> anyhow::Result<Vec<InstanceResult>> {
    (0..count)
        .map(|i| run_instance(cfg, source, round, i, files))
        .collect()
}

fn summarize(
    source: SourceKind,
    cfg: &ExperimentConfig,
    results: &[InstanceResult],
    calibration: Option<f64>,
) -> SourceSummary {
    let k = results.len() as f64;
    let total = cfg.trials as f64 * k;
    let accepted: u64 = results.iter().map(|r| r.accepted).sum();
    let mean = accepted as f64 / total;
    SourceSummary {
        source: source_name(source).to_string(),
        instances: results.len(),
        trials_per_instance: cfg.trials,
        mean_acceptance: mean,
        bias: mean - 0.5,
        std_error: (mean * (1.0 - mean) / total).sqrt(),
        mean_exact: results.iter().map(|r| r.exact).sum::<f64>() / k,
        mean_phi_sq: results.iter().map(|r| r.phi * r.phi).sum::<f64>() / k,
        calibration_mean: calibration,
    }
}

fn pooled_mean(results: &[InstanceResult]) -> f64 {
    results.iter().map(|r| r.frequency).sum::<f64>() / results.len() as f64
}

pub fn experiment(
    cfg: &ExperimentConfig,
    files: Option<&(BooleanFunction, BooleanFunction)>,
) -> anyhow::Result<DistinguishReport> {
    cfg.validate()?;
    let mut report = DistinguishReport {
        command: "distinguish",
        rng: ALGORITHM_ID,
        config: cfg.clone(),
        sources: Vec::new(),
        threshold: None,
        accuracy: None,
    };
    match cfg.source {
        SourceKind::Files => {
            let r = run_round(cfg, SourceKind::Files, ROUND_EVALUATE, 1, files)?;
            report.sources.push(summarize(SourceKind::Files, cfg, &r, None));
            report.config.instances = 1;
        }
        SourceKind::Uniform | SourceKind::Forrelated => {
            let r = run_round(cfg, cfg.source, ROUND_EVALUATE, cfg.instances, None)?;
            report.sources.push(summarize(cfg.source, cfg, &r, None));
        }
        SourceKind::Both => {
            let sources = [SourceKind::Uniform, SourceKind::Forrelated];
            let cal: Vec<f64> = sources
                .iter()
                .map(|&s| run_round(cfg, s, ROUND_CALIBRATE, cfg.instances, None).map(|r| pooled_mean(&r)))
                .collect::<anyhow::Result<_>>()?;
            let threshold = 0.5 * (cal[0] + cal[1]);
            let forrelated_above = cal[1] >= cal[0];
            let mut correct = 0usize;
            let mut total = 0usize;
            for (i, &s) in sources.iter().enumerate() {
                let r = run_round(cfg, s, ROUND_EVALUATE, cfg.instances, None)?;
                for inst in &r {
                    let says_forrelated = (inst.frequency > threshold) == forrelated_above;
                    correct += (says_forrelated == (s == SourceKind::Forrelated)) as usize;
                    total += 1;
                }
                report.sources.push(summarize(s, cfg, &r, Some(cal[i])));
            }
            report.threshold = Some(threshold);
            report.accuracy = Some(correct as f64 / total as f64);
        }
    }
    Ok(report)
}

fn rounded(report: &DistinguishReport) -> DistinguishReport {
    let mut r = report.clone();
    for s in &mut r.sources {
        s.mean_acceptance = sig12(s.mean_acceptance);
        s.bias = sig12(s.bias);
        s.std_error = sig12(s.std_error);
        s.mean_exact = sig12(s.mean_exact);
        s.mean_phi_sq = sig12(s.mean_phi_sq);
        s.calibration_mean = s.calibration_mean.map(sig12);
    }
    r.threshold = r.threshold.map(sig12);
    r.accuracy = r.accuracy.map(sig12);
    r
}

pub fn run(args: &DistinguishArgs, globals: &Globals) -> anyhow::Result<Report> {
    let cfg = ExperimentConfig {
        n: args.n,
        trials: args.trials.unwrap_or_else(|| default_trials(args.n)),
        instances: args.instances,
        seed: globals.seed,
        circuit: args.circuit,
        source: args.source,
        format: globals.format(),
    };
    let needed = args.n + 2;
    if needed > globals.max_qubits {
        bail!(
            "n = {} needs up to {needed} qubits, above the limit of {}",
            args.n,
            globals.max_qubits
        );
    }
    let files = match (args.source, &args.f, &args.g) {
        (SourceKind::Files, Some(f), Some(g)) => {
            let pair = load_pair(f, g)?;
            if pair.0.n() != args.n {
                bail!("--n {} does not match the files (n = {})", args.n, pair.0.n());
            }
            Some(pair)
        }
        (SourceKind::Files, _, _) => bail!("--source files requires both --f and --g"),
        (_, None, None) => None,
        _ => bail!("--f/--g are only used with --source files"),
    };
    let report = rounded(&experiment(&cfg, files.as_ref()).context("distinguish")?);
    let body = match globals.format() {
        Format::Json => output::to_json(&report)?,
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            output::csv(
                &[
                    "source",
                    "instances",
                    "trials_per_instance",
                    "mean_acceptance",
                    "bias",
                    "std_error",
                    "mean_exact",
                    "mean_phi_sq",
                    "threshold",
                    "accuracy",
                ],
                &report
                    .sources
                    .iter()
                    .map(|s| {
                        vec![
                            s.source.clone(),
                            s.instances.to_string(),
                            s.trials_per_instance.to_string(),
                            s.mean_acceptance.to_string(),
                            s.bias.to_string(),
                            s.std_error.to_string(),
                            s.mean_exact.to_string(),
                            s.mean_phi_sq.to_string(),
                            opt(report.threshold),
                            opt(report.accuracy),
                        ]
                    })
                    .collect::<Vec<_>>(),
            )
        }
    };
    Ok(Report::ok(body))
}
