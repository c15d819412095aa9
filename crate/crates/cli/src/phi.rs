//! `phi`: forrelation of two function files or of a sampled pair.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use forriqp_core::forrelation::{
    phi_components, read_function, sample_forrelated_pair, sample_uniform_pair, BooleanFunction,
};
use forriqp_core::rng::CounterRng;
use serde::Serialize;

use crate::output::{self, sig12};
use crate::{Format, Globals, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampledSource {
    Uniform,
    Forrelated,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    /// Truth table file of f
    #[arg(requires = "g")]
    pub f: Option<PathBuf>,
    /// Truth table file of g
    #[arg(requires = "f")]
    pub g: Option<PathBuf>,
    /// Sample a pair on n variables instead of reading files
    #[arg(long, conflicts_with_all = ["f", "g"])]
    pub n: Option<usize>,
    /// Sampler used with --n
    #[arg(long, value_enum, default_value_t = SampledSource::Uniform, requires = "n")]
    pub source: SampledSource,
}

#[derive(Debug, Serialize)]
struct PhiReport {
    n: usize,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    phi: f64,
    phi_odd: f64,
    phi_even: f64,
    phi_sq: f64,
}

pub fn load_function(path: &PathBuf) -> anyhow::Result<BooleanFunction> {
    read_function(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads both files and insists on equal lengths.
pub fn load_pair(f: &PathBuf, g: &PathBuf) -> anyhow::Result<(BooleanFunction, BooleanFunction)> {
    let (f, g) = (load_function(f)?, load_function(g)?);
    if f.len() != g.len() {
        bail!(
            "length mismatch: f has {} entries but g has {}",
            f.len(),
            g.len()
        );
    }
    Ok((f, g))
}

pub fn run(args: &PhiArgs, globals: &Globals) -> anyhow::Result<Report> {
    let (f, g, source, seed) = match (&args.f, &args.g, args.n) {
        (Some(f), Some(g), None) => {
            let (f, g) = load_pair(f, g)?;
            (f, g, "files".to_string(), None)
        }
        (None, None, Some(n)) => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let mut rng = CounterRng::new(globals.seed, 0);
            let pair = match args.source {
                SampledSource::Uniform => sample_uniform_pair(n, &mut rng)?,
                SampledSource::Forrelated => sample_forrelated_pair(n, &mut rng)?,
            };
            let name = match args.source {
                SampledSource::Uniform => "uniform",
                SampledSource::Forrelated => "forrelated",
            };
            (pair.f, pair.g, name.to_string(), Some(globals.seed))
        }
        _ => bail!("give two function files or --n"),
    };
    let c = phi_components(&f, &g)?;
    let report = PhiReport {
        n: f.n(),
        source,
        seed,
        phi: sig12(c.phi),
        phi_odd: sig12(c.phi_odd),
        phi_even: sig12(c.phi_even),
        phi_sq: sig12(c.phi * c.phi),
    };
    let body = match globals.format() {
        Format::Json => output::to_json(&report)?,
        Format::Csv => output::csv(
            &["phi", "phi_odd", "phi_even", "phi_sq"],
            &[[report.phi, report.phi_odd, report.phi_even, report.phi_sq]
                .iter()
                .map(|x| x.to_string())
                .collect()],
        ),
    };
    Ok(Report::ok(body))
}
