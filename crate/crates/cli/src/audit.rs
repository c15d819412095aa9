//! `growth-audit`: degree profile and `‖p̂‖₁` against `√min{|F|, 2^{n_orc}}`.
//!
//! The single-query circuit comes from a recipe (`--recipe odd --n 3`), a seeded
//! random draw (`--random --n-orc 2 --w 1`) or a JSON file
//! `{"n_orc": int, "w": int, "phases": {...}, "accept": "<predicate>"}` where
//! `phases` and `accept` follow `simulate`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, ValueEnum};
use forriqp_core::circuits::{even_recipe, odd_recipe};
use forriqp_core::growth::{audit_bound, AuditReport, SingleQuerySpec};
use forriqp_core::rng::CounterRng;

use crate::output::{self, sig12};
use crate::simulate::{check_qubits, parse_json, parse_phases, parse_predicate, parse_uint};
use crate::{Format, Globals, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecipeKind {
    Odd,
    Even,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Circuit description file
    #[arg(conflicts_with_all = ["recipe", "random"])]
    pub spec: Option<PathBuf>,
    /// Audit a forrelation recipe circuit
    #[arg(long, value_enum, requires = "n", conflicts_with = "random")]
    pub recipe: Option<RecipeKind>,
    /// Recipe dimension
    #[arg(long)]
    pub n: Option<usize>,
    /// Audit a seeded random circuit
    #[arg(long, requires = "n_orc")]
    pub random: bool,
    /// Oracle qubits for --random
    #[arg(long)]
    pub n_orc: Option<usize>,
    /// Ancilla qubits for --random
    #[arg(long, default_value_t = 0)]
    pub w: usize,
}

pub fn parse_spec(text: &str, max_qubits: usize) -> anyhow::Result<SingleQuerySpec> {
    let root = parse_json(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| anyhow!("/: expected an object"))?;
    if let Some(k) = obj
        .keys()
        .find(|k| !["n_orc", "w", "phases", "accept"].contains(&k.as_str()))
    {
        bail!("/{k}: unknown field");
    }
    let get = |k: &str| obj.get(k).ok_or_else(|| anyhow!("/{k}: missing required field"));
    let n_orc = parse_uint(get("n_orc")?, "/n_orc")?;
    let w = match obj.get("w") {
        Some(v) => parse_uint(v, "/w")?,
        None => 0,
    };
    if n_orc == 0 {
        bail!("/n_orc: at least one oracle qubit is required");
    }
    check_qubits(n_orc + w, "/n_orc", max_qubits)?;
    let phases = parse_phases(get("phases")?, n_orc + w, "/phases")?;
    let accept = get("accept")?
        .as_str()
        .ok_or_else(|| anyhow!("/accept: expected a predicate string"))?;
    let accepting = parse_predicate(accept, n_orc + w).map_err(|e| anyhow!("/accept: {e}"))?;
    Ok(SingleQuerySpec::new(n_orc, w, phases, accepting)?)
}

fn rounded(r: &AuditReport) -> AuditReport {
    AuditReport {
        l1: sig12(r.l1),
        levels: r.levels.iter().map(|&v| sig12(v)).collect(),
        bound: sig12(r.bound),
        slack: sig12(r.slack),
        ..r.clone()
    }
}

pub fn run(args: &AuditArgs, globals: &Globals) -> anyhow::Result<Report> {
    let spec = match (&args.spec, args.recipe, args.random) {
        (Some(path), None, false) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_spec(&text, globals.max_qubits).with_context(|| format!("in {}", path.display()))?
        }
        (None, Some(kind), false) => {
            let n = args.n.ok_or_else(|| anyhow!("--recipe needs --n"))?;
            let recipe = match kind {
                RecipeKind::Odd => odd_recipe(n)?,
                RecipeKind::Even => even_recipe(n)?,
            };
            SingleQuerySpec::from_recipe(&recipe)?
        }
        (None, None, true) => {
            let n_orc = args.n_orc.ok_or_else(|| anyhow!("--random needs --n-orc"))?;
            if n_orc == 0 {
                bail!("--n-orc must be at least 1");
            }
            check_qubits(n_orc + args.w, "--n-orc + --w", globals.max_qubits)?;
            SingleQuerySpec::random(n_orc, args.w, &mut CounterRng::new(globals.seed, 0))?
        }
        _ => bail!("give a spec file, --recipe or --random"),
    };
    let report = audit_bound(&spec)?;
    let shown = rounded(&report);
    let body = match globals.format() {
        Format::Json => output::to_json(&shown)?,
        Format::Csv => {
            let join = |v: Vec<String>| v.join(";");
            output::csv(
                &["l1", "F_size", "bound", "pass", "slack", "levels", "degree_profile"],
                &[vec![
                    shown.l1.to_string(),
                    shown.f_size.to_string(),
                    shown.bound.to_string(),
                    shown.pass.to_string(),
                    shown.slack.to_string(),
                    join(shown.levels.iter().map(|v| v.to_string()).collect()),
                    join(shown.degree_profile.iter().map(|v| v.to_string()).collect()),
                ]],
            )
        }
    };
    Ok(Report {
        body,
        ok: report.pass,
    })
}
