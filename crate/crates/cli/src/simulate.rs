//! `simulate`: exact distribution or seeded samples of a circuit description.
//!
//! The description is `{"m": int, "phases": {"pm1": "<signs>"}}` or
//! `{"m": int, "phases": {"angles": [..]}}` with `2^m` entries. Schema errors
//! name the offending JSON pointer.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::Args;
use forriqp_core::circuits::{accepting_set, even_recipe, odd_recipe};
use forriqp_core::cube::BitString;
use forriqp_core::forrelation::parse_function;
use forriqp_core::iqp::{
    distribution_acceptance, output_distribution_with_guard, AcceptingSet, IqpCircuit,
    PhaseDiagonal,
};
use forriqp_core::rng::{CounterRng, ALGORITHM_ID};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::output::{self, sig12};
use crate::{Format, Globals, Report};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit description (JSON)
    pub circuit: PathBuf,
    /// Accepting set: all, none, zero, first-zero, set:<b1>,<b2>,..,
    /// forrelation-odd or forrelation-even
    #[arg(long)]
    pub accept: Option<String>,
    /// Draw this many samples instead of printing the distribution
    #[arg(long)]
    pub samples: Option<usize>,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ptr: &str) -> anyhow::Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| anyhow!("{ptr}/{key}: missing required field"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], ptr: &str) -> anyhow::Result<()> {
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        bail!("{ptr}/{k}: unknown field");
    }
    Ok(())
}

pub fn parse_json(text: &str) -> anyhow::Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        anyhow!(
            "invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        )
    })
}

pub fn parse_uint(v: &Value, ptr: &str) -> anyhow::Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| anyhow!("{ptr}: expected a non-negative integer"))
}

/// Parses a `phases` object at pointer `ptr` for a diagonal of `2^m` entries.
pub fn parse_phases(v: &Value, m: usize, ptr: &str) -> anyhow::Result<PhaseDiagonal> {
    let obj = v
        .as_object()
        .ok_or_else(|| anyhow!("{ptr}: expected an object with \"pm1\" or \"angles\""))?;
    reject_unknown(obj, &["pm1", "angles"], ptr)?;
    let want = 1usize << m;
    match (obj.get("pm1"), obj.get("angles")) {
        (Some(_), Some(_)) => bail!("{ptr}: give exactly one of \"pm1\" and \"angles\""),
        (None, None) => bail!("{ptr}: expected \"pm1\" or \"angles\""),
        (Some(s), None) => {
            let text = s
                .as_str()
                .ok_or_else(|| anyhow!("{ptr}/pm1: expected a sign string"))?;
            let f = parse_function(text).map_err(|e| anyhow!("{ptr}/pm1: {e}"))?;
            if f.len() != want {
                bail!(
                    "{ptr}/pm1: {} signs given, expected {want} for m = {m}",
                    f.len()
                );
            }
            Ok(PhaseDiagonal::from_signs(f.table())?)
        }
        (None, Some(a)) => {
            let arr = a
                .as_array()
                .ok_or_else(|| anyhow!("{ptr}/angles: expected an array of numbers"))?;
            if arr.len() != want {
                bail!(
                    "{ptr}/angles: {} angles given, expected {want} for m = {m}",
                    arr.len()
                );
            }
            let angles = arr
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_f64()
                        .filter(|t| t.is_finite())
                        .ok_or_else(|| anyhow!("{ptr}/angles/{i}: expected a finite number"))
                })
                .collect::<anyhow::Result<Vec<f64>>>()?;
            Ok(PhaseDiagonal::from_angles(&angles)?)
        }
    }
}

pub fn check_qubits(m: usize, ptr: &str, max_qubits: usize) -> anyhow::Result<()> {
    if m == 0 {
        bail!("{ptr}: at least one qubit is required");
    }
    if m > max_qubits {
        bail!(
            "{ptr}: {m} qubits exceed the simulation limit of {max_qubits} (set {} to raise it)",
            crate::MAX_QUBITS_ENV
        );
    }
    Ok(())
}

pub fn parse_circuit(text: &str, max_qubits: usize) -> anyhow::Result<IqpCircuit> {
    let root = parse_json(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| anyhow!("/: expected an object"))?;
    reject_unknown(obj, &["m", "phases"], "")?;
    let m = parse_uint(field(obj, "m", "")?, "/m")?;
    check_qubits(m, "/m", max_qubits)?;
    let diag = parse_phases(field(obj, "phases", "")?, m, "/phases")?;
    Ok(IqpCircuit::new(diag))
}

/// Accepting-set predicates over `m`-bit outcomes.
pub fn parse_predicate(spec: &str, m: usize) -> anyhow::Result<AcceptingSet> {
    let recipe_n = || -> anyhow::Result<usize> {
        if m < 2 {
            bail!("{spec} needs at least 2 qubits");
        }
        Ok(m - 1)
    };
    Ok(match spec {
        "all" => AcceptingSet::full(m),
        "none" => AcceptingSet::empty(m),
        "zero" => AcceptingSet::from_indices(m, [0])?,
        "first-zero" => AcceptingSet::from_predicate(m, move |y| y >> (m - 1) == 0)?,
        "forrelation-odd" => accepting_set(&odd_recipe(recipe_n()?)?),
        "forrelation-even" => accepting_set(&even_recipe(recipe_n()?)?),
        other => {
            let Some(list) = other.strip_prefix("set:") else {
                bail!("unknown accepting set {other:?}");
            };
            let mut idx = Vec::new();
            for item in list.split(',').filter(|s| !s.is_empty()) {
                let b: BitString = item
                    .parse()
                    .with_context(|| format!("accepting set entry {item:?}"))?;
                if b.n() != m {
                    bail!("accepting set entry {item:?} has {} bits, expected {m}", b.n());
                }
                idx.push(b.index());
            }
            AcceptingSet::from_indices(m, idx)?
        }
    })
}

#[derive(Debug, Serialize)]
struct DistributionReport {
    m: usize,
    distribution: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    acceptance: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SampleReport {
    m: usize,
    seed: u64,
    rng: &'static str,
    samples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    acceptance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    accepted: Option<usize>,
}

pub fn run(args: &SimulateArgs, globals: &Globals) -> anyhow::Result<Report> {
    let text = std::fs::read_to_string(&args.circuit)
        .with_context(|| format!("reading {}", args.circuit.display()))?;
    let circuit = parse_circuit(&text, globals.max_qubits)
        .with_context(|| format!("in {}", args.circuit.display()))?;
    let m = circuit.m();
    let dist = output_distribution_with_guard(&circuit, globals.max_qubits)?;
    let accept = args
        .accept
        .as_deref()
        .map(|s| parse_predicate(s, m))
        .transpose()?;
    let acceptance = accept
        .as_ref()
        .map(|a| distribution_acceptance(&dist, a))
        .transpose()?;

    let body = match args.samples {
        None => {
            let report = DistributionReport {
                m,
                distribution: dist.probs().iter().map(|&p| sig12(p)).collect(),
                acceptance: acceptance.map(sig12),
            };
            match globals.format() {
                Format::Json => output::to_json(&report)?,
                Format::Csv => output::csv(
                    &["outcome", "probability"],
                    &report
                        .distribution
                        .iter()
                        .enumerate()
                        .map(|(y, p)| {
                            vec![BitString::new(m, y as u64).unwrap().to_string(), p.to_string()]
                        })
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Some(k) => {
            let sampler = dist.sampler();
            let mut rng = CounterRng::new(globals.seed, 0);
            let draws: Vec<u64> = (0..k).map(|_| sampler.sample(&mut rng)).collect();
            let report = SampleReport {
                m,
                seed: globals.seed,
                rng: ALGORITHM_ID,
                samples: draws
                    .iter()
                    .map(|&y| BitString::new(m, y).unwrap().to_string())
                    .collect(),
                acceptance: acceptance.map(sig12),
                accepted: accept
                    .as_ref()
                    .map(|a| draws.iter().filter(|&&y| a.contains(y)).count()),
            };
            match globals.format() {
                Format::Json => output::to_json(&report)?,
                Format::Csv => output::csv(
                    &["index", "outcome"],
                    &report
                        .samples
                        .iter()
                        .enumerate()
                        .map(|(i, s)| vec![i.to_string(), s.clone()])
                        .collect::<Vec<_>>(),
                ),
            }
        }
    };
    Ok(Report::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_paths() {
        let err = |t: &str| parse_circuit(t, 24).unwrap_err().to_string();
        assert_eq!(err(r#"{"phases":{"pm1":"++"}}"#), "/m: missing required field");
        assert!(err(r#"{"m":2,"phases":{"pm1":"++"}}"#).starts_with("/phases/pm1: 2 signs"));
        assert!(err(r#"{"m":1,"phases":{"angles":[0,"x"]}}"#).starts_with("/phases/angles/1:"));
        assert!(err(r#"{"m":1,"phases":{}}"#).starts_with("/phases:"));
        assert!(err(r#"{"m":1,"phases":{"pm1":"++"},"x":1}"#).starts_with("/x:"));
        assert!(err(r#"{"m":30,"phases":{"pm1":"++"}}"#).contains("limit of 24"));
        assert!(err("[1").starts_with("invalid JSON"));
    }

    #[test]
    fn predicates() {
        assert_eq!(parse_predicate("first-zero", 3).unwrap().cardinality(), 4);
        assert_eq!(parse_predicate("set:01,10", 2).unwrap().members().unwrap(), vec![1, 2]);
        assert!(parse_predicate("set:011", 2).is_err());
        assert_eq!(parse_predicate("forrelation-odd", 4).unwrap().cardinality(), 8);
        assert!(parse_predicate("forrelation-odd", 3).is_err());
        assert!(parse_predicate("bogus", 3).is_err());
    }
}
