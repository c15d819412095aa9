//! Single-query IQP constructions for Φ_odd, Φ_even and Φ.
//!
//! A [`Recipe`] fixes `ρ₀, ρ₁ : {0,1}ⁿ → ±1` and a real `σ` whose transform is
//! ±1 everywhere. On `n + 1` qubits the diagonal is `ρ₀(x)f(x)` at `(0, x)` and
//! `ρ₁(x)g(x)` at `(1, x)`; the circuit accepts on
//! `F = {0}×T ∪ {1}×T̄` with `T = {x : σ̂(x) = 1}`. Its acceptance probability is
//!
//! `½ + 2^{-(3n+2)/2} Σ_{x,y} f(x) g(y) ρ₀(x) ρ₁(y) σ(x + y)`.
//!
//! With `ρ₀ = ρ₁ = (-1)^Q` and `σ = √2(-1)^Q` on odd weights this is
//! `½ + Φ_odd/√2`; with `ρ₁ = (-1)^{Q+|x|}` and `σ` on even weights it is
//! `½ + Φ_even/√2`. Both need `n` odd. Even `n` goes through [`pad`].

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::cube::{self, WeightParity};
use crate::forrelation::{pad, BooleanFunction};
use crate::iqp::{
    self, AcceptingSet, IqpCircuit, OutputDistribution, PhaseDiagonal, Sampler,
};
use crate::par;
use crate::rng;
use crate::{Error, Result};

/// Largest `n` for the literal triple-product sum.
pub const PREDICTED_MAX_N: usize = 12;
/// Largest `n` for the exhaustive impossibility search.
pub const SEARCH_MAX_N: usize = 3;

const BENT_TOL: f64 = 1e-9;
const TRANSFORM_TOL: f64 = 1e-10;

/// Raw recipe tables. Nothing is validated; see [`Recipe`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecipeTables {
    pub rho0: Vec<i8>,
    pub rho1: Vec<i8>,
    pub sigma: Vec<f64>,
}

impl RecipeTables {
    pub fn n(&self) -> Result<usize> {
        let n = cube::log2_len(self.sigma.len())?;
        for len in [self.rho0.len(), self.rho1.len()] {
            if len != self.sigma.len() {
                return Err(Error::DimensionMismatch {
                    left: len,
                    right: self.sigma.len(),
                });
            }
        }
        Ok(n)
    }
}

/// Which Φ component the built circuit is biased by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiasForm {
    Odd,
    Even,
    Generic,
}

/// Validated recipe: `σ̂` is ±1 everywhere and matches the transform of `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    n: usize,
    tables: RecipeTables,
    sigma_hat: Vec<i8>,
    form: BiasForm,
}

impl Recipe {
    /// Validates a closed-form `σ̂` against bentness and against `fwht(σ)`.
    pub fn new(tables: RecipeTables, sigma_hat: &[f64], form: BiasForm) -> Result<Self> {
        let n = tables.n()?;
        if sigma_hat.len() != tables.sigma.len() {
            return Err(Error::DimensionMismatch {
                left: sigma_hat.len(),
                right: tables.sigma.len(),
            });
        }
        check_signs(&tables.rho0)?;
        check_signs(&tables.rho1)?;
        let signs = bent_signs(sigma_hat)?;
        let transform = cube::fwht_copy(&tables.sigma)?;
        if let Some((x, (a, b))) = transform
            .iter()
            .zip(sigma_hat)
            .enumerate()
            .find(|(_, (a, b))| (*a - *b).abs() > TRANSFORM_TOL)
        {
            return Err(Error::InvalidArgument(format!(
                "closed-form sigma_hat({x}) = {b} but the transform gives {a}"
            )));
        }
        Ok(Self {
            n,
            tables,
            sigma_hat: signs,
            form,
        })
    }

    /// Takes `σ̂ = fwht(σ)` and checks bentness.
    pub fn from_sigma(tables: RecipeTables) -> Result<Self> {
        let sigma_hat = cube::fwht_copy(&tables.sigma)?;
        Self::new(tables, &sigma_hat, BiasForm::Generic)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tables(&self) -> &RecipeTables {
        &self.tables
    }

    pub fn sigma_hat(&self) -> &[i8] {
        &self.sigma_hat
    }

    pub fn form(&self) -> BiasForm {
        self.form
    }

    /// `T = {x : σ̂(x) = 1}` in increasing order.
    pub fn t_set(&self) -> Vec<u64> {
        (0..self.sigma_hat.len() as u64)
            .filter(|&x| self.sigma_hat[x as usize] == 1)
            .collect()
    }
}

fn check_signs(t: &[i8]) -> Result<()> {
    match t.iter().position(|&v| v != 1 && v != -1) {
        Some(pos) => Err(Error::InvalidArgument(format!(
            "rho entry {pos} is {}, expected ±1",
            t[pos]
        ))),
        None => Ok(()),
    }
}

fn bent_signs(sigma_hat: &[f64]) -> Result<Vec<i8>> {
    sigma_hat
        .iter()
        .enumerate()
        .map(|(x, &v)| {
            if (v - 1.0).abs() <= BENT_TOL {
                Ok(1)
            } else if (v + 1.0).abs() <= BENT_TOL {
                Ok(-1)
            } else {
                Err(Error::BentnessViolation { x, value: v })
            }
        })
        .collect()
}

/// `ρ₀ = ρ₁ = (-1)^Q`, `σ = σ_odd`; `n` must be odd.
pub fn odd_recipe(n: usize) -> Result<Recipe> {
    require_odd(n)?;
    let q = cube::q_sign_table(n);
    Recipe::new(
        RecipeTables {
            rho0: q.clone(),
            rho1: q,
            sigma: cube::sigma_odd_table(n),
        },
        &cube::sigma_hat_odd_table(n),
        BiasForm::Odd,
    )
}

/// `ρ₀ = (-1)^Q`, `ρ₁ = (-1)^{Q+|x|}`, `σ = σ_even`; `n` must be odd.
pub fn even_recipe(n: usize) -> Result<Recipe> {
    require_odd(n)?;
    let q = cube::q_sign_table(n);
    let rho1 = q
        .iter()
        .enumerate()
        .map(|(x, &v)| if x.count_ones() % 2 == 0 { v } else { -v })
        .collect();
    Recipe::new(
        RecipeTables {
            rho0: q,
            rho1,
            sigma: cube::sigma_even_table(n),
        },
        &cube::sigma_hat_even_table(n),
        BiasForm::Even,
    )
}

fn require_odd(n: usize) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::EvenDimension { n });
    }
    Ok(())
}

/// An `(n + 1)`-qubit IQP circuit with its accepting set.
#[derive(Debug, Clone)]
pub struct ForrelationCircuit {
    n: usize,
    circuit: IqpCircuit,
    accepting: AcceptingSet,
    form: BiasForm,
}

impl ForrelationCircuit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn circuit(&self) -> &IqpCircuit {
        &self.circuit
    }

    pub fn accepting(&self) -> &AcceptingSet {
        &self.accepting
    }

    pub fn form(&self) -> BiasForm {
        self.form
    }

    pub fn acceptance(&self) -> Result<f64> {
        iqp::acceptance_probability(&self.circuit, &self.accepting)
    }
}

/// `F = {0}×T ∪ {1}×T̄` on `n + 1` qubits, with `|F| = 2ⁿ`.
pub fn accepting_set(recipe: &Recipe) -> AcceptingSet {
    let n = recipe.n;
    let signs = Arc::new(recipe.sigma_hat.clone());
    let mask = (1u64 << n) - 1;
    AcceptingSet::with_cardinality(
        n + 1,
        move |y| {
            let in_t = signs[(y & mask) as usize] == 1;
            if y >> n == 0 {
                in_t
            } else {
                !in_t
            }
        },
        1u64 << n,
    )
}

/// Absorbs the joint oracle into the recipe's diagonal.
pub fn build_from_recipe(
    recipe: &Recipe,
    f: &BooleanFunction,
    g: &BooleanFunction,
) -> Result<ForrelationCircuit> {
    for h in [f, g] {
        if h.n() != recipe.n {
            return Err(Error::DimensionMismatch {
                left: h.len(),
                right: recipe.sigma_hat.len(),
            });
        }
    }
    let t = &recipe.tables;
    let diag: Vec<i8> = t
        .rho0
        .iter()
        .zip(f.table())
        .map(|(r, v)| r * v)
        .chain(t.rho1.iter().zip(g.table()).map(|(r, v)| r * v))
        .collect();
    Ok(ForrelationCircuit {
        n: recipe.n,
        circuit: IqpCircuit::new(PhaseDiagonal::from_signs(&diag)?),
        accepting: accepting_set(recipe),
        form: recipe.form,
    })
}

/// The literal `O(4ⁿ)` formula; `n ≤ 12`. Accepts any σ, bent or not.
pub fn predicted_acceptance(
    tables: &RecipeTables,
    f: &BooleanFunction,
    g: &BooleanFunction,
) -> Result<f64> {
    let n = tables.n()?;
    if n > PREDICTED_MAX_N {
        return Err(Error::GuardExceeded {
            what: "n for the triple-product formula",
            value: n,
            limit: PREDICTED_MAX_N,
        });
    }
    if f.n() != n || g.n() != n {
        return Err(Error::DimensionMismatch {
            left: f.len().max(g.len()),
            right: tables.sigma.len(),
        });
    }
    let size = 1usize << n;
    let mut total = 0.0;
    for x in 0..size {
        let a = (f.value(x as u64) * tables.rho0[x]) as f64;
        let mut row = 0.0;
        for y in 0..size {
            row += (g.value(y as u64) * tables.rho1[y]) as f64 * tables.sigma[x ^ y];
        }
        total += a * row;
    }
    Ok(0.5 + total * (2f64).powf(-(3.0 * n as f64 + 2.0) / 2.0))
}

pub fn odd_circuit(f: &BooleanFunction, g: &BooleanFunction) -> Result<ForrelationCircuit> {
    build_from_recipe(&odd_recipe(f.n())?, f, g)
}

pub fn even_circuit(f: &BooleanFunction, g: &BooleanFunction) -> Result<ForrelationCircuit> {
    build_from_recipe(&even_recipe(f.n())?, f, g)
}

/// A built circuit with its distribution cached for repeated sampling.
#[derive(Debug, Clone)]
pub struct PreparedCircuit {
    circuit: ForrelationCircuit,
    distribution: OutputDistribution,
    sampler: Sampler,
    acceptance: f64,
}

impl PreparedCircuit {
    pub fn new(circuit: ForrelationCircuit) -> Result<Self> {
        let distribution = iqp::output_distribution(&circuit.circuit)?;
        let acceptance = iqp::distribution_acceptance(&distribution, &circuit.accepting)?;
        let sampler = distribution.sampler();
        Ok(Self {
            circuit,
            distribution,
            sampler,
            acceptance,
        })
    }

    pub fn circuit(&self) -> &ForrelationCircuit {
        &self.circuit
    }

    pub fn distribution(&self) -> &OutputDistribution {
        &self.distribution
    }

    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    /// Samples one outcome and applies the accepting-set test.
    pub fn sample_accept<R: RngCore + ?Sized>(&self, rng: &mut R) -> bool {
        let y = self.sampler.sample(rng);
        self.circuit.accepting.contains(y)
    }
}

/// The coin-flip mixture of the Φ_odd and Φ_even circuits. For even `n` both
/// functions are padded first.
#[derive(Debug, Clone)]
pub struct CombinedProcedure {
    n: usize,
    odd: PreparedCircuit,
    even: PreparedCircuit,
}

impl CombinedProcedure {
    pub fn new(f: &BooleanFunction, g: &BooleanFunction) -> Result<Self> {
        if f.n() != g.n() {
            return Err(Error::DimensionMismatch {
                left: f.len(),
                right: g.len(),
            });
        }
        let n = f.n();
        let (f, g) = if n % 2 == 0 {
            (pad(f), pad(g))
        } else {
            (f.clone(), g.clone())
        };
        Ok(Self {
            n,
            odd: PreparedCircuit::new(odd_circuit(&f, &g)?)?,
            even: PreparedCircuit::new(even_circuit(&f, &g)?)?,
        })
    }

    /// Dimension of the original functions.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_padded(&self) -> bool {
        self.n % 2 == 0
    }

    pub fn odd_part(&self) -> &PreparedCircuit {
        &self.odd
    }

    pub fn even_part(&self) -> &PreparedCircuit {
        &self.even
    }

    pub fn exact(&self) -> f64 {
        0.5 * (self.odd.acceptance + self.even.acceptance)
    }

    /// Coin first (`false` → Φ_odd circuit), then one circuit run.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> bool {
        if rng::coin(rng) {
            self.even.sample_accept(rng)
        } else {
            self.odd.sample_accept(rng)
        }
    }

    /// `½ + Φ/(2√2)` for odd `n`, `½ + Φ/4` for even `n`.
    pub fn predicted(n: usize, phi: f64) -> f64 {
        if n % 2 == 1 {
            0.5 + phi / (2.0 * SQRT_2)
        } else {
            0.5 + phi / 4.0
        }
    }
}

/// Two independent runs of [`CombinedProcedure`], accepting iff they agree.
#[derive(Debug, Clone)]
pub struct AbsoluteProcedure {
    combined: CombinedProcedure,
}

impl AbsoluteProcedure {
    pub fn new(f: &BooleanFunction, g: &BooleanFunction) -> Result<Self> {
        Ok(Self {
            combined: CombinedProcedure::new(f, g)?,
        })
    }

    pub fn combined(&self) -> &CombinedProcedure {
        &self.combined
    }

    pub fn exact(&self) -> f64 {
        let p = self.combined.exact();
        p * p + (1.0 - p) * (1.0 - p)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> bool {
        let first = self.combined.sample(rng);
        let second = self.combined.sample(rng);
        first == second
    }

    /// `½ + Φ²/4` for odd `n`, `½ + Φ²/8` for even `n`.
    pub fn predicted(n: usize, phi: f64) -> f64 {
        if n % 2 == 1 {
            0.5 + phi * phi / 4.0
        } else {
            0.5 + phi * phi / 8.0
        }
    }
}

pub enum Mode<'a> {
    Exact,
    Sampled(&'a mut dyn RngCore),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Probability(f64),
    Accept(bool),
}

pub fn run_combined(f: &BooleanFunction, g: &BooleanFunction, mode: Mode<'_>) -> Result<Outcome> {
    let proc = CombinedProcedure::new(f, g)?;
    Ok(match mode {
        Mode::Exact => Outcome::Probability(proc.exact()),
        Mode::Sampled(rng) => Outcome::Accept(proc.sample(rng)),
    })
}

pub fn run_absolute(f: &BooleanFunction, g: &BooleanFunction, mode: Mode<'_>) -> Result<Outcome> {
    let proc = AbsoluteProcedure::new(f, g)?;
    Ok(match mode {
        Mode::Exact => Outcome::Probability(proc.exact()),
        Mode::Sampled(rng) => Outcome::Accept(proc.sample(rng)),
    })
}

/// A triple `(ρ₀, ρ₁, σ)` of ±1 tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTriple {
    pub rho0: Vec<i8>,
    pub rho1: Vec<i8>,
    pub sigma: Vec<i8>,
}

/// Exhaustively looks for ±1 tables with `ρ₀(x)ρ₁(y)σ(x+y) = (-1)^{x·y}` for all
/// `x, y`; `n ≤ 3`. `ρ₀(0ⁿ) = +1` is fixed using the gauge
/// `(ρ₀, ρ₁, σ) ↦ (−ρ₀, ρ₁, −σ)`.
pub fn impossibility_search(n: usize) -> Result<Option<SignTriple>> {
    if n == 0 || n > SEARCH_MAX_N {
        return Err(Error::GuardExceeded {
            what: "n for the exhaustive search",
            value: n,
            limit: SEARCH_MAX_N,
        });
    }
    let size = 1usize << n;
    let tables = 1u32 << size;
    // Tables as bit masks: bit x set means the value at x is -1.
    let found = par::map_indexed((tables / 2) as usize, |half| {
        let alpha0 = (half as u32) << 1;
        for alpha1 in 0..tables {
            for gamma in 0..tables {
                if relation_masks_hold(size, alpha0, alpha1, gamma) {
                    return Some((alpha0, alpha1, gamma));
                }
            }
        }
        None
    });
    Ok(found.into_iter().flatten().next().map(|(a0, a1, g)| SignTriple {
        rho0: mask_to_signs(a0, size),
        rho1: mask_to_signs(a1, size),
        sigma: mask_to_signs(g, size),
    }))
}

fn relation_masks_hold(size: usize, alpha0: u32, alpha1: u32, gamma: u32) -> bool {
    for x in 0..size {
        let a = (alpha0 >> x) & 1;
        for y in 0..size {
            let lhs = a ^ ((alpha1 >> y) & 1) ^ ((gamma >> (x ^ y)) & 1);
            if lhs != cube::parity((x & y) as u64) as u32 {
                return false;
            }
        }
    }
    true
}

fn mask_to_signs(mask: u32, size: usize) -> Vec<i8> {
    (0..size)
        .map(|x| if (mask >> x) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// First pair `(x, y)` with `|x + y|` in `range` where the sign of
/// `ρ₀(x)ρ₁(y)σ(x+y)` differs from `(-1)^{x·y}` (a zero σ counts as a
/// violation). `None` means the relation holds up to a positive factor.
pub fn relation_violation(
    rho0: &[i8],
    rho1: &[i8],
    sigma: &[f64],
    range: WeightParity,
) -> Option<(u64, u64)> {
    let size = sigma.len() as u64;
    for x in 0..size {
        for y in 0..size {
            let z = x ^ y;
            if !range.admits(z.count_ones() as usize) {
                continue;
            }
            let v = (rho0[x as usize] * rho1[y as usize]) as f64 * sigma[z as usize];
            if v == 0.0 || v.signum() as i64 != cube::character(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}
