//! Exact simulation of IQP circuits `H^⊗m · D · H^⊗m` on `|0^m⟩`.
//!
//! The amplitude of outcome `y` is `2^{-m} Σ_x (-1)^{x·y} e^{iφ_x}`; one complex
//! transform of the diagonal gives all of them in `O(m·2^m)`.

pub mod reference;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::cube::{self, BitString};
use crate::rng;
use crate::{Error, Result};

/// Default cap on the number of simulated qubits (`2^24` complex doubles).
pub const DEFAULT_MAX_QUBITS: usize = 24;

const UNIT_TOL: f64 = 1e-12;
const CLAMP_TOL: f64 = 1e-14;

/// The diagonal of `D`, stored as unit complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagonal {
    m: usize,
    entries: Vec<Complex64>,
}

impl PhaseDiagonal {
    pub fn from_unit(entries: Vec<Complex64>) -> Result<Self> {
        let m = cube::log2_len(entries.len())?;
        if let Some(pos) = entries.iter().position(|z| (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::InvalidArgument(format!(
                "diagonal entry {pos} has modulus {}, expected 1",
                entries[pos].norm()
            )));
        }
        Ok(Self { m, entries })
    }

    /// Angles `φ_x`; any real is accepted and reduced implicitly.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Self::from_unit(angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect())
    }

    /// ±1 entries, stored exactly.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "sign entry {pos} is {}, expected ±1",
                signs[pos]
            )));
        }
        Self::from_unit(signs.iter().map(|&s| Complex64::new(s as f64, 0.0)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Multiplies every entry by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, theta);
        Self {
            m: self.m,
            entries: self.entries.iter().map(|z| z * w).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqpCircuit {
    diagonal: PhaseDiagonal,
}

impl IqpCircuit {
    pub fn new(diagonal: PhaseDiagonal) -> Self {
        Self { diagonal }
    }

    pub fn m(&self) -> usize {
        self.diagonal.m
    }

    pub fn diagonal(&self) -> &PhaseDiagonal {
        &self.diagonal
    }

    /// Output amplitudes `⟨y| H^⊗m D H^⊗m |0^m⟩`.
    pub fn amplitudes(&self, max_qubits: usize) -> Result<Vec<Complex64>> {
        check_guard(self.m(), max_qubits)?;
        let mut amp = self.diagonal.entries.clone();
        cube::fwht(&mut amp)?;
        let scale = (2f64).powf(-0.5 * self.m() as f64);
        for a in &mut amp {
            *a *= scale;
        }
        Ok(amp)
    }
}

fn check_guard(m: usize, max_qubits: usize) -> Result<()> {
    if m > max_qubits {
        return Err(Error::GuardExceeded {
            what: "qubit count",
            value: m,
            limit: max_qubits,
        });
    }
    Ok(())
}

type Membership = Arc<dyn Fn(u64) -> bool + Send + Sync>;

/// A set `F ⊆ {0,1}^m` of accepting outcomes with its exact size.
#[derive(Clone)]
pub struct AcceptingSet {
    m: usize,
    contains: Membership,
    cardinality: u64,
}

impl fmt::Debug for AcceptingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AcceptingSet")
            .field("m", &self.m)
            .field("cardinality", &self.cardinality)
            .finish_non_exhaustive()
    }
}

impl AcceptingSet {
    pub fn full(m: usize) -> Self {
        Self {
            m,
            contains: Arc::new(|_| true),
            cardinality: 1u64 << m,
        }
    }

    pub fn empty(m: usize) -> Self {
        Self {
            m,
            contains: Arc::new(|_| false),
            cardinality: 0,
        }
    }

    pub fn from_indices(m: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: std::collections::BTreeSet<u64> = indices.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&y| y >> m != 0) {
            return Err(Error::InvalidArgument(format!(
                "outcome {bad} is outside {{0,1}}^{m}"
            )));
        }
        let cardinality = set.len() as u64;
        Ok(Self {
            m,
            contains: Arc::new(move |y| set.contains(&y)),
            cardinality,
        })
    }

    /// Cardinality by enumeration; `m ≤ 24`.
    pub fn from_predicate(
        m: usize,
        pred: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        check_guard(m, DEFAULT_MAX_QUBITS)?;
        let cardinality = (0..1u64 << m).filter(|&y| pred(y)).count() as u64;
        Ok(Self {
            m,
            contains: Arc::new(pred),
            cardinality,
        })
    }

    /// Cardinality supplied analytically by the caller.
    pub fn with_cardinality(
        m: usize,
        pred: impl Fn(u64) -> bool + Send + Sync + 'static,
        cardinality: u64,
    ) -> Self {
        Self {
            m,
            contains: Arc::new(pred),
            cardinality,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, y: u64) -> bool {
        (self.contains)(y)
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    /// Counts members one by one.
    pub fn enumerate_cardinality(&self) -> Result<u64> {
        check_guard(self.m, DEFAULT_MAX_QUBITS)?;
        Ok((0..1u64 << self.m).filter(|&y| self.contains(y)).count() as u64)
    }

    pub fn members(&self) -> Result<Vec<u64>> {
        check_guard(self.m, DEFAULT_MAX_QUBITS)?;
        Ok((0..1u64 << self.m).filter(|&y| self.contains(y)).collect())
    }
}

/// Exact probabilities over `{0,1}^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDistribution {
    m: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    /// Takes raw probabilities, clamping rounding dust in `[-1e-14, 0)` to zero.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let m = cube::log2_len(probs.len())?;
        let mut probs = probs;
        for (y, p) in probs.iter_mut().enumerate() {
            if *p < 0.0 {
                if *p < -CLAMP_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "probability of outcome {y} is {p}"
                    )));
                }
                *p = 0.0;
            }
        }
        Ok(Self { m, probs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn probability(&self, y: u64) -> f64 {
        self.probs[y as usize]
    }

    pub fn sampler(&self) -> Sampler {
        let mut acc = 0.0;
        let cumulative = self
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Sampler { cumulative }
    }
}

/// Inverse-CDF sampler over a fixed distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cumulative.last().expect("non-empty distribution");
        let u = rng::unit_f64(rng) * total;
        // first index with cumulative > u
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.cumulative.len() - 1) as u64
    }
}

pub fn output_distribution(c: &IqpCircuit) -> Result<OutputDistribution> {
    output_distribution_with_guard(c, DEFAULT_MAX_QUBITS)
}

pub fn output_distribution_with_guard(
    c: &IqpCircuit,
    max_qubits: usize,
) -> Result<OutputDistribution> {
    let amp = c.amplitudes(max_qubits)?;
    OutputDistribution::from_probs(amp.iter().map(|a| a.norm_sqr()).collect())
}

/// `Σ_{y∈F} Pr[y]`.
pub fn acceptance_probability(c: &IqpCircuit, accept: &AcceptingSet) -> Result<f64> {
    let dist = output_distribution(c)?;
    distribution_acceptance(&dist, accept)
}

pub fn distribution_acceptance(dist: &OutputDistribution, accept: &AcceptingSet) -> Result<f64> {
    if dist.m != accept.m {
        return Err(Error::DimensionMismatch {
            left: dist.m,
            right: accept.m,
        });
    }
    let p: f64 = dist
        .probs
        .iter()
        .enumerate()
        .filter(|(y, _)| accept.contains(*y as u64))
        .map(|(_, p)| p)
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// One measurement outcome of `c`.
pub fn sample_output<R: RngCore + ?Sized>(c: &IqpCircuit, rng: &mut R) -> Result<BitString> {
    let dist = output_distribution(c)?;
    BitString::new(c.m(), dist.sampler().sample(rng))
}

/// `O(4^m)` amplitude sum, used to check the transform path; `m ≤ 12`.
pub fn naive_amplitudes(c: &IqpCircuit) -> Result<Vec<Complex64>> {
    check_guard(c.m(), 12)?;
    let size = 1u64 << c.m();
    let scale = 1.0 / size as f64;
    let d = c.diagonal.entries();
    Ok((0..size)
        .map(|y| {
            (0..size)
                .map(|x| d[x as usize] * cube::character(x, y) as f64)
                .sum::<Complex64>()
                * scale
        })
        .collect())
}
