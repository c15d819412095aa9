//! Acceptance probabilities of single-query IQP circuits as multilinear
//! polynomials in the oracle bits.
//!
//! A single-query circuit has `n` oracle qubits and `w` ancillas; the oracle is a
//! string `z ∈ {±1}^{2ⁿ}` applied as the phase `z_a` on `|a, b⟩`. With
//! `|v_a⟩ = 2^{-w/2} Σ_b e^{iφ_{a,b}} |a, b⟩` and `M = H^⊗m Π_F H^⊗m`,
//!
//! `p(z) = 2^{-n} Σ_{i,j} ⟨v_i|M|v_j⟩ z_i z_j`,
//!
//! so `p` has degree at most 2 and `‖p̂‖₁ ≤ √min{|F|, 2ⁿ}`.
//!
//! Variables are indexed by the integer encoding of `a ∈ {0,1}ⁿ`; subsets are
//! sorted index lists.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::circuits::{accepting_set, Recipe};
use crate::cube;
use crate::iqp::{self, AcceptingSet, IqpCircuit, PhaseDiagonal};
use crate::par;
use crate::rng;
use crate::{Error, Result};

/// Coefficients at or below this magnitude are dropped.
pub const SPARSITY: f64 = 1e-13;
/// Qubit limit for the v-matrix extraction.
pub const VMATRIX_MAX_QUBITS: usize = 12;
/// Oracle-bit limit for the brute-force expansion.
pub const BRUTE_MAX_VARS: usize = 16;

const BOUND_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SingleQuerySpec {
    n_orc: usize,
    w: usize,
    phases: Vec<Complex64>,
    accepting: AcceptingSet,
}

impl SingleQuerySpec {
    /// `phases[a << w | b]` is `e^{iφ_{a,b}}`.
    pub fn new(n_orc: usize, w: usize, phases: PhaseDiagonal, accepting: AcceptingSet) -> Result<Self> {
        let m = n_orc + w;
        if n_orc == 0 {
            return Err(Error::InvalidArgument("at least one oracle qubit is required".into()));
        }
        if phases.m() != m {
            return Err(Error::DimensionMismatch {
                left: phases.entries().len(),
                right: 1 << m,
            });
        }
        if accepting.m() != m {
            return Err(Error::DimensionMismatch {
                left: accepting.m(),
                right: m,
            });
        }
        Ok(Self {
            n_orc,
            w,
            phases: phases.entries().to_vec(),
            accepting,
        })
    }

    /// The fixed part of a recipe circuit: `n + 1` oracle qubits, no ancilla,
    /// diagonal `ρ_b(x)` and the recipe's accepting set. The oracle string is
    /// `z_{(0,x)} = f(x)`, `z_{(1,x)} = g(x)`.
    pub fn from_recipe(recipe: &Recipe) -> Result<Self> {
        let t = recipe.tables();
        let signs: Vec<i8> = t.rho0.iter().chain(&t.rho1).copied().collect();
        Self::new(
            recipe.n() + 1,
            0,
            PhaseDiagonal::from_signs(&signs)?,
            accepting_set(recipe),
        )
    }

    /// Uniform angles and a random accepting set (each outcome with probability ½).
    pub fn random<R: RngCore + ?Sized>(n_orc: usize, w: usize, rng: &mut R) -> Result<Self> {
        let m = n_orc + w;
        let angles: Vec<f64> = (0..1usize << m).map(|_| TAU * rng::unit_f64(rng)).collect();
        let members: Vec<u64> = (0..1u64 << m).filter(|_| rng::coin(rng)).collect();
        Self::new(
            n_orc,
            w,
            PhaseDiagonal::from_angles(&angles)?,
            AcceptingSet::from_indices(m, members)?,
        )
    }

    pub fn n_orc(&self) -> usize {
        self.n_orc
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn m(&self) -> usize {
        self.n_orc + self.w
    }

    pub fn num_vars(&self) -> usize {
        1 << self.n_orc
    }

    pub fn accepting(&self) -> &AcceptingSet {
        &self.accepting
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// The circuit with oracle string `z` absorbed into the diagonal.
    pub fn circuit_for(&self, z: &[i8]) -> Result<IqpCircuit> {
        if z.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                left: z.len(),
                right: self.num_vars(),
            });
        }
        let entries = self
            .phases
            .iter()
            .enumerate()
            .map(|(i, &e)| e * z[i >> self.w] as f64)
            .collect();
        Ok(IqpCircuit::new(PhaseDiagonal::from_unit(entries)?))
    }

    /// `p(z)` by direct simulation.
    pub fn acceptance(&self, z: &[i8]) -> Result<f64> {
        iqp::acceptance_probability(&self.circuit_for(z)?, &self.accepting)
    }
}

/// `Σ_S p̂(S) χ_S` over ±1 variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPoly {
    num_vars: usize,
    coeffs: BTreeMap<Vec<usize>, f64>,
}

impl MultilinearPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            coeffs: BTreeMap::new(),
        }
    }

    /// Accumulates terms (duplicates add up), then drops near-zero coefficients.
    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (mut set, c) in terms {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "monomial {set:?} repeats a variable"
                )));
            }
            if let Some(&v) = set.iter().find(|&&v| v >= num_vars) {
                return Err(Error::InvalidArgument(format!(
                    "variable {v} outside a universe of {num_vars}"
                )));
            }
            *coeffs.entry(set).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| c.abs() > SPARSITY);
        Ok(Self { num_vars, coeffs })
    }

    /// Dense coefficients indexed by subset mask (bit `i` ↔ variable `i`).
    pub fn from_dense(num_vars: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != 1usize << num_vars {
            return Err(Error::DimensionMismatch {
                left: dense.len(),
                right: 1 << num_vars,
            });
        }
        Self::from_terms(
            num_vars,
            dense
                .iter()
                .enumerate()
                .filter(|(_, c)| c.abs() > SPARSITY)
                .map(|(mask, &c)| (mask_to_set(mask as u64), c)),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.coeffs.iter().map(|(s, &c)| (s.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, set: &[usize]) -> f64 {
        let mut key = set.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&[])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of stored coefficients at each level `0..=degree`.
    pub fn degree_profile(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree() + 1];
        for s in self.coeffs.keys() {
            out[s.len()] += 1;
        }
        out
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// `L_{1,ℓ}`: sum of `|p̂(S)|` over `|S| = ℓ`.
    pub fn level_l1(&self, level: usize) -> f64 {
        self.coeffs
            .iter()
            .filter(|(s, _)| s.len() == level)
            .map(|(_, c)| c.abs())
            .sum()
    }

    pub fn eval(&self, z: &[i8]) -> f64 {
        assert_eq!(z.len(), self.num_vars, "assignment length");
        self.coeffs
            .iter()
            .map(|(s, &c)| c * s.iter().map(|&i| z[i] as f64).product::<f64>())
            .sum()
    }

    /// Largest `|p̂(S)|` outside the given levels.
    pub fn max_abs_outside(&self, levels: &[usize]) -> f64 {
        self.coeffs
            .iter()
            .filter(|(s, _)| !levels.contains(&s.len()))
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    /// Largest coefficientwise difference with `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<&Vec<usize>> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter()
            .map(|k| {
                (self.coeffs.get(k).copied().unwrap_or(0.0)
                    - other.coeffs.get(k).copied().unwrap_or(0.0))
                .abs()
            })
            .fold(0.0, f64::max)
    }
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).collect()
}

/// Coefficients read off the v-matrix; `n_orc + w ≤ 12`.
pub fn poly_from_vmatrix(spec: &SingleQuerySpec) -> Result<MultilinearPoly> {
    let m = spec.m();
    if m > VMATRIX_MAX_QUBITS {
        return Err(Error::GuardExceeded {
            what: "qubits for the v-matrix",
            value: m,
            limit: VMATRIX_MAX_QUBITS,
        });
    }
    let n_vars = spec.num_vars();
    let members = spec.accepting.members()?;
    let anc = 1usize << spec.w;
    let anc_scale = (anc as f64).sqrt().recip();

    // H^⊗m |v_j⟩ restricted to F, one row per oracle index j.
    let rows: Vec<Vec<Complex64>> = par::map_indexed(n_vars, |j| {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << m];
        for b in 0..anc {
            let idx = (j << spec.w) | b;
            v[idx] = spec.phases[idx] * anc_scale;
        }
        cube::fwht(&mut v).expect("power-of-two length");
        members.iter().map(|&y| v[y as usize]).collect()
    });
    let inner = |i: usize, j: usize| -> Complex64 {
        rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| a.conj() * b)
            .sum()
    };

    let norm = 1.0 / n_vars as f64;
    let trace: f64 = (0..n_vars).map(|i| inner(i, i).re).sum();
    let pairs: Vec<Vec<(Vec<usize>, f64)>> = par::map_indexed(n_vars, |i| {
        ((i + 1)..n_vars)
            .map(|j| (vec![i, j], 2.0 * norm * inner(i, j).re))
            .collect()
    });
    MultilinearPoly::from_terms(
        n_vars,
        std::iter::once((Vec::new(), norm * trace)).chain(pairs.into_iter().flatten()),
    )
}

/// All `2^{2ⁿ}` Fourier coefficients of `p` from its values on every oracle
/// string; `2ⁿ ≤ 16`. Index `S` is a subset mask with bit `i` ↔ variable `i`.
pub fn bruteforce_coefficients(spec: &SingleQuerySpec) -> Result<Vec<f64>> {
    let n_vars = spec.num_vars();
    if n_vars > BRUTE_MAX_VARS {
        return Err(Error::GuardExceeded {
            what: "oracle bits for the brute-force expansion",
            value: n_vars,
            limit: BRUTE_MAX_VARS,
        });
    }
    let values: Vec<Result<f64>> = par::map_indexed(1 << n_vars, |s| {
        let z: Vec<i8> = (0..n_vars)
            .map(|a| if (s >> a) & 1 == 1 { -1 } else { 1 })
            .collect();
        spec.acceptance(&z)
    });
    let mut coeffs = values.into_iter().collect::<Result<Vec<f64>>>()?;
    // p̂(S) = 2^{-N} Σ_s p(s) (-1)^{|S ∧ s|}
    cube::fwht(&mut coeffs)?;
    let scale = (2f64).powf(-0.5 * n_vars as f64);
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(coeffs)
}

pub fn poly_bruteforce(spec: &SingleQuerySpec) -> Result<MultilinearPoly> {
    MultilinearPoly::from_dense(spec.num_vars(), &bruteforce_coefficients(spec)?)
}

/// Each variable fixed to ±1 or left free (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRestriction {
    assignment: Vec<Option<i8>>,
}

impl OracleRestriction {
    pub fn all_free(num_vars: usize) -> Self {
        Self {
            assignment: vec![None; num_vars],
        }
    }

    pub fn new(assignment: Vec<Option<i8>>) -> Result<Self> {
        if let Some(pos) = assignment
            .iter()
            .position(|a| matches!(a, Some(v) if *v != 1 && *v != -1))
        {
            return Err(Error::InvalidArgument(format!(
                "restriction of variable {pos} must be ±1 or free"
            )));
        }
        Ok(Self { assignment })
    }

    /// Every variable fixed.
    pub fn total(values: &[i8]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Some(v)).collect())
    }

    /// Each variable free with probability ⅓, else a fair ±1.
    pub fn random<R: RngCore + ?Sized>(num_vars: usize, rng: &mut R) -> Self {
        let assignment = (0..num_vars)
            .map(|_| {
                let u = rng::unit_f64(rng);
                if u < 1.0 / 3.0 {
                    None
                } else if u < 2.0 / 3.0 {
                    Some(1)
                } else {
                    Some(-1)
                }
            })
            .collect();
        Self { assignment }
    }

    pub fn assignment(&self) -> &[Option<i8>] {
        &self.assignment
    }
}

/// `p_{|ρ}`: fixed variables are substituted, the universe is unchanged.
pub fn restrict(p: &MultilinearPoly, r: &OracleRestriction) -> Result<MultilinearPoly> {
    if r.assignment.len() != p.num_vars {
        return Err(Error::DimensionMismatch {
            left: r.assignment.len(),
            right: p.num_vars,
        });
    }
    MultilinearPoly::from_terms(
        p.num_vars,
        p.coeffs.iter().map(|(s, &c)| {
            let mut free = Vec::with_capacity(s.len());
            let mut factor = c;
            for &i in s {
                match r.assignment[i] {
                    None => free.push(i),
                    Some(v) => factor *= v as f64,
                }
            }
            (free, factor)
        }),
    )
}

/// For each coordinate `i` of an enlarged register, the set `A_i` of original
/// variables whose product is its effective oracle bit, `|A_i| ≤ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLayout {
    num_original: usize,
    d: usize,
    sets: Vec<Vec<usize>>,
}

impl QueryLayout {
    pub fn new(num_original: usize, d: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = sets;
        for (i, a) in sets.iter_mut().enumerate() {
            a.sort_unstable();
            if a.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("A_{i} repeats a variable")));
            }
            if a.len() > d {
                return Err(Error::InvalidArgument(format!(
                    "|A_{i}| = {} exceeds d = {d}",
                    a.len()
                )));
            }
            if let Some(&v) = a.iter().find(|&&v| v >= num_original) {
                return Err(Error::InvalidArgument(format!(
                    "A_{i} names variable {v} outside {num_original}"
                )));
            }
        }
        Ok(Self {
            num_original,
            d,
            sets,
        })
    }

    /// `d` copies of an `n`-qubit oracle, query `t` acting on the register qubits
    /// `windows[t]` (MSB first) of an `n_prime`-qubit register.
    pub fn from_windows(n: usize, n_prime: usize, windows: &[Vec<usize>]) -> Result<Self> {
        for (t, win) in windows.iter().enumerate() {
            if win.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "window {t} has {} qubits, expected {n}",
                    win.len()
                )));
            }
            if win.iter().any(|&q| q >= n_prime) {
                return Err(Error::InvalidArgument(format!(
                    "window {t} leaves the {n_prime}-qubit register"
                )));
            }
        }
        let sets = (0..1usize << n_prime)
            .map(|i| {
                let mut acc: Vec<usize> = Vec::new();
                for win in windows {
                    let j = win.iter().fold(0usize, |v, &q| {
                        (v << 1) | ((i >> (n_prime - 1 - q)) & 1)
                    });
                    symmetric_insert(&mut acc, j);
                }
                acc
            })
            .collect();
        Self::new(1 << n, windows.len(), sets)
    }

    pub fn num_original(&self) -> usize {
        self.num_original
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// `z_i(x) = χ_{A_i}(x)` for every enlarged coordinate.
    pub fn substitute(&self, x: &[i8]) -> Vec<i8> {
        self.sets
            .iter()
            .map(|a| a.iter().map(|&j| x[j]).product())
            .collect()
    }
}

fn symmetric_insert(set: &mut Vec<usize>, v: usize) {
    match set.binary_search(&v) {
        Ok(pos) => {
            set.remove(pos);
        }
        Err(pos) => set.insert(pos, v),
    }
}

/// `r(x) = p(z(x))`: each monomial `T` becomes `χ_{A(T)}` with
/// `A(T) = △_{i∈T} A_i`.
pub fn compose_queries(p: &MultilinearPoly, layout: &QueryLayout) -> Result<MultilinearPoly> {
    if layout.sets.len() < p.num_vars {
        return Err(Error::MissingLayoutEntry {
            index: layout.sets.len(),
        });
    }
    MultilinearPoly::from_terms(
        layout.num_original,
        p.coeffs.iter().map(|(t, &c)| {
            let mut acc = Vec::new();
            for &i in t {
                for &j in &layout.sets[i] {
                    symmetric_insert(&mut acc, j);
                }
            }
            (acc, c)
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub degree_profile: Vec<usize>,
    pub l1: f64,
    pub levels: Vec<f64>,
    #[serde(rename = "F_size")]
    pub f_size: u64,
    pub bound: f64,
    pub pass: bool,
    pub slack: f64,
}

/// Checks `‖p̂‖₁ ≤ √min{|F|, 2^{register_qubits}}`.
pub fn audit_polynomial(p: &MultilinearPoly, f_size: u64, register_qubits: usize) -> AuditReport {
    let cap = (1u64 << register_qubits).min(f_size);
    let bound = (cap as f64).sqrt();
    let l1 = p.l1_norm();
    let top = p.degree().max(2);
    AuditReport {
        degree_profile: {
            let mut prof = p.degree_profile();
            prof.resize(top + 1, 0);
            prof
        },
        l1,
        levels: (0..=top).map(|l| p.level_l1(l)).collect(),
        f_size,
        bound,
        pass: l1 <= bound + BOUND_TOL,
        slack: bound - l1,
    }
}

pub fn audit_bound(spec: &SingleQuerySpec) -> Result<AuditReport> {
    let p = poly_from_vmatrix(spec)?;
    Ok(audit_polynomial(
        &p,
        spec.accepting.cardinality(),
        spec.n_orc,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::odd_recipe;
    use crate::rng::CounterRng;

    fn toy() -> SingleQuerySpec {
        SingleQuerySpec::new(
            1,
            0,
            PhaseDiagonal::from_angles(&[0.0, 0.0]).unwrap(),
            AcceptingSet::from_indices(1, [0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn toy_polynomial() {
        // |(z₀ + z₁)/2|² = ½ + ½ z₀z₁
        let p = poly_from_vmatrix(&toy()).unwrap();
        assert!((p.constant_term() - 0.5).abs() < 1e-12);
        assert!((p.coefficient(&[0, 1]) - 0.5).abs() < 1e-12);
        assert_eq!(p.len(), 2);
        assert!((p.l1_norm() - 1.0).abs() < 1e-12);
        assert!((p.level_l1(2) - 0.5).abs() < 1e-12);
        assert_eq!(p.level_l1(5), 0.0);
        let report = audit_bound(&toy()).unwrap();
        assert!(report.pass);
        assert!(report.slack.abs() < 1e-10);
    }

    #[test]
    fn full_accepting_set_is_constant_one() {
        let mut rng = CounterRng::new(8, 0);
        let s = SingleQuerySpec::random(2, 1, &mut rng).unwrap();
        let full = SingleQuerySpec::new(
            2,
            1,
            PhaseDiagonal::from_unit(s.phases().to_vec()).unwrap(),
            AcceptingSet::full(3),
        )
        .unwrap();
        let p = poly_from_vmatrix(&full).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p.constant_term() - 1.0).abs() < 1e-12);
        let r = audit_bound(&full).unwrap();
        assert!((r.l1 - 1.0).abs() < 1e-12 && r.pass);
    }

    #[test]
    fn odd_circuit_polynomial_n3() {
        let spec = SingleQuerySpec::from_recipe(&odd_recipe(3).unwrap()).unwrap();
        let p = poly_from_vmatrix(&spec).unwrap();
        assert!((p.constant_term() - 0.5).abs() < 1e-10);
        assert!((p.level_l1(2) - 1.0).abs() < 1e-10);
        assert!((p.l1_norm() - 1.5).abs() < 1e-10);
        assert_eq!(p.degree_profile(), vec![1, 0, 32]);
        let r = audit_bound(&spec).unwrap();
        assert_eq!(r.f_size, 8);
        assert!((r.bound - 8f64.sqrt()).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn restriction_examples() {
        let p = poly_from_vmatrix(&toy()).unwrap();
        let r = OracleRestriction::new(vec![None, Some(1)]).unwrap();
        let q = restrict(&p, &r).unwrap();
        assert!((q.coefficient(&[0]) - 0.5).abs() < 1e-12);
        assert!((q.constant_term() - 0.5).abs() < 1e-12);
        assert!((q.l1_norm() - 1.0).abs() < 1e-12);

        let full = restrict(&p, &OracleRestriction::total(&[1, -1]).unwrap()).unwrap();
        assert_eq!(full.degree(), 0);
        assert!((full.constant_term() - p.eval(&[1, -1])).abs() < 1e-12);
        assert_eq!(restrict(&p, &OracleRestriction::all_free(2)).unwrap(), p);
        assert!(OracleRestriction::new(vec![Some(0)]).is_err());
    }

    #[test]
    fn compose_relabel_and_collapse() {
        let p = MultilinearPoly::from_terms(3, [(vec![], 0.5), (vec![0, 2], 0.25), (vec![1], 0.1)]).unwrap();
        let perm = QueryLayout::new(3, 1, vec![vec![2], vec![0], vec![1]]).unwrap();
        let q = compose_queries(&p, &perm).unwrap();
        assert!((q.coefficient(&[1, 2]) - 0.25).abs() < 1e-15);
        assert!((q.coefficient(&[0]) - 0.1).abs() < 1e-15);
        assert!((q.l1_norm() - p.l1_norm()).abs() < 1e-15);

        let collapse = QueryLayout::new(2, 1, vec![vec![0], vec![1], vec![0]]).unwrap();
        let q = compose_queries(&p, &collapse).unwrap();
        assert!((q.constant_term() - 0.75).abs() < 1e-15);

        let short = QueryLayout::new(2, 1, vec![vec![0]]).unwrap();
        assert_eq!(
            compose_queries(&p, &short),
            Err(Error::MissingLayoutEntry { index: 1 })
        );
        assert!(QueryLayout::new(2, 1, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn window_layout_shape() {
        let layout = QueryLayout::from_windows(2, 3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(layout.sets().len(), 8);
        // |a1 a2 a3⟩ = |000⟩ sees x_{00} twice
        assert!(layout.sets()[0].is_empty());
        // |011⟩: x_{01} · x_{11}
        assert_eq!(layout.sets()[3], vec![1, 3]);
        assert!(layout.sets().iter().all(|a| a.len() <= 2));
    }

    #[test]
    fn guards() {
        let mut rng = CounterRng::new(0, 0);
        let big = SingleQuerySpec::random(5, 0, &mut rng).unwrap();
        assert!(matches!(bruteforce_coefficients(&big), Err(Error::GuardExceeded { .. })));
        let bad = SingleQuerySpec::new(
            1,
            0,
            PhaseDiagonal::from_angles(&[0.0; 4]).unwrap(),
            AcceptingSet::full(1),
        );
        assert!(bad.is_err());
    }
}
