//! Minimal gate-level statevector engine for the two textbook BQP circuits for
//! 2-Forrelation. It applies Hadamards one qubit at a time and does not share
//! the transform code used by the IQP simulator, so it can serve as a check on it.
//!
//! Qubit 0 is the most significant bit of a basis index.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::forrelation::BooleanFunction;
use crate::{Error, Result};

/// Largest oracle dimension accepted by the reference circuits.
pub const REFERENCE_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn stride(&self, qubit: usize) -> usize {
        assert!(qubit < self.qubits, "qubit {qubit} out of range");
        1 << (self.qubits - 1 - qubit)
    }

    pub fn hadamard(&mut self, qubit: usize) {
        let s = self.stride(qubit);
        for i in 0..self.amps.len() {
            if i & s == 0 {
                let (a, b) = (self.amps[i], self.amps[i | s]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | s] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    pub fn hadamard_all(&mut self) {
        for q in 0..self.qubits {
            self.hadamard(q);
        }
    }

    /// Hadamard on `target`, only on the branch where `control` is 1.
    pub fn controlled_hadamard(&mut self, control: usize, target: usize) {
        let c = self.stride(control);
        let s = self.stride(target);
        assert_ne!(c, s, "control and target must differ");
        for i in 0..self.amps.len() {
            if i & c != 0 && i & s == 0 {
                let (a, b) = (self.amps[i], self.amps[i | s]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | s] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    /// Multiplies basis state `i` by `phase(i)`.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phase(i);
        }
    }

    pub fn probability(&self, pred: impl Fn(usize) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn check_pair(f: &BooleanFunction, g: &BooleanFunction) -> Result<usize> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    if f.n() > REFERENCE_MAX_N {
        return Err(Error::GuardExceeded {
            what: "n for the reference engine",
            value: f.n(),
            limit: REFERENCE_MAX_N,
        });
    }
    Ok(f.n())
}

fn sign(v: i8) -> Complex64 {
    Complex64::new(v as f64, 0.0)
}

/// Final state of `H^⊗n · O_g · H^⊗n · O_f · H^⊗n |0ⁿ⟩`.
pub fn fig1_state(f: &BooleanFunction, g: &BooleanFunction) -> Result<StateVector> {
    let n = check_pair(f, g)?;
    let mut psi = StateVector::zero(n);
    psi.hadamard_all();
    psi.apply_diagonal(|i| sign(f.value(i as u64)));
    psi.hadamard_all();
    psi.apply_diagonal(|i| sign(g.value(i as u64)));
    psi.hadamard_all();
    Ok(psi)
}

/// Probability that the interleaved circuit outputs `0ⁿ`.
pub fn reference_fig1(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    Ok(fig1_state(f, g)?.probability(|i| i == 0))
}

/// Joint oracle `O_{f,g}|b⟩|x⟩ = f(x)|0⟩|x⟩` for `b = 0`, `g(x)|1⟩|x⟩` for `b = 1`,
/// with `b` the most significant qubit.
pub fn joint_oracle_phase(f: &BooleanFunction, g: &BooleanFunction, index: usize) -> Complex64 {
    let n = f.n();
    let x = (index & ((1 << n) - 1)) as u64;
    if index >> n == 0 {
        sign(f.value(x))
    } else {
        sign(g.value(x))
    }
}

/// Final state of the single-query circuit with a controlled `H^⊗n` layer.
pub fn fig2_state(f: &BooleanFunction, g: &BooleanFunction) -> Result<StateVector> {
    let n = check_pair(f, g)?;
    let mut psi = StateVector::zero(n + 1);
    psi.hadamard_all();
    psi.apply_diagonal(|i| joint_oracle_phase(f, g, i));
    for q in 1..=n {
        psi.controlled_hadamard(0, q);
    }
    psi.hadamard(0);
    Ok(psi)
}

/// Probability that the first qubit of the single-query circuit reads 0.
pub fn reference_fig2(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    let n = check_pair(f, g)?;
    Ok(fig2_state(f, g)?.probability(|i| i >> n == 0))
}
