use forriqp_core::circuits::{
    build_from_recipe, even_circuit, even_recipe, odd_circuit, odd_recipe, predicted_acceptance,
    AbsoluteProcedure, BiasForm, CombinedProcedure, PreparedCircuit, Recipe, RecipeTables,
};
use forriqp_core::cube;
use forriqp_core::forrelation::{phi, phi_components, sample_uniform_pair, BooleanFunction};
use forriqp_core::iqp::reference::{reference_fig1, reference_fig2};
use forriqp_core::iqp::{
    acceptance_probability, naive_amplitudes, output_distribution, sample_output, AcceptingSet,
    IqpCircuit, PhaseDiagonal,
};
use forriqp_core::rng::{self, CounterRng};
use num_complex::Complex64;
use rand_core::RngCore;

fn random_circuit(m: usize, rng: &mut CounterRng) -> IqpCircuit {
    let angles: Vec<f64> = (0..1 << m).map(|_| std::f64::consts::TAU * rng::unit_f64(rng)).collect();
    IqpCircuit::new(PhaseDiagonal::from_angles(&angles).unwrap())
}

/// ⟨y|H D H|0⟩ by the defining sum.
fn amplitude_oracle(c: &IqpCircuit, y: usize) -> Complex64 {
    let m = c.m();
    let s: Complex64 = c
        .diagonal()
        .entries()
        .iter()
        .enumerate()
        .map(|(x, e)| if (x & y).count_ones() % 2 == 0 { *e } else { -*e })
        .sum();
    s / (1u64 << m) as f64
}

#[test]
fn amplitudes_match_defining_sum() {
    let mut rng = CounterRng::new(20, 0);
    for m in 1..=8 {
        let c = random_circuit(m, &mut rng);
        let fast = c.amplitudes(24).unwrap();
        let slow = naive_amplitudes(&c).unwrap();
        for y in 0..1 << m {
            let want = amplitude_oracle(&c, y);
            assert!((fast[y] - want).norm() < 1e-12);
            assert!((slow[y] - want).norm() < 1e-12);
        }
        let d = output_distribution(&c).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        let shifted = IqpCircuit::new(c.diagonal().with_global_phase(1.234));
        let d2 = output_distribution(&shifted).unwrap();
        for (a, b) in d.probs().iter().zip(d2.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn sampled_outcomes_pass_chi_square() {
    let mut rng = CounterRng::new(21, 0);
    let c = random_circuit(4, &mut rng);
    let d = output_distribution(&c).unwrap();
    let draws = 100_000;
    let mut counts = [0u64; 16];
    for _ in 0..draws {
        counts[sample_output(&c, &mut rng).unwrap().index() as usize] += 1;
    }
    let mut chi2 = 0.0;
    let mut dof = 0;
    for (y, &k) in counts.iter().enumerate() {
        let e = d.probability(y as u64) * draws as f64;
        if e > 5.0 {
            chi2 += (k as f64 - e).powi(2) / e;
            dof += 1;
        } else {
            assert!(e > 0.0 || k == 0);
        }
    }
    // 0.999 quantile of χ²₁₅ is 37.70
    assert!(dof >= 2);
    assert!(chi2 < 37.70, "χ² = {chi2} over {dof} bins");
}

/// `½ + 2^{-(3n+2)/2} Σ f(x)g(y)ρ₀(x)ρ₁(y)σ(x⊕y)` written out again.
fn proposition_oracle(t: &RecipeTables, f: &BooleanFunction, g: &BooleanFunction) -> f64 {
    let n = f.n();
    let mut s = 0.0;
    for x in 0..1usize << n {
        for y in 0..1usize << n {
            s += (f.table()[x] * g.table()[y] * t.rho0[x] * t.rho1[y]) as f64 * t.sigma[x ^ y];
        }
    }
    0.5 + s * 2f64.powf(-(3.0 * n as f64 + 2.0) / 2.0)
}

#[test]
fn random_recipes_match_prediction() {
    let mut rng = CounterRng::new(22, 0);
    for n in [1usize, 3, 5, 7] {
        for _ in 0..20 {
            let mut rho0 = vec![0i8; 1 << n];
            let mut rho1 = vec![0i8; 1 << n];
            rng::fill_signs(&mut rng, &mut rho0);
            rng::fill_signs(&mut rng, &mut rho1);
            let shift = rng.next_u64() % (1 << n);
            let flip = if rng::coin(&mut rng) { -1.0 } else { 1.0 };
            let sigma: Vec<f64> = cube::sigma_odd_table(n)
                .iter()
                .enumerate()
                .map(|(x, s)| flip * s * cube::character(x as u64, shift) as f64)
                .collect();
            let tables = RecipeTables { rho0, rho1, sigma };
            let recipe = Recipe::from_sigma(tables.clone()).unwrap();
            let pair = sample_uniform_pair(n, &mut rng).unwrap();
            let circ = build_from_recipe(&recipe, &pair.f, &pair.g).unwrap();
            assert_eq!(circ.accepting().enumerate_cardinality().unwrap(), 1 << n);
            let sim = circ.acceptance().unwrap();
            let want = proposition_oracle(&tables, &pair.f, &pair.g);
            assert!((sim - want).abs() < 1e-10, "n={n}");
            let pred = predicted_acceptance(&tables, &pair.f, &pair.g).unwrap();
            assert!((pred - want).abs() < 1e-10);
        }
    }
}

#[test]
fn odd_and_even_circuits_track_components() {
    let mut rng = CounterRng::new(23, 0);
    for n in [1usize, 3, 5, 7, 9] {
        for _ in 0..5 {
            let p = sample_uniform_pair(n, &mut rng).unwrap();
            let c = phi_components(&p.f, &p.g).unwrap();
            let odd = odd_circuit(&p.f, &p.g).unwrap();
            let even = even_circuit(&p.f, &p.g).unwrap();
            assert_eq!(odd.form(), BiasForm::Odd);
            assert!((odd.acceptance().unwrap() - (0.5 + c.phi_odd / 2f64.sqrt())).abs() < 1e-10);
            assert!((even.acceptance().unwrap() - (0.5 + c.phi_even / 2f64.sqrt())).abs() < 1e-10);
        }
    }
}

#[test]
fn procedures_are_biased_by_phi() {
    let mut rng = CounterRng::new(24, 0);
    for n in 1..=9usize {
        for _ in 0..4 {
            let p = sample_uniform_pair(n, &mut rng).unwrap();
            let ph = phi(&p.f, &p.g).unwrap();
            let (lin, sq) = if n % 2 == 1 {
                (0.5 + ph / (2.0 * 2f64.sqrt()), 0.5 + ph * ph / 4.0)
            } else {
                (0.5 + ph / 4.0, 0.5 + ph * ph / 8.0)
            };
            let comb = CombinedProcedure::new(&p.f, &p.g).unwrap();
            assert_eq!(comb.is_padded(), n % 2 == 0);
            assert!((comb.exact() - lin).abs() < 1e-10);
            assert!((AbsoluteProcedure::new(&p.f, &p.g).unwrap().exact() - sq).abs() < 1e-10);
        }
    }
}

#[test]
fn accepting_sets_have_half_the_outcomes() {
    for n in (1..=13).step_by(2) {
        for r in [odd_recipe(n).unwrap(), even_recipe(n).unwrap()] {
            let f = BooleanFunction::constant(n, 1).unwrap();
            let c = build_from_recipe(&r, &f, &f).unwrap();
            assert_eq!(c.accepting().cardinality(), 1 << n);
            assert_eq!(c.accepting().enumerate_cardinality().unwrap(), 1 << n);
        }
    }
}

#[test]
fn reference_engine_agrees() {
    let mut rng = CounterRng::new(25, 0);
    for n in 1..=8usize {
        for _ in 0..3 {
            let p = sample_uniform_pair(n, &mut rng).unwrap();
            let ph = phi(&p.f, &p.g).unwrap();
            assert!((reference_fig1(&p.f, &p.g).unwrap() - ph * ph).abs() < 1e-10);
            assert!((reference_fig2(&p.f, &p.g).unwrap() - (0.5 + 0.5 * ph)).abs() < 1e-10);
        }
    }
}

#[test]
fn prepared_circuit_sampling_rate() {
    let p = sample_uniform_pair(3, &mut CounterRng::new(26, 0)).unwrap();
    let prepared = PreparedCircuit::new(odd_circuit(&p.f, &p.g).unwrap()).unwrap();
    let want = prepared.acceptance();
    let mut rng = CounterRng::new(26, 1);
    let trials = 100_000;
    let hits = (0..trials).filter(|_| prepared.sample_accept(&mut rng)).count();
    let sd = (want * (1.0 - want) / trials as f64).sqrt();
    assert!((hits as f64 / trials as f64 - want).abs() <= 3.0 * sd);
}

#[test]
fn accepting_set_probability_is_summed() {
    let c = IqpCircuit::new(PhaseDiagonal::from_signs(&[1, -1, 1, 1]).unwrap());
    let d = output_distribution(&c).unwrap();
    let set = AcceptingSet::from_indices(2, [0, 3]).unwrap();
    let want = d.probability(0) + d.probability(3);
    assert!((acceptance_probability(&c, &set).unwrap() - want).abs() < 1e-15);
    assert!((acceptance_probability(&c, &AcceptingSet::full(2)).unwrap() - 1.0).abs() < 1e-12);
}
