//! `verify`: the invariant suites, one line per check.

use clap::{Args, ValueEnum};
use forriqp_core::circuits::{
    build_from_recipe, even_recipe, impossibility_search, odd_recipe, predicted_acceptance,
    relation_violation, AbsoluteProcedure, CombinedProcedure, Recipe, RecipeTables,
};
use forriqp_core::cube::{
    self, character, character_sum, character_sum_closed_form, hamming_weight, inner_gf2,
    q_value, BitString, WeightParity,
};
use forriqp_core::forrelation::{
    phi, phi_components, sample_forrelated_pair, sample_uniform_pair, BooleanFunction,
    FunctionPair,
};
use forriqp_core::growth::{
    audit_bound, audit_polynomial, compose_queries, poly_bruteforce, poly_from_vmatrix, restrict,
    OracleRestriction, QueryLayout, SingleQuerySpec,
};
use forriqp_core::iqp::reference::{reference_fig1, reference_fig2};
use forriqp_core::iqp::{AcceptingSet, PhaseDiagonal};
use forriqp_core::rng::{self, CounterRng};
use rand_core::RngCore;
use serde::Serialize;

use crate::output::{self, fixed12, fmt_err};
use crate::{Format, Globals, Report};

/// Tolerance for closed-form comparisons.
pub const TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Circuits,
    Growth,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    /// Passes when `err ≤ tol`.
    fn within(name: impl Into<String>, err: f64, tol: f64, witness: String) -> Self {
        let pass = err <= tol;
        let mut detail = format!("max|err| = {}", fmt_err(err));
        if !pass {
            detail.push_str(&format!(" (tol {}) witness {witness}", fmt_err(tol)));
        }
        Self::new(name, pass, detail)
    }

    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{}: {status}", self.name)
        } else {
            format!("{}: {status} {}", self.name, self.detail)
        }
    }
}

/// Largest error over a batch and where it happened.
struct MaxErr {
    err: f64,
    witness: String,
}

impl MaxErr {
    fn new() -> Self {
        Self {
            err: 0.0,
            witness: String::new(),
        }
    }

    fn add(&mut self, err: f64, witness: impl FnOnce() -> String) {
        if err > self.err || err.is_nan() {
            self.err = if err.is_nan() { f64::INFINITY } else { err };
            self.witness = witness();
        }
    }
}

pub fn identities() -> Vec<Check> {
    let mut out = Vec::new();

    let mut witness = None;
    'outer: for n in 1..=10usize {
        for x in 0..1u64 << n {
            let bx = BitString::new(n, x).unwrap();
            for y in 0..1u64 << n {
                let by = BitString::new(n, y).unwrap();
                if !q_identity_holds(bx, by) {
                    witness = Some(format!("n={n} x={bx} y={by}"));
                    break 'outer;
                }
            }
        }
    }
    out.push(Check::new(
        "q-identity n≤10",
        witness.is_none(),
        witness.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));

    let mut rng = CounterRng::new(0x5eed, 32);
    let mask = (1u64 << 32) - 1;
    let bad = (0..100_000).find_map(|_| {
        let x = BitString::new(32, rng.next_u64() & mask).unwrap();
        let y = BitString::new(32, rng.next_u64() & mask).unwrap();
        (!q_identity_holds(x, y)).then(|| format!("x={x} y={y}"))
    });
    out.push(Check::new(
        "q-identity n=32 (1e5 random pairs)",
        bad.is_none(),
        bad.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));

    let mut bad = None;
    'claim: for n in 1..=10usize {
        for x in 0..1u64 << n {
            let b = BitString::new(n, x).unwrap();
            for r in [WeightParity::All, WeightParity::Even, WeightParity::Odd] {
                let brute: i64 = (0..1u64 << n)
                    .filter(|y| r.admits(y.count_ones() as usize))
                    .map(|y| character(x, y))
                    .sum();
                if character_sum(b, r) != brute || character_sum_closed_form(b, r) != brute {
                    bad = Some(format!("n={n} x={b} range={r:?}"));
                    break 'claim;
                }
            }
        }
    }
    out.push(Check::new(
        "parity-sum claim n≤10",
        bad.is_none(),
        bad.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));

    for (label, table, hat) in [
        ("odd", cube::sigma_odd_table as fn(usize) -> Vec<f64>, cube::sigma_hat_odd_table as fn(usize) -> Vec<f64>),
        ("even", cube::sigma_even_table, cube::sigma_hat_even_table),
    ] {
        let mut m = MaxErr::new();
        for n in 1..=16 {
            let t = cube::fwht_copy(&table(n)).unwrap();
            for (x, (a, b)) in t.iter().zip(hat(n)).enumerate() {
                m.add((a - b).abs(), || format!("n={n} x={x}"));
            }
        }
        out.push(Check::within(format!("sigma-hat {label} closed form n≤16"), m.err, TOL, m.witness));
    }

    let mut m = MaxErr::new();
    for n in (1..=15).step_by(2) {
        for hat in [cube::sigma_hat_odd_table(n), cube::sigma_hat_even_table(n)] {
            for (x, v) in hat.iter().enumerate() {
                m.add((v.abs() - 1.0).abs(), || format!("n={n} x={x}"));
            }
        }
    }
    out.push(Check::within("bentness odd n≤15", m.err, TOL, m.witness));

    let mut m = MaxErr::new();
    let mut rng = CounterRng::new(0x5eed, 1);
    for k in 0..=16 {
        let v: Vec<f64> = (0..1usize << k).map(|_| 2.0 * rng::unit_f64(&mut rng) - 1.0).collect();
        let back = cube::fwht_copy(&cube::fwht_copy(&v).unwrap()).unwrap();
        for (i, (a, b)) in v.iter().zip(&back).enumerate() {
            m.add((a - b).abs(), || format!("k={k} i={i}"));
        }
    }
    out.push(Check::within("fwht involution len≤2^16", m.err, TOL, m.witness));
    out
}

fn q_identity_holds(x: BitString, y: BitString) -> bool {
    let lhs = (q_value(x) + q_value(y) + q_value(x.xor(&y).unwrap())) % 2;
    let rhs = (inner_gf2(x, y).unwrap() as usize + hamming_weight(x) * hamming_weight(y)) % 2;
    lhs as usize == rhs
}

/// Half uniform, half stand-in forrelated pairs (uniform only for n = 1).
fn mixed_pairs(n: usize, count: usize, tag: u64) -> Vec<FunctionPair> {
    (0..count)
        .map(|i| {
            let mut r = CounterRng::new(tag, ((n as u64) << 32) | i as u64);
            if i % 2 == 1 && n >= 2 {
                sample_forrelated_pair(n, &mut r).unwrap()
            } else {
                sample_uniform_pair(n, &mut r).unwrap()
            }
        })
        .collect()
}

pub fn circuits() -> Vec<Check> {
    let mut out = Vec::new();
    for (thm, tag) in [("thm1", 0x7431u64), ("thm2", 0x7432)] {
        for n in 1..=9usize {
            let parity = if n % 2 == 1 { "odd" } else { "even" };
            let mut m = MaxErr::new();
            for (i, p) in mixed_pairs(n, 100, tag).iter().enumerate() {
                let ph = phi(&p.f, &p.g).unwrap();
                let (got, want) = if thm == "thm1" {
                    let c = CombinedProcedure::new(&p.f, &p.g).unwrap().exact();
                    let w = if n % 2 == 1 { 0.5 + ph / (2.0 * 2f64.sqrt()) } else { 0.5 + ph / 4.0 };
                    (c, w)
                } else {
                    let c = AbsoluteProcedure::new(&p.f, &p.g).unwrap().exact();
                    let w = if n % 2 == 1 { 0.5 + ph * ph / 4.0 } else { 0.5 + ph * ph / 8.0 };
                    (c, w)
                };
                m.add((got - want).abs(), || format!("pair #{i}"));
            }
            out.push(Check::within(format!("{thm} {parity} n={n}"), m.err, TOL, m.witness));
        }
    }

    let mut m = MaxErr::new();
    for n in (1..=9usize).step_by(2) {
        for (i, p) in mixed_pairs(n, 20, 0xc0).iter().enumerate() {
            let c = phi_components(&p.f, &p.g).unwrap();
            let odd = build_from_recipe(&odd_recipe(n).unwrap(), &p.f, &p.g).unwrap();
            let even = build_from_recipe(&even_recipe(n).unwrap(), &p.f, &p.g).unwrap();
            let s2 = 2f64.sqrt();
            m.add((odd.acceptance().unwrap() - 0.5 - c.phi_odd / s2).abs(), || format!("odd n={n} pair #{i}"));
            m.add((even.acceptance().unwrap() - 0.5 - c.phi_even / s2).abs(), || format!("even n={n} pair #{i}"));
        }
    }
    out.push(Check::within("odd/even parts track phi_odd/phi_even n≤9", m.err, TOL, m.witness));

    let mut rng = CounterRng::new(0x9202, 0);
    for n in (1..=7usize).step_by(2) {
        let mut m = MaxErr::new();
        for i in 0..50 {
            let tables = random_recipe(n, &mut rng);
            let recipe = Recipe::from_sigma(tables.clone()).unwrap();
            let p = sample_uniform_pair(n, &mut rng).unwrap();
            let sim = build_from_recipe(&recipe, &p.f, &p.g).unwrap().acceptance().unwrap();
            let pred = predicted_acceptance(&tables, &p.f, &p.g).unwrap();
            m.add((sim - pred).abs(), || format!("recipe #{i}"));
        }
        out.push(Check::within(format!("prop2 predicted = simulated n={n}"), m.err, TOL, m.witness));
    }

    // circuits at even n are built on the padded functions, dimension n + 1
    let mut bad = None;
    'sizes: for n in 1..=14usize {
        let dim = if n % 2 == 1 { n } else { n + 1 };
        let f = BooleanFunction::constant(dim, 1).unwrap();
        for recipe in [odd_recipe(dim).unwrap(), even_recipe(dim).unwrap()] {
            let c = build_from_recipe(&recipe, &f, &f).unwrap();
            let size = c.accepting().enumerate_cardinality().unwrap();
            if size != 1 << dim || c.accepting().cardinality() != size {
                bad = Some(format!("n={n} |F|={size}"));
                break 'sizes;
            }
        }
    }
    out.push(Check::new(
        "accepting set |F| = 2^n n≤14",
        bad.is_none(),
        bad.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));

    for n in 1..=3 {
        let found = impossibility_search(n).unwrap();
        out.push(Check::new(
            format!("impossibility n={n}"),
            found.is_none(),
            match found {
                None => "no sign triple exists".to_string(),
                Some(t) => format!("witness {t:?}"),
            },
        ));
    }

    let r = odd_recipe(3).unwrap();
    let t = r.tables();
    let v = relation_violation(&t.rho0, &t.rho1, &t.sigma, WeightParity::Odd);
    out.push(Check::new(
        "relaxed odd relation n=3",
        v.is_none(),
        v.map(|(x, y)| format!("witness x={x} y={y}")).unwrap_or_default(),
    ));

    let mut m1 = MaxErr::new();
    let mut m2 = MaxErr::new();
    for n in 1..=8usize {
        for (i, p) in mixed_pairs(n, 20, 0xf16).iter().enumerate() {
            let ph = phi(&p.f, &p.g).unwrap();
            m1.add((reference_fig1(&p.f, &p.g).unwrap() - ph * ph).abs(), || format!("n={n} pair #{i}"));
            m2.add((reference_fig2(&p.f, &p.g).unwrap() - 0.5 - 0.5 * ph).abs(), || format!("n={n} pair #{i}"));
        }
    }
    out.push(Check::within("fig1 reference = phi^2 n≤8", m1.err, TOL, m1.witness));
    out.push(Check::within("fig2 reference = 1/2 + phi/2 n≤8", m2.err, TOL, m2.witness));
    out
}

/// Random `ρ₀, ρ₁` with a character-shifted, sign-flipped `σ_odd`.
pub fn random_recipe(n: usize, rng: &mut CounterRng) -> RecipeTables {
    let mut rho0 = vec![0i8; 1 << n];
    let mut rho1 = vec![0i8; 1 << n];
    rng::fill_signs(rng, &mut rho0);
    rng::fill_signs(rng, &mut rho1);
    let shift = rng.next_u64() % (1 << n);
    let flip = if rng::coin(rng) { -1.0 } else { 1.0 };
    let sigma = cube::sigma_odd_table(n)
        .iter()
        .enumerate()
        .map(|(x, s)| flip * s * character(x as u64, shift) as f64)
        .collect();
    RecipeTables { rho0, rho1, sigma }
}

fn growth_specs() -> Vec<SingleQuerySpec> {
    let mut rng = CounterRng::new(0x6407, 0);
    let mut specs = Vec::new();
    for (n_orc, w) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1)] {
        for _ in 0..3 {
            specs.push(SingleQuerySpec::random(n_orc, w, &mut rng).unwrap());
        }
    }
    specs.push(SingleQuerySpec::from_recipe(&odd_recipe(1).unwrap()).unwrap());
    specs.push(SingleQuerySpec::from_recipe(&odd_recipe(3).unwrap()).unwrap());
    specs
}

pub fn growth() -> Vec<Check> {
    let mut out = Vec::new();
    let specs = growth_specs();
    let polys: Vec<_> = specs.iter().map(|s| poly_from_vmatrix(s).unwrap()).collect();

    let mut m = MaxErr::new();
    for (i, (s, p)) in specs.iter().zip(&polys).enumerate() {
        let b = poly_bruteforce(s).unwrap();
        m.add(p.max_abs_diff(&b), || format!("spec #{i}"));
    }
    out.push(Check::within(format!("vmatrix = bruteforce ({} specs)", specs.len()), m.err, TOL, m.witness));

    let mut m = MaxErr::new();
    for (i, s) in specs.iter().enumerate() {
        let b = poly_bruteforce(s).unwrap();
        m.add(b.max_abs_outside(&[0, 2]), || format!("spec #{i}"));
    }
    out.push(Check::within("degree support in {0,2}", m.err, TOL, m.witness));

    let mut worst = f64::INFINITY;
    let mut bad = None;
    for (i, s) in specs.iter().enumerate() {
        let r = audit_bound(s).unwrap();
        worst = worst.min(r.slack);
        if !r.pass && bad.is_none() {
            bad = Some(format!("spec #{i} l1={} bound={}", r.l1, r.bound));
        }
    }
    out.push(Check::new(
        format!("l1 bound ({} specs)", specs.len()),
        bad.is_none(),
        match bad {
            None => format!("min slack {}", output::fmt_num(worst)),
            Some(w) => format!("witness {w}"),
        },
    ));

    let toy = SingleQuerySpec::new(
        1,
        0,
        PhaseDiagonal::from_angles(&[0.0, 0.0]).unwrap(),
        AcceptingSet::from_indices(1, [0]).unwrap(),
    )
    .unwrap();
    let r = audit_bound(&toy).unwrap();
    out.push(Check::new(
        "bound tight at |F|=1,n=1",
        r.pass && r.slack.abs() <= TOL,
        format!("slack {}", fixed12(r.slack)),
    ));

    let odd3 = poly_from_vmatrix(&specs[specs.len() - 1]).unwrap();
    let err = (odd3.level_l1(2) - 1.0).abs().max((odd3.l1_norm() - 1.5).abs());
    out.push(Check::within("odd circuit n=3: L1,2 = 1, l1 = 1.5", err, TOL, String::new()));

    let mut rng = CounterRng::new(0x6407, 1);
    let mut bad = None;
    for (i, p) in polys.iter().enumerate() {
        for _ in 0..100 {
            let r = OracleRestriction::random(p.num_vars(), &mut rng);
            let q = restrict(p, &r).unwrap();
            if q.l1_norm() > p.l1_norm() + 1e-12 && bad.is_none() {
                bad = Some(format!("spec #{i} restriction {:?}", r.assignment()));
            }
        }
    }
    out.push(Check::new(
        format!("restriction monotone (100 x {} specs)", polys.len()),
        bad.is_none(),
        bad.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));

    let layout = QueryLayout::from_windows(2, 3, &[vec![0, 1], vec![1, 2]]).unwrap();
    let mut bad = None;
    let mut m = MaxErr::new();
    for i in 0..10 {
        let s = SingleQuerySpec::random(3, 0, &mut rng).unwrap();
        let p = poly_from_vmatrix(&s).unwrap();
        let r = compose_queries(&p, &layout).unwrap();
        let audit = audit_polynomial(&r, s.accepting().cardinality(), 3);
        if (r.degree() > 4 || !audit.pass) && bad.is_none() {
            bad = Some(format!("spec #{i} degree {}", r.degree()));
        }
        for _ in 0..16 {
            let mut x = vec![0i8; 4];
            rng::fill_signs(&mut rng, &mut x);
            m.add((r.eval(&x) - p.eval(&layout.substitute(&x))).abs(), || format!("spec #{i}"));
        }
    }
    out.push(Check::new(
        "two-query composition degree ≤ 4",
        bad.is_none(),
        bad.map(|w| format!("witness {w}")).unwrap_or_default(),
    ));
    out.push(Check::within("two-query composition = substitution", m.err, TOL, m.witness));
    out
}

pub fn suite(s: Suite) -> Vec<Check> {
    match s {
        Suite::Identities => identities(),
        Suite::Circuits => circuits(),
        Suite::Growth => growth(),
        Suite::All => {
            let mut v = identities();
            v.extend(circuits());
            v.extend(growth());
            v
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    suite: Suite,
    passed: usize,
    failed: usize,
    checks: &'a [Check],
}

pub fn run(args: &VerifyArgs, globals: &Globals) -> anyhow::Result<Report> {
    let checks = suite(args.suite);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let body = match globals.format {
        None => checks.iter().map(|c| c.line() + "\n").collect(),
        Some(Format::Json) => output::to_json(&VerifyReport {
            suite: args.suite,
            passed: checks.len() - failed,
            failed,
            checks: &checks,
        })?,
        Some(Format::Csv) => output::csv(
            &["check", "status", "detail"],
            &checks
                .iter()
                .map(|c| {
                    vec![
                        format!("\"{}\"", c.name),
                        if c.pass { "PASS" } else { "FAIL" }.to_string(),
                        format!("\"{}\"", c.detail),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("failed: {}", c.line());
    }
    Ok(Report {
        body,
        ok: failed == 0,
    })
}
