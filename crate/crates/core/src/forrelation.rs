//! Forrelation of function pairs and the function-table file format.
//!
//! `Φ(f, g) = 2^{-3n/2} Σ_{x,y} (-1)^{x·y} f(x) g(y)`. The fast path uses one
//! transform: `Φ = 2^{-n} Σ_x f(x) ĝ(x)`.

use std::fmt;
use std::fs;
use std::path::Path;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::cube::{self, WeightParity};
use crate::rng;
use crate::{Error, Result};

/// Largest `n` accepted by the `O(4ⁿ)` oracles.
pub const NAIVE_MAX_N: usize = 13;

/// A function `{0,1}ⁿ → {−1, +1}` stored as its value table in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<i8>,
}

impl BooleanFunction {
    pub fn from_table(table: Vec<i8>) -> Result<Self> {
        let n = cube::log2_len(table.len())?;
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a function table needs at least two entries".into(),
            ));
        }
        if let Some(pos) = table.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidArgument(format!(
                "entry {pos} is {}, expected ±1",
                table[pos]
            )));
        }
        Ok(Self { n, table })
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::from_table(vec![value; 1usize << n])
    }

    /// `(-1)^{|x|}`.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| if x.count_ones() % 2 == 0 { 1 } else { -1 })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> i8) -> Result<Self> {
        Self::from_table((0..1u64 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn value(&self, x: u64) -> i8 {
        self.table[x as usize]
    }

    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            table: self.table.iter().map(|v| -v).collect(),
        }
    }

    /// Pointwise product with `(-1)^{|x|}`.
    pub fn times_parity(&self) -> Self {
        Self {
            n: self.n,
            table: self
                .table
                .iter()
                .enumerate()
                .map(|(x, &v)| if x.count_ones() % 2 == 0 { v } else { -v })
                .collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.table.iter().map(|&v| v as f64).collect()
    }

    /// Textual encoding, one `+`/`-` per entry.
    pub fn to_sign_string(&self) -> String {
        self.table
            .iter()
            .map(|&v| if v > 0 { '+' } else { '-' })
            .collect()
    }

    /// `0x` + hex digits, four entries per digit, first entry in the top bit,
    /// bit set for `+1`. Needs `n ≥ 2`.
    pub fn to_hex_string(&self) -> Result<String> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(
                "hex encoding needs at least four entries".into(),
            ));
        }
        let mut s = String::with_capacity(2 + self.table.len() / 4);
        s.push_str("0x");
        for quad in self.table.chunks(4) {
            let nibble = quad
                .iter()
                .fold(0u32, |acc, &v| (acc << 1) | u32::from(v > 0));
            s.push(char::from_digit(nibble, 16).expect("nibble < 16"));
        }
        Ok(s)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sign_string())
    }
}

impl std::str::FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_function(s)
    }
}

/// Where a pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSource {
    Uniform,
    Forrelated,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionPair {
    pub f: BooleanFunction,
    pub g: BooleanFunction,
    pub label: PairSource,
}

impl FunctionPair {
    pub fn new(f: BooleanFunction, g: BooleanFunction, label: PairSource) -> Result<Self> {
        same_n(&f, &g)?;
        Ok(Self { f, g, label })
    }

    pub fn n(&self) -> usize {
        self.f.n
    }
}

fn same_n(f: &BooleanFunction, g: &BooleanFunction) -> Result<()> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    Ok(())
}

/// `Φ(f, g)` via one transform of `g`.
pub fn phi(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    same_n(f, g)?;
    let g_hat = cube::fwht_copy(&g.to_f64())?;
    Ok(dot_signs(f, &g_hat) / (1u64 << f.n) as f64)
}

fn dot_signs(f: &BooleanFunction, v: &[f64]) -> f64 {
    f.table.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum()
}

/// Literal `O(4ⁿ)` double sum; `n ≤ 13`.
pub fn phi_naive(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    phi_naive_restricted(f, g, WeightParity::All)
}

/// The double sum restricted to pairs with `|x + y|` of the given parity.
pub fn phi_naive_restricted(
    f: &BooleanFunction,
    g: &BooleanFunction,
    range: WeightParity,
) -> Result<f64> {
    same_n(f, g)?;
    if f.n > NAIVE_MAX_N {
        return Err(Error::GuardExceeded {
            what: "n for the O(4^n) oracle",
            value: f.n,
            limit: NAIVE_MAX_N,
        });
    }
    let size = 1u64 << f.n;
    let mut total: i64 = 0;
    for x in 0..size {
        let fx = f.value(x) as i64;
        let mut row: i64 = 0;
        for y in 0..size {
            if range.admits((x ^ y).count_ones() as usize) {
                row += cube::character(x, y) * g.value(y) as i64;
            }
        }
        total += fx * row;
    }
    Ok(total as f64 * (2f64).powf(-1.5 * f.n as f64))
}

/// `Φ`, `Φ_odd` and `Φ_even` of one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiComponents {
    pub phi: f64,
    pub phi_odd: f64,
    pub phi_even: f64,
}

/// Uses `(-1)^{|x+y|} = (-1)^{|x|}(-1)^{|y|}`: with `f′ = f·(-1)^{|·|}` and
/// `g′` likewise, `Φ_even = ½(Φ(f,g) + Φ(f′,g′))` and `Φ_odd = ½(Φ(f,g) − Φ(f′,g′))`.
pub fn phi_components(f: &BooleanFunction, g: &BooleanFunction) -> Result<PhiComponents> {
    let plain = phi(f, g)?;
    let twisted = phi(&f.times_parity(), &g.times_parity())?;
    Ok(PhiComponents {
        phi: plain,
        phi_odd: 0.5 * (plain - twisted),
        phi_even: 0.5 * (plain + twisted),
    })
}

pub fn phi_odd(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    Ok(phi_components(f, g)?.phi_odd)
}

pub fn phi_even(f: &BooleanFunction, g: &BooleanFunction) -> Result<f64> {
    Ok(phi_components(f, g)?.phi_even)
}

/// Appends one ignored variable as the new last (least significant) bit:
/// `f̄(x₁, …, xₙ₊₁) = f(x₁, …, xₙ)`.
pub fn pad(f: &BooleanFunction) -> BooleanFunction {
    BooleanFunction {
        n: f.n + 1,
        table: f.table.iter().flat_map(|&v| [v, v]).collect(),
    }
}

/// Independent fair ±1 entries; `f` is filled first, then `g`.
pub fn sample_uniform_pair<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<FunctionPair> {
    check_positive(n)?;
    let mut f = vec![0i8; 1 << n];
    let mut g = vec![0i8; 1 << n];
    rng::fill_signs(rng, &mut f);
    rng::fill_signs(rng, &mut g);
    FunctionPair::new(
        BooleanFunction::from_table(f)?,
        BooleanFunction::from_table(g)?,
        PairSource::Uniform,
    )
}

/// Stand-in for a strongly forrelated distribution: `u` has i.i.d. standard
/// normal entries, `f = sign(u)`, `g = sign(û)`, with `sign(0) = +1`.
///
/// Empirically `E[Φ²] ≈ 0.4` for `4 ≤ n ≤ 12`; the documented contract is
/// `E[Φ²] ≥ 0.1`. It only emulates high-Φ instances and carries no hardness.
pub fn sample_forrelated_pair<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<FunctionPair> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the forrelated sampler needs n >= 2, got {n}"
        )));
    }
    let mut u = vec![0.0; 1 << n];
    rng::fill_normals(rng, &mut u);
    let f = signs_of(&u);
    cube::fwht(&mut u)?;
    let g = signs_of(&u);
    FunctionPair::new(
        BooleanFunction::from_table(f)?,
        BooleanFunction::from_table(g)?,
        PairSource::Forrelated,
    )
}

fn signs_of(v: &[f64]) -> Vec<i8> {
    v.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect()
}

fn check_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// Parses the textual (`+`/`-`) or hex (`0x…`) table encoding. A single
/// trailing newline is allowed.
pub fn parse_function(text: &str) -> Result<BooleanFunction> {
    let body = text
        .strip_suffix("\r\n")
        .or_else(|| text.strip_suffix('\n'))
        .unwrap_or(text);
    if body.contains('\n') {
        return Err(Error::Parse {
            line: 2,
            column: 1,
            message: "unexpected content after the first line".into(),
        });
    }
    let table = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        parse_hex(hex)?
    } else {
        parse_signs(body)?
    };
    if !table.len().is_power_of_two() || table.len() < 2 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!(
                "table length {} is not a power of two (>= 2)",
                table.len()
            ),
        });
    }
    BooleanFunction::from_table(table)
}

fn parse_signs(body: &str) -> Result<Vec<i8>> {
    body.chars()
        .enumerate()
        .map(|(col, ch)| match ch {
            '+' => Ok(1),
            '-' | '\u{2212}' => Ok(-1),
            other => Err(Error::Parse {
                line: 1,
                column: col + 1,
                message: format!("expected '+' or '-', found {other:?}"),
            }),
        })
        .collect()
}

fn parse_hex(hex: &str) -> Result<Vec<i8>> {
    let mut table = Vec::with_capacity(hex.len() * 4);
    for (col, ch) in hex.chars().enumerate() {
        let nibble = ch.to_digit(16).ok_or_else(|| Error::Parse {
            line: 1,
            column: col + 3,
            message: format!("expected a hex digit, found {ch:?}"),
        })?;
        for shift in (0..4).rev() {
            table.push(if (nibble >> shift) & 1 == 1 { 1 } else { -1 });
        }
    }
    Ok(table)
}

pub fn read_function(path: impl AsRef<Path>) -> Result<BooleanFunction> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_function(&text)
}

/// Writes the textual encoding followed by a newline.
pub fn write_function(f: &BooleanFunction, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format!("{}\n", f.to_sign_string())).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(n: usize) -> BooleanFunction {
        BooleanFunction::constant(n, 1).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert!((phi(&c(1), &c(1)).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((phi(&c(3), &c(3)).unwrap() - 2f64.powf(-1.5)).abs() < 1e-12);
        let f: BooleanFunction = "+-".parse().unwrap();
        assert!((phi(&f, &c(1)).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((phi_naive(&f, &c(1)).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((phi_naive(&c(2), &c(2)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phi_rejects_mismatch() {
        assert_eq!(
            phi(&c(2), &c(3)),
            Err(Error::DimensionMismatch { left: 4, right: 8 })
        );
    }

    #[test]
    fn naive_guard() {
        assert!(matches!(
            phi_naive(&c(14), &c(14)),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn odd_even_examples() {
        let p3 = phi_components(&c(3), &c(3)).unwrap();
        assert!((p3.phi_odd - 2f64.powf(-1.5)).abs() < 1e-12);
        assert!(p3.phi_even.abs() < 1e-12);
        let p2 = phi_components(&c(2), &c(2)).unwrap();
        assert!((p2.phi_even - 0.5).abs() < 1e-12);
        assert!(p2.phi_odd.abs() < 1e-12);
    }

    #[test]
    fn pad_table_and_factor() {
        let f: BooleanFunction = "+-".parse().unwrap();
        assert_eq!(pad(&f).table(), &[1, 1, -1, -1]);
        let mut rng = CounterRng::new(5, 0);
        for n in [2, 4, 6] {
            for _ in 0..20 {
                let p = sample_uniform_pair(n, &mut rng).unwrap();
                let lhs = phi(&pad(&p.f), &pad(&p.g)).unwrap() * std::f64::consts::SQRT_2;
                assert!((lhs - phi(&p.f, &p.g).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_function("+-+-").unwrap().table(), &[1, -1, 1, -1]);
        assert_eq!(parse_function("++\n").unwrap().table(), &[1, 1]);
        assert!(matches!(parse_function("+++"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_function("+x"),
            Err(Error::Parse { column: 2, .. })
        ));
        assert!(matches!(
            parse_function("++\n++\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_function("").is_err());
        assert!(parse_function("+").is_err());
    }

    #[test]
    fn hex_encoding() {
        let f = parse_function("0xa5").unwrap();
        assert_eq!(f.to_sign_string(), "+-+--+-+");
        assert_eq!(f.to_hex_string().unwrap(), "0xa5");
        assert!(parse_function("0xg0").is_err());
        assert!(parse_function("+-").unwrap().to_hex_string().is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("forriqp-rt-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("f.txt");
        let mut rng = CounterRng::new(1, 1);
        let p = sample_uniform_pair(5, &mut rng).unwrap();
        write_function(&p.f, &path).unwrap();
        assert_eq!(read_function(&path).unwrap(), p.f);
        fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(read_function(dir.join("missing")), Err(Error::Io { .. })));
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = sample_uniform_pair(6, &mut CounterRng::new(11, 3)).unwrap();
        let b = sample_uniform_pair(6, &mut CounterRng::new(11, 3)).unwrap();
        assert_eq!(a, b);
        let a = sample_forrelated_pair(6, &mut CounterRng::new(11, 3)).unwrap();
        let b = sample_forrelated_pair(6, &mut CounterRng::new(11, 3)).unwrap();
        assert_eq!(a, b);
        assert!(sample_forrelated_pair(1, &mut CounterRng::new(0, 0)).is_err());
        assert!(sample_uniform_pair(0, &mut CounterRng::new(0, 0)).is_err());
    }
}
