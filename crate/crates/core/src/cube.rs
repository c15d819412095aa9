//! Boolean-cube primitives.
//!
//! Points of `{0,1}ⁿ` are encoded as integers in `[0, 2ⁿ)` with `x₁` the most
//! significant bit, so `"110"` is index 6. Everything in this module is either
//! symmetric under coordinate permutations or only uses the encoding for I/O.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::{Error, Result};

/// A point of `{0,1}ⁿ`, `1 ≤ n ≤ 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    index: u64,
}

impl BitString {
    pub fn new(n: usize, index: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!(
                "bit-string dimension must be in 1..=64, got {n}"
            )));
        }
        if n < 64 && index >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "index {index} does not fit in {n} bits"
            )));
        }
        Ok(Self { n, index })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, low_mask(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Bit `xᵢ` for `i ∈ 1..=n`.
    pub fn bit(&self, i: usize) -> u8 {
        assert!((1..=self.n).contains(&i), "bit position {i} out of 1..={}", self.n);
        ((self.index >> (self.n - i)) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.n).map(move |i| self.bit(i))
    }

    /// `x + y` over GF(2).
    pub fn xor(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            n: self.n,
            index: self.index ^ other.index,
        })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut index = 0u64;
        for (col, ch) in s.chars().enumerate() {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: col + 1,
                        message: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            };
            if col >= 64 {
                return Err(Error::InvalidArgument("bit strings longer than 64".into()));
            }
            index = (index << 1) | bit;
        }
        Self::new(s.chars().count(), index)
    }
}

fn same_dim(x: &BitString, y: &BitString) -> Result<()> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch {
            left: x.n,
            right: y.n,
        });
    }
    Ok(())
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `|x|`.
pub fn hamming_weight(x: BitString) -> usize {
    x.index.count_ones() as usize
}

/// `x · y = Σ xᵢyᵢ mod 2`.
pub fn inner_gf2(x: BitString, y: BitString) -> Result<u8> {
    same_dim(&x, &y)?;
    Ok(parity(x.index & y.index))
}

/// Parity of the popcount of a raw index.
#[inline]
pub fn parity(v: u64) -> u8 {
    (v.count_ones() & 1) as u8
}

/// `(-1)^(x·y)` on raw indices.
#[inline]
pub fn character(x: u64, y: u64) -> i64 {
    1 - 2 * parity(x & y) as i64
}

/// `Q(x) = Σ_{i<j} xᵢxⱼ mod 2`, evaluated as `C(|x|, 2) mod 2`.
pub fn q_value(x: BitString) -> u8 {
    q_of_weight(hamming_weight(x))
}

#[inline]
pub fn q_of_weight(w: usize) -> u8 {
    ((w * w.saturating_sub(1) / 2) & 1) as u8
}

/// `(-1)^Q` as a ±1 table of length `2ⁿ`.
pub fn q_sign_table(n: usize) -> Vec<i8> {
    let by_weight: Vec<i8> = (0..=n).map(|w| 1 - 2 * q_of_weight(w) as i8).collect();
    weight_table(n, &by_weight)
}

/// Expands a per-weight lookup of length `n + 1` into a length-`2ⁿ` table.
pub fn weight_table<T: Copy>(n: usize, by_weight: &[T]) -> Vec<T> {
    assert_eq!(by_weight.len(), n + 1);
    (0..1u64 << n)
        .map(|i| by_weight[i.count_ones() as usize])
        .collect()
}

/// Which Hamming weights a sum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightParity {
    All,
    Even,
    Odd,
}

impl WeightParity {
    #[inline]
    pub fn admits(self, weight: usize) -> bool {
        match self {
            WeightParity::All => true,
            WeightParity::Even => weight % 2 == 0,
            WeightParity::Odd => weight % 2 == 1,
        }
    }
}

/// `Σ_y (-1)^(x·y)` over `y` of the given weight parity, by enumeration.
pub fn character_sum(x: BitString, range: WeightParity) -> i64 {
    (0..1u64 << x.n)
        .filter(|y| range.admits(y.count_ones() as usize))
        .map(|y| character(x.index, y))
        .sum()
}

/// The case table for [`character_sum`]: `2ⁿ·[x = 0]` over all `y`;
/// `2ⁿ⁻¹·[x ∈ {0ⁿ,1ⁿ}]` over even `y`; `±2ⁿ⁻¹` at `0ⁿ`/`1ⁿ` over odd `y`.
pub fn character_sum_closed_form(x: BitString, range: WeightParity) -> i64 {
    let n = x.n as u32;
    let half = 1i64 << (n - 1);
    let is_zero = x.index == 0;
    let is_ones = x.index == low_mask(x.n);
    match range {
        WeightParity::All => {
            if is_zero {
                1i64 << n
            } else {
                0
            }
        }
        WeightParity::Even => {
            if is_zero || is_ones {
                half
            } else {
                0
            }
        }
        WeightParity::Odd => {
            if is_zero {
                half
            } else if is_ones {
                -half
            } else {
                0
            }
        }
    }
}

/// Element types the butterfly can act on.
pub trait Butterfly:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}

impl<T> Butterfly for T where
    T: Copy + Send + Sync + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>
{
}

/// `log₂ len`, or an error if `len` is not a power of two.
pub fn log2_len(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len });
    }
    Ok(len.trailing_zeros() as usize)
}

/// In-place normalised Walsh–Hadamard transform
/// `v̂(x) = 2^{-n/2} Σ_y (-1)^{x·y} v(y)`.
///
/// Each stage multiplies by `1/√2`, so the transform is an involution and an
/// isometry up to rounding. Dispatches to [`fwht_parallel`] when the `parallel`
/// feature is on; both paths give bit-identical output.
pub fn fwht<T: Butterfly>(v: &mut [T]) -> Result<()> {
    #[cfg(feature = "parallel")]
    {
        fwht_parallel(v)
    }
    #[cfg(not(feature = "parallel"))]
    {
        fwht_serial(v)
    }
}

/// Out-of-place convenience wrapper around [`fwht`].
pub fn fwht_copy<T: Butterfly>(v: &[T]) -> Result<Vec<T>> {
    let mut out = v.to_vec();
    fwht(&mut out)?;
    Ok(out)
}

pub fn fwht_serial<T: Butterfly>(v: &mut [T]) -> Result<()> {
    log2_len(v.len())?;
    low_stages(v, v.len());
    Ok(())
}

/// Applies the stages with half-width `1, 2, …, width/2` inside each aligned block
/// of `width` entries.
fn low_stages<T: Butterfly>(v: &mut [T], width: usize) {
    let mut half = 1;
    while half < width {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            butterfly(lo, hi);
        }
        half *= 2;
    }
}

#[inline]
fn butterfly<T: Butterfly>(lo: &mut [T], hi: &mut [T]) {
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = (x + y) * FRAC_1_SQRT_2;
        *b = (x - y) * FRAC_1_SQRT_2;
    }
}

#[cfg(feature = "parallel")]
const PAR_CHUNK: usize = 1 << 12;

/// Cache-blocked parallel transform: all stages narrower than a chunk run inside
/// independent chunks, the wide stages split each block across threads.
#[cfg(feature = "parallel")]
pub fn fwht_parallel<T: Butterfly>(v: &mut [T]) -> Result<()> {
    use rayon::prelude::*;

    log2_len(v.len())?;
    let len = v.len();
    if len <= PAR_CHUNK {
        low_stages(v, len);
        return Ok(());
    }
    v.par_chunks_mut(PAR_CHUNK)
        .for_each(|chunk| low_stages(chunk, PAR_CHUNK));
    let mut half = PAR_CHUNK;
    while half < len {
        v.par_chunks_mut(2 * half).for_each(|block| {
            let (lo, hi) = block.split_at_mut(half);
            lo.par_chunks_mut(PAR_CHUNK)
                .zip(hi.par_chunks_mut(PAR_CHUNK))
                .for_each(|(a, b)| butterfly(a, b));
        });
        half *= 2;
    }
    Ok(())
}

/// `σ_odd(x) = √2·(-1)^{Q(x)}` for odd `|x|`, else 0.
pub fn sigma_odd(x: BitString) -> f64 {
    sigma_of_weight(hamming_weight(x), WeightParity::Odd)
}

/// `σ_even(x) = √2·(-1)^{Q(x)}` for even `|x|`, else 0.
pub fn sigma_even(x: BitString) -> f64 {
    sigma_of_weight(hamming_weight(x), WeightParity::Even)
}

fn sigma_of_weight(w: usize, support: WeightParity) -> f64 {
    if support.admits(w) {
        SQRT_2 * (1.0 - 2.0 * q_of_weight(w) as f64)
    } else {
        0.0
    }
}

pub fn sigma_odd_table(n: usize) -> Vec<f64> {
    sigma_table(n, WeightParity::Odd)
}

pub fn sigma_even_table(n: usize) -> Vec<f64> {
    sigma_table(n, WeightParity::Even)
}

fn sigma_table(n: usize, support: WeightParity) -> Vec<f64> {
    let by_weight: Vec<f64> = (0..=n).map(|w| sigma_of_weight(w, support)).collect();
    weight_table(n, &by_weight)
}

// √2·sin(kπ/4) and √2·cos(kπ/4) for k = 0..8, exact.
const SQRT2_SIN_EIGHTHS: [f64; 8] = [0.0, 1.0, SQRT_2, 1.0, 0.0, -1.0, -SQRT_2, -1.0];
const SQRT2_COS_EIGHTHS: [f64; 8] = [SQRT_2, 1.0, 0.0, -1.0, -SQRT_2, -1.0, 0.0, 1.0];

fn eighth_turn(weight: usize, n: usize) -> Result<usize> {
    if weight > n {
        return Err(Error::WeightOutOfRange { weight, n });
    }
    Ok((n as i64 - 2 * weight as i64).rem_euclid(8) as usize)
}

/// `√2·sin(π/4·(n − 2|x|))`, the transform of the σ_odd table.
pub fn sigma_hat_odd(weight: usize, n: usize) -> Result<f64> {
    Ok(SQRT2_SIN_EIGHTHS[eighth_turn(weight, n)?])
}

/// `√2·cos(π/4·(n − 2|x|))`, the transform of the σ_even table.
pub fn sigma_hat_even(weight: usize, n: usize) -> Result<f64> {
    Ok(SQRT2_COS_EIGHTHS[eighth_turn(weight, n)?])
}

pub fn sigma_hat_odd_table(n: usize) -> Vec<f64> {
    let by_weight: Vec<f64> = (0..=n)
        .map(|w| sigma_hat_odd(w, n).expect("weight in range"))
        .collect();
    weight_table(n, &by_weight)
}

pub fn sigma_hat_even_table(n: usize) -> Vec<f64> {
    let by_weight: Vec<f64> = (0..=n)
        .map(|w| sigma_hat_even(w, n).expect("weight in range"))
        .collect();
    weight_table(n, &by_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_weight(bs("000")), 0);
        assert_eq!(hamming_weight(bs("110")), 2);
        assert_eq!(hamming_weight(bs("1111")), 4);
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_gf2(bs("101"), bs("100")).unwrap(), 1);
        assert_eq!(inner_gf2(bs("111"), bs("000")).unwrap(), 0);
        assert_eq!(inner_gf2(bs("111"), bs("110")).unwrap(), 0);
        assert_eq!(
            inner_gf2(bs("11"), bs("110")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn msb_first_encoding() {
        let x = bs("110");
        assert_eq!(x.index(), 6);
        assert_eq!(x.bit(1), 1);
        assert_eq!(x.bit(3), 0);
        assert_eq!(x.to_string(), "110");
        for i in 0..16 {
            let x = BitString::new(4, i).unwrap();
            assert_eq!(x.to_string().parse::<BitString>().unwrap().index(), i);
        }
        assert!(BitString::new(3, 8).is_err());
        assert!(BitString::new(0, 0).is_err());
        assert!("10a".parse::<BitString>().is_err());
    }

    #[test]
    fn fwht_examples() {
        let mut v = vec![1.0, 1.0];
        fwht(&mut v).unwrap();
        assert!(close(v[0], SQRT_2) && close(v[1], 0.0));

        let mut v = vec![1.0, -1.0];
        fwht(&mut v).unwrap();
        assert!(close(v[0], 0.0) && close(v[1], SQRT_2));

        // direct: entry x = ½ Σ_y (-1)^{x·y} v_y
        let mut v = vec![1.0, 1.0, 1.0, -1.0];
        fwht(&mut v).unwrap();
        for (got, want) in v.iter().zip([1.0, 1.0, 1.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        assert_eq!(
            fwht(&mut vec![1.0; 3]),
            Err(Error::NotPowerOfTwo { len: 3 })
        );
    }

    #[test]
    fn fwht_complex_matches_real_parts() {
        let re: Vec<f64> = (0..64).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let im: Vec<f64> = (0..64).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        let mut z: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let (mut r, mut i) = (re.clone(), im.clone());
        fwht(&mut z).unwrap();
        fwht(&mut r).unwrap();
        fwht(&mut i).unwrap();
        for k in 0..64 {
            assert_eq!(z[k].re, r[k]);
            assert_eq!(z[k].im, i[k]);
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_is_bit_identical() {
        let len = 1 << 16;
        let v: Vec<f64> = (0..len).map(|i| ((i as f64) * 0.618).sin()).collect();
        let mut a = v.clone();
        let mut b = v;
        fwht_serial(&mut a).unwrap();
        fwht_parallel(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_value(bs("110")), 1);
        assert_eq!(q_value(bs("0000")), 0);
        assert_eq!(q_value(bs("1110")), 1);
        assert_eq!(q_value(bs("1111")), 0);
    }

    #[test]
    fn sigma_examples() {
        assert!(close(sigma_odd(bs("100")), SQRT_2));
        assert_eq!(sigma_odd(bs("110")), 0.0);
        assert!(close(sigma_even(bs("110")), -SQRT_2));
        assert!(close(sigma_even(bs("000")), SQRT_2));
    }

    #[test]
    fn sigma_hat_examples() {
        assert!(close(sigma_hat_odd(0, 3).unwrap(), 1.0));
        assert!(close(sigma_hat_odd(2, 3).unwrap(), -1.0));
        assert!(close(sigma_hat_odd(1, 2).unwrap(), 0.0));
        assert_eq!(
            sigma_hat_even(4, 3),
            Err(Error::WeightOutOfRange { weight: 4, n: 3 })
        );
    }

    #[test]
    fn closed_forms_agree_with_trig() {
        for n in 0..20usize {
            for w in 0..=n {
                let t = std::f64::consts::FRAC_PI_4 * (n as f64 - 2.0 * w as f64);
                assert!((sigma_hat_odd(w, n).unwrap() - SQRT_2 * t.sin()).abs() < 1e-12);
                assert!((sigma_hat_even(w, n).unwrap() - SQRT_2 * t.cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn character_sum_tables_small() {
        for n in 1..=6 {
            for i in 0..1u64 << n {
                let x = BitString::new(n, i).unwrap();
                for r in [WeightParity::All, WeightParity::Even, WeightParity::Odd] {
                    assert_eq!(character_sum(x, r), character_sum_closed_form(x, r), "n={n} x={x} {r:?}");
                }
            }
        }
    }
}
