//! Exact combinatorics behind the walk spectrum.
//!
//! Every count here (binomials, weight characteristics, Kravchuk coefficients)
//! is computed with arbitrary-precision integers. Floating point only enters in
//! [`eigenphase`], where the exact rational `1 - 2d/m` is rounded once.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Parity of `C(n, k)` by Lucas' theorem: odd iff the bits of `k` are a subset of those of `n`.
pub fn binom_is_odd(n: u64, k: u64) -> bool {
    k <= n && (k & !n) == 0
}

/// Parameters `(n, s)` of the walk on `Cay(Z_2^n, {e : |e| = s})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkSpec {
    n: usize,
    s: usize,
    m: BigUint,
}

impl WalkSpec {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if s == 0 || s >= n {
            return Err(Error::InvalidSpec { n, s });
        }
        Ok(WalkSpec {
            n,
            s,
            m: binom(n as u64, s as i64),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Degree of the graph, `C(n, s)`.
    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn m_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn m_u64(&self) -> Option<u64> {
        self.m.to_u64()
    }

    /// `m s / n = C(n-1, s-1)`, the weight characteristic of a single coordinate.
    pub fn unit_characteristic(&self) -> BigUint {
        binom(self.n as u64 - 1, self.s as i64 - 1)
    }

    /// Whether `C(n-1, s-1)` is odd, i.e. `ms/n = 1 (mod 2)`.
    pub fn unit_characteristic_is_odd(&self) -> bool {
        binom_is_odd(self.n as u64 - 1, self.s as u64 - 1)
    }

    pub fn spectral_table(&self) -> SpectralTable {
        SpectralTable::new(self)
    }
}

/// Number of weight-`s` generators with odd overlap against a fixed weight-`k` vertex.
///
/// `d_k = sum over odd l of C(k, l) C(n-k, s-l)`.
pub fn weight_characteristic(spec: &WalkSpec, k: usize) -> BigUint {
    assert!(k <= spec.n, "weight {k} exceeds n={}", spec.n);
    let (n, s) = (spec.n as u64, spec.s as i64);
    let k64 = k as u64;
    (1..=s)
        .step_by(2)
        .map(|l| binom(k64, l) * binom(n - k64, s - l))
        .sum()
}

/// Kravchuk coefficient `phi_{k,n}(s) = sum_l (-1)^l C(k, l) C(n-k, s-l)`.
pub fn kravchuk(n: usize, k: usize, s: usize) -> BigInt {
    assert!(k <= n && s <= n, "kravchuk({n}, {k}, {s}) out of range");
    let (n, k) = (n as u64, k as u64);
    let mut acc = BigInt::zero();
    for l in 0..=s as i64 {
        let term = BigInt::from(binom(k, l) * binom(n - k, s as i64 - l));
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Coefficients of `(1 - x)^k (1 + x)^(n-k)`, lowest degree first.
///
/// Entry `s` is `phi_{k,n}(s)`; computed by repeated multiplication so it shares
/// nothing with [`kravchuk`].
pub fn kravchuk_via_generating_function(n: usize, k: usize) -> Vec<BigInt> {
    assert!(k <= n, "k={k} exceeds n={n}");
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::one();
    for factor in 0..n {
        let sign_minus = factor < k;
        // multiply in place by (1 +/- x); `factor + 1` is the new degree
        for j in (1..=factor + 1).rev() {
            let lower = poly[j - 1].clone();
            if sign_minus {
                poly[j] -= lower;
            } else {
                poly[j] += lower;
            }
        }
    }
    poly
}

/// `d_k mod 2` without evaluating `d_k`: zero for even `k`, `C(n-1, s-1) mod 2` for odd `k`.
pub fn d_parity(spec: &WalkSpec, k: usize) -> u8 {
    assert!(k <= spec.n, "weight {k} exceeds n={}", spec.n);
    if k % 2 == 0 {
        0
    } else {
        spec.unit_characteristic_is_odd() as u8
    }
}

/// Eigenphase `omega_k` of the non-trivial coin eigenvalue for weight class `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenphase {
    /// `1 - 2 d_k / m`, rounded once from the exact rational.
    pub cos_omega: f64,
    /// `arccos(cos_omega)` in `[0, pi]`.
    pub omega: f64,
}

pub fn eigenphase(spec: &WalkSpec, k: usize) -> Eigenphase {
    eigenphase_from_characteristic(spec.m(), &weight_characteristic(spec, k))
}

pub(crate) fn eigenphase_from_characteristic(m: &BigUint, d: &BigUint) -> Eigenphase {
    let m_int = BigInt::from(m.clone());
    let d_int = BigInt::from(d.clone());
    let cos = BigRational::new(&m_int - &d_int * 2u32, m_int.clone());
    // sin(omega) = 2 sqrt(d (m - d)) / m, so sin^2 is again an exact rational
    let sin_sq = BigRational::new(
        &d_int * (&m_int - &d_int) * 4u32,
        &m_int * &m_int,
    );
    let cos_omega = cos.to_f64().expect("finite rational");
    let sin_omega = sin_sq.to_f64().expect("finite rational").sqrt();
    Eigenphase {
        cos_omega,
        omega: sin_omega.atan2(cos_omega),
    }
}

/// Half-width parameter `delta = sqrt(2 f(n) / n)` of the central weight window.
pub fn window_delta(n: usize, f_of_n: f64) -> f64 {
    (2.0 * f_of_n / n as f64).sqrt()
}

/// Default window, `f(n) = ln n`.
pub fn default_delta(n: usize) -> f64 {
    window_delta(n, (n as f64).ln())
}

/// Whether `|k - n/2| <= (n/2) delta`.
pub fn in_window(n: usize, k: usize, delta: f64) -> bool {
    (2.0 * k as f64 - n as f64).abs() <= n as f64 * delta
}

/// Comparison of `|cos omega_k|` against the explicit central-window bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KravchukBound {
    pub delta: f64,
    /// `|cos omega_k|`.
    pub lhs: f64,
    /// `2 (1 - s/n)^(-s) (s+1)! delta^s`.
    pub rhs: f64,
    /// Same constant with the weaker exponent `delta^(s/2)`.
    pub rhs_half_exponent: f64,
}

impl KravchukBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn kravchuk_bound(spec: &WalkSpec, k: usize, f_of_n: f64) -> Result<KravchukBound> {
    let (n, s) = (spec.n, spec.s);
    let delta = window_delta(n, f_of_n);
    if k > n || !in_window(n, k, delta) {
        return Err(Error::OutsideWindow { n, k, delta });
    }
    let lhs = eigenphase(spec, k).cos_omega.abs();
    let factorial: f64 = (1..=s + 1).map(|i| i as f64).product();
    let constant = 2.0 * (1.0 - s as f64 / n as f64).powi(-(s as i32)) * factorial;
    Ok(KravchukBound {
        delta,
        lhs,
        rhs: constant * delta.powi(s as i32),
        rhs_half_exponent: constant * delta.powf(s as f64 / 2.0),
    })
}

/// Per-weight-class spectral data of one walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRow {
    pub k: usize,
    #[serde(serialize_with = "serialize_display")]
    pub d: BigUint,
    /// `m - 2 d_k`, equal to the Kravchuk coefficient `phi_{k,n}(s)`.
    #[serde(serialize_with = "serialize_display")]
    pub kravchuk: BigInt,
    pub cos_omega: f64,
    pub omega: f64,
    pub d_parity: u8,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn serialize_biguint<S: serde::Serializer>(
    value: &BigUint,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn serialize_biguints<S: serde::Serializer>(
    values: &[BigUint],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    spec: WalkSpec,
    rows: Vec<SpectralRow>,
}

impl SpectralTable {
    pub fn new(spec: &WalkSpec) -> Self {
        let m = BigInt::from(spec.m().clone());
        let rows = (0..=spec.n)
            .map(|k| {
                let d = weight_characteristic(spec, k);
                let phase = eigenphase_from_characteristic(spec.m(), &d);
                SpectralRow {
                    k,
                    kravchuk: &m - BigInt::from(d.clone()) * 2u32,
                    d_parity: d_parity(spec, k),
                    d,
                    cos_omega: phase.cos_omega,
                    omega: phase.omega,
                }
            })
            .collect();
        SpectralTable {
            spec: spec.clone(),
            rows,
        }
    }

    pub fn spec(&self) -> &WalkSpec {
        &self.spec
    }

    pub fn rows(&self) -> &[SpectralRow] {
        &self.rows
    }
}
