//! Closed-form return and hit amplitudes.
//!
//! With the symmetric initial state at `0^n` the overlap with the start and the
//! antipode reduce to binomially weighted cosine sums over weight classes:
//!
//! ```text
//! A(t) = sum_k 2^-n C(n,k) cos(omega_k t)          (return)
//! H(t) = sum_k 2^-n (-1)^k C(n,k) cos(omega_k t)   (hit at 1^n)
//! ```

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{self, WalkSpec};

/// Largest `n` for which binomial weights are converted from exact rationals.
pub const EXACT_WEIGHT_LIMIT: usize = 64;

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `2^-n C(n,k)` for `k = 0..=n`.
pub fn binomial_weights(n: usize) -> Vec<f64> {
    if n <= EXACT_WEIGHT_LIMIT {
        let denom = BigUint::one() << n;
        (0..=n)
            .map(|k| {
                let num = math::binom(n as u64, k as i64);
                BigRational::new(num.into(), denom.clone().into())
                    .to_f64()
                    .expect("weight is finite")
            })
            .collect()
    } else {
        // log C(n,k) by the multiplicative recurrence; terms far in the tails underflow to 0
        let base = -(n as f64) * std::f64::consts::LN_2;
        let mut log_c = 0.0f64;
        let mut out = Vec::with_capacity(n + 1);
        out.push(base.exp());
        for k in 1..=n {
            log_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
            out.push((log_c + base).exp());
        }
        out
    }
}

/// Target vertex of a probability query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Target {
    Origin,
    Antipode,
}

/// Precomputed weights and eigenphases for repeated amplitude evaluation.
#[derive(Debug, Clone)]
pub struct WalkSpectrum {
    spec: WalkSpec,
    weights: Vec<f64>,
    omegas: Vec<f64>,
}

impl WalkSpectrum {
    pub fn new(spec: &WalkSpec) -> Self {
        let omegas = spec.spectral_table().rows().iter().map(|r| r.omega).collect();
        WalkSpectrum {
            spec: spec.clone(),
            weights: binomial_weights(spec.n()),
            omegas,
        }
    }

    pub fn spec(&self) -> &WalkSpec {
        &self.spec
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn amplitude(&self, target: Target, t: u64) -> f64 {
        let t = t as f64;
        self.weights
            .iter()
            .zip(&self.omegas)
            .enumerate()
            .map(|(k, (w, omega))| {
                let term = w * (omega * t).cos();
                match target {
                    Target::Antipode if k % 2 == 1 => -term,
                    _ => term,
                }
            })
            .collect::<CompensatedSum>()
            .value()
    }

    /// `<psi_0 | Q^t | psi_0>`.
    pub fn return_amplitude(&self, t: u64) -> f64 {
        self.amplitude(Target::Origin, t)
    }

    /// `<Psi, 1^n | Q^t | psi_0>`.
    pub fn hit_amplitude(&self, t: u64) -> f64 {
        self.amplitude(Target::Antipode, t)
    }

    pub fn probability(&self, target: Target, t: u64) -> f64 {
        self.amplitude(target, t).powi(2)
    }

    pub fn curve(&self, times: impl IntoIterator<Item = u64>) -> Vec<CurvePoint> {
        times
            .into_iter()
            .map(|t| CurvePoint {
                t,
                return_prob: self.probability(Target::Origin, t),
                hit_prob: self.probability(Target::Antipode, t),
            })
            .collect()
    }
}

pub fn return_amplitude(spec: &WalkSpec, t: u64) -> f64 {
    WalkSpectrum::new(spec).return_amplitude(t)
}

pub fn hit_amplitude(spec: &WalkSpec, t: u64) -> f64 {
    WalkSpectrum::new(spec).hit_amplitude(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: u64,
    pub return_prob: f64,
    pub hit_prob: f64,
}

pub fn probability_curve(spec: &WalkSpec, times: RangeInclusive<u64>) -> Result<Vec<CurvePoint>> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time range".into()));
    }
    Ok(WalkSpectrum::new(spec).curve(times))
}

/// Which of the three return/hit schedules a prediction follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TimeKind {
    /// Return near `pi m`.
    ReturnAtPiM,
    /// Return near `(pi/2) m`; requires `C(n-1, s-1)` even.
    ReturnAtHalfPiM,
    /// Hit `1^n` near `(pi/2) m`; requires `C(n-1, s-1)` odd.
    HitAtHalfPiM,
}

impl TimeKind {
    pub fn multiplier(self) -> f64 {
        match self {
            TimeKind::ReturnAtPiM => PI,
            TimeKind::ReturnAtHalfPiM | TimeKind::HitAtHalfPiM => PI / 2.0,
        }
    }

    pub fn target(self) -> Target {
        match self {
            TimeKind::HitAtHalfPiM => Target::Antipode,
            _ => Target::Origin,
        }
    }
}

pub const DEFAULT_BETA: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimePrediction {
    pub n: usize,
    pub s: usize,
    /// Predicted step count.
    pub t: u64,
    /// Offset `round(n^(beta s))` added to `round(c m)`.
    pub epsilon: u64,
    pub beta: f64,
    pub kind: TimeKind,
    /// `2 | (t - m)`.
    pub parity_ok: bool,
    /// Side condition `s! <= n^(s/8)`.
    pub size_condition: bool,
}

/// Step count `round(c m) + epsilon`, bumped by one when it has the wrong parity.
///
/// Near `(pi/2) m` the congruence is `t = m (mod 2)`. Near `pi m` the phases
/// `omega_k t` collapse onto `(pi/2)(t - 2m)`, so the step count must be even;
/// the two rules agree whenever `m` is even.
pub fn schedule_time(spec: &WalkSpec, kind: TimeKind, epsilon: u64) -> Result<u64> {
    let m = spec.m_u64().filter(|&m| m < (1u64 << 52)).ok_or(Error::TooLarge {
        what: "m",
        value: usize::MAX,
        limit: 1 << 52,
    })?;
    let base = (kind.multiplier() * m as f64).round() as u64 + epsilon;
    let reference = match kind {
        TimeKind::ReturnAtPiM => 0,
        _ => m,
    };
    Ok(if (base + reference) % 2 == 0 { base } else { base + 1 })
}

pub fn size_condition(n: usize, s: usize) -> bool {
    let log_fact: f64 = (1..=s).map(|i| (i as f64).ln()).sum();
    log_fact <= s as f64 / 8.0 * (n as f64).ln()
}

pub fn predict_time(spec: &WalkSpec, kind: TimeKind, beta: f64) -> Result<TimePrediction> {
    if !(beta > 0.25 && beta < 0.5) {
        return Err(Error::Beta(beta));
    }
    let odd = spec.unit_characteristic_is_odd();
    match kind {
        TimeKind::HitAtHalfPiM if !odd => {
            return Err(Error::Parity(format!(
                "hitting needs C(n-1, s-1) = 1 (mod 2), but C({}, {}) is even",
                spec.n() - 1,
                spec.s() - 1
            )))
        }
        TimeKind::ReturnAtHalfPiM if odd => {
            return Err(Error::Parity(format!(
                "returning at (pi/2)m needs C(n-1, s-1) = 0 (mod 2), but C({}, {}) is odd",
                spec.n() - 1,
                spec.s() - 1
            )))
        }
        _ => {}
    }
    let epsilon = (spec.n() as f64).powf(beta * spec.s() as f64).round() as u64;
    let t = schedule_time(spec, kind, epsilon)?;
    let m = spec.m_u64().expect("checked by schedule_time");
    Ok(TimePrediction {
        n: spec.n(),
        s: spec.s(),
        t,
        epsilon,
        beta,
        kind,
        parity_ok: (t + m) % 2 == 0,
        size_condition: size_condition(spec.n(), spec.s()),
    })
}
