//! Walk measured at `0^n` from time `T0` on.
//!
//! After `T0` every step first projects out the origin, then applies the walk
//! operator. The mass removed at step `t` is `q_t = |Pi_0 psi_{t-1}|^2`, so
//! `q_{T0 + 1 + dt} = beta_dt^2` with `beta_dt` the origin overlap of the
//! measured state at time `T0 + dt`.

use serde::Serialize;

use crate::dense::{DenseState, GeneratingSet};
use crate::error::{Error, Result};
use crate::math::WalkSpec;
use crate::spectral::WalkSpectrum;

/// Largest `n` accepted by [`projective_simulation`].
pub const MAX_PROJECTIVE_N: usize = 12;

/// `alpha_t = <psi_0 | Q^t | psi_0>` for `t = 0..=t_max`.
pub fn alpha_series(spec: &WalkSpec, t_max: usize) -> Vec<f64> {
    let spectrum = WalkSpectrum::new(spec);
    (0..=t_max as u64).map(|t| spectrum.return_amplitude(t)).collect()
}

/// `beta_k = alpha_{T0+k} - sum_{j=1}^k beta_{k-j} alpha_j` for `k = 0..=dt_max`.
pub fn beta_recursion(alpha: &[f64], t0: usize, dt_max: usize) -> Result<Vec<f64>> {
    if alpha.len() <= t0 + dt_max {
        return Err(Error::InvalidArgument(format!(
            "alpha has {} terms, need {}",
            alpha.len(),
            t0 + dt_max + 1
        )));
    }
    let mut beta: Vec<f64> = Vec::with_capacity(dt_max + 1);
    for k in 0..=dt_max {
        let conv: f64 = (1..=k).map(|j| beta[k - j] * alpha[j]).sum();
        beta.push(alpha[t0 + k] - conv);
    }
    Ok(beta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredTrace {
    pub n: usize,
    pub s: usize,
    pub t0: usize,
    pub t_end: usize,
    /// Unmeasured return amplitudes, `t = 0..=t_end`.
    pub alpha: Vec<f64>,
    /// `beta_dt` for `dt = 0..t_end - t0`.
    pub beta: Vec<f64>,
    /// Stop probability per step, `t = 0..=t_end`.
    pub q: Vec<f64>,
    /// Running sum of `q`.
    pub p: Vec<f64>,
    /// `|psi_{t_end}|^2`, only known from the projective simulation.
    pub residual_norm_sqr: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: usize,
    pub alpha: f64,
    /// Present for `t0 <= t < t_end`.
    pub beta: Option<f64>,
    pub q: f64,
    pub p: f64,
}

impl MeasuredTrace {
    fn from_parts(spec: &WalkSpec, t0: usize, t_end: usize, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        let mut q = vec![0.0; t_end + 1];
        for (dt, b) in beta.iter().enumerate() {
            q[t0 + 1 + dt] = b * b;
        }
        let p = q
            .iter()
            .scan(0.0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        MeasuredTrace {
            n: spec.n(),
            s: spec.s(),
            t0,
            t_end,
            alpha,
            beta,
            q,
            p,
            residual_norm_sqr: None,
        }
    }

    pub fn stop_probability(&self) -> f64 {
        *self.p.last().expect("trace covers t = 0")
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        (0..=self.t_end)
            .map(|t| TraceRecord {
                t,
                alpha: self.alpha[t],
                beta: t.checked_sub(self.t0).and_then(|dt| self.beta.get(dt).copied()),
                q: self.q[t],
                p: self.p[t],
            })
            .collect()
    }
}

fn check_t0(t0: usize) -> Result<()> {
    if t0 % 2 != 0 {
        return Err(Error::Parity(format!("measurement start T0={t0} must be even")));
    }
    Ok(())
}

/// Trace from the spectral `alpha` and the convolution recursion; works for any `n`.
pub fn recursion_trace(spec: &WalkSpec, t0: usize, t_end: usize) -> Result<MeasuredTrace> {
    check_t0(t0)?;
    let alpha = alpha_series(spec, t_end);
    let beta = if t_end > t0 {
        beta_recursion(&alpha, t0, t_end - t0 - 1)?
    } else {
        Vec::new()
    };
    Ok(MeasuredTrace::from_parts(spec, t0, t_end, alpha, beta))
}

/// Trace from dense evolution with the origin projected out before every step past `T0`.
pub fn projective_simulation(spec: &WalkSpec, t0: usize, t_end: usize) -> Result<MeasuredTrace> {
    check_t0(t0)?;
    if spec.n() > MAX_PROJECTIVE_N {
        return Err(Error::TooLarge {
            what: "n",
            value: spec.n(),
            limit: MAX_PROJECTIVE_N,
        });
    }
    let genset = GeneratingSet::from_spec(spec)?;
    let mut free = DenseState::symmetric_start(&genset)?;
    let mut measured = free.clone();
    let mut alpha = Vec::with_capacity(t_end + 1);
    let mut beta = Vec::new();
    for t in 0..=t_end {
        alpha.push(free.origin_overlap().re);
        if t >= t0 && t < t_end {
            beta.push(measured.origin_overlap().re);
            measured.project_out(0);
        }
        if t < t_end {
            free.step();
            measured.step();
        }
    }
    let mut trace = MeasuredTrace::from_parts(spec, t0, t_end, alpha, beta);
    trace.residual_norm_sqr = Some(measured.norm_sqr());
    Ok(trace)
}

/// Largest deviation from `alpha_{T0+2t-2} = sum_{j=0}^{t-1} beta_{2(t-j-1)} alpha_{2j}` over the trace.
pub fn alpha_identity_residual(trace: &MeasuredTrace) -> f64 {
    let mut worst = 0.0f64;
    for t in 1.. {
        let idx = trace.t0 + 2 * t - 2;
        if 2 * t - 2 >= trace.beta.len() || idx > trace.t_end {
            break;
        }
        let rhs: f64 = (0..t).map(|j| trace.beta[2 * (t - j - 1)] * trace.alpha[2 * j]).sum();
        worst = worst.max((trace.alpha[idx] - rhs).abs());
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionReport {
    pub n: usize,
    pub s: usize,
    pub t0: usize,
    pub t_p: usize,
    pub t_end: usize,
    pub epsilon: f64,
    pub p_t: f64,
    /// `n / (epsilon (T - T_p)^2)`.
    pub reference: f64,
    pub c: f64,
    /// `p_t / reference`.
    pub ratio: f64,
    /// `p_t >= c * reference`.
    pub satisfied: bool,
}

/// Compares the stop probability at `T` with `c n / (epsilon (T - T_p)^2)`, `epsilon = T_p - T/2`.
pub fn absorption_bound_check(spec: &WalkSpec, t0: usize, t_p: usize, t_end: usize, c: f64) -> Result<AbsorptionReport> {
    if spec.s() % 2 == 0 {
        return Err(Error::Parity(format!("absorbing return needs odd s, got s={}", spec.s())));
    }
    if t0 > t_p || t_p >= t_end {
        return Err(Error::InvalidArgument(format!(
            "need T0 <= T_p < T, got T0={t0}, T_p={t_p}, T={t_end}"
        )));
    }
    let epsilon = t_p as f64 - t_end as f64 / 2.0;
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("need T_p > T/2, got T_p={t_p}, T={t_end}")));
    }
    let trace = recursion_trace(spec, t0, t_end)?;
    let p_t = trace.stop_probability();
    let gap = (t_end - t_p) as f64;
    let reference = spec.n() as f64 / (epsilon * gap * gap);
    Ok(AbsorptionReport {
        n: spec.n(),
        s: spec.s(),
        t0,
        t_p,
        t_end,
        epsilon,
        p_t,
        reference,
        c,
        ratio: p_t / reference,
        satisfied: p_t >= c * reference,
    })
}
