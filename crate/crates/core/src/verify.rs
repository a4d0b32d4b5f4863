//! Named invariant sweeps, each comparing a closed form with exhaustive enumeration.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::dense::{self, DenseState, GeneratingSet};
use crate::error::{Error, Result};
use crate::layers;
use crate::math::{self, WalkSpec};
use crate::measured;
use crate::spectral::WalkSpectrum;

pub const SUITES: &[&str] = &[
    "kravchuk-identity",
    "parity",
    "kravchuk-bound",
    "spectral-vs-dense",
    "unitarity",
    "layers",
    "common-layers",
    "connectivity",
    "code-weights",
    "coin-spectrum",
    "measured",
];

const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n_max: usize,
    pub checks: u64,
    pub failed: u64,
    /// The first few counterexamples.
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: &str, n_max: usize) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            n_max,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(Failure {
                    case: case(),
                    detail: detail(),
                });
            }
        }
    }
}

/// Default size cap used when none is given.
pub fn default_cap(suite: &str) -> Option<usize> {
    Some(match suite {
        "kravchuk-identity" | "parity" => 40,
        "kravchuk-bound" => 400,
        "spectral-vs-dense" => 9,
        "unitarity" | "measured" => 8,
        "layers" | "code-weights" => 10,
        "common-layers" | "connectivity" => 12,
        "coin-spectrum" => 24,
        _ => return None,
    })
}

pub fn run_suite(suite: &str, n_max: usize) -> Result<SuiteReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("size cap must be at least 1".into()));
    }
    let mut r = SuiteReport::new(suite, n_max);
    match suite {
        "kravchuk-identity" => kravchuk_identity(&mut r, n_max),
        "parity" => parity(&mut r, n_max),
        "kravchuk-bound" => kravchuk_bound(&mut r, n_max),
        "spectral-vs-dense" => spectral_vs_dense(&mut r, n_max.min(9)),
        "unitarity" => unitarity(&mut r, n_max.min(8)),
        "layers" => layer_checks(&mut r, n_max),
        "common-layers" => common_layers(&mut r, n_max.min(12)),
        "connectivity" => connectivity(&mut r, n_max.min(12)),
        "code-weights" => code_weights(&mut r, n_max.min(12)),
        "coin-spectrum" => coin_spectrum(&mut r, n_max.min(64)),
        "measured" => measured_checks(&mut r, n_max.min(8)),
        _ => return Err(Error::InvalidArgument(format!("unknown suite {suite:?}"))),
    }
    Ok(r)
}

fn specs(n_lo: usize, n_max: usize) -> impl Iterator<Item = WalkSpec> {
    (n_lo.max(2)..=n_max).flat_map(|n| (1..n).map(move |s| WalkSpec::new(n, s).expect("1 <= s < n")))
}

fn kravchuk_identity(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max) {
        let (n, s) = (sp.n(), sp.s());
        let m = BigInt::from(sp.m().clone());
        for k in 0..=n {
            let d = BigInt::from(math::weight_characteristic(&sp, k));
            let phi = math::kravchuk(n, k, s);
            r.check(&m - &d * 2 == phi, || format!("n={n} s={s} k={k}"), || format!("m-2d={} phi={phi}", &m - &d * 2));
        }
    }
    for n in 1..=n_max {
        for k in 0..=n {
            let coeffs = math::kravchuk_via_generating_function(n, k);
            for (s, c) in coeffs.iter().enumerate() {
                let direct = math::kravchuk(n, k, s);
                r.check(*c == direct, || format!("n={n} k={k} s={s}"), || format!("series {c} vs sum {direct}"));
            }
        }
    }
}

fn parity(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max) {
        let (n, s) = (sp.n(), sp.s());
        for k in 0..=n {
            let exact = math::weight_characteristic(&sp, k);
            let bit = (&exact % 2u32).to_u8().expect("bit");
            let fast = math::d_parity(&sp, k);
            r.check(bit == fast, || format!("n={n} s={s} k={k}"), || format!("exact {bit} vs shortcut {fast}"));
            if k + 2 <= n {
                let diff: BigInt = math::kravchuk(n, k + 2, s) - math::kravchuk(n, k, s);
                r.check(
                    (&diff % BigInt::from(4)).is_zero(),
                    || format!("n={n} s={s} k={k}"),
                    || format!("phi(k+2) - phi(k) = {diff}"),
                );
            }
        }
    }
}

fn kravchuk_bound(r: &mut SuiteReport, n_max: usize) {
    for n in [50, 100, 200, 400].into_iter().filter(|&n| n <= n_max) {
        let delta = math::default_delta(n);
        for s in 1..=3 {
            let sp = WalkSpec::new(n, s).expect("valid");
            for k in (0..=n).filter(|&k| math::in_window(n, k, delta)) {
                match math::kravchuk_bound(&sp, k, (n as f64).ln()) {
                    Ok(b) => r.check(b.holds(), || format!("n={n} s={s} k={k}"), || format!("lhs {} > rhs {}", b.lhs, b.rhs)),
                    Err(e) => r.check(false, || format!("n={n} s={s} k={k}"), || e.to_string()),
                }
            }
        }
    }
}

fn spectral_vs_dense(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max).filter(|sp| sp.s() <= 4) {
        let (n, s) = (sp.n(), sp.s());
        let spectrum = WalkSpectrum::new(&sp);
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        let mut state = DenseState::symmetric_start(&genset).expect("small");
        for t in 0..=100u64 {
            let ret = (state.origin_overlap().norm() - spectrum.return_amplitude(t).abs()).abs();
            let hit = (state.antipode_overlap().norm() - spectrum.hit_amplitude(t).abs()).abs();
            r.check(ret < 1e-9 && hit < 1e-9, || format!("n={n} s={s} t={t}"), || format!("return err {ret:e}, hit err {hit:e}"));
            state.step();
        }
    }
}

fn unitarity(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max).filter(|sp| sp.s() <= 3) {
        let (n, s) = (sp.n(), sp.s());
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        let mut state = DenseState::symmetric_start(&genset).expect("small");
        let full = state.antipode();
        for t in 0..=200 {
            let dist = state.vertex_distribution();
            let total: f64 = dist.iter().sum();
            r.check((total - 1.0).abs() < 1e-12, || format!("n={n} s={s} t={t}"), || format!("distribution sums to {total}"));
            let worst = (1..full).map(|x| dist[x as usize]).fold(0.0, f64::max);
            r.check(
                worst <= 1.0 / n as f64 + 1e-12,
                || format!("n={n} s={s} t={t}"),
                || format!("intermediate vertex probability {worst}"),
            );
            state.step();
        }
    }
}

fn layer_checks(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max.min(10)) {
        let (n, s) = (sp.n(), sp.s());
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        // one representative per layer suffices: coordinate permutations preserve S
        for l in 0..=n {
            let v = (1u64 << l) - 1;
            let mut counts = vec![0u64; n + 1];
            for &e in genset.elements() {
                counts[(v ^ e).count_ones() as usize] += 1;
            }
            let expected: Vec<usize> = (0..=n).filter(|&t| counts[t] > 0).collect();
            let formula = layers::layer_neighbors(&sp, l).expect("in range");
            r.check(formula == expected, || format!("n={n} s={s} l={l}"), || format!("neighbors {formula:?} vs {expected:?}"));
            for &t in &expected {
                let c = layers::connection_count(&sp, l, t).map(|c| c.to_u64().expect("small"));
                r.check(c == Ok(counts[t]), || format!("n={n} s={s} l={l} t={t}"), || format!("count {c:?} vs {}", counts[t]));
            }
        }
    }
    for sp in specs(2, n_max.min(30)) {
        let (n, s) = (sp.n(), sp.s());
        for l in 0..=n {
            for t in layers::layer_neighbors(&sp, l).expect("in range") {
                let lhs: BigUint = layers::layer_size(n, l) * layers::connection_count(&sp, l, t).expect("adjacent");
                let rhs: BigUint = layers::layer_size(n, t) * layers::connection_count(&sp, t, l).expect("adjacent");
                r.check(lhs == rhs, || format!("handshake n={n} s={s} l={l} t={t}"), || format!("{lhs} vs {rhs}"));
            }
        }
    }
}

/// Bitmask of layers holding a common neighbor of `v` and each `q`, indexed by `q`.
pub fn common_layer_masks(genset: &GeneratingSet, v: u64) -> Vec<u64> {
    let mut masks = vec![0u64; genset.vertex_count()];
    for &e1 in genset.elements() {
        let w = v ^ e1;
        let bit = 1u64 << w.count_ones();
        for &e2 in genset.elements() {
            masks[(w ^ e2) as usize] |= bit;
        }
    }
    masks
}

fn common_layers(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max) {
        let (n, s) = (sp.n(), sp.s());
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        let starts: Vec<u64> = if n <= 8 {
            (0..genset.vertex_count() as u64).collect()
        } else {
            (0..=n).map(|l| (1u64 << l) - 1).collect()
        };
        for v in starts {
            let l = v.count_ones() as usize;
            for (q, &mask) in common_layer_masks(&genset, v).iter().enumerate() {
                if mask == 0 {
                    continue;
                }
                let t = q.count_ones() as usize;
                let formula = layers::local_common_layers(&sp, l, t).expect("in range");
                let fmask = formula.iter().fold(0u64, |acc, &x| acc | 1 << x);
                r.check(fmask == mask, || format!("n={n} s={s} v={v:#x} q={q:#x}"), || format!("formula {fmask:#b} vs brute {mask:#b}"));
            }
        }
    }
}

fn connectivity(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max) {
        let (n, s) = (sp.n(), sp.s());
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        let comps = dense::connected_components(&genset).expect("small");
        let expected = if s % 2 == 0 { 2 } else { 1 };
        r.check(comps.count == expected, || format!("n={n} s={s}"), || format!("{} components", comps.count));
        if s % 2 == 0 {
            let split = comps.labels.iter().enumerate().all(|(v, &c)| c == (v as u64).count_ones() % 2);
            r.check(split, || format!("n={n} s={s}"), || "components do not follow weight parity".into());
        }
    }
}

fn code_weights(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max) {
        let (n, s) = (sp.n(), sp.s());
        let genset = GeneratingSet::from_spec(&sp).expect("small");
        let w = dense::code_weight_coefficients(&genset).expect("small");
        let mut expected = vec![0u64; genset.m() + 1];
        for k in 0..=n {
            let d = math::weight_characteristic(&sp, k).to_usize().expect("small");
            expected[d] += math::binom(n as u64, k as i64).to_u64().expect("small");
        }
        r.check(w == expected, || format!("n={n} s={s}"), || format!("{w:?} vs {expected:?}"));
    }
}

fn coin_spectrum(r: &mut SuiteReport, m_max: usize) {
    for m in 1..=m_max {
        for d in 0..=m {
            match dense::coin_eigensystem(m, d) {
                Ok(sys) => r.check(sys.matches_prediction(1e-9), || format!("m={m} d={d}"), || format!("{:?}", sys.eigenvalues)),
                Err(e) => r.check(false, || format!("m={m} d={d}"), || e.to_string()),
            }
        }
    }
}

fn measured_checks(r: &mut SuiteReport, n_max: usize) {
    for sp in specs(2, n_max).filter(|sp| sp.s() == 1 || sp.s() == 3) {
        let (n, s) = (sp.n(), sp.s());
        for t0 in [0usize, 10, 50] {
            let a = measured::projective_simulation(&sp, t0, 200).expect("small");
            let b = measured::recursion_trace(&sp, t0, 200).expect("small");
            let worst = a.q.iter().zip(&b.q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            r.check(worst < 1e-9, || format!("n={n} s={s} T0={t0}"), || format!("stop probabilities differ by {worst:e}"));
            let id = measured::alpha_identity_residual(&b);
            r.check(id < 1e-10, || format!("n={n} s={s} T0={t0}"), || format!("alpha identity residual {id:e}"));
            let total = a.stop_probability() + a.residual_norm_sqr.expect("projective");
            r.check((total - 1.0).abs() < 1e-9, || format!("n={n} s={s} T0={t0}"), || format!("p_T + residual = {total}"));
        }
    }
}
