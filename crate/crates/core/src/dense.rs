//! State-vector simulation of the coined walk on `Cay(Z_2^n, S)`.
//!
//! Basis `|b, v>` lives at index `v * m + b`, where `b` is the position of the
//! generator in [`GeneratingSet::elements`] and bit `i` of `v` is coordinate `i`.

use std::collections::VecDeque;

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::WalkSpec;

/// Largest dimension accepted by the exhaustive routines.
pub const MAX_DENSE_DIMENSION: usize = 24;
/// Largest state vector (`m * 2^n` amplitudes) the simulator will allocate.
pub const MAX_STATE_LEN: usize = 1 << 27;

const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    n: usize,
    elements: Vec<u64>,
}

impl GeneratingSet {
    pub fn new(n: usize, elements: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidGeneratingSet(format!("dimension {n} not in 1..=63")));
        }
        if elements.is_empty() {
            return Err(Error::InvalidGeneratingSet("empty set".into()));
        }
        let mut seen = std::collections::HashSet::with_capacity(elements.len());
        for &e in &elements {
            if e == 0 {
                return Err(Error::InvalidGeneratingSet("contains the zero vector".into()));
            }
            if e >> n != 0 {
                return Err(Error::InvalidGeneratingSet(format!("{e:#x} has bits beyond n={n}")));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidGeneratingSet(format!("duplicate element {e:#x}")));
            }
        }
        Ok(GeneratingSet { n, elements })
    }

    /// All weight-`s` vectors, ordered lexicographically by support set.
    pub fn symmetric(n: usize, s: usize) -> Result<Self> {
        let spec = WalkSpec::new(n, s)?;
        Self::from_spec(&spec)
    }

    pub fn from_spec(spec: &WalkSpec) -> Result<Self> {
        let (n, s) = (spec.n(), spec.s());
        if n > 63 {
            return Err(Error::TooLarge { what: "n", value: n, limit: 63 });
        }
        let mut elements = Vec::new();
        let mut support: Vec<usize> = (0..s).collect();
        loop {
            elements.push(support.iter().fold(0u64, |acc, &i| acc | 1 << i));
            // advance to the next s-subset in lexicographic order
            let Some(pos) = (0..s).rev().find(|&i| support[i] < n - s + i) else {
                break;
            };
            support[pos] += 1;
            for j in pos + 1..s {
                support[j] = support[j - 1] + 1;
            }
        }
        Self::new(n, elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.n
    }

    fn check_exhaustive(&self) -> Result<()> {
        if self.n > MAX_DENSE_DIMENSION {
            return Err(Error::TooLarge {
                what: "n",
                value: self.n,
                limit: MAX_DENSE_DIMENSION,
            });
        }
        Ok(())
    }
}

/// One amplitude of an exported state snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeRecord {
    pub coin_index: usize,
    pub vertex_bits: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone)]
pub struct DenseState {
    genset: GeneratingSet,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    /// `|Psi> (x) |vertex>` with `Psi` the uniform coin state.
    pub fn symmetric_at(genset: &GeneratingSet, vertex: u64) -> Result<Self> {
        let mut state = Self::zero(genset)?;
        if vertex >> genset.n != 0 {
            return Err(Error::InvalidArgument(format!("vertex {vertex:#x} outside Z_2^{}", genset.n)));
        }
        let m = genset.m();
        let a = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
        let base = vertex as usize * m;
        state.amplitudes[base..base + m].fill(a);
        Ok(state)
    }

    /// The walk's initial state `|Psi> (x) |0^n>`.
    pub fn symmetric_start(genset: &GeneratingSet) -> Result<Self> {
        Self::symmetric_at(genset, 0)
    }

    pub fn from_amplitudes(genset: &GeneratingSet, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_size(genset)?;
        if amplitudes.len() != genset.m() << genset.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                genset.m() << genset.n,
                amplitudes.len()
            )));
        }
        Ok(DenseState {
            genset: genset.clone(),
            amplitudes,
        })
    }

    fn zero(genset: &GeneratingSet) -> Result<Self> {
        Self::check_size(genset)?;
        Ok(DenseState {
            genset: genset.clone(),
            amplitudes: vec![Complex64::new(0.0, 0.0); genset.m() << genset.n],
        })
    }

    fn check_size(genset: &GeneratingSet) -> Result<()> {
        genset.check_exhaustive()?;
        let len = genset.m().checked_shl(genset.n as u32).unwrap_or(usize::MAX);
        if len > MAX_STATE_LEN {
            return Err(Error::TooLarge {
                what: "state length",
                value: len,
                limit: MAX_STATE_LEN,
            });
        }
        Ok(())
    }

    pub fn genset(&self) -> &GeneratingSet {
        &self.genset
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, coin: usize, vertex: u64) -> Complex64 {
        self.amplitudes[vertex as usize * self.genset.m() + coin]
    }

    fn coin_sums(&self) -> Vec<Complex64> {
        let m = self.genset.m();
        let sum = |c: &[Complex64]| c.iter().sum::<Complex64>();
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_chunks(m).map(sum).collect()
        } else {
            self.amplitudes.chunks(m).map(sum).collect()
        }
    }

    /// Grover coin `2|Psi><Psi| - I` on every vertex.
    pub fn apply_coin(&mut self) {
        let m = self.genset.m();
        let scale = 2.0 / m as f64;
        let sums = self.coin_sums();
        let update = |(chunk, total): (&mut [Complex64], &Complex64)| {
            let shifted = total * scale;
            for a in chunk {
                *a = shifted - *a;
            }
        };
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_chunks_mut(m).zip(sums.par_iter()).for_each(update);
        } else {
            self.amplitudes.chunks_mut(m).zip(sums.iter()).for_each(update);
        }
    }

    /// `|b, v> -> |b, v xor e_b>`.
    pub fn apply_shift(&mut self) {
        let m = self.genset.m();
        let old = &self.amplitudes;
        let elements = &self.genset.elements;
        let fill = |(w, chunk): (usize, &mut [Complex64])| {
            for (b, slot) in chunk.iter_mut().enumerate() {
                *slot = old[(w ^ elements[b] as usize) * m + b];
            }
        };
        let mut next = vec![Complex64::new(0.0, 0.0); old.len()];
        if old.len() >= PARALLEL_THRESHOLD {
            next.par_chunks_mut(m).enumerate().for_each(fill);
        } else {
            next.chunks_mut(m).enumerate().for_each(fill);
        }
        self.amplitudes = next;
    }

    /// One walk step: coin, then shift. Coin and shift are fused into one pass.
    pub fn step(&mut self) {
        let m = self.genset.m();
        let scale = 2.0 / m as f64;
        let sums = self.coin_sums();
        let old = &self.amplitudes;
        let elements = &self.genset.elements;
        let fill = |(w, chunk): (usize, &mut [Complex64])| {
            for (b, slot) in chunk.iter_mut().enumerate() {
                let v = w ^ elements[b] as usize;
                *slot = sums[v] * scale - old[v * m + b];
            }
        };
        let mut next = vec![Complex64::new(0.0, 0.0); old.len()];
        if old.len() >= PARALLEL_THRESHOLD {
            next.par_chunks_mut(m).enumerate().for_each(fill);
        } else {
            next.chunks_mut(m).enumerate().for_each(fill);
        }
        self.amplitudes = next;
    }

    pub fn evolve(&mut self, t: usize) {
        for _ in 0..t {
            self.step();
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn vertex_probability(&self, vertex: u64) -> f64 {
        let m = self.genset.m();
        let base = vertex as usize * m;
        self.amplitudes[base..base + m].iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn vertex_distribution(&self) -> Vec<f64> {
        self.amplitudes
            .chunks(self.genset.m())
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// `<Psi, vertex | state>`.
    pub fn symmetric_overlap(&self, vertex: u64) -> Complex64 {
        let m = self.genset.m();
        let base = vertex as usize * m;
        self.amplitudes[base..base + m].iter().sum::<Complex64>() / (m as f64).sqrt()
    }

    /// `<psi_0 | state>` for the start at `0^n`.
    pub fn origin_overlap(&self) -> Complex64 {
        self.symmetric_overlap(0)
    }

    /// `<Psi, 1^n | state>`.
    pub fn antipode_overlap(&self) -> Complex64 {
        self.symmetric_overlap(self.antipode())
    }

    pub fn antipode(&self) -> u64 {
        (1u64 << self.genset.n) - 1
    }

    /// Zeroes the amplitudes at `vertex`, returning the removed probability.
    pub fn project_out(&mut self, vertex: u64) -> f64 {
        let m = self.genset.m();
        let base = vertex as usize * m;
        let mut removed = 0.0;
        for a in &mut self.amplitudes[base..base + m] {
            removed += a.norm_sqr();
            *a = Complex64::new(0.0, 0.0);
        }
        removed
    }

    pub fn snapshot(&self) -> Vec<AmplitudeRecord> {
        let m = self.genset.m();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| AmplitudeRecord {
                coin_index: i % m,
                vertex_bits: (i / m) as u64,
                re: a.re,
                im: a.im,
            })
            .collect()
    }
}

/// Spectrum of `Gamma_d = D_d G`, where `D_d` negates the first `d` coin directions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinEigensystem {
    pub m: usize,
    pub d: usize,
    /// Numerically computed eigenvalues, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// `(lambda_d, conj(lambda_d))` with nonnegative imaginary part first.
    pub nontrivial_pair: Option<(Complex64, Complex64)>,
    pub plus_one: usize,
    pub minus_one: usize,
}

const CENSUS_TOL: f64 = 1e-9;

pub fn coin_matrix(m: usize, d: usize) -> Result<DMatrix<f64>> {
    if m == 0 || d > m {
        return Err(Error::InvalidArgument(format!("need m >= 1 and 0 <= d <= m, got m={m}, d={d}")));
    }
    let g = 2.0 / m as f64;
    Ok(DMatrix::from_fn(m, m, |i, j| {
        let entry = if i == j { g - 1.0 } else { g };
        if i < d {
            -entry
        } else {
            entry
        }
    }))
}

pub fn nontrivial_eigenvalue(m: usize, d: usize) -> Complex64 {
    let (m, d) = (m as f64, d as f64);
    Complex64::new(1.0 - 2.0 * d / m, 2.0 / m * (d * (m - d)).sqrt())
}

/// The eigenvalue multiset expected for `Gamma_d`.
///
/// `d = 0` is the Grover coin (`+1` on `Psi`, `-1` elsewhere) and `d = m` its negation.
pub fn predicted_coin_spectrum(m: usize, d: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(m);
    if d == 0 || d == m {
        let sign = if d == 0 { 1.0 } else { -1.0 };
        out.push(one * sign);
        out.extend(std::iter::repeat_n(-one * sign, m - 1));
    } else {
        let lambda = nontrivial_eigenvalue(m, d);
        out.extend(std::iter::repeat_n(one, d - 1));
        out.extend(std::iter::repeat_n(-one, m - d - 1));
        out.push(lambda);
        out.push(lambda.conj());
    }
    sort_spectrum(&mut out);
    out
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn coin_eigensystem(m: usize, d: usize) -> Result<CoinEigensystem> {
    let matrix = coin_matrix(m, d)?;
    // the default solver iterates without a cap and can stall on orthogonal input
    let schur = Schur::try_new(matrix, 1e-15, 10_000)
        .ok_or_else(|| Error::InvalidArgument(format!("Schur iteration did not converge for m={m}, d={d}")))?;
    let mut eigenvalues: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    sort_spectrum(&mut eigenvalues);
    let one = Complex64::new(1.0, 0.0);
    let plus_one = eigenvalues.iter().filter(|z| (*z - one).norm() < CENSUS_TOL).count();
    let minus_one = eigenvalues.iter().filter(|z| (*z + one).norm() < CENSUS_TOL).count();
    let mut others: Vec<Complex64> = eigenvalues
        .iter()
        .copied()
        .filter(|z| (z - one).norm() >= CENSUS_TOL && (z + one).norm() >= CENSUS_TOL)
        .collect();
    others.sort_by(|a, b| b.im.total_cmp(&a.im));
    let nontrivial_pair = match others.as_slice() {
        [a, b] => Some((*a, *b)),
        _ => None,
    };
    Ok(CoinEigensystem {
        m,
        d,
        eigenvalues,
        nontrivial_pair,
        plus_one,
        minus_one,
    })
}

impl CoinEigensystem {
    /// Whether the numerical spectrum equals [`predicted_coin_spectrum`] as a multiset.
    pub fn matches_prediction(&self, tol: f64) -> bool {
        let predicted = predicted_coin_spectrum(self.m, self.d);
        let mut used = vec![false; self.eigenvalues.len()];
        predicted.iter().all(|p| {
            match (0..self.eigenvalues.len()).find(|&i| !used[i] && (self.eigenvalues[i] - p).norm() < tol) {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id of each vertex, numbered in order of discovery from vertex 0.
    pub labels: Vec<u32>,
}

pub fn connected_components(genset: &GeneratingSet) -> Result<Components> {
    genset.check_exhaustive()?;
    let size = genset.vertex_count();
    let mut labels = vec![u32::MAX; size];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for root in 0..size {
        if labels[root] != u32::MAX {
            continue;
        }
        labels[root] = count;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &e in genset.elements() {
                let w = v ^ e as usize;
                if labels[w] == u32::MAX {
                    labels[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    Ok(Components {
        count: count as usize,
        labels,
    })
}

/// `W_k = #{v : |Av| = k}` for the code with generator rows `S`, where `(Av)_i = <e_i, v> mod 2`.
pub fn code_weight_coefficients(genset: &GeneratingSet) -> Result<Vec<u64>> {
    genset.check_exhaustive()?;
    let mut w = vec![0u64; genset.m() + 1];
    for v in 0..genset.vertex_count() as u64 {
        let weight = genset.elements().iter().filter(|&&e| (e & v).count_ones() % 2 == 1).count();
        w[weight] += 1;
    }
    Ok(w)
}
