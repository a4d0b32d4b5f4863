//! Antipodal-vertex search through a name-obfuscating neighbor oracle.
//!
//! Vertices of `Cay(Z_2^n, {|e| = s})` are hidden behind random `2n`-bit names.
//! A query `(name, k)` with `k` in `1..=m` returns the name of `v xor e_k`, or
//! nothing when the name or the index is invalid. Numbering neighbors by
//! generator index makes the numbering reciprocal.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dense::{GeneratingSet, MAX_STATE_LEN};
use crate::error::{Error, Result};
use crate::layers;
use crate::math::WalkSpec;

/// Largest `n` for which the oracle materializes every vertex name.
pub const MAX_ORACLE_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexName(pub u64);

impl VertexName {
    /// Zero-padded lowercase hex of a `bits`-bit name.
    pub fn to_hex(self, bits: usize) -> String {
        format!("{:0width$x}", self.0, width = bits.div_ceil(4))
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        u64::from_str_radix(s, 16).ok().map(VertexName)
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// One oracle invocation. `reply` is `None` for the empty answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub name: VertexName,
    pub index: usize,
    pub reply: Option<VertexName>,
}

#[derive(Debug, Clone)]
pub struct OracleGraph {
    spec: WalkSpec,
    genset: GeneratingSet,
    name_bits: usize,
    names: Vec<VertexName>,
    vertices: HashMap<VertexName, u32>,
    queries: u64,
    transcript: Option<Vec<QueryRecord>>,
}

impl OracleGraph {
    /// Oracle for `(n, s)` under the premise `s < n/6`, which makes `v xor 1^n` the unique antipode.
    pub fn new(n: usize, s: usize, seed: u64) -> Result<Self> {
        let spec = WalkSpec::new(n, s)?;
        if 6 * s >= n {
            return Err(Error::AntipodalityPremise { n, s });
        }
        Self::build(spec, seed)
    }

    /// Same construction without the `s < n/6` premise.
    pub fn new_unchecked_premise(n: usize, s: usize, seed: u64) -> Result<Self> {
        Self::build(WalkSpec::new(n, s)?, seed)
    }

    fn build(spec: WalkSpec, seed: u64) -> Result<Self> {
        let n = spec.n();
        if n > MAX_ORACLE_N {
            return Err(Error::TooLarge {
                what: "n",
                value: n,
                limit: MAX_ORACLE_N,
            });
        }
        let genset = GeneratingSet::from_spec(&spec)?;
        let name_bits = 2 * n;
        let mask = (1u64 << name_bits) - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut names = Vec::with_capacity(1 << n);
        let mut vertices = HashMap::with_capacity(1 << n);
        while names.len() < 1 << n {
            let name = VertexName(rng.random::<u64>() & mask);
            if let std::collections::hash_map::Entry::Vacant(slot) = vertices.entry(name) {
                slot.insert(names.len() as u32);
                names.push(name);
            }
        }
        Ok(OracleGraph {
            spec,
            genset,
            name_bits,
            names,
            vertices,
            queries: 0,
            transcript: None,
        })
    }

    pub fn spec(&self) -> &WalkSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn s(&self) -> usize {
        self.spec.s()
    }

    /// Degree `m`; valid query indices are `1..=m`.
    pub fn m(&self) -> usize {
        self.genset.m()
    }

    pub fn name_bits(&self) -> usize {
        self.name_bits
    }

    /// The single public operation: `k`-th neighbor of `name`.
    pub fn query(&mut self, name: VertexName, k: usize) -> Option<VertexName> {
        self.queries += 1;
        let reply = match self.vertices.get(&name) {
            Some(&v) if (1..=self.m()).contains(&k) => {
                Some(self.names[(v as u64 ^ self.genset.elements()[k - 1]) as usize])
            }
            _ => None,
        };
        if let Some(log) = &mut self.transcript {
            log.push(QueryRecord { name, index: k, reply });
        }
        reply
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn reset_query_count(&mut self) {
        self.queries = 0;
    }

    pub fn record_transcript(&mut self, on: bool) {
        self.transcript = if on { Some(Vec::new()) } else { None };
    }

    pub fn take_transcript(&mut self) -> Vec<QueryRecord> {
        self.transcript.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Hidden mapping, for checking results only.
    pub fn reveal_name(&self, vertex: u64) -> VertexName {
        self.names[vertex as usize]
    }

    /// Hidden inverse mapping, for checking results only.
    pub fn reveal_vertex(&self, name: VertexName) -> Option<u64> {
        self.vertices.get(&name).map(|&v| v as u64)
    }

    /// Name of `v xor 1^n` for the vertex `v` behind `start`.
    pub fn reveal_antipode(&self, start: VertexName) -> Option<VertexName> {
        let full = (1u64 << self.n()) - 1;
        self.reveal_vertex(start).map(|v| self.reveal_name(v ^ full))
    }
}

/// Weight estimate for one queried vertex during the climb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightInference {
    pub name: VertexName,
    pub inferred: usize,
    /// Weight of the rung preceding the one whose neighbor was inferred.
    pub floor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub answer: Option<VertexName>,
    pub queries: u64,
    pub success: bool,
    /// Names of `v_1, v_2, ...` with weights `s, 2s, ...` relative to the start.
    pub rungs: Vec<VertexName>,
    /// False when the layer `n - s` cannot be entered from any rung, so `v xor 1^n` is out of reach.
    pub target_reachable: bool,
    pub inferences: Vec<WeightInference>,
}

/// Query budget `(m^2 + m) n / s` of the classical ladder, rounded down.
pub fn classical_budget(spec: &WalkSpec) -> Option<u64> {
    let m = spec.m_u64()?;
    (m * m + m).checked_mul(spec.n() as u64).map(|q| q / spec.s() as u64)
}

fn neighbors(oracle: &mut OracleGraph, name: VertexName) -> Vec<VertexName> {
    (1..=oracle.m())
        .map(|k| oracle.query(name, k).expect("names handed out by the oracle are valid"))
        .collect()
}

fn start_neighbors(oracle: &mut OracleGraph, start: VertexName) -> Result<Vec<VertexName>> {
    (1..=oracle.m())
        .map(|k| oracle.query(start, k))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument(format!("{start} is not a vertex name")))
}

/// Layer-climbing search for the antipode of `start`.
///
/// The ladder learns the weight of every neighbor of the current rung, steps
/// to a neighbor `s` layers further out and repeats. Weights next to `v_1`
/// come from the count of neighbors inside the first shell, inverted through
/// `k(l)`; later ones are `j(u) + s` with `j(u)` the least known weight shared
/// by `u` and the previous rung. When `s` does not divide `n` the last rung
/// hops into layer `n - s` and a random neighbor is returned. Every neighbor of
/// the rung at weight `rs` has weight at least `(r-1)s`, which keeps `j(u) + s`
/// exact for all of them.
pub fn classical_search<R: Rng>(oracle: &mut OracleGraph, start: VertexName, rng: &mut R) -> Result<SearchResult> {
    let spec = oracle.spec().clone();
    let (n, s) = (spec.n(), spec.s());
    let m = oracle.m();
    let before = oracle.query_count();

    let k_table: Vec<(usize, usize)> = layers::layer_neighbors(&spec, s)?
        .into_iter()
        .map(|l| {
            let k = layers::k_value(&spec, l).expect("even layer").to_usize().expect("fits");
            (k, l)
        })
        .collect();
    let distinct: HashSet<usize> = k_table.iter().map(|&(k, _)| k).collect();
    if distinct.len() != k_table.len() {
        return Err(Error::InvalidArgument(format!(
            "k(l) is not injective for n={n}, s={s}; weights cannot be inferred"
        )));
    }

    // rung whose neighborhood must be known before the final move
    let full_rungs = n / s;
    let last_rung = if n % s == 0 {
        full_rungs - 1
    } else if (n - full_rungs * s) % 2 == 0 {
        full_rungs
    } else if s % 2 == 1 && full_rungs >= 2 {
        full_rungs - 1
    } else {
        // n - s is not a neighbor layer of any rung: the antipode is unreachable this way
        0
    };
    let reachable = n % s == 0 || last_rung > 0;

    let mut inferences = Vec::new();
    let shell = start_neighbors(oracle, start)?;
    let shell_set: HashSet<VertexName> = shell.iter().copied().collect();
    let mut prev = start;
    let mut current = *shell.iter().min().expect("m >= 1");
    let mut rungs = vec![current];

    // weights around v_1 from the k(l) inversion
    let mut weights: HashMap<VertexName, usize> = HashMap::with_capacity(m);
    weights.insert(start, 0);
    for u in neighbors(oracle, current) {
        if u == start {
            continue;
        }
        let x = neighbors(oracle, u).iter().filter(|w| shell_set.contains(w)).count();
        let l = k_table
            .iter()
            .find(|&&(k, _)| k == x)
            .map(|&(_, l)| l)
            .ok_or_else(|| Error::InvalidArgument(format!("no layer with k(l) = {x}")))?;
        weights.insert(u, l);
        inferences.push(WeightInference { name: u, inferred: l, floor: 0 });
    }

    for rung in 2..=last_rung {
        let target = rung * s;
        let next = pick(&weights, target)?;
        let prev_weights = std::mem::take(&mut weights);
        std::mem::swap(&mut prev, &mut current);
        current = next;
        rungs.push(current);
        weights.insert(prev, target - s);
        for u in neighbors(oracle, current) {
            if u == prev {
                continue;
            }
            let j = neighbors(oracle, u)
                .iter()
                .filter_map(|w| prev_weights.get(w))
                .min()
                .copied()
                .expect("the current rung is a common neighbor");
            weights.insert(u, j + s);
            inferences.push(WeightInference {
                name: u,
                inferred: j + s,
                floor: target - s,
            });
        }
    }

    let answer = if n % s == 0 {
        if n == s {
            Some(current)
        } else {
            let top = pick(&weights, n)?;
            rungs.push(top);
            Some(top)
        }
    } else if reachable {
        let w = pick(&weights, n - s)?;
        let k = rng.random_range(1..=m);
        oracle.query(w, k)
    } else {
        let k = rng.random_range(1..=m);
        oracle.query(current, k)
    };

    let success = answer.is_some() && answer == oracle.reveal_antipode(start);
    Ok(SearchResult {
        answer,
        queries: oracle.query_count() - before,
        success,
        rungs,
        target_reachable: reachable,
        inferences,
    })
}

/// Lowest name with the given inferred weight.
fn pick(weights: &HashMap<VertexName, usize>, weight: usize) -> Result<VertexName> {
    weights
        .iter()
        .filter(|&(_, &w)| w == weight)
        .map(|(&name, _)| name)
        .min()
        .ok_or_else(|| Error::InvalidArgument(format!("no known neighbor of weight {weight}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumResult {
    pub t: usize,
    /// Measured-vertex distribution over the names reachable from the start, sorted by name.
    pub distribution: Vec<(VertexName, f64)>,
    pub success_probability: f64,
    /// Queries spent discovering the reachable subgraph.
    pub queries: u64,
}

/// Coined walk on the subgraph reachable from `start`, discovered through the oracle.
pub fn quantum_search(oracle: &mut OracleGraph, start: VertexName, t: usize) -> Result<QuantumResult> {
    let m = oracle.m();
    let before = oracle.query_count();

    let mut index: HashMap<VertexName, usize> = HashMap::new();
    let mut order = vec![start];
    index.insert(start, 0);
    let mut table: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([start]);
    let mut first = Some(start_neighbors(oracle, start)?);
    while let Some(name) = queue.pop_front() {
        let found = match first.take() {
            Some(list) => list,
            None => neighbors(oracle, name),
        };
        for nb in found {
            let next_id = order.len();
            let id = *index.entry(nb).or_insert_with(|| {
                order.push(nb);
                queue.push_back(nb);
                next_id
            });
            table.push(id);
        }
        if order.len() * m > MAX_STATE_LEN {
            return Err(Error::TooLarge {
                what: "state length",
                value: order.len() * m,
                limit: MAX_STATE_LEN,
            });
        }
    }

    let size = order.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut amps = vec![zero; size * m];
    amps[..m].fill(Complex64::new(1.0 / (m as f64).sqrt(), 0.0));
    let scale = 2.0 / m as f64;
    for _ in 0..t {
        let sums: Vec<Complex64> = amps.chunks(m).map(|c| c.iter().sum()).collect();
        let mut next = vec![zero; size * m];
        for u in 0..size {
            for b in 0..m {
                // the reciprocal numbering makes neighbor b of u send its b-th coin back to u
                let v = table[u * m + b];
                next[u * m + b] = sums[v] * scale - amps[v * m + b];
            }
        }
        amps = next;
    }

    let antipode = oracle.reveal_antipode(start);
    let mut distribution: Vec<(VertexName, f64)> = order
        .iter()
        .enumerate()
        .map(|(i, &name)| (name, amps[i * m..(i + 1) * m].iter().map(|a| a.norm_sqr()).sum()))
        .collect();
    distribution.sort_by_key(|&(name, _)| name);
    let success_probability = distribution
        .iter()
        .find(|&&(name, _)| Some(name) == antipode)
        .map_or(0.0, |&(_, p)| p);
    Ok(QuantumResult {
        t,
        distribution,
        success_probability,
        queries: oracle.query_count() - before,
    })
}

/// Tab-separated transcript: query name, index, reply (empty field for no reply).
pub fn format_transcript(records: &[QueryRecord], name_bits: usize) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.name.to_hex(name_bits));
        out.push('\t');
        out.push_str(&r.index.to_string());
        out.push('\t');
        if let Some(reply) = r.reply {
            out.push_str(&reply.to_hex(name_bits));
        }
        out.push('\n');
    }
    out
}

pub fn parse_transcript(text: &str) -> Result<Vec<QueryRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| {
            let bad = |reason: &str| Error::Transcript {
                line: i + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [name, index, reply] = fields.as_slice() else {
                return Err(bad("expected three tab-separated fields"));
            };
            let name = VertexName::from_hex(name).ok_or_else(|| bad("query name is not hex"))?;
            let index = index.parse().map_err(|_| bad("index is not an integer"))?;
            let reply = if reply.is_empty() {
                None
            } else {
                Some(VertexName::from_hex(reply).ok_or_else(|| bad("reply is not hex"))?)
            };
            Ok(QueryRecord { name, index, reply })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub total: usize,
    /// Zero-based positions whose recorded reply differs from the oracle's.
    pub mismatches: Vec<usize>,
}

impl ReplayReport {
    pub fn is_faithful(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-issues every recorded query and compares replies.
pub fn replay_transcript(oracle: &mut OracleGraph, records: &[QueryRecord]) -> ReplayReport {
    let mismatches = records
        .iter()
        .enumerate()
        .filter(|(_, r)| oracle.query(r.name, r.index) != r.reply)
        .map(|(i, _)| i)
        .collect();
    ReplayReport {
        total: records.len(),
        mismatches,
    }
}
