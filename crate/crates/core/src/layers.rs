//! Layer structure of the weight-`s` Cayley graph. Layer `L_l` holds the vertices of weight `l`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{binom, WalkSpec};

fn check_layer(spec: &WalkSpec, l: usize) -> Result<()> {
    if l > spec.n() {
        return Err(Error::InvalidArgument(format!("layer {l} exceeds n={}", spec.n())));
    }
    Ok(())
}

/// Layers reachable in one step from any vertex of weight `l`.
pub fn layer_neighbors(spec: &WalkSpec, l: usize) -> Result<Vec<usize>> {
    check_layer(spec, l)?;
    let (n, s) = (spec.n(), spec.s());
    let lo = l.abs_diff(s);
    let hi = (l + s).min(2 * n - l - s);
    Ok((lo..=hi).step_by(2).collect())
}

pub fn are_adjacent(spec: &WalkSpec, l: usize, t: usize) -> bool {
    layer_neighbors(spec, l).is_ok_and(|ns| ns.contains(&t))
}

/// Number of neighbors in `L_t` of a single vertex in `L_l`.
pub fn connection_count(spec: &WalkSpec, l: usize, t: usize) -> Result<BigUint> {
    check_layer(spec, t)?;
    if !are_adjacent(spec, l, t) {
        return Err(Error::NotAdjacent { l, t });
    }
    let (n, s) = (spec.n() as i64, spec.s() as i64);
    let (l, t) = (l as i64, t as i64);
    // flipping o ones and s - o zeros gives weight l + s - 2o
    let ones = (s + l - t) / 2;
    let zeros = (s + t - l) / 2;
    Ok(binom(l as u64, ones) * binom((n - l) as u64, zeros))
}

/// `k(l) = C(l, l/2) C(n-l, s-l/2)`, the neighbors in `L_s` of a vertex in `L_l`, for even `l`.
pub fn k_value(spec: &WalkSpec, l: usize) -> Result<BigUint> {
    if l % 2 != 0 {
        return Err(Error::Parity(format!("k(l) is defined for even l, got {l}")));
    }
    check_layer(spec, l)?;
    Ok(binom(l as u64, (l / 2) as i64) * binom((spec.n() - l) as u64, spec.s() as i64 - (l / 2) as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSequence {
    /// `k(0), k(2), ..., k(2(s-1))`, truncated at `l <= n`.
    #[serde(serialize_with = "crate::math::serialize_biguints")]
    pub values: Vec<BigUint>,
    /// Whether `6s <= n`.
    pub hypothesis_holds: bool,
}

impl KSequence {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }
}

pub fn k_sequence(spec: &WalkSpec) -> KSequence {
    let (n, s) = (spec.n(), spec.s());
    let values = (0..s)
        .map(|i| 2 * i)
        .take_while(|&l| l <= n)
        .map(|l| k_value(spec, l).expect("even layer within range"))
        .collect();
    KSequence {
        values,
        hypothesis_holds: 6 * s <= n,
    }
}

/// Layers `x` holding a common neighbor of some `v in L_l` and `q in L_t` with `|v xor q| <= 2s` even.
///
/// Empty when `l` and `t` have different parity or no such pair exists.
pub fn local_common_layers(spec: &WalkSpec, l: usize, t: usize) -> Result<Vec<usize>> {
    check_layer(spec, l)?;
    check_layer(spec, t)?;
    if (l + t) % 2 != 0 {
        return Ok(Vec::new());
    }
    let (n, s) = (spec.n(), spec.s());
    let lo = l.abs_diff(s).max(t.abs_diff(s));
    let hi = (l + s).min(2 * n - l - s).min(t + s).min(2 * n - t - s);
    if lo > hi {
        return Ok(Vec::new());
    }
    Ok((lo..=hi).step_by(2).collect())
}

pub fn layer_size(n: usize, l: usize) -> BigUint {
    binom(n as u64, l as i64)
}

/// Whether `L_l` meets the component of `0^n`; odd layers are cut off when `s` is even.
pub fn layer_in_origin_component(spec: &WalkSpec, l: usize) -> bool {
    l <= spec.n() && (spec.s() % 2 == 1 || l % 2 == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerRow {
    pub layer: usize,
    #[serde(serialize_with = "crate::math::serialize_biguint")]
    pub size: BigUint,
    pub in_origin_component: bool,
    pub neighbors: Vec<usize>,
    #[serde(serialize_with = "crate::math::serialize_biguints")]
    pub connection_counts: Vec<BigUint>,
}

/// One row per layer with its neighbor layers and per-vertex connection counts.
pub fn layer_table(spec: &WalkSpec) -> Vec<LayerRow> {
    (0..=spec.n())
        .map(|l| {
            let neighbors = layer_neighbors(spec, l).expect("layer in range");
            let connection_counts = neighbors
                .iter()
                .map(|&t| connection_count(spec, l, t).expect("adjacent"))
                .collect();
            LayerRow {
                layer: l,
                size: layer_size(spec.n(), l),
                in_origin_component: layer_in_origin_component(spec, l),
                neighbors,
                connection_counts,
            }
        })
        .collect()
}

/// Total neighbors counted over `layer_neighbors`; equals `m` for every layer.
pub fn degree_from_layers(spec: &WalkSpec, l: usize) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for t in layer_neighbors(spec, l)? {
        total += connection_count(spec, l, t)?;
    }
    Ok(total)
}
