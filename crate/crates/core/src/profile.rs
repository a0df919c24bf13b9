//! Degree statistics over the reliable core: the sorted degree sequence
//! `d_0 <= d_1 <= ...`, the counting function `η(k) = #{v : deg(v) <= k}`
//! and windowed estimates of `r = sup η(k)/k` and `r∞ = limsup η(k)/k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default fraction of the degree range used for the `r∞` window.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    degrees: Vec<u64>,
    order: Vec<usize>,
}

impl DegreeProfile {
    /// Profile of the reliable core. Ties are broken by vertex index, which
    /// fixes the enumeration `v_0, v_1, ...`.
    pub fn from_graph(graph: &Graph) -> Self {
        let mut order = graph.core_vertices();
        order.sort_by_key(|&v| (graph.degree(v), v));
        let degrees = order.iter().map(|&v| graph.degree(v)).collect();
        DegreeProfile { degrees, order }
    }

    pub fn from_degrees(mut degrees: Vec<u64>) -> Self {
        degrees.sort_unstable();
        let order = (0..degrees.len()).collect();
        DegreeProfile { degrees, order }
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Core vertices in enumeration order `v_0, v_1, ...`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn min_degree(&self) -> Option<u64> {
        self.degrees.first().copied()
    }

    pub fn k_max(&self) -> Option<u64> {
        self.degrees.last().copied()
    }

    pub fn eta(&self, k: u64) -> usize {
        self.degrees.partition_point(|&d| d <= k)
    }

    /// `η` at a real argument.
    pub fn eta_real(&self, lambda: f64) -> usize {
        if lambda < 0.0 {
            return 0;
        }
        self.eta(lambda.floor() as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub r_hat: f64,
    pub r_inf_hat: f64,
    /// Inclusive k-range used for `r_inf_hat`.
    pub window: (u64, u64),
    pub argmax_k: u64,
}

pub fn eta(profile: &DegreeProfile, k: u64) -> usize {
    profile.eta(k)
}

/// `r_hat = max_{1<=k<=k_max} η(k)/k`, `r_inf_hat` the same maximum over the
/// top `tail_fraction` of `[1, k_max]`.
///
/// On `[d_i, d_{i+1})` the counting function is constant, so `η(k)/k` peaks at
/// degree values and at the left end of the window; only those are evaluated.
pub fn estimate_rates(profile: &DegreeProfile, tail_fraction: f64) -> Result<RateEstimate> {
    if profile.is_empty() {
        return Err(Error::EmptyCore);
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Domain { name: "tail_fraction", value: tail_fraction, domain: "(0, 1]" });
    }
    let k_max = profile.k_max().unwrap().max(1);
    let ratio = |k: u64| profile.eta(k) as f64 / k as f64;
    let best = |lo: u64| -> (f64, u64) {
        let mut best = (ratio(lo), lo);
        let mut candidates: Vec<u64> = profile.degrees.iter().copied().filter(|&d| d >= lo && d <= k_max).collect();
        candidates.dedup();
        for k in candidates {
            let r = ratio(k);
            if r > best.0 {
                best = (r, k);
            }
        }
        best
    };
    let (r_hat, argmax_k) = best(1);
    let lo = ((k_max as f64) * (1.0 - tail_fraction)).ceil().max(1.0) as u64;
    let (r_inf_hat, _) = best(lo.min(k_max));
    Ok(RateEstimate { r_hat, r_inf_hat, window: (lo.min(k_max), k_max), argmax_k })
}

/// True iff `(k+1)/s <= d_k` for every core index `k >= n0`.
pub fn check_basic_lemma(profile: &DegreeProfile, s: f64, n0: usize) -> bool {
    profile.degrees.iter().enumerate().skip(n0).all(|(k, &d)| (k + 1) as f64 / s <= d as f64)
}

/// Smallest `n` with `(k+1)/s <= d_k` for all `k >= n` in the core, or `None`
/// if the bound fails at the last core index.
pub fn lemma_threshold(profile: &DegreeProfile, s: f64) -> Option<usize> {
    let last_fail = profile.degrees.iter().enumerate().rposition(|(k, &d)| (k + 1) as f64 / s > d as f64);
    match last_fail {
        None => Some(0),
        Some(k) if k + 1 < profile.len() => Some(k + 1),
        Some(_) => None,
    }
}
