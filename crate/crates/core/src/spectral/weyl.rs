use serde::{Deserialize, Serialize};

use super::eigen::SpectrumResult;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::DegreeProfile;

pub const DEFAULT_WINDOW_FACTOR: f64 = 0.5;

/// Upper end of the energy range where a Dirichlet truncation is trusted:
/// `factor` times the smallest degree among excised vertices. Infinite when
/// nothing was excised.
pub fn reliable_window(graph: &Graph, factor: f64) -> f64 {
    (0..graph.vertex_count())
        .filter(|&v| !graph.is_core(v))
        .map(|v| graph.degree(v))
        .min()
        .map_or(f64::INFINITY, |d| factor * d as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub lambda: f64,
    pub count: usize,
    pub eta: usize,
    /// `N(λ)/η(λ)`; `0` when both vanish, `+∞` when only `η` does.
    pub ratio: f64,
}

pub fn counting_and_weyl(spectrum: &SpectrumResult, profile: &DegreeProfile, grid: &[f64], window: f64) -> Result<Vec<WeylPoint>> {
    grid.iter()
        .map(|&lambda| {
            if !(0.0..=window).contains(&lambda) {
                return Err(Error::GridOutOfRange { lambda, window });
            }
            let count = spectrum.counting(lambda);
            let eta = profile.eta_real(lambda);
            let ratio = match (count, eta) {
                (0, 0) => 0.0,
                (_, 0) => f64::INFINITY,
                (c, e) => c as f64 / e as f64,
            };
            Ok(WeylPoint { lambda, count, eta, ratio })
        })
        .collect()
}

/// Every point in `[d_0, window]` where `N` or `η` jumps. Both counting
/// functions are right-continuous step functions, so evaluating at these
/// points visits every value the ratio takes on the window.
pub fn breakpoint_grid(spectrum: &SpectrumResult, profile: &DegreeProfile, window: f64) -> Vec<f64> {
    let Some(d0) = profile.min_degree() else {
        return Vec::new();
    };
    let d0 = d0 as f64;
    let mut grid: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .copied()
        .chain(profile.degrees().iter().map(|&d| d as f64))
        .chain(std::iter::once(d0))
        .filter(|&x| x >= d0 && x <= window)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= super::TIE_TOLERANCE);
    grid
}

/// `λ_k / d_k` for every computed eigenvalue.
pub fn eigen_ratios(spectrum: &SpectrumResult, profile: &DegreeProfile) -> Result<Vec<f64>> {
    if spectrum.eigenvalues.len() > profile.len() {
        return Err(Error::LengthMismatch { left: spectrum.eigenvalues.len(), right: profile.len() });
    }
    Ok(spectrum.eigenvalues.iter().zip(profile.degrees()).map(|(l, &d)| l / d as f64).collect())
}

/// Indices `k` with both `λ_k` and `d_k` inside the reliable window.
pub fn reliable_index_window(spectrum: &SpectrumResult, profile: &DegreeProfile, window: f64) -> std::ops::Range<usize> {
    let end = spectrum
        .eigenvalues
        .iter()
        .zip(profile.degrees())
        .take_while(|(l, &d)| **l <= window && d as f64 <= window)
        .count();
    0..end
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub count: usize,
}

pub fn summarize(values: &[f64]) -> Option<RatioSummary> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    Some(RatioSummary { min: v[0], median, max: v[n - 1], count: n })
}
