use serde::{Deserialize, Serialize};

use super::eigen::{eigenvalues, Solver};
use super::gamma::gamma;
use super::operator::{BoundaryCondition, LaplacianOperator, LinearOperator};
use crate::error::Result;
use crate::graph::Graph;
use crate::profile::{estimate_rates, DegreeProfile, DEFAULT_TAIL_FRACTION};

/// Bottom of the degree-normalized Dirichlet Laplacian compared against both
/// candidate lower bounds `γ(r)` and `1 - γ(r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedReport {
    pub lambda0: f64,
    pub r_hat: f64,
    pub gamma_bound: Option<f64>,
    pub one_minus_gamma_bound: Option<f64>,
    pub holds_gamma: Option<bool>,
    pub holds_one_minus_gamma: Option<bool>,
    /// Smallest and largest normalized eigenvalue (full spectrum only).
    pub spectrum_range: Option<(f64, f64)>,
    /// Share of normalized eigenvalues within 0.1 of 1 (full spectrum only).
    pub near_one_fraction: Option<f64>,
}

pub fn normalized_bottom(graph: &Graph) -> Result<NormalizedReport> {
    let op = LaplacianOperator::assemble_normalized(graph, BoundaryCondition::Dirichlet)?;
    let full = op.twin_classes().len() <= super::DENSE_LIMIT || op.dim() <= super::DENSE_LIMIT;
    let spectrum = eigenvalues(&op, if full { None } else { Some(1) }, Solver::Auto)?;
    let rates = estimate_rates(&DegreeProfile::from_graph(graph), DEFAULT_TAIL_FRACTION)?;
    let lambda0 = spectrum.lambda0();
    let g = gamma(rates.r_hat).ok().map(|g| g.value);
    let tol = spectrum.solver_tolerance;
    let (spectrum_range, near_one_fraction) = if full {
        let ev = &spectrum.eigenvalues;
        let near = ev.iter().filter(|&&x| (x - 1.0).abs() <= 0.1).count();
        (Some((ev[0], ev[ev.len() - 1])), Some(near as f64 / ev.len() as f64))
    } else {
        (None, None)
    };
    Ok(NormalizedReport {
        lambda0,
        r_hat: rates.r_hat,
        gamma_bound: g,
        one_minus_gamma_bound: g.map(|g| 1.0 - g),
        holds_gamma: g.map(|g| lambda0 >= g - tol),
        holds_one_minus_gamma: g.map(|g| lambda0 >= 1.0 - g - tol),
        spectrum_range,
        near_one_fraction,
    })
}
