//! Stochastic incompleteness: the λ-subharmonic certificate
//! `u(v) = 1 - (deg(v) + λ)^{-p}` and a heat-flow mass probe on the
//! Dirichlet truncation.
//!
//! The probe only measures mass absorbed at the truncation boundary. Mass
//! loss on a finite truncation says nothing rigorous about the infinite
//! graph; the certificate does.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::{estimate_rates, lemma_threshold, DegreeProfile, DEFAULT_TAIL_FRACTION};
use crate::spectral::{BoundaryCondition, LaplacianOperator, LinearOperator, DENSE_LIMIT};

/// `e⁻¹`, the supremum of `(1-p)^{1/p}` over `p ∈ (0, 1)`.
pub const INV_E: f64 = 0.367_879_441_171_442_3;

const CHAIN_TOLERANCE: f64 = 1e-9;

/// `ln((1-p)^{1/p})`.
fn log_recipe(p: f64) -> f64 {
    (-p).ln_1p() / p
}

/// Largest `p ∈ (0, 1)` with `s <= (1-p)^{1/p}`, and the extreme admissible
/// `λ = (s/(1-p))^{1/p}`.
pub fn choose_parameters(s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s < INV_E) {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1/e)" });
    }
    let target = s.ln();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if log_recipe(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = if lo > 0.0 { lo } else { 0.5 * hi };
    let lambda = (s / (1.0 - p)).powf(1.0 / p);
    // near 1/e, p -> 0 and λ drops below the normal doubles
    if !lambda.is_normal() {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1/e) with (s/(1-p))^(1/p) a normal double" });
    }
    Ok((p, lambda))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub s: f64,
    pub p: f64,
    pub lambda: f64,
    pub r_inf_hat: f64,
    /// Degree-lemma threshold: `(k+1)/s <= d_k` for every core index `k >= n`.
    pub n: usize,
    /// Closed 1-balls around `v_0, ..., v_{n-1}`, sorted.
    pub k_set: Vec<usize>,
    /// `u(v)` per vertex; absent where the true degree is unknown.
    pub u: Vec<Option<f64>>,
    /// `Σ_{w~v}(u(v) - u(w)) + λ u(v)` at evaluable vertices outside `K`.
    pub defect: Vec<Option<f64>>,
    pub evaluable_count: usize,
    /// Vertices outside `K` whose neighbourhood is not exactly known.
    pub unverifiable_count: usize,
    pub worst_defect: f64,
    pub worst_vertex: Option<usize>,
    /// Least value of `rhs - lhs` in
    /// `Σ_{w~v}(deg(w)+λ)^{-p} <= (s^p/(1-p))((deg(v)+λ)^{1-p} - (sλ)^{1-p})`.
    pub chain_worst_slack: f64,
    /// `(1-p)^{1/p} - s`.
    pub recipe_p_slack: f64,
    /// `s/(1-p) - λ^p`.
    pub recipe_lambda_slack: f64,
    /// `(s^p/(1-p)) (sλ)^{1-p} - λ`.
    pub lambda_step_slack: f64,
}

impl Certificate {
    /// Every evaluated defect is `<= tol` and the chain holds termwise.
    pub fn holds(&self, tol: f64) -> bool {
        self.worst_defect <= tol && self.chain_worst_slack >= -CHAIN_TOLERANCE
    }
}

/// Certificate at rate `s` with the extreme parameters of [`choose_parameters`].
pub fn build_certificate(graph: &Graph, s: f64) -> Result<Certificate> {
    build_certificate_scaled(graph, s, 1.0)
}

/// As [`build_certificate`] with `λ` multiplied by `lambda_factor ∈ (0, 1]`.
pub fn build_certificate_scaled(graph: &Graph, s: f64, lambda_factor: f64) -> Result<Certificate> {
    if !(lambda_factor > 0.0 && lambda_factor <= 1.0) {
        return Err(Error::Domain { name: "lambda_factor", value: lambda_factor, domain: "(0, 1]" });
    }
    let profile = DegreeProfile::from_graph(graph);
    let rates = estimate_rates(&profile, DEFAULT_TAIL_FRACTION)?;
    if rates.r_inf_hat >= INV_E {
        return Err(Error::RateTooHigh { r_inf_hat: rates.r_inf_hat, limit: INV_E });
    }
    if !(s > rates.r_inf_hat && s < INV_E) {
        return Err(Error::Domain { name: "s", value: s, domain: "(r_inf_hat, 1/e)" });
    }
    let (p, lambda_max) = choose_parameters(s)?;
    let lambda = lambda_max * lambda_factor;
    let n = lemma_threshold(&profile, s).ok_or(Error::LemmaFails { s })?;

    let nv = graph.vertex_count();
    let mut in_k = vec![false; nv];
    for &v in &profile.order()[..n] {
        in_k[v] = true;
        graph.for_each_neighbor(v, |w| in_k[w] = true);
    }
    let k_set: Vec<usize> = (0..nv).filter(|&v| in_k[v]).collect();

    // q = 1 - u, kept separately: u is close to 1 and differences of u lose digits
    let q: Vec<Option<f64>> = (0..nv).map(|v| graph.true_degree(v).map(|d| (d as f64 + lambda).powf(-p))).collect();
    let known: Vec<f64> = q.iter().map(|x| x.unwrap_or(0.0)).collect();
    let sums = graph.neighbor_sums(&known);
    let unknown_mask: Vec<f64> = q.iter().map(|x| if x.is_some() { 0.0 } else { 1.0 }).collect();
    let unknown_nbrs = graph.neighbor_sums(&unknown_mask);

    let coeff = s.powf(p) / (1.0 - p);
    let floor = (s * lambda).powf(1.0 - p);
    let mut defect = vec![None; nv];
    let (mut evaluable, mut unverifiable) = (0, 0);
    let mut worst = (f64::NEG_INFINITY, None);
    let mut chain_worst = f64::INFINITY;
    for v in 0..nv {
        if in_k[v] {
            continue;
        }
        if !graph.is_core(v) || q[v].is_none() || unknown_nbrs[v] > 0.0 {
            unverifiable += 1;
            continue;
        }
        let qv = q[v].unwrap();
        let d = graph.degree(v) as f64;
        let value = sums[v] - d * qv + lambda * (1.0 - qv);
        defect[v] = Some(value);
        evaluable += 1;
        if value > worst.0 {
            worst = (value, Some(v));
        }
        let rhs = coeff * ((d + lambda).powf(1.0 - p) - floor);
        chain_worst = chain_worst.min(rhs - sums[v]);
    }
    Ok(Certificate {
        s,
        p,
        lambda,
        r_inf_hat: rates.r_inf_hat,
        n,
        k_set,
        u: q.iter().map(|x| x.map(|q| 1.0 - q)).collect(),
        defect,
        evaluable_count: evaluable,
        unverifiable_count: unverifiable,
        worst_defect: worst.0,
        worst_vertex: worst.1,
        chain_worst_slack: chain_worst,
        recipe_p_slack: log_recipe(p).exp() - s,
        recipe_lambda_slack: s / (1.0 - p) - lambda.powf(p),
        lambda_step_slack: coeff * floor - lambda,
    })
}

/// `Σ_{w~v}(u(v) - u(w)) + λ u(v)`, summed edge by edge. `v` must be a core
/// vertex, so that its whole neighbourhood is present.
pub fn defect(graph: &Graph, u: &[f64], lambda: f64, v: usize) -> Result<f64> {
    graph.check_vertex(v)?;
    if u.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch { left: u.len(), right: graph.vertex_count() });
    }
    if !graph.is_core(v) {
        return Err(Error::BoundaryVertex(v));
    }
    let mut acc = 0.0;
    graph.for_each_neighbor(v, |w| acc += u[v] - u[w]);
    Ok(acc + lambda * u[v])
}

/// [`defect`] at every core vertex at once; `None` off the core.
pub fn defects(graph: &Graph, u: &[f64], lambda: f64) -> Result<Vec<Option<f64>>> {
    if u.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch { left: u.len(), right: graph.vertex_count() });
    }
    let sums = graph.neighbor_sums(u);
    Ok((0..graph.vertex_count())
        .map(|v| graph.is_core(v).then(|| graph.degree(v) as f64 * u[v] - sums[v] + lambda * u[v]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatSolver {
    /// Cholesky factor of the step matrix on the twin-class quotient.
    Dense,
    /// Conjugate gradients on the full core.
    Cg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatCurve {
    pub times: Vec<f64>,
    /// `Σ_v u_t(v)` over the core.
    pub mass: Vec<f64>,
    pub step: f64,
    pub core_size: usize,
    pub solver: HeatSolver,
}

impl HeatCurve {
    /// Largest increase between consecutive samples, `0` if none.
    pub fn worst_increase(&self) -> f64 {
        self.mass.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// `u' = -Δu` on the core with absorbing boundary and `u(0) = 1`, stepped
/// with `u_{k+1} = (I + hA + h²A²/2)⁻¹ u_k`.
///
/// The amplification factor `1/(1 + x + x²/2)` lies in `(0, 1]` for `x >= 0`,
/// so every spectral component of the mass decays monotonically, however
/// stiff the operator; the scheme is second order.
pub fn heat_mass(graph: &Graph, t_end: f64, steps: usize) -> Result<HeatCurve> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain { name: "t_end", value: t_end, domain: "(0, inf)" });
    }
    if steps == 0 {
        return Err(Error::Domain { name: "steps", value: 0.0, domain: ">= 1" });
    }
    let op = LaplacianOperator::assemble(graph, BoundaryCondition::Dirichlet)?;
    let h = t_end / steps as f64;
    let classes = op.twin_classes();
    let mut times = Vec::with_capacity(steps + 1);
    let mut mass = Vec::with_capacity(steps + 1);
    times.push(0.0);
    mass.push(op.dim() as f64);
    let solver = if classes.len() <= DENSE_LIMIT {
        let q = op.quotient(&classes);
        let hq = q * h;
        let b = DMatrix::identity(hq.nrows(), hq.nrows()) + &hq + &hq * &hq * 0.5;
        let chol = b.cholesky().ok_or_else(|| Error::SolverFailure("step matrix not positive definite".into()))?;
        let weights = DVector::from_iterator(classes.len(), classes.iter().map(|c| (c.size() as f64).sqrt()));
        let mut y = weights.clone();
        for k in 1..=steps {
            y = chol.solve(&y);
            times.push(k as f64 * h);
            mass.push(weights.dot(&y));
        }
        HeatSolver::Dense
    } else {
        let mut u = vec![1.0; op.dim()];
        for k in 1..=steps {
            u = solve_step(&op, h, &u)?;
            times.push(k as f64 * h);
            mass.push(u.iter().sum());
        }
        HeatSolver::Cg
    };
    Ok(HeatCurve { times, mass, step: h, core_size: op.dim(), solver })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `(I + hA + h²A²/2) x = rhs` by conjugate gradients.
fn solve_step(op: &LaplacianOperator<'_>, h: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut tmp = vec![0.0; n];
    let mut tmp2 = vec![0.0; n];
    let mut apply = |x: &[f64], out: &mut [f64]| {
        op.apply(x, &mut tmp);
        op.apply(&tmp, &mut tmp2);
        for i in 0..n {
            out[i] = x[i] + h * tmp[i] + 0.5 * h * h * tmp2[i];
        }
    };
    let mut x = rhs.to_vec();
    let mut r = vec![0.0; n];
    apply(&x, &mut r);
    for i in 0..n {
        r[i] = rhs[i] - r[i];
    }
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let target = 1e-26 * dot(rhs, rhs).max(f64::MIN_POSITIVE);
    for _ in 0..10 * n + 100 {
        if rr <= target {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let next = dot(&r, &r);
        let beta = next / rr;
        rr = next;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::SolverFailure(format!("conjugate gradients stalled at residual {}", rr.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antitree, baseline, AntitreeSpec, Baseline};
    use crate::graph::build_graph;

    #[test]
    fn quarter_gives_half() {
        let (p, lambda) = choose_parameters(0.25).unwrap();
        assert!((p - 0.5).abs() < 1e-11);
        assert!((lambda - 0.25).abs() < 1e-10);
    }

    #[test]
    fn recipe_inequalities_on_grid() {
        for i in 0..100 {
            let s = 0.01 + (INV_E - 0.01) * i as f64 / 100.0;
            let (p, lambda) = choose_parameters(s).unwrap();
            assert!(p > 0.0 && p < 1.0);
            assert!((1.0 - p).powf(1.0 / p) - s >= -1e-12);
            assert!(s / (1.0 - p) - lambda.powf(p) >= -1e-12);
        }
        let (p, _) = choose_parameters(0.367).unwrap();
        assert!(p < 1e-2);
        // λ = (s/(1-p))^{1/p} is far below the smallest double here
        assert!(choose_parameters(INV_E - 1e-9).is_err());
        assert!(choose_parameters(INV_E).is_err() && choose_parameters(0.0).is_err());
    }

    #[test]
    fn constants_and_zero() {
        let g = antitree(&AntitreeSpec { sigma: 2, depth: 3 }, 100).unwrap();
        let n = g.vertex_count();
        assert_eq!(defect(&g, &vec![0.0; n], 0.3, 2).unwrap(), 0.0);
        assert!((defect(&g, &vec![0.7; n], 0.3, 2).unwrap() - 0.21).abs() < 1e-15);
        assert!(matches!(defect(&g, &vec![0.0; n], 0.3, n - 1), Err(Error::BoundaryVertex(_))));
    }

    #[test]
    fn vectorized_matches_direct() {
        let g = antitree(&AntitreeSpec { sigma: 3, depth: 3 }, 100).unwrap();
        let u: Vec<f64> = (0..g.vertex_count()).map(|v| 1.0 / (1.0 + v as f64)).collect();
        let all = defects(&g, &u, 0.1).unwrap();
        for v in g.core_vertices() {
            assert!((all[v].unwrap() - defect(&g, &u, 0.1, v).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn antitree_certificate() {
        let g = antitree(&AntitreeSpec { sigma: 4, depth: 5 }, 10_000).unwrap();
        let c = build_certificate(&g, 0.35).unwrap();
        assert!(c.holds(1e-9), "{} {}", c.worst_defect, c.chain_worst_slack);
        assert!(c.u.iter().flatten().all(|&u| u > 0.0 && u < 1.0));
        assert_eq!(c.unverifiable_count, 4usize.pow(5));
        let direct: Vec<f64> = c.u.iter().map(|u| u.unwrap()).collect();
        let v = c.worst_vertex.unwrap();
        assert!((defect(&g, &direct, c.lambda, v).unwrap() - c.worst_defect).abs() < 1e-9);
    }

    #[test]
    fn slow_antitree_is_rejected() {
        let g = antitree(&AntitreeSpec { sigma: 2, depth: 6 }, 1000).unwrap();
        assert!(matches!(build_certificate(&g, 0.36), Err(Error::RateTooHigh { .. })));
    }

    #[test]
    fn single_vertex_heat() {
        let g = build_graph(&[(0, 1), (0, 2), (0, 3)], Some(vec![true, false, false, false])).unwrap();
        let c = heat_mass(&g, 1.0, 4000).unwrap();
        assert_eq!(c.mass[0], 1.0);
        assert!((c.mass[4000] - (-3.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn heat_dense_and_cg_agree() {
        let g = baseline(Baseline::RegularTree { branching: 2, depth: 5 }, 100).unwrap();
        let dense = heat_mass(&g, 0.5, 10).unwrap();
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap();
        let mut u = vec![1.0; op.dim()];
        for k in 1..=10 {
            u = solve_step(&op, 0.05, &u).unwrap();
            assert!((u.iter().sum::<f64>() - dense.mass[k]).abs() < 1e-9);
        }
        assert!(dense.worst_increase() == 0.0);
        assert!(dense.mass[10] < dense.mass[0]);
    }
}
