//! Volume growth of balls and the forced exponential rate `2 log a`, where `a`
//! is the largest real root of `p(z) = z³ - s⁻¹z² - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::{estimate_rates, lemma_threshold, DegreeProfile, DEFAULT_TAIL_FRACTION};

/// `z³ - s⁻¹z² - 1`.
pub fn growth_polynomial(s: f64, z: f64) -> f64 {
    z * z * (z - 1.0 / s) - 1.0
}

/// Largest real root of `z³ - s⁻¹z² - 1`, by bisection on `[s⁻¹, s⁻¹ + 1]`:
/// `p(s⁻¹) = -1` and `p(s⁻¹ + 1) = (s⁻¹ + 1)² - 1 > 0`, and `p` is increasing
/// to the right of `2/(3s)`, so the root there is unique.
pub fn largest_root(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1)" });
    }
    let (mut lo, mut hi) = (1.0 / s, 1.0 / s + 1.0);
    // run until no double lies strictly between the brackets
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if growth_polynomial(s, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if growth_polynomial(s, lo).abs() <= growth_polynomial(s, hi).abs() { lo } else { hi })
}

/// The companion matrix `M_s = [[0,1,0],[0,0,1],[1,0,s⁻¹]]`, whose
/// characteristic polynomial is `p`.
pub fn companion(s: f64) -> [[f64; 3]; 3] {
    [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 1.0 / s]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronResult {
    pub eigenvalue: f64,
    /// Normalized to unit sum.
    pub eigenvector: [f64; 3],
    /// `‖M x - λ x‖_∞`.
    pub residual: f64,
    pub root: f64,
    pub iterations: usize,
}

/// Dominant eigenpair of `M_s` by power iteration. `M_s` is irreducible with
/// a positive diagonal entry, hence primitive, so the iteration converges to
/// the Perron pair.
pub fn perron_check(s: f64) -> Result<PerronResult> {
    let root = largest_root(s)?;
    let m = companion(s);
    let mul = |x: &[f64; 3]| -> [f64; 3] {
        let mut y = [0.0; 3];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..3).map(|j| m[i][j] * x[j]).sum();
        }
        y
    };
    let mut x = [1.0 / 3.0; 3];
    let mut lambda = 0.0;
    for it in 1..=100_000 {
        let y = mul(&x);
        let total: f64 = y.iter().sum();
        let next = [y[0] / total, y[1] / total, y[2] / total];
        let change = (0..3).map(|i| (next[i] - x[i]).abs()).fold(0.0, f64::max);
        x = next;
        lambda = total;
        if change < 1e-15 {
            let mx = mul(&x);
            let residual = (0..3).map(|i| (mx[i] - lambda * x[i]).abs()).fold(0.0, f64::max);
            if (lambda - root).abs() > 1e-8 * root {
                return Err(Error::ConvergenceFailure(format!("Perron value {lambda} differs from root {root}")));
            }
            if x.iter().any(|&v| v <= 0.0) {
                return Err(Error::ConvergenceFailure(format!("eigenvector {x:?} not positive")));
            }
            return Ok(PerronResult { eigenvalue: lambda, eigenvector: x, residual, root, iterations: it });
        }
    }
    Err(Error::ConvergenceFailure(format!("power iteration stalled at {lambda}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub root_vertex: usize,
    /// `vol(B_n(v))` for `n = 0..=n_max`.
    pub ball_volumes: Vec<u64>,
    /// `#B_n(v)` for `n = 0..=n_max`.
    pub ball_sizes: Vec<usize>,
    /// `(1/n) log vol(B_n(v))`; entry `i` belongs to `n = i + 1`.
    pub rate_samples: Vec<f64>,
    /// Rate used for the bound.
    pub s: f64,
    /// Largest root of `p` at `s`; absent when `s` is outside `(0, 1)`.
    pub a_s: Option<f64>,
    /// `2 log a_s`.
    pub bound: Option<f64>,
}

/// Largest `n <= n_max` with `B_n(v)` inside the reliable core.
pub fn core_radius(graph: &Graph, v: usize, n_max: usize) -> Result<Option<usize>> {
    graph.check_vertex(v)?;
    let dist = graph.distances(v, Some(n_max + 1));
    let first_outside = (0..graph.vertex_count()).filter(|&w| !graph.is_core(w) && dist[w] != u32::MAX).map(|w| dist[w] as usize).min();
    Ok(match first_outside {
        Some(0) => None,
        Some(d) => Some((d - 1).min(n_max)),
        None => Some(n_max),
    })
}

/// Ball volumes around `v` up to radius `n_max`, compared with `2 log a_s` for
/// `s` given or, by default, the `r∞` estimate of the core.
pub fn measure_growth(graph: &Graph, v: usize, n_max: usize, s: Option<f64>) -> Result<GrowthEstimate> {
    if core_radius(graph, v, n_max)? != Some(n_max) {
        return Err(Error::CoreExceeded { radius: n_max });
    }
    let dist = graph.distances(v, Some(n_max));
    let mut vol_at = vec![0u64; n_max + 1];
    let mut count_at = vec![0usize; n_max + 1];
    for (w, &d) in dist.iter().enumerate() {
        if d != u32::MAX {
            vol_at[d as usize] += graph.degree(w);
            count_at[d as usize] += 1;
        }
    }
    let mut ball_volumes = Vec::with_capacity(n_max + 1);
    let mut ball_sizes = Vec::with_capacity(n_max + 1);
    let (mut vol, mut count) = (0u64, 0usize);
    for n in 0..=n_max {
        vol += vol_at[n];
        count += count_at[n];
        ball_volumes.push(vol);
        ball_sizes.push(count);
    }
    let rate_samples = (1..=n_max).map(|n| (ball_volumes[n] as f64).ln() / n as f64).collect();
    let s = match s {
        Some(s) => s,
        None => estimate_rates(&DegreeProfile::from_graph(graph), DEFAULT_TAIL_FRACTION)?.r_inf_hat,
    };
    let a_s = largest_root(s).ok();
    Ok(GrowthEstimate { root_vertex: v, ball_volumes, ball_sizes, rate_samples, s, a_s, bound: a_s.map(|a| 2.0 * a.ln()) })
}

/// `vol(B_k(v)) - (3/(8s)) (#B_k(v))²`, valid once `#B_k(v) >= 2 n0` where `n0`
/// is the degree-lemma threshold of the core at rate `s`.
pub fn volume_vs_count_check(graph: &Graph, v: usize, k: usize, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1)" });
    }
    if core_radius(graph, v, k)? != Some(k) {
        return Err(Error::PreconditionNotMet(format!("B_{k}({v}) leaves the reliable core")));
    }
    let profile = DegreeProfile::from_graph(graph);
    let n0 = lemma_threshold(&profile, s)
        .ok_or_else(|| Error::PreconditionNotMet(format!("degree lemma fails on the whole core at s = {s}")))?;
    let count = graph.ball(v, k)?.len();
    if count < 2 * n0 {
        return Err(Error::PreconditionNotMet(format!("#B_{k}({v}) = {count} < 2 n0 = {}", 2 * n0)));
    }
    volume_vs_count_slack(graph, v, k, s)
}

/// The same slack evaluated directly, requiring only that `B_k(v)` lies in
/// the reliable core.
pub fn volume_vs_count_slack(graph: &Graph, v: usize, k: usize, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1)" });
    }
    if core_radius(graph, v, k)? != Some(k) {
        return Err(Error::PreconditionNotMet(format!("B_{k}({v}) leaves the reliable core")));
    }
    let ball = graph.ball(v, k)?;
    let vol: u64 = ball.iter().map(|&w| graph.degree(w)).sum();
    let count = ball.len() as f64;
    Ok(vol as f64 - 3.0 / (8.0 * s) * count * count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antitree, baseline, AntitreeSpec, Baseline};

    type Poly = Vec<f64>;

    fn padd(a: &Poly, b: &Poly) -> Poly {
        (0..a.len().max(b.len())).map(|i| a.get(i).unwrap_or(&0.0) + b.get(i).unwrap_or(&0.0)).collect()
    }

    fn pmul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn pneg(a: &Poly) -> Poly {
        a.iter().map(|x| -x).collect()
    }

    #[test]
    fn characteristic_polynomial_by_cofactors() {
        for s in [0.1, 0.25, 0.5, 0.9] {
            let m = companion(s);
            // entries of zI - M as polynomials in z
            let e: Vec<Vec<Poly>> = (0..3)
                .map(|i| (0..3).map(|j| vec![-m[i][j], if i == j { 1.0 } else { 0.0 }]).collect())
                .collect();
            let minor = |r1: usize, r2: usize, c1: usize, c2: usize| padd(&pmul(&e[r1][c1], &e[r2][c2]), &pneg(&pmul(&e[r1][c2], &e[r2][c1])));
            let det = padd(
                &padd(&pmul(&e[0][0], &minor(1, 2, 1, 2)), &pneg(&pmul(&e[0][1], &minor(1, 2, 0, 2)))),
                &pmul(&e[0][2], &minor(1, 2, 0, 1)),
            );
            let want = [-1.0, 0.0, -1.0 / s, 1.0];
            for (c, w) in det.iter().zip(want) {
                assert!((c - w).abs() < 1e-12, "{det:?}");
            }
        }
    }

    #[test]
    fn roots() {
        let a = largest_root(0.5).unwrap();
        assert!((a - 2.205569).abs() < 1e-6);
        assert!(growth_polynomial(0.5, a).abs() < 1e-10);
        let b = largest_root(1.0 - 1e-12).unwrap();
        assert!((b - 1.465571).abs() < 1e-6);
        assert!(largest_root(1.0).is_err() && largest_root(0.0).is_err());
    }

    #[test]
    fn root_monotone() {
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 101.0).collect();
        let roots: Vec<f64> = grid.iter().map(|&s| largest_root(s).unwrap()).collect();
        assert!(roots.windows(2).all(|w| w[1] <= w[0]));
        assert!(grid.iter().zip(&roots).all(|(&s, &a)| a > 1.0 / s && growth_polynomial(s, a).abs() < 1e-10 * a * a * a));
    }

    #[test]
    fn perron_agrees() {
        for s in [0.1, 0.25, 0.5, 0.9] {
            let p = perron_check(s).unwrap();
            assert!((p.eigenvalue - p.root).abs() < 1e-8);
            assert!(p.eigenvector.iter().all(|&x| x >= 1e-6));
        }
    }

    #[test]
    fn complete_graph_ball() {
        let g = baseline(Baseline::Complete { n: 5 }, 10).unwrap();
        let est = measure_growth(&g, 0, 1, Some(0.5)).unwrap();
        assert_eq!(est.ball_volumes, vec![4, 20]);
    }

    #[test]
    fn antitree_volumes_closed_form() {
        let spec = AntitreeSpec { sigma: 2, depth: 6 };
        let g = antitree(&spec, 1000).unwrap();
        let est = measure_growth(&g, 0, 5, None).unwrap();
        let mut vol = 0u128;
        for n in 0..=5 {
            vol += (1u128 << n) * spec.degree(n);
            assert_eq!(est.ball_volumes[n] as u128, vol);
        }
        assert!(matches!(measure_growth(&g, 0, 6, None), Err(Error::CoreExceeded { radius: 6 })));
    }

    #[test]
    fn volume_count_slack() {
        let g = antitree(&AntitreeSpec { sigma: 4, depth: 6 }, 10_000).unwrap();
        assert!(volume_vs_count_check(&g, 0, 3, 0.4).unwrap() >= 0.0);
        let p = baseline(Baseline::Path { n: 10 }, 10).unwrap();
        assert!(matches!(volume_vs_count_check(&p, 5, 1, 0.5), Err(Error::PreconditionNotMet(_))));
    }
}
