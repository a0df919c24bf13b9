//! Isoperimetric constants `α = inf #∂U / vol(U)` by connected-subset search,
//! the closed-form lower bound `1 - 2r/(1+r²)` and the per-block ratios of
//! the block family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::{estimate_rates, DegreeProfile, DEFAULT_TAIL_FRACTION};

/// Largest subset size accepted by [`alpha_bruteforce`].
pub const MAX_EXHAUSTIVE_SIZE: usize = 20;

/// `1 - 2r/(1+r²)` for `r ∈ [0, 1]`.
pub fn alpha_lower_bound(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain { name: "r", value: r, domain: "[0, 1]" });
    }
    Ok(1.0 - 2.0 * r / (1.0 + r * r))
}

/// Minimizer of `#∂U / vol(U)` found by the subset search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetMinimum {
    pub boundary: u64,
    pub volume: u64,
    pub set: Vec<usize>,
    /// Connected sets visited.
    pub evaluated: u64,
}

impl SubsetMinimum {
    pub fn ratio(&self) -> f64 {
        self.boundary as f64 / self.volume as f64
    }

    /// Smaller ratio first, then smaller set, then lexicographic.
    fn better_than(&self, other: &Self) -> bool {
        let lhs = self.boundary as u128 * other.volume as u128;
        let rhs = other.boundary as u128 * self.volume as u128;
        lhs.cmp(&rhs)
            .then(self.set.len().cmp(&other.set.len()))
            .then_with(|| self.set.cmp(&other.set))
            .is_lt()
    }
}

fn pick(a: Option<SubsetMinimum>, b: Option<SubsetMinimum>) -> Option<SubsetMinimum> {
    match (a, b) {
        (Some(x), Some(y)) => {
            let total = x.evaluated + y.evaluated;
            let mut best = if y.better_than(&x) { y } else { x };
            best.evaluated = total;
            Some(best)
        }
        (x, None) => x,
        (None, y) => y,
    }
}

/// Minimum of `#∂U / vol(U)` over connected `U` with `1 <= #U <= max_size`.
///
/// With `restrict_to_core`, `U` avoids non-core vertices, so every boundary
/// edge of `U` is an edge of the untruncated graph.
///
/// Restricting to connected sets loses nothing. If `U` splits into components
/// `U_1, ..., U_m` with no edges between them, then `#∂U = Σ #∂U_i` and
/// `vol(U) = Σ vol(U_i)`, so the ratio of `U` is a mediant of the component
/// ratios and at least their minimum; every component is smaller than `U`.
///
/// On a finite graph a set equal to the whole vertex set has ratio `0`; keep
/// `max_size` below the vertex count to avoid that artifact.
pub fn alpha_bruteforce(graph: &Graph, max_size: usize, restrict_to_core: bool) -> Result<Option<SubsetMinimum>> {
    let allowed: Vec<bool> = (0..graph.vertex_count()).map(|v| !restrict_to_core || graph.is_core(v)).collect();
    alpha_search(graph, max_size, &allowed)
}

/// [`alpha_bruteforce`] over subsets of the vertices with `allowed[v]`.
pub fn alpha_search(graph: &Graph, max_size: usize, allowed: &[bool]) -> Result<Option<SubsetMinimum>> {
    if max_size > MAX_EXHAUSTIVE_SIZE {
        return Err(Error::TooLarge(max_size));
    }
    if allowed.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch { left: allowed.len(), right: graph.vertex_count() });
    }
    if max_size == 0 {
        return Ok(None);
    }
    let roots: Vec<usize> = (0..graph.vertex_count()).filter(|&v| allowed[v]).collect();
    Ok(roots
        .into_par_iter()
        .map(|root| {
            let mut search = Search { graph, allowed, root, max_size, set: Vec::new(), best: None, evaluated: 0 };
            search.extend_from(root, 0, 0, &[]);
            search.best.map(|mut b| {
                b.evaluated = search.evaluated;
                b
            })
        })
        .reduce(|| None, pick))
}

/// Enumerates every connected set whose smallest vertex is `root` exactly
/// once: a vertex enters the extension list only when it is adjacent to the
/// newest member and to no earlier member.
struct Search<'a> {
    graph: &'a Graph,
    allowed: &'a [bool],
    root: usize,
    max_size: usize,
    set: Vec<usize>,
    best: Option<SubsetMinimum>,
    evaluated: u64,
}

impl Search<'_> {
    fn extend_from(&mut self, w: usize, vol: u64, boundary: u64, ext: &[usize]) {
        let g = self.graph;
        let inside = self.set.iter().filter(|&&u| g.is_adjacent(u, w)).count() as u64;
        let deg = g.degree(w);
        let vol = vol + deg;
        let boundary = boundary + deg - 2 * inside;
        self.set.push(w);
        self.evaluated += 1;
        if vol > 0 {
            let mut sorted = self.set.clone();
            sorted.sort_unstable();
            let cand = SubsetMinimum { boundary, volume: vol, set: sorted, evaluated: 0 };
            if self.best.as_ref().is_none_or(|b| cand.better_than(b)) {
                self.best = Some(cand);
            }
        }
        if self.set.len() < self.max_size {
            let mut next: Vec<usize> = ext.to_vec();
            for x in g.neighbors(w) {
                if x > self.root
                    && self.allowed[x]
                    && !self.set.contains(&x)
                    && !next.contains(&x)
                    && !self.set[..self.set.len() - 1].iter().any(|&u| g.is_adjacent(u, x))
                {
                    next.push(x);
                }
            }
            for i in 0..next.len() {
                self.extend_from(next[i], vol, boundary, &next[i + 1..]);
            }
        }
        self.set.pop();
    }
}

/// `#∂U - Σ_{v∈U} (deg(v) - N)₊` with `N + 1 = #U`; never negative, because
/// each `v ∈ U` has at most `N` neighbours inside `U`.
pub fn counting_bound_check(graph: &Graph, set: &[usize]) -> Result<i64> {
    let mut unique = set.to_vec();
    unique.sort_unstable();
    unique.dedup();
    let (_, boundary) = graph.vol_and_boundary(&unique)?;
    let n = unique.len() as u64 - 1;
    let forced: u64 = unique.iter().map(|&v| graph.degree(v).saturating_sub(n)).sum();
    Ok(boundary as i64 - forced as i64)
}

/// Boundary ratio of one generation of a labelled truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRatio {
    pub n: usize,
    pub size: u64,
    pub volume: u64,
    pub boundary: u64,
    pub ratio: f64,
    /// `1 - (2s/(1+s²)) (l-1)/(l+4)`.
    pub bound: f64,
    /// Exact rational comparison `ratio <= bound`.
    pub within_bound: bool,
    /// `vol(V_n) = l(l-1) + #∂V_n`, where `l(l-1)` counts ordered pairs inside the block.
    pub identity_holds: bool,
    /// False for the outermost generation, whose volume relies on exterior degrees.
    pub in_core: bool,
}

/// Per-block `#∂V_n / vol(V_n)` of a block-family truncation against the
/// upper bound `1 - (2s/(1+s²)) (l(n)-1)/(l(n)+4)`. Volumes use true degrees,
/// so the outermost block is included.
pub fn block_ratio_scan(graph: &Graph, s: f64) -> Result<Vec<BlockRatio>> {
    let labels = graph.labels().ok_or(Error::MissingLabels)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { name: "s", value: s, domain: "(0, 1)" });
    }
    let generations = labels.iter().map(|l| l.generation as usize).max().map_or(0, |g| g + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); generations];
    for (v, l) in labels.iter().enumerate() {
        members[l.generation as usize].push(v);
    }
    let s_exact = BigRational::from_f64(s).expect("finite s");
    let two_s = &s_exact * BigRational::from_integer(BigInt::from(2));
    let factor = two_s / (BigRational::one() + &s_exact * &s_exact);
    let mut out = Vec::with_capacity(generations);
    for (n, set) in members.iter().enumerate() {
        if set.is_empty() {
            continue;
        }
        let (vol, boundary) = graph.vol_and_boundary(set)?;
        let ext: u64 = set.iter().map(|&v| graph.exterior(v).unwrap_or(0)).sum();
        let (vol, boundary) = (vol + ext, boundary + ext);
        let l = set.len() as u64;
        let identity_holds = vol == l * (l - 1) + boundary;
        let int = |x: u64| BigRational::from_integer(BigInt::from(x));
        let bound = BigRational::one() - &factor * int(l - 1) / int(l + 4);
        let within_bound = vol > 0 && BigRational::new(BigInt::from(boundary), BigInt::from(vol)) <= bound;
        out.push(BlockRatio {
            n,
            size: l,
            volume: vol,
            boundary,
            ratio: if vol == 0 { f64::NAN } else { boundary as f64 / vol as f64 },
            bound: bound.to_f64().unwrap_or(f64::NAN),
            within_bound,
            identity_holds,
            in_core: set.iter().all(|&v| graph.is_core(v)),
        });
    }
    Ok(out)
}

/// `1 - 2s/(1+s²)`, the value the block ratios approach.
pub fn block_ratio_limit(s: f64) -> f64 {
    1.0 - 2.0 * s / (1.0 + s * s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub max_size: usize,
    pub restrict_to_core: bool,
    pub alpha_bruteforce: Option<f64>,
    pub minimizing_set: Vec<usize>,
    pub sets_evaluated: u64,
    pub r_hat: f64,
    pub r_inf_hat: f64,
    /// `1 - 2r/(1+r²)` at `r_hat`; absent when `r_hat > 1`.
    pub alpha_lower_bound_r: Option<f64>,
    /// The same formula at `r_inf_hat`.
    pub alpha_inf_lower_bound: Option<f64>,
    /// Estimate of `α∞`: the core-restricted search after removing the first
    /// `excluded` vertices of the degree enumeration.
    pub alpha_inf_estimate: Option<f64>,
    pub excluded: usize,
    pub block_ratios: Vec<BlockRatio>,
}

/// Subset search, rate bounds and, when `block_s` is given, the block scan.
pub fn iso_report(graph: &Graph, max_size: usize, restrict_to_core: bool, excluded: usize, block_s: Option<f64>) -> Result<IsoReport> {
    let profile = DegreeProfile::from_graph(graph);
    let rates = estimate_rates(&profile, DEFAULT_TAIL_FRACTION)?;
    let best = alpha_bruteforce(graph, max_size, restrict_to_core)?;
    let mut allowed = graph.core_mask().to_vec();
    for &v in profile.order().iter().take(excluded) {
        allowed[v] = false;
    }
    let tail = if excluded == 0 { None } else { alpha_search(graph, max_size, &allowed)? };
    let block_ratios = match block_s {
        Some(s) => block_ratio_scan(graph, s)?,
        None => Vec::new(),
    };
    Ok(IsoReport {
        max_size,
        restrict_to_core,
        alpha_bruteforce: best.as_ref().map(SubsetMinimum::ratio),
        minimizing_set: best.as_ref().map(|b| b.set.clone()).unwrap_or_default(),
        sets_evaluated: best.as_ref().map_or(0, |b| b.evaluated),
        r_hat: rates.r_hat,
        r_inf_hat: rates.r_inf_hat,
        alpha_lower_bound_r: alpha_lower_bound(rates.r_hat).ok(),
        alpha_inf_lower_bound: alpha_lower_bound(rates.r_inf_hat).ok(),
        alpha_inf_estimate: if excluded == 0 { best.as_ref().map(SubsetMinimum::ratio) } else { tail.map(|b| b.ratio()) },
        excluded,
        block_ratios,
    })
}

/// Exact `#∂U / vol(U)` as a rational, `None` for zero volume.
pub fn exact_ratio(graph: &Graph, set: &[usize]) -> Result<Option<BigRational>> {
    let (vol, boundary) = graph.vol_and_boundary(set)?;
    if vol.is_zero() {
        return Ok(None);
    }
    Ok(Some(BigRational::new(BigInt::from(boundary), BigInt::from(vol))))
}
