//! Deterministic constructors for the graph families under study and for
//! small baseline fixtures. Every generator emits a truncation: the outermost
//! generation is excluded from the reliable core, and its missing edges are
//! recorded as exterior degrees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Label};

pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

/// Complete blocks `K_0, ..., K_depth` with `l(0) = 2`, `l(n+1) = ⌈1/s⌉ l(n)²`;
/// vertex `j` (1-based) of `K_n` has `(⌈j/s⌉ - l(n))₊` neighbours in `K_{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockGraphSpec {
    pub s: f64,
    pub depth: usize,
}

/// Spheres `S_0, ..., S_depth` with `#S_n = σ^n`; each vertex is adjacent to
/// every other vertex of its own and the two neighbouring spheres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntitreeSpec {
    pub sigma: u64,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Baseline {
    Path { n: usize },
    Complete { n: usize },
    RegularTree { branching: usize, depth: usize },
}

/// `⌈x⌉` for `x = j/s`, snapping values within `1e-9` relative of an integer
/// so that decimal inputs such as `s = 0.1` behave like the intended fraction.
pub fn ceil_ratio(j: u64, s: f64) -> u64 {
    let x = j as f64 / s;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

impl BlockGraphSpec {
    fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::Domain { name: "s", value: self.s, domain: "(0, 1)" });
        }
        if self.depth < 1 {
            return Err(Error::Domain { name: "depth", value: self.depth as f64, domain: ">= 1" });
        }
        Ok(())
    }

    /// `l(0), ..., l(depth + 1)`; the last entry is the size of the first block
    /// cut away by the truncation. Saturates instead of overflowing.
    pub fn block_sizes(&self) -> Result<Vec<u128>> {
        self.validate()?;
        let c = ceil_ratio(1, self.s) as u128;
        let mut sizes = vec![2u128];
        for _ in 0..=self.depth {
            let l = *sizes.last().unwrap();
            sizes.push(c.saturating_mul(l.saturating_mul(l)));
        }
        Ok(sizes)
    }

    /// `Σ_j (⌈j/s⌉ - l)₊` for a block of size `l`.
    pub fn forward_edges(&self, l: u64) -> u128 {
        (1..=l).map(|j| ceil_ratio(j, self.s).saturating_sub(l) as u128).sum()
    }
}

pub fn block_graph(spec: &BlockGraphSpec, budget: usize) -> Result<Graph> {
    let sizes = spec.block_sizes()?;
    let total: u128 = sizes[..=spec.depth].iter().sum();
    if total > budget as u128 {
        return Err(Error::Budget { requested: total, budget });
    }
    let sizes: Vec<u64> = sizes.iter().map(|&l| l.min(u64::MAX as u128) as u64).collect();
    let n = total as usize;

    let mut b = GraphBuilder::new();
    let mut starts = Vec::with_capacity(spec.depth + 1);
    let mut labels = Vec::with_capacity(n);
    for (gen, &l) in sizes[..=spec.depth].iter().enumerate() {
        let id = b.block(l as usize, true);
        starts.push(b.vertex_count() - l as usize);
        debug_assert_eq!(id, gen);
        labels.extend((0..l as u32).map(|index| Label { generation: gen as u32, index }));
    }

    let mut exterior = vec![0u64; n];
    let mut core = vec![true; n];
    for gen in 0..=spec.depth {
        let l = sizes[gen];
        let needed = spec.forward_edges(l);
        let available = sizes[gen + 1] as u128;
        if needed > available {
            return Err(Error::Infeasible { block: gen, needed, available });
        }
        let last = gen == spec.depth;
        let mut next_free = if last { 0 } else { starts[gen + 1] };
        for j in 1..=l {
            let v = starts[gen] + (j - 1) as usize;
            let count = ceil_ratio(j, spec.s).saturating_sub(l);
            if last {
                core[v] = false;
                exterior[v] = count;
            } else {
                for _ in 0..count {
                    b.edge(v, next_free);
                    next_free += 1;
                }
            }
        }
    }
    b.core_mask(core).labels(labels).exterior(exterior);
    b.build()
}

impl AntitreeSpec {
    fn validate(&self) -> Result<()> {
        if self.sigma < 2 {
            return Err(Error::Domain { name: "sigma", value: self.sigma as f64, domain: ">= 2" });
        }
        if self.depth < 2 {
            return Err(Error::Domain { name: "depth", value: self.depth as f64, domain: ">= 2" });
        }
        Ok(())
    }

    pub fn sphere_sizes(&self) -> Vec<u128> {
        (0..=self.depth as u32 + 1).map(|n| (self.sigma as u128).saturating_pow(n)).collect()
    }

    pub fn vertex_count(&self) -> u128 {
        self.sphere_sizes()[..=self.depth].iter().sum()
    }

    /// Degree of a vertex of `S_n` in the infinite antitree.
    pub fn degree(&self, n: usize) -> u128 {
        let s = self.sigma as u128;
        let below = if n == 0 { 0 } else { s.pow(n as u32 - 1) };
        below + s.pow(n as u32) - 1 + s.pow(n as u32 + 1)
    }
}

pub fn antitree(spec: &AntitreeSpec, budget: usize) -> Result<Graph> {
    spec.validate()?;
    let total = spec.vertex_count();
    if total > budget as u128 {
        return Err(Error::Budget { requested: total, budget });
    }
    let sizes = spec.sphere_sizes();
    let n = total as usize;
    let mut b = GraphBuilder::new();
    let mut labels = Vec::with_capacity(n);
    for gen in 0..=spec.depth {
        b.block(sizes[gen] as usize, true);
        labels.extend((0..sizes[gen] as u32).map(|index| Label { generation: gen as u32, index }));
        if gen > 0 {
            b.join(gen - 1, gen);
        }
    }
    let first_outer = n - sizes[spec.depth] as usize;
    let mut core = vec![true; n];
    core[first_outer..].fill(false);
    let mut exterior = vec![0u64; n];
    exterior[first_outer..].fill(sizes[spec.depth + 1] as u64);
    b.core_mask(core).labels(labels).exterior(exterior);
    b.build()
}

pub fn baseline(kind: Baseline, budget: usize) -> Result<Graph> {
    match kind {
        Baseline::Path { n } => {
            check_size("n", n, 1, budget)?;
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::from_edges(n, &edges, None)
        }
        Baseline::Complete { n } => {
            check_size("n", n, 1, budget)?;
            let mut b = GraphBuilder::new();
            b.block(n, true);
            b.build()
        }
        Baseline::RegularTree { branching, depth } => {
            if branching < 2 {
                return Err(Error::Domain { name: "branching", value: branching as f64, domain: ">= 2" });
            }
            let total: u128 = (0..=depth as u32).map(|d| (branching as u128).saturating_pow(d)).sum();
            if total > budget as u128 {
                return Err(Error::Budget { requested: total, budget });
            }
            let n = total as usize;
            // Breadth-first numbering: children of v are b*v + 1 ..= b*v + b.
            let edges: Vec<_> = (1..n).map(|v| ((v - 1) / branching, v)).collect();
            let first_leaf = n - branching.pow(depth as u32);
            let mut core = vec![true; n];
            core[first_leaf..].fill(false);
            let mut exterior = vec![0u64; n];
            exterior[first_leaf..].fill(branching as u64);
            let mut labels = Vec::with_capacity(n);
            for d in 0..=depth as u32 {
                labels.extend((0..branching.pow(d) as u32).map(|index| Label { generation: d, index }));
            }
            let mut b = GraphBuilder::new();
            b.block(n, false);
            for (u, v) in edges {
                b.edge(u, v);
            }
            b.core_mask(core).exterior(exterior).labels(labels);
            b.build()
        }
    }
}

fn check_size(name: &'static str, n: usize, min: usize, budget: usize) -> Result<()> {
    if n < min {
        return Err(Error::Domain { name, value: n as f64, domain: ">= 1" });
    }
    if n > budget {
        return Err(Error::Budget { requested: n as u128, budget });
    }
    Ok(())
}
