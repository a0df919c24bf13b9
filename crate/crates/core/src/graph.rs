//! Finite simple graphs with a block-compressed adjacency.
//!
//! Vertices are dense indices `0..n`, partitioned into contiguous blocks. A
//! block is either a clique or an independent set, any two blocks may be
//! completely joined, and the remaining edges are stored explicitly in a CSR
//! table. Generator output (antitree spheres, complete blocks of the sharpness
//! construction) thus costs memory linear in the vertex count even when a
//! single block holds tens of thousands of mutually adjacent vertices.
//!
//! A plain edge list becomes one independent block plus explicit edges, so
//! every algorithm here also works for arbitrary input graphs.
//!
//! Truncations carry a `core` mask (vertices whose whole infinite-graph
//! neighbourhood is present) and optionally an `exterior` count per vertex:
//! the number of edges a non-core vertex has to vertices that were cut away.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator metadata: generation (sphere or block number) and position within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub generation: u32,
    pub index: u32,
}

/// A contiguous run of vertices `start..start + len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
    pub clique: bool,
}

impl Block {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    blocks: Vec<Block>,
    block_of: Vec<u32>,
    joins: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    degree: Vec<u64>,
    core: Vec<bool>,
    labels: Option<Vec<Label>>,
    exterior: Option<Vec<u64>>,
    edge_count: u64,
}

/// Incremental constructor for block-structured graphs.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    blocks: Vec<Block>,
    joins: Vec<(usize, usize)>,
    edges: Vec<(usize, usize)>,
    core: Option<Vec<bool>>,
    labels: Option<Vec<Label>>,
    exterior: Option<Vec<u64>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.start + b.len)
    }

    /// Appends a block of `len` fresh vertices and returns its block id.
    pub fn block(&mut self, len: usize, clique: bool) -> usize {
        let start = self.vertex_count();
        self.blocks.push(Block { start, len, clique });
        self.blocks.len() - 1
    }

    /// Completely joins two distinct blocks.
    pub fn join(&mut self, a: usize, b: usize) -> &mut Self {
        self.joins.push((a, b));
        self
    }

    pub fn edge(&mut self, u: usize, v: usize) -> &mut Self {
        self.edges.push((u, v));
        self
    }

    pub fn core_mask(&mut self, mask: Vec<bool>) -> &mut Self {
        self.core = Some(mask);
        self
    }

    pub fn labels(&mut self, labels: Vec<Label>) -> &mut Self {
        self.labels = Some(labels);
        self
    }

    pub fn exterior(&mut self, exterior: Vec<u64>) -> &mut Self {
        self.exterior = Some(exterior);
        self
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("{n} vertices exceed u32 indexing")));
        }
        let nb = self.blocks.len();
        let mut block_of = vec![0u32; n];
        for (b, blk) in self.blocks.iter().enumerate() {
            block_of[blk.range()].fill(b as u32);
        }

        let mut joins = vec![Vec::new(); nb];
        for &(a, b) in &self.joins {
            if a >= nb || b >= nb {
                return Err(Error::InvalidGraph(format!("join ({a}, {b}) names a missing block")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("block {a} joined to itself")));
            }
            joins[a].push(b as u32);
            joins[b].push(a as u32);
        }
        for (a, list) in joins.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let b = w[0] as usize;
                return Err(Error::DuplicateEdge(self.blocks[a].start, self.blocks[b].start));
            }
        }

        // Explicit edges: validate, reject anything the block structure already implies.
        let mut deg_explicit = vec![0usize; n];
        for &(u, v) in &self.edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let (bu, bv) = (block_of[u] as usize, block_of[v] as usize);
            let implied = if bu == bv {
                self.blocks[bu].clique
            } else {
                joins[bu].binary_search(&(bv as u32)).is_ok()
            };
            if implied {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            deg_explicit[u] += 1;
            deg_explicit[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg_explicit {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in &self.edges {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for v in 0..n {
            let list = &mut targets[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let w = w[0] as usize;
                return Err(Error::DuplicateEdge(v.min(w), v.max(w)));
            }
        }

        let mut degree = vec![0u64; n];
        let mut edge_count = (self.edges.len()) as u64;
        for (b, blk) in self.blocks.iter().enumerate() {
            let mut structural = if blk.clique { blk.len.saturating_sub(1) as u64 } else { 0 };
            structural += joins[b].iter().map(|&j| self.blocks[j as usize].len as u64).sum::<u64>();
            for v in blk.range() {
                degree[v] = structural + deg_explicit[v] as u64;
            }
            let l = blk.len as u64;
            if blk.clique {
                edge_count += l * l.saturating_sub(1) / 2;
            }
            for &j in &joins[b] {
                if (j as usize) > b {
                    edge_count += l * self.blocks[j as usize].len as u64;
                }
            }
        }

        let core = match self.core {
            Some(mask) if mask.len() != n => {
                return Err(Error::InvalidGraph(format!("core mask has {} entries for {n} vertices", mask.len())))
            }
            Some(mask) => mask,
            None => vec![true; n],
        };
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(Error::InvalidGraph(format!("{} labels for {n} vertices", labels.len())));
            }
        }
        if let Some(ext) = &self.exterior {
            if ext.len() != n {
                return Err(Error::InvalidGraph(format!("{} exterior degrees for {n} vertices", ext.len())));
            }
            if let Some(v) = (0..n).find(|&v| core[v] && ext[v] != 0) {
                return Err(Error::InvalidGraph(format!("core vertex {v} has exterior edges")));
            }
        }

        let graph = Graph {
            n,
            blocks: self.blocks,
            block_of,
            joins,
            offsets,
            targets,
            degree,
            core,
            labels: self.labels,
            exterior: self.exterior,
            edge_count,
        };
        let reached = graph.distances(0, None).iter().filter(|&&d| d != UNREACHED).count();
        if reached != n {
            return Err(Error::Disconnected { reached, total: n });
        }
        Ok(graph)
    }
}

const UNREACHED: u32 = u32::MAX;

/// Builds a graph from an explicit edge list. The vertex count is the larger of
/// the highest referenced index + 1 and the core mask length.
pub fn build_graph(edges: &[(usize, usize)], core_mask: Option<Vec<bool>>) -> Result<Graph> {
    let from_edges = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = from_edges.max(core_mask.as_ref().map_or(0, Vec::len));
    Graph::from_edges(n, edges, core_mask)
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)], core_mask: Option<Vec<bool>>) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        b.block(n, false);
        for &(u, v) in edges {
            b.edge(u, v);
        }
        if let Some(mask) = core_mask {
            b.core_mask(mask);
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    pub fn is_core(&self, v: usize) -> bool {
        self.core[v]
    }

    pub fn core_mask(&self) -> &[bool] {
        &self.core
    }

    pub fn core_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.core[v]).collect()
    }

    pub fn core_size(&self) -> usize {
        self.core.iter().filter(|&&c| c).count()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn exterior_degrees(&self) -> Option<&[u64]> {
        self.exterior.as_deref()
    }

    /// Edges a vertex has to vertices removed by truncation; `None` if unknown.
    pub fn exterior(&self, v: usize) -> Option<u64> {
        if self.core[v] {
            return Some(0);
        }
        self.exterior.as_ref().map(|e| e[v])
    }

    /// Degree in the untruncated graph, when it is known.
    pub fn true_degree(&self, v: usize) -> Option<u64> {
        self.exterior(v).map(|e| self.degree[v] + e)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v] as usize
    }

    pub fn joins_of(&self, block: usize) -> impl Iterator<Item = usize> + '_ {
        self.joins[block].iter().map(|&b| b as usize)
    }

    pub fn explicit_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.targets[self.offsets[v]..self.offsets[v + 1]].iter().map(|&w| w as usize)
    }

    pub fn explicit_edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// True when the graph uses clique blocks or joins, i.e. is not a plain edge list.
    pub fn is_structured(&self) -> bool {
        self.blocks.len() > 1 || self.blocks.iter().any(|b| b.clique)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let (bu, bv) = (self.block_of[u], self.block_of[v]);
        if bu == bv && self.blocks[bu as usize].clique {
            return true;
        }
        if bu != bv && self.joins[bu as usize].binary_search(&bv).is_ok() {
            return true;
        }
        self.targets[self.offsets[u]..self.offsets[u + 1]].binary_search(&(v as u32)).is_ok()
    }

    /// Calls `f` once per neighbour of `v`, in no particular order.
    pub fn for_each_neighbor(&self, v: usize, mut f: impl FnMut(usize)) {
        let b = self.block_of[v] as usize;
        let blk = self.blocks[b];
        if blk.clique {
            blk.range().filter(|&w| w != v).for_each(&mut f);
        }
        for &j in &self.joins[b] {
            self.blocks[j as usize].range().for_each(&mut f);
        }
        self.explicit_neighbors(v).for_each(f);
    }

    /// Sorted adjacency list of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree[v] as usize);
        self.for_each_neighbor(v, |w| out.push(w));
        out.sort_unstable();
        out
    }

    /// `out[v] = Σ_{w ~ v} f[w]` for every vertex, in time linear in the
    /// vertex count plus the number of explicit edges.
    pub fn neighbor_sums(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.n);
        let block_sums: Vec<f64> = self.blocks.iter().map(|b| f[b.range()].iter().sum()).collect();
        let mut out = vec![0.0; self.n];
        for (b, blk) in self.blocks.iter().enumerate() {
            let joined: f64 = self.joins[b].iter().map(|&j| block_sums[j as usize]).sum();
            for v in blk.range() {
                let mut acc = joined;
                if blk.clique {
                    acc += block_sums[b] - f[v];
                }
                for w in self.explicit_neighbors(v) {
                    acc += f[w];
                }
                out[v] = acc;
            }
        }
        out
    }

    /// Breadth-first distances from `source`, stopping after `max_radius` if given.
    /// Unreached vertices hold `u32::MAX`.
    ///
    /// A clique block or a joined block is swept once, by the first vertex that
    /// reaches it, so the cost is linear in the vertex count.
    pub fn distances(&self, source: usize, max_radius: Option<usize>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.n];
        let mut clique_done = vec![false; self.blocks.len()];
        let mut join_done: Vec<Vec<bool>> = self.joins.iter().map(|j| vec![false; j.len()]).collect();
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let d = dist[x];
            if max_radius.is_some_and(|r| d as usize >= r) {
                continue;
            }
            let mut visit = |w: usize, queue: &mut std::collections::VecDeque<usize>| {
                if dist[w] == UNREACHED {
                    dist[w] = d + 1;
                    queue.push_back(w);
                }
            };
            let b = self.block_of[x] as usize;
            if self.blocks[b].clique && !clique_done[b] {
                clique_done[b] = true;
                for w in self.blocks[b].range() {
                    visit(w, &mut queue);
                }
            }
            for (k, &j) in self.joins[b].iter().enumerate() {
                if !join_done[b][k] {
                    join_done[b][k] = true;
                    for w in self.blocks[j as usize].range() {
                        visit(w, &mut queue);
                    }
                }
            }
            for w in self.explicit_neighbors(x) {
                visit(w, &mut queue);
            }
        }
        dist
    }

    /// Spheres `S_0 = {v}, S_1, ..., S_r` around `v`; each layer is sorted.
    pub fn layers(&self, v: usize, max_radius: usize) -> Result<Vec<Vec<usize>>> {
        self.check_vertex(v)?;
        let dist = self.distances(v, Some(max_radius));
        let mut layers = vec![Vec::new(); max_radius + 1];
        for (w, &d) in dist.iter().enumerate() {
            if d != UNREACHED {
                layers[d as usize].push(w);
            }
        }
        while layers.len() > 1 && layers.last().is_some_and(Vec::is_empty) {
            layers.pop();
        }
        Ok(layers)
    }

    /// The closed ball `B_n(v)`: vertices joined to `v` by a path of at most `n` edges.
    pub fn ball(&self, v: usize, n: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let dist = self.distances(v, Some(n));
        Ok((0..self.n).filter(|&w| dist[w] != UNREACHED).collect())
    }

    /// `(vol(U), #∂U)` with `vol(U) = Σ_{v∈U} deg(v)` and `#∂U` the number of
    /// ordered pairs `(v, w)`, `v ∈ U`, `w ∉ U`, `v ~ w`. Duplicates in `set` are ignored.
    pub fn vol_and_boundary(&self, set: &[usize]) -> Result<(u64, u64)> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut member = vec![false; self.n];
        let mut per_block = vec![0u64; self.blocks.len()];
        let mut unique = Vec::with_capacity(set.len());
        for &v in set {
            self.check_vertex(v)?;
            if !member[v] {
                member[v] = true;
                per_block[self.block_of[v] as usize] += 1;
                unique.push(v);
            }
        }
        let (mut vol, mut boundary) = (0u64, 0u64);
        for &v in &unique {
            let b = self.block_of[v] as usize;
            let mut inside = if self.blocks[b].clique { per_block[b] - 1 } else { 0 };
            inside += self.joins[b].iter().map(|&j| per_block[j as usize]).sum::<u64>();
            inside += self.explicit_neighbors(v).filter(|&w| member[w]).count() as u64;
            vol += self.degree[v];
            boundary += self.degree[v] - inside;
        }
        Ok((vol, boundary))
    }

    /// Every edge `(u, v)` with `u < v`, block structure expanded.
    pub fn expanded_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count as usize);
        for u in 0..self.n {
            self.for_each_neighbor(u, |w| {
                if u < w {
                    out.push((u, w));
                }
            });
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::IndexOutOfRange { index: v, n: self.n })
        } else {
            Ok(())
        }
    }
}
