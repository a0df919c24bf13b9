//! Graph strategies and brute-force oracles shared by the integration tests.
//! Oracles work on dense adjacency matrices and never call into the crate.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rapidbranch::{Graph, GraphBuilder};

/// A block-structured graph described independently of the crate.
#[derive(Clone, Debug)]
pub struct Layout {
    pub blocks: Vec<(usize, bool)>,
    pub joins: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize)>,
    pub core: Vec<bool>,
}

impl Layout {
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.0).sum()
    }

    pub fn block_of(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(b, &(len, _))| std::iter::repeat(b).take(len)).collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.n();
        let block_of = self.block_of();
        let mut adj = vec![vec![false; n]; n];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let (a, b) = (block_of[u], block_of[v]);
                adj[u][v] = if a == b { self.blocks[a].1 } else { self.joins.contains(&(a.min(b), a.max(b))) };
            }
        }
        for &(u, v) in &self.edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    pub fn build(&self) -> Graph {
        let mut b = GraphBuilder::new();
        for &(len, clique) in &self.blocks {
            b.block(len, clique);
        }
        for &(x, y) in &self.joins {
            b.join(x, y);
        }
        for &(u, v) in &self.edges {
            b.edge(u, v);
        }
        b.core_mask(self.core.clone());
        b.build().expect("layout is a valid connected graph")
    }
}

/// Up to five blocks of up to four vertices, consecutive blocks joined,
/// a few extra joins and explicit edges, a random nonempty core.
pub fn layout() -> impl Strategy<Value = Layout> {
    prop::collection::vec((1usize..=4, any::<bool>()), 1..=5)
        .prop_flat_map(|blocks| {
            let nb = blocks.len();
            let n: usize = blocks.iter().map(|b| b.0).sum();
            (
                Just(blocks),
                prop::collection::vec((0..nb, 0..nb), 0..=3),
                prop::collection::vec((0..n, 0..n), 0..=8),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(mut blocks, extra, raw, mut core)| {
            if blocks.len() == 1 {
                blocks[0].1 = true;
            }
            let mut joins = BTreeSet::new();
            for i in 1..blocks.len() {
                joins.insert((i - 1, i));
            }
            for (a, b) in extra {
                if a != b {
                    joins.insert((a.min(b), a.max(b)));
                }
            }
            let mut layout = Layout { blocks, joins: joins.into_iter().collect(), edges: Vec::new(), core: Vec::new() };
            let mut adj = layout.adjacency();
            for (u, v) in raw {
                if u != v && !adj[u][v] {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    layout.edges.push((u, v));
                }
            }
            if !core.iter().any(|&c| c) {
                core[0] = true;
            }
            layout.core = core;
            layout
        })
}

/// Connected simple graph on `2..=max_n` vertices: a random spanning tree
/// plus random chords.
pub fn connected_edges(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..=2 * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut set = BTreeSet::new();
            for (i, p) in parents.into_iter().enumerate() {
                set.insert((p, i + 1));
            }
            for (u, v) in extra {
                if u != v {
                    set.insert((u.min(v), u.max(v)));
                }
            }
            (n, set.into_iter().collect())
        })
}

pub fn adjacency_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

pub fn degrees(adj: &[Vec<bool>]) -> Vec<u64> {
    adj.iter().map(|row| row.iter().filter(|&&x| x).count() as u64).collect()
}

/// All-pairs hop distances by Floyd-Warshall; `u32::MAX` when unreachable.
pub fn all_pairs(adj: &[Vec<bool>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let inf = u32::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in 0..n {
            if adj[u][v] {
                d[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter().map(|row| row.into_iter().map(|x| if x >= inf { u32::MAX } else { x }).collect()).collect()
}

/// `(vol, #∂)` of the set encoded by `member` by scanning every ordered pair.
pub fn vol_boundary(adj: &[Vec<bool>], member: &[bool]) -> (u64, u64) {
    let (mut vol, mut boundary) = (0, 0);
    for u in 0..adj.len() {
        if !member[u] {
            continue;
        }
        for v in 0..adj.len() {
            if adj[u][v] {
                vol += 1;
                if !member[v] {
                    boundary += 1;
                }
            }
        }
    }
    (vol, boundary)
}

/// Minimum `#∂U / vol(U)` over all subsets with `1 <= #U <= max_size` and
/// positive volume, as `(boundary, volume)`, by bitmask enumeration.
pub fn exhaustive_alpha(adj: &[Vec<bool>], max_size: usize) -> Option<(u64, u64)> {
    let n = adj.len();
    assert!(n <= 20);
    let mut best: Option<(u64, u64)> = None;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        let member: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let (vol, boundary) = vol_boundary(adj, &member);
        if vol == 0 {
            continue;
        }
        best = match best {
            Some((b, v)) if (b as u128) * (vol as u128) <= (boundary as u128) * (v as u128) => Some((b, v)),
            _ => Some((boundary, vol)),
        };
    }
    best
}

/// `(a/b == c/d)` exactly.
pub fn same_ratio(a: (u64, u64), b: (u64, u64)) -> bool {
    a.0 as u128 * b.1 as u128 == b.0 as u128 * a.1 as u128
}

/// Connected graphs on at most twelve vertices: the standard small families
/// plus seeded random graphs.
pub fn small_corpus() -> Vec<(String, usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 2..=12 {
        out.push((format!("path {n}"), n, (1..n).map(|v| (v - 1, v)).collect()));
        out.push((format!("star {n}"), n, (1..n).map(|v| (0, v)).collect()));
        out.push((format!("complete {n}"), n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()));
    }
    for n in 3..=12 {
        out.push((format!("cycle {n}"), n, (0..n).map(|v| (v, (v + 1) % n)).collect()));
    }
    for n in 5..=12 {
        let mut e: Vec<_> = (1..n).map(|v| (0, v)).collect();
        e.extend((1..n).map(|v| (v, if v + 1 == n { 1 } else { v + 1 })));
        out.push((format!("wheel {n}"), n, e));
    }
    for (r, c) in [(2, 6), (3, 4), (3, 3), (2, 5)] {
        let id = |i: usize, j: usize| i * c + j;
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i + 1 < r {
                    e.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    e.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        out.push((format!("grid {r}x{c}"), r * c, e));
    }
    for (a, b) in [(2, 5), (3, 4), (4, 4), (5, 6)] {
        out.push((format!("bipartite {a},{b}"), a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect()));
    }
    let mut petersen: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    petersen.extend((0..5).map(|i| (i, i + 5)));
    petersen.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    out.push(("petersen".into(), 10, petersen));
    // sigma = 2 antitree spheres 1, 2, 4
    let spheres = [vec![0], vec![1, 2], vec![3, 4, 5, 6]];
    let mut at = Vec::new();
    for (k, s) in spheres.iter().enumerate() {
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                at.push((u, v));
            }
            if k + 1 < spheres.len() {
                at.extend(spheres[k + 1].iter().map(|&v| (u, v)));
            }
        }
    }
    out.push(("antitree 2 2".into(), 7, at));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..80 {
        let n = rng.gen_range(3..=12);
        let p = rng.gen_range(0.1..0.7);
        let mut set = BTreeSet::new();
        for v in 1..n {
            set.insert((rng.gen_range(0..v), v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    set.insert((u, v));
                }
            }
        }
        out.push((format!("random {i}"), n, set.into_iter().collect()));
    }
    out
}
