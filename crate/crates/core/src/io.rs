//! Graph files.
//!
//! The text form is an edge list, one `u v` pair per line, with optional
//! directives:
//!
//! ```text
//! #n 15                      vertex count
//! #block 0 4 clique          block of vertices 0..4, a clique (or `indep`)
//! #join 0 1                  blocks 0 and 1 completely joined
//! #core 7 9-14               vertices outside the reliable core
//! #ext 9-14 8                exterior degree of non-core vertices
//! #label 0-3 1 0             generation 1, indices 0, 1, 2, 3
//! ```
//!
//! Ranges `a-b` are inclusive. Any other line starting with `#` is a comment.
//! Without `#block` lines all vertices form one independent block and every
//! edge is listed. The JSON form carries the same data.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Block, Graph, GraphBuilder, Label};

/// JSON graph document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    /// Explicit edges; with `blocks`, only those not implied by the structure.
    pub edges: Vec<[usize; 2]>,
    pub core: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exterior: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Block>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joins: Option<Vec<[usize; 2]>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        let structured = g.is_structured();
        let edges = if structured { explicit_edges(g) } else { g.expanded_edges() };
        GraphDocument {
            n: g.vertex_count(),
            edges: edges.into_iter().map(|(u, v)| [u, v]).collect(),
            core: g.core_mask().to_vec(),
            labels: g.labels().map(|l| l.iter().map(|x| [x.generation, x.index]).collect()),
            exterior: g.exterior_degrees().map(<[u64]>::to_vec),
            blocks: structured.then(|| g.blocks().to_vec()),
            joins: structured.then(|| join_pairs(g).into_iter().map(|(a, b)| [a, b]).collect()),
        }
    }

    pub fn into_graph(self) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        match &self.blocks {
            Some(blocks) => add_blocks(&mut b, blocks, self.n)?,
            None => {
                b.block(self.n, false);
            }
        }
        for [a, c] in self.joins.unwrap_or_default() {
            b.join(a, c);
        }
        for [u, v] in self.edges {
            b.edge(u, v);
        }
        if self.core.len() != self.n {
            return Err(Error::InvalidGraph(format!("core has {} entries for {} vertices", self.core.len(), self.n)));
        }
        b.core_mask(self.core);
        if let Some(labels) = self.labels {
            b.labels(labels.into_iter().map(|[generation, index]| Label { generation, index }).collect());
        }
        if let Some(ext) = self.exterior {
            b.exterior(ext);
        }
        b.build()
    }
}

fn add_blocks(b: &mut GraphBuilder, blocks: &[Block], n: usize) -> Result<()> {
    for blk in blocks {
        if blk.start != b.vertex_count() {
            return Err(Error::InvalidGraph(format!("block at {} does not follow the previous block ending at {}", blk.start, b.vertex_count())));
        }
        b.block(blk.len, blk.clique);
    }
    if b.vertex_count() != n {
        return Err(Error::InvalidGraph(format!("blocks cover {} of {n} vertices", b.vertex_count())));
    }
    Ok(())
}

fn explicit_edges(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(g.explicit_edge_count());
    for u in 0..g.vertex_count() {
        out.extend(g.explicit_neighbors(u).filter(|&w| u < w).map(|w| (u, w)));
    }
    out
}

fn join_pairs(g: &Graph) -> Vec<(usize, usize)> {
    (0..g.blocks().len()).flat_map(|a| g.joins_of(a).filter(move |&b| a < b).map(move |b| (a, b))).collect()
}

/// Maximal runs of consecutive integers as `(first, last)` pairs.
fn runs(items: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for x in items {
        match out.last_mut() {
            Some((_, last)) if *last + 1 == x => *last = x,
            _ => out.push((x, x)),
        }
    }
    out
}

fn fmt_run((a, b): (usize, usize)) -> String {
    if a == b {
        a.to_string()
    } else {
        format!("{a}-{b}")
    }
}

/// Writes the text form, keeping clique blocks and joins compressed.
pub fn write_text(g: &Graph, mut w: impl Write) -> Result<()> {
    writeln!(w, "#n {}", g.vertex_count())?;
    let structured = g.is_structured();
    if structured {
        for blk in g.blocks() {
            writeln!(w, "#block {} {} {}", blk.start, blk.len, if blk.clique { "clique" } else { "indep" })?;
        }
        for (a, b) in join_pairs(g) {
            writeln!(w, "#join {a} {b}")?;
        }
    }
    let outside = runs((0..g.vertex_count()).filter(|&v| !g.is_core(v)));
    for chunk in outside.chunks(64) {
        let items: Vec<String> = chunk.iter().copied().map(fmt_run).collect();
        writeln!(w, "#core {}", items.join(" "))?;
    }
    if let Some(ext) = g.exterior_degrees() {
        let mut v = 0;
        while v < ext.len() {
            let mut end = v;
            while end + 1 < ext.len() && ext[end + 1] == ext[v] {
                end += 1;
            }
            if ext[v] != 0 {
                writeln!(w, "#ext {} {}", fmt_run((v, end)), ext[v])?;
            }
            v = end + 1;
        }
    }
    if let Some(labels) = g.labels() {
        let mut v = 0;
        while v < labels.len() {
            let mut end = v;
            while end + 1 < labels.len()
                && labels[end + 1].generation == labels[v].generation
                && labels[end + 1].index == labels[end].index + 1
            {
                end += 1;
            }
            writeln!(w, "#label {} {} {}", fmt_run((v, end)), labels[v].generation, labels[v].index)?;
            v = end + 1;
        }
    }
    let edges = if structured { explicit_edges(g) } else { g.expanded_edges() };
    for (u, v) in edges {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Writes every edge as a plain `u v` line plus the `#n` and `#core`
/// headers, refusing graphs with more than `max_edges` edges.
pub fn write_expanded(g: &Graph, mut w: impl Write, max_edges: u64) -> Result<()> {
    if g.edge_count() > max_edges {
        return Err(Error::Budget { requested: g.edge_count() as u128, budget: max_edges as usize });
    }
    writeln!(w, "#n {}", g.vertex_count())?;
    for chunk in runs((0..g.vertex_count()).filter(|&v| !g.is_core(v))).chunks(64) {
        let items: Vec<String> = chunk.iter().copied().map(fmt_run).collect();
        writeln!(w, "#core {}", items.join(" "))?;
    }
    for (u, v) in g.expanded_edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("expected a number, found '{tok}'") })
}

fn parse_range(tok: &str, line: usize) -> Result<std::ops::RangeInclusive<usize>> {
    match tok.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (parse_num(a, line)?, parse_num(b, line)?);
            if a > b {
                return Err(Error::Parse { line, msg: format!("empty range '{tok}'") });
            }
            Ok(a..=b)
        }
        None => {
            let a = parse_num(tok, line)?;
            Ok(a..=a)
        }
    }
}

pub fn read_text(r: impl BufRead) -> Result<Graph> {
    let mut n_decl: Option<usize> = None;
    let mut blocks: Vec<(usize, usize, bool, usize)> = Vec::new();
    let mut joins = Vec::new();
    let mut edges = Vec::new();
    let mut outside = Vec::new();
    let mut ext: Vec<(usize, u64, usize)> = Vec::new();
    let mut labels: Vec<(usize, Label)> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            let arity = |want: usize, got: usize| -> Result<()> {
                if want != got {
                    return Err(Error::Parse { line: no, msg: format!("expected {want} arguments, found {got}") });
                }
                Ok(())
            };
            match toks.next() {
                Some("n") if !rest.starts_with(' ') => {
                    let args: Vec<&str> = toks.collect();
                    arity(1, args.len())?;
                    n_decl = Some(parse_num(args[0], no)?);
                }
                Some("block") if !rest.starts_with(' ') => {
                    let args: Vec<&str> = toks.collect();
                    arity(3, args.len())?;
                    let clique = match args[2] {
                        "clique" => true,
                        "indep" => false,
                        other => return Err(Error::Parse { line: no, msg: format!("block kind '{other}' is neither clique nor indep") }),
                    };
                    blocks.push((parse_num(args[0], no)?, parse_num(args[1], no)?, clique, no));
                }
                Some("join") if !rest.starts_with(' ') => {
                    let args: Vec<&str> = toks.collect();
                    arity(2, args.len())?;
                    joins.push((parse_num::<usize>(args[0], no)?, parse_num::<usize>(args[1], no)?));
                }
                Some("core") if !rest.starts_with(' ') => {
                    for tok in toks {
                        outside.extend(parse_range(tok, no)?);
                    }
                }
                Some("ext") if !rest.starts_with(' ') => {
                    let args: Vec<&str> = toks.collect();
                    arity(2, args.len())?;
                    let d: u64 = parse_num(args[1], no)?;
                    for v in parse_range(args[0], no)? {
                        ext.push((v, d, no));
                    }
                }
                Some("label") if !rest.starts_with(' ') => {
                    let args: Vec<&str> = toks.collect();
                    arity(3, args.len())?;
                    let generation: u32 = parse_num(args[1], no)?;
                    let first: u32 = parse_num(args[2], no)?;
                    for (k, v) in parse_range(args[0], no)?.enumerate() {
                        labels.push((v, Label { generation, index: first + k as u32 }));
                    }
                }
                _ => {}
            }
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse { line: no, msg: format!("expected 'u v', found '{text}'") });
        }
        edges.push((parse_num::<usize>(toks[0], no)?, parse_num::<usize>(toks[1], no)?));
    }

    let referenced = edges
        .iter()
        .map(|&(u, v)| u.max(v) + 1)
        .chain(outside.iter().map(|&v| v + 1))
        .chain(ext.iter().map(|&(v, _, _)| v + 1))
        .chain(labels.iter().map(|&(v, _)| v + 1))
        .max()
        .unwrap_or(0);
    let n = match n_decl {
        Some(n) if referenced > n => return Err(Error::IndexOutOfRange { index: referenced - 1, n }),
        Some(n) => n,
        None if !blocks.is_empty() => blocks.iter().map(|b| b.0 + b.1).max().unwrap_or(0).max(referenced),
        None => referenced,
    };

    let mut b = GraphBuilder::new();
    if blocks.is_empty() {
        b.block(n, false);
    } else {
        for &(start, len, clique, no) in &blocks {
            if start != b.vertex_count() {
                return Err(Error::Parse { line: no, msg: format!("block starts at {start}, expected {}", b.vertex_count()) });
            }
            b.block(len, clique);
        }
        if b.vertex_count() != n {
            return Err(Error::InvalidGraph(format!("blocks cover {} of {n} vertices", b.vertex_count())));
        }
    }
    for (a, c) in joins {
        b.join(a, c);
    }
    for (u, v) in edges {
        b.edge(u, v);
    }
    let mut core = vec![true; n];
    for v in outside {
        core[v] = false;
    }
    b.core_mask(core);
    if !ext.is_empty() {
        let mut e = vec![0u64; n];
        for (v, d, _) in ext {
            e[v] = d;
        }
        b.exterior(e);
    }
    if !labels.is_empty() {
        if labels.len() != n {
            return Err(Error::InvalidGraph(format!("{} labels for {n} vertices", labels.len())));
        }
        let mut out = vec![None; n];
        for (v, l) in labels {
            out[v] = Some(l);
        }
        let out: Option<Vec<Label>> = out.into_iter().collect();
        b.labels(out.ok_or_else(|| Error::InvalidGraph("some vertices lack labels".into()))?);
    }
    b.build()
}

/// Reads either form; a file whose first non-blank character is `{` is JSON.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let data = std::fs::read_to_string(path)?;
    parse_graph(&data)
}

pub fn parse_graph(data: &str) -> Result<Graph> {
    if data.trim_start().starts_with('{') {
        let doc: GraphDocument = serde_json::from_str(data)?;
        doc.into_graph()
    } else {
        read_text(data.as_bytes())
    }
}

pub fn write_json(g: &Graph, w: impl Write) -> Result<()> {
    serde_json::to_writer(w, &GraphDocument::from_graph(g))?;
    Ok(())
}
