use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// The plain Laplacian of the finite graph.
    Neumann,
    /// Restriction to the reliable core; the diagonal keeps the full degree,
    /// couplings to excised vertices are dropped.
    Dirichlet,
}

impl std::str::FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "neumann" => Ok(Self::Neumann),
            "dirichlet" => Ok(Self::Dirichlet),
            other => Err(format!("unknown boundary condition '{other}'")),
        }
    }
}

/// Symmetric real operator with a matrix-free action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// The graph Laplacian `Δφ(v) = deg(v) φ(v) - Σ_{w~v} φ(w)` on a row set,
/// optionally in the degree-normalized form `D^{-1/2} Δ D^{-1/2}`.
///
/// Rows are all vertices (Neumann) or the core vertices (Dirichlet).
#[derive(Clone, Debug)]
pub struct LaplacianOperator<'g> {
    graph: &'g Graph,
    bc: BoundaryCondition,
    normalized: bool,
    rows: Vec<usize>,
    row_of: Vec<u32>,
    diag: Vec<f64>,
    scale: Vec<f64>,
}

const NOT_A_ROW: u32 = u32::MAX;

/// A set of rows on which the operator acts identically: for functions
/// supported on the class with zero sum it is multiplication by
/// `eigenvalue`, and class-constant functions are mapped to class-constant
/// functions.
#[derive(Clone, Debug)]
pub struct TwinClass {
    pub block: usize,
    pub rows: Vec<usize>,
    pub clique: bool,
    pub diag: f64,
    pub scale: f64,
}

impl TwinClass {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Eigenvalue on zero-sum functions supported on the class (multiplicity `size - 1`).
    pub fn eigenvalue(&self) -> f64 {
        let inner = if self.clique { self.diag + 1.0 } else { self.diag };
        self.scale * self.scale * inner
    }
}

impl<'g> LaplacianOperator<'g> {
    pub fn assemble(graph: &'g Graph, bc: BoundaryCondition) -> Result<Self> {
        Self::build(graph, bc, false)
    }

    /// `φ ↦ (1/deg) Σ_{w~v} (φ(v) - φ(w))` on `ℓ²(deg)`, written in the
    /// unitarily equivalent symmetric form.
    pub fn assemble_normalized(graph: &'g Graph, bc: BoundaryCondition) -> Result<Self> {
        Self::build(graph, bc, true)
    }

    fn build(graph: &'g Graph, bc: BoundaryCondition, normalized: bool) -> Result<Self> {
        let rows: Vec<usize> = match bc {
            BoundaryCondition::Neumann => (0..graph.vertex_count()).collect(),
            BoundaryCondition::Dirichlet => graph.core_vertices(),
        };
        if rows.is_empty() {
            return Err(Error::EmptyCore);
        }
        let mut row_of = vec![NOT_A_ROW; graph.vertex_count()];
        for (i, &v) in rows.iter().enumerate() {
            row_of[v] = i as u32;
        }
        let diag: Vec<f64> = rows.iter().map(|&v| graph.degree(v) as f64).collect();
        let scale = if normalized {
            if let Some(&v) = rows.iter().find(|&&v| graph.degree(v) == 0) {
                return Err(Error::InvalidGraph(format!("vertex {v} has degree 0; normalized Laplacian undefined")));
            }
            diag.iter().map(|d| 1.0 / d.sqrt()).collect()
        } else {
            vec![1.0; rows.len()]
        };
        Ok(LaplacianOperator { graph, bc, normalized, rows, row_of, diag, scale })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn boundary_condition(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Vertex behind each row.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn row_of(&self, v: usize) -> Option<usize> {
        let r = self.row_of[v];
        (r != NOT_A_ROW).then_some(r as usize)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().zip(&self.scale).map(|(d, s)| d * s * s).sum()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let m = self.rows.len();
        let mut a = DMatrix::zeros(m, m);
        for (i, &v) in self.rows.iter().enumerate() {
            a[(i, i)] = self.diag[i] * self.scale[i] * self.scale[i];
            self.graph.for_each_neighbor(v, |w| {
                if let Some(j) = self.row_of(w) {
                    a[(i, j)] = -self.scale[i] * self.scale[j];
                }
            });
        }
        a
    }

    /// Partition of the rows into twin classes. Rows of one block that carry
    /// no explicit edges share a class; every other row is a singleton.
    pub fn twin_classes(&self) -> Vec<TwinClass> {
        let g = self.graph;
        let mut shared: Vec<Option<usize>> = vec![None; g.blocks().len()];
        let mut classes: Vec<TwinClass> = Vec::new();
        for (i, &v) in self.rows.iter().enumerate() {
            let b = g.block_of(v);
            let untouched = g.explicit_neighbors(v).next().is_none();
            let existing = if untouched { shared[b] } else { None };
            match existing {
                Some(c) => classes[c].rows.push(i),
                None => {
                    classes.push(TwinClass {
                        block: b,
                        rows: vec![i],
                        clique: g.blocks()[b].clique,
                        diag: self.diag[i],
                        scale: self.scale[i],
                    });
                    if untouched {
                        shared[b] = Some(classes.len() - 1);
                    }
                }
            }
        }
        classes
    }

    /// The operator restricted to class-constant functions, in the orthonormal
    /// basis `1_C / sqrt(#C)`.
    pub fn quotient(&self, classes: &[TwinClass]) -> DMatrix<f64> {
        let g = self.graph;
        let m = classes.len();
        let mut q = DMatrix::zeros(m, m);
        let mut class_of_row = vec![0usize; self.rows.len()];
        let mut by_block: Vec<Vec<usize>> = vec![Vec::new(); g.blocks().len()];
        for (c, cls) in classes.iter().enumerate() {
            for &r in &cls.rows {
                class_of_row[r] = c;
            }
            by_block[cls.block].push(c);
            let internal = if cls.clique { (cls.size() - 1) as f64 } else { 0.0 };
            q[(c, c)] = cls.scale * cls.scale * (cls.diag - internal);
        }
        let couple = |q: &mut DMatrix<f64>, c: usize, d: usize, edges: f64| {
            let (a, b) = (&classes[c], &classes[d]);
            let w = a.scale * b.scale * edges / ((a.size() * b.size()) as f64).sqrt();
            q[(c, d)] -= w;
            q[(d, c)] -= w;
        };
        for (b, members) in by_block.iter().enumerate() {
            if g.blocks()[b].clique {
                for (x, &c) in members.iter().enumerate() {
                    for &d in &members[x + 1..] {
                        couple(&mut q, c, d, (classes[c].size() * classes[d].size()) as f64);
                    }
                }
            }
            for j in g.joins_of(b).filter(|&j| j > b) {
                for &c in members {
                    for &d in &by_block[j] {
                        couple(&mut q, c, d, (classes[c].size() * classes[d].size()) as f64);
                    }
                }
            }
        }
        for (c, cls) in classes.iter().enumerate() {
            if cls.size() != 1 {
                continue;
            }
            let v = self.rows[cls.rows[0]];
            for w in g.explicit_neighbors(v) {
                if let Some(r) = self.row_of(w) {
                    let d = class_of_row[r];
                    if d > c {
                        couple(&mut q, c, d, 1.0);
                    }
                }
            }
        }
        q
    }
}

impl LinearOperator for LaplacianOperator<'_> {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut z = vec![0.0; self.graph.vertex_count()];
        for (i, &v) in self.rows.iter().enumerate() {
            z[v] = self.scale[i] * x[i];
        }
        let sums = self.graph.neighbor_sums(&z);
        for (i, &v) in self.rows.iter().enumerate() {
            y[i] = self.scale[i] * (self.diag[i] * z[v] - sums[v]);
        }
    }
}
