use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::lanczos::{smallest_eigenvalues, LanczosOptions};
use super::operator::{BoundaryCondition, LaplacianOperator, LinearOperator};
use crate::error::{Error, Result};

/// Largest dimension handled by dense diagonalization.
pub const DENSE_LIMIT: usize = 2000;
pub const DENSE_TOLERANCE: f64 = 1e-9;
pub const ITERATIVE_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Reduced when twin classes shrink the problem, dense up to
    /// [`DENSE_LIMIT`], Lanczos beyond.
    #[default]
    Auto,
    Dense,
    /// Twin-class quotient plus the exactly known class eigenvalues.
    Reduced,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub boundary_condition: BoundaryCondition,
    pub solver_tolerance: f64,
    pub solver: Solver,
}

impl SpectrumResult {
    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `N(λ) = #{k : λ_k <= λ}`, with eigenvalues within `1e-8` above `λ` counted.
    pub fn counting(&self, lambda: f64) -> usize {
        self.eigenvalues.partition_point(|&e| e <= lambda + super::TIE_TOLERANCE)
    }
}

/// The smallest `count` eigenvalues (all of them for `None`), ascending.
pub fn eigenvalues(op: &LaplacianOperator<'_>, count: Option<usize>, solver: Solver) -> Result<SpectrumResult> {
    eigenvalues_seeded(op, count, solver, 42)
}

pub fn eigenvalues_seeded(op: &LaplacianOperator<'_>, count: Option<usize>, solver: Solver, seed: u64) -> Result<SpectrumResult> {
    let dim = op.dim();
    let count = count.unwrap_or(dim);
    if count > dim {
        return Err(Error::LengthMismatch { left: count, right: dim });
    }
    let solver = match solver {
        Solver::Auto => {
            let m = op.twin_classes().len();
            if m < dim && m <= DENSE_LIMIT {
                Solver::Reduced
            } else if dim <= DENSE_LIMIT {
                Solver::Dense
            } else {
                Solver::Lanczos
            }
        }
        s => s,
    };
    let (mut eigenvalues, solver_tolerance) = match solver {
        Solver::Dense => (dense(op), DENSE_TOLERANCE),
        Solver::Reduced => (reduced(op), DENSE_TOLERANCE),
        Solver::Lanczos => {
            let opts = LanczosOptions { seed, ..Default::default() };
            (smallest_eigenvalues(op, count, &opts)?, ITERATIVE_TOLERANCE)
        }
        Solver::Auto => unreachable!(),
    };
    eigenvalues.truncate(count);
    Ok(SpectrumResult { eigenvalues, boundary_condition: op.boundary_condition(), solver_tolerance, solver })
}

fn sorted_symmetric_eigenvalues(a: nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn dense(op: &LaplacianOperator<'_>) -> Vec<f64> {
    sorted_symmetric_eigenvalues(op.to_dense())
}

fn reduced(op: &LaplacianOperator<'_>) -> Vec<f64> {
    let classes = op.twin_classes();
    let mut values = sorted_symmetric_eigenvalues(op.quotient(&classes));
    for c in &classes {
        let e = c.eigenvalue();
        values.extend(std::iter::repeat(e).take(c.size() - 1));
    }
    values.sort_by(f64::total_cmp);
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antitree, baseline, AntitreeSpec, Baseline};
    use crate::graph::build_graph;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * y.abs().max(1.0))
    }

    #[test]
    fn complete_graph_spectrum() {
        let g = baseline(Baseline::Complete { n: 5 }, 100).unwrap();
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Neumann).unwrap();
        let want = [0.0, 5.0, 5.0, 5.0, 5.0];
        for solver in [Solver::Dense, Solver::Reduced, Solver::Lanczos, Solver::Auto] {
            let s = eigenvalues(&op, None, solver).unwrap();
            assert!(close(&s.eigenvalues, &want, 1e-9), "{solver:?}: {:?}", s.eigenvalues);
        }
    }

    #[test]
    fn path_of_three_spectrum() {
        // 3x3 oracle: [[1,-1,0],[-1,2,-1],[0,-1,1]] has eigenvalues 0, 1, 3
        let g = build_graph(&[(0, 1), (1, 2)], None).unwrap();
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Neumann).unwrap();
        let s = eigenvalues(&op, None, Solver::Auto).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 1.0, 3.0], 1e-12));
        let total: f64 = s.eigenvalues.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_matches_dense_on_antitree() {
        let g = antitree(&AntitreeSpec { sigma: 3, depth: 4 }, 1000).unwrap();
        for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
            let op = LaplacianOperator::assemble(&g, bc).unwrap();
            let d = eigenvalues(&op, None, Solver::Dense).unwrap();
            let r = eigenvalues(&op, None, Solver::Reduced).unwrap();
            assert!(close(&d.eigenvalues, &r.eigenvalues, 1e-9));
        }
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap();
        assert!(eigenvalues(&op, Some(1), Solver::Auto).unwrap().lambda0() > 0.0);
    }

    #[test]
    fn counting_uses_tie_tolerance() {
        let s = SpectrumResult {
            eigenvalues: vec![0.0, 2.0 + 5e-9, 3.0],
            boundary_condition: BoundaryCondition::Neumann,
            solver_tolerance: 1e-9,
            solver: Solver::Dense,
        };
        assert_eq!(s.counting(-1.0), 0);
        assert_eq!(s.counting(2.0), 2);
        assert_eq!(s.counting(10.0), 3);
    }
}
