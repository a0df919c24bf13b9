// Dense, twin-class reduced and Lanczos eigenvalues on the same operators.
//
// cargo run --release --example solver_comparison

use std::time::Instant;

use rapidbranch::generators::{antitree, baseline, AntitreeSpec, Baseline, DEFAULT_VERTEX_BUDGET};
use rapidbranch::spectral::{eigenvalues, BoundaryCondition, LaplacianOperator, LinearOperator, Solver};
use rapidbranch::{Graph, Result};

fn compare(name: &str, g: &Graph, solvers: &[Solver]) -> Result<()> {
    let op = LaplacianOperator::assemble(g, BoundaryCondition::Dirichlet)?;
    println!("{name}: dimension {}, twin classes {}", op.dim(), op.twin_classes().len());
    for &solver in solvers {
        let start = Instant::now();
        let spec = eigenvalues(&op, Some(4), solver)?;
        println!("  {solver:<8?} {:.9?}  ({:.2?})", spec.eigenvalues, start.elapsed());
    }
    Ok(())
}

pub fn run_example() -> Result<()> {
    let tree = baseline(Baseline::RegularTree { branching: 2, depth: 7 }, DEFAULT_VERTEX_BUDGET)?;
    compare("binary tree depth 7", &tree, &[Solver::Dense, Solver::Reduced, Solver::Lanczos])?;
    let g = antitree(&AntitreeSpec { sigma: 4, depth: 5 }, DEFAULT_VERTEX_BUDGET)?;
    compare("antitree 4 depth 5", &g, &[Solver::Dense, Solver::Reduced, Solver::Lanczos])?;
    let g = antitree(&AntitreeSpec { sigma: 8, depth: 5 }, DEFAULT_VERTEX_BUDGET)?;
    compare("antitree 8 depth 5", &g, &[Solver::Reduced, Solver::Lanczos])?;
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
