// Dirichlet spectrum of an antitree truncation: the bottom against the
// lower bound `d (1 - γ(r))`, then Weyl ratios `N(λ)/η(λ)` and `λ_k/d_k`
// on the reliable window.
//
// cargo run --release --example spectrum_weyl -- 8 5

use rapidbranch::generators::{antitree, AntitreeSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::spectral::{
    breakpoint_grid, counting_and_weyl, eigen_ratios, eigenvalues, gamma, reliable_index_window, reliable_window, summarize,
    BoundaryCondition, LaplacianOperator, Solver, DEFAULT_WINDOW_FACTOR,
};
use rapidbranch::{estimate_rates, DegreeProfile, Result};

pub fn run(sigma: u64, depth: usize) -> Result<()> {
    let g = antitree(&AntitreeSpec { sigma, depth }, DEFAULT_VERTEX_BUDGET)?;
    let profile = DegreeProfile::from_graph(&g);
    let rates = estimate_rates(&profile, 0.5)?;
    let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet)?;
    let spec = eigenvalues(&op, None, Solver::Auto)?;
    let d = profile.min_degree().unwrap() as f64;
    let gam = gamma(rates.r_hat)?.value;
    println!("antitree sigma={sigma} depth={depth}: core {} solver {:?}", g.core_size(), spec.solver);
    println!("lambda0 {:.6}  bound d(1-gamma(r_hat)) = {:.6}  (d={d}, r_hat={:.4})", spec.lambda0(), d * (1.0 - gam), rates.r_hat);

    let window = reliable_window(&g, DEFAULT_WINDOW_FACTOR);
    let grid = breakpoint_grid(&spec, &profile, window);
    let points = counting_and_weyl(&spec, &profile, &grid, window)?;
    println!("window [d0, {window}] with {} breakpoints", grid.len());
    for p in points.iter().take(12) {
        println!("  lambda {:>10.4}  N {:>5}  eta {:>5}  ratio {:.4}", p.lambda, p.count, p.eta, p.ratio);
    }
    let weyl: Vec<f64> = points.iter().map(|p| p.ratio).collect();
    println!("Weyl ratios {:?}", summarize(&weyl));
    println!("allowed [{:.4}, {:.4}] with slack 0.15", 1.0 - gam - 0.15, 1.0 + gam + 0.15);

    let range = reliable_index_window(&spec, &profile, window);
    let ratios = eigen_ratios(&spec, &profile)?;
    let g_inf = gamma(rates.r_inf_hat)?.value;
    println!("lambda_k/d_k over k in {range:?}: {:?}", summarize(&ratios[range.clone()]));
    println!("allowed [{:.4}, {:.4}] with slack 0.2", 1.0 - g_inf - 0.2, 1.0 + g_inf + 0.2);
    Ok(())
}

pub fn run_example() -> Result<()> {
    run(4, 4)
}

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let result = match args[..] {
        [sigma, depth] => run(sigma as u64, depth),
        _ => run(8, 5),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
