// Builds the subharmonic certificate `u = 1 - (deg + λ)^{-p}` on an antitree
// truncation and reports its defects, the termwise chain and the parameters.
//
// cargo run --release --example incompleteness_certificate -- 0.35

use rapidbranch::generators::{antitree, AntitreeSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::stochastic::{build_certificate, choose_parameters, INV_E};
use rapidbranch::Result;

pub fn run(s: f64) -> Result<()> {
    let g = antitree(&AntitreeSpec { sigma: 4, depth: 6 }, DEFAULT_VERTEX_BUDGET)?;
    let (p, lambda) = choose_parameters(s)?;
    println!("s {s}  (1/e = {INV_E:.6})  p {p:.12}  lambda {lambda:.6e}");
    let cert = build_certificate(&g, s)?;
    println!("r_inf_hat {:.4}  threshold n {}  #K {}", cert.r_inf_hat, cert.n, cert.k_set.len());
    println!("evaluable {}  unverifiable {}", cert.evaluable_count, cert.unverifiable_count);
    println!("worst defect {:.3e} at {:?}", cert.worst_defect, cert.worst_vertex);
    println!("chain slack {:.3e}", cert.chain_worst_slack);
    println!(
        "recipe slacks: p {:.1e}  lambda {:.1e}  lambda step {:.3e}",
        cert.recipe_p_slack, cert.recipe_lambda_slack, cert.lambda_step_slack
    );
    println!("certificate holds: {}", cert.holds(1e-9));
    Ok(())
}

pub fn run_example() -> Result<()> {
    run(0.35)
}

fn main() {
    let s = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.35);
    if let Err(e) = run(s) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
