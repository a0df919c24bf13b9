// Exhaustive isoperimetric search on small graphs: the minimizing set, the
// lower bound `1 - 2r/(1+r²)` at the estimated rate, the counting bound on
// the minimizer and the energy inequality `α‖∇φ‖² ≤ ...` on random supports.
//
// cargo run --release --example isoperimetry_search

use rapidbranch::generators::{antitree, baseline, AntitreeSpec, Baseline, DEFAULT_VERTEX_BUDGET};
use rapidbranch::isoperimetry::{alpha_bruteforce, alpha_lower_bound, counting_bound_check, exact_ratio};
use rapidbranch::spectral::form_inequality_check;
use rapidbranch::{estimate_rates, DegreeProfile, Graph, Result};

fn report(name: &str, g: &Graph, max_size: usize, core_only: bool) -> Result<()> {
    let rates = estimate_rates(&DegreeProfile::from_graph(g), 0.5)?;
    let Some(best) = alpha_bruteforce(g, max_size, core_only)? else {
        println!("{name}: no subset with positive volume");
        return Ok(());
    };
    let exact = exact_ratio(g, &best.set)?.expect("positive volume");
    let bound = alpha_lower_bound(rates.r_hat).ok();
    let slack = counting_bound_check(g, &best.set)?;
    let form = form_inequality_check(g, best.ratio(), 200, 7, max_size)?;
    println!(
        "{name:<22} alpha {exact} = {:.5} on {:?}  ({} sets)  bound {:?}  counting slack {slack}  form slack {form:.3e}",
        best.ratio(),
        best.set,
        best.evaluated,
        bound
    );
    Ok(())
}

pub fn run_example() -> Result<()> {
    report("path 12", &baseline(Baseline::Path { n: 12 }, DEFAULT_VERTEX_BUDGET)?, 11, false)?;
    report("complete 8", &baseline(Baseline::Complete { n: 8 }, DEFAULT_VERTEX_BUDGET)?, 7, false)?;
    report("tree 2^3", &baseline(Baseline::RegularTree { branching: 2, depth: 3 }, DEFAULT_VERTEX_BUDGET)?, 10, false)?;
    let g = antitree(&AntitreeSpec { sigma: 2, depth: 4 }, DEFAULT_VERTEX_BUDGET)?;
    report("antitree 2 core", &g, g.core_size(), true)?;
    let g = antitree(&AntitreeSpec { sigma: 3, depth: 3 }, DEFAULT_VERTEX_BUDGET)?;
    report("antitree 3 core", &g, 8, true)?;
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
