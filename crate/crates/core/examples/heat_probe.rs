// Heat mass `Σ u_t` with absorbing boundary on a rapidly branching truncation
// and on a path with absorbing ends, with the step-halving order estimate.
//
// cargo run --release --example heat_probe

use rapidbranch::generators::{antitree, AntitreeSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::stochastic::heat_mass;
use rapidbranch::{Graph, Result};

fn probe(name: &str, g: &Graph, t: f64) -> Result<()> {
    let curve = heat_mass(g, t, 64)?;
    let share: Vec<String> = curve.mass.iter().step_by(16).map(|m| format!("{:.4}", m / curve.mass[0])).collect();
    println!("{name:<20} core {:>5} solver {:?}  mass share {}  worst increase {:.1e}", curve.core_size, curve.solver, share.join(" "), curve.worst_increase());
    let end = |steps| heat_mass(g, t, steps).map(|c| *c.mass.last().unwrap());
    let (a, b, c) = (end(16)?, end(32)?, end(64)?);
    println!("{:<20} step-halving ratio {:.3}", "", (a - b) / (b - c));
    Ok(())
}

pub fn run_example() -> Result<()> {
    probe("antitree 4 depth 5", &antitree(&AntitreeSpec { sigma: 4, depth: 5 }, DEFAULT_VERTEX_BUDGET)?, 0.05)?;
    let edges: Vec<(usize, usize)> = (1..200).map(|v| (v - 1, v)).collect();
    let mut core = vec![true; 200];
    core[0] = false;
    core[199] = false;
    probe("path 200", &rapidbranch::build_graph(&edges, Some(core))?, 50.0)?;
    let single = rapidbranch::build_graph(&[(0, 1), (0, 2), (0, 3)], Some(vec![true, false, false, false]))?;
    let curve = heat_mass(&single, 1.0, 4000)?;
    println!("star centre: mass {:.8}  e^-3 {:.8}", curve.mass.last().unwrap(), (-3.0f64).exp());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
