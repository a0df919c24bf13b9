// Builds each graph family, prints its shape and the degree-rate estimates,
// and writes a small antitree in the compressed text format.
//
// cargo run --release --example generate_families

use rapidbranch::generators::{antitree, baseline, block_graph, AntitreeSpec, Baseline, BlockGraphSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::io::write_text;
use rapidbranch::{estimate_rates, DegreeProfile, Graph, Result};

fn describe(name: &str, g: &Graph) -> Result<()> {
    let rates = estimate_rates(&DegreeProfile::from_graph(g), 0.5)?;
    println!(
        "{name:<24} vertices {:>7}  edges {:>10}  core {:>5}  r_hat {:.4}  r_inf_hat {:.4}",
        g.vertex_count(),
        g.edge_count(),
        g.core_size(),
        rates.r_hat,
        rates.r_inf_hat
    );
    Ok(())
}

pub fn run_example() -> Result<()> {
    for sigma in [2, 4, 8] {
        let g = antitree(&AntitreeSpec { sigma, depth: 5 }, DEFAULT_VERTEX_BUDGET)?;
        describe(&format!("antitree sigma={sigma} depth=5"), &g)?;
    }
    let spec = BlockGraphSpec { s: 0.5, depth: 3 };
    println!("block sizes for s=0.5: {:?}", spec.block_sizes()?);
    describe("block s=0.5 depth=3", &block_graph(&spec, DEFAULT_VERTEX_BUDGET)?)?;
    describe("path 50", &baseline(Baseline::Path { n: 50 }, DEFAULT_VERTEX_BUDGET)?)?;
    describe("complete 8", &baseline(Baseline::Complete { n: 8 }, DEFAULT_VERTEX_BUDGET)?)?;
    describe("tree 3^4", &baseline(Baseline::RegularTree { branching: 3, depth: 4 }, DEFAULT_VERTEX_BUDGET)?)?;

    let small = antitree(&AntitreeSpec { sigma: 2, depth: 2 }, DEFAULT_VERTEX_BUDGET)?;
    let mut buf = Vec::new();
    write_text(&small, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
