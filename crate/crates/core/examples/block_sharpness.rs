// Boundary ratios of the generations of the block family against the exact
// per-block upper bound and the limit `1 - 2s/(1+s²)`.
//
// cargo run --release --example block_sharpness -- 0.5 3

use rapidbranch::generators::{block_graph, BlockGraphSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::isoperimetry::{block_ratio_limit, block_ratio_scan};
use rapidbranch::Result;

pub fn run(s: f64, depth: usize) -> Result<()> {
    let g = block_graph(&BlockGraphSpec { s, depth }, DEFAULT_VERTEX_BUDGET)?;
    println!("block graph s={s} depth={depth}: {} vertices, limit {:.6}", g.vertex_count(), block_ratio_limit(s));
    println!("{:>3} {:>8} {:>12} {:>12} {:>10} {:>10} {:>7} {:>5}", "n", "size", "volume", "boundary", "ratio", "bound", "within", "core");
    for b in block_ratio_scan(&g, s)? {
        println!(
            "{:>3} {:>8} {:>12} {:>12} {:>10.6} {:>10.6} {:>7} {:>5}",
            b.n, b.size, b.volume, b.boundary, b.ratio, b.bound, b.within_bound, b.in_core
        );
    }
    Ok(())
}

pub fn run_example() -> Result<()> {
    run(0.5, 3)
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match (args.first().and_then(|a| a.parse().ok()), args.get(1).and_then(|a| a.parse().ok())) {
        (Some(s), Some(depth)) => run(s, depth),
        _ => run_example(),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
