// Largest root `a_s` of `p(z) = z³ - s⁻¹z² - 1`, its Perron
// eigenvector, and measured ball-volume growth on antitrees against `2 log a_s`.
//
// cargo run --release --example growth_rates

use rapidbranch::generators::{antitree, AntitreeSpec, DEFAULT_VERTEX_BUDGET};
use rapidbranch::growth::{growth_polynomial, largest_root, measure_growth, perron_check};
use rapidbranch::Result;

pub fn run_example() -> Result<()> {
    for s in [0.1, 0.25, 0.5, 0.75, 1.0 - 1e-9] {
        let a = largest_root(s)?;
        let perron = perron_check(s)?;
        println!(
            "s {s:<12} a_s {a:.10}  p(a_s) {:+.1e}  perron {:.10}  eigenvector {:.4?}",
            growth_polynomial(s, a),
            perron.eigenvalue,
            perron.eigenvector
        );
    }
    for sigma in [2u64, 4, 8] {
        let g = antitree(&AntitreeSpec { sigma, depth: 6 }, DEFAULT_VERTEX_BUDGET)?;
        let est = measure_growth(&g, 0, 5, None)?;
        println!("antitree sigma={sigma}: s = r_inf_hat {:.4}, bound 2 log a_s = {:?}", est.s, est.bound);
        for (i, rate) in est.rate_samples.iter().enumerate() {
            println!("  n {}  vol {:>12}  #B {:>7}  (1/n) log vol {rate:.4}", i + 1, est.ball_volumes[i + 1], est.ball_sizes[i + 1]);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
