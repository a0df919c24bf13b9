// Runs every check on a generated truncation and prints the summary.
//
// cargo run --release --example verify_report -- antitree 4 6

use rapidbranch::verify::{summary_line, verify_all, Family, VerifyConfig};

pub fn run(family: Family) -> rapidbranch::Result<i32> {
    let report = verify_all(&VerifyConfig::new(family))?;
    println!("{} vertices, core {}, r_hat {:.4}, r_inf_hat {:.4}", report.vertex_count, report.core_size, report.rates.r_hat, report.rates.r_inf_hat);
    for check in &report.checks {
        println!("{}", summary_line(check));
    }
    if std::env::var_os("VERBOSE").is_some() {
        println!("{}", report.to_json()?);
    }
    Ok(report.exit_code())
}

pub fn run_example() -> rapidbranch::Result<i32> {
    run(Family::Antitree { sigma: 3, depth: 4 })
}

fn parse(args: &[String]) -> Result<Family, Box<dyn std::error::Error>> {
    Ok(match args.first().map(String::as_str) {
        Some("block") => Family::Block { s: args[1].parse()?, depth: args[2].parse()? },
        Some("path") => Family::Path { n: args[1].parse()? },
        Some("complete") => Family::Complete { n: args[1].parse()? },
        Some("tree") => Family::Tree { branching: args[1].parse()?, depth: args[2].parse()? },
        Some("antitree") => Family::Antitree { sigma: args[1].parse()?, depth: args[2].parse()? },
        _ => Family::Antitree { sigma: 4, depth: 6 },
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = run(parse(&args)?)?;
    std::process::exit(code);
}
