use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_MAX_SUPPORT: usize = 32;

/// A random connected set of core vertices with `1..=max_size` elements,
/// grown from a random root by adding random core neighbours.
pub fn random_connected_support(graph: &Graph, max_size: usize, rng: &mut impl Rng) -> Vec<usize> {
    let core = graph.core_vertices();
    let target = rng.gen_range(1..=max_size.max(1));
    let mut set = vec![*core.choose(rng).expect("nonempty core")];
    while set.len() < target {
        let mut frontier = Vec::new();
        for &v in &set {
            graph.for_each_neighbor(v, |w| {
                if graph.is_core(w) && !set.contains(&w) {
                    frontier.push(w);
                }
            });
        }
        frontier.sort_unstable();
        frontier.dedup();
        match frontier.choose(rng) {
            Some(&w) => set.push(w),
            None => break,
        }
    }
    set.sort_unstable();
    set
}

/// `⟨Δφ, φ⟩` and `⟨deg φ, φ⟩` for `φ` given on a finite vertex set, zero elsewhere.
pub(crate) fn sparse_forms(graph: &Graph, support: &[usize], values: &[f64]) -> (f64, f64) {
    let mut energy = 0.0;
    let mut weighted = 0.0;
    for (i, &v) in support.iter().enumerate() {
        let d = graph.degree(v) as f64;
        weighted += d * values[i] * values[i];
        energy += d * values[i] * values[i];
        for (j, &w) in support.iter().enumerate() {
            if graph.is_adjacent(v, w) {
                energy -= values[i] * values[j];
            }
        }
    }
    (energy, weighted)
}

/// Worst relative slack of
/// `(1 - √(1-α²))⟨deg φ,φ⟩ <= ⟨Δφ,φ⟩ <= (1 + √(1-α²))⟨deg φ,φ⟩`
/// over `trials` random vectors with entries uniform on `[-1, 1]` and random
/// connected core support of at most `max_support` vertices. Slacks are
/// divided by `⟨deg φ, φ⟩`.
///
/// `alpha` must bound `#∂U / vol(U)` from below for every core set `U` of at
/// most `max_support` vertices, since the level sets of `φ` are such sets.
pub fn form_inequality_check(graph: &Graph, alpha: f64, trials: usize, seed: u64, max_support: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain { name: "alpha", value: alpha, domain: "[0, 1]" });
    }
    if trials == 0 {
        return Err(Error::Domain { name: "trials", value: 0.0, domain: ">= 1" });
    }
    if graph.core_size() == 0 {
        return Err(Error::EmptyCore);
    }
    let root = (1.0 - alpha * alpha).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let support = random_connected_support(graph, max_support, &mut rng);
        let values: Vec<f64> = support.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let (energy, weighted) = sparse_forms(graph, &support, &values);
        if weighted == 0.0 {
            continue;
        }
        let lower = energy - (1.0 - root) * weighted;
        let upper = (1.0 + root) * weighted - energy;
        worst = worst.min(lower.min(upper) / weighted);
    }
    Ok(worst)
}
