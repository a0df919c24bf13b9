mod common;

use common::{connected_edges, layout};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rapidbranch::generators::{antitree, baseline, AntitreeSpec, Baseline};
use rapidbranch::isoperimetry::alpha_bruteforce;
use rapidbranch::spectral::{
    eigenvalues, form_inequality_check, gamma, normalized_bottom, BoundaryCondition, LaplacianOperator, LinearOperator, Solver,
};
use rapidbranch::Graph;

const BCS: [BoundaryCondition; 2] = [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet];

/// Dense Laplacian assembled from the expanded edge list, rows restricted to `rows`.
fn dense_oracle(g: &Graph, rows: &[usize]) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut full = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.expanded_edges() {
        full[(u, u)] += 1.0;
        full[(v, v)] += 1.0;
        full[(u, v)] -= 1.0;
        full[(v, u)] -= 1.0;
    }
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| full[(rows[i], rows[j])])
}

fn sorted_eigs(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn operator_is_symmetric_and_matches_edge_sums(l in layout(), seed in any::<u64>()) {
        let g = l.build();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for bc in BCS {
            let op = LaplacianOperator::assemble(&g, bc).unwrap();
            let dim = op.dim();
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (mut ax, mut ay) = (vec![0.0; dim], vec![0.0; dim]);
            op.apply(&x, &mut ax);
            op.apply(&y, &mut ay);
            let xay: f64 = x.iter().zip(&ay).map(|(a, b)| a * b).sum();
            let yax: f64 = y.iter().zip(&ax).map(|(a, b)| a * b).sum();
            prop_assert!((xay - yax).abs() < 1e-10);
            // Σ_edges (f(u) - f(v))², with f = 0 off the row set
            let mut f = vec![0.0; g.vertex_count()];
            for (i, &v) in op.rows().iter().enumerate() {
                f[v] = x[i];
            }
            let energy: f64 = g.expanded_edges().iter().map(|&(u, v)| (f[u] - f[v]).powi(2)).sum();
            let xax: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            prop_assert!((energy - xax).abs() < 1e-9 * (1.0 + energy));
            prop_assert!((op.quadratic_form(&x) - energy).abs() < 1e-9 * (1.0 + energy));
            prop_assert!(xax >= -1e-12);
        }
    }

    #[test]
    fn solvers_agree_with_dense_oracle(l in layout()) {
        let g = l.build();
        for bc in BCS {
            let op = LaplacianOperator::assemble(&g, bc).unwrap();
            let oracle = sorted_eigs(dense_oracle(&g, op.rows()));
            for solver in [Solver::Dense, Solver::Reduced, Solver::Auto] {
                let got = eigenvalues(&op, None, solver).unwrap().eigenvalues;
                prop_assert_eq!(got.len(), oracle.len());
                for (a, b) in got.iter().zip(&oracle) {
                    prop_assert!((a - b).abs() < 1e-8, "{:?} {:?} {:?}", solver, got, oracle);
                }
            }
        }
    }

    #[test]
    fn dirichlet_eigenvalues_lie_above_neumann(l in layout()) {
        let g = l.build();
        let neumann = eigenvalues(&LaplacianOperator::assemble(&g, BoundaryCondition::Neumann).unwrap(), None, Solver::Dense).unwrap();
        let dirichlet = eigenvalues(&LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap(), None, Solver::Dense).unwrap();
        prop_assert!(neumann.lambda0().abs() < 1e-9);
        // principal submatrix: μ_k >= λ_k
        for (mu, lambda) in dirichlet.eigenvalues.iter().zip(&neumann.eigenvalues) {
            prop_assert!(mu >= &(lambda - 1e-9));
        }
    }

    #[test]
    fn normalized_spectrum_in_unit_band((n, edges) in connected_edges(12), cut in 0usize..12) {
        let mut core = vec![true; n];
        core[cut % n] = false;
        prop_assume!(core.iter().any(|&c| c));
        let g = Graph::from_edges(n, &edges, Some(core)).unwrap();
        let report = normalized_bottom(&g).unwrap();
        let (lo, hi) = report.spectrum_range.unwrap();
        prop_assert!(lo >= -1e-12 && hi <= 2.0 + 1e-12);
        prop_assert!((report.lambda0 - lo).abs() < 1e-12);
    }

    #[test]
    fn form_inequality_holds_at_exact_alpha((n, edges) in connected_edges(10), seed in any::<u64>()) {
        let g = Graph::from_edges(n, &edges, None).unwrap();
        let best = alpha_bruteforce(&g, n - 1, false).unwrap().unwrap();
        let slack = form_inequality_check(&g, best.ratio(), 50, seed, n - 1).unwrap();
        prop_assert!(slack >= -1e-9);
    }

    #[test]
    fn gamma_identity(s in 0.0f64..=1.0) {
        let g = gamma(s).unwrap().value;
        let a = 1.0 - 2.0 * s / (1.0 + s * s);
        prop_assert!((g * g + a * a - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&g));
    }
}

fn grid(r: usize, c: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if i + 1 < r {
                e.push((i * c + j, (i + 1) * c + j));
            }
            if j + 1 < c {
                e.push((i * c + j, i * c + j + 1));
            }
        }
    }
    let core = (0..r * c).map(|v| v / c != 0 && v / c != r - 1).collect();
    Graph::from_edges(r * c, &e, Some(core)).unwrap()
}

fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = std::collections::BTreeSet::new();
    for v in 1..n {
        set.insert((rng.gen_range(0..v), v));
    }
    while set.len() < n - 1 + extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    let core = (0..n).map(|v| v % 7 != 3).collect();
    Graph::from_edges(n, &set.into_iter().collect::<Vec<_>>(), Some(core)).unwrap()
}

#[test]
fn lanczos_matches_dense_up_to_500_vertices() {
    let graphs = [
        ("binary tree", baseline(Baseline::RegularTree { branching: 2, depth: 7 }, 1000).unwrap()),
        ("antitree 3 5", antitree(&AntitreeSpec { sigma: 3, depth: 5 }, 1000).unwrap()),
        ("grid 20x20", grid(20, 20)),
        ("random 450", random_connected(450, 900, 11)),
        ("path 500", baseline(Baseline::Path { n: 500 }, 1000).unwrap()),
    ];
    for (name, g) in &graphs {
        for bc in BCS {
            let op = LaplacianOperator::assemble(g, bc).unwrap();
            let dense = eigenvalues(&op, Some(6), Solver::Dense).unwrap();
            let lanczos = eigenvalues(&op, Some(6), Solver::Lanczos).unwrap();
            for (a, b) in dense.eigenvalues.iter().zip(&lanczos.eigenvalues) {
                assert!((a - b).abs() < 1e-6, "{name} {bc:?}: {:?} vs {:?}", dense.eigenvalues, lanczos.eigenvalues);
            }
        }
    }
}

/// Sphere-constant part of the antitree Dirichlet Laplacian, symmetrized with
/// weights `sqrt(#S_n)`, plus the clique eigenvalues `deg_n + 1` of multiplicity
/// `#S_n - 1`.
fn antitree_oracle(sigma: u64, depth: usize) -> Vec<f64> {
    let size = |n: usize| (sigma as f64).powi(n as i32);
    let deg = |n: usize| if n == 0 { 0.0 } else { size(n - 1) } + size(n) - 1.0 + size(n + 1);
    let m = depth;
    let q = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            deg(i) - (size(i) - 1.0)
        } else if i.abs_diff(j) == 1 {
            -(size(i) * size(j)).sqrt()
        } else {
            0.0
        }
    });
    let mut eigs = sorted_eigs(q);
    for n in 0..m {
        eigs.extend(std::iter::repeat(deg(n) + 1.0).take(size(n) as usize - 1));
    }
    eigs.sort_by(f64::total_cmp);
    eigs
}

#[test]
fn antitree_spectrum_matches_sphere_quotient() {
    for (sigma, depth) in [(2, 6), (4, 5), (8, 4)] {
        let g = antitree(&AntitreeSpec { sigma, depth }, 1_000_000).unwrap();
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap();
        let got = eigenvalues(&op, None, Solver::Auto).unwrap().eigenvalues;
        let oracle = antitree_oracle(sigma, depth);
        assert_eq!(got.len(), oracle.len());
        for (a, b) in got.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8 * b.max(1.0), "sigma {sigma}: {a} vs {b}");
        }
    }
}

#[test]
fn lanczos_matches_reduced_on_large_antitree() {
    let g = antitree(&AntitreeSpec { sigma: 8, depth: 6 }, 1_000_000).unwrap();
    let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap();
    let reduced = eigenvalues(&op, Some(1), Solver::Reduced).unwrap().lambda0();
    let lanczos = eigenvalues(&op, Some(1), Solver::Lanczos).unwrap().lambda0();
    let oracle = antitree_oracle(8, 6)[0];
    assert!((reduced - oracle).abs() < 1e-9 * oracle, "{reduced} vs {oracle}");
    assert!((lanczos - reduced).abs() < 1e-7 * reduced, "{lanczos} vs {reduced}");
}

#[test]
fn complete_graph_spectra() {
    for n in 3..=20 {
        let g = baseline(Baseline::Complete { n }, 100).unwrap();
        let op = LaplacianOperator::assemble(&g, BoundaryCondition::Neumann).unwrap();
        for solver in [Solver::Dense, Solver::Reduced] {
            let e = eigenvalues(&op, None, solver).unwrap().eigenvalues;
            assert!(e[0].abs() < 1e-9);
            assert!(e[1..].iter().all(|&x| (x - n as f64).abs() < 1e-9), "K_{n} {solver:?}: {e:?}");
        }
    }
}

#[test]
fn twin_classes_partition_rows() {
    let g = antitree(&AntitreeSpec { sigma: 3, depth: 4 }, 1000).unwrap();
    let op = LaplacianOperator::assemble(&g, BoundaryCondition::Dirichlet).unwrap();
    let classes = op.twin_classes();
    assert_eq!(classes.len(), 4);
    assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), op.dim());
}
