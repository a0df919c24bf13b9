mod common;

use common::{adjacency_from_edges, connected_edges, exhaustive_alpha, same_ratio};
use proptest::prelude::*;
use rapidbranch::generators::{antitree, block_graph, AntitreeSpec, BlockGraphSpec};
use rapidbranch::isoperimetry::{alpha_bruteforce, alpha_lower_bound, alpha_search, block_ratio_scan, exact_ratio, iso_report};
use rapidbranch::Graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bruteforce_matches_bitmask_enumeration((n, edges) in connected_edges(11), cap in 1usize..11) {
        let g = Graph::from_edges(n, &edges, None).unwrap();
        let max_size = cap.min(n - 1);
        let best = alpha_bruteforce(&g, max_size, false).unwrap().unwrap();
        let oracle = exhaustive_alpha(&adjacency_from_edges(n, &edges), max_size).unwrap();
        prop_assert!(same_ratio((best.boundary, best.volume), oracle), "{:?} vs {:?}", (best.boundary, best.volume), oracle);
        prop_assert!(best.set.len() <= max_size);
        prop_assert_eq!(g.vol_and_boundary(&best.set).unwrap(), (best.volume, best.boundary));
    }

    #[test]
    fn restricted_search_only_uses_allowed_vertices((n, edges) in connected_edges(10), mask in prop::collection::vec(any::<bool>(), 10)) {
        let g = Graph::from_edges(n, &edges, None).unwrap();
        let allowed: Vec<bool> = mask[..n].to_vec();
        let found = alpha_search(&g, n, &allowed).unwrap();
        if let Some(best) = found {
            prop_assert!(best.set.iter().all(|&v| allowed[v]));
            // restricting can only raise the minimum
            let all = alpha_bruteforce(&g, n - 1, false).unwrap().unwrap();
            prop_assert!(best.ratio() >= all.ratio() - 1e-15 || best.boundary == 0);
        } else {
            prop_assert!(!allowed.iter().any(|&a| a));
        }
    }

    #[test]
    fn lower_bound_formula(r in 0.0f64..=1.0) {
        let b = alpha_lower_bound(r).unwrap();
        prop_assert!((b - (1.0 - r) * (1.0 - r) / (1.0 + r * r)).abs() < 1e-15);
    }
}

#[test]
fn rate_bound_holds_on_small_rapidly_branching_cores() {
    for (sigma, depth) in [(2, 4), (2, 5), (3, 3)] {
        let g = antitree(&AntitreeSpec { sigma, depth }, 10_000).unwrap();
        let report = iso_report(&g, 8, true, 0, None).unwrap();
        let alpha = report.alpha_bruteforce.unwrap();
        let bound = report.alpha_lower_bound_r.unwrap();
        assert!(alpha >= bound - 1e-9, "sigma {sigma}: {alpha} < {bound}");
    }
}

#[test]
fn excluding_vertices_never_lowers_alpha_estimate() {
    let g = antitree(&AntitreeSpec { sigma: 2, depth: 5 }, 10_000).unwrap();
    let base = iso_report(&g, 6, true, 0, None).unwrap().alpha_inf_estimate.unwrap();
    let tail = iso_report(&g, 6, true, 3, None).unwrap().alpha_inf_estimate.unwrap();
    assert!(tail >= base - 1e-15);
}

#[test]
fn exact_ratio_matches_float() {
    let g = antitree(&AntitreeSpec { sigma: 3, depth: 3 }, 10_000).unwrap();
    let set = [0, 1, 2, 3];
    let r = exact_ratio(&g, &set).unwrap().unwrap();
    let (vol, b) = g.vol_and_boundary(&set).unwrap();
    assert_eq!(r.numer() * num_bigint::BigInt::from(vol), r.denom() * num_bigint::BigInt::from(b));
}

#[test]
fn block_ratios_match_closed_form() {
    // s = 1/2: ⌈2j⌉ = 2j, so vertex j of a block of size l has (2j - l)₊ forward edges
    let fwd = |l: u128| -> u128 { (1..=l).map(|j| (2 * j).saturating_sub(l)).sum() };
    let g = block_graph(&BlockGraphSpec { s: 0.5, depth: 2 }, 1_000_000).unwrap();
    let sizes = [2u128, 8, 128];
    let scan = block_ratio_scan(&g, 0.5).unwrap();
    assert_eq!(scan.len(), 3);
    for (n, b) in scan.iter().enumerate() {
        let l = sizes[n];
        let back = if n == 0 { 0 } else { fwd(sizes[n - 1]) };
        let boundary = fwd(l) + back;
        assert_eq!(b.size as u128, l);
        assert_eq!(b.boundary as u128, boundary);
        assert_eq!(b.volume as u128, l * (l - 1) + boundary);
        assert!(b.identity_holds);
        // bound 1 - (4/5)(l-1)/(l+4) = (l+24)/(5(l+4))
        assert_eq!(b.within_bound, boundary * 5 * (l + 4) <= b.volume as u128 * (l + 24));
        assert!(b.within_bound);
    }
}
