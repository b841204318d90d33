use std::collections::HashSet;

use cubulate::complex::{check_npc, check_special, hyperplanes, CubeComplex};
use cubulate::dual::{
    check_median, check_median_graph, enumerate_orientations_oracle, DualComplex,
};
use cubulate::fixtures;
use cubulate::wallspace::Wallspace;
use proptest::prelude::*;

fn criteria_fixtures() -> Vec<(&'static str, Wallspace)> {
    ["line", "line-all", "grid", "grid-columns", "tree", "line-axis"]
        .into_iter()
        .map(|n| (n, fixtures::by_name(n).unwrap()))
        .collect()
}

#[test]
fn random_wallspaces_match_the_exhaustive_oracle() {
    for seed in 0..100 {
        let ws = fixtures::random_wallspace(seed).unwrap();
        assert!(ws.len() <= fixtures::RANDOM_MAX_WALLS);
        assert!(ws.ball().len() <= fixtures::RANDOM_MAX_VERTICES);
        let dual = DualComplex::build(&ws).unwrap();
        let mut got = dual.zero_cubes().to_vec();
        got.sort();
        let oracle = enumerate_orientations_oracle(&ws).unwrap();
        assert_eq!(got, oracle, "seed {seed}");
    }
}

#[test]
fn grid_census_and_median() {
    let dual = DualComplex::build(&fixtures::grid().unwrap()).unwrap();
    assert_eq!(dual.census(), vec![25, 40, 16]);
    assert!(check_median(&dual).is_median());
}

#[test]
fn tree_dual_is_the_ball() {
    let ws = fixtures::tree(3).unwrap();
    let dual = DualComplex::build(&ws).unwrap();
    let ball = ws.ball();
    assert_eq!(dual.census(), vec![ball.len(), ball.len() - 1]);
    let image: Vec<usize> = (0..ball.len()).map(|v| dual.principal(v).unwrap()).collect();
    assert_eq!(image.iter().collect::<HashSet<_>>().len(), ball.len());
    let adj = dual.adjacency();
    for (u, _, v) in ball.edges() {
        assert!(adj[image[u]].contains(&image[v]));
    }
}

#[test]
fn distance_law_on_criteria_fixtures() {
    for (name, ws) in criteria_fixtures() {
        let dual = DualComplex::build(&ws).unwrap();
        let trusted: Vec<usize> = ws.trusted().ones().collect();
        for &u in &trusted {
            for &v in &trusted {
                let (pu, pv) = (dual.principal(u).unwrap(), dual.principal(v).unwrap());
                let sep = ws.separation_count(u, v).unwrap();
                assert!(sep.carrier_ambiguous.is_empty());
                assert_eq!(dual.distance(pu, pv).unwrap(), sep.count, "{name}: {u} {v}");
            }
        }
    }
}

#[test]
fn one_edge_deleted_grid_is_not_median() {
    let dual = DualComplex::build(&fixtures::grid().unwrap()).unwrap();
    let mut adj = dual.adjacency();
    let e = dual.one_cubes()[0];
    adj[e.from].retain(|&x| x != e.to);
    adj[e.to].retain(|&x| x != e.from);
    let report = check_median_graph(&adj);
    let failure = report.failure.expect("mutant must fail");
    assert_ne!(failure.medians.len(), 1);
}

#[test]
fn dual_json_round_trip() {
    for (name, ws) in criteria_fixtures() {
        let dual = DualComplex::build(&ws).unwrap();
        let text = serde_json::to_string(&dual).unwrap();
        let back: DualComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dual, "{name}");
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn dual_complexes_are_special_and_hyperplanes_match_walls() {
    for ws in [fixtures::grid().unwrap(), fixtures::tree(3).unwrap()] {
        let dual = DualComplex::build(&ws).unwrap();
        let c = CubeComplex::from_dual(&dual).unwrap();
        assert!(check_npc(&c).npc);
        assert!(check_special(&c).special);
        let hs = hyperplanes(&c);
        assert_eq!(hs.len(), ws.len());
        let mut seen = HashSet::new();
        for h in &hs {
            let walls: HashSet<usize> = h.edges.iter().map(|&e| dual.one_cubes()[e].wall).collect();
            assert_eq!(walls.len(), 1);
            assert!(seen.insert(*walls.iter().next().unwrap()));
        }
        let total: usize = hs.iter().map(|h| h.edges.len()).sum();
        assert_eq!(total, c.edge_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamming_is_graph_distance(seed in 0u64..10_000, a in 0usize..1000, b in 0usize..1000) {
        let ws = fixtures::random_wallspace_with(seed, false).unwrap();
        let dual = DualComplex::build(&ws).unwrap();
        let n = dual.zero_cubes().len();
        let (i, j) = (a % n, b % n);
        prop_assert_eq!(dual.hamming(i, j), dual.distance(i, j).unwrap());
    }

    #[test]
    fn random_duals_are_median(seed in 0u64..10_000) {
        let ws = fixtures::random_wallspace_with(seed, false).unwrap();
        let dual = DualComplex::build(&ws).unwrap();
        // all triples is cubic; keep the debug-build run short
        prop_assume!(dual.zero_cubes().len() <= 300);
        prop_assert!(check_median(&dual).is_median());
    }

    #[test]
    fn cube_walls_pairwise_cross(seed in 0u64..10_000) {
        let ws = fixtures::random_wallspace(seed).unwrap();
        let dual = DualComplex::build(&ws).unwrap();
        for n in 2..=dual.dimension() {
            for cube in dual.cubes(n) {
                for (a, &x) in cube.walls.iter().enumerate() {
                    for &y in &cube.walls[a + 1..] {
                        prop_assert!(ws.crosses(x, y).unwrap());
                    }
                }
            }
        }
    }
}
