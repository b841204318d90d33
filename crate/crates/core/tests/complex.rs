use std::collections::{HashMap, HashSet};

use cubulate::complex::{check_npc, check_special, hyperplanes, CubeComplex, LinkViolation, Pathology};
use cubulate::dual::DualComplex;
use cubulate::fixtures;
use proptest::prelude::*;

fn edge_partition_holds(c: &CubeComplex) -> bool {
    let hs = hyperplanes(c);
    let mut seen = vec![false; c.edge_count()];
    for h in &hs {
        for &e in &h.edges {
            if seen[e] {
                return false;
            }
            seen[e] = true;
        }
    }
    seen.into_iter().all(|x| x)
}

#[test]
fn fixture_verdicts() {
    let torus = fixtures::complex("torus").unwrap();
    assert!(check_npc(&torus).npc);
    let r = check_special(&torus);
    assert!(r.special);
    assert_eq!(r.hyperplanes.len(), 2);

    let corner = fixtures::complex("three-squares").unwrap();
    let npc = check_npc(&corner);
    assert!(!npc.npc);
    assert!(npc
        .violations
        .iter()
        .any(|v| matches!(v, LinkViolation::EmptySimplex { clique, .. } if clique.len() == 3)));

    let folded = check_special(&fixtures::complex("folded-square").unwrap());
    assert!(!folded.special);
    assert!(matches!(folded.pathologies[0], Pathology::SelfIntersection { .. }));

    let wedge = fixtures::complex("wedge").unwrap();
    assert!(check_npc(&wedge).npc);
    let r = check_special(&wedge);
    assert!(r.special && r.hyperplanes.len() == 2);
}

#[test]
fn edges_partition_into_hyperplanes() {
    for name in fixtures::COMPLEX_NAMES {
        assert!(edge_partition_holds(&fixtures::complex(name).unwrap()), "{name}");
    }
}

/// Classes after deleting a square refine the classes before.
fn refines(smaller: &CubeComplex, larger: &CubeComplex) -> bool {
    let mut class_of = HashMap::new();
    for h in hyperplanes(larger) {
        for e in h.edges {
            class_of.insert(larger.name(1, e).to_string(), h.index);
        }
    }
    hyperplanes(smaller).iter().all(|h| {
        h.edges
            .iter()
            .map(|&e| class_of[smaller.name(1, e)])
            .collect::<HashSet<_>>()
            .len()
            == 1
    })
}

#[test]
fn deleting_a_square_only_splits_hyperplanes() {
    for name in fixtures::COMPLEX_NAMES {
        let c = fixtures::complex(name).unwrap();
        for s in 0..c.cells(2).len() {
            let smaller = c.without_cell(2, s).unwrap();
            assert!(refines(&smaller, &c), "{name} without square {s}");
            assert!(hyperplanes(&smaller).len() >= hyperplanes(&c).len());
        }
    }
}

#[test]
fn hollow_cube_fails_at_every_corner() {
    let cube = fixtures::complex("solid-cube").unwrap();
    assert!(check_npc(&cube).npc);
    let (d, c) = cube.find("C").unwrap();
    let hollow = cube.without_cell(d, c).unwrap();
    // every corner of the hollow cube sees an empty triangle
    let r = check_npc(&hollow);
    assert_eq!(r.violations.len(), 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_duals_are_special(seed in 0u64..10_000) {
        let ws = fixtures::random_wallspace_with(seed, false).unwrap();
        let dual = DualComplex::build(&ws).unwrap();
        prop_assume!(dual.zero_cubes().len() <= 400);
        let c = CubeComplex::from_dual(&dual).unwrap();
        prop_assert!(edge_partition_holds(&c));
        prop_assert!(check_npc(&c).npc);
        prop_assert!(check_special(&c).special);
        let walls: HashSet<usize> = dual.one_cubes().iter().map(|e| e.wall).collect();
        let hs = hyperplanes(&c);
        prop_assert_eq!(hs.len(), walls.len());
        for h in &hs {
            let w: HashSet<usize> = h.edges.iter().map(|&e| dual.one_cubes()[e].wall).collect();
            prop_assert_eq!(w.len(), 1);
        }
        let again = CubeComplex::from_toml(&c.to_toml()).unwrap();
        prop_assert_eq!(again, c);
    }
}
