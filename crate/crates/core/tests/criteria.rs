use std::collections::BTreeMap;

use cubulate::criteria::{
    axis_separation, conjugacy_representatives, induce_wallspace, linear_separation_profile,
    reverify_selection, select_walls, selection_stability, AxisOptions, CoverageStatus,
    CriteriaError, SelectOptions,
};
use cubulate::fixtures;
use cubulate::group::Builtin;
use cubulate::wallspace::{Membership, Side, Wallspace};
use proptest::prelude::*;

fn strictly_increasing(xs: &[usize]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

#[test]
fn line_and_tree_profiles_grow() {
    let line = linear_separation_profile(&fixtures::line_all_cuts().unwrap(), 5, 1).unwrap();
    assert_eq!(line.minima(), vec![1, 2, 3, 4, 5]);
    assert!(line.properness_plausible);
    let tree = linear_separation_profile(&fixtures::tree(3).unwrap(), 3, 1).unwrap();
    assert_eq!(tree.minima(), vec![1, 2, 3]);
    assert!(tree.properness_plausible);
}

#[test]
fn columns_alone_give_a_flat_profile() {
    let p = linear_separation_profile(&fixtures::grid_columns_only().unwrap(), 4, 1).unwrap();
    assert_eq!(p.minima(), vec![0, 0, 0, 0]);
    assert!(!p.properness_plausible);
}

#[test]
fn profile_beyond_trusted_radius_is_a_scale_error() {
    let ws = fixtures::grid().unwrap();
    let err = linear_separation_profile(&ws, ws.trusted_radius() + 1, 1).unwrap_err();
    assert!(matches!(err, CriteriaError::Scale { .. }));
}

#[test]
fn line_axis_witness() {
    let ws = fixtures::by_name("line-axis").unwrap();
    let g = ws.ball().presentation().element("a").unwrap();
    let r = axis_separation(&ws, &g, &AxisOptions::default()).unwrap();
    let w = r.witness.unwrap();
    assert_eq!((w.n, w.chain_verified_to), (1, 2));
    assert!(r.verdict);
}

#[test]
fn invariant_wall_rejected_transverse_wall_accepted() {
    let ws = fixtures::grid().unwrap();
    let p = ws.ball().presentation();
    let a = p.element("a").unwrap();
    let family = |ws: &Wallspace, i: usize| ws.families()[ws.wall(i).origin.family].label.clone();
    let row = (0..ws.len()).find(|&i| family(&ws, i) == "rows").unwrap();
    let column = (0..ws.len()).find(|&i| family(&ws, i) == "columns").unwrap();
    let opts = AxisOptions::default();
    let rows_only = ws.subset(&[row]).unwrap();
    assert!(!axis_separation(&rows_only, &a, &opts).unwrap().verdict);
    let columns_only = ws.subset(&[column]).unwrap();
    assert!(axis_separation(&columns_only, &a, &opts).unwrap().verdict);
}

#[test]
fn axis_chain_too_long_for_the_ball() {
    let ws = fixtures::line_cuts(3, 0, 0).unwrap();
    let g = ws.ball().presentation().element("aa").unwrap();
    match axis_separation(&ws, &g, &AxisOptions::default()) {
        Err(CriteriaError::Scale { minimal_radius, .. }) => assert!(minimal_radius > 3),
        other => panic!("expected a scale error, got {other:?}"),
    }
}

#[test]
fn torsion_is_skipped() {
    let ws = {
        use cubulate::group::SimpleGraph;
        let ball = fixtures::ball(
            Builtin::RightAngledCoxeter {
                graph: SimpleGraph::new(2, vec![]).unwrap(),
            },
            6,
        )
        .unwrap();
        let mut b = cubulate::wallspace::WallspaceBuilder::new(ball);
        let e = b.ball().presentation().element("a").unwrap();
        let f = b.family(cubulate::wallspace::WallFamily::edge("a-edge", e));
        b.translate(f, cubulate::group::GroupElement::identity());
        b.build().unwrap()
    };
    let g = ws.ball().presentation().element("a").unwrap();
    let r = axis_separation(&ws, &g, &AxisOptions::default()).unwrap();
    assert!(!r.infinite_order && !r.verdict);
}

#[test]
fn grid_selection_covers_and_reverifies() {
    let ws = fixtures::grid_candidates(9, 2, true).unwrap();
    let opts = SelectOptions {
        separate_pairs: true,
        ..Default::default()
    };
    let res = select_walls(&ws, 3, &opts).unwrap();
    assert!(res.full_coverage, "{:?}", res.uncovered);
    let reps = conjugacy_representatives(ws.ball().presentation(), 3).unwrap();
    assert_eq!(res.coverage.len(), reps.len());
    let axis: Vec<String> = res.axis_walls().map(|s| s.family.clone()).collect();
    assert_eq!(axis, ["columns", "rows"]);
    assert!(reverify_selection(&ws, &res, &opts).unwrap().is_empty());
}

#[test]
fn one_family_leaves_b_uncovered() {
    let ws = fixtures::grid_candidates(9, 2, false).unwrap();
    let res = select_walls(&ws, 3, &SelectOptions::default()).unwrap();
    assert!(!res.full_coverage);
    assert!(res.uncovered.contains(&"b".to_string()));
    assert!(!res.uncovered.contains(&"a".to_string()));
}

#[test]
fn free_group_selection_needs_few_walls() {
    let ws = fixtures::tree_candidates(8, 1).unwrap();
    let opts = SelectOptions {
        axis: AxisOptions {
            k_max: 1,
            ..Default::default()
        },
        ..Default::default()
    };
    let res = select_walls(&ws, 2, &opts).unwrap();
    assert!(res.full_coverage);
    assert!(res.axis_walls().count() <= 4);
    assert!(reverify_selection(&ws, &res, &opts).unwrap().is_empty());
}

#[test]
fn parabolic_exemption() {
    let ws = fixtures::grid_candidates(9, 2, false).unwrap();
    let opts = SelectOptions {
        parabolics: vec![vec!["b".into()]],
        ..Default::default()
    };
    let res = select_walls(&ws, 2, &opts).unwrap();
    for row in &res.coverage {
        if row.element.chars().all(|c| c == 'b' || c == 'B') {
            assert_eq!(row.status, CoverageStatus::Exempt { parabolic: 0 });
        }
    }
    assert!(res.uncovered.is_empty(), "{:?}", res.uncovered);
}

#[test]
fn selection_is_stable_across_radii() {
    let opts = SelectOptions::default();
    let small = select_walls(&fixtures::grid_candidates(9, 2, true).unwrap(), 2, &opts).unwrap();
    let large = select_walls(&fixtures::grid_candidates(10, 2, true).unwrap(), 2, &opts).unwrap();
    let s = selection_stability((9, &small), (10, &large));
    assert!(s.stable, "{s:?}");
}

fn side_names(ws: &Wallspace, i: usize, s: Side) -> Vec<String> {
    let mut v: Vec<String> = ws.wall(i).members(s).ones().map(|x| ws.ball().format_vertex(x)).collect();
    v.sort();
    v
}

#[test]
fn induced_on_a_line_is_the_point_cut_system() {
    let ambient = fixtures::grid_candidates(9, 2, true).unwrap();
    let a = ambient.ball().presentation().element("a").unwrap();
    let induced = induce_wallspace(&ambient, &[a], 7).unwrap();
    let iws = &induced.wallspace;
    let line = fixtures::line_cuts(7, -7, 6).unwrap();
    assert_eq!(iws.len(), line.len());
    let key = |ws: &Wallspace| -> BTreeMap<Vec<String>, Vec<String>> {
        (0..ws.len())
            .map(|i| (side_names(ws, i, Side::Left), side_names(ws, i, Side::Right)))
            .collect()
    };
    assert_eq!(key(iws), key(&line));
    // every row is parallel to ⟨a⟩ and leaves no trace
    let rows = ambient.families().iter().position(|f| f.label == "rows").unwrap();
    for &d in &induced.discarded {
        assert_eq!(ambient.wall(d).origin.family, rows);
    }
    let profile = linear_separation_profile(iws, 7, 1).unwrap();
    assert!(strictly_increasing(&profile.minima()));
    assert!(profile.properness_plausible);
}

fn flip(m: Membership) -> Membership {
    match m {
        Membership::Side(s) => Membership::Side(s.flip()),
        c => c,
    }
}

#[test]
fn induced_walls_restrict_ambient_walls() {
    let ambient = fixtures::grid_candidates(9, 2, true).unwrap();
    let ab = ambient.ball().presentation().element("ab").unwrap();
    let induced = induce_wallspace(&ambient, &[ab], 3).unwrap();
    let sub = induced.wallspace.ball();
    for prov in &induced.provenance {
        let w = induced.wallspace.wall(prov.wall);
        for &amb in &prov.ambient {
            for v in 0..sub.len() {
                let a = ambient.ball().index_of(sub.vertex(v)).unwrap();
                let m = ambient.wall(amb).membership(a);
                assert!(m == w.membership(v) || flip(m) == w.membership(v));
            }
        }
    }
}

#[test]
fn induce_past_the_trusted_ball_is_a_scale_error() {
    let ambient = fixtures::grid().unwrap();
    let a = ambient.ball().presentation().element("a").unwrap();
    assert!(matches!(
        induce_wallspace(&ambient, &[a], ambient.trusted_radius() + 1),
        Err(CriteriaError::Scale { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// In ℤ² a column is a witness for `aᵖbᑫ` exactly when `p ≠ 0`, a row
    /// exactly when `q ≠ 0`; columns are scanned first.
    #[test]
    fn grid_axis_verdicts_match_coordinates(p in -2i32..=2, q in -2i32..=2) {
        prop_assume!(p != 0 || q != 0);
        prop_assume!(p.abs() + q.abs() <= 2);
        let ws = fixtures::grid_candidates(9, 2, true).unwrap();
        let pres = ws.ball().presentation();
        let word = format!(
            "{}{}",
            if p >= 0 { "a".repeat(p as usize) } else { "A".repeat((-p) as usize) },
            if q >= 0 { "b".repeat(q as usize) } else { "B".repeat((-q) as usize) },
        );
        let g = pres.element(&word).unwrap();
        let r = axis_separation(&ws, &g, &AxisOptions::default()).unwrap();
        prop_assert!(r.verdict);
        let fam = r.witness.unwrap().family;
        prop_assert_eq!(fam, if p != 0 { "columns" } else { "rows" });
    }
}
