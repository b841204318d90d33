use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::axis::{axis_separation_among, check_scale, scan_order, trusted_vertices, wall_witness};
use super::{AxisOptions, CriteriaError};
use crate::group::{CayleyBall, GroupElement, GroupPresentation, Move};
use crate::wallspace::{Membership, Wallspace};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectOptions {
    pub axis: AxisOptions,
    /// Generators of declared parabolic subgroups, as words.
    pub parabolics: Vec<Vec<String>>,
    /// Also require every pair of distinct trusted vertices to be separated.
    pub separate_pairs: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPhase {
    Axis,
    Separation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedWall {
    /// Index in the candidate wallspace.
    pub wall: usize,
    pub family: String,
    pub translate: String,
    pub phase: SelectionPhase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoverageStatus {
    Covered { wall: usize, n: u32, direction: i8 },
    /// Conjugate into a declared parabolic subgroup.
    Exempt { parabolic: usize },
    FiniteOrder,
    /// The ball is too small to test the requested powers.
    OutOfScale { minimal_radius: u32 },
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub element: String,
    #[serde(flatten)]
    pub status: CoverageStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub ball_id: String,
    pub length: u32,
    pub selected: Vec<SelectedWall>,
    pub coverage: Vec<CoverageRow>,
    pub uncovered: Vec<String>,
    pub unseparated_pairs: Vec<[String; 2]>,
    pub full_coverage: bool,
}

impl SelectionResult {
    pub fn axis_walls(&self) -> impl Iterator<Item = &SelectedWall> {
        self.selected
            .iter()
            .filter(|s| s.phase == SelectionPhase::Axis)
    }

    pub fn wall_indices(&self) -> Vec<usize> {
        self.selected.iter().map(|s| s.wall).collect()
    }
}

/// Nontrivial elements of length at most `l`, one per class under cyclic
/// rotation of normal forms (for builtins), each represented by its
/// shortlex-least member. Other presentations get every element.
pub fn conjugacy_representatives(
    p: &GroupPresentation,
    l: u32,
) -> Result<Vec<GroupElement>, CriteriaError> {
    let ball = CayleyBall::build(Arc::new(p.clone()), l)?;
    let n = ball.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    if p.builtin_tag().is_some() {
        for v in 1..n {
            for r in ball.vertex(v).rotations() {
                if let Some(u) = ball.find(&r)? {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    // the root is always the least index, i.e. shortlex-least
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut reps = Vec::new();
    for v in 1..n {
        if find(&mut parent, v) == v {
            reps.push(ball.element(v));
        }
    }
    Ok(reps)
}

/// Whether some cyclic rotation of `g` lies in the ball of the subgroup.
fn conjugate_into(
    p: &GroupPresentation,
    g: &GroupElement,
    sub: &CayleyBall,
) -> Result<bool, CriteriaError> {
    for r in g.word().rotations() {
        if sub.index_of(&p.normal_form(&r)?).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn subgroup_ball(
    p: Arc<GroupPresentation>,
    generators: &[GroupElement],
    radius: u32,
    id: String,
) -> Result<CayleyBall, CriteriaError> {
    let mut moves = Vec::new();
    for h in generators {
        let inv = p.invert(h)?;
        for m in [h, &inv] {
            moves.push(Move {
                label: p.format(m),
                word: m.word().clone(),
            });
        }
    }
    Ok(CayleyBall::build_with_moves(
        p,
        moves,
        radius,
        crate::group::DEFAULT_VERTEX_BUDGET,
        id,
    )?)
}

/// Greedy wall selection. Every conjugacy representative of length at
/// most `l` is checked against the walls chosen so far; if none is an axis
/// witness, the candidates are scanned in family/translate order and the
/// first witness is added. With `separate_pairs`, a second phase adds the
/// first candidate separating each still-unseparated pair of distinct
/// trusted vertices.
pub fn select_walls(
    candidates: &Wallspace,
    l: u32,
    opts: &SelectOptions,
) -> Result<SelectionResult, CriteriaError> {
    let p = candidates.ball().presentation();
    let parr = candidates.ball().presentation_arc();
    let reps = conjugacy_representatives(p, l)?;
    let parabolic_balls = opts
        .parabolics
        .iter()
        .enumerate()
        .map(|(i, gens)| {
            let gens = gens
                .iter()
                .map(|w| p.element(w))
                .collect::<Result<Vec<_>, _>>()?;
            subgroup_ball(Arc::clone(&parr), &gens, l, format!("parabolic{i}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let order = scan_order(candidates);
    let trusted = trusted_vertices(candidates);
    let mut chosen: Vec<usize> = Vec::new();
    let mut selected = Vec::new();
    let mut coverage = Vec::new();
    let mut uncovered = Vec::new();
    let describe = |w: usize, phase| {
        let o = &candidates.wall(w).origin;
        SelectedWall {
            wall: w,
            family: candidates.families()[o.family].label.clone(),
            translate: p.format(&o.translate),
            phase,
        }
    };
    'reps: for g in &reps {
        let element = p.format(g);
        for (i, b) in parabolic_balls.iter().enumerate() {
            if conjugate_into(p, g, b)? {
                coverage.push(CoverageRow {
                    element,
                    status: CoverageStatus::Exempt { parabolic: i },
                });
                continue 'reps;
            }
        }
        // already covered by a chosen wall?
        let mut report = match axis_separation_among(candidates, g, &opts.axis, &chosen) {
            Err(CriteriaError::Scale { minimal_radius, .. }) => {
                uncovered.push(element.clone());
                coverage.push(CoverageRow {
                    element,
                    status: CoverageStatus::OutOfScale { minimal_radius },
                });
                continue;
            }
            r => r?,
        };
        if !report.infinite_order {
            coverage.push(CoverageRow {
                element,
                status: CoverageStatus::FiniteOrder,
            });
            continue;
        }
        if report.witness.is_none() {
            report = axis_separation_among(candidates, g, &opts.axis, &order)?;
            if let Some(w) = &report.witness {
                chosen.push(w.wall);
                selected.push(describe(w.wall, SelectionPhase::Axis));
            }
        }
        match report.witness {
            Some(w) => coverage.push(CoverageRow {
                element,
                status: CoverageStatus::Covered {
                    wall: w.wall,
                    n: w.n,
                    direction: w.direction,
                },
            }),
            None => {
                uncovered.push(element.clone());
                coverage.push(CoverageRow {
                    element,
                    status: CoverageStatus::Uncovered,
                });
            }
        }
    }

    let mut unseparated_pairs = Vec::new();
    if opts.separate_pairs {
        let ball = candidates.ball();
        let separates = |w: usize, u: usize, v: usize| {
            let wall = candidates.wall(w);
            matches!(
                (wall.membership(u), wall.membership(v)),
                (Membership::Side(a), Membership::Side(b)) if a != b
            )
        };
        for (i, &u) in trusted.iter().enumerate() {
            for &v in &trusted[i + 1..] {
                if chosen.iter().any(|&w| separates(w, u, v)) {
                    continue;
                }
                match order.iter().find(|&&w| separates(w, u, v)) {
                    Some(&w) => {
                        chosen.push(w);
                        selected.push(describe(w, SelectionPhase::Separation));
                    }
                    None => unseparated_pairs.push([ball.format_vertex(u), ball.format_vertex(v)]),
                }
            }
        }
    }
    let full_coverage = uncovered.is_empty() && unseparated_pairs.is_empty();
    Ok(SelectionResult {
        ball_id: candidates.ball_id().to_string(),
        length: l,
        selected,
        coverage,
        uncovered,
        unseparated_pairs,
        full_coverage,
    })
}

/// Rebuilds a wallspace from only the selected walls and re-checks every
/// stored axis witness and, if pairs were required, every separation.
/// Returns the elements or pairs that fail.
pub fn reverify_selection(
    candidates: &Wallspace,
    result: &SelectionResult,
    opts: &SelectOptions,
) -> Result<Vec<String>, CriteriaError> {
    let keep = result.wall_indices();
    let sub = candidates.subset(&keep)?;
    let position: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let p = candidates.ball().presentation();
    let trusted = trusted_vertices(&sub);
    let mut failures = Vec::new();
    for row in &result.coverage {
        if let CoverageStatus::Covered { wall, n, direction } = row.status {
            let g = p.element(&row.element)?;
            let ok = match position.get(&wall) {
                Some(&i) => {
                    check_scale(&sub, &g, n, opts.axis.k_max)?;
                    wall_witness(&sub, &g, i, n, opts.axis.k_max, &trusted)?
                        .is_some_and(|d| d == direction)
                }
                None => false,
            };
            if !ok {
                failures.push(format!("axis witness for {}", row.element));
            }
        }
    }
    if opts.separate_pairs {
        for (i, &u) in trusted.iter().enumerate() {
            for &v in &trusted[i + 1..] {
                if sub.separation_count(u, v)?.count == 0
                    && !result.unseparated_pairs.contains(&[
                        sub.ball().format_vertex(u),
                        sub.ball().format_vertex(v),
                    ])
                {
                    failures.push(format!(
                        "pair ({}, {})",
                        sub.ball().format_vertex(u),
                        sub.ball().format_vertex(v)
                    ));
                }
            }
        }
    }
    Ok(failures)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    pub radii: [u32; 2],
    pub stable: bool,
    pub only_smaller: Vec<String>,
    pub only_larger: Vec<String>,
}

/// Compares the walls chosen at two radii by family and translate.
pub fn selection_stability(
    smaller: (u32, &SelectionResult),
    larger: (u32, &SelectionResult),
) -> Stability {
    let key = |r: &SelectionResult| -> BTreeSet<String> {
        r.selected
            .iter()
            .map(|s| format!("{}@{}", s.family, s.translate))
            .collect()
    };
    let (a, b) = (key(smaller.1), key(larger.1));
    Stability {
        radii: [smaller.0, larger.0],
        stable: a == b && smaller.1.uncovered == larger.1.uncovered,
        only_smaller: a.difference(&b).cloned().collect(),
        only_larger: b.difference(&a).cloned().collect(),
    }
}
