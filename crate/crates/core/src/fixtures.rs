//! Small named wallspaces and balls used by the tests, the acceptance
//! suite and `cubulate fixtures`.

use std::sync::Arc;

use crate::complex::{ComplexError, CubeComplex};
use crate::group::{Builtin, CayleyBall, GroupError, GroupPresentation};
use crate::wallspace::{WallError, WallFamily, Wallspace, WallspaceBuilder};

pub fn ball(b: Builtin, radius: u32) -> Result<Arc<CayleyBall>, GroupError> {
    let p = Arc::new(GroupPresentation::builtin(b)?);
    Ok(Arc::new(CayleyBall::build(p, radius)?))
}

fn powers(letter: &str, inverse: &str, lo: i32, hi: i32) -> Vec<String> {
    (lo..=hi)
        .map(|k| {
            if k < 0 {
                inverse.repeat((-k) as usize)
            } else {
                letter.repeat(k as usize)
            }
        })
        .collect()
}

fn edge_family(
    builder: &mut WallspaceBuilder,
    label: &str,
    generator: &str,
    translates: &[String],
) -> Result<usize, WallError> {
    let g = builder.ball().presentation().element(generator)?;
    let f = builder.family(WallFamily::edge(label, g));
    let words: Vec<&str> = translates.iter().map(String::as_str).collect();
    builder.translate_words(f, &words)?;
    Ok(f)
}

/// ℤ on a radius-`radius` ball with the cuts `a^k | a^(k+1)` for
/// `lo ≤ k ≤ hi`, default margin.
pub fn line_cuts(radius: u32, lo: i32, hi: i32) -> Result<Wallspace, WallError> {
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeAbelian { rank: 1 }, radius)?);
    edge_family(&mut b, "cut", "a", &powers("a", "A", lo, hi))?;
    b.build()
}

/// ℤ, radius 7, the nine cuts `k = -4..4`.
pub fn line_point_cuts() -> Result<Wallspace, WallError> {
    line_cuts(7, -4, 4)
}

/// ℤ, radius 7, every cut meeting the trusted ball (`k = -5..4`).
pub fn line_all_cuts() -> Result<Wallspace, WallError> {
    line_cuts(7, -5, 4)
}

/// ℤ², radius 6, margin 2, columns `x = k + ½` and rows `y = k + ½` for
/// `k = -2..1`. The dual is the 5×5 grid.
pub fn grid() -> Result<Wallspace, WallError> {
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeAbelian { rank: 2 }, 6)?).margin(2);
    edge_family(&mut b, "columns", "a", &powers("a", "A", -2, 1))?;
    edge_family(&mut b, "rows", "b", &powers("b", "B", -2, 1))?;
    b.build()
}

/// ℤ², radius 6, margin 2, the four columns only.
pub fn grid_columns_only() -> Result<Wallspace, WallError> {
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeAbelian { rank: 2 }, 6)?).margin(2);
    edge_family(&mut b, "columns", "a", &powers("a", "A", -2, 1))?;
    b.build()
}

/// ℤ² with every column and row crossing the trusted ball, as candidates
/// for selection. `rows` toggles the second family.
pub fn grid_candidates(radius: u32, margin: u32, rows: bool) -> Result<Wallspace, WallError> {
    let t = (radius - margin) as i32;
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeAbelian { rank: 2 }, radius)?)
        .margin(margin);
    edge_family(&mut b, "columns", "a", &powers("a", "A", -t, t - 1))?;
    if rows {
        edge_family(&mut b, "rows", "b", &powers("b", "B", -t, t - 1))?;
    }
    b.build()
}

/// F₂ on a radius-`radius` ball, margin 0, one wall per edge of the ball.
pub fn tree(radius: u32) -> Result<Wallspace, WallError> {
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeGroup { rank: 2 }, radius)?).margin(0);
    for (label, g) in [("a-edges", "a"), ("b-edges", "b")] {
        let e = b.ball().presentation().element(g)?;
        let f = b.family(WallFamily::edge(label, e));
        b.all_edge_translates(f)?;
    }
    b.build()
}

/// F₂ with the edge walls of every edge meeting the ball of radius
/// `translate_radius`, margin 2. Candidates for axis checks.
pub fn tree_candidates(radius: u32, translate_radius: u32) -> Result<Wallspace, WallError> {
    let mut b = WallspaceBuilder::new(ball(Builtin::FreeGroup { rank: 2 }, radius)?).margin(2);
    let mut translates = Vec::new();
    for v in 0..b.ball().len() {
        if b.ball().dist(v) <= translate_radius {
            translates.push(b.ball().format_vertex(v));
        }
    }
    edge_family(&mut b, "a-edges", "a", &translates)?;
    edge_family(&mut b, "b-edges", "b", &translates)?;
    b.build()
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 7] = [
    "line",
    "line-all",
    "grid",
    "grid-columns",
    "tree",
    "line-axis",
    "tree-axis",
];

/// Named wallspace fixtures.
pub fn by_name(name: &str) -> Result<Wallspace, WallError> {
    match name {
        "line" => line_point_cuts(),
        "line-all" => line_all_cuts(),
        "grid" => grid(),
        "grid-columns" => grid_columns_only(),
        "tree" => tree(3),
        "line-axis" => line_cuts(6, 0, 0),
        "tree-axis" => tree_candidates(8, 1),
        other => Err(WallError::Malformed(format!(
            "unknown fixture {other:?} (known: {})",
            NAMES.join(", ")
        ))),
    }
}

/// Cube complexes shipped with the crate, as `(name, file contents)`.
pub const COMPLEXES: [(&str, &str); 6] = [
    ("torus", include_str!("../fixtures/complexes/torus.toml")),
    ("wedge", include_str!("../fixtures/complexes/wedge.toml")),
    ("folded-square", include_str!("../fixtures/complexes/folded-square.toml")),
    ("mobius", include_str!("../fixtures/complexes/mobius.toml")),
    ("three-squares", include_str!("../fixtures/complexes/three-squares.toml")),
    ("solid-cube", include_str!("../fixtures/complexes/solid-cube.toml")),
];

pub const COMPLEX_NAMES: [&str; 6] = [
    "torus",
    "wedge",
    "folded-square",
    "mobius",
    "three-squares",
    "solid-cube",
];

/// Named cube complex fixtures.
pub fn complex(name: &str) -> Result<CubeComplex, ComplexError> {
    let text = COMPLEXES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            ComplexError::Parse(format!(
                "unknown complex fixture {name:?} (known: {})",
                COMPLEX_NAMES.join(", ")
            ))
        })?;
    CubeComplex::from_toml(text)
}

/// Largest wall count produced by [`random_wallspace`].
pub const RANDOM_MAX_WALLS: usize = 12;
/// Largest ball produced by [`random_wallspace`].
pub const RANDOM_MAX_VERTICES: usize = 30;

/// A seeded random wallspace with margin 0: a ball of at most 30 vertices
/// in ℤ, ℤ² or F₂, and up to 12 walls mixing translated edge walls with
/// arbitrary bipartitions, each with a small random carrier.
pub fn random_wallspace(seed: u64) -> Result<Wallspace, WallError> {
    random_wallspace_with(seed, true)
}

/// As [`random_wallspace`]; with `carriers` false every wall is a genuine
/// bipartition of the ball.
pub fn random_wallspace_with(seed: u64, carriers: bool) -> Result<Wallspace, WallError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (b, radius) = match rng.gen_range(0..3) {
        0 => (Builtin::FreeAbelian { rank: 1 }, rng.gen_range(3..=14)),
        1 => (Builtin::FreeAbelian { rank: 2 }, rng.gen_range(2..=3)),
        _ => (Builtin::FreeGroup { rank: 2 }, 2),
    };
    let ball = ball(b, radius)?;
    let n = ball.len();
    debug_assert!(n <= RANDOM_MAX_VERTICES);
    let rank = ball.presentation().alphabet().len() / 2;
    let mut builder = WallspaceBuilder::new(Arc::clone(&ball)).margin(0);
    let target = rng.gen_range(1..=RANDOM_MAX_WALLS);
    let mut attempts = 0;
    let mut count = 0;
    while count < target && attempts < 4 * RANDOM_MAX_WALLS {
        attempts += 1;
        let label = format!("w{attempts}");
        if rng.gen_bool(0.5) {
            let gen = ["a", "b"][rng.gen_range(0..rank)];
            let g = ball.presentation().element(gen)?;
            let t = ball.element(rng.gen_range(0..n));
            let f = builder.family(WallFamily::edge(&label, g));
            builder.translate(f, t);
        } else {
            let mut left = crate::wallspace::VertexSet::with_capacity(n);
            let mut carrier = crate::wallspace::VertexSet::with_capacity(n);
            for v in 0..n {
                match rng.gen_range(0..10) {
                    0 if carriers => carrier.insert(v),
                    1..=5 => left.insert(v),
                    _ => {}
                }
            }
            if left.is_clear() || left.count_ones(..) + carrier.count_ones(..) == n {
                continue;
            }
            let f = builder.family(WallFamily::partition(&label, left, carrier));
            builder.translate(f, crate::group::GroupElement::identity());
        }
        match builder.build() {
            Ok(ws) => count = ws.len(),
            Err(_) => builder.pop_request(),
        }
    }
    builder.build()
}
