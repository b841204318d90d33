use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::select::subgroup_ball;
use super::CriteriaError;
use crate::group::GroupElement;
use crate::wallspace::{
    Membership, Side, VertexSet, Wall, WallOrigin, Wallspace,
};

/// A trace of one or more ambient walls on the subgroup ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedWall {
    /// Index in the induced wallspace.
    pub wall: usize,
    /// Ambient walls with this trace, first one is the origin.
    pub ambient: Vec<usize>,
}

/// Walls restricted to the ball of a subgroup, in its own word metric.
#[derive(Clone, Debug)]
pub struct InducedWallspace {
    pub subgroup_generators: Vec<String>,
    pub wallspace: Wallspace,
    pub provenance: Vec<InducedWall>,
    /// Ambient walls whose trace had an empty side.
    pub discarded: Vec<usize>,
}

/// Restricts every ambient wall to the radius-`r_sub` ball of the subgroup
/// generated by `generators`. One-sided traces are dropped and identical
/// traces merged. The induced wallspace has margin 0: the subgroup ball
/// must already sit inside the ambient trusted ball.
pub fn induce_wallspace(
    ws: &Wallspace,
    generators: &[GroupElement],
    r_sub: u32,
) -> Result<InducedWallspace, CriteriaError> {
    let p = ws.ball().presentation_arc();
    let label = if generators.is_empty() {
        "1".to_string()
    } else {
        generators
            .iter()
            .map(|g| p.format(g))
            .collect::<Vec<_>>()
            .join(",")
    };
    let sub = subgroup_ball(
        Arc::clone(&p),
        generators,
        r_sub,
        format!("{}/<{label}>/R{r_sub}", ws.ball_id()),
    )?;
    let ambient = ws.ball();
    let mut embed = Vec::with_capacity(sub.len());
    for v in 0..sub.len() {
        match ambient.index_of(sub.vertex(v)) {
            Some(a) if ws.is_trusted_vertex(a) => embed.push(a),
            _ => {
                let len = sub.vertex(v).len() as u32;
                return Err(CriteriaError::Scale {
                    message: format!(
                        "subgroup element {} leaves the trusted ambient ball",
                        sub.format_vertex(v)
                    ),
                    minimal_radius: len.max(ws.trusted_radius() + 1) + ws.margin(),
                });
            }
        }
    }
    let n = sub.len();
    let mut walls: Vec<Wall> = Vec::new();
    let mut provenance: Vec<InducedWall> = Vec::new();
    let mut discarded = Vec::new();
    for (i, w) in ws.walls().iter().enumerate() {
        let mut left = VertexSet::with_capacity(n);
        let mut right = VertexSet::with_capacity(n);
        let mut carrier = VertexSet::with_capacity(n);
        for (v, &a) in embed.iter().enumerate() {
            match w.membership(a) {
                Membership::Side(Side::Left) => left.insert(v),
                Membership::Side(Side::Right) => right.insert(v),
                Membership::Carrier => carrier.insert(v),
            }
        }
        if left.is_clear() || right.is_clear() {
            discarded.push(i);
            continue;
        }
        let wall = Wall {
            deep: [true, true],
            deep_vertices: VertexSet::with_capacity(n),
            left,
            right,
            carrier,
            origin: WallOrigin {
                family: w.origin.family,
                translate: w.origin.translate.clone(),
            },
        };
        match walls.iter().position(|x| x.same_partition(&wall)) {
            Some(j) => provenance[j].ambient.push(i),
            None => {
                provenance.push(InducedWall {
                    wall: walls.len(),
                    ambient: vec![i],
                });
                walls.push(wall);
            }
        }
    }
    let sub = Arc::new(sub);
    let threshold = r_sub.div_ceil(2);
    for w in &mut walls {
        let (deep, dv) = crate::wallspace::deepness_of(&sub, &w.left, &w.right, threshold);
        w.deep = deep;
        w.deep_vertices = dv;
    }
    let wallspace = Wallspace::from_parts(sub, ws.families().to_vec(), walls, 0, threshold)?;
    Ok(InducedWallspace {
        subgroup_generators: generators.iter().map(|g| p.format(g)).collect(),
        wallspace,
        provenance,
        discarded,
    })
}
