//! Walls over a Cayley ball and the predicates on them.
//!
//! A wall is a pair of disjoint halfspaces `(left, right)` together with a
//! carrier: the vertices assigned to neither side (the deleted
//! neighbourhood for subgroup walls, ties for edge walls, empty for
//! explicit partitions). Predicates that are sensitive to truncation
//! (crossing, nesting, consistency) only look at the trusted sub-ball of
//! radius `R - margin`.

mod build;
mod spec;

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{CayleyBall, GroupElement, GroupError};

pub use build::{
    deepness as deepness_of, edge_wall, partition_wall, resolve_subgroup_radius, wall_from_subgroup, ComponentCensus,
    WallParams, WallspaceBuilder,
};
pub use spec::{
    FamilyFile, FamilyKind, FamilySpec, RadiusSpec, TranslateSpec, WallFile, WallsSpec,
    WallspaceFile, WALLSPACE_FORMAT_VERSION,
};

/// Bitset over ball vertex indices.
pub type VertexSet = FixedBitSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WallError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("not codimension-1 at this scale: {deep} deep component(s) among {}", .census.len())]
    NotCodimensionOne {
        deep: usize,
        census: Vec<ComponentCensus>,
    },
    #[error("scale error: {0}")]
    Scale(String),
    #[error("wall {wall} is not trusted at this margin (boundary uncertainty)")]
    BoundaryUncertainty { wall: usize },
    #[error("vertex {0} lies outside the trusted sub-ball")]
    UntrustedVertex(usize),
    #[error("malformed walls input: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// Where a vertex sits relative to a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Side(Side),
    Carrier,
}

/// One side of a wall.
#[derive(Clone, Copy, Debug)]
pub struct Halfspace<'a> {
    pub ball_id: &'a str,
    pub side: Side,
    pub members: &'a VertexSet,
}

/// How a family produces its walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySource {
    /// Delete the `radius`-neighbourhood of a coset of the subgroup
    /// generated by `generators` and split the complement.
    Subgroup {
        generators: Vec<GroupElement>,
        radius: u32,
    },
    /// The wall dual to the edge `(g, g·generator)`: vertices strictly
    /// closer to `g·generator` form the left side, vertices strictly closer
    /// to `g` the right side, ties form the carrier. Membership is given by
    /// the group metric, so translates are exact beyond the ball.
    Edge { generator: GroupElement },
    /// An explicit bipartition of the ball.
    Partition { left: VertexSet, carrier: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFamily {
    pub label: String,
    pub source: FamilySource,
}

impl WallFamily {
    pub fn subgroup(label: &str, generators: Vec<GroupElement>, radius: u32) -> Self {
        WallFamily {
            label: label.to_string(),
            source: FamilySource::Subgroup { generators, radius },
        }
    }

    pub fn edge(label: &str, generator: GroupElement) -> Self {
        WallFamily {
            label: label.to_string(),
            source: FamilySource::Edge { generator },
        }
    }

    pub fn partition(label: &str, left: VertexSet, carrier: VertexSet) -> Self {
        WallFamily {
            label: label.to_string(),
            source: FamilySource::Partition { left, carrier },
        }
    }

    /// Subgroup generators (empty for edge and partition families).
    pub fn subgroup_generators(&self) -> &[GroupElement] {
        match &self.source {
            FamilySource::Subgroup { generators, .. } => generators,
            _ => &[],
        }
    }

    pub fn neighborhood_radius(&self) -> u32 {
        match &self.source {
            FamilySource::Subgroup { radius, .. } => *radius,
            _ => 0,
        }
    }
}

/// The family a wall came from and the element that translates the
/// family's base wall onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallOrigin {
    pub family: usize,
    pub translate: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub left: VertexSet,
    pub right: VertexSet,
    pub carrier: VertexSet,
    pub origin: WallOrigin,
    /// Deepness verdict per side, indexed by [`Side::index`].
    pub deep: [bool; 2],
    /// Vertices far enough from the carrier to count as deep.
    pub deep_vertices: VertexSet,
}

impl Wall {
    pub fn members(&self, side: Side) -> &VertexSet {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn halfspace<'a>(&'a self, ball_id: &'a str, side: Side) -> Halfspace<'a> {
        Halfspace {
            ball_id,
            side,
            members: self.members(side),
        }
    }

    pub fn membership(&self, v: usize) -> Membership {
        if self.left.contains(v) {
            Membership::Side(Side::Left)
        } else if self.right.contains(v) {
            Membership::Side(Side::Right)
        } else {
            Membership::Carrier
        }
    }

    /// Same partition of the ball, possibly with sides exchanged.
    pub fn same_partition(&self, other: &Wall) -> bool {
        self.carrier == other.carrier
            && ((self.left == other.left && self.right == other.right)
                || (self.left == other.right && self.right == other.left))
    }
}

/// Which pair of halfspaces is disjoint on the trusted sub-ball. `LR`
/// means the left side of the first wall misses the right side of the
/// second, i.e. left₁ ⊆ left₂ there. `None` means the walls cross.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Nesting {
    LL,
    LR,
    RL,
    RR,
    None,
}

impl Nesting {
    fn from_sides(a: Side, b: Side) -> Nesting {
        match (a, b) {
            (Side::Left, Side::Left) => Nesting::LL,
            (Side::Left, Side::Right) => Nesting::LR,
            (Side::Right, Side::Left) => Nesting::RL,
            (Side::Right, Side::Right) => Nesting::RR,
        }
    }

    /// The verdict with the two walls exchanged.
    pub fn swapped(self) -> Nesting {
        match self {
            Nesting::LR => Nesting::RL,
            Nesting::RL => Nesting::LR,
            other => other,
        }
    }
}

/// Result of counting separating walls. Walls whose carrier contains one
/// of the two vertices are skipped and listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub count: usize,
    pub carrier_ambiguous: Vec<usize>,
}

/// A finite system of walls over one ball.
#[derive(Clone, Debug)]
pub struct Wallspace {
    ball: Arc<CayleyBall>,
    walls: Vec<Wall>,
    families: Vec<WallFamily>,
    margin: u32,
    depth_threshold: u32,
    trusted: VertexSet,
    trusted_halves: Vec<[VertexSet; 2]>,
}

impl PartialEq for Wallspace {
    fn eq(&self, other: &Self) -> bool {
        *self.ball == *other.ball
            && self.walls == other.walls
            && self.families == other.families
            && self.margin == other.margin
            && self.depth_threshold == other.depth_threshold
    }
}

/// `⌈R/4⌉`.
pub fn default_margin(radius: u32) -> u32 {
    radius.div_ceil(4)
}

/// `⌈(R - m)/2⌉`.
pub fn default_depth_threshold(radius: u32, margin: u32) -> u32 {
    radius.saturating_sub(margin).div_ceil(2)
}

pub(crate) fn trusted_set(ball: &CayleyBall, margin: u32) -> VertexSet {
    let limit = ball.radius().saturating_sub(margin);
    let mut t = VertexSet::with_capacity(ball.len());
    for v in 0..ball.len() {
        if ball.dist(v) <= limit {
            t.insert(v);
        }
    }
    t
}

impl Wallspace {
    /// Assembles a wallspace from already-built walls. Family indices in
    /// wall origins must refer to `families`.
    pub fn from_parts(
        ball: Arc<CayleyBall>,
        families: Vec<WallFamily>,
        walls: Vec<Wall>,
        margin: u32,
        depth_threshold: u32,
    ) -> Result<Self, WallError> {
        if margin > ball.radius() {
            return Err(WallError::Malformed(format!(
                "margin {margin} exceeds ball radius {}",
                ball.radius()
            )));
        }
        let n = ball.len();
        for (i, w) in walls.iter().enumerate() {
            if w.origin.family >= families.len() {
                return Err(WallError::Malformed(format!(
                    "wall {i} refers to missing family {}",
                    w.origin.family
                )));
            }
            if w.left.len() != n || w.right.len() != n || w.carrier.len() != n {
                return Err(WallError::Malformed(format!("wall {i} has wrong bitset length")));
            }
            if !w.left.is_disjoint(&w.right)
                || !w.left.is_disjoint(&w.carrier)
                || !w.right.is_disjoint(&w.carrier)
                || w.left.count_ones(..) + w.right.count_ones(..) + w.carrier.count_ones(..) != n
            {
                return Err(WallError::Malformed(format!(
                    "wall {i}: left, right and carrier must partition the ball"
                )));
            }
        }
        let trusted = trusted_set(&ball, margin);
        let trusted_halves = walls
            .iter()
            .map(|w| {
                let mut l = w.left.clone();
                l.intersect_with(&trusted);
                let mut r = w.right.clone();
                r.intersect_with(&trusted);
                [l, r]
            })
            .collect();
        Ok(Wallspace {
            ball,
            walls,
            families,
            margin,
            depth_threshold,
            trusted,
            trusted_halves,
        })
    }

    pub fn ball(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn ball_arc(&self) -> Arc<CayleyBall> {
        Arc::clone(&self.ball)
    }

    pub fn ball_id(&self) -> &str {
        self.ball.id()
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall(&self, i: usize) -> &Wall {
        &self.walls[i]
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn families(&self) -> &[WallFamily] {
        &self.families
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn depth_threshold(&self) -> u32 {
        self.depth_threshold
    }

    pub fn trusted_radius(&self) -> u32 {
        self.ball.radius().saturating_sub(self.margin)
    }

    pub fn trusted(&self) -> &VertexSet {
        &self.trusted
    }

    pub fn is_trusted_vertex(&self, v: usize) -> bool {
        self.trusted.contains(v)
    }

    /// Members of one side that lie in the trusted sub-ball.
    pub fn trusted_side(&self, wall: usize, side: Side) -> &VertexSet {
        &self.trusted_halves[wall][side.index()]
    }

    /// A wall is trusted when both sides reach the trusted sub-ball and its
    /// carrier, if any, meets it.
    pub fn is_trusted_wall(&self, i: usize) -> bool {
        let w = &self.walls[i];
        let [l, r] = &self.trusted_halves[i];
        let carrier_ok = w.carrier.is_clear() || !w.carrier.is_disjoint(&self.trusted);
        l.count_ones(..) > 0 && r.count_ones(..) > 0 && carrier_ok
    }

    /// A wallspace restricted to a subset of its walls, keeping families.
    pub fn subset(&self, keep: &[usize]) -> Result<Wallspace, WallError> {
        let walls = keep.iter().map(|&i| self.walls[i].clone()).collect();
        Wallspace::from_parts(
            self.ball_arc(),
            self.families.clone(),
            walls,
            self.margin,
            self.depth_threshold,
        )
    }

    /// Number of walls with `u` and `v` on opposite sides.
    pub fn separation_count(&self, u: usize, v: usize) -> Result<Separation, WallError> {
        for x in [u, v] {
            if x >= self.ball.len() || !self.trusted.contains(x) {
                return Err(WallError::UntrustedVertex(x));
            }
        }
        let mut count = 0;
        let mut carrier_ambiguous = Vec::new();
        for (i, w) in self.walls.iter().enumerate() {
            match (w.membership(u), w.membership(v)) {
                (Membership::Side(a), Membership::Side(b)) => {
                    if a != b {
                        count += 1;
                    }
                }
                _ => carrier_ambiguous.push(i),
            }
        }
        Ok(Separation {
            count,
            carrier_ambiguous,
        })
    }

    fn require_trusted(&self, i: usize) -> Result<(), WallError> {
        if i >= self.walls.len() || !self.is_trusted_wall(i) {
            return Err(WallError::BoundaryUncertainty { wall: i });
        }
        Ok(())
    }

    /// All four pairwise intersections of halfspaces are nonempty on the
    /// trusted sub-ball.
    pub fn crosses(&self, i: usize, j: usize) -> Result<bool, WallError> {
        Ok(self.nests(i, j)? == Nesting::None)
    }

    pub fn nests(&self, i: usize, j: usize) -> Result<Nesting, WallError> {
        self.require_trusted(i)?;
        self.require_trusted(j)?;
        for a in [Side::Left, Side::Right] {
            for b in [Side::Left, Side::Right] {
                if self.trusted_side(i, a).is_disjoint(self.trusted_side(j, b)) {
                    return Ok(Nesting::from_sides(a, b));
                }
            }
        }
        Ok(Nesting::None)
    }

    /// Side of an arbitrary group element with respect to wall `i`.
    /// Exact for edge walls; for other walls only defined inside the ball.
    pub fn membership_of(&self, i: usize, g: &GroupElement) -> Result<Option<Membership>, WallError> {
        let w = &self.walls[i];
        if let FamilySource::Edge { generator } = &self.families[w.origin.family].source {
            return Ok(Some(build::edge_membership(
                self.ball.presentation(),
                &w.origin.translate,
                generator,
                g,
            )?));
        }
        Ok(self.ball.index_of_element(g).map(|v| w.membership(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesting_swap_is_an_involution() {
        for n in [Nesting::LL, Nesting::LR, Nesting::RL, Nesting::RR, Nesting::None] {
            assert_eq!(n.swapped().swapped(), n);
        }
    }

    #[test]
    fn defaults() {
        assert_eq!(default_margin(5), 2);
        assert_eq!(default_margin(8), 2);
        assert_eq!(default_depth_threshold(5, 2), 2);
        assert_eq!(default_depth_threshold(4, 1), 2);
    }
}
