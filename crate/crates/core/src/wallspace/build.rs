use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    default_depth_threshold, default_margin, trusted_set, FamilySource, Membership, Side,
    VertexSet, Wall, WallError, WallFamily, WallOrigin, Wallspace,
};
use crate::group::{CayleyBall, GroupElement, GroupError, GroupPresentation, Word};

/// Scale parameters for wall construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallParams {
    pub margin: u32,
    pub depth_threshold: u32,
    /// Largest neighbourhood radius tried when a subgroup family asks for
    /// automatic radius selection.
    pub radius_cap: u32,
    /// Cap on coset points enumerated per subgroup wall.
    pub coset_budget: usize,
}

impl WallParams {
    pub fn for_radius(radius: u32) -> Self {
        let margin = default_margin(radius);
        WallParams {
            margin,
            depth_threshold: default_depth_threshold(radius, margin),
            radius_cap: 3,
            coset_budget: 200_000,
        }
    }

    pub fn with_margin(mut self, radius: u32, margin: u32) -> Self {
        self.margin = margin;
        self.depth_threshold = default_depth_threshold(radius, margin);
        self
    }
}

/// One complementary component of a deleted neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub size: usize,
    pub max_depth: u32,
    pub deep: bool,
    /// Shortlex-least vertex of the component.
    pub least_vertex: String,
}

/// Multi-source BFS distances from `sources`, walking only through
/// vertices in `allowed`. Unreached vertices get `u32::MAX`.
fn distances_from(ball: &CayleyBall, sources: &VertexSet, allowed: &VertexSet) -> Vec<u32> {
    let mut dist = vec![u32::MAX; ball.len()];
    let mut queue = VecDeque::new();
    for s in sources.ones() {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for w in ball.neighbors(v) {
            if dist[w] == u32::MAX && allowed.contains(w) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn full_set(n: usize) -> VertexSet {
    let mut s = VertexSet::with_capacity(n);
    s.insert_range(..);
    s
}

/// Per-side deepness: a vertex is deep when its distance to everything
/// outside its own side is at least `threshold`.
pub fn deepness(
    ball: &CayleyBall,
    left: &VertexSet,
    right: &VertexSet,
    threshold: u32,
) -> ([bool; 2], VertexSet) {
    let all = full_set(ball.len());
    let mut deep = [false; 2];
    let mut deep_vertices = VertexSet::with_capacity(ball.len());
    for (i, side) in [left, right].into_iter().enumerate() {
        let mut outside = all.clone();
        outside.difference_with(side);
        if outside.is_clear() {
            // nothing to be far from
            deep[i] = side.count_ones(..) > 0;
            deep_vertices.union_with(side);
            continue;
        }
        let d = distances_from(ball, &outside, &all);
        for v in side.ones() {
            if d[v] >= threshold {
                deep[i] = true;
                deep_vertices.insert(v);
            }
        }
    }
    (deep, deep_vertices)
}

fn check_sides(left: &VertexSet, right: &VertexSet, what: &str) -> Result<(), WallError> {
    if left.is_clear() || right.is_clear() {
        return Err(WallError::Malformed(format!("{what} has an empty side")));
    }
    Ok(())
}

/// Group-metric side of `x` for the wall dual to the edge `(g, g·s)`.
pub(crate) fn edge_membership(
    p: &GroupPresentation,
    g: &GroupElement,
    s: &GroupElement,
    x: &GroupElement,
) -> Result<Membership, GroupError> {
    let gs = p.multiply(g, s)?;
    let to_g = p.distance(x, g)?;
    let to_gs = p.distance(x, &gs)?;
    Ok(match to_gs.cmp(&to_g) {
        std::cmp::Ordering::Less => Membership::Side(Side::Left),
        std::cmp::Ordering::Greater => Membership::Side(Side::Right),
        std::cmp::Ordering::Equal => Membership::Carrier,
    })
}

/// The wall dual to the edge `(g, g·generator)`.
pub fn edge_wall(
    ball: &CayleyBall,
    family: usize,
    generator: &GroupElement,
    g: &GroupElement,
    params: &WallParams,
) -> Result<Wall, WallError> {
    let p = ball.presentation();
    let n = ball.len();
    let mut left = VertexSet::with_capacity(n);
    let mut right = VertexSet::with_capacity(n);
    let mut carrier = VertexSet::with_capacity(n);
    for v in 0..n {
        match edge_membership(p, g, generator, &ball.element(v))? {
            Membership::Side(Side::Left) => left.insert(v),
            Membership::Side(Side::Right) => right.insert(v),
            Membership::Carrier => carrier.insert(v),
        }
    }
    check_sides(&left, &right, "edge wall")?;
    let (deep, deep_vertices) = deepness(ball, &left, &right, params.depth_threshold);
    Ok(Wall {
        left,
        right,
        carrier,
        origin: WallOrigin {
            family,
            translate: g.clone(),
        },
        deep,
        deep_vertices,
    })
}

/// `{x in ball : g⁻¹x in set}`, with `None` where the preimage leaves the ball.
fn preimages(ball: &CayleyBall, g: &GroupElement) -> Result<Vec<Option<usize>>, GroupError> {
    let p = ball.presentation();
    let ginv = p.invert(g)?;
    (0..ball.len()).map(|v| ball.translate(&ginv, v)).collect()
}

/// `g·set ∩ ball`.
pub(crate) fn translated(
    ball: &CayleyBall,
    g: &GroupElement,
    set: &VertexSet,
) -> Result<VertexSet, GroupError> {
    Ok(translate_set(&preimages(ball, g)?, set))
}

fn translate_set(pre: &[Option<usize>], set: &VertexSet) -> VertexSet {
    let mut out = VertexSet::with_capacity(pre.len());
    for (v, y) in pre.iter().enumerate() {
        if matches!(y, Some(y) if set.contains(*y)) {
            out.insert(v);
        }
    }
    out
}

/// Translate of an explicit partition. Vertices whose preimage leaves the
/// ball, or lands in the base carrier, go to the carrier.
pub fn partition_wall(
    ball: &CayleyBall,
    family: usize,
    left: &VertexSet,
    carrier: &VertexSet,
    g: &GroupElement,
    params: &WallParams,
) -> Result<Wall, WallError> {
    let n = ball.len();
    let mut right = full_set(n);
    right.difference_with(left);
    right.difference_with(carrier);
    let (l, r) = if g.is_identity() {
        (left.clone(), right)
    } else {
        let pre = preimages(ball, g)?;
        (translate_set(&pre, left), translate_set(&pre, &right))
    };
    let mut c = full_set(n);
    c.difference_with(&l);
    c.difference_with(&r);
    check_sides(&l, &r, "partition wall")?;
    let (deep, deep_vertices) = deepness(ball, &l, &r, params.depth_threshold);
    Ok(Wall {
        left: l,
        right: r,
        carrier: c,
        origin: WallOrigin {
            family,
            translate: g.clone(),
        },
        deep,
        deep_vertices,
    })
}

/// Ball vertices within `radius` of the coset `g·H`.
fn coset_carrier(
    ball: &CayleyBall,
    generators: &[GroupElement],
    radius: u32,
    g: &GroupElement,
    params: &WallParams,
) -> Result<VertexSet, WallError> {
    let p = ball.presentation();
    let mut moves = Vec::new();
    for h in generators {
        moves.push(h.clone());
        moves.push(p.invert(h)?);
    }
    let slack = 2 * generators.iter().map(|h| h.length()).max().unwrap_or(0) as u32;
    let near = ball.radius() + radius;
    let bound = near + slack;
    let mut seen: HashSet<GroupElement> = HashSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    let mut close = Vec::new();
    while let Some(x) = queue.pop_front() {
        if x.length() as u32 <= near {
            close.push(x.clone());
        }
        for m in &moves {
            let y = p.multiply(&x, m)?;
            if y.length() as u32 <= bound && !seen.contains(&y) {
                if seen.len() >= params.coset_budget {
                    return Err(WallError::Scale(format!(
                        "coset enumeration exceeded {} points",
                        params.coset_budget
                    )));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    // thicken each coset point by `radius` letters
    let letters: Vec<Word> = (0..p.alphabet().len())
        .map(|l| Word(vec![l as u8]))
        .collect();
    let mut carrier = VertexSet::with_capacity(ball.len());
    let mut reached: HashSet<Word> = HashSet::new();
    let mut frontier: Vec<Word> = Vec::new();
    for x in close {
        let w = x.into_word();
        if reached.insert(w.clone()) {
            frontier.push(w);
        }
    }
    for step in 0..=radius {
        for w in &frontier {
            if let Some(v) = ball.index_of(w) {
                carrier.insert(v);
            }
        }
        if step == radius {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let y = p.normal_form(&w.concat(l))?;
                if y.len() as u32 <= near && reached.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(carrier)
}

/// Wall from the `radius`-neighbourhood of the coset `g·H`: delete it,
/// split the rest of the ball into components, and keep one deep
/// component as the left side. Without a hint the left side is the deep
/// component holding the shortlex-least deep vertex; with a hint it is the
/// deep component meeting the hint most.
pub(crate) fn subgroup_wall_hinted(
    ball: &CayleyBall,
    family: usize,
    generators: &[GroupElement],
    radius: u32,
    g: &GroupElement,
    params: &WallParams,
    hint: Option<&VertexSet>,
) -> Result<Wall, WallError> {
    let n = ball.len();
    let carrier = coset_carrier(ball, generators, radius, g, params)?;
    let trusted = trusted_set(ball, params.margin);
    if carrier.is_disjoint(&trusted) {
        return Err(WallError::Scale(format!(
            "neighbourhood of {}·H misses the trusted ball of radius {}",
            ball.presentation().format(g),
            ball.radius().saturating_sub(params.margin)
        )));
    }
    let mut rest = full_set(n);
    rest.difference_with(&carrier);
    if rest.is_clear() {
        return Err(WallError::Scale(format!(
            "neighbourhood of radius {radius} swallows the ball of radius {}",
            ball.radius()
        )));
    }
    let depth = distances_from(ball, &carrier, &rest);
    // components of the complement, in order of least vertex
    let mut comp = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for s in rest.ones() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for w in ball.neighbors(v) {
                if rest.contains(w) && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        components.push(members);
    }
    let thr = params.depth_threshold;
    let census: Vec<ComponentCensus> = components
        .iter()
        .map(|c| {
            // a component unreachable from the carrier is infinitely deep
            let max_depth = c.iter().map(|&v| depth[v]).max().unwrap_or(0);
            ComponentCensus {
                size: c.len(),
                max_depth,
                deep: max_depth >= thr,
                least_vertex: ball.format_vertex(c[0]),
            }
        })
        .collect();
    let deep: Vec<usize> = (0..components.len()).filter(|&i| census[i].deep).collect();
    if deep.len() < 2 {
        return Err(WallError::NotCodimensionOne {
            deep: deep.len(),
            census,
        });
    }
    let least_deep = |i: usize| {
        components[i]
            .iter()
            .copied()
            .filter(|&v| depth[v] >= thr)
            .min()
            .unwrap_or(usize::MAX)
    };
    let by_shortlex = *deep.iter().min_by_key(|&&i| least_deep(i)).unwrap();
    let chosen = match hint {
        Some(h) => {
            let overlap = |i: usize| components[i].iter().filter(|&&v| h.contains(v)).count();
            let best = deep
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    overlap(a)
                        .cmp(&overlap(b))
                        .then(least_deep(b).cmp(&least_deep(a)))
                })
                .unwrap();
            if overlap(best) == 0 {
                by_shortlex
            } else {
                best
            }
        }
        None => by_shortlex,
    };
    let mut left = VertexSet::with_capacity(n);
    for &v in &components[chosen] {
        left.insert(v);
    }
    let mut right = rest;
    right.difference_with(&left);
    let (deep_flags, deep_vertices) = deepness(ball, &left, &right, thr);
    Ok(Wall {
        left,
        right,
        carrier,
        origin: WallOrigin {
            family,
            translate: g.clone(),
        },
        deep: deep_flags,
        deep_vertices,
    })
}

/// Wall cut out by the `radius`-neighbourhood of `g·H` for a subgroup
/// family, with sides fixed by the shortlex rule.
pub fn wall_from_subgroup(
    ball: &CayleyBall,
    family: usize,
    generators: &[GroupElement],
    radius: u32,
    g: &GroupElement,
    params: &WallParams,
) -> Result<Wall, WallError> {
    subgroup_wall_hinted(ball, family, generators, radius, g, params, None)
}

/// Tries neighbourhood radii `0..=cap` for the identity coset and returns
/// the first that yields two deep components, with the failures seen on
/// the way.
pub fn resolve_subgroup_radius(
    ball: &CayleyBall,
    generators: &[GroupElement],
    params: &WallParams,
) -> Result<(u32, Vec<(u32, WallError)>), WallError> {
    let mut failures = Vec::new();
    for r in 0..=params.radius_cap {
        match wall_from_subgroup(ball, 0, generators, r, &GroupElement::identity(), params) {
            Ok(_) => return Ok((r, failures)),
            Err(e @ WallError::NotCodimensionOne { .. }) => failures.push((r, e)),
            Err(e) => return Err(e),
        }
    }
    Err(failures
        .pop()
        .map(|(_, e)| e)
        .unwrap_or_else(|| WallError::Scale("no radius tried".into())))
}

/// Collects families and translates, then builds and deduplicates walls.
#[derive(Clone, Debug)]
pub struct WallspaceBuilder {
    ball: Arc<CayleyBall>,
    params: WallParams,
    families: Vec<WallFamily>,
    requests: Vec<(usize, GroupElement)>,
}

impl WallspaceBuilder {
    pub fn new(ball: Arc<CayleyBall>) -> Self {
        let params = WallParams::for_radius(ball.radius());
        WallspaceBuilder {
            ball,
            params,
            families: Vec::new(),
            requests: Vec::new(),
        }
    }

    pub fn params(mut self, params: WallParams) -> Self {
        self.params = params;
        self
    }

    /// Sets the margin and resets the depth threshold to its default.
    pub fn margin(mut self, margin: u32) -> Self {
        self.params = self.params.with_margin(self.ball.radius(), margin);
        self
    }

    pub fn depth_threshold(mut self, t: u32) -> Self {
        self.params.depth_threshold = t;
        self
    }

    pub fn ball(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn family(&mut self, f: WallFamily) -> usize {
        self.families.push(f);
        self.families.len() - 1
    }

    pub fn translate(&mut self, family: usize, g: GroupElement) -> &mut Self {
        self.requests.push((family, g));
        self
    }

    pub fn translates<I: IntoIterator<Item = GroupElement>>(
        &mut self,
        family: usize,
        gs: I,
    ) -> &mut Self {
        for g in gs {
            self.requests.push((family, g));
        }
        self
    }

    /// Parses each word and adds it as a translate.
    pub fn translate_words(&mut self, family: usize, words: &[&str]) -> Result<&mut Self, WallError> {
        for w in words {
            let g = self.ball.presentation().element(w)?;
            self.requests.push((family, g));
        }
        Ok(self)
    }

    /// Every `g` in the ball with `g·s` also in the ball, for an edge family.
    pub fn all_edge_translates(&mut self, family: usize) -> Result<&mut Self, WallError> {
        let FamilySource::Edge { generator } = &self.families[family].source else {
            return Err(WallError::Malformed(format!(
                "family {family} is not an edge family"
            )));
        };
        let generator = generator.clone();
        let p = self.ball.presentation();
        let mut gs = Vec::new();
        for v in 0..self.ball.len() {
            let g = self.ball.element(v);
            if self.ball.index_of_element(&p.multiply(&g, &generator)?).is_some() {
                gs.push(g);
            }
        }
        self.requests.extend(gs.into_iter().map(|g| (family, g)));
        Ok(self)
    }

    /// Drops the most recent translate request.
    pub fn pop_request(&mut self) {
        self.requests.pop();
    }

    pub fn build(&self) -> Result<Wallspace, WallError> {
        let ball = &*self.ball;
        let mut base_left: Vec<Option<VertexSet>> = vec![None; self.families.len()];
        let mut walls: Vec<Wall> = Vec::new();
        for (fi, g) in &self.requests {
            let fam = self.families.get(*fi).ok_or_else(|| {
                WallError::Malformed(format!("translate refers to missing family {fi}"))
            })?;
            let wall = match &fam.source {
                FamilySource::Edge { generator } => edge_wall(ball, *fi, generator, g, &self.params)?,
                FamilySource::Partition { left, carrier } => {
                    partition_wall(ball, *fi, left, carrier, g, &self.params)?
                }
                FamilySource::Subgroup { generators, radius } => {
                    if base_left[*fi].is_none() {
                        let base = wall_from_subgroup(
                            ball,
                            *fi,
                            generators,
                            *radius,
                            &GroupElement::identity(),
                            &self.params,
                        )?;
                        base_left[*fi] = Some(base.left);
                    }
                    let hint = if g.is_identity() {
                        None
                    } else {
                        Some(translated(ball, g, base_left[*fi].as_ref().unwrap())?)
                    };
                    subgroup_wall_hinted(
                        ball,
                        *fi,
                        generators,
                        *radius,
                        g,
                        &self.params,
                        hint.as_ref(),
                    )?
                }
            };
            if !walls.iter().any(|w| w.same_partition(&wall)) {
                walls.push(wall);
            }
        }
        Wallspace::from_parts(
            Arc::clone(&self.ball),
            self.families.clone(),
            walls,
            self.params.margin,
            self.params.depth_threshold,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Builtin, GroupPresentation};

    fn ball(b: Builtin, r: u32) -> Arc<CayleyBall> {
        let p = Arc::new(GroupPresentation::builtin(b).unwrap());
        Arc::new(CayleyBall::build(p, r).unwrap())
    }

    fn names(ball: &CayleyBall, s: &VertexSet) -> Vec<String> {
        s.ones().map(|v| ball.format_vertex(v)).collect()
    }

    #[test]
    fn point_cut_of_the_line() {
        let b = ball(Builtin::FreeAbelian { rank: 1 }, 5);
        let params = WallParams::for_radius(5);
        let w = wall_from_subgroup(&b, 0, &[], 0, &GroupElement::identity(), &params).unwrap();
        assert_eq!(names(&b, &w.carrier), vec![""]);
        assert_eq!(names(&b, &w.left), vec!["a", "aa", "aaa", "aaaa", "aaaaa"]);
        assert_eq!(w.right.count_ones(..), 5);
        assert_eq!(w.deep, [true, true]);
    }

    #[test]
    fn axis_in_free_group_has_many_deep_components() {
        let b = ball(Builtin::FreeGroup { rank: 2 }, 4);
        let p = b.presentation();
        let params = WallParams::for_radius(4);
        let h = vec![p.element("a").unwrap()];
        let w = wall_from_subgroup(&b, 0, &h, 0, &GroupElement::identity(), &params).unwrap();
        assert_eq!(w.carrier.count_ones(..), 9);
        assert_eq!(names(&b, &w.left)[0], "b");
    }

    #[test]
    fn line_in_the_plane() {
        let b = ball(Builtin::FreeAbelian { rank: 2 }, 4);
        let p = b.presentation();
        let params = WallParams::for_radius(4);
        let h = vec![p.element("a").unwrap()];
        let w = wall_from_subgroup(&b, 0, &h, 0, &GroupElement::identity(), &params).unwrap();
        assert_eq!(w.carrier.count_ones(..), 9);
        assert_eq!(w.left.count_ones(..), 16);
        assert_eq!(w.right.count_ones(..), 16);
    }

    #[test]
    fn trivial_subgroup_in_free_group_is_not_a_wall_in_the_plane() {
        let b = ball(Builtin::FreeAbelian { rank: 2 }, 4);
        let params = WallParams::for_radius(4);
        let e = wall_from_subgroup(&b, 0, &[], 0, &GroupElement::identity(), &params);
        assert!(matches!(e, Err(WallError::NotCodimensionOne { deep: 1, .. })));
    }

    #[test]
    fn swallowing_neighbourhood_is_a_scale_error() {
        let b = ball(Builtin::FreeAbelian { rank: 1 }, 2);
        let params = WallParams::for_radius(2);
        let e = wall_from_subgroup(&b, 0, &[], 3, &GroupElement::identity(), &params);
        assert!(matches!(e, Err(WallError::Scale(_))));
    }

    #[test]
    fn translated_subgroup_walls_keep_their_side() {
        let b = ball(Builtin::FreeAbelian { rank: 2 }, 5);
        let p = b.presentation().clone();
        let mut builder = WallspaceBuilder::new(Arc::clone(&b)).margin(1);
        let f = builder.family(WallFamily::subgroup("rows", vec![p.element("a").unwrap()], 0));
        builder.translate_words(f, &["", "b", "B"]).unwrap();
        let ws = builder.build().unwrap();
        assert_eq!(ws.len(), 3);
        let bb = b.index_of(&p.parse_word("bb").unwrap()).unwrap();
        // "bb" lies on the same side of all three parallel walls
        let sides: Vec<_> = ws.walls().iter().map(|w| w.membership(bb)).collect();
        assert!(sides.iter().all(|s| *s == sides[0]));
    }

    #[test]
    fn edge_walls_in_the_plane_have_no_carrier() {
        let b = ball(Builtin::FreeAbelian { rank: 2 }, 4);
        let p = b.presentation();
        let params = WallParams::for_radius(4);
        let w = edge_wall(&b, 0, &p.element("a").unwrap(), &GroupElement::identity(), &params)
            .unwrap();
        assert!(w.carrier.is_clear());
        // left is x >= 1
        assert!(w.left.contains(b.index_of(&p.parse_word("a").unwrap()).unwrap()));
        assert!(w.right.contains(0));
    }

    #[test]
    fn duplicate_partitions_are_merged() {
        let b = ball(Builtin::FreeAbelian { rank: 1 }, 4);
        let p = b.presentation().clone();
        let mut builder = WallspaceBuilder::new(Arc::clone(&b));
        let f = builder.family(WallFamily::edge("cut", p.element("a").unwrap()));
        let g = builder.family(WallFamily::edge("cut back", p.element("A").unwrap()));
        builder.translate_words(f, &[""]).unwrap();
        builder.translate_words(g, &["a"]).unwrap();
        assert_eq!(builder.build().unwrap().len(), 1);
    }
}
