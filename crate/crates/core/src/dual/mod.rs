//! The cube complex dual to a finite wallspace.
//!
//! Zero-cubes are consistent orientations (one chosen halfspace per wall,
//! bit set = right side) reachable by single-wall flips from principal
//! orientations. An n-cube is recorded by its base corner, the corner where
//! all of its walls are oriented left, and its sorted wall list.

mod file;
mod median;

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wallspace::{Side, WallError, Wallspace};

pub use file::{DualFile, DUAL_FORMAT_VERSION};
pub use median::{check_median, check_median_graph, MedianFailure, MedianReport};

/// Bit `i` set means wall `i` is oriented toward its right side.
pub type Orientation = FixedBitSet;

pub const DEFAULT_WALL_BUDGET: usize = 64;
pub const DEFAULT_ZERO_CUBE_BUDGET: usize = 1_000_000;
pub const DEFAULT_MAX_DIM: usize = 8;
pub const ORACLE_WALL_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualError {
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error("{count} walls exceed the wall budget {budget}")]
    TooManyWalls { count: usize, budget: usize },
    #[error("zero-cube budget {budget} exceeded ({count} found, {edges} one-cubes so far)")]
    Size {
        count: usize,
        edges: usize,
        budget: usize,
    },
    #[error("inconsistent wallspace: {0}")]
    Input(String),
    #[error("zero-cubes {from} and {to} are not connected (bug: the 1-skeleton must be connected)")]
    Unreachable { from: usize, to: usize },
    #[error("the orientation oracle refuses {0} walls (limit {ORACLE_WALL_LIMIT})")]
    OracleTooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualBudget {
    pub walls: usize,
    pub zero_cubes: usize,
    pub max_dim: usize,
}

impl Default for DualBudget {
    fn default() -> Self {
        DualBudget {
            walls: DEFAULT_WALL_BUDGET,
            zero_cubes: DEFAULT_ZERO_CUBE_BUDGET,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// A 1-cube: `from` has the wall oriented left, `to` has it right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OneCube {
    pub from: usize,
    pub to: usize,
    pub wall: usize,
}

/// An n-cube for n ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    pub base: usize,
    pub walls: Vec<usize>,
}

/// A ball vertex whose principal orientation needed a carrier rule, or
/// could not be used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrierAdvisory {
    pub vertex: usize,
    pub walls: Vec<usize>,
    pub consistent: bool,
}

/// Pairwise disjointness of trusted halfspaces, as masks over the `2k`
/// halfspace slots (`2·wall + side`).
pub(crate) struct Conflicts {
    k: usize,
    masks: Vec<FixedBitSet>,
}

impl Conflicts {
    pub(crate) fn new(ws: &Wallspace) -> Self {
        let k = ws.len();
        let mut masks = vec![FixedBitSet::with_capacity(2 * k); 2 * k];
        for i in 0..k {
            for j in i + 1..k {
                for a in [Side::Left, Side::Right] {
                    for b in [Side::Left, Side::Right] {
                        if ws.trusted_side(i, a).is_disjoint(ws.trusted_side(j, b)) {
                            masks[2 * i + a.index()].insert(2 * j + b.index());
                            masks[2 * j + b.index()].insert(2 * i + a.index());
                        }
                    }
                }
            }
        }
        Conflicts { k, masks }
    }

    fn chosen(&self, o: &Orientation) -> FixedBitSet {
        let mut h = FixedBitSet::with_capacity(2 * self.k);
        for i in 0..self.k {
            h.insert(2 * i + o.contains(i) as usize);
        }
        h
    }

    pub(crate) fn consistent(&self, o: &Orientation) -> bool {
        let h = self.chosen(o);
        (0..self.k).all(|i| self.masks[2 * i + o.contains(i) as usize].is_disjoint(&h))
    }

    /// Whether flipping wall `i` of a consistent orientation stays consistent.
    fn flip_ok(&self, o: &Orientation, i: usize) -> bool {
        let mut h = self.chosen(o);
        let new = 2 * i + (!o.contains(i)) as usize;
        h.set(2 * i + o.contains(i) as usize, false);
        h.insert(new);
        self.masks[new].is_disjoint(&h)
    }
}

/// Pairwise test of an orientation against the wallspace.
pub fn is_consistent(ws: &Wallspace, o: &Orientation) -> bool {
    let side = |i: usize| if o.contains(i) { Side::Right } else { Side::Left };
    (0..ws.len()).all(|i| {
        (i + 1..ws.len()).all(|j| !ws.trusted_side(i, side(i)).is_disjoint(ws.trusted_side(j, side(j))))
    })
}

/// Orientation of every wall toward `v`. Walls whose carrier holds `v`
/// point toward the side with the nearer deep vertex, ties going left;
/// those walls are returned alongside.
pub fn principal_orientation(ws: &Wallspace, v: usize) -> (Orientation, Vec<usize>) {
    let mut o = Orientation::with_capacity(ws.len());
    let mut resolved = Vec::new();
    let mut dist: Option<Vec<u32>> = None;
    for (i, w) in ws.walls().iter().enumerate() {
        if w.right.contains(v) {
            o.insert(i);
        } else if !w.left.contains(v) {
            let d = dist.get_or_insert_with(|| ball_distances(ws, v));
            let nearest = |side: &FixedBitSet| {
                side.ones()
                    .filter(|&x| w.deep_vertices.contains(x))
                    .map(|x| d[x])
                    .min()
                    .unwrap_or(u32::MAX)
            };
            if nearest(&w.right) < nearest(&w.left) {
                o.insert(i);
            }
            resolved.push(i);
        }
    }
    (o, resolved)
}

fn ball_distances(ws: &Wallspace, v: usize) -> Vec<u32> {
    let ball = ws.ball();
    let mut d = vec![u32::MAX; ball.len()];
    d[v] = 0;
    let mut q = VecDeque::from([v]);
    while let Some(x) = q.pop_front() {
        for y in ball.neighbors(x) {
            if d[y] == u32::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d
}

/// Flips wall `i`.
pub fn flip(o: &Orientation, i: usize) -> Orientation {
    let mut t = o.clone();
    t.toggle(i);
    t
}

fn check_input(ws: &Wallspace) -> Result<(), DualError> {
    for i in 0..ws.len() {
        for s in [Side::Left, Side::Right] {
            if ws.trusted_side(i, s).is_clear() {
                return Err(DualError::Input(format!(
                    "wall {i} has an empty {s:?} side on the trusted ball"
                )));
            }
        }
    }
    Ok(())
}

/// Principal orientations of trusted vertices, in vertex order, with the
/// carrier advisories.
fn principal_seeds(
    ws: &Wallspace,
    conflicts: &Conflicts,
) -> (Vec<(usize, Orientation)>, Vec<CarrierAdvisory>) {
    let mut seeds = Vec::new();
    let mut advisories = Vec::new();
    for v in ws.trusted().ones() {
        let (o, resolved) = principal_orientation(ws, v);
        let consistent = resolved.is_empty() || conflicts.consistent(&o);
        if !resolved.is_empty() {
            advisories.push(CarrierAdvisory {
                vertex: v,
                walls: resolved,
                consistent,
            });
        }
        if consistent {
            seeds.push((v, o));
        }
    }
    (seeds, advisories)
}

#[derive(Clone, Debug)]
pub struct DualComplex {
    ball_id: String,
    wall_count: usize,
    zero_cubes: Vec<Orientation>,
    index: HashMap<Orientation, usize>,
    one_cubes: Vec<OneCube>,
    /// `cubes[n - 2]` holds the n-cubes.
    cubes: Vec<Vec<Cube>>,
    principal_map: Vec<Option<usize>>,
    advisories: Vec<CarrierAdvisory>,
}

impl PartialEq for DualComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ball_id == other.ball_id
            && self.wall_count == other.wall_count
            && self.zero_cubes == other.zero_cubes
            && self.one_cubes == other.one_cubes
            && self.cubes == other.cubes
            && self.principal_map == other.principal_map
            && self.advisories == other.advisories
    }
}

impl DualComplex {
    pub fn build(ws: &Wallspace) -> Result<Self, DualError> {
        Self::build_with_budget(ws, DualBudget::default())
    }

    pub fn build_with_budget(ws: &Wallspace, budget: DualBudget) -> Result<Self, DualError> {
        let k = ws.len();
        if k > budget.walls {
            return Err(DualError::TooManyWalls {
                count: k,
                budget: budget.walls,
            });
        }
        check_input(ws)?;
        let conflicts = Conflicts::new(ws);
        let (seeds, advisories) = principal_seeds(ws, &conflicts);

        let mut zero_cubes: Vec<Orientation> = Vec::new();
        let mut index: HashMap<Orientation, usize> = HashMap::new();
        let mut one_cubes = Vec::new();
        let mut principal_map = vec![None; ws.ball().len()];
        let mut queue = VecDeque::new();
        let push = |o: Orientation,
                        zero_cubes: &mut Vec<Orientation>,
                        index: &mut HashMap<Orientation, usize>,
                        queue: &mut VecDeque<usize>,
                        edges: usize|
         -> Result<usize, DualError> {
            if let Some(&i) = index.get(&o) {
                return Ok(i);
            }
            if zero_cubes.len() >= budget.zero_cubes {
                return Err(DualError::Size {
                    count: zero_cubes.len(),
                    edges,
                    budget: budget.zero_cubes,
                });
            }
            let i = zero_cubes.len();
            index.insert(o.clone(), i);
            zero_cubes.push(o);
            queue.push_back(i);
            Ok(i)
        };

        // BFS from the identity's principal orientation; the remaining
        // principal orientations seed it in vertex order only if missed.
        let mut seed_iter = seeds.into_iter();
        loop {
            if queue.is_empty() {
                match seed_iter.next() {
                    Some((v, o)) => {
                        let i = push(o, &mut zero_cubes, &mut index, &mut queue, one_cubes.len())?;
                        principal_map[v] = Some(i);
                        continue;
                    }
                    None => break,
                }
            }
            let s = queue.pop_front().unwrap();
            let o = zero_cubes[s].clone();
            for w in 0..k {
                if !conflicts.flip_ok(&o, w) {
                    continue;
                }
                let t = flip(&o, w);
                let ti = push(t, &mut zero_cubes, &mut index, &mut queue, one_cubes.len())?;
                // each edge is recorded from its lower-indexed endpoint
                if ti > s {
                    let (from, to) = if o.contains(w) { (ti, s) } else { (s, ti) };
                    one_cubes.push(OneCube { from, to, wall: w });
                }
            }
        }
        for (v, slot) in principal_map.iter_mut().enumerate() {
            if slot.is_none() && ws.is_trusted_vertex(v) {
                let (o, _) = principal_orientation(ws, v);
                *slot = index.get(&o).copied();
            }
        }

        let cubes = fill_cubes(ws, &zero_cubes, &index, budget.max_dim)?;
        Ok(DualComplex {
            ball_id: ws.ball_id().to_string(),
            wall_count: k,
            zero_cubes,
            index,
            one_cubes,
            cubes,
            principal_map,
            advisories,
        })
    }

    pub fn ball_id(&self) -> &str {
        &self.ball_id
    }

    pub fn wall_count(&self) -> usize {
        self.wall_count
    }

    pub fn zero_cubes(&self) -> &[Orientation] {
        &self.zero_cubes
    }

    pub fn one_cubes(&self) -> &[OneCube] {
        &self.one_cubes
    }

    /// n-cubes for `n ≥ 2`; empty beyond the top dimension.
    pub fn cubes(&self, n: usize) -> &[Cube] {
        if n < 2 {
            return &[];
        }
        self.cubes.get(n - 2).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dimension(&self) -> usize {
        if !self.cubes.is_empty() {
            self.cubes.len() + 1
        } else if !self.one_cubes.is_empty() {
            1
        } else {
            0
        }
    }

    /// Number of cubes per dimension, starting at 0.
    pub fn census(&self) -> Vec<usize> {
        let mut c = vec![self.zero_cubes.len()];
        if !self.one_cubes.is_empty() || !self.cubes.is_empty() {
            c.push(self.one_cubes.len());
        }
        c.extend(self.cubes.iter().map(Vec::len));
        c
    }

    pub fn principal_map(&self) -> &[Option<usize>] {
        &self.principal_map
    }

    pub fn principal(&self, v: usize) -> Option<usize> {
        self.principal_map.get(v).copied().flatten()
    }

    pub fn advisories(&self) -> &[CarrierAdvisory] {
        &self.advisories
    }

    pub fn index_of(&self, o: &Orientation) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.zero_cubes.len()];
        for e in &self.one_cubes {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// The `2ⁿ` corners of a cube, indexed by the bitmask of flipped walls.
    pub fn corners(&self, c: &Cube) -> Vec<usize> {
        let base = &self.zero_cubes[c.base];
        (0..1usize << c.walls.len())
            .map(|mask| {
                let mut o = base.clone();
                for (b, &w) in c.walls.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        o.toggle(w);
                    }
                }
                self.index[&o]
            })
            .collect()
    }

    /// Breadth-first distance in the 1-skeleton.
    pub fn distance(&self, i: usize, j: usize) -> Result<usize, DualError> {
        let n = self.zero_cubes.len();
        if i >= n || j >= n {
            return Err(DualError::Input(format!("zero-cube index out of range ({i}, {j})")));
        }
        let adj = self.adjacency();
        let mut d = vec![usize::MAX; n];
        d[i] = 0;
        let mut q = VecDeque::from([i]);
        while let Some(x) = q.pop_front() {
            if x == j {
                return Ok(d[x]);
            }
            for &y in &adj[x] {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    q.push_back(y);
                }
            }
        }
        Err(DualError::Unreachable { from: i, to: j })
    }

    /// Number of walls on which two zero-cubes differ.
    pub fn hamming(&self, i: usize, j: usize) -> usize {
        self.zero_cubes[i]
            .symmetric_difference(&self.zero_cubes[j])
            .count()
    }

    /// Graphviz rendering of the 1-skeleton; edge colour encodes the wall.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 12] = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
            "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
        ];
        let mut s = String::from("graph dual {\n  node [shape=circle, fontsize=8];\n");
        for (v, slot) in self.principal_map.iter().enumerate() {
            if let Some(i) = slot {
                s.push_str(&format!("  {i} [xlabel=\"v{v}\"];\n"));
            }
        }
        for e in &self.one_cubes {
            s.push_str(&format!(
                "  {} -- {} [color=\"{}\", label=\"{}\"];\n",
                e.from,
                e.to,
                PALETTE[e.wall % PALETTE.len()],
                e.wall
            ));
        }
        s.push_str("}\n");
        s
    }

    /// Cubes grouped by the multiset of families of their walls. Translates
    /// of a cube share the key, so the number of keys in a dimension bounds
    /// the number of orbits from below.
    pub fn orbit_statistics(&self, ws: &Wallspace) -> Vec<OrbitClass> {
        let mut counts: HashMap<(usize, Vec<String>), usize> = HashMap::new();
        let fam = |w: usize| ws.families()[ws.wall(w).origin.family].label.clone();
        for e in &self.one_cubes {
            *counts.entry((1, vec![fam(e.wall)])).or_default() += 1;
        }
        for (d, cs) in self.cubes.iter().enumerate() {
            for c in cs {
                let mut key: Vec<String> = c.walls.iter().map(|&w| fam(w)).collect();
                key.sort();
                *counts.entry((d + 2, key)).or_default() += 1;
            }
        }
        let mut out: Vec<OrbitClass> = counts
            .into_iter()
            .map(|((dim, families), count)| OrbitClass {
                dim,
                families,
                count,
            })
            .collect();
        out.sort_by(|a, b| (a.dim, &a.families).cmp(&(b.dim, &b.families)));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub dim: usize,
    pub families: Vec<String>,
    pub count: usize,
}

/// Adds an n-cube for every set of pairwise crossing walls that can be
/// flipped together at a common corner, checked corner by corner.
fn fill_cubes(
    ws: &Wallspace,
    zero_cubes: &[Orientation],
    index: &HashMap<Orientation, usize>,
    max_dim: usize,
) -> Result<Vec<Vec<Cube>>, DualError> {
    let k = ws.len();
    // crossing on the trusted ball: no pair of halfspaces is disjoint
    let conflicts = Conflicts::new(ws);
    let cross: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    i != j
                        && (0..2).all(|a| {
                            (0..2).all(|b| !conflicts.masks[2 * i + a].contains(2 * j + b))
                        })
                })
                .collect()
        })
        .collect();
    let mut by_dim: Vec<Vec<Cube>> = Vec::new();
    for (base, o) in zero_cubes.iter().enumerate() {
        let up: Vec<usize> = (0..k)
            .filter(|&w| !o.contains(w) && index.contains_key(&flip(o, w)))
            .collect();
        // current layer: (walls, corner orientations indexed by mask)
        let mut layer: Vec<(Vec<usize>, Vec<Orientation>)> = up
            .iter()
            .map(|&w| (vec![w], vec![o.clone(), flip(o, w)]))
            .collect();
        let mut dim = 1;
        while dim < max_dim && !layer.is_empty() {
            let mut next = Vec::new();
            for (walls, corners) in &layer {
                let last = *walls.last().unwrap();
                for &w in up.iter().filter(|&&w| w > last) {
                    if !walls.iter().all(|&x| cross[x][w]) {
                        continue;
                    }
                    let flipped: Vec<Orientation> = corners.iter().map(|c| flip(c, w)).collect();
                    if flipped.iter().all(|c| index.contains_key(c)) {
                        let mut ws2 = walls.clone();
                        ws2.push(w);
                        let mut cs = corners.clone();
                        cs.extend(flipped);
                        next.push((ws2, cs));
                    }
                }
            }
            dim += 1;
            if next.is_empty() {
                break;
            }
            if by_dim.len() < dim - 1 {
                by_dim.resize_with(dim - 1, Vec::new);
            }
            by_dim[dim - 2].extend(next.iter().map(|(walls, _)| Cube {
                base,
                walls: walls.clone(),
            }));
            layer = next;
        }
    }
    Ok(by_dim)
}

/// Every consistent orientation, by exhaustive enumeration, restricted to
/// those flip-connected to a principal orientation. Independent of
/// [`DualComplex::build`]; meant as its test oracle.
pub fn enumerate_orientations_oracle(ws: &Wallspace) -> Result<Vec<Orientation>, DualError> {
    let k = ws.len();
    if k > ORACLE_WALL_LIMIT {
        return Err(DualError::OracleTooLarge(k));
    }
    check_input(ws)?;
    let to_orientation = |mask: u32| {
        let mut o = Orientation::with_capacity(k);
        for i in 0..k {
            if mask >> i & 1 == 1 {
                o.insert(i);
            }
        }
        o
    };
    let consistent: Vec<bool> = (0..1u32 << k)
        .map(|m| is_consistent(ws, &to_orientation(m)))
        .collect();
    let mut reached = vec![false; 1 << k];
    let mut stack = Vec::new();
    for v in ws.trusted().ones() {
        let (o, _) = principal_orientation(ws, v);
        let m = o.ones().fold(0u32, |acc, i| acc | 1 << i);
        if consistent[m as usize] && !reached[m as usize] {
            reached[m as usize] = true;
            stack.push(m);
        }
    }
    while let Some(m) = stack.pop() {
        for i in 0..k {
            let t = m ^ (1 << i);
            if consistent[t as usize] && !reached[t as usize] {
                reached[t as usize] = true;
                stack.push(t);
            }
        }
    }
    let mut out: Vec<Orientation> = (0..1u32 << k)
        .filter(|&m| reached[m as usize])
        .map(to_orientation)
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{Builtin, CayleyBall, GroupPresentation};
    use crate::wallspace::{WallFamily, WallspaceBuilder};

    fn ball(b: Builtin, r: u32) -> Arc<CayleyBall> {
        let p = Arc::new(GroupPresentation::builtin(b).unwrap());
        Arc::new(CayleyBall::build(p, r).unwrap())
    }

    fn line(translates: &[&str], r: u32) -> Wallspace {
        let b = ball(Builtin::FreeAbelian { rank: 1 }, r);
        let a = b.presentation().element("a").unwrap();
        let mut builder = WallspaceBuilder::new(b).margin(0);
        let f = builder.family(WallFamily::edge("cut", a));
        builder.translate_words(f, translates).unwrap();
        builder.build().unwrap()
    }

    #[test]
    fn single_wall() {
        let ws = line(&[""], 2);
        let dc = DualComplex::build(&ws).unwrap();
        assert_eq!(dc.census(), vec![2, 1]);
        assert_eq!(dc.distance(0, 1).unwrap(), 1);
    }

    #[test]
    fn two_nested_walls_have_three_orientations() {
        let ws = line(&["", "a"], 3);
        let oracle = enumerate_orientations_oracle(&ws).unwrap();
        assert_eq!(oracle.len(), 3);
        let dc = DualComplex::build(&ws).unwrap();
        let mut built = dc.zero_cubes().to_vec();
        built.sort();
        assert_eq!(built, oracle);
        assert!(dc.cubes(2).is_empty());
    }

    #[test]
    fn principal_orientation_on_the_line() {
        let ws = line(&["AA", "A", "", "a", "aa"], 5);
        let v = ws.ball().index_of(&ws.ball().presentation().parse_word("aa").unwrap()).unwrap();
        let (o, resolved) = principal_orientation(&ws, v);
        assert!(resolved.is_empty());
        // right of the cut means "at or below the cut"
        assert_eq!(o.ones().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn flip_is_an_involution() {
        let o = Orientation::with_capacity(5);
        assert_eq!(flip(&flip(&o, 3), 3), o);
    }
}
