//! Hyperplanes as parallelism classes of edges, and the four pathologies
//! that obstruct specialness.
//!
//! Conventions. Two edges are parallel when they are opposite sides of a
//! square; hyperplanes are the classes of the generated equivalence. A
//! co-orientation picks a direction on every dual edge so that opposite
//! sides of each square agree; a hyperplane without one is one-sided. Two
//! dual edges sharing a vertex *osculate* when no square has them as
//! consecutive sides at that vertex. Osculation of one hyperplane with
//! itself is direct when both edges leave the vertex, or both enter it,
//! in the co-orientation; otherwise it is indirect and only reported for
//! information. Two hyperplanes inter-osculate when they both cross in
//! some square and osculate at some vertex. One-sided hyperplanes skip the
//! osculation checks.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::npc::{end_label, EdgeEnd};
use super::CubeComplex;

/// The midcube of cell `(dim, cell)` transverse to `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Midcube {
    pub dim: usize,
    pub cell: usize,
    pub axis: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub index: usize,
    /// Dual edges, increasing.
    pub edges: Vec<usize>,
    /// For each dual edge, whether it runs against the co-orientation.
    /// Meaningless when the hyperplane is one-sided.
    pub against: Vec<bool>,
    pub midcubes: Vec<Midcube>,
    /// Cells of dimension ≥ 1 crossed by the hyperplane, as `(dim, cell)`.
    pub carrier: Vec<(usize, usize)>,
    pub embedded: bool,
    pub two_sided: bool,
    pub self_osculating: bool,
    pub indirectly_osculating: bool,
    pub inter_osculating: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pathology {
    SelfIntersection {
        hyperplane: usize,
        cell: String,
        axes: [usize; 2],
    },
    OneSided {
        hyperplane: usize,
        square: String,
    },
    DirectSelfOsculation {
        hyperplane: usize,
        vertex: String,
        edges: [String; 2],
    },
    InterOsculation {
        hyperplanes: [usize; 2],
        crossing: String,
        vertex: String,
        edges: [String; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndirectOsculation {
    pub hyperplane: usize,
    pub vertex: String,
    pub edges: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneFlags {
    pub index: usize,
    pub edges: Vec<String>,
    pub embedded: bool,
    pub two_sided: bool,
    pub self_osculating: bool,
    pub inter_osculating: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathologyReport {
    pub special: bool,
    pub hyperplanes: Vec<HyperplaneFlags>,
    pub pathologies: Vec<Pathology>,
    pub indirect_osculations: Vec<IndirectOsculation>,
}

/// Union-find carrying the parity of each node relative to its root.
struct ParityForest {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityForest {
    fn new(n: usize) -> Self {
        ParityForest {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, up) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= up;
        (root, self.parity[x])
    }

    /// Records `parity(a) ^ parity(b) = rel`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        // keep the smaller index as root
        let (child, root) = if ra < rb { (rb, ra) } else { (ra, rb) };
        self.parent[child] = root;
        self.parity[child] = pa ^ pb ^ rel;
        true
    }
}

struct Classes {
    /// Hyperplane of each edge.
    of_edge: Vec<usize>,
    against: Vec<bool>,
    /// First square witnessing a contradiction, per hyperplane.
    one_sided: Vec<Option<usize>>,
    count: usize,
}

fn classes(c: &CubeComplex) -> Classes {
    let m = c.edge_count();
    let mut forest = ParityForest::new(m);
    let mut conflicts = Vec::new();
    for s in 0..c.cells(2).len() {
        for i in 0..2 {
            let j = 1 - i;
            let e0 = c.edge_use(2, s, i, 0);
            let e1 = c.edge_use(2, s, i, 1 << j);
            if !forest.union(e0.edge, e1.edge, e0.reversed ^ e1.reversed) {
                conflicts.push((e0.edge, s));
            }
        }
    }
    let mut id = vec![usize::MAX; m];
    let mut of_edge = vec![0; m];
    let mut against = vec![false; m];
    let mut count = 0;
    for e in 0..m {
        let (root, parity) = forest.find(e);
        if id[root] == usize::MAX {
            id[root] = count;
            count += 1;
        }
        of_edge[e] = id[root];
        against[e] = parity;
    }
    let mut one_sided = vec![None; count];
    for (e, s) in conflicts {
        let h = of_edge[e];
        if one_sided[h].is_none() {
            one_sided[h] = Some(s);
        }
    }
    Classes {
        of_edge,
        against,
        one_sided,
        count,
    }
}

/// Pairs of edge ends that are consecutive sides of a square at `v`.
fn square_corners(c: &CubeComplex) -> Vec<HashSet<(EdgeEnd, EdgeEnd)>> {
    let mut adj = vec![HashSet::new(); c.vertex_count()];
    for s in 0..c.cells(2).len() {
        for x in 0..4u32 {
            let v = c.corner(2, s, x);
            let ends: Vec<EdgeEnd> = (0..2)
                .map(|i| {
                    let u = c.edge_use(2, s, i, x);
                    EdgeEnd {
                        edge: u.edge,
                        end: ((x >> i & 1) as u8) ^ u.reversed as u8,
                    }
                })
                .collect();
            adj[v].insert((ends[0], ends[1]));
            adj[v].insert((ends[1], ends[0]));
        }
    }
    adj
}

enum Event {
    Direct(usize, usize, [EdgeEnd; 2]),
    Indirect(usize, usize, [EdgeEnd; 2]),
    Between(usize, usize, usize, [EdgeEnd; 2]),
}

fn osculations(c: &CubeComplex, cl: &Classes) -> Vec<Event> {
    let adj = square_corners(c);
    let mut ends = vec![Vec::new(); c.vertex_count()];
    for e in 0..c.edge_count() {
        let (a, b) = c.endpoints(e);
        ends[a].push(EdgeEnd { edge: e, end: 0 });
        ends[b].push(EdgeEnd { edge: e, end: 1 });
    }
    let two_sided = |h: usize| cl.one_sided[h].is_none();
    (0..c.vertex_count())
        .into_par_iter()
        .flat_map_iter(|v| {
            let mut out = Vec::new();
            let here = &ends[v];
            for (a, &p) in here.iter().enumerate() {
                for &q in &here[a + 1..] {
                    if p.edge == q.edge || adj[v].contains(&(p, q)) {
                        continue;
                    }
                    let (hp, hq) = (cl.of_edge[p.edge], cl.of_edge[q.edge]);
                    if !two_sided(hp) || !two_sided(hq) {
                        continue;
                    }
                    if hp == hq {
                        let leaves = |x: EdgeEnd| (x.end == 0) != cl.against[x.edge];
                        if leaves(p) == leaves(q) {
                            out.push(Event::Direct(hp, v, [p, q]));
                        } else {
                            out.push(Event::Indirect(hp, v, [p, q]));
                        }
                    } else {
                        let (lo, hi, pair) = if hp < hq { (hp, hq, [p, q]) } else { (hq, hp, [q, p]) };
                        out.push(Event::Between(lo, hi, v, pair));
                    }
                }
            }
            out
        })
        .collect()
}

/// Hyperplanes of the complex, ordered by their least dual edge.
pub fn hyperplanes(c: &CubeComplex) -> Vec<Hyperplane> {
    analyse(c).0
}

fn analyse(c: &CubeComplex) -> (Vec<Hyperplane>, Vec<Pathology>, Vec<IndirectOsculation>) {
    let cl = classes(c);
    let mut hs: Vec<Hyperplane> = (0..cl.count)
        .map(|index| Hyperplane {
            index,
            edges: Vec::new(),
            against: Vec::new(),
            midcubes: Vec::new(),
            carrier: Vec::new(),
            embedded: true,
            two_sided: cl.one_sided[index].is_none(),
            self_osculating: false,
            indirectly_osculating: false,
            inter_osculating: Vec::new(),
        })
        .collect();
    for e in 0..c.edge_count() {
        let h = &mut hs[cl.of_edge[e]];
        h.edges.push(e);
        h.against.push(cl.against[e]);
    }
    let mut pathologies = Vec::new();
    let mut self_cross: Vec<Option<Pathology>> = vec![None; cl.count];
    // crossing pairs with a witnessing square
    let mut crossings: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for d in 1..=c.dimension() {
        for ci in 0..c.cells(d).len() {
            let axis_class: Vec<usize> =
                (0..d).map(|i| cl.of_edge[c.edge_use(d, ci, i, 0).edge]).collect();
            for (i, &h) in axis_class.iter().enumerate() {
                hs[h].midcubes.push(Midcube { dim: d, cell: ci, axis: i });
                if hs[h].carrier.last() != Some(&(d, ci)) {
                    hs[h].carrier.push((d, ci));
                }
                for (j, &k) in axis_class.iter().enumerate().skip(i + 1) {
                    if h == k {
                        hs[h].embedded = false;
                        self_cross[h].get_or_insert(Pathology::SelfIntersection {
                            hyperplane: h,
                            cell: c.name(d, ci).to_string(),
                            axes: [i, j],
                        });
                    } else if d == 2 {
                        crossings.entry((h.min(k), h.max(k))).or_insert(ci);
                    }
                }
            }
        }
    }
    let mut direct: Vec<Option<Pathology>> = vec![None; cl.count];
    let mut indirect: Vec<Option<IndirectOsculation>> = vec![None; cl.count];
    let mut between: BTreeMap<(usize, usize), (usize, [EdgeEnd; 2])> = BTreeMap::new();
    for ev in osculations(c, &cl) {
        match ev {
            Event::Direct(h, v, [p, q]) => {
                hs[h].self_osculating = true;
                direct[h].get_or_insert(Pathology::DirectSelfOsculation {
                    hyperplane: h,
                    vertex: c.name(0, v).to_string(),
                    edges: [end_label(c, p), end_label(c, q)],
                });
            }
            Event::Indirect(h, v, [p, q]) => {
                hs[h].indirectly_osculating = true;
                indirect[h].get_or_insert(IndirectOsculation {
                    hyperplane: h,
                    vertex: c.name(0, v).to_string(),
                    edges: [end_label(c, p), end_label(c, q)],
                });
            }
            Event::Between(a, b, v, pair) => {
                between.entry((a, b)).or_insert((v, pair));
            }
        }
    }
    let mut inter = Vec::new();
    for (&(a, b), &(v, [p, q])) in &between {
        if let Some(&s) = crossings.get(&(a, b)) {
            hs[a].inter_osculating.push(b);
            hs[b].inter_osculating.push(a);
            inter.push(Pathology::InterOsculation {
                hyperplanes: [a, b],
                crossing: c.name(2, s).to_string(),
                vertex: c.name(0, v).to_string(),
                edges: [end_label(c, p), end_label(c, q)],
            });
        }
    }
    for h in 0..cl.count {
        hs[h].inter_osculating.sort_unstable();
        if let Some(p) = self_cross[h].take() {
            pathologies.push(p);
        }
        if let Some(s) = cl.one_sided[h] {
            pathologies.push(Pathology::OneSided {
                hyperplane: h,
                square: c.name(2, s).to_string(),
            });
        }
        if let Some(p) = direct[h].take() {
            pathologies.push(p);
        }
    }
    pathologies.extend(inter);
    (hs, pathologies, indirect.into_iter().flatten().collect())
}

/// Aggregates hyperplane flags. The complex is special when every
/// hyperplane is embedded, two-sided, not directly self-osculating, and
/// no two hyperplanes inter-osculate.
pub fn check_special(c: &CubeComplex) -> PathologyReport {
    let (hs, pathologies, indirect_osculations) = analyse(c);
    let special = hs.iter().all(|h| {
        h.embedded && h.two_sided && !h.self_osculating && h.inter_osculating.is_empty()
    });
    debug_assert_eq!(special, pathologies.is_empty());
    PathologyReport {
        special,
        hyperplanes: hs
            .iter()
            .map(|h| HyperplaneFlags {
                index: h.index,
                edges: h.edges.iter().map(|&e| c.name(1, e).to_string()).collect(),
                embedded: h.embedded,
                two_sided: h.two_sided,
                self_osculating: h.self_osculating,
                inter_osculating: h.inter_osculating.clone(),
            })
            .collect(),
        pathologies,
        indirect_osculations,
    }
}

#[cfg(test)]
mod tests {
    use super::super::CubeComplex;
    use super::*;
    use crate::fixtures::complex;

    #[test]
    fn torus_is_special() {
        let c = complex("torus").unwrap();
        let hs = hyperplanes(&c);
        assert_eq!(hs.len(), 2);
        assert!(hs.iter().all(|h| h.embedded && h.two_sided && !h.self_osculating));
        assert!(check_special(&c).special);
    }

    #[test]
    fn folded_square_self_intersects() {
        let r = check_special(&complex("folded-square").unwrap());
        assert!(!r.special);
        assert_eq!(r.hyperplanes.len(), 1);
        assert_eq!(
            r.pathologies,
            vec![Pathology::SelfIntersection {
                hyperplane: 0,
                cell: "S".into(),
                axes: [0, 1],
            }]
        );
    }

    #[test]
    fn wedge_has_two_point_hyperplanes() {
        let c = complex("wedge").unwrap();
        let hs = hyperplanes(&c);
        assert_eq!(hs.len(), 2);
        assert!(hs.iter().all(|h| h.midcubes.len() == 1));
        let r = check_special(&c);
        assert!(r.special);
        // each loop meets the vertex at both ends
        assert!(r.indirect_osculations.is_empty());
    }

    #[test]
    fn mobius_strip_is_one_sided() {
        let r = check_special(&complex("mobius").unwrap());
        assert!(!r.special);
        assert!(r
            .pathologies
            .iter()
            .any(|p| matches!(p, Pathology::OneSided { square, .. } if square == "M")));
    }

    #[test]
    fn cube_hyperplanes() {
        let c = complex("solid-cube").unwrap();
        let hs = hyperplanes(&c);
        assert_eq!(hs.len(), 3);
        assert!(hs.iter().all(|h| h.edges.len() == 4));
        assert!(check_special(&c).special);
    }

    #[test]
    fn pinched_square_osculates() {
        // a square whose two left corners are identified
        let text = r#"
vertices = ["p", "q", "r"]
[[edge]]
name = "a"
from = "p"
to = "q"
[[edge]]
name = "b"
from = "p"
to = "r"
[[edge]]
name = "c"
from = "p"
to = "p"
[[edge]]
name = "d"
from = "q"
to = "r"
[[cube]]
name = "S"
faces = ["c", "d", "a", "b"]
"#;
        let r = check_special(&CubeComplex::from_toml(text).unwrap());
        assert!(!r.special);
        assert!(r.pathologies.contains(&Pathology::DirectSelfOsculation {
            hyperplane: 0,
            vertex: "p".into(),
            edges: ["a@from".into(), "b@from".into()],
        }));
        assert!(r
            .pathologies
            .iter()
            .any(|p| matches!(p, Pathology::InterOsculation { hyperplanes: [0, 1], .. })));
    }
}
