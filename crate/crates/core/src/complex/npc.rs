//! Vertex links and the link condition.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CubeComplex;

/// One end of an edge: `end` 0 is `from`, 1 is `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: u8,
}

/// Simplicial structure at a vertex: one simplex per corner of a cell of
/// dimension at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub vertex: usize,
    pub vertices: Vec<EdgeEnd>,
    /// Indices into `vertices`, in corner order (not deduplicated).
    pub simplices: Vec<Vec<usize>>,
    /// `(dimension, cell, corner)` that produced each simplex.
    pub sources: Vec<(usize, usize, u32)>,
}

impl VertexLink {
    /// Pairs joined by an edge of the link.
    pub fn adjacency(&self) -> Vec<HashSet<usize>> {
        let mut adj = vec![HashSet::new(); self.vertices.len()];
        for s in &self.simplices {
            for (a, &x) in s.iter().enumerate() {
                for &y in &s[a + 1..] {
                    if x != y {
                        adj[x].insert(y);
                        adj[y].insert(x);
                    }
                }
            }
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkViolation {
    /// A corner whose edges meet the vertex in a repeated edge end.
    Degenerate { vertex: String, cell: String, corner: u32 },
    /// Two corners giving the same simplex.
    Duplicate { vertex: String, cells: [String; 2] },
    /// A clique of the link not spanning a simplex, minimal by size.
    EmptySimplex { vertex: String, clique: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpcReport {
    pub vertices: usize,
    pub npc: bool,
    pub violations: Vec<LinkViolation>,
}

pub(crate) fn end_label(c: &CubeComplex, e: EdgeEnd) -> String {
    format!("{}@{}", c.name(1, e.edge), if e.end == 0 { "from" } else { "to" })
}

fn corners_by_vertex(c: &CubeComplex) -> Vec<Vec<(usize, usize, u32)>> {
    let mut by = vec![Vec::new(); c.vertex_count()];
    for d in 2..=c.dimension() {
        for ci in 0..c.cells(d).len() {
            for x in 0..1u32 << d {
                by[c.corner(d, ci, x)].push((d, ci, x));
            }
        }
    }
    by
}

fn build_link(c: &CubeComplex, v: usize, corners: &[(usize, usize, u32)]) -> VertexLink {
    let mut vertices = Vec::new();
    for e in 0..c.edge_count() {
        let (a, b) = c.endpoints(e);
        if a == v {
            vertices.push(EdgeEnd { edge: e, end: 0 });
        }
        if b == v {
            vertices.push(EdgeEnd { edge: e, end: 1 });
        }
    }
    let pos: HashMap<EdgeEnd, usize> = vertices.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut simplices = Vec::with_capacity(corners.len());
    for &(d, ci, x) in corners {
        let s: Vec<usize> = (0..d)
            .map(|i| {
                let u = c.edge_use(d, ci, i, x);
                let end = ((x >> i & 1) as u8) ^ u.reversed as u8;
                pos[&EdgeEnd { edge: u.edge, end }]
            })
            .collect();
        simplices.push(s);
    }
    VertexLink {
        vertex: v,
        vertices,
        simplices,
        sources: corners.to_vec(),
    }
}

/// The link of vertex `v`.
pub fn link(c: &CubeComplex, v: usize) -> VertexLink {
    let by = corners_by_vertex(c);
    build_link(c, v, &by[v])
}

/// Maximal cliques, Bron–Kerbosch with pivoting.
fn maximal_cliques(adj: &[HashSet<usize>]) -> Vec<Vec<usize>> {
    fn go(
        adj: &[HashSet<usize>],
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|w| adj[u].contains(w)).count())
            .unwrap();
        let todo: Vec<usize> = p.iter().copied().filter(|w| !adj[pivot].contains(w)).collect();
        for v in todo {
            r.push(v);
            let np = p.iter().copied().filter(|w| adj[v].contains(w)).collect();
            let nx = x.iter().copied().filter(|w| adj[v].contains(w)).collect();
            go(adj, r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    go(adj, &mut Vec::new(), (0..adj.len()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

/// Smallest subset of `clique` of size at least 3 that is not a simplex.
fn empty_face(clique: &[usize], simplices: &HashSet<Vec<usize>>) -> Option<Vec<usize>> {
    fn combos(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            cur.push(items[i]);
            if combos(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for k in 3..=clique.len() {
        let mut found = None;
        combos(clique, k, 0, &mut Vec::new(), &mut |s| {
            if simplices.contains(s) {
                false
            } else {
                found = Some(s.to_vec());
                true
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn link_violations(c: &CubeComplex, link: &VertexLink) -> Vec<LinkViolation> {
    let vname = c.name(0, link.vertex).to_string();
    let cell_label = |(d, ci, x): (usize, usize, u32)| format!("{}@{x}", c.name(d, ci));
    let mut out = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut simplex_set = HashSet::new();
    for (k, s) in link.simplices.iter().enumerate() {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        let (d, ci, x) = link.sources[k];
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            out.push(LinkViolation::Degenerate {
                vertex: vname.clone(),
                cell: c.name(d, ci).to_string(),
                corner: x,
            });
            continue;
        }
        match seen.get(&sorted) {
            Some(&first) => out.push(LinkViolation::Duplicate {
                vertex: vname.clone(),
                cells: [cell_label(link.sources[first]), cell_label(link.sources[k])],
            }),
            None => {
                seen.insert(sorted.clone(), k);
            }
        }
        simplex_set.insert(sorted);
    }
    for clique in maximal_cliques(&link.adjacency()) {
        if clique.len() < 3 || simplex_set.contains(&clique) {
            continue;
        }
        if let Some(face) = empty_face(&clique, &simplex_set) {
            out.push(LinkViolation::EmptySimplex {
                vertex: vname.clone(),
                clique: face.iter().map(|&i| end_label(c, link.vertices[i])).collect(),
            });
        }
    }
    out
}

/// Checks that every vertex link is a simplicial flag complex.
pub fn check_npc(c: &CubeComplex) -> NpcReport {
    let by = corners_by_vertex(c);
    let violations: Vec<LinkViolation> = (0..c.vertex_count())
        .into_par_iter()
        .flat_map_iter(|v| link_violations(c, &build_link(c, v, &by[v])))
        .collect();
    NpcReport {
        vertices: c.vertex_count(),
        npc: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::complex;

    #[test]
    fn torus_link_is_a_four_cycle() {
        let c = complex("torus").unwrap();
        let l = link(&c, 0);
        assert_eq!(l.vertices.len(), 4);
        assert_eq!(l.simplices.len(), 4);
        assert!(l.adjacency().iter().all(|n| n.len() == 2));
        assert!(check_npc(&c).npc);
    }

    #[test]
    fn corner_of_three_squares_has_an_empty_triangle() {
        let c = complex("three-squares").unwrap();
        let r = check_npc(&c);
        assert!(!r.npc);
        assert_eq!(
            r.violations,
            vec![LinkViolation::EmptySimplex {
                vertex: "o".into(),
                clique: vec!["x@from".into(), "y@from".into(), "z@from".into()],
            }]
        );
    }

    #[test]
    fn cube_fills_the_triangle() {
        let c = complex("solid-cube").unwrap();
        assert!(check_npc(&c).npc);
    }

    #[test]
    fn folded_square_is_degenerate() {
        let r = check_npc(&complex("folded-square").unwrap());
        assert!(matches!(r.violations[0], LinkViolation::Degenerate { .. }));
    }

    #[test]
    fn cliques() {
        let adj: Vec<HashSet<usize>> = vec![
            [1, 2].into(),
            [0, 2].into(),
            [0, 1, 3].into(),
            [2].into(),
        ];
        assert_eq!(maximal_cliques(&adj), vec![vec![0, 1, 2], vec![2, 3]]);
    }
}
