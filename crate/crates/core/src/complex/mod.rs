//! Finite cube complexes given by face identifications.
//!
//! A cell of dimension `n` is a copy of `{0,1}ⁿ`. Its `2n` faces are
//! listed in the order `(axis 0, side 0), (axis 0, side 1), (axis 1, side 0), …`.
//! Each face is a cell of dimension `n − 1` together with a signed map
//! telling, for every coordinate of the face, which remaining axis of the
//! parent it runs along and whether it runs backwards. Vertices are cells
//! of dimension 0 and an edge's two faces are its endpoints.

mod file;
mod hyperplane;
mod npc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual::DualComplex;

pub use file::{ComplexFile, EdgeEntry, CellEntry, COMPLEX_FORMAT_VERSION};
pub use hyperplane::{
    check_special, hyperplanes, Hyperplane, IndirectOsculation, Midcube, Pathology,
    PathologyReport,
};
pub use npc::{check_npc, link, EdgeEnd, LinkViolation, NpcReport, VertexLink};

/// Highest cell dimension accepted.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed complex: {0}")]
    Malformed(String),
}

/// One coordinate of a face: the parent axis it runs along and whether it
/// runs backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisMap {
    pub axis: u8,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Index among the cells of one lower dimension.
    pub cell: usize,
    pub map: Vec<AxisMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    /// `2n` faces, `faces[2i + ε]` is the face `x_i = ε`.
    pub faces: Vec<Face>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.faces.len() / 2
    }

    pub fn face(&self, axis: usize, side: usize) -> &Face {
        &self.faces[2 * axis + side]
    }
}

/// Edge of a cell along `axis` at a corner: the edge index and whether the
/// cell traverses it from its `to` end to its `from` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeUse {
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeComplex {
    /// `cells[d]` are the cells of dimension `d`.
    cells: Vec<Vec<Cell>>,
    /// `corners[d][c][x]`: vertex at corner `x` (bit `i` = coordinate `i`).
    corners: Vec<Vec<Vec<usize>>>,
    /// `edge_uses[d][c][i·2^d + x]` for `x` with bit `i` clear.
    edge_uses: Vec<Vec<Vec<EdgeUse>>>,
}

fn point_on_face(x: u32, map: &[AxisMap]) -> u32 {
    let mut y = 0;
    for (k, m) in map.iter().enumerate() {
        let bit = (x >> m.axis & 1) ^ m.reversed as u32;
        y |= bit << k;
    }
    y
}

impl CubeComplex {
    /// Validates face data and builds corner and edge tables. `cells[0]`
    /// must hold vertices (no faces), `cells[1]` edges.
    pub fn new(mut cells: Vec<Vec<Cell>>) -> Result<Self, ComplexError> {
        if cells.is_empty() {
            return Err(ComplexError::Malformed("no vertices".into()));
        }
        while cells.len() > 1 && cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        if cells.len() > MAX_DIM + 1 {
            return Err(ComplexError::Malformed(format!(
                "dimension {} exceeds the maximum {MAX_DIM}",
                cells.len() - 1
            )));
        }
        for (d, level) in cells.iter().enumerate() {
            for c in level {
                validate_cell(&cells, d, c)?;
            }
        }
        let mut complex = CubeComplex {
            corners: Vec::with_capacity(cells.len()),
            edge_uses: Vec::with_capacity(cells.len()),
            cells,
        };
        complex.fill_tables();
        for d in 2..complex.cells.len() {
            for c in 0..complex.cells[d].len() {
                complex.check_commuting(d, c)?;
            }
        }
        Ok(complex)
    }

    fn fill_tables(&mut self) {
        for d in 0..self.cells.len() {
            let mut corner_rows = Vec::with_capacity(self.cells[d].len());
            let mut edge_rows = Vec::with_capacity(self.cells[d].len());
            for (ci, cell) in self.cells[d].iter().enumerate() {
                let corners: Vec<usize> = if d == 0 {
                    vec![ci]
                } else {
                    (0..1u32 << d)
                        .map(|x| {
                            let f = cell.face(0, (x & 1) as usize);
                            self.corners[d - 1][f.cell][point_on_face(x, &f.map) as usize]
                        })
                        .collect()
                };
                let mut uses = vec![
                    EdgeUse {
                        edge: usize::MAX,
                        reversed: false
                    };
                    d << d
                ];
                if d == 1 {
                    uses[0] = EdgeUse {
                        edge: ci,
                        reversed: false,
                    };
                } else {
                    for i in 0..d {
                        let j = if i == 0 { 1 } else { 0 };
                        for x in (0..1u32 << d).filter(|x| x >> i & 1 == 0) {
                            let f = cell.face(j, (x >> j & 1) as usize);
                            let k = f.map.iter().position(|m| m.axis as usize == i).unwrap();
                            let y = point_on_face(x, &f.map) & !(1 << k);
                            let inner = self.edge_uses[d - 1][f.cell][(k << (d - 1)) + y as usize];
                            uses[(i << d) + x as usize] = EdgeUse {
                                edge: inner.edge,
                                reversed: inner.reversed ^ f.map[k].reversed,
                            };
                        }
                    }
                }
                corner_rows.push(corners);
                edge_rows.push(uses);
            }
            self.corners.push(corner_rows);
            self.edge_uses.push(edge_rows);
        }
    }

    /// The `(n−2)`-face reached through faces `(i, ε)` then `(j, δ)` must
    /// equal the one reached through `(j, δ)` then `(i, ε)`, as cells and as
    /// maps into the parent.
    fn check_commuting(&self, d: usize, c: usize) -> Result<(), ComplexError> {
        let cell = &self.cells[d][c];
        let route = |i: usize, eps: usize, j: usize, delta: usize| {
            let f = cell.face(i, eps);
            let k = f.map.iter().position(|m| m.axis as usize == j).unwrap();
            let g = self.cells[d - 1][f.cell].face(k, delta ^ f.map[k].reversed as usize);
            let composed: Vec<AxisMap> = g
                .map
                .iter()
                .map(|m| {
                    let outer = f.map[m.axis as usize];
                    AxisMap {
                        axis: outer.axis,
                        reversed: outer.reversed ^ m.reversed,
                    }
                })
                .collect();
            (g.cell, composed)
        };
        for i in 0..d {
            for j in i + 1..d {
                for eps in 0..2 {
                    for delta in 0..2 {
                        if route(i, eps, j, delta) != route(j, delta, i, eps) {
                            return Err(ComplexError::Malformed(format!(
                                "faces of {} do not commute at x{i} = {eps}, x{j} = {delta}",
                                cell.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the complex from a dual: vertices are 0-cubes, edges are
    /// 1-cubes in their stored order, and an n-cube's axes follow its walls.
    pub fn from_dual(dual: &DualComplex) -> Result<Self, ComplexError> {
        use std::collections::HashMap;
        let vertices: Vec<Cell> = (0..dual.zero_cubes().len())
            .map(|i| Cell {
                name: format!("v{i}"),
                faces: Vec::new(),
            })
            .collect();
        let mut lookup: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let edges: Vec<Cell> = dual
            .one_cubes()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                lookup.insert((e.from, vec![e.wall]), i);
                Cell {
                    name: format!("e{i}"),
                    faces: vec![
                        Face {
                            cell: e.from,
                            map: Vec::new(),
                        },
                        Face {
                            cell: e.to,
                            map: Vec::new(),
                        },
                    ],
                }
            })
            .collect();
        let mut cells = vec![vertices, edges];
        for n in 2..=dual.dimension() {
            let mut level = Vec::new();
            for (ci, cube) in dual.cubes(n).iter().enumerate() {
                let mut walls = cube.walls.clone();
                walls.sort_unstable();
                let corners = dual.corners(&crate::dual::Cube {
                    base: cube.base,
                    walls: walls.clone(),
                });
                let mut faces = Vec::with_capacity(2 * n);
                for i in 0..n {
                    let rest: Vec<usize> =
                        walls.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &w)| w).collect();
                    let map: Vec<AxisMap> = (0..n)
                        .filter(|&k| k != i)
                        .map(|k| AxisMap {
                            axis: k as u8,
                            reversed: false,
                        })
                        .collect();
                    for side in 0..2 {
                        let base = corners[side << i];
                        let cell = *lookup.get(&(base, rest.clone())).ok_or_else(|| {
                            ComplexError::Malformed(format!("dual cube {ci} of dimension {n} lacks a face"))
                        })?;
                        faces.push(Face {
                            cell,
                            map: map.clone(),
                        });
                    }
                }
                lookup.insert((cube.base, walls), ci);
                level.push(Cell {
                    name: format!("c{n}_{ci}"),
                    faces,
                });
            }
            cells.push(level);
        }
        Self::new(cells)
    }

    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, d: usize) -> &[Cell] {
        self.cells.get(d).map_or(&[], |c| c.as_slice())
    }

    pub fn vertex_count(&self) -> usize {
        self.cells[0].len()
    }

    pub fn edge_count(&self) -> usize {
        self.cells(1).len()
    }

    /// Number of cells per dimension.
    pub fn census(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn name(&self, d: usize, c: usize) -> &str {
        &self.cells[d][c].name
    }

    /// `(from, to)` of an edge.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let c = &self.corners[1][e];
        (c[0], c[1])
    }

    pub fn corner(&self, d: usize, c: usize, x: u32) -> usize {
        self.corners[d][c][x as usize]
    }

    /// The edge of cell `(d, c)` along `axis` through corner `x`.
    pub fn edge_use(&self, d: usize, c: usize, axis: usize, x: u32) -> EdgeUse {
        let x = x & !(1 << axis);
        self.edge_uses[d][c][(axis << d) + x as usize]
    }

    /// Cells with a duplicate name are rejected by the file reader; this
    /// finds a cell by name in any dimension.
    pub fn find(&self, name: &str) -> Option<(usize, usize)> {
        self.cells.iter().enumerate().find_map(|(d, level)| {
            level.iter().position(|c| c.name == name).map(|i| (d, i))
        })
    }

    /// Removes one cell of top-most-possible dimension together with every
    /// cell having it as a face (transitively).
    pub fn without_cell(&self, d: usize, c: usize) -> Result<Self, ComplexError> {
        let mut removed: Vec<Vec<bool>> = self.cells.iter().map(|l| vec![false; l.len()]).collect();
        removed[d][c] = true;
        for dd in d + 1..self.cells.len() {
            for (i, cell) in self.cells[dd].iter().enumerate() {
                if cell.faces.iter().any(|f| removed[dd - 1][f.cell]) {
                    removed[dd][i] = true;
                }
            }
        }
        let mut renumber: Vec<Vec<usize>> = Vec::new();
        for r in &removed {
            let mut next = 0;
            renumber.push(
                r.iter()
                    .map(|&gone| {
                        let i = next;
                        if !gone {
                            next += 1;
                        }
                        i
                    })
                    .collect(),
            );
        }
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(dd, level)| {
                level
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| !removed[dd][i])
                    .map(|(_, cell)| Cell {
                        name: cell.name.clone(),
                        faces: cell
                            .faces
                            .iter()
                            .map(|f| Face {
                                cell: renumber[dd - 1][f.cell],
                                map: f.map.clone(),
                            })
                            .collect(),
                    })
                    .collect()
            })
            .collect();
        Self::new(cells)
    }

    /// DOT export of the 1-skeleton, edges labelled by name.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph complex {\n");
        for v in &self.cells[0] {
            s.push_str(&format!("  \"{}\";\n", v.name));
        }
        for (e, cell) in self.cells(1).iter().enumerate() {
            let (a, b) = self.endpoints(e);
            s.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.cells[0][a].name, self.cells[0][b].name, cell.name
            ));
        }
        s.push_str("}\n");
        s
    }
}

fn validate_cell(cells: &[Vec<Cell>], d: usize, c: &Cell) -> Result<(), ComplexError> {
    let bad = |m: String| Err(ComplexError::Malformed(format!("{}: {m}", c.name)));
    if c.faces.len() != 2 * d {
        return bad(format!("a {d}-cell needs {} faces, found {}", 2 * d, c.faces.len()));
    }
    for (slot, f) in c.faces.iter().enumerate() {
        let axis = slot / 2;
        if f.cell >= cells[d - 1].len() {
            return bad(format!("face {slot} refers to a missing {}-cell", d - 1));
        }
        if f.map.len() != d - 1 {
            return bad(format!("face {slot} map has {} coordinates, expected {}", f.map.len(), d - 1));
        }
        let mut used = vec![false; d];
        used[axis] = true;
        for m in &f.map {
            let a = m.axis as usize;
            if a >= d || used[a] {
                return bad(format!("face {slot} map is not a bijection onto the other axes"));
            }
            used[a] = true;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_corners_collapse() {
        let c = crate::fixtures::complex("torus").unwrap();
        assert_eq!(c.census(), vec![1, 2, 1]);
        for x in 0..4 {
            assert_eq!(c.corner(2, 0, x), 0);
        }
        let a = c.find("a").unwrap().1;
        assert_eq!(c.edge_use(2, 0, 0, 0).edge, a);
        assert_eq!(c.edge_use(2, 0, 0, 2).edge, a);
    }

    #[test]
    fn mismatched_faces_rejected() {
        let text = r#"
vertices = ["p", "q"]
[[edge]]
name = "a"
from = "p"
to = "q"
[[edge]]
name = "b"
from = "p"
to = "p"
[[cube]]
name = "s"
faces = ["b", "b", "a", "a"]
"#;
        let err = CubeComplex::from_toml(text).unwrap_err();
        assert!(err.to_string().contains("do not commute"), "{err}");
    }

    #[test]
    fn grid_dual_becomes_a_square_complex() {
        let ws = crate::fixtures::grid().unwrap();
        let dual = DualComplex::build(&ws).unwrap();
        let c = CubeComplex::from_dual(&dual).unwrap();
        assert_eq!(c.census(), vec![25, 40, 16]);
    }

    #[test]
    fn removing_an_edge_removes_its_squares() {
        let c = crate::fixtures::complex("torus").unwrap();
        let (d, a) = c.find("a").unwrap();
        let smaller = c.without_cell(d, a).unwrap();
        assert_eq!(smaller.census(), vec![1, 1]);
    }
}
