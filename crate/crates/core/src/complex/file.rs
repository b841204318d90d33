//! Text format for cube complexes.
//!
//! ```toml
//! format_version = 1
//! vertices = ["v"]
//!
//! [[edge]]
//! name = "a"
//! from = "v"
//! to = "v"
//!
//! [[cube]]
//! name = "T"
//! faces = ["b", "b", "a", "a"]
//! ```
//!
//! A cube of dimension `n` lists `2n` faces, `(axis 0, side 0)`,
//! `(axis 0, side 1)`, `(axis 1, side 0)` and so on. A face is written
//!
//! - `name`: the face's coordinates run along the remaining axes in
//!   increasing order, forwards;
//! - `-name`: an edge traversed from `to` to `from`;
//! - `name:+2,-0`: coordinate `k` of the face runs along the listed parent
//!   axis, backwards when the sign is `-`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{AxisMap, Cell, ComplexError, CubeComplex, Face};

pub const COMPLEX_FORMAT_VERSION: u32 = 1;

fn current_version() -> u32 {
    COMPLEX_FORMAT_VERSION
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub name: String,
    pub faces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default = "current_version")]
    pub format_version: u32,
    pub vertices: Vec<String>,
    #[serde(default, rename = "edge")]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, rename = "cube")]
    pub cubes: Vec<CellEntry>,
}

struct FaceRef<'a> {
    name: &'a str,
    map: Option<Vec<AxisMap>>,
    reversed: bool,
}

fn parse_face(s: &str) -> Result<FaceRef<'_>, ComplexError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('-') {
        return Ok(FaceRef {
            name: rest,
            map: None,
            reversed: true,
        });
    }
    let Some((name, spec)) = s.split_once(':') else {
        return Ok(FaceRef {
            name: s,
            map: None,
            reversed: false,
        });
    };
    let mut map = Vec::new();
    if !spec.trim().is_empty() {
        for tok in spec.split(',') {
            let tok = tok.trim();
            let (reversed, num) = match tok.as_bytes().first() {
                Some(b'+') => (false, &tok[1..]),
                Some(b'-') => (true, &tok[1..]),
                _ => {
                    return Err(ComplexError::Parse(format!(
                        "face {s:?}: axis {tok:?} needs a sign"
                    )))
                }
            };
            let axis: u8 = num
                .parse()
                .map_err(|_| ComplexError::Parse(format!("face {s:?}: bad axis {tok:?}")))?;
            map.push(AxisMap { axis, reversed });
        }
    }
    Ok(FaceRef {
        name,
        map: Some(map),
        reversed: false,
    })
}

fn claim<'a>(
    names: &mut HashMap<&'a str, (usize, usize)>,
    name: &'a str,
    at: (usize, usize),
) -> Result<(), ComplexError> {
    if name.is_empty() || name.starts_with('-') || name.contains(':') {
        return Err(ComplexError::Parse(format!("bad cell name {name:?}")));
    }
    if names.insert(name, at).is_some() {
        return Err(ComplexError::Parse(format!("duplicate cell name {name:?}")));
    }
    Ok(())
}

fn default_map(dim: usize, axis: usize) -> Vec<AxisMap> {
    (0..dim)
        .filter(|&a| a != axis)
        .map(|a| AxisMap {
            axis: a as u8,
            reversed: false,
        })
        .collect()
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<CubeComplex, ComplexError> {
        if self.format_version != COMPLEX_FORMAT_VERSION {
            return Err(ComplexError::Parse(format!(
                "unsupported format_version {} (expected {COMPLEX_FORMAT_VERSION})",
                self.format_version
            )));
        }
        let mut names: HashMap<&str, (usize, usize)> = HashMap::new();
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(), Vec::new()];
        let mut pending: Vec<Vec<&CellEntry>> = vec![Vec::new(), Vec::new()];
        for v in &self.vertices {
            claim(&mut names, v, (0, cells[0].len()))?;
            cells[0].push(Cell {
                name: v.clone(),
                faces: Vec::new(),
            });
        }
        for e in &self.edges {
            claim(&mut names, &e.name, (1, cells[1].len()))?;
            cells[1].push(Cell {
                name: e.name.clone(),
                faces: Vec::new(),
            });
        }
        for c in &self.cubes {
            let n = c.faces.len();
            if n < 4 || n % 2 == 1 {
                return Err(ComplexError::Parse(format!(
                    "cube {:?} lists {n} faces; a cube of dimension d ≥ 2 lists 2d",
                    c.name
                )));
            }
            let d = n / 2;
            if d > super::MAX_DIM {
                return Err(ComplexError::Parse(format!("cube {:?} is too large", c.name)));
            }
            while cells.len() <= d {
                cells.push(Vec::new());
                pending.push(Vec::new());
            }
            claim(&mut names, &c.name, (d, cells[d].len()))?;
            cells[d].push(Cell {
                name: c.name.clone(),
                faces: Vec::new(),
            });
            pending[d].push(c);
        }
        let vertex = |name: &str| -> Result<usize, ComplexError> {
            match names.get(name) {
                Some(&(0, i)) => Ok(i),
                _ => Err(ComplexError::Parse(format!("unknown vertex {name:?}"))),
            }
        };
        for (i, e) in self.edges.iter().enumerate() {
            cells[1][i].faces = vec![
                Face {
                    cell: vertex(&e.from)?,
                    map: Vec::new(),
                },
                Face {
                    cell: vertex(&e.to)?,
                    map: Vec::new(),
                },
            ];
        }
        for (d, entries) in pending.iter().enumerate() {
            for (i, c) in entries.iter().enumerate() {
                let mut faces = Vec::with_capacity(2 * d);
                for (slot, text) in c.faces.iter().enumerate() {
                    let f = parse_face(text)?;
                    let (fd, fi) = *names.get(f.name).ok_or_else(|| {
                        ComplexError::Parse(format!("cube {:?}: unknown face {:?}", c.name, f.name))
                    })?;
                    if fd + 1 != d {
                        return Err(ComplexError::Parse(format!(
                            "cube {:?}: face {:?} has dimension {fd}, expected {}",
                            c.name,
                            f.name,
                            d - 1
                        )));
                    }
                    let map = match (f.map, f.reversed) {
                        (Some(m), _) => m,
                        (None, false) => default_map(d, slot / 2),
                        (None, true) if d == 2 => {
                            let mut m = default_map(d, slot / 2);
                            m[0].reversed = true;
                            m
                        }
                        (None, true) => {
                            return Err(ComplexError::Parse(format!(
                                "cube {:?}: '-' applies only to edges; use {}:<axes>",
                                c.name, f.name
                            )))
                        }
                    };
                    faces.push(Face { cell: fi, map });
                }
                cells[d][i].faces = faces;
            }
        }
        CubeComplex::new(cells)
    }

    pub fn from_complex(c: &CubeComplex) -> Self {
        let vertices = c.cells(0).iter().map(|v| v.name.clone()).collect();
        let edges = (0..c.edge_count())
            .map(|e| {
                let (a, b) = c.endpoints(e);
                EdgeEntry {
                    name: c.name(1, e).to_string(),
                    from: c.name(0, a).to_string(),
                    to: c.name(0, b).to_string(),
                }
            })
            .collect();
        let mut cubes = Vec::new();
        for d in 2..=c.dimension() {
            for cell in c.cells(d) {
                let faces = cell
                    .faces
                    .iter()
                    .enumerate()
                    .map(|(slot, f)| {
                        let name = c.name(d - 1, f.cell);
                        if f.map == default_map(d, slot / 2) {
                            name.to_string()
                        } else if d == 2 {
                            format!("-{name}")
                        } else {
                            let axes: Vec<String> = f
                                .map
                                .iter()
                                .map(|m| format!("{}{}", if m.reversed { '-' } else { '+' }, m.axis))
                                .collect();
                            format!("{name}:{}", axes.join(","))
                        }
                    })
                    .collect();
                cubes.push(CellEntry {
                    name: cell.name.clone(),
                    faces,
                });
            }
        }
        ComplexFile {
            format_version: COMPLEX_FORMAT_VERSION,
            vertices,
            edges,
            cubes,
        }
    }
}

impl CubeComplex {
    pub fn from_toml(text: &str) -> Result<Self, ComplexError> {
        let file: ComplexFile =
            toml::from_str(text).map_err(|e| ComplexError::Parse(e.to_string()))?;
        file.to_complex()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&ComplexFile::from_complex(self)).expect("complex file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_syntax() {
        let f = parse_face("q:+2,-0").unwrap();
        assert_eq!(f.name, "q");
        assert_eq!(
            f.map.unwrap(),
            vec![
                AxisMap {
                    axis: 2,
                    reversed: false
                },
                AxisMap {
                    axis: 0,
                    reversed: true
                }
            ]
        );
        assert!(parse_face("-a").unwrap().reversed);
        assert!(parse_face("q:2").is_err());
    }

    #[test]
    fn toml_round_trip() {
        for name in crate::fixtures::COMPLEX_NAMES {
            let c = crate::fixtures::complex(name).unwrap();
            let again = CubeComplex::from_toml(&c.to_toml()).unwrap();
            assert_eq!(c, again, "{name}");
        }
    }

    #[test]
    fn names_must_be_unique() {
        let text = "vertices = [\"v\"]\n[[edge]]\nname = \"v\"\nfrom = \"v\"\nto = \"v\"\n";
        assert!(CubeComplex::from_toml(text).is_err());
    }
}
