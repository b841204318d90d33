//! Walls input files (TOML) and the wallspace artifact (JSON).
//!
//! ```toml
//! margin = 2              # optional, default ⌈R/4⌉
//! depth_threshold = 2     # optional, default ⌈(R-m)/2⌉
//! radius_cap = 3          # largest radius tried for `radius = "auto"`
//!
//! [[family]]
//! label = "columns"
//! kind = "edge"
//! generator = "a"
//! translates = ["AA", "A", "", "a"]
//!
//! [[family]]
//! label = "axis"
//! kind = "subgroup"
//! generators = ["a"]
//! radius = "auto"
//! translates = { radius = 2 }   # every ball element of length <= 2
//!
//! [[family]]
//! label = "cut"
//! kind = "partition"
//! left = ["a", "aa"]
//! carrier = [""]
//! translates = "all"            # every ball element
//! ```
//!
//! Missing `translates` means the identity only. For edge families `"all"`
//! keeps only `g` with `g·generator` inside the ball. Translates produced by
//! `"all"` or `{ radius }` that fail at this scale are skipped and noted;
//! explicit translates must succeed.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::build::{
    edge_wall, partition_wall, resolve_subgroup_radius, subgroup_wall_hinted, WallParams,
};
use super::{FamilySource, VertexSet, Wall, WallError, WallFamily, WallOrigin, Wallspace};
use crate::group::{CayleyBall, GroupElement};

pub const WALLSPACE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusSpec {
    Fixed(u32),
    Auto(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TranslateSpec {
    Words(Vec<String>),
    All(String),
    Radius { radius: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Edge,
    Subgroup,
    Partition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub label: String,
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<RadiusSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub left: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub carrier: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translates: Option<TranslateSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_threshold: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_cap: Option<u32>,
    #[serde(default, rename = "family")]
    pub families: Vec<FamilySpec>,
}

fn vertex_set(ball: &CayleyBall, words: &[String], what: &str) -> Result<VertexSet, WallError> {
    let mut s = VertexSet::with_capacity(ball.len());
    for w in words {
        let word = ball.presentation().parse_word(w)?;
        let v = ball
            .find(&word)?
            .ok_or_else(|| WallError::Malformed(format!("{what} vertex {w:?} is not in the ball")))?;
        s.insert(v);
    }
    Ok(s)
}

impl WallsSpec {
    pub fn parse(text: &str) -> Result<Self, WallError> {
        toml::from_str(text).map_err(|e| WallError::Malformed(e.to_string()))
    }

    pub fn params(&self, radius: u32) -> Result<WallParams, WallError> {
        let mut params = WallParams::for_radius(radius);
        if let Some(m) = self.margin {
            if m > radius {
                return Err(WallError::Malformed(format!(
                    "margin {m} exceeds ball radius {radius}"
                )));
            }
            params = params.with_margin(radius, m);
        }
        if let Some(t) = self.depth_threshold {
            params.depth_threshold = t;
        }
        if let Some(c) = self.radius_cap {
            params.radius_cap = c;
        }
        Ok(params)
    }

    /// Builds the wallspace and returns notes on radius retries and
    /// skipped translates.
    pub fn build(&self, ball: Arc<CayleyBall>) -> Result<(Wallspace, Vec<String>), WallError> {
        let params = self.params(ball.radius())?;
        let p = ball.presentation();
        let mut notes = Vec::new();
        let mut families = Vec::new();
        for f in &self.families {
            let source = match f.kind {
                FamilyKind::Edge => {
                    let g = f.generator.as_deref().ok_or_else(|| {
                        WallError::Malformed(format!("edge family {:?} needs `generator`", f.label))
                    })?;
                    let generator = p.element(g)?;
                    if generator.is_identity() {
                        return Err(WallError::Malformed(format!(
                            "edge family {:?} has a trivial generator",
                            f.label
                        )));
                    }
                    FamilySource::Edge { generator }
                }
                FamilyKind::Subgroup => {
                    let generators = f
                        .generators
                        .iter()
                        .map(|g| p.element(g))
                        .collect::<Result<Vec<_>, _>>()?;
                    for (g, s) in generators.iter().zip(&f.generators) {
                        if ball.index_of_element(g).is_none() {
                            return Err(WallError::Malformed(format!(
                                "subgroup generator {s:?} lies outside the ball"
                            )));
                        }
                    }
                    let radius = match &f.radius {
                        None => 0,
                        Some(RadiusSpec::Fixed(r)) => *r,
                        Some(RadiusSpec::Auto(s)) if s == "auto" => {
                            let (r, failed) = resolve_subgroup_radius(&ball, &generators, &params)?;
                            for (fr, e) in failed {
                                notes.push(format!("family {:?}: radius {fr} rejected: {e}", f.label));
                            }
                            notes.push(format!("family {:?}: using radius {r}", f.label));
                            r
                        }
                        Some(RadiusSpec::Auto(s)) => {
                            return Err(WallError::Malformed(format!("bad radius {s:?}")))
                        }
                    };
                    FamilySource::Subgroup { generators, radius }
                }
                FamilyKind::Partition => {
                    let left = vertex_set(&ball, &f.left, "left")?;
                    let carrier = vertex_set(&ball, &f.carrier, "carrier")?;
                    if !left.is_disjoint(&carrier) {
                        return Err(WallError::Malformed(format!(
                            "partition {:?}: left and carrier overlap",
                            f.label
                        )));
                    }
                    FamilySource::Partition { left, carrier }
                }
            };
            families.push(WallFamily {
                label: f.label.clone(),
                source,
            });
        }

        let mut walls: Vec<Wall> = Vec::new();
        for (fi, (f, fam)) in self.families.iter().zip(&families).enumerate() {
            let (translates, strict) = match &f.translates {
                None => (vec![GroupElement::identity()], true),
                Some(TranslateSpec::Words(ws)) => (
                    ws.iter().map(|w| p.element(w)).collect::<Result<Vec<_>, _>>()?,
                    true,
                ),
                Some(TranslateSpec::All(s)) if s == "all" => {
                    ((0..ball.len()).map(|v| ball.element(v)).collect(), false)
                }
                Some(TranslateSpec::All(s)) => {
                    return Err(WallError::Malformed(format!("bad translates {s:?}")))
                }
                Some(TranslateSpec::Radius { radius }) => (
                    (0..ball.len())
                        .filter(|&v| ball.dist(v) <= *radius)
                        .map(|v| ball.element(v))
                        .collect(),
                    false,
                ),
            };
            let mut base_left: Option<VertexSet> = None;
            for g in translates {
                let made = match &fam.source {
                    FamilySource::Edge { generator } => {
                        if !strict && ball.index_of_element(&p.multiply(&g, generator)?).is_none() {
                            continue;
                        }
                        edge_wall(&ball, fi, generator, &g, &params)
                    }
                    FamilySource::Partition { left, carrier } => {
                        partition_wall(&ball, fi, left, carrier, &g, &params)
                    }
                    FamilySource::Subgroup { generators, radius } => {
                        if base_left.is_none() {
                            let base = subgroup_wall_hinted(
                                &ball,
                                fi,
                                generators,
                                *radius,
                                &GroupElement::identity(),
                                &params,
                                None,
                            )?;
                            base_left = Some(base.left);
                        }
                        let hint = if g.is_identity() {
                            None
                        } else {
                            Some(super::build::translated(&ball, &g, base_left.as_ref().unwrap())?)
                        };
                        subgroup_wall_hinted(
                            &ball,
                            fi,
                            generators,
                            *radius,
                            &g,
                            &params,
                            hint.as_ref(),
                        )
                    }
                };
                match made {
                    Ok(w) => {
                        if !walls.iter().any(|x| x.same_partition(&w)) {
                            walls.push(w);
                        }
                    }
                    Err(e) if !strict && !matches!(e, WallError::Group(_)) => notes.push(format!(
                        "family {:?}: translate {:?} skipped: {e}",
                        f.label,
                        p.format(&g)
                    )),
                    Err(e) => return Err(e),
                }
            }
        }
        let ws = Wallspace::from_parts(
            ball,
            families,
            walls,
            params.margin,
            params.depth_threshold,
        )?;
        Ok((ws, notes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyFile {
    Edge {
        label: String,
        generator: String,
    },
    Subgroup {
        label: String,
        generators: Vec<String>,
        radius: u32,
    },
    Partition {
        label: String,
        left: Vec<usize>,
        carrier: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallFile {
    pub family: usize,
    pub translate: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub carrier: Vec<usize>,
    pub deep: [bool; 2],
    pub deep_vertices: Vec<usize>,
}

/// On-disk wallspace. The ball is embedded so the file stands alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallspaceFile {
    pub format_version: u32,
    pub ball: CayleyBall,
    pub margin: u32,
    pub depth_threshold: u32,
    pub families: Vec<FamilyFile>,
    pub walls: Vec<WallFile>,
}

fn indices(s: &VertexSet) -> Vec<usize> {
    s.ones().collect()
}

fn from_indices(n: usize, v: &[usize]) -> Result<VertexSet, WallError> {
    let mut s = VertexSet::with_capacity(n);
    for &i in v {
        if i >= n {
            return Err(WallError::Malformed(format!("vertex index {i} out of range")));
        }
        s.insert(i);
    }
    Ok(s)
}

impl From<&Wallspace> for WallspaceFile {
    fn from(ws: &Wallspace) -> Self {
        let p = ws.ball().presentation();
        WallspaceFile {
            format_version: WALLSPACE_FORMAT_VERSION,
            ball: ws.ball().clone(),
            margin: ws.margin(),
            depth_threshold: ws.depth_threshold(),
            families: ws
                .families()
                .iter()
                .map(|f| match &f.source {
                    FamilySource::Edge { generator } => FamilyFile::Edge {
                        label: f.label.clone(),
                        generator: p.format(generator),
                    },
                    FamilySource::Subgroup { generators, radius } => FamilyFile::Subgroup {
                        label: f.label.clone(),
                        generators: generators.iter().map(|g| p.format(g)).collect(),
                        radius: *radius,
                    },
                    FamilySource::Partition { left, carrier } => FamilyFile::Partition {
                        label: f.label.clone(),
                        left: indices(left),
                        carrier: indices(carrier),
                    },
                })
                .collect(),
            walls: ws
                .walls()
                .iter()
                .map(|w| WallFile {
                    family: w.origin.family,
                    translate: p.format(&w.origin.translate),
                    left: indices(&w.left),
                    right: indices(&w.right),
                    carrier: indices(&w.carrier),
                    deep: w.deep,
                    deep_vertices: indices(&w.deep_vertices),
                })
                .collect(),
        }
    }
}

impl TryFrom<WallspaceFile> for Wallspace {
    type Error = WallError;

    fn try_from(f: WallspaceFile) -> Result<Self, WallError> {
        if f.format_version != WALLSPACE_FORMAT_VERSION {
            return Err(WallError::Malformed(format!(
                "wallspace format version {} (expected {WALLSPACE_FORMAT_VERSION})",
                f.format_version
            )));
        }
        let ball = Arc::new(f.ball);
        let p = ball.presentation();
        let n = ball.len();
        let families = f
            .families
            .into_iter()
            .map(|fam| {
                Ok(match fam {
                    FamilyFile::Edge { label, generator } => WallFamily {
                        label,
                        source: FamilySource::Edge {
                            generator: p.element(&generator)?,
                        },
                    },
                    FamilyFile::Subgroup {
                        label,
                        generators,
                        radius,
                    } => WallFamily {
                        label,
                        source: FamilySource::Subgroup {
                            generators: generators
                                .iter()
                                .map(|g| p.element(g))
                                .collect::<Result<_, _>>()?,
                            radius,
                        },
                    },
                    FamilyFile::Partition {
                        label,
                        left,
                        carrier,
                    } => WallFamily {
                        label,
                        source: FamilySource::Partition {
                            left: from_indices(n, &left)?,
                            carrier: from_indices(n, &carrier)?,
                        },
                    },
                })
            })
            .collect::<Result<Vec<_>, WallError>>()?;
        let walls = f
            .walls
            .into_iter()
            .map(|w| {
                Ok(Wall {
                    left: from_indices(n, &w.left)?,
                    right: from_indices(n, &w.right)?,
                    carrier: from_indices(n, &w.carrier)?,
                    origin: WallOrigin {
                        family: w.family,
                        translate: p.element(&w.translate)?,
                    },
                    deep: w.deep,
                    deep_vertices: from_indices(n, &w.deep_vertices)?,
                })
            })
            .collect::<Result<Vec<_>, WallError>>()?;
        Wallspace::from_parts(ball, families, walls, f.margin, f.depth_threshold)
    }
}

impl Serialize for Wallspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WallspaceFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Wallspace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let f = WallspaceFile::deserialize(deserializer)?;
        Wallspace::try_from(f).map_err(serde::de::Error::custom)
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

    #[test]
    fn grid_spec_builds_eight_walls() {
        let text = r#"
margin = 2
[[family]]
label = "columns"
kind = "edge"
generator = "a"
translates = ["AA", "A", "", "a"]
[[family]]
label = "rows"
kind = "edge"
generator = "b"
translates = ["BB", "B", "", "b"]
"#;
        let spec = WallsSpec::parse(text).unwrap();
        let (ws, notes) = spec.build(ball(Builtin::FreeAbelian { rank: 2 }, 6)).unwrap();
        assert!(notes.is_empty());
        assert_eq!(ws.len(), 8);
        assert!((0..8).all(|i| ws.is_trusted_wall(i)));
        let json = serde_json::to_string(&ws).unwrap();
        let back: Wallspace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ws);
    }

    #[test]
    fn auto_radius_and_generated_translates() {
        let text = r#"
[[family]]
label = "axis"
kind = "subgroup"
generators = ["a"]
radius = "auto"
translates = { radius = 1 }
"#;
        let spec = WallsSpec::parse(text).unwrap();
        let (ws, notes) = spec.build(ball(Builtin::FreeAbelian { rank: 2 }, 5)).unwrap();
        assert!(notes.iter().any(|n| n.contains("using radius 0")));
        // translates by 1, a, A collapse to one wall; b and B give two more
        assert_eq!(ws.len(), 3);
    }

    #[test]
    fn partition_family() {
        let text = r#"
[[family]]
label = "cut"
kind = "partition"
left = ["a", "aa"]
"#;
        let (ws, _) = WallsSpec::parse(text)
            .unwrap()
            .build(ball(Builtin::FreeAbelian { rank: 1 }, 2))
            .unwrap();
        assert_eq!(ws.len(), 1);
        assert!(ws.wall(0).carrier.is_clear());
        assert_eq!(ws.wall(0).right.count_ones(..), 3);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(WallsSpec::parse("[[family]]\nlabel='x'\nkind='edge'\ncolour=1\n").is_err());
    }
}
