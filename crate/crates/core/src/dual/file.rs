use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CarrierAdvisory, Cube, DualComplex, DualError, OneCube, Orientation};

pub const DUAL_FORMAT_VERSION: u32 = 1;

/// On-disk dual complex. Orientations are written as strings of `L`/`R`,
/// one character per wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualFile {
    pub format_version: u32,
    pub ball_id: String,
    pub wall_count: usize,
    pub census: Vec<usize>,
    pub zero_cubes: Vec<String>,
    pub one_cubes: Vec<OneCube>,
    /// `cubes[n - 2]` lists the n-cubes.
    pub cubes: Vec<Vec<Cube>>,
    pub principal_map: Vec<Option<usize>>,
    pub carrier_advisories: Vec<CarrierAdvisory>,
}

pub(crate) fn orientation_string(o: &Orientation, k: usize) -> String {
    (0..k).map(|i| if o.contains(i) { 'R' } else { 'L' }).collect()
}

fn parse_orientation(s: &str, k: usize) -> Result<Orientation, DualError> {
    if s.chars().count() != k {
        return Err(DualError::Input(format!("orientation {s:?} has wrong length")));
    }
    let mut o = Orientation::with_capacity(k);
    for (i, c) in s.chars().enumerate() {
        match c {
            'L' => {}
            'R' => o.insert(i),
            _ => return Err(DualError::Input(format!("bad orientation {s:?}"))),
        }
    }
    Ok(o)
}

impl From<&DualComplex> for DualFile {
    fn from(dc: &DualComplex) -> Self {
        DualFile {
            format_version: DUAL_FORMAT_VERSION,
            ball_id: dc.ball_id.clone(),
            wall_count: dc.wall_count,
            census: dc.census(),
            zero_cubes: dc
                .zero_cubes
                .iter()
                .map(|o| orientation_string(o, dc.wall_count))
                .collect(),
            one_cubes: dc.one_cubes.clone(),
            cubes: dc.cubes.clone(),
            principal_map: dc.principal_map.clone(),
            carrier_advisories: dc.advisories.clone(),
        }
    }
}

impl TryFrom<DualFile> for DualComplex {
    type Error = DualError;

    fn try_from(f: DualFile) -> Result<Self, DualError> {
        if f.format_version != DUAL_FORMAT_VERSION {
            return Err(DualError::Input(format!(
                "dual format version {} (expected {DUAL_FORMAT_VERSION})",
                f.format_version
            )));
        }
        let k = f.wall_count;
        let zero_cubes = f
            .zero_cubes
            .iter()
            .map(|s| parse_orientation(s, k))
            .collect::<Result<Vec<_>, _>>()?;
        let mut index = HashMap::new();
        for (i, o) in zero_cubes.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(DualError::Input(format!("duplicate zero-cube {i}")));
            }
        }
        let n = zero_cubes.len();
        for e in &f.one_cubes {
            if e.from >= n || e.to >= n || e.wall >= k {
                return Err(DualError::Input(format!("one-cube {e:?} out of range")));
            }
            let diff: Vec<usize> = zero_cubes[e.from]
                .symmetric_difference(&zero_cubes[e.to])
                .collect();
            if diff != [e.wall] || zero_cubes[e.from].contains(e.wall) {
                return Err(DualError::Input(format!(
                    "one-cube {e:?} does not flip its wall from left to right"
                )));
            }
        }
        let dc = DualComplex {
            ball_id: f.ball_id,
            wall_count: k,
            zero_cubes,
            index,
            one_cubes: f.one_cubes,
            cubes: f.cubes,
            principal_map: f.principal_map,
            advisories: f.carrier_advisories,
        };
        for c in dc.cubes.iter().flatten() {
            if c.base >= n || c.walls.iter().any(|&w| w >= k) {
                return Err(DualError::Input(format!("cube {c:?} out of range")));
            }
            let base = &dc.zero_cubes[c.base];
            let mut corners_ok = true;
            for mask in 0..1usize << c.walls.len() {
                let mut o = base.clone();
                for (b, &w) in c.walls.iter().enumerate() {
                    if base.contains(w) {
                        corners_ok = false;
                    }
                    if mask >> b & 1 == 1 {
                        o.toggle(w);
                    }
                }
                corners_ok &= dc.index.contains_key(&o);
            }
            if !corners_ok {
                return Err(DualError::Input(format!("cube {c:?} has a missing corner")));
            }
        }
        if dc.census() != f.census {
            return Err(DualError::Input("census does not match the cube lists".into()));
        }
        Ok(dc)
    }
}

impl Serialize for DualComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DualFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DualComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let f = DualFile::deserialize(deserializer)?;
        DualComplex::try_from(f).map_err(serde::de::Error::custom)
    }
}
