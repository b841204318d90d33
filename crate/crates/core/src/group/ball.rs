use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupError, GroupPresentation, Word, DEFAULT_VERTEX_BUDGET};

/// A labelled generator of the graph: right multiplication by `word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub label: String,
    pub word: Word,
}

/// The radius-`R` ball about the identity in a Cayley graph.
///
/// Vertex 0 is the identity and vertices are indexed in shortlex order of
/// their normal forms. For the ordinary Cayley graph the moves are the
/// letters of the alphabet; a ball of a subgroup uses the subgroup's
/// generators and their inverses instead.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    presentation: Arc<GroupPresentation>,
    id: String,
    radius: u32,
    moves: Vec<Move>,
    vertices: Vec<Word>,
    dist: Vec<u32>,
    adjacency: Vec<Vec<Option<u32>>>,
    index: HashMap<Word, u32>,
}

impl PartialEq for CayleyBall {
    fn eq(&self, other: &Self) -> bool {
        *self.presentation == *other.presentation
            && self.id == other.id
            && self.radius == other.radius
            && self.moves == other.moves
            && self.vertices == other.vertices
            && self.dist == other.dist
            && self.adjacency == other.adjacency
    }
}

impl CayleyBall {
    /// Ball in the Cayley graph with respect to the full alphabet.
    pub fn build(presentation: Arc<GroupPresentation>, radius: u32) -> Result<Self, GroupError> {
        Self::build_with_budget(presentation, radius, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(
        presentation: Arc<GroupPresentation>,
        radius: u32,
        budget: usize,
    ) -> Result<Self, GroupError> {
        let a = presentation.alphabet();
        let moves = (0..a.len())
            .map(|l| Move {
                label: a.name(l as u8).to_string(),
                word: Word(vec![l as u8]),
            })
            .collect();
        let id = format!("{}/R{}", presentation.label(), radius);
        Self::build_with_moves(presentation, moves, radius, budget, id)
    }

    /// Ball for an arbitrary finite generating list. Words are normalised in
    /// the ambient presentation; the distance is the number of moves.
    pub fn build_with_moves(
        presentation: Arc<GroupPresentation>,
        moves: Vec<Move>,
        radius: u32,
        budget: usize,
        id: String,
    ) -> Result<Self, GroupError> {
        let mut vertices = vec![Word::identity()];
        let mut dist = vec![0u32];
        let mut index = HashMap::from([(Word::identity(), 0u32)]);
        let mut sphere = vec![0usize];
        for d in 1..=radius {
            let mut next: Vec<Word> = Vec::new();
            for &v in &sphere {
                for m in &moves {
                    let w = presentation.normal_form(&vertices[v].concat(&m.word))?;
                    if !index.contains_key(&w) {
                        index.insert(w.clone(), u32::MAX);
                        next.push(w);
                    }
                }
            }
            next.sort();
            sphere.clear();
            for w in next {
                if vertices.len() >= budget {
                    return Err(GroupError::Size {
                        count: vertices.len(),
                        budget,
                    });
                }
                index.insert(w.clone(), vertices.len() as u32);
                sphere.push(vertices.len());
                vertices.push(w);
                dist.push(d);
            }
        }
        let mut adjacency = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let row = moves
                .iter()
                .map(|m| {
                    let w = presentation.normal_form(&v.concat(&m.word))?;
                    Ok(index.get(&w).copied())
                })
                .collect::<Result<Vec<_>, GroupError>>()?;
            adjacency.push(row);
        }
        Ok(CayleyBall {
            presentation,
            id,
            radius,
            moves,
            vertices,
            dist,
            adjacency,
            index,
        })
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn presentation_arc(&self) -> Arc<GroupPresentation> {
        Arc::clone(&self.presentation)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: usize) -> &Word {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn element(&self, v: usize) -> GroupElement {
        GroupElement {
            word: self.vertices[v].clone(),
        }
    }

    pub fn dist(&self, v: usize) -> u32 {
        self.dist[v]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).map(|&i| i as usize)
    }

    pub fn index_of_element(&self, g: &GroupElement) -> Option<usize> {
        self.index_of(&g.word)
    }

    /// Looks up a word after normalising it.
    pub fn find(&self, w: &Word) -> Result<Option<usize>, GroupError> {
        Ok(self.index_of(&self.presentation.normal_form(w)?))
    }

    pub fn neighbor(&self, v: usize, m: usize) -> Option<usize> {
        self.adjacency[v][m].map(|i| i as usize)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().flatten().map(|&i| i as usize)
    }

    /// Directed labelled edges `(v, move, v·move)` inside the ball.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(m, w)| w.map(|w| (v, m, w as usize)))
        })
    }

    /// Vertices at distance exactly `n`.
    pub fn sphere(&self, n: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.dist[v] == n)
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.radius as usize + 1];
        for &d in &self.dist {
            s[d as usize] += 1;
        }
        s
    }

    pub fn format_vertex(&self, v: usize) -> String {
        self.presentation.format_word(&self.vertices[v])
    }

    /// Left translate `g·v`, if it lands in the ball.
    pub fn translate(&self, g: &GroupElement, v: usize) -> Result<Option<usize>, GroupError> {
        self.find(&g.word.concat(&self.vertices[v]))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ball {\n  node [shape=point];\n");
        for (v, m, w) in self.edges() {
            // each undirected edge once; loops and multi-edges come from torsion moves
            if v < w || (v == w && m % 2 == 0) {
                s.push_str(&format!(
                    "  {v} -- {w} [label=\"{}\"];\n",
                    self.moves[m].label
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk form of a ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallFile {
    pub format_version: u32,
    pub ball_id: String,
    pub presentation: GroupPresentation,
    pub radius: u32,
    pub moves: Vec<MoveFile>,
    pub vertices: Vec<String>,
    pub distances: Vec<u32>,
    /// `[v, move, w]` with `w = v·move`.
    pub edges: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveFile {
    pub label: String,
    pub word: String,
}

pub const BALL_FORMAT_VERSION: u32 = 1;

impl From<&CayleyBall> for BallFile {
    fn from(b: &CayleyBall) -> Self {
        let p = &b.presentation;
        BallFile {
            format_version: BALL_FORMAT_VERSION,
            ball_id: b.id.clone(),
            presentation: (**p).clone(),
            radius: b.radius,
            moves: b
                .moves
                .iter()
                .map(|m| MoveFile {
                    label: m.label.clone(),
                    word: p.format_word(&m.word),
                })
                .collect(),
            vertices: b.vertices.iter().map(|w| p.format_word(w)).collect(),
            distances: b.dist.clone(),
            edges: b.edges().map(|(v, m, w)| [v, m, w]).collect(),
        }
    }
}

impl TryFrom<BallFile> for CayleyBall {
    type Error = GroupError;

    fn try_from(f: BallFile) -> Result<Self, GroupError> {
        if f.format_version != BALL_FORMAT_VERSION {
            return Err(GroupError::Malformed(format!(
                "ball format version {} (expected {BALL_FORMAT_VERSION})",
                f.format_version
            )));
        }
        let p = Arc::new(f.presentation);
        let moves = f
            .moves
            .iter()
            .map(|m| {
                Ok(Move {
                    label: m.label.clone(),
                    word: p.parse_word(&m.word)?,
                })
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        let vertices = f
            .vertices
            .iter()
            .map(|s| p.parse_word(s))
            .collect::<Result<Vec<_>, _>>()?;
        if f.distances.len() != vertices.len() {
            return Err(GroupError::Malformed("distance table length mismatch".into()));
        }
        let mut index = HashMap::new();
        for (i, w) in vertices.iter().enumerate() {
            if p.normal_form(w)? != *w {
                return Err(GroupError::Malformed(format!(
                    "vertex {i} is not in normal form"
                )));
            }
            if index.insert(w.clone(), i as u32).is_some() {
                return Err(GroupError::Malformed(format!("duplicate vertex {i}")));
            }
        }
        let mut adjacency = vec![vec![None; moves.len()]; vertices.len()];
        for [v, m, w] in f.edges {
            if v >= vertices.len() || w >= vertices.len() || m >= moves.len() {
                return Err(GroupError::Malformed(format!("edge [{v},{m},{w}] out of range")));
            }
            adjacency[v][m] = Some(w as u32);
        }
        Ok(CayleyBall {
            presentation: p,
            id: f.ball_id,
            radius: f.radius,
            moves,
            vertices,
            dist: f.distances,
            adjacency,
            index,
        })
    }
}

impl Serialize for CayleyBall {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BallFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CayleyBall {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let f = BallFile::deserialize(deserializer)?;
        CayleyBall::try_from(f).map_err(serde::de::Error::custom)
    }
}
