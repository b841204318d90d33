//! Finite-scale group arithmetic.
//!
//! Groups are given by a terminating string rewriting system over an
//! alphabet with formal inverses. Normal forms are shortlex-least
//! representatives, so the length of a normal form is the word length of
//! the element. Right-angled Artin and Coxeter builtins use a
//! partially-commutative reducer instead of rules, since their shortlex
//! rewriting systems are infinite in general.

mod ball;
mod file;
mod rewrite;
mod trace;
mod word;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::{BallFile, CayleyBall, Move, BALL_FORMAT_VERSION};
pub use file::parse_group_file;
pub use rewrite::UnresolvedPair;
pub use word::{Alphabet, Letter, Word};

use rewrite::RewriteSystem;
use trace::TraceReducer;

/// Default number of rule applications allowed while reducing one word.
pub const DEFAULT_REWRITE_BUDGET: usize = 10_000;
/// Default cap on the number of vertices of a Cayley ball.
pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("rule {rule} does not decrease shortlex order")]
    NonTerminating { rule: usize },
    #[error("rewriting did not terminate within the budget of {budget} steps")]
    Divergence { budget: usize },
    #[error("builtin system is not locally confluent: {0} unresolved critical pairs")]
    NotConfluent(usize),
    #[error("ball exceeded the vertex budget ({count} vertices when the budget of {budget} was hit)")]
    Size { count: usize, budget: usize },
}

/// An undirected simple graph on vertices `0..vertices`, used to define
/// right-angled groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GroupError> {
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices || u == v {
                return Err(GroupError::Malformed(format!("bad graph edge {u}-{v}")));
            }
        }
        Ok(SimpleGraph { vertices, edges })
    }

    pub fn cycle(n: usize) -> Self {
        SimpleGraph {
            vertices: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.vertices]; self.vertices];
        for &(u, v) in &self.edges {
            m[u][v] = true;
            m[v][u] = true;
        }
        m
    }
}

/// The groups shipped with the toolkit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Builtin {
    FreeGroup { rank: usize },
    FreeAbelian { rank: usize },
    /// ⟨a, b, c, d | [a,c][b,d]⟩ with the order a A b B c C d D.
    SurfaceGenus2,
    RightAngledCoxeter { graph: SimpleGraph },
    RightAngledArtin { graph: SimpleGraph },
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::FreeGroup { rank } => write!(f, "free_group({rank})"),
            Builtin::FreeAbelian { rank } => write!(f, "free_abelian({rank})"),
            Builtin::SurfaceGenus2 => write!(f, "surface_genus2"),
            Builtin::RightAngledCoxeter { graph } => {
                write!(f, "racg({};{})", graph.vertices, edge_list(graph))
            }
            Builtin::RightAngledArtin { graph } => {
                write!(f, "raag({};{})", graph.vertices, edge_list(graph))
            }
        }
    }
}

/// Parses the [`Display`](fmt::Display) form: `free_group(2)`,
/// `free_abelian(3)`, `surface_genus2`, `raag(4;0-1,1-2)`, `racg(5;0-1)`.
impl std::str::FromStr for Builtin {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Malformed(format!("unknown builtin group {s:?}"));
        let s = s.trim();
        if s == "surface_genus2" {
            return Ok(Builtin::SurfaceGenus2);
        }
        let (kind, args) = s
            .strip_suffix(')')
            .and_then(|t| t.split_once('('))
            .ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let graph = |args: &str| -> Result<SimpleGraph, GroupError> {
            let (n, edges) = args.split_once(';').unwrap_or((args, ""));
            let edges = edges
                .split(',')
                .filter(|e| !e.trim().is_empty())
                .map(|e| {
                    let (u, v) = e.split_once('-').ok_or_else(bad)?;
                    Ok((num(u)?, num(v)?))
                })
                .collect::<Result<Vec<_>, GroupError>>()?;
            SimpleGraph::new(num(n)?, edges)
        };
        match kind.trim() {
            "free_group" => Ok(Builtin::FreeGroup { rank: num(args)? }),
            "free_abelian" => Ok(Builtin::FreeAbelian { rank: num(args)? }),
            "raag" => Ok(Builtin::RightAngledArtin { graph: graph(args)? }),
            "racg" => Ok(Builtin::RightAngledCoxeter { graph: graph(args)? }),
            _ => Err(bad()),
        }
    }
}

fn edge_list(g: &SimpleGraph) -> String {
    g.edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Shortlex-complete system for the genus-2 surface group, found by
/// Knuth-Bendix completion and re-verified at construction.
const SURFACE_GENUS2_RULES: [(&str, &str); 8] = [
    ("caCA", "bdBD"),
    ("cACb", "AdbD"),
    ("CAdb", "ACbd"),
    ("CbdB", "aCAd"),
    ("dbDB", "acAC"),
    ("dBDa", "BcaC"),
    ("DacA", "bDBc"),
    ("DBca", "BDac"),
];

/// The defining relator of [`Builtin::SurfaceGenus2`].
pub const SURFACE_GENUS2_RELATOR: &str = "acACbdBD";

#[derive(Clone, Debug)]
enum Reducer {
    Rules(RewriteSystem),
    Trace(TraceReducer),
}

/// A group given by generators, formal inverses and rewrite rules.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    alphabet: Alphabet,
    rules: Vec<(Word, Word)>,
    confluence_declared: bool,
    builtin: Option<Builtin>,
    rewrite_budget: usize,
    reducer: Reducer,
}

impl PartialEq for GroupPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.rules == other.rules
            && self.confluence_declared == other.confluence_declared
            && self.builtin == other.builtin
            && self.rewrite_budget == other.rewrite_budget
    }
}

/// A group element, always stored as its normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    word: Word,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            word: Word::identity(),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }

    /// Word length (normal forms are geodesic).
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

fn cancellation_rules(alphabet: &Alphabet) -> Vec<(Word, Word)> {
    (0..alphabet.len() as Letter)
        .map(|x| (Word(vec![x, alphabet.inverse(x)]), Word::identity()))
        .collect()
}

fn merge_rules(mut base: Vec<(Word, Word)>, extra: Vec<(Word, Word)>) -> Vec<(Word, Word)> {
    for r in extra {
        if !base.iter().any(|(l, _)| *l == r.0) {
            base.push(r);
        }
    }
    base
}

impl GroupPresentation {
    /// A user-declared rewriting system. Free cancellation rules `x x⁻¹ → 1`
    /// are added for every letter. Every rule must strictly decrease
    /// shortlex order; confluence is taken on trust when declared.
    pub fn from_rules(
        alphabet: Alphabet,
        rules: Vec<(Word, Word)>,
        confluence_declared: bool,
    ) -> Result<Self, GroupError> {
        for (l, r) in &rules {
            alphabet.check(l)?;
            alphabet.check(r)?;
        }
        let rules = merge_rules(cancellation_rules(&alphabet), rules);
        let system = RewriteSystem::new(rules.clone())?;
        Ok(GroupPresentation {
            alphabet,
            rules,
            confluence_declared,
            builtin: None,
            rewrite_budget: DEFAULT_REWRITE_BUDGET,
            reducer: Reducer::Rules(system),
        })
    }

    /// Builds a builtin group. Rule-based builtins have every critical pair
    /// checked before they are returned.
    pub fn builtin(b: Builtin) -> Result<Self, GroupError> {
        let mut p = match &b {
            Builtin::FreeGroup { rank } => {
                GroupPresentation::from_rules(Alphabet::paired(*rank)?, Vec::new(), true)?
            }
            Builtin::FreeAbelian { rank } => {
                let alphabet = Alphabet::paired(*rank)?;
                let mut rules = Vec::new();
                for i in 0..*rank {
                    for j in i + 1..*rank {
                        for x in [2 * i, 2 * i + 1] {
                            for y in [2 * j, 2 * j + 1] {
                                rules.push((
                                    Word(vec![y as Letter, x as Letter]),
                                    Word(vec![x as Letter, y as Letter]),
                                ));
                            }
                        }
                    }
                }
                GroupPresentation::from_rules(alphabet, rules, true)?
            }
            Builtin::SurfaceGenus2 => {
                let alphabet = Alphabet::paired(4)?;
                let rules = SURFACE_GENUS2_RULES
                    .iter()
                    .map(|(l, r)| Ok((alphabet.parse(l)?, alphabet.parse(r)?)))
                    .collect::<Result<Vec<_>, GroupError>>()?;
                GroupPresentation::from_rules(alphabet, rules, true)?
            }
            Builtin::RightAngledArtin { graph } => {
                let alphabet = Alphabet::paired(graph.vertices)?;
                let generator_of = (0..alphabet.len()).map(|l| l / 2).collect();
                let reducer = TraceReducer::new(
                    generator_of,
                    alphabet.inverse_table().to_vec(),
                    graph.adjacency(),
                );
                let mut rules = cancellation_rules(&alphabet);
                for &(u, v) in &graph.edges {
                    let (i, j) = (u.min(v), u.max(v));
                    for x in [2 * i, 2 * i + 1] {
                        for y in [2 * j, 2 * j + 1] {
                            rules.push((
                                Word(vec![y as Letter, x as Letter]),
                                Word(vec![x as Letter, y as Letter]),
                            ));
                        }
                    }
                }
                GroupPresentation {
                    alphabet,
                    rules,
                    confluence_declared: true,
                    builtin: None,
                    rewrite_budget: DEFAULT_REWRITE_BUDGET,
                    reducer: Reducer::Trace(reducer),
                }
            }
            Builtin::RightAngledCoxeter { graph } => {
                let alphabet = Alphabet::involutive(graph.vertices)?;
                let generator_of = (0..alphabet.len()).collect();
                let reducer = TraceReducer::new(
                    generator_of,
                    alphabet.inverse_table().to_vec(),
                    graph.adjacency(),
                );
                let mut rules = cancellation_rules(&alphabet);
                for &(u, v) in &graph.edges {
                    let (i, j) = (u.min(v), u.max(v));
                    rules.push((
                        Word(vec![j as Letter, i as Letter]),
                        Word(vec![i as Letter, j as Letter]),
                    ));
                }
                GroupPresentation {
                    alphabet,
                    rules,
                    confluence_declared: true,
                    builtin: None,
                    rewrite_budget: DEFAULT_REWRITE_BUDGET,
                    reducer: Reducer::Trace(reducer),
                }
            }
        };
        if let Reducer::Rules(system) = &p.reducer {
            let bad = system.critical_pairs(p.rewrite_budget)?;
            if !bad.is_empty() {
                return Err(GroupError::NotConfluent(bad.len()));
            }
        }
        p.builtin = Some(b);
        Ok(p)
    }

    pub fn with_rewrite_budget(mut self, budget: usize) -> Self {
        self.rewrite_budget = budget.max(1);
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub fn confluence_declared(&self) -> bool {
        self.confluence_declared
    }

    pub fn builtin_tag(&self) -> Option<&Builtin> {
        self.builtin.as_ref()
    }

    pub fn rewrite_budget(&self) -> usize {
        self.rewrite_budget
    }

    /// Short human-readable name used in ball identifiers.
    pub fn label(&self) -> String {
        match &self.builtin {
            Some(b) => b.to_string(),
            None => format!(
                "custom({};{} rules)",
                self.alphabet.names().join(" "),
                self.rules.len()
            ),
        }
    }

    /// Critical pairs of the rule system that fail to resolve. Always empty
    /// for builtins; user systems may call this to test their declaration.
    pub fn unresolved_critical_pairs(&self) -> Result<Vec<UnresolvedPair>, GroupError> {
        match &self.reducer {
            Reducer::Rules(s) => s.critical_pairs(self.rewrite_budget),
            Reducer::Trace(_) => Ok(Vec::new()),
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word, GroupError> {
        self.alphabet.check(w)?;
        match &self.reducer {
            Reducer::Rules(s) => s.reduce(&w.0, self.rewrite_budget),
            Reducer::Trace(t) => Ok(t.reduce(&w.0)),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        self.alphabet.parse(s)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    /// Parses and normalises.
    pub fn element(&self, s: &str) -> Result<GroupElement, GroupError> {
        self.element_of(&self.parse_word(s)?)
    }

    pub fn element_of(&self, w: &Word) -> Result<GroupElement, GroupError> {
        Ok(GroupElement {
            word: self.normal_form(w)?,
        })
    }

    pub fn format(&self, g: &GroupElement) -> String {
        self.format_word(&g.word)
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.element_of(&g.word.concat(&h.word))
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.element_of(&self.alphabet.invert(&g.word))
    }

    /// `g^n` for any integer `n`.
    pub fn power(&self, g: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        let base = if n < 0 { self.invert(g)? } else { g.clone() };
        let mut acc = GroupElement::identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.multiply(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Word length of `g⁻¹ h`, the Cayley graph distance.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<usize, GroupError> {
        let w = self.alphabet.invert(&g.word).concat(&h.word);
        Ok(self.normal_form(&w)?.len())
    }
}

/// Serialisable description of a presentation; builtins are stored by tag
/// and rebuilt (and re-verified) on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub inverses: Vec<String>,
    #[serde(default)]
    pub rules: Vec<(String, String)>,
    #[serde(default)]
    pub confluence_declared: bool,
    pub rewrite_budget: usize,
}

impl From<&GroupPresentation> for PresentationSpec {
    fn from(p: &GroupPresentation) -> Self {
        match &p.builtin {
            Some(b) => PresentationSpec {
                builtin: Some(b.clone()),
                generators: Vec::new(),
                inverses: Vec::new(),
                rules: Vec::new(),
                confluence_declared: true,
                rewrite_budget: p.rewrite_budget,
            },
            None => {
                let names = p.alphabet.names().to_vec();
                let inverses = (0..p.alphabet.len() as Letter)
                    .map(|l| p.alphabet.name(p.alphabet.inverse(l)).to_string())
                    .collect();
                let rules = p
                    .rules
                    .iter()
                    .map(|(l, r)| (words_spaced(&p.alphabet, l), words_spaced(&p.alphabet, r)))
                    .collect();
                PresentationSpec {
                    builtin: None,
                    generators: names,
                    inverses,
                    rules,
                    confluence_declared: p.confluence_declared,
                    rewrite_budget: p.rewrite_budget,
                }
            }
        }
    }
}

fn words_spaced(a: &Alphabet, w: &Word) -> String {
    w.0.iter().map(|&l| a.name(l)).collect::<Vec<_>>().join(" ")
}

impl TryFrom<PresentationSpec> for GroupPresentation {
    type Error = GroupError;

    fn try_from(s: PresentationSpec) -> Result<Self, GroupError> {
        let p = match s.builtin {
            Some(b) => GroupPresentation::builtin(b)?,
            None => {
                let inv = s
                    .inverses
                    .iter()
                    .map(|n| {
                        s.generators
                            .iter()
                            .position(|g| g == n)
                            .map(|i| i as Letter)
                            .ok_or_else(|| GroupError::Malformed(format!("unknown inverse {n:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let alphabet = Alphabet::new(s.generators.clone(), inv)?;
                let rules = s
                    .rules
                    .iter()
                    .map(|(l, r)| Ok((alphabet.parse(l)?, alphabet.parse(r)?)))
                    .collect::<Result<Vec<_>, GroupError>>()?;
                GroupPresentation::from_rules(alphabet, rules, s.confluence_declared)?
            }
        };
        Ok(p.with_rewrite_budget(s.rewrite_budget))
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PresentationSpec::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let spec = PresentationSpec::deserialize(deserializer)?;
        GroupPresentation::try_from(spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(p: &GroupPresentation, s: &str) -> String {
        p.format_word(&p.normal_form(&p.parse_word(s).unwrap()).unwrap())
    }

    #[test]
    fn builtin_names_round_trip() {
        for b in [
            Builtin::FreeGroup { rank: 2 },
            Builtin::FreeAbelian { rank: 3 },
            Builtin::SurfaceGenus2,
            Builtin::RightAngledArtin {
                graph: SimpleGraph::new(4, vec![(0, 1), (1, 2)]).unwrap(),
            },
            Builtin::RightAngledCoxeter {
                graph: SimpleGraph::cycle(5),
            },
        ] {
            assert_eq!(b.to_string().parse::<Builtin>().unwrap(), b);
        }
        assert!("free_group(x)".parse::<Builtin>().is_err());
    }

    #[test]
    fn normal_form_examples() {
        let f2 = GroupPresentation::builtin(Builtin::FreeGroup { rank: 2 }).unwrap();
        assert_eq!(nf(&f2, "a a⁻¹ b"), "b");
        let z2 = GroupPresentation::builtin(Builtin::FreeAbelian { rank: 2 }).unwrap();
        assert_eq!(nf(&z2, "b a"), "ab");
        let s2 = GroupPresentation::builtin(Builtin::SurfaceGenus2).unwrap();
        assert_eq!(nf(&s2, SURFACE_GENUS2_RELATOR), "");
    }

    #[test]
    fn multiply_examples() {
        let f2 = GroupPresentation::builtin(Builtin::FreeGroup { rank: 2 }).unwrap();
        let g = f2.multiply(&f2.element("ab").unwrap(), &f2.element("b⁻¹").unwrap());
        assert_eq!(f2.format(&g.unwrap()), "a");
        let z2 = GroupPresentation::builtin(Builtin::FreeAbelian { rank: 2 }).unwrap();
        let g = z2.multiply(&z2.element("a").unwrap(), &z2.element("b").unwrap());
        assert_eq!(z2.format(&g.unwrap()), "ab");
    }

    #[test]
    fn out_of_alphabet_is_malformed() {
        let f2 = GroupPresentation::builtin(Builtin::FreeGroup { rank: 2 }).unwrap();
        assert!(matches!(
            f2.normal_form(&Word(vec![9])),
            Err(GroupError::Malformed(_))
        ));
    }

    #[test]
    fn non_terminating_user_rule_rejected() {
        let a = Alphabet::paired(1).unwrap();
        let r = GroupPresentation::from_rules(a, vec![(Word(vec![0]), Word(vec![0, 0]))], true);
        assert!(matches!(r, Err(GroupError::NonTerminating { .. })));
    }

    #[test]
    fn divergence_reports_budget() {
        let f1 = GroupPresentation::builtin(Builtin::FreeGroup { rank: 1 })
            .unwrap()
            .with_rewrite_budget(3);
        let w = f1.parse_word("aAaAaAaA").unwrap();
        assert_eq!(f1.normal_form(&w), Err(GroupError::Divergence { budget: 3 }));
    }

    #[test]
    fn raag_matches_free_abelian_on_complete_graph() {
        let z3 = GroupPresentation::builtin(Builtin::FreeAbelian { rank: 3 }).unwrap();
        let g = SimpleGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let raag = GroupPresentation::builtin(Builtin::RightAngledArtin { graph: g }).unwrap();
        for s in ["cba", "cAbaB", "CCbbaA", "bcabca"] {
            assert_eq!(nf(&z3, s), nf(&raag, s), "{s}");
        }
    }

    #[test]
    fn racg_generators_are_involutions() {
        let p = GroupPresentation::builtin(Builtin::RightAngledCoxeter {
            graph: SimpleGraph::cycle(4),
        })
        .unwrap();
        assert_eq!(nf(&p, "aa"), "");
        assert_eq!(nf(&p, "ba"), "ab");
        // a and c do not commute in the 4-cycle
        assert_eq!(nf(&p, "ca"), "ca");
    }

    #[test]
    fn spec_round_trip() {
        let p = GroupPresentation::builtin(Builtin::SurfaceGenus2).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let q: GroupPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(p, q);
        let a = Alphabet::paired(1).unwrap();
        let custom = GroupPresentation::from_rules(a, vec![], false).unwrap();
        let json = serde_json::to_string(&custom).unwrap();
        let q: GroupPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(custom, q);
    }
}
