//! Parser for group description files.
//!
//! ```text
//! # free abelian group of rank 2, written out by hand
//! [generators]
//! a A b B
//!
//! [inverses]
//! a = A
//! b = B
//!
//! [rules]
//! b a -> a b
//! b A -> A b
//! B a -> a B
//! B A -> A B
//!
//! [options]
//! confluent = true
//! rewrite_budget = 10000
//! ```
//!
//! A `[builtin]` section replaces the other three:
//!
//! ```text
//! [builtin]
//! kind = raag          # free_group | free_abelian | surface_genus2 | raag | racg
//! vertices = 4         # raag / racg
//! edges = 0-1 1-2 2-3  # raag / racg
//! rank = 2             # free_group / free_abelian
//! ```

use std::collections::BTreeMap;

use super::{
    Alphabet, Builtin, GroupError, GroupPresentation, Letter, SimpleGraph, DEFAULT_REWRITE_BUDGET,
};

#[derive(Default)]
struct Sections {
    generators: Vec<String>,
    inverses: Vec<(String, String)>,
    rules: Vec<(String, String)>,
    options: BTreeMap<String, String>,
    builtin: Option<BTreeMap<String, String>>,
}

fn key_value(line: &str, lineno: usize) -> Result<(String, String), GroupError> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| GroupError::Malformed(format!("line {lineno}: expected key = value")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn sections(text: &str) -> Result<Sections, GroupError> {
    let mut s = Sections::default();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !["generators", "inverses", "rules", "options", "builtin"].contains(&name.as_str()) {
                return Err(GroupError::Malformed(format!(
                    "line {lineno}: unknown section [{name}]"
                )));
            }
            if name == "builtin" {
                s.builtin.get_or_insert_with(BTreeMap::new);
            }
            current = Some(name);
            continue;
        }
        match current.as_deref() {
            None => {
                return Err(GroupError::Malformed(format!(
                    "line {lineno}: content before the first section"
                )))
            }
            Some("generators") => s
                .generators
                .extend(line.split_whitespace().map(str::to_string)),
            Some("inverses") => s.inverses.push(key_value(line, lineno)?),
            Some("rules") => {
                let (l, r) = line.split_once("->").ok_or_else(|| {
                    GroupError::Malformed(format!("line {lineno}: expected `lhs -> rhs`"))
                })?;
                s.rules.push((l.trim().to_string(), r.trim().to_string()));
            }
            Some("options") => {
                let (k, v) = key_value(line, lineno)?;
                s.options.insert(k, v);
            }
            Some(_) => {
                let (k, v) = key_value(line, lineno)?;
                s.builtin.get_or_insert_with(BTreeMap::new).insert(k, v);
            }
        }
    }
    Ok(s)
}

fn number(map: &BTreeMap<String, String>, key: &str) -> Result<usize, GroupError> {
    map.get(key)
        .ok_or_else(|| GroupError::Malformed(format!("builtin needs `{key}`")))?
        .parse()
        .map_err(|_| GroupError::Malformed(format!("`{key}` is not a number")))
}

fn graph(map: &BTreeMap<String, String>) -> Result<SimpleGraph, GroupError> {
    let vertices = number(map, "vertices")?;
    let mut edges = Vec::new();
    if let Some(list) = map.get("edges") {
        for tok in list.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let (u, v) = tok
                .split_once('-')
                .ok_or_else(|| GroupError::Malformed(format!("bad edge {tok:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| GroupError::Malformed(format!("bad edge {tok:?}")))
            };
            edges.push((parse(u)?, parse(v)?));
        }
    }
    SimpleGraph::new(vertices, edges)
}

/// Parses the contents of a group file.
pub fn parse_group_file(text: &str) -> Result<GroupPresentation, GroupError> {
    let s = sections(text)?;
    let budget = match s.options.get("rewrite_budget") {
        Some(v) => v
            .parse()
            .map_err(|_| GroupError::Malformed("rewrite_budget is not a number".into()))?,
        None => DEFAULT_REWRITE_BUDGET,
    };
    if let Some(b) = &s.builtin {
        if !s.generators.is_empty() || !s.rules.is_empty() || !s.inverses.is_empty() {
            return Err(GroupError::Malformed(
                "[builtin] cannot be combined with generators, inverses or rules".into(),
            ));
        }
        let kind = b
            .get("kind")
            .ok_or_else(|| GroupError::Malformed("[builtin] needs `kind`".into()))?;
        let tag = match kind.as_str() {
            "free_group" => Builtin::FreeGroup {
                rank: number(b, "rank")?,
            },
            "free_abelian" => Builtin::FreeAbelian {
                rank: number(b, "rank")?,
            },
            "surface_genus2" => Builtin::SurfaceGenus2,
            "raag" => Builtin::RightAngledArtin { graph: graph(b)? },
            "racg" => Builtin::RightAngledCoxeter { graph: graph(b)? },
            other => return Err(GroupError::Malformed(format!("unknown builtin {other:?}"))),
        };
        return Ok(GroupPresentation::builtin(tag)?.with_rewrite_budget(budget));
    }
    if s.generators.is_empty() {
        return Err(GroupError::Malformed("no [generators] given".into()));
    }
    let n = s.generators.len();
    let mut inverse: Vec<Letter> = (0..n as Letter).collect();
    let find = |name: &str| {
        s.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| GroupError::Malformed(format!("inverse of unknown letter {name:?}")))
    };
    for (x, y) in &s.inverses {
        let (i, j) = (find(x)?, find(y)?);
        inverse[i] = j as Letter;
        inverse[j] = i as Letter;
    }
    let alphabet = Alphabet::new(s.generators.clone(), inverse)?;
    let rules = s
        .rules
        .iter()
        .map(|(l, r)| Ok((alphabet.parse(l)?, alphabet.parse(r)?)))
        .collect::<Result<Vec<_>, GroupError>>()?;
    let confluent = matches!(
        s.options.get("confluent").map(String::as_str),
        Some("true") | Some("yes")
    );
    Ok(GroupPresentation::from_rules(alphabet, rules, confluent)?.with_rewrite_budget(budget))
}
