use std::cmp::Ordering;
use std::fmt;

use super::GroupError;

/// Index of a letter in an [`Alphabet`].
pub type Letter = u8;

/// A word over an alphabet, ordered shortlex (length first, then
/// lexicographically by letter index).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All cyclic rotations, starting with the word itself.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.len().max(1);
        (0..n).map(move |i| {
            let mut v = self.0[i.min(self.len())..].to_vec();
            v.extend_from_slice(&self.0[..i.min(self.len())]);
            Word(v)
        })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Ordered generating alphabet together with its formal-inverse involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    inverse: Vec<Letter>,
}

impl Alphabet {
    /// `inverse[i]` is the letter formally inverse to letter `i`. The map
    /// must be an involution; fixed points are self-inverse generators.
    pub fn new(names: Vec<String>, inverse: Vec<Letter>) -> Result<Self, GroupError> {
        if names.is_empty() {
            return Err(GroupError::Malformed("empty alphabet".into()));
        }
        if names.len() > Letter::MAX as usize {
            return Err(GroupError::Malformed(format!(
                "alphabet of {} letters exceeds {}",
                names.len(),
                Letter::MAX
            )));
        }
        if inverse.len() != names.len() {
            return Err(GroupError::Malformed(
                "inverse table length differs from alphabet length".into(),
            ));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace()) {
                return Err(GroupError::Malformed(format!("bad letter name {name:?}")));
            }
            if name == "1" || name.contains("^-1") || name.contains('⁻') {
                return Err(GroupError::Malformed(format!(
                    "letter name {name:?} collides with word syntax"
                )));
            }
            if names[..i].contains(name) {
                return Err(GroupError::Malformed(format!("duplicate letter {name:?}")));
            }
        }
        for (i, &j) in inverse.iter().enumerate() {
            if j as usize >= names.len() || inverse[j as usize] as usize != i {
                return Err(GroupError::Malformed(format!(
                    "inverse map is not an involution at letter {:?}",
                    names[i]
                )));
            }
        }
        Ok(Alphabet { names, inverse })
    }

    /// Generators `a, A, b, B, ...` with `A` the inverse of `a`.
    pub fn paired(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 || rank > 26 {
            return Err(GroupError::Malformed(format!("rank {rank} outside 1..=26")));
        }
        let mut names = Vec::with_capacity(2 * rank);
        let mut inverse = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            let c = (b'a' + i as u8) as char;
            names.push(c.to_string());
            names.push(c.to_ascii_uppercase().to_string());
            inverse.push((2 * i + 1) as Letter);
            inverse.push((2 * i) as Letter);
        }
        Alphabet::new(names, inverse)
    }

    /// Self-inverse generators `a, b, c, ...`.
    pub fn involutive(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 || rank > 26 {
            return Err(GroupError::Malformed(format!("rank {rank} outside 1..=26")));
        }
        let names = (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        let inverse = (0..rank as Letter).collect();
        Alphabet::new(names, inverse)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l as usize]
    }

    pub fn inverse_table(&self) -> &[Letter] {
        &self.inverse
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }

    pub fn check(&self, w: &Word) -> Result<(), GroupError> {
        match w.0.iter().find(|&&l| l as usize >= self.len()) {
            Some(l) => Err(GroupError::Malformed(format!(
                "letter index {l} outside alphabet of size {}",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    /// Formal inverse: reverse and invert letters. No reduction.
    pub fn invert(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&l| self.inverse(l)).collect())
    }

    /// Parses a word. Letters may be written back to back (`abA`) or
    /// separated by whitespace, `*` or `·`; a suffix `^-1` or `⁻¹` inverts
    /// the preceding letter. `1` and the empty string denote the identity.
    pub fn parse(&self, s: &str) -> Result<Word, GroupError> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::identity());
        }
        let mut out = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() || c == '*' || c == '·' {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            // longest matching letter name
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            let Some((i, name)) = best else {
                return Err(GroupError::Malformed(format!(
                    "symbol at {rest:?} is not in the alphabet ({})",
                    self.names.join(" ")
                )));
            };
            rest = &rest[name.len()..];
            let mut l = i as Letter;
            for suffix in ["^-1", "⁻¹"] {
                if let Some(r) = rest.strip_prefix(suffix) {
                    rest = r;
                    l = self.inverse(l);
                    break;
                }
            }
            out.push(l);
        }
        Ok(Word(out))
    }

    /// Renders a word; single-character names are concatenated, longer
    /// names are space separated. The identity renders as the empty string.
    pub fn format(&self, w: &Word) -> String {
        let compact = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = w.0.iter().map(|&l| self.name(l)).collect();
        if compact {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_order() {
        let a = Word(vec![0]);
        let big_a = Word(vec![1]);
        let ab = Word(vec![0, 2]);
        assert!(Word::identity() < a);
        assert!(a < big_a);
        assert!(big_a < ab);
    }

    #[test]
    fn parse_forms() {
        let al = Alphabet::paired(2).unwrap();
        assert_eq!(al.parse("a a⁻¹ b").unwrap(), Word(vec![0, 1, 2]));
        assert_eq!(al.parse("ab^-1").unwrap(), Word(vec![0, 3]));
        assert_eq!(al.parse("A^-1").unwrap(), Word(vec![0]));
        assert_eq!(al.parse("1").unwrap(), Word::identity());
        assert!(al.parse("x").is_err());
        assert_eq!(al.format(&Word(vec![0, 3])), "aB");
    }

    #[test]
    fn rejects_non_involution() {
        let r = Alphabet::new(vec!["x".into(), "y".into()], vec![1, 1]);
        assert!(r.is_err());
    }

    #[test]
    fn rotations_cover_word() {
        let w = Word(vec![0, 2, 1]);
        let r: Vec<Word> = w.rotations().collect();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], Word(vec![2, 1, 0]));
    }
}
