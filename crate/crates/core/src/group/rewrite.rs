use std::collections::HashMap;

use super::{GroupError, Letter, Word};

/// A string rewriting system whose rules all strictly decrease shortlex order.
#[derive(Clone, Debug)]
pub(crate) struct RewriteSystem {
    rules: Vec<(Word, Word)>,
    lookup: HashMap<Vec<Letter>, usize>,
    max_lhs: usize,
}

/// A critical pair whose two one-step reducts reduce to different
/// irreducible words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedPair {
    pub overlap: Word,
    pub left: Word,
    pub right: Word,
}

impl RewriteSystem {
    pub(crate) fn new(rules: Vec<(Word, Word)>) -> Result<Self, GroupError> {
        let mut lookup = HashMap::new();
        let mut max_lhs = 0;
        for (i, (lhs, rhs)) in rules.iter().enumerate() {
            if lhs.is_empty() {
                return Err(GroupError::Malformed("rule with empty left side".into()));
            }
            if rhs >= lhs {
                return Err(GroupError::NonTerminating { rule: i });
            }
            if lookup.insert(lhs.0.clone(), i).is_some() {
                return Err(GroupError::Malformed(format!(
                    "two rules share left side {lhs}"
                )));
            }
            max_lhs = max_lhs.max(lhs.len());
        }
        Ok(RewriteSystem {
            rules,
            lookup,
            max_lhs,
        })
    }

    /// Reduces to an irreducible descendant. The output stack is kept
    /// irreducible, so each incoming letter only needs its suffixes checked.
    pub(crate) fn reduce(&self, w: &[Letter], budget: usize) -> Result<Word, GroupError> {
        let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
        // pending input, consumed from the back
        let mut input: Vec<Letter> = w.iter().rev().copied().collect();
        let mut steps = 0usize;
        while let Some(x) = input.pop() {
            stack.push(x);
            let top = stack.len();
            let mut hit = None;
            for l in 1..=self.max_lhs.min(top) {
                if let Some(&r) = self.lookup.get(&stack[top - l..]) {
                    hit = Some((l, r));
                    break;
                }
            }
            if let Some((l, r)) = hit {
                steps += 1;
                if steps > budget {
                    return Err(GroupError::Divergence { budget });
                }
                stack.truncate(top - l);
                input.extend(self.rules[r].1 .0.iter().rev());
            }
        }
        Ok(Word(stack))
    }

    /// Checks every overlap and inclusion between left sides.
    pub(crate) fn critical_pairs(&self, budget: usize) -> Result<Vec<UnresolvedPair>, GroupError> {
        let mut bad = Vec::new();
        for (l1, r1) in &self.rules {
            for (l2, r2) in &self.rules {
                // proper overlaps: suffix of l1 equals prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1.0[l1.len() - k..] == l2.0[..k] {
                        let overlap = Word([&l1.0[..], &l2.0[k..]].concat());
                        let a = [&r1.0[..], &l2.0[k..]].concat();
                        let b = [&l1.0[..l1.len() - k], &r2.0[..]].concat();
                        self.compare(overlap, &a, &b, budget, &mut bad)?;
                    }
                }
                // l2 a factor of l1
                if l2.len() <= l1.len() && l1 != l2 {
                    for i in 0..=l1.len() - l2.len() {
                        if l1.0[i..i + l2.len()] == l2.0[..] {
                            let b = [&l1.0[..i], &r2.0[..], &l1.0[i + l2.len()..]].concat();
                            self.compare(l1.clone(), &r1.0, &b, budget, &mut bad)?;
                        }
                    }
                }
            }
        }
        Ok(bad)
    }

    fn compare(
        &self,
        overlap: Word,
        a: &[Letter],
        b: &[Letter],
        budget: usize,
        bad: &mut Vec<UnresolvedPair>,
    ) -> Result<(), GroupError> {
        let ra = self.reduce(a, budget)?;
        let rb = self.reduce(b, budget)?;
        if ra != rb {
            bad.push(UnresolvedPair {
                overlap,
                left: ra,
                right: rb,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[Letter]) -> Word {
        Word(v.to_vec())
    }

    #[test]
    fn free_cancellation() {
        let rs = RewriteSystem::new(vec![
            (w(&[0, 1]), w(&[])),
            (w(&[1, 0]), w(&[])),
        ])
        .unwrap();
        assert_eq!(rs.reduce(&[0, 0, 1, 2, 1, 0], 100).unwrap(), w(&[0, 2]));
        assert!(rs.critical_pairs(100).unwrap().is_empty());
    }

    #[test]
    fn rejects_increasing_rule() {
        let r = RewriteSystem::new(vec![(w(&[0]), w(&[0, 0]))]);
        assert!(matches!(r, Err(GroupError::NonTerminating { rule: 0 })));
    }

    #[test]
    fn budget_is_enforced() {
        let rs = RewriteSystem::new(vec![(w(&[0, 1]), w(&[]))]).unwrap();
        let long: Vec<Letter> = std::iter::repeat_n([0, 1], 20).flatten().collect();
        assert!(matches!(
            rs.reduce(&long, 5),
            Err(GroupError::Divergence { budget: 5 })
        ));
    }

    #[test]
    fn detects_non_confluence() {
        // ab -> 1 and ba -> c do not agree on aba
        let rs = RewriteSystem::new(vec![
            (w(&[0, 1]), w(&[])),
            (w(&[1, 0]), w(&[2])),
        ])
        .unwrap();
        assert!(!rs.critical_pairs(100).unwrap().is_empty());
    }
}
