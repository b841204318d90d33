use super::{Letter, Word};

/// Normal forms for right-angled Artin and Coxeter groups.
///
/// A word is reduced in the partially commutative sense (a letter cancels
/// against an inverse it can be commuted next to), then the reduced trace
/// is linearised greedily by smallest available letter, which yields the
/// shortlex-least geodesic for the element.
#[derive(Clone, Debug)]
pub(crate) struct TraceReducer {
    generator_of: Vec<usize>,
    inverse: Vec<Letter>,
    commute: Vec<Vec<bool>>,
}

impl TraceReducer {
    pub(crate) fn new(generator_of: Vec<usize>, inverse: Vec<Letter>, commute: Vec<Vec<bool>>) -> Self {
        TraceReducer {
            generator_of,
            inverse,
            commute,
        }
    }

    fn independent(&self, x: Letter, y: Letter) -> bool {
        let (gx, gy) = (self.generator_of[x as usize], self.generator_of[y as usize]);
        gx != gy && self.commute[gx][gy]
    }

    pub(crate) fn reduce(&self, w: &[Letter]) -> Word {
        let mut reduced: Vec<Letter> = Vec::with_capacity(w.len());
        for &x in w {
            let mut j = reduced.len();
            let mut cancel = None;
            while j > 0 {
                let y = reduced[j - 1];
                if self.independent(x, y) {
                    j -= 1;
                    continue;
                }
                if y == self.inverse[x as usize] {
                    cancel = Some(j - 1);
                }
                break;
            }
            match cancel {
                Some(k) => {
                    reduced.remove(k);
                }
                None => reduced.push(x),
            }
        }
        Word(self.lex_least(&reduced))
    }

    fn lex_least(&self, w: &[Letter]) -> Vec<Letter> {
        let n = w.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<usize> = None;
            for i in 0..n {
                if placed[i] {
                    continue;
                }
                let blocked = (0..i).any(|j| !placed[j] && !self.independent(w[j], w[i]));
                if blocked {
                    continue;
                }
                if best.is_none_or(|b| w[i] < w[b]) {
                    best = Some(i);
                }
            }
            let b = best.expect("a trace always has a minimal letter");
            placed[b] = true;
            out.push(w[b]);
        }
        out
    }
}
