use std::sync::Arc;

use cubulate::group::{Builtin, CayleyBall, GroupPresentation, SimpleGraph, SURFACE_GENUS2_RELATOR};
use proptest::prelude::*;

fn inv(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

fn free_reduce(w: &[char]) -> Vec<char> {
    let mut out: Vec<char> = Vec::with_capacity(w.len());
    for &c in w {
        if out.last() == Some(&inv(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Dehn's algorithm for a single relator with small cancellation C'(1/6).
struct Dehn {
    pieces: Vec<Vec<char>>,
}

impl Dehn {
    fn new(relator: &str) -> Self {
        let r: Vec<char> = relator.chars().collect();
        let r_inv: Vec<char> = r.iter().rev().map(|&c| inv(c)).collect();
        let mut pieces = Vec::new();
        for base in [r, r_inv] {
            for i in 0..base.len() {
                let mut c = base[i..].to_vec();
                c.extend_from_slice(&base[..i]);
                pieces.push(c);
            }
        }
        Dehn { pieces }
    }

    fn reduce(&self, w: &[char]) -> Vec<char> {
        let mut w = free_reduce(w);
        'outer: loop {
            for cyc in &self.pieces {
                let n = cyc.len();
                for k in (n / 2 + 1..=n).rev() {
                    let prefix = &cyc[..k];
                    if let Some(pos) = w.windows(k).position(|win| win == prefix) {
                        let rest: Vec<char> = cyc[k..].iter().rev().map(|&c| inv(c)).collect();
                        let mut next = w[..pos].to_vec();
                        next.extend(rest);
                        next.extend_from_slice(&w[pos + k..]);
                        w = free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    fn equal(&self, u: &[char], v: &[char]) -> bool {
        let mut w: Vec<char> = u.iter().rev().map(|&c| inv(c)).collect();
        w.extend_from_slice(v);
        self.reduce(&w).is_empty()
    }
}

fn reduced_words(letters: &[char], max: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in letters {
                if w.last() == Some(&inv(c)) {
                    continue;
                }
                let mut x: Vec<char> = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn surface() -> Arc<GroupPresentation> {
    Arc::new(GroupPresentation::builtin(Builtin::SurfaceGenus2).unwrap())
}

#[test]
fn genus_two_ball_matches_dehn_oracle() {
    let p = surface();
    let ball = CayleyBall::build(Arc::clone(&p), 3).unwrap();
    assert_eq!(ball.len(), 457);
    let dehn = Dehn::new(SURFACE_GENUS2_RELATOR);
    let forms: Vec<Vec<char>> = (0..ball.len())
        .map(|v| ball.format_vertex(v).chars().collect())
        .collect();
    // pairwise distinct
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            assert!(!dehn.equal(&forms[i], &forms[j]), "{:?} = {:?}", forms[i], forms[j]);
        }
    }
    // geodesic: nothing shorter represents the same element
    let letters: Vec<char> = "aAbBcCdD".chars().collect();
    let short = reduced_words(&letters, 2);
    for f in &forms {
        for w in short.iter().filter(|w| w.len() < f.len()) {
            assert!(!dehn.equal(f, w), "{f:?} has the shorter form {w:?}");
        }
    }
}

#[test]
fn genus_two_words_equal_their_normal_forms() {
    let p = surface();
    let dehn = Dehn::new(SURFACE_GENUS2_RELATOR);
    let letters: Vec<char> = "aAbBcCdD".chars().collect();
    for w in reduced_words(&letters, 4) {
        let s: String = w.iter().collect();
        let nf = p.format(&p.element(&s).unwrap());
        let nf: Vec<char> = if nf == "1" { Vec::new() } else { nf.chars().collect() };
        assert!(nf.len() <= w.len());
        assert!(dehn.equal(&w, &nf), "{s} vs {nf:?}");
    }
}

#[test]
fn sphere_sizes() {
    let ball = |b, r| CayleyBall::build(Arc::new(GroupPresentation::builtin(b).unwrap()), r).unwrap();
    assert_eq!(ball(Builtin::FreeGroup { rank: 2 }, 3).sphere_sizes(), vec![1, 4, 12, 36]);
    assert_eq!(ball(Builtin::FreeAbelian { rank: 2 }, 4).sphere_sizes(), vec![1, 4, 8, 12, 16]);
    assert_eq!(ball(Builtin::FreeAbelian { rank: 1 }, 5).len(), 11);
    // ℤ/2 * ℤ/2 * ℤ/2 with no commuting pairs is virtually free
    let racg = ball(
        Builtin::RightAngledCoxeter {
            graph: SimpleGraph::new(3, vec![]).unwrap(),
        },
        3,
    );
    assert_eq!(racg.sphere_sizes(), vec![1, 3, 6, 12]);
}

#[test]
fn builtins_have_no_unresolved_critical_pairs() {
    for b in [
        Builtin::FreeGroup { rank: 2 },
        Builtin::FreeAbelian { rank: 3 },
        Builtin::SurfaceGenus2,
    ] {
        let p = GroupPresentation::builtin(b).unwrap();
        assert!(p.unresolved_critical_pairs().unwrap().is_empty());
    }
}

#[test]
fn ball_json_round_trip() {
    let p = surface();
    let ball = CayleyBall::build(p, 2).unwrap();
    let text = serde_json::to_string(&ball).unwrap();
    let back: CayleyBall = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    assert_eq!(back.len(), ball.len());
}

fn presentations() -> Vec<GroupPresentation> {
    vec![
        GroupPresentation::builtin(Builtin::FreeGroup { rank: 2 }).unwrap(),
        GroupPresentation::builtin(Builtin::FreeAbelian { rank: 2 }).unwrap(),
        GroupPresentation::builtin(Builtin::SurfaceGenus2).unwrap(),
        GroupPresentation::builtin(Builtin::RightAngledArtin {
            graph: SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap(),
        })
        .unwrap(),
        GroupPresentation::builtin(Builtin::RightAngledCoxeter {
            graph: SimpleGraph::cycle(5),
        })
        .unwrap(),
    ]
}

fn word_strategy() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>, Vec<usize>)> {
    (
        0usize..5,
        prop::collection::vec(0usize..8, 0..8),
        prop::collection::vec(0usize..8, 0..8),
        prop::collection::vec(0usize..8, 0..8),
    )
}

fn word_of(p: &GroupPresentation, idx: &[usize]) -> String {
    let names = p.alphabet().names();
    idx.iter().map(|&i| names[i % names.len()].as_str()).collect::<Vec<_>>().join("")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_a_group_law((k, x, y, z) in word_strategy()) {
        let ps = presentations();
        let p = &ps[k];
        let (a, b, c) = (
            p.element(&word_of(p, &x)).unwrap(),
            p.element(&word_of(p, &y)).unwrap(),
            p.element(&word_of(p, &z)).unwrap(),
        );
        let ab_c = p.multiply(&p.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = p.multiply(&a, &p.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        let ai = p.invert(&a).unwrap();
        prop_assert!(p.multiply(&a, &ai).unwrap().is_identity());
        prop_assert_eq!(p.element_of(a.word()).unwrap(), a.clone());
        prop_assert_eq!(p.distance(&a, &b).unwrap(), p.distance(&b, &a).unwrap());
        prop_assert!(a.length() <= x.len());
    }

    #[test]
    fn ball_is_a_graph_ball(k in 0usize..5) {
        let ps = presentations();
        let p = Arc::new(ps[k].clone());
        let ball = CayleyBall::build(Arc::clone(&p), 2).unwrap();
        for v in 0..ball.len() {
            prop_assert_eq!(ball.dist(v) as usize, ball.vertex(v).len());
            for w in ball.neighbors(v) {
                prop_assert!(ball.neighbors(w).any(|x| x == v));
                prop_assert!(ball.dist(v).abs_diff(ball.dist(w)) <= 1);
            }
            let g = ball.element(v);
            for u in 0..ball.len() {
                let gu = p.multiply(&g, &ball.element(u)).unwrap();
                prop_assert_eq!(ball.translate(&g, u).unwrap(), ball.index_of_element(&gu));
            }
        }
    }
}
