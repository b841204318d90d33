use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DualComplex;

pub const MEDIAN_VERTEX_LIMIT: usize = 2000;

/// A triple without exactly one median. `medians` is empty or has several
/// entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianFailure {
    pub triple: [usize; 3],
    pub medians: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianReport {
    pub vertices: usize,
    pub triples_checked: u64,
    /// First failing triple in lexicographic order.
    pub failure: Option<MedianFailure>,
    /// Set when the graph was too large to check.
    pub skipped: bool,
}

impl MedianReport {
    pub fn is_median(&self) -> bool {
        !self.skipped && self.failure.is_none()
    }
}

fn all_distances(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    (0..n)
        .into_par_iter()
        .map(|s| {
            let mut d = vec![u32::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if d[y] == u32::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

/// Checks that every vertex triple of a graph has a unique median, the
/// unique vertex lying on geodesics between all three pairs.
pub fn check_median_graph(adj: &[Vec<usize>]) -> MedianReport {
    let n = adj.len();
    if n > MEDIAN_VERTEX_LIMIT {
        return MedianReport {
            vertices: n,
            triples_checked: 0,
            failure: None,
            skipped: true,
        };
    }
    let d = all_distances(adj);
    let on_geodesic = |x: usize, y: usize, m: usize| {
        let (a, b, c) = (d[x][m], d[m][y], d[x][y]);
        a != u32::MAX && b != u32::MAX && c != u32::MAX && a + b == c
    };
    let first_failure = (0..n)
        .into_par_iter()
        .map(|x| {
            // intervals from x, as bitsets
            let intervals: Vec<FixedBitSet> = (0..n)
                .map(|y| {
                    let mut s = FixedBitSet::with_capacity(n);
                    for m in 0..n {
                        if on_geodesic(x, y, m) {
                            s.insert(m);
                        }
                    }
                    s
                })
                .collect();
            for y in x + 1..n {
                for z in y + 1..n {
                    let mut cand = intervals[y].clone();
                    cand.intersect_with(&intervals[z]);
                    let medians: Vec<usize> =
                        cand.ones().filter(|&m| on_geodesic(y, z, m)).collect();
                    if medians.len() != 1 {
                        return Some(MedianFailure {
                            triple: [x, y, z],
                            medians,
                        });
                    }
                }
            }
            None
        })
        .find_first(Option::is_some)
        .flatten();
    let n64 = n as u64;
    let total = if n < 3 { 0 } else { n64 * (n64 - 1) * (n64 - 2) / 6 };
    MedianReport {
        vertices: n,
        triples_checked: total,
        failure: first_failure,
        skipped: false,
    }
}

/// Median check of the 1-skeleton of a dual complex.
pub fn check_median(dc: &DualComplex) -> MedianReport {
    check_median_graph(&dc.adjacency())
}
