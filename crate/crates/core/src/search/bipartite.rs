//! Exact independent sets in bipartite conflict graphs.
//!
//! Odd forbidden distances over a binary alphabet split the cube into even
//! and odd weight classes, so those conflict graphs are bipartite and the
//! branch-and-bound solver is overkill: a maximum matching plus the Konig
//! construction gives the exact optimum in polynomial time.

use std::collections::VecDeque;

use crate::bitset::Bits;

/// BFS 2-coloring. Returns one side assignment, or None on an odd cycle.
pub(crate) fn two_color(adj: &[Bits]) -> Option<Vec<bool>> {
    let n = adj.len();
    let mut color = vec![false; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in adj[u].iter_ones() {
                if !seen[v] {
                    seen[v] = true;
                    color[v] = !color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

const INF: u32 = u32::MAX;

struct HopcroftKarp<'a> {
    adj: &'a [Bits],
    color: &'a [bool],
    matched: Vec<Option<usize>>,
    dist: Vec<u32>,
    dist_nil: u32,
}

impl<'a> HopcroftKarp<'a> {
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.adj.len() {
            if !self.color[u] {
                if self.matched[u].is_none() {
                    self.dist[u] = 0;
                    queue.push_back(u);
                } else {
                    self.dist[u] = INF;
                }
            }
        }
        self.dist_nil = INF;
        while let Some(u) = queue.pop_front() {
            if self.dist[u] >= self.dist_nil {
                continue;
            }
            for v in self.adj[u].iter_ones() {
                match self.matched[v] {
                    None => {
                        if self.dist_nil == INF {
                            self.dist_nil = self.dist[u] + 1;
                        }
                    }
                    Some(w) => {
                        if self.dist[w] == INF {
                            self.dist[w] = self.dist[u] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        self.dist_nil != INF
    }

    fn dfs(&mut self, u: usize) -> bool {
        for v in self.adj[u].iter_ones() {
            let advance = match self.matched[v] {
                None => self.dist_nil == self.dist[u] + 1,
                Some(w) => self.dist[w] == self.dist[u] + 1 && self.dfs(w),
            };
            if advance {
                self.matched[u] = Some(v);
                self.matched[v] = Some(u);
                return true;
            }
        }
        self.dist[u] = INF;
        false
    }
}

/// Maximum matching; `color[u] == false` marks the left side. Returns the
/// mutual partner map.
pub(crate) fn maximum_matching(adj: &[Bits], color: &[bool]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut hk = HopcroftKarp {
        adj,
        color,
        matched: vec![None; n],
        dist: vec![0; n],
        dist_nil: INF,
    };
    while hk.bfs() {
        for u in 0..n {
            if !color[u] && hk.matched[u].is_none() {
                hk.dfs(u);
            }
        }
    }
    hk.matched
}

/// Konig: with Z the set of vertices reachable from free left vertices by
/// alternating paths, (L and Z) union (R minus Z) is a maximum independent
/// set, of size V minus the matching number.
pub(crate) fn max_independent_set(adj: &[Bits], color: &[bool]) -> Vec<usize> {
    let n = adj.len();
    let matched = maximum_matching(adj, color);
    let mut reach = vec![false; n];
    let mut queue = VecDeque::new();
    for u in 0..n {
        if !color[u] && matched[u].is_none() {
            reach[u] = true;
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        if !color[u] {
            for v in adj[u].iter_ones() {
                if matched[u] != Some(v) && !reach[v] {
                    reach[v] = true;
                    queue.push_back(v);
                }
            }
        } else if let Some(w) = matched[u] {
            if !reach[w] {
                reach[w] = true;
                queue.push_back(w);
            }
        }
    }
    let set: Vec<usize> = (0..n)
        .filter(|&v| if color[v] { !reach[v] } else { reach[v] })
        .collect();
    let matching_size = (0..n).filter(|&u| !color[u] && matched[u].is_some()).count();
    debug_assert_eq!(set.len(), n - matching_size);
    set
}
