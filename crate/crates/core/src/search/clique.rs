//! Branch-and-bound maximum independent set, run as maximum clique on the
//! complement with greedy-coloring upper bounds.
//!
//! The solver carries a shared incumbent behind an atomic, so root branches
//! can run in parallel: pruning against a stale incumbent only explores
//! more, never less, and the returned optimum is schedule-invariant.
//! `nodes` is the only field allowed to vary between runs.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::bitset::Bits;

use super::bipartite;

pub(crate) struct SolveParams {
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
    /// Restrict the search to solutions containing external vertex 0.
    /// Only valid on vertex-transitive instances.
    pub fix_first: bool,
    /// Stop as soon as the incumbent reaches this size.
    pub target: Option<usize>,
}

pub(crate) struct MisOutcome {
    /// External vertex ids, ascending.
    pub set: Vec<usize>,
    pub nodes: u64,
    /// True when the whole space was exhausted: the set is optimal and no
    /// early stop (budget or target) intervened.
    pub optimal_proved: bool,
}

struct Solver<'a> {
    madj: &'a [Bits],
    order: &'a [usize],
    target: usize,
    max_nodes: u64,
    deadline: Option<Instant>,
    best: AtomicUsize,
    best_set: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    target_hit: AtomicBool,
}

impl<'a> Solver<'a> {
    fn offer_external(&self, set: &[usize]) {
        if set.len() <= self.best.load(Ordering::Relaxed) {
            return;
        }
        let mut guard = self.best_set.lock().unwrap();
        if set.len() > guard.len() {
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            *guard = sorted;
            self.best.store(set.len(), Ordering::Relaxed);
            if set.len() >= self.target {
                self.target_hit.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn offer_internal(&self, clique: &[usize]) {
        let external: Vec<usize> = clique.iter().map(|&i| self.order[i]).collect();
        self.offer_external(&external);
    }

    fn tick(&self) -> bool {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if count >= self.max_nodes {
            self.budget_hit.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        if count & 1023 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.budget_hit.store(true, Ordering::Relaxed);
                    self.stop.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    /// Greedy coloring of `cand`; returns vertices grouped by ascending
    /// color class together with their (1-based) color numbers. The color
    /// of a vertex bounds any clique inside `cand` that ends at it.
    fn color_sort(&self, cand: &Bits) -> (Vec<usize>, Vec<usize>) {
        let total = cand.count();
        let mut verts = Vec::with_capacity(total);
        let mut colors = Vec::with_capacity(total);
        let mut uncolored = cand.clone();
        let mut color = 0usize;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.clear(v);
                avail.subtract(&self.madj[v]);
                uncolored.clear(v);
                verts.push(v);
                colors.push(color);
            }
        }
        (verts, colors)
    }

    fn expand(&self, clique: &mut Vec<usize>, cand: &Bits) {
        if !self.tick() {
            return;
        }
        let (verts, colors) = self.color_sort(cand);
        let mut remaining = cand.clone();
        for i in (0..verts.len()).rev() {
            if self.stop.load(Ordering::Relaxed) {
                return;
            }
            if clique.len() + colors[i] <= self.best.load(Ordering::Relaxed) {
                return;
            }
            let v = verts[i];
            remaining.clear(v);
            let next = remaining.intersection(&self.madj[v]);
            clique.push(v);
            if next.is_empty() {
                self.offer_internal(clique);
            } else {
                self.expand(clique, &next);
            }
            clique.pop();
        }
    }
}

fn greedy_mis_lex(conflict: &[Bits]) -> Vec<usize> {
    let n = conflict.len();
    let mut chosen = Bits::new(n);
    let mut out = Vec::new();
    for v in 0..n {
        if conflict[v].intersection_count(&chosen) == 0 {
            chosen.set(v);
            out.push(v);
        }
    }
    out
}

/// Exact maximum independent set in the conflict graph given by `conflict`
/// (symmetric, irreflexive). `seeds` are known independent sets used as
/// initial incumbents; each is asserted valid.
pub(crate) fn solve_mis(
    conflict: &[Bits],
    params: &SolveParams,
    seeds: &[Vec<usize>],
) -> MisOutcome {
    let n = conflict.len();
    if n == 0 {
        return MisOutcome {
            set: Vec::new(),
            nodes: 0,
            optimal_proved: true,
        };
    }

    // bipartite conflict graphs are closed exactly by Konig's theorem
    if let Some(color) = bipartite::two_color(conflict) {
        let set = bipartite::max_independent_set(conflict, &color);
        return MisOutcome {
            set,
            nodes: 0,
            optimal_proved: true,
        };
    }

    // clique formulation on the complement
    let mut comp: Vec<Bits> = Vec::with_capacity(n);
    for v in 0..n {
        let mut row = Bits::new(n);
        row.set_all();
        row.subtract(&conflict[v]);
        row.clear(v);
        comp.push(row);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (usize::MAX - comp[v].count(), v));
    let mut place = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        place[v] = i;
    }
    let mut madj: Vec<Bits> = vec![Bits::new(n); n];
    for (i, &v) in order.iter().enumerate() {
        for w in comp[v].iter_ones() {
            madj[i].set(place[w]);
        }
    }

    let solver = Solver {
        madj: &madj,
        order: &order,
        target: params.target.unwrap_or(usize::MAX),
        max_nodes: params.max_nodes,
        deadline: params.deadline,
        best: AtomicUsize::new(0),
        best_set: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
        target_hit: AtomicBool::new(false),
    };

    for seed in seeds {
        assert!(
            is_independent(conflict, seed),
            "seed incumbent violates the conflict graph"
        );
        solver.offer_external(seed);
    }
    solver.offer_external(&greedy_mis_lex(conflict));
    // greedy clique in solver order
    {
        let mut clique = Vec::new();
        let mut cand = Bits::new(n);
        cand.set_all();
        while let Some(v) = cand.first() {
            clique.push(v);
            cand.intersect_with(&solver.madj[v]);
        }
        solver.offer_internal(&clique);
    }

    if !solver.stop.load(Ordering::Relaxed) {
        let (root_clique, root_cand) = if params.fix_first {
            let i0 = place[0];
            (vec![i0], solver.madj[i0].clone())
        } else {
            let mut all = Bits::new(n);
            all.set_all();
            (Vec::new(), all)
        };
        if root_cand.is_empty() {
            solver.offer_internal(&root_clique);
        } else {
            let (verts, colors) = solver.color_sort(&root_cand);
            // branch i owns candidate set {verts[0..i]} & N(verts[i]),
            // exactly the sequential reverse-order decomposition
            let mut prefix = Bits::new(n);
            let branches: Vec<(usize, usize, Bits)> = verts
                .iter()
                .zip(&colors)
                .map(|(&v, &c)| {
                    let cand = prefix.intersection(&solver.madj[v]);
                    prefix.set(v);
                    (v, c, cand)
                })
                .collect();
            branches.into_par_iter().rev().for_each(|(v, color, cand)| {
                if solver.stop.load(Ordering::Relaxed) {
                    return;
                }
                if root_clique.len() + color <= solver.best.load(Ordering::Relaxed) {
                    return;
                }
                let mut clique = root_clique.clone();
                clique.push(v);
                if cand.is_empty() {
                    solver.offer_internal(&clique);
                } else {
                    solver.expand(&mut clique, &cand);
                }
            });
        }
    }

    let set = solver.best_set.into_inner().unwrap();
    MisOutcome {
        set,
        nodes: solver.nodes.load(Ordering::Relaxed),
        optimal_proved: !solver.budget_hit.load(Ordering::Relaxed)
            && !solver.target_hit.load(Ordering::Relaxed),
    }
}

pub(crate) fn is_independent(conflict: &[Bits], set: &[usize]) -> bool {
    set.iter()
        .all(|&u| set.iter().all(|&v| u == v || !conflict[u].get(v)))
}
