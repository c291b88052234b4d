//! Shared helpers for the integration tests. The MST oracle here is
//! deliberately independent of the library's own union-find and Kruskal
//! code: it enumerates spanning forests outright.

use spanner_core::graph::{Weight, WeightedGraph};

/// Number of connected components, computed from scratch.
pub fn component_count(g: &WeightedGraph) -> usize {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    count
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn enumerate(
    g: &WeightedGraph,
    next: usize,
    picked: usize,
    need: usize,
    parent: &mut Vec<usize>,
    acc: &Weight,
    best: &mut Option<Weight>,
) {
    if picked == need {
        if best.as_ref().is_none_or(|b| acc < b) {
            *best = Some(acc.clone());
        }
        return;
    }
    if g.m() - next < need - picked {
        return;
    }
    for j in next..g.m() {
        let e = g.edge(j);
        let ru = find(parent, e.u);
        let rv = find(parent, e.v);
        if ru == rv {
            continue;
        }
        parent[ru] = rv;
        let acc2 = acc + &e.w;
        enumerate(g, j + 1, picked + 1, need, parent, &acc2, best);
        parent[ru] = ru;
    }
}

/// Minimum spanning-forest weight by brute-force enumeration of all
/// acyclic edge sets of the right size. Exponential; keep n tiny.
pub fn exhaustive_msf_weight(g: &WeightedGraph) -> Weight {
    let need = g.n() - component_count(g);
    let mut parent: Vec<usize> = (0..g.n()).collect();
    let mut best = None;
    enumerate(
        g,
        0,
        0,
        need,
        &mut parent,
        &Weight::new(0.into(), 1.into()),
        &mut best,
    );
    best.expect("a spanning forest of the right size always exists")
}
