//! The greedy (1+eps)-spanner and its verifiers.
//!
//! `greedy_spanner` scans edges by increasing `(weight, u, v)` and keeps an
//! edge iff `(1+eps) * w(uv) <= d_S(u,v)` against the spanner built so far
//! (distances are recomputed per step; correctness over speed). Everything
//! downstream leans on two facts established by this construction:
//!
//! * the deterministic Kruskal MST is always contained in the spanner;
//! * for every spanner edge `e = uv` and every u-to-v path `P` in
//!   `S \ {e}`, `(1+eps) * w(e) <= w(P)` — the edge-path property that
//!   makes charging schemes "strong".

use num_traits::Zero;

use crate::graph::{dijkstra, mst, w_int, Weight, WeightedGraph};
use crate::{Error, Result};

/// A spanner of a parent graph: `eps` plus the kept edge indices.
#[derive(Debug, Clone)]
pub struct Spanner {
    pub eps: Weight,
    pub edge_indices: Vec<usize>,
}

impl Spanner {
    /// Materialize the spanner as a graph on the parent's vertex set.
    pub fn to_graph(&self, g: &WeightedGraph) -> WeightedGraph {
        g.edge_subgraph(&self.edge_indices)
            .expect("spanner edge indices are valid for the parent graph")
    }

    /// Total weight of the spanner's edges.
    pub fn weight(&self, g: &WeightedGraph) -> Weight {
        let mut t = Weight::zero();
        for &i in &self.edge_indices {
            t += &g.edge(i).w;
        }
        t
    }

    /// Edge set as sorted vertex pairs.
    pub fn pairs(&self, g: &WeightedGraph) -> Vec<(usize, usize)> {
        let mut p: Vec<(usize, usize)> = self
            .edge_indices
            .iter()
            .map(|&i| (g.edge(i).u, g.edge(i).v))
            .collect();
        p.sort_unstable();
        p
    }
}

fn check_eps(eps: &Weight) -> Result<()> {
    if *eps <= Weight::zero() {
        return Err(Error::invalid("eps must be positive"));
    }
    Ok(())
}

/// Build the greedy (1+eps)-spanner of `g`.
///
/// Edges are processed in increasing `(weight, u, v)` order; an edge is
/// added iff `(1+eps) * w(uv) <= d_S(u,v)` where `S` is the partial spanner
/// at that moment (`d = infinity` counts as "keep"). Disconnected inputs
/// are legal; each component is spanned independently.
pub fn greedy_spanner(g: &WeightedGraph, eps: &Weight) -> Result<Spanner> {
    check_eps(eps)?;
    let one_plus = w_int(1) + eps;
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by(|&a, &b| {
        let ea = g.edge(a);
        let eb = g.edge(b);
        ea.w.cmp(&eb.w)
            .then(ea.u.cmp(&eb.u))
            .then(ea.v.cmp(&eb.v))
    });
    let mut s = WeightedGraph::new(g.n());
    let mut kept = Vec::new();
    for idx in order {
        let e = g.edge(idx);
        let bound = &one_plus * &e.w;
        // distance in the current partial spanner, pruned at the threshold
        let d = dijkstra(&s, e.u, Some(&bound))[e.v].clone();
        let keep = match d {
            None => true,
            Some(d) => bound <= d,
        };
        if keep {
            s.add_edge(e.u, e.v, e.w.clone())?;
            kept.push(idx);
        }
    }
    kept.sort_unstable();
    Ok(Spanner {
        eps: eps.clone(),
        edge_indices: kept,
    })
}

/// One stretch violation: the pair, its spanner distance and the allowance.
#[derive(Debug, Clone)]
pub struct StretchViolation {
    pub u: usize,
    pub v: usize,
    pub d_spanner: Option<Weight>,
    pub allowed: Option<Weight>,
}

/// Check `d_S(u,v) <= (1+eps) * d_G(u,v)` for all vertex pairs, exactly.
///
/// Returns the (possibly empty) list of violating pairs. A pair connected
/// in `g` but not in the spanner is a violation; pairs disconnected in `g`
/// are unconstrained.
pub fn verify_stretch(g: &WeightedGraph, s: &Spanner) -> Result<Vec<StretchViolation>> {
    let sg = s.to_graph(g);
    let one_plus = w_int(1) + &s.eps;
    let mut violations = Vec::new();
    for u in 0..g.n() {
        let dg = dijkstra(g, u, None);
        let ds = dijkstra(&sg, u, None);
        for v in (u + 1)..g.n() {
            match (&dg[v], &ds[v]) {
                (None, _) => {}
                (Some(dguv), Some(dsuv)) => {
                    let allowed = &one_plus * dguv;
                    if *dsuv > allowed {
                        violations.push(StretchViolation {
                            u,
                            v,
                            d_spanner: Some(dsuv.clone()),
                            allowed: Some(allowed),
                        });
                    }
                }
                (Some(dguv), None) => {
                    violations.push(StretchViolation {
                        u,
                        v,
                        d_spanner: None,
                        allowed: Some(&one_plus * dguv),
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// One edge-path violation: a spanner edge with a too-short detour.
#[derive(Debug, Clone)]
pub struct EdgePathViolation {
    pub u: usize,
    pub v: usize,
    pub detour: Weight,
    pub required: Weight,
}

/// Check the edge-path property: for every spanner edge `e = uv`,
/// the shortest u-to-v distance in `S \ {e}` is at least `(1+eps) * w(e)`.
///
/// This is equivalent to checking every u-to-v path in `S \ {e}` since the
/// shortest one is the binding case.
pub fn verify_edge_path_property(g: &WeightedGraph, s: &Spanner) -> Result<Vec<EdgePathViolation>> {
    let one_plus = w_int(1) + &s.eps;
    let mut violations = Vec::new();
    for (pos, &ei) in s.edge_indices.iter().enumerate() {
        let e = g.edge(ei);
        let mut others: Vec<usize> = s.edge_indices.clone();
        others.remove(pos);
        let rest = g.edge_subgraph(&others)?;
        if let Some(d) = dijkstra(&rest, e.u, None)[e.v].clone() {
            let required = &one_plus * &e.w;
            if d < required {
                violations.push(EdgePathViolation {
                    u: e.u,
                    v: e.v,
                    detour: d,
                    required,
                });
            }
        }
    }
    Ok(violations)
}

/// Check the hereditary property on one subgraph: running the greedy
/// construction (same eps) on the subgraph of `s` given by `h_edge_indices`
/// must return that subgraph unchanged.
pub fn verify_hereditary(g: &WeightedGraph, s: &Spanner, h_edge_indices: &[usize]) -> Result<bool> {
    for &i in h_edge_indices {
        if !s.edge_indices.contains(&i) {
            return Err(Error::invalid(format!(
                "edge index {i} is not a spanner edge"
            )));
        }
    }
    let h = g.edge_subgraph(h_edge_indices)?;
    let again = greedy_spanner(&h, &s.eps)?;
    Ok(again.edge_indices.len() == h.m())
}

/// Lightness `w(S) / w(MST(g))`; errors when the MST weight is zero.
pub fn lightness(g: &WeightedGraph, s: &Spanner) -> Result<Weight> {
    let t = mst(g);
    if t.total_weight.is_zero() {
        return Err(Error::invalid("MST weight is zero; lightness undefined"));
    }
    Ok(s.weight(g) / t.total_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::w_ratio;

    fn g_from(n: usize, edges: &[(usize, usize, i64)]) -> WeightedGraph {
        let mut g = WeightedGraph::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w_int(w)).unwrap();
        }
        g
    }

    #[test]
    fn tree_input_is_returned_unchanged() {
        let g = g_from(4, &[(0, 1, 3), (1, 2, 1), (1, 3, 10)]);
        for eps in [w_ratio(1, 10), w_int(1), w_int(5)] {
            let s = greedy_spanner(&g, &eps).unwrap();
            assert_eq!(s.edge_indices, vec![0, 1, 2]);
        }
    }

    #[test]
    fn triangle_with_eps_tenth_drops_long_edge() {
        // weights 1, 1, 19/10: detour for the heavy edge is 2, and
        // (1+1/10) * 19/10 = 209/100 > 2, so the heavy edge is dropped
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, w_int(1)).unwrap();
        g.add_edge(1, 2, w_int(1)).unwrap();
        g.add_edge(0, 2, w_ratio(19, 10)).unwrap();
        let s = greedy_spanner(&g, &w_ratio(1, 10)).unwrap();
        assert_eq!(s.pairs(&g), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn four_cycle_keeps_all_edges() {
        // unit 4-cycle, eps = 1/2: every detour has weight 3 >= 3/2
        let g = g_from(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]);
        let s = greedy_spanner(&g, &w_ratio(1, 2)).unwrap();
        assert_eq!(s.edge_indices.len(), 4);
        assert_eq!(lightness(&g, &s).unwrap(), w_ratio(4, 3));
    }

    #[test]
    fn nonpositive_eps_is_rejected() {
        let g = g_from(2, &[(0, 1, 1)]);
        assert!(greedy_spanner(&g, &w_int(0)).is_err());
        assert!(greedy_spanner(&g, &w_int(-1)).is_err());
    }

    #[test]
    fn mst_is_contained_in_spanner() {
        let g = g_from(
            5,
            &[
                (0, 1, 2),
                (1, 2, 2),
                (2, 3, 5),
                (3, 4, 1),
                (0, 4, 9),
                (1, 3, 5),
                (0, 2, 4),
            ],
        );
        let s = greedy_spanner(&g, &w_ratio(1, 4)).unwrap();
        for idx in mst(&g).edge_indices {
            assert!(s.edge_indices.contains(&idx));
        }
    }

    #[test]
    fn stretch_holds_for_greedy_and_fails_for_truncation() {
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let eps = w_ratio(1, 10);
        let s = greedy_spanner(&g, &eps).unwrap();
        assert!(verify_stretch(&g, &s).unwrap().is_empty());
        // dropping edge (0,2) by hand leaves d_S(0,2) = 2 > 11/10
        let bad = Spanner {
            eps,
            edge_indices: vec![0, 1],
        };
        let viols = verify_stretch(&g, &bad).unwrap();
        assert_eq!(viols.len(), 1);
        assert_eq!((viols[0].u, viols[0].v), (0, 2));
    }

    #[test]
    fn edge_path_property_tracks_eps() {
        // unit triangle as its own spanner: detours are 2
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let all = Spanner {
            eps: w_ratio(1, 2),
            edge_indices: vec![0, 1, 2],
        };
        assert!(verify_edge_path_property(&g, &all).unwrap().is_empty());
        let too_big = Spanner {
            eps: w_ratio(3, 2),
            edge_indices: vec![0, 1, 2],
        };
        // (1+3/2) * 1 = 5/2 > 2: every edge is a violation
        assert_eq!(verify_edge_path_property(&g, &too_big).unwrap().len(), 3);
    }

    #[test]
    fn edge_path_property_vacuous_on_single_edge() {
        let g = g_from(2, &[(0, 1, 7)]);
        let s = greedy_spanner(&g, &w_int(1)).unwrap();
        assert!(verify_edge_path_property(&g, &s).unwrap().is_empty());
    }

    #[test]
    fn hereditary_on_self_and_mst() {
        let g = g_from(
            5,
            &[
                (0, 1, 2),
                (1, 2, 3),
                (2, 3, 5),
                (3, 4, 1),
                (0, 4, 9),
                (1, 3, 6),
            ],
        );
        let s = greedy_spanner(&g, &w_ratio(1, 2)).unwrap();
        assert!(verify_hereditary(&g, &s, &s.edge_indices).unwrap());
        let t = mst(&g);
        assert!(verify_hereditary(&g, &s, &t.edge_indices).unwrap());
        assert!(verify_hereditary(&g, &s, &[999]).is_err());
    }

    #[test]
    fn spanner_is_idempotent() {
        let g = g_from(
            6,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (0, 5, 1),
                (0, 3, 2),
                (1, 4, 3),
            ],
        );
        let eps = w_ratio(1, 3);
        let s = greedy_spanner(&g, &eps).unwrap();
        let sg = s.to_graph(&g);
        let s2 = greedy_spanner(&sg, &eps).unwrap();
        assert_eq!(s2.edge_indices.len(), sg.m());
    }

    #[test]
    fn lightness_of_mst_is_one() {
        let g = g_from(3, &[(0, 1, 2), (1, 2, 3)]);
        let s = greedy_spanner(&g, &w_int(1)).unwrap();
        assert_eq!(lightness(&g, &s).unwrap(), w_int(1));
    }
}
