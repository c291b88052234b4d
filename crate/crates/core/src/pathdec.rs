//! Path decompositions: validation, smoothing, k-path generation, the
//! normalized per-bag graph, and completion to a k-path.
//!
//! A path decomposition is a bag sequence `X_1..X_L`; it is *valid* for a
//! graph when every vertex and every edge is covered and each vertex's
//! occurrence set is a contiguous run of bags. It is *smooth* (width `pw`)
//! when every bag has exactly `pw+1` vertices and consecutive bags share
//! exactly `pw` — so each transition introduces one vertex and forgets one.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::generators::WeightDist;
use crate::graph::{dijkstra, w_zero, Weight, WeightedGraph};
use crate::{Error, Result};

/// An ordered bag sequence. Bags are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Width = max bag size minus one (`None` for an empty decomposition).
    pub fn width(&self) -> Option<usize> {
        self.bags.iter().map(|b| b.len()).max().map(|s| s - 1)
    }
}

/// One way a decomposition fails to be valid for a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecViolation {
    /// A bag names a vertex outside `0..n`.
    OutOfRange { bag: usize, vertex: usize },
    /// A graph vertex appears in no bag.
    UncoveredVertex(usize),
    /// No bag contains both endpoints of this edge.
    UncoveredEdge(usize, usize),
    /// The bags containing this vertex are not a contiguous run.
    NonContiguous(usize),
    /// A bag is empty.
    EmptyBag(usize),
}

/// Check conditions (1) vertex coverage, (2) edge coverage,
/// (3) contiguity. Returns all violations found (empty = valid).
pub fn validate(g: &WeightedGraph, d: &PathDecomposition) -> Vec<DecViolation> {
    let mut out = Vec::new();
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut last: BTreeMap<usize, usize> = BTreeMap::new();
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, bag) in d.bags().iter().enumerate() {
        if bag.is_empty() {
            out.push(DecViolation::EmptyBag(i));
        }
        for &v in bag {
            if v >= g.n() {
                out.push(DecViolation::OutOfRange { bag: i, vertex: v });
                continue;
            }
            first.entry(v).or_insert(i);
            last.insert(v, i);
            *count.entry(v).or_insert(0) += 1;
        }
    }
    for v in 0..g.n() {
        match (first.get(&v), last.get(&v)) {
            (None, _) => out.push(DecViolation::UncoveredVertex(v)),
            (Some(&f), Some(&l)) => {
                if count[&v] != l - f + 1 {
                    out.push(DecViolation::NonContiguous(v));
                }
            }
            _ => unreachable!(),
        }
    }
    for e in g.edges() {
        let covered = d
            .bags()
            .iter()
            .any(|bag| bag.binary_search(&e.u).is_ok() && bag.binary_search(&e.v).is_ok());
        if !covered {
            out.push(DecViolation::UncoveredEdge(e.u, e.v));
        }
    }
    out
}

/// A decomposition known to be smooth: every bag has `pw+1` vertices and
/// consecutive bags overlap in exactly `pw`.
#[derive(Debug, Clone)]
pub struct SmoothPathDecomposition {
    dec: PathDecomposition,
    pw: usize,
    intro: Vec<usize>, // intro[v] = index of the first bag containing v
}

impl SmoothPathDecomposition {
    /// Wrap a decomposition after checking smoothness.
    pub fn from_dec(dec: PathDecomposition) -> Result<Self> {
        let pw = match dec.width() {
            Some(w) => w,
            None => {
                return Ok(SmoothPathDecomposition {
                    dec,
                    pw: 0,
                    intro: Vec::new(),
                })
            }
        };
        for (i, bag) in dec.bags().iter().enumerate() {
            if bag.len() != pw + 1 {
                return Err(Error::invalid(format!(
                    "bag {i} has {} vertices, smooth requires {}",
                    bag.len(),
                    pw + 1
                )));
            }
            if i + 1 < dec.len() {
                let next: BTreeSet<_> = dec.bags()[i + 1].iter().collect();
                let overlap = bag.iter().filter(|v| next.contains(v)).count();
                if overlap != pw {
                    return Err(Error::invalid(format!(
                        "bags {i} and {} overlap in {overlap} vertices, smooth requires {pw}",
                        i + 1
                    )));
                }
            }
        }
        let mut intro_map: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, bag) in dec.bags().iter().enumerate() {
            for &v in bag {
                intro_map.entry(v).or_insert(i);
            }
        }
        let max_v = intro_map.keys().copied().max().unwrap_or(0);
        let mut intro = vec![usize::MAX; max_v + 1];
        for (v, i) in intro_map {
            intro[v] = i;
        }
        Ok(SmoothPathDecomposition { dec, pw, intro })
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        self.dec.bags()
    }

    pub fn len(&self) -> usize {
        self.dec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dec.is_empty()
    }

    pub fn pw(&self) -> usize {
        self.pw
    }

    pub fn as_dec(&self) -> &PathDecomposition {
        &self.dec
    }

    /// Index of the first bag containing `v`.
    pub fn intro_bag(&self, v: usize) -> usize {
        self.intro[v]
    }

    /// The vertex introduced by bag `i` (`None` for bag 0, whose vertices
    /// are all "introduced" together).
    pub fn introduced(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        let prev: BTreeSet<_> = self.bags()[i - 1].iter().collect();
        self.bags()[i].iter().copied().find(|v| !prev.contains(v))
    }

    /// The vertex forgotten by bag `i` — the one absent from bag `i+1`
    /// (`None` for the last bag; its vertices are all forgotten at the end).
    pub fn forgotten(&self, i: usize) -> Option<usize> {
        if i + 1 >= self.len() {
            return None;
        }
        let next: BTreeSet<_> = self.bags()[i + 1].iter().collect();
        self.bags()[i].iter().copied().find(|v| !next.contains(v))
    }
}

/// Turn a valid decomposition into a smooth one of the same width.
///
/// Textbook normalization: repeatedly delete bags that are subsets of a
/// neighbor, pad small bags by borrowing a vertex from an adjacent bag,
/// then splice single-swap morph bags between consecutive bags that differ
/// in more than one vertex. Every input bag maps to a contiguous run of
/// output bags.
pub fn smooth(g: &WeightedGraph, d: &PathDecomposition) -> Result<SmoothPathDecomposition> {
    let violations = validate(g, d);
    if !violations.is_empty() {
        return Err(Error::invalid(format!(
            "decomposition is not valid: {:?}",
            violations[0]
        )));
    }
    let mut bags: Vec<BTreeSet<usize>> = d
        .bags()
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    if bags.is_empty() {
        if g.n() == 0 {
            return SmoothPathDecomposition::from_dec(PathDecomposition::new(vec![]));
        }
        return Err(Error::invalid("no bags but graph has vertices"));
    }
    let w1 = d.width().unwrap() + 1; // target bag size

    // Phase 1: delete subset bags, pad small bags.
    loop {
        // delete any bag that is a subset of an adjacent bag
        let mut deleted = false;
        let mut i = 0;
        while i < bags.len() && bags.len() > 1 {
            let sub_of_prev = i > 0 && bags[i].is_subset(&bags[i - 1]);
            let sub_of_next = i + 1 < bags.len() && bags[i].is_subset(&bags[i + 1]);
            if sub_of_prev || sub_of_next {
                bags.remove(i);
                deleted = true;
            } else {
                i += 1;
            }
        }
        // pad the first small bag found
        let mut padded = false;
        for i in 0..bags.len() {
            if bags[i].len() >= w1 {
                continue;
            }
            let borrow = if i + 1 < bags.len() {
                bags[i + 1].difference(&bags[i]).next().copied()
            } else {
                None
            }
            .or_else(|| {
                if i > 0 {
                    bags[i - 1].difference(&bags[i]).next().copied()
                } else {
                    None
                }
            });
            match borrow {
                Some(v) => {
                    bags[i].insert(v);
                    padded = true;
                    break;
                }
                None => {
                    // neighbors are subsets; the deletion pass will fire
                    continue;
                }
            }
        }
        if !deleted && !padded {
            break;
        }
    }
    debug_assert!(bags.iter().all(|b| b.len() == w1));

    // Phase 2: splice morph bags so consecutive overlaps are exactly w1-1.
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    out.push(bags[0].clone());
    for next in bags.into_iter().skip(1) {
        let cur = out.last().unwrap().clone();
        let leaving: Vec<usize> = cur.difference(&next).copied().collect();
        let entering: Vec<usize> = next.difference(&cur).copied().collect();
        debug_assert_eq!(leaving.len(), entering.len());
        let d = leaving.len();
        let mut b = cur;
        for t in 0..d {
            b.remove(&leaving[t]);
            b.insert(entering[t]);
            out.push(b.clone());
        }
        debug_assert_eq!(out.last().unwrap(), &next);
    }
    let dec = PathDecomposition::new(out.into_iter().map(|b| b.into_iter().collect()).collect());
    let violations = validate(g, &dec);
    if !violations.is_empty() {
        return Err(Error::structural(format!(
            "smoothing produced an invalid decomposition: {:?}",
            violations[0]
        )));
    }
    SmoothPathDecomposition::from_dec(dec)
}

/// Generate a random k-path: every bag of a smooth width-`pw` decomposition
/// induces a clique. Bag 1 is `{0..pw}`; each later bag drops a uniformly
/// random vertex and introduces the next integer id. Weights are drawn from
/// `dist` in a fixed edge order, so the output is a pure function of the
/// arguments.
pub fn generate_kpath(
    n: usize,
    pw: usize,
    seed: u64,
    dist: &WeightDist,
) -> Result<(WeightedGraph, SmoothPathDecomposition)> {
    if pw == 0 {
        return Err(Error::invalid("pathwidth must be at least 1"));
    }
    if n < pw + 1 {
        return Err(Error::invalid(format!(
            "need at least pw+1 = {} vertices, got {n}",
            pw + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(n);
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..=pw).collect();
    bags.push(cur.clone());
    for u in 0..=pw {
        for v in (u + 1)..=pw {
            g.add_edge(u, v, dist.sample(&mut rng))?;
        }
    }
    for next in (pw + 1)..n {
        let drop_at = rng.gen_range(0..cur.len());
        cur.remove(drop_at);
        cur.push(next);
        cur.sort_unstable();
        bags.push(cur.clone());
        for &v in cur.iter().filter(|&&v| v != next) {
            g.add_edge(v, next, dist.sample(&mut rng))?;
        }
    }
    let dec = SmoothPathDecomposition::from_dec(PathDecomposition::new(bags))?;
    Ok((g, dec))
}

/// Check that every bag of `d` induces a clique in `g`.
pub fn is_kpath(g: &WeightedGraph, d: &SmoothPathDecomposition) -> bool {
    d.bags().iter().all(|bag| {
        bag.iter().enumerate().all(|(i, &u)| {
            bag[i + 1..]
                .iter()
                .all(|&v| g.edge_index(u, v).is_some())
        })
    })
}

/// The normalized per-bag graph `G_P` of a graph and a smooth decomposition.
///
/// Each bag gets its own copy of its vertices; copies of the same vertex in
/// consecutive bags are joined by zero-weight glue edges; each original edge
/// is placed in exactly one bag — the lowest-index bag containing both
/// endpoints (which is where the later endpoint is introduced). Distances
/// between copies equal original distances and `w(MST(G_P)) = w(MST(G))`.
#[derive(Debug, Clone)]
pub struct NormalizedGraph {
    pub graph: WeightedGraph,
    /// copy id -> (bag index, original vertex)
    pub back: Vec<(usize, usize)>,
    /// (bag index, original vertex) -> copy id
    pub copy_at: BTreeMap<(usize, usize), usize>,
    /// bag index -> original edge indices assigned to that bag
    pub bag_edges: Vec<Vec<usize>>,
    /// edge indices (in `graph`) of the zero-weight glue edges
    pub glue_edges: Vec<usize>,
    /// for each original edge index, the bag it was assigned to
    pub edge_bag: Vec<usize>,
}

/// Build the normalized graph. Errors if the decomposition is not valid
/// for `g` (in particular if some edge is covered by no bag).
pub fn normalize(g: &WeightedGraph, d: &SmoothPathDecomposition) -> Result<NormalizedGraph> {
    let violations = validate(g, d.as_dec());
    if !violations.is_empty() {
        return Err(Error::invalid(format!(
            "decomposition is not valid for the graph: {:?}",
            violations[0]
        )));
    }
    let mut back = Vec::new();
    let mut copy_at = BTreeMap::new();
    for (i, bag) in d.bags().iter().enumerate() {
        for &v in bag {
            copy_at.insert((i, v), back.len());
            back.push((i, v));
        }
    }
    let mut graph = WeightedGraph::new(back.len());
    let mut glue_edges = Vec::new();
    for (i, bag) in d.bags().iter().enumerate().skip(1) {
        for &v in bag {
            if let Some(&prev) = copy_at.get(&(i - 1, v)) {
                let here = copy_at[&(i, v)];
                glue_edges.push(graph.add_edge(prev, here, w_zero())?);
            }
        }
    }
    let mut bag_edges = vec![Vec::new(); d.len()];
    let mut edge_bag = vec![usize::MAX; g.m()];
    for (ei, e) in g.edges().iter().enumerate() {
        let bag = d.intro_bag(e.u).max(d.intro_bag(e.v));
        let (cu, cv) = match (copy_at.get(&(bag, e.u)), copy_at.get(&(bag, e.v))) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                return Err(Error::invalid(format!(
                    "edge ({},{}) is not covered by any bag",
                    e.u, e.v
                )))
            }
        };
        graph.add_edge(cu, cv, e.w.clone())?;
        bag_edges[bag].push(ei);
        edge_bag[ei] = bag;
    }
    Ok(NormalizedGraph {
        graph,
        back,
        copy_at,
        bag_edges,
        glue_edges,
        edge_bag,
    })
}

/// Complete `g` to a k-path for the decomposition `d`: every missing
/// intra-bag pair gets a *virtual* edge weighted by the exact shortest-path
/// distance in `g`, so the metric is unchanged. Returns the completed graph
/// plus a per-edge flag marking the virtual edges.
pub fn complete_to_kpath(
    g: &WeightedGraph,
    d: &SmoothPathDecomposition,
) -> Result<(WeightedGraph, Vec<bool>)> {
    let violations = validate(g, d.as_dec());
    if !violations.is_empty() {
        return Err(Error::invalid(format!(
            "decomposition is not valid for the graph: {:?}",
            violations[0]
        )));
    }
    let mut missing: BTreeSet<(usize, usize)> = BTreeSet::new();
    for bag in d.bags() {
        for (i, &u) in bag.iter().enumerate() {
            for &v in &bag[i + 1..] {
                if g.edge_index(u, v).is_none() {
                    missing.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    let sources: BTreeSet<usize> = missing.iter().map(|&(u, _)| u).collect();
    let mut dist_from: BTreeMap<usize, Vec<Option<Weight>>> = BTreeMap::new();
    for &s in &sources {
        dist_from.insert(s, dijkstra(g, s, None));
    }
    let mut out = g.clone();
    let mut is_virtual = vec![false; g.m()];
    for (u, v) in missing {
        let w = dist_from[&u][v].clone().ok_or_else(|| {
            Error::invalid(format!(
                "bag pair ({u},{v}) is disconnected; cannot complete to a k-path"
            ))
        })?;
        out.add_edge(u, v, w)?;
        is_virtual.push(true);
    }
    Ok((out, is_virtual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs, mst, w_int};

    fn g_from(n: usize, edges: &[(usize, usize, i64)]) -> WeightedGraph {
        let mut g = WeightedGraph::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w_int(w)).unwrap();
        }
        g
    }

    #[test]
    fn validate_accepts_triangle_single_bag() {
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1, 2]]);
        assert!(validate(&g, &d).is_empty());
        assert_eq!(d.width(), Some(2));
    }

    #[test]
    fn validate_reports_each_failure_kind() {
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        // edge (0,2) uncovered
        let d = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        assert!(validate(&g, &d).contains(&DecViolation::UncoveredEdge(0, 2)));
        // vertex 2 uncovered
        let d = PathDecomposition::new(vec![vec![0, 1]]);
        assert!(validate(&g, &d).contains(&DecViolation::UncoveredVertex(2)));
        // non-contiguous vertex 0
        let g2 = g_from(3, &[(0, 1, 1), (1, 2, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(validate(&g2, &d).contains(&DecViolation::NonContiguous(0)));
        // out of range
        let d = PathDecomposition::new(vec![vec![0, 1, 2, 9]]);
        assert!(validate(&g, &d)
            .iter()
            .any(|v| matches!(v, DecViolation::OutOfRange { vertex: 9, .. })));
    }

    #[test]
    fn smooth_keeps_already_smooth_input() {
        let g = g_from(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        let s = smooth(&g, &d).unwrap();
        assert_eq!(s.bags(), d.bags());
        assert_eq!(s.pw(), 1);
    }

    #[test]
    fn smooth_pads_and_morphs() {
        let g = g_from(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1, 2], vec![2, 3]]);
        let s = smooth(&g, &d).unwrap();
        assert_eq!(s.pw(), 2);
        assert!(validate(&g, s.as_dec()).is_empty());
        for bag in s.bags() {
            assert_eq!(bag.len(), 3);
        }
    }

    #[test]
    fn smooth_single_bag_is_unchanged() {
        let g = g_from(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1, 2, 3]]);
        let s = smooth(&g, &d).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.pw(), 3);
    }

    #[test]
    fn smooth_collapses_wide_gap() {
        // consecutive bags differing in two vertices get a morph bag between
        let g = g_from(5, &[(0, 1, 1), (1, 2, 1), (3, 4, 1), (2, 3, 1), (1, 3, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4], vec![3, 4]]);
        let s = smooth(&g, &d).unwrap();
        assert!(validate(&g, s.as_dec()).is_empty());
        for i in 0..s.len() - 1 {
            let a: BTreeSet<_> = s.bags()[i].iter().collect();
            let b: BTreeSet<_> = s.bags()[i + 1].iter().collect();
            assert_eq!(a.intersection(&b).count(), s.pw());
        }
    }

    #[test]
    fn smooth_rejects_invalid_input() {
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let d = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        assert!(smooth(&g, &d).is_err());
    }

    #[test]
    fn kpath_single_bag_is_complete_graph() {
        let (g, d) = generate_kpath(3, 2, 7, &WeightDist::Constant(w_int(1))).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(d.len(), 1);
        assert!(is_kpath(&g, &d));
    }

    #[test]
    fn kpath_structure_and_determinism() {
        let dist = WeightDist::UniformInt { lo: 1, hi: 1000 };
        let (g, d) = generate_kpath(5, 2, 42, &dist).unwrap();
        // 3 + 2 + 2 edges
        assert_eq!(g.m(), 7);
        assert_eq!(d.len(), 3);
        assert!(validate(&g, d.as_dec()).is_empty());
        assert!(is_kpath(&g, &d));
        let (g2, d2) = generate_kpath(5, 2, 42, &dist).unwrap();
        assert_eq!(g.edges(), g2.edges());
        assert_eq!(d.bags(), d2.bags());
        let (g3, _) = generate_kpath(5, 2, 43, &dist).unwrap();
        assert_ne!(g.edges(), g3.edges(), "different seeds should differ");
    }

    #[test]
    fn kpath_rejects_small_n() {
        assert!(generate_kpath(2, 2, 0, &WeightDist::Constant(w_int(1))).is_err());
        assert!(generate_kpath(3, 0, 0, &WeightDist::Constant(w_int(1))).is_err());
    }

    #[test]
    fn normalize_single_bag_has_no_glue() {
        let g = g_from(3, &[(0, 1, 2), (1, 2, 3), (0, 2, 4)]);
        let d = SmoothPathDecomposition::from_dec(PathDecomposition::new(vec![vec![0, 1, 2]]))
            .unwrap();
        let ng = normalize(&g, &d).unwrap();
        assert!(ng.glue_edges.is_empty());
        assert_eq!(ng.graph.m(), 3);
        assert_eq!(ng.graph.total_weight(), g.total_weight());
    }

    #[test]
    fn normalize_rejects_uncovered_edge() {
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let d = SmoothPathDecomposition::from_dec(PathDecomposition::new(vec![
            vec![0, 1],
            vec![1, 2],
        ]))
        .unwrap();
        assert!(normalize(&g, &d).is_err());
    }

    #[test]
    fn normalize_preserves_mst_weight_and_metric() {
        let dist = WeightDist::UniformInt { lo: 1, hi: 100 };
        let (g, d) = generate_kpath(6, 2, 11, &dist).unwrap();
        let ng = normalize(&g, &d).unwrap();
        assert_eq!(mst(&ng.graph).total_weight, mst(&g).total_weight);
        // distances between first copies match the original metric
        let orig = all_pairs(&g);
        for u in 0..g.n() {
            let cu = ng.copy_at[&(d.intro_bag(u), u)];
            let from_cu = dijkstra(&ng.graph, cu, None);
            for v in 0..g.n() {
                let cv = ng.copy_at[&(d.intro_bag(v), v)];
                assert_eq!(from_cu[cv], orig[u][v], "distance ({u},{v})");
            }
        }
        // every original edge is assigned to exactly one bag
        let total: usize = ng.bag_edges.iter().map(|b| b.len()).sum();
        assert_eq!(total, g.m());
    }

    #[test]
    fn complete_to_kpath_adds_metric_virtual_edges() {
        // path 0-1-2 in a single bag: the missing pair (0,2) becomes a
        // virtual edge of weight 2
        let g = g_from(3, &[(0, 1, 1), (1, 2, 1)]);
        let d = SmoothPathDecomposition::from_dec(PathDecomposition::new(vec![vec![0, 1, 2]]))
            .unwrap();
        let (k, vflags) = complete_to_kpath(&g, &d).unwrap();
        assert_eq!(k.m(), 3);
        assert_eq!(k.weight(0, 2), Some(&w_int(2)));
        assert_eq!(vflags, vec![false, false, true]);
        assert!(is_kpath(&k, &d));
        // metric unchanged
        let before = all_pairs(&g);
        let after = all_pairs(&k);
        assert_eq!(before, after);
    }

    #[test]
    fn complete_to_kpath_noop_on_kpath() {
        let (g, d) = generate_kpath(6, 3, 5, &WeightDist::UniformInt { lo: 1, hi: 10 }).unwrap();
        let (k, vflags) = complete_to_kpath(&g, &d).unwrap();
        assert_eq!(k.m(), g.m());
        assert!(vflags.iter().all(|&f| !f));
    }

    #[test]
    fn complete_to_kpath_rejects_disconnected_bag_pair() {
        let g = g_from(2, &[]);
        let d = SmoothPathDecomposition::from_dec(PathDecomposition::new(vec![vec![0, 1]]))
            .unwrap();
        assert!(complete_to_kpath(&g, &d).is_err());
    }
}
