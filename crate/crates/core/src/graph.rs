//! Weighted undirected graphs with exact rational weights.
//!
//! Vertices are `0..n`. Parallel edges and self-loops are rejected; an edge
//! is stored once as an unordered pair `(u, v)` with `u < v`. Disconnected
//! graphs are legal everywhere: `mst` returns a spanning forest and
//! `shortest_dist` returns `None` for unreachable pairs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact edge weight / distance.
pub type Weight = BigRational;

/// Weight value `0`.
pub fn w_zero() -> Weight {
    Weight::zero()
}

/// Weight from an integer.
pub fn w_int(v: i64) -> Weight {
    Weight::from_integer(BigInt::from(v))
}

/// Weight from a numerator/denominator pair.
pub fn w_ratio(p: i64, q: i64) -> Weight {
    Weight::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a weight written as `p` or `p/q`.
pub fn parse_weight(s: &str) -> Result<Weight> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational '{s}'")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational '{s}'")))?;
    if q.is_zero() {
        return Err(Error::invalid(format!("zero denominator in '{s}'")));
    }
    Ok(Weight::new(p, q))
}

/// Render a weight as `p` or `p/q` (always reduced, denominator positive).
pub fn format_weight(w: &Weight) -> String {
    if w.denom().is_one() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

/// One undirected edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

/// Undirected weighted graph with dense vertex ids `0..n`.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>, // vertex -> (neighbor, edge index)
    by_pair: BTreeMap<(usize, usize), usize>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            by_pair: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Index of the edge between `u` and `v`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.by_pair.get(&key).copied()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Weight> {
        self.edge_index(u, v).map(|i| &self.edges[i].w)
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    /// Add the edge `{u, v}` with weight `w`.
    ///
    /// Rejects self-loops, duplicate pairs (in either orientation),
    /// out-of-range endpoints and negative weights.
    pub fn add_edge(&mut self, u: usize, v: usize, w: Weight) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) out of range for n={}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("self-loop at vertex {u}")));
        }
        if w.is_negative() {
            return Err(Error::invalid(format!(
                "negative weight {} on edge ({u},{v})",
                format_weight(&w)
            )));
        }
        let key = (u.min(v), u.max(v));
        if self.by_pair.contains_key(&key) {
            return Err(Error::invalid(format!(
                "duplicate edge ({},{})",
                key.0, key.1
            )));
        }
        let idx = self.edges.len();
        self.edges.push(Edge { u: key.0, v: key.1, w });
        self.adj[key.0].push((key.1, idx));
        self.adj[key.1].push((key.0, idx));
        self.by_pair.insert(key, idx);
        Ok(idx)
    }

    /// Total weight of all edges.
    pub fn total_weight(&self) -> Weight {
        let mut t = w_zero();
        for e in &self.edges {
            t += &e.w;
        }
        t
    }

    /// Subgraph induced by the vertex set `s`.
    ///
    /// Vertices are relabeled to `0..s.len()` following the sorted order of
    /// `s`; the returned vector maps new ids back to the originals. Edges
    /// keep their weights.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(WeightedGraph, Vec<usize>)> {
        let mut sorted: Vec<usize> = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != s.len() {
            return Err(Error::invalid("duplicate vertex in induced set"));
        }
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(Error::invalid(format!("vertex {bad} out of range")));
        }
        let mut new_id = BTreeMap::new();
        for (i, &v) in sorted.iter().enumerate() {
            new_id.insert(v, i);
        }
        let mut g = WeightedGraph::new(sorted.len());
        for e in &self.edges {
            if let (Some(&a), Some(&b)) = (new_id.get(&e.u), new_id.get(&e.v)) {
                g.add_edge(a, b, e.w.clone())?;
            }
        }
        Ok((g, sorted))
    }

    /// Graph with the same vertex set but only the listed edges.
    pub fn edge_subgraph(&self, edge_indices: &[usize]) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(self.n);
        for &i in edge_indices {
            let e = self
                .edges
                .get(i)
                .ok_or_else(|| Error::invalid(format!("edge index {i} out of range")))?;
            g.add_edge(e.u, e.v, e.w.clone())?;
        }
        Ok(g)
    }
}

/// Disjoint-set forest with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    /// Union the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// A minimum spanning forest: edge indices into the parent graph.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    pub edge_indices: Vec<usize>,
    pub total_weight: Weight,
}

impl SpanningForest {
    /// Edge set as sorted unordered vertex pairs.
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

/// Kruskal's algorithm with the fixed tie-break
/// `(weight, smaller endpoint, larger endpoint)`.
///
/// On disconnected graphs this returns a minimum spanning forest (one tree
/// per component). The selected edge order is fully deterministic, so two
/// graphs over the same edge list always receive the same forest.
pub fn mst(g: &WeightedGraph) -> SpanningForest {
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by(|&a, &b| {
        let ea = g.edge(a);
        let eb = g.edge(b);
        ea.w.cmp(&eb.w)
            .then(ea.u.cmp(&eb.u))
            .then(ea.v.cmp(&eb.v))
    });
    let mut uf = UnionFind::new(g.n());
    let mut chosen = Vec::new();
    let mut total = w_zero();
    for idx in order {
        let e = g.edge(idx);
        if uf.union(e.u, e.v) {
            total += &e.w;
            chosen.push(idx);
        }
    }
    chosen.sort_unstable();
    SpanningForest {
        edge_indices: chosen,
        total_weight: total,
    }
}

/// Exact Dijkstra from `src`; `None` for unreachable vertices.
///
/// `cutoff`, when given, prunes any label strictly greater than the bound —
/// the result is then only meaningful for vertices whose true distance is
/// at most the bound (used by the greedy spanner's threshold test).
pub fn dijkstra(g: &WeightedGraph, src: usize, cutoff: Option<&Weight>) -> Vec<Option<Weight>> {
    let mut dist: Vec<Option<Weight>> = vec![None; g.n()];
    let mut heap: BinaryHeap<Reverse<(Weight, usize)>> = BinaryHeap::new();
    dist[src] = Some(w_zero());
    heap.push(Reverse((w_zero(), src)));
    while let Some(Reverse((d, u))) = heap.pop() {
        match &dist[u] {
            Some(best) if *best < d => continue,
            _ => {}
        }
        for &(v, ei) in g.neighbors(u) {
            let nd = &d + &g.edge(ei).w;
            if let Some(bound) = cutoff {
                if nd > *bound {
                    continue;
                }
            }
            let better = match &dist[v] {
                None => true,
                Some(cur) => nd < *cur,
            };
            if better {
                dist[v] = Some(nd.clone());
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Exact shortest-path distance between `u` and `v` (`None` if disconnected).
pub fn shortest_dist(g: &WeightedGraph, u: usize, v: usize) -> Result<Option<Weight>> {
    if u >= g.n() || v >= g.n() {
        return Err(Error::invalid(format!(
            "vertex out of range: ({u},{v}) with n={}",
            g.n()
        )));
    }
    if u == v {
        return Ok(Some(w_zero()));
    }
    Ok(dijkstra(g, u, None)[v].clone())
}

/// All-pairs distances via repeated Dijkstra.
pub fn all_pairs(g: &WeightedGraph) -> Vec<Vec<Option<Weight>>> {
    (0..g.n()).map(|s| dijkstra(g, s, None)).collect()
}

/// Connected components; returns a component id per vertex.
pub fn components(g: &WeightedGraph) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = next;
        while let Some(u) = stack.pop() {
            for &(v, _) in g.neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

pub fn is_connected(g: &WeightedGraph) -> bool {
    g.n() == 0 || components(g).iter().all(|&c| c == 0)
}
