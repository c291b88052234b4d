//! Charging forests over normalized k-paths.
//!
//! Given a k-path (a graph whose every bag of a smooth path decomposition
//! induces a clique) this module builds a *charging forest* Φ: a rooted
//! spanning forest of the line graph of the input, with one tree rooted at
//! each non-glue MST edge of the normalized graph. A deterministic
//! bag-by-bag construction maintains Φ together with a *contracted forest*
//! Λ_i that summarizes MST connectivity among the surviving bag vertices.
//! From the final forest we extract a charging scheme (one simple path per
//! non-tree edge) whose per-edge charge counts are then audited against the
//! `pw`-parameterized bounds.
//!
//! Vocabulary used throughout:
//! - a *φ-vertex* `(u,v)` stands for the edge `uv` of the input graph;
//! - *bold* edges join two φ-vertices sharing an endpoint whose third side
//!   (the *base*) is an MST edge — a charging triangle;
//! - *dashed* edges are provisional mirrors of contracted-forest edges;
//! - *mixed* edges are converted dashed edges; their base is realized by an
//!   MST path (a pseudo-edge) instead of a single MST edge;
//! - a *dashed-free tree* is a maximal subtree connected by bold and mixed
//!   edges only; a tree is *rooted* if it contains a φ-vertex that is an
//!   MST edge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::charging::{pair_of, ChargingScheme, Pair};
use crate::graph::{is_connected, mst, w_zero, UnionFind, WeightedGraph};
use crate::pathdec::{is_kpath, NormalizedGraph, SmoothPathDecomposition};
use crate::{Error, Result};

/// Label of a charging-forest edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Bold,
    Dashed,
    Mixed,
}

#[derive(Debug, Clone)]
struct PhiEdge {
    a: usize,
    b: usize,
    kind: EdgeKind,
    /// bold: the MST base edge; dashed/mixed: the mirrored contracted-forest
    /// edge (whose endpoints the pseudo-edge path connects).
    base: Pair,
    /// dashed/mixed: inherited contracted-forest rank (unique per forest).
    rank: u64,
    /// global insertion counter; used by conversion tie-breaks.
    itime: u64,
    alive: bool,
}

/// The charging forest: φ-vertices named by sorted vertex pairs, connected
/// by bold/dashed/mixed edges. Exposes just enough mutation surface for
/// fault-injection tests; the real construction goes through
/// [`build_forest`].
#[derive(Debug, Clone)]
pub struct PhiForest {
    pairs: Vec<Pair>,
    id_of: BTreeMap<Pair, usize>,
    root_flag: Vec<bool>,
    adj: Vec<Vec<usize>>,
    edges: Vec<PhiEdge>,
    next_itime: u64,
}

impl PhiForest {
    fn new() -> Self {
        PhiForest {
            pairs: Vec::new(),
            id_of: BTreeMap::new(),
            root_flag: Vec::new(),
            adj: Vec::new(),
            edges: Vec::new(),
            next_itime: 0,
        }
    }

    fn add_vertex(&mut self, p: Pair, root: bool) -> usize {
        debug_assert!(!self.id_of.contains_key(&p));
        let id = self.pairs.len();
        self.pairs.push(p);
        self.root_flag.push(root);
        self.adj.push(Vec::new());
        self.id_of.insert(p, id);
        id
    }

    fn id(&self, p: Pair) -> Option<usize> {
        self.id_of.get(&p).copied()
    }

    fn push_edge(&mut self, a: usize, b: usize, kind: EdgeKind, base: Pair, rank: u64) -> usize {
        let idx = self.edges.len();
        self.edges.push(PhiEdge {
            a,
            b,
            kind,
            base,
            rank,
            itime: self.next_itime,
            alive: true,
        });
        self.next_itime += 1;
        self.adj[a].push(idx);
        self.adj[b].push(idx);
        idx
    }

    fn kill_edge(&mut self, idx: usize) {
        self.edges[idx].alive = false;
    }

    fn other(&self, eidx: usize, x: usize) -> usize {
        let e = &self.edges[eidx];
        if e.a == x {
            e.b
        } else {
            e.a
        }
    }

    /// Component id per φ-vertex; `df_only` restricts to bold/mixed edges.
    fn component_ids(&self, df_only: bool) -> Vec<usize> {
        let n = self.pairs.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &ei in &self.adj[x] {
                    let e = &self.edges[ei];
                    if !e.alive || (df_only && e.kind == EdgeKind::Dashed) {
                        continue;
                    }
                    let y = self.other(ei, x);
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Edge indices of the unique alive path from `a` to `b`, if connected.
    fn path_edges(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if a == b {
            return Some(Vec::new());
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.pairs.len()];
        let mut seen = vec![false; self.pairs.len()];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &ei in &self.adj[x] {
                if !self.edges[ei].alive {
                    continue;
                }
                let y = self.other(ei, x);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, ei));
                    if y == b {
                        let mut path = Vec::new();
                        let mut cur = b;
                        while let Some((px, pe)) = parent[cur] {
                            path.push(pe);
                            cur = px;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// All φ-vertices, sorted.
    pub fn vertices(&self) -> Vec<Pair> {
        let mut v = self.pairs.clone();
        v.sort();
        v
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.id_of.contains_key(&p)
    }

    pub fn is_root(&self, p: Pair) -> bool {
        self.id(p).map(|i| self.root_flag[i]).unwrap_or(false)
    }

    /// Alive edges as `(endpoint, endpoint, kind, base)`, sorted.
    pub fn edges_alive(&self) -> Vec<(Pair, Pair, EdgeKind, Pair)> {
        let mut out: Vec<(Pair, Pair, EdgeKind, Pair)> = self
            .edges
            .iter()
            .filter(|e| e.alive)
            .map(|e| {
                let pa = self.pairs[e.a];
                let pb = self.pairs[e.b];
                let (x, y) = if pa < pb { (pa, pb) } else { (pb, pa) };
                (x, y, e.kind, e.base)
            })
            .collect();
        out.sort();
        out
    }

    /// Remove the alive edge between two φ-vertices. Intended for
    /// fault-injection tests against [`check_invariants`].
    pub fn remove_edge(&mut self, a: Pair, b: Pair) -> Result<()> {
        let (ia, ib) = match (self.id(a), self.id(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::invalid("no such φ-vertex")),
        };
        for &ei in &self.adj[ia] {
            let e = &self.edges[ei];
            if e.alive && (e.a == ib || e.b == ib) {
                self.edges[ei].alive = false;
                return Ok(());
            }
        }
        Err(Error::invalid(format!(
            "no edge between ({},{}) and ({},{})",
            a.0, a.1, b.0, b.1
        )))
    }

    /// Insert an arbitrary edge, bypassing all construction rules. Intended
    /// for fault-injection tests against [`check_invariants`].
    pub fn insert_edge(&mut self, a: Pair, b: Pair, kind: EdgeKind) -> Result<()> {
        let (ia, ib) = match (self.id(a), self.id(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::invalid("no such φ-vertex")),
        };
        if ia == ib {
            return Err(Error::invalid("self loop"));
        }
        self.push_edge(ia, ib, kind, (usize::MAX, usize::MAX), 0);
        Ok(())
    }

    fn count_dashed(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.alive && e.kind == EdgeKind::Dashed)
            .count()
    }
}

/// Contracted forest over the surviving vertices of the current bag.
#[derive(Debug, Clone, Default)]
struct Lambda {
    verts: BTreeSet<usize>,
    /// edge -> rank (unique per forest)
    edges: BTreeMap<Pair, u64>,
}

impl Lambda {
    fn neighbors_by_rank(&self, v: usize) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = self
            .edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(&(a, b), &r)| (r, if a == v { b } else { a }))
            .collect();
        out.sort();
        out
    }

    /// Remove `v`, chaining its neighbors in rank order: the edge to the
    /// j-th neighbor donates its rank to the new chain edge between the
    /// j-th and (j+1)-th neighbors.
    fn delete_chained(&mut self, v: usize) -> Result<()> {
        let nbrs = self.neighbors_by_rank(v);
        for &(_, o) in &nbrs {
            self.edges.remove(&pair_of(v, o));
        }
        self.verts.remove(&v);
        for t in 0..nbrs.len().saturating_sub(1) {
            let p = pair_of(nbrs[t].1, nbrs[t + 1].1);
            if self.edges.insert(p, nbrs[t].0).is_some() {
                return Err(Error::structural(format!(
                    "contracted forest gained a duplicate edge ({},{})",
                    p.0, p.1
                )));
            }
        }
        Ok(())
    }
}

/// Per-bag outcome of the invariant checker.
#[derive(Debug, Clone)]
pub struct BagReport {
    pub bag: usize,
    pub violations: Vec<String>,
}

/// A finished charging-forest construction.
#[derive(Debug, Clone)]
pub struct ForestRun {
    pub phi: PhiForest,
    /// non-glue MST edges of the normalized graph, mapped to original
    /// vertex pairs, with the bag each is assigned to
    pub mst_pairs: BTreeMap<Pair, usize>,
    /// the unique positive rank given to each MST edge
    pub mst_rank: BTreeMap<Pair, u64>,
    /// edge indices (in the normalized graph) of the full MST, glue included
    pub msf_edges: Vec<usize>,
    /// one report per bag when per-bag checking was requested
    pub reports: Vec<BagReport>,
}

struct Builder<'a> {
    g: &'a WeightedGraph,
    ng: &'a NormalizedGraph,
    dec: &'a SmoothPathDecomposition,
    phi: PhiForest,
    lam: Lambda,
    mst_pairs: BTreeMap<Pair, usize>,
    mst_rank: BTreeMap<Pair, u64>,
    /// MST pairs whose bag has been processed, usable as triangle bases
    mst_seen: BTreeSet<Pair>,
    /// adjacency among original vertices over the edges seen so far
    seen_adj: Vec<BTreeSet<usize>>,
    next_rank: u64,
}

/// Build the charging forest for a k-path `g` with decomposition `dec` and
/// its normalization `ng`. Requires positive weights and a connected graph.
/// With `check_every_bag`, the invariant checker runs after each bag and
/// its findings are collected into [`ForestRun::reports`].
pub fn build_forest(
    g: &WeightedGraph,
    ng: &NormalizedGraph,
    dec: &SmoothPathDecomposition,
    check_every_bag: bool,
) -> Result<ForestRun> {
    if dec.is_empty() {
        return Err(Error::invalid("empty decomposition"));
    }
    for e in g.edges() {
        if e.w <= w_zero() {
            return Err(Error::invalid(
                "charging forests require strictly positive edge weights",
            ));
        }
    }
    if !is_connected(g) {
        return Err(Error::invalid("charging forests require a connected graph"));
    }
    if !is_kpath(g, dec) {
        return Err(Error::invalid(
            "graph is not a k-path for the decomposition; complete it first",
        ));
    }

    let msf = mst(&ng.graph);
    let mut mst_pairs = BTreeMap::new();
    for &ei in &msf.edge_indices {
        let e = ng.graph.edge(ei);
        let (ou, ov) = (ng.back[e.u].1, ng.back[e.v].1);
        if ou == ov {
            continue; // glue edge
        }
        let p = pair_of(ou, ov);
        let orig = g
            .edge_index(ou, ov)
            .ok_or_else(|| Error::structural("normalized edge missing from the input graph"))?;
        mst_pairs.insert(p, ng.edge_bag[orig]);
    }

    let mut b = Builder {
        g,
        ng,
        dec,
        phi: PhiForest::new(),
        lam: Lambda::default(),
        mst_pairs,
        mst_rank: BTreeMap::new(),
        mst_seen: BTreeSet::new(),
        seen_adj: vec![BTreeSet::new(); g.n()],
        next_rank: 0,
    };

    let mut reports = Vec::new();
    for i in 0..dec.len() {
        if i == 0 {
            b.init_first_bag()?;
        } else {
            b.step_bag(i)?;
        }
        if check_every_bag {
            let mut violations = check_invariants(&b.phi, b.g, b.ng, b.dec, &b.mst_pairs, i);
            violations.extend(b.check_lambda(i));
            reports.push(BagReport { bag: i, violations });
        }
    }

    b.drop_spent_dashed()?;
    b.final_checks()?;
    Ok(ForestRun {
        phi: b.phi,
        mst_pairs: b.mst_pairs,
        mst_rank: b.mst_rank,
        msf_edges: msf.edge_indices,
        reports,
    })
}

impl<'a> Builder<'a> {
    fn add_phi_vertex(&mut self, p: Pair) {
        let root = self.mst_pairs.contains_key(&p);
        self.phi.add_vertex(p, root);
        self.seen_adj[p.0].insert(p.1);
        self.seen_adj[p.1].insert(p.0);
    }

    fn init_first_bag(&mut self) -> Result<()> {
        let bag = &self.dec.bags()[0];
        let mut pairs = Vec::new();
        for (t, &u) in bag.iter().enumerate() {
            for &v in &bag[t + 1..] {
                pairs.push(pair_of(u, v));
            }
        }
        pairs.sort();
        for p in pairs {
            self.add_phi_vertex(p);
        }

        // rank the first bag's MST edges 1..m₁, then move the highest rank
        // onto an edge incident to the forgotten vertex (so the contraction
        // below removes the locally-highest rank)
        let mut m1: Vec<Pair> = self
            .mst_pairs
            .iter()
            .filter(|&(_, &bg)| bg == 0)
            .map(|(&p, _)| p)
            .collect();
        m1.sort();
        let mut rank_of: BTreeMap<Pair, u64> = m1
            .iter()
            .enumerate()
            .map(|(t, &p)| (p, t as u64 + 1))
            .collect();
        self.next_rank = m1.len() as u64;

        for p in &m1 {
            self.mst_seen.insert(*p);
        }
        self.run_bold_closure(0)?;

        let forgotten = self.dec.forgotten(0);
        let mut contracted: Option<Pair> = None;
        if let Some(v) = forgotten {
            let incident: Vec<Pair> = m1.iter().copied().filter(|p| p.0 == v || p.1 == v).collect();
            if let Some(&star) = incident.iter().max_by_key(|p| rank_of[p]) {
                // swap the star edge's rank with the current holder of m₁
                let top = m1.len() as u64;
                let hold = *rank_of
                    .iter()
                    .find(|&(_, &r)| r == top)
                    .map(|(p, _)| p)
                    .expect("rank m1 is assigned");
                let rs = rank_of[&star];
                rank_of.insert(hold, rs);
                rank_of.insert(star, top);
                contracted = Some(star);
            }
        }
        self.mst_rank.extend(rank_of.iter().map(|(&p, &r)| (p, r)));

        // Λ₁: first bag's MST edges with the starred edge contracted (the
        // forgotten vertex merges into its partner) and the forgotten vertex
        // removed
        self.lam.verts = self.dec.bags()[0].iter().copied().collect();
        if let Some(v) = forgotten {
            self.lam.verts.remove(&v);
        }
        for (&p, &r) in &rank_of {
            if Some(p) == contracted {
                continue;
            }
            let (mut a, mut bb) = p;
            if let (Some(v), Some((cx, cy))) = (forgotten, contracted) {
                let partner = if cx == v { cy } else { cx };
                if a == v {
                    a = partner;
                }
                if bb == v {
                    bb = partner;
                }
            }
            if a == bb {
                return Err(Error::structural("contraction produced a self-loop"));
            }
            if let Some(v) = forgotten {
                if a == v || bb == v {
                    // forgotten vertex was isolated in the first bag's MST
                    // but still carries an edge: impossible
                    return Err(Error::structural(
                        "first-bag contraction left an edge at the forgotten vertex",
                    ));
                }
            }
            if self.lam.edges.insert(pair_of(a, bb), r).is_some() {
                return Err(Error::structural("first-bag contraction duplicated an edge"));
            }
        }
        Ok(())
    }

    fn step_bag(&mut self, i: usize) -> Result<()> {
        let last = i + 1 == self.dec.len();
        let u = self
            .dec
            .introduced(i)
            .ok_or_else(|| Error::structural("non-first bag without an introduced vertex"))?;
        let vopt = self.dec.forgotten(i);

        let mut fresh = Vec::new();
        for &w in &self.dec.bags()[i] {
            if w != u {
                fresh.push(pair_of(u, w));
            }
        }
        fresh.sort();
        for p in &fresh {
            if self.ng.edge_bag[self
                .g
                .edge_index(p.0, p.1)
                .ok_or_else(|| Error::structural("bag pair missing from the k-path"))?]
                != i
            {
                return Err(Error::structural(
                    "edge-to-bag assignment disagrees with the decomposition",
                ));
            }
            self.add_phi_vertex(*p);
        }

        // this bag's MST edges (all incident to the introduced vertex)
        let mut star: Vec<Pair> = self
            .mst_pairs
            .iter()
            .filter(|&(_, &bg)| bg == i)
            .map(|(&p, _)| p)
            .collect();
        star.sort();

        if star.is_empty() {
            // free vertex: mirror the contracted forest with dashed edges
            if vopt == Some(u) || last {
                return Err(Error::structural(
                    "free vertex with no future bag; the graph cannot be connected",
                ));
            }
            let bag_start = self.phi.next_itime;
            let lam_edges: Vec<(Pair, u64)> =
                self.lam.edges.iter().map(|(&p, &r)| (p, r)).collect();
            for ((wj, wk), r) in lam_edges {
                let pa = self.phi.id(pair_of(u, wj)).expect("fresh φ-vertex");
                let pb = self.phi.id(pair_of(u, wk)).expect("fresh φ-vertex");
                let comp = self.phi.component_ids(false);
                if comp[pa] == comp[pb] {
                    return Err(Error::structural(
                        "contracted-forest mirror would close a cycle",
                    ));
                }
                self.phi.push_edge(pa, pb, EdgeKind::Dashed, (wj, wk), r);
            }
            // the forgotten vertex's fresh φ-vertex must end in a dashed-free
            // tree that outlives this bag: convert its highest-ranked fresh
            // dashed edge
            if let Some(v) = vopt {
                let pv = self.phi.id(pair_of(u, v)).expect("fresh φ-vertex");
                let mut best: Option<usize> = None;
                for &ei in &self.phi.adj[pv] {
                    let e = &self.phi.edges[ei];
                    if e.alive && e.kind == EdgeKind::Dashed && e.itime >= bag_start {
                        if best.map(|bi| self.phi.edges[bi].rank < e.rank).unwrap_or(true) {
                            best = Some(ei);
                        }
                    }
                }
                match best {
                    Some(ei) => self.phi.edges[ei].kind = EdgeKind::Mixed,
                    None => {
                        return Err(Error::structural(
                            "forgotten vertex has no contracted-forest edge to convert",
                        ))
                    }
                }
            }
            if i + 1 < self.dec.len() {
                self.dying_pass(i)?;
            }
            // Λ: the new vertex joins isolated; the forgotten vertex chains out
            self.lam.verts.insert(u);
            if let Some(v) = vopt {
                self.lam.delete_chained(v)?;
            }
        } else {
            for p in &star {
                self.mst_seen.insert(*p);
            }
            self.run_bold_closure(i)?;

            let joined_to_forgotten =
                vopt.map(|v| v != u && star.contains(&pair_of(u, v))).unwrap_or(false);
            let branching = vopt.map(|v| v != u).unwrap_or(false) && !joined_to_forgotten;
            if branching && i + 1 < self.dec.len() {
                self.dying_pass(i)?;
            }

            // rank the new MST edges r'+1..r'+p, the forgotten neighbor first
            let mut partners: Vec<usize> = star
                .iter()
                .map(|&(a, bb)| if a == u { bb } else { a })
                .collect();
            partners.sort();
            if joined_to_forgotten {
                let v = vopt.expect("joined_to_forgotten implies a forgotten vertex");
                partners.retain(|&x| x != v);
                partners.insert(0, v);
            }
            let rbase = self.next_rank;
            for (j, &w) in partners.iter().enumerate() {
                self.mst_rank
                    .insert(pair_of(u, w), rbase + 1 + j as u64);
            }
            self.next_rank = rbase + partners.len() as u64;

            match vopt {
                Some(v) if v == u => {
                    // introduced and immediately forgotten: chain the MST
                    // neighbors together, the new vertex never joins Λ
                    for j in 0..partners.len().saturating_sub(1) {
                        let p = pair_of(partners[j], partners[j + 1]);
                        if self.lam.edges.insert(p, rbase + 1 + j as u64).is_some() {
                            return Err(Error::structural(
                                "contracted forest gained a duplicate chain edge",
                            ));
                        }
                    }
                }
                Some(v) if joined_to_forgotten => {
                    // the new vertex inherits the forgotten vertex's place
                    let vedges = self.lam.neighbors_by_rank(v);
                    for &(_, o) in &vedges {
                        self.lam.edges.remove(&pair_of(v, o));
                    }
                    self.lam.verts.remove(&v);
                    self.lam.verts.insert(u);
                    for &(r, o) in &vedges {
                        if self.lam.edges.insert(pair_of(u, o), r).is_some() {
                            return Err(Error::structural(
                                "contracted-forest inheritance duplicated an edge",
                            ));
                        }
                    }
                    for (j, &w) in partners.iter().enumerate().skip(1) {
                        if self
                            .lam
                            .edges
                            .insert(pair_of(u, w), rbase + 1 + j as u64)
                            .is_some()
                        {
                            return Err(Error::structural(
                                "contracted forest gained a duplicate star edge",
                            ));
                        }
                    }
                }
                Some(v) => {
                    // general case: add the new star, then chain the forgotten
                    // vertex out
                    self.lam.verts.insert(u);
                    for (j, &w) in partners.iter().enumerate() {
                        if self
                            .lam
                            .edges
                            .insert(pair_of(u, w), rbase + 1 + j as u64)
                            .is_some()
                        {
                            return Err(Error::structural(
                                "contracted forest gained a duplicate star edge",
                            ));
                        }
                    }
                    self.lam.delete_chained(v)?;
                }
                None => {
                    // final bag: nothing is forgotten
                    self.lam.verts.insert(u);
                    for (j, &w) in partners.iter().enumerate() {
                        if self
                            .lam
                            .edges
                            .insert(pair_of(u, w), rbase + 1 + j as u64)
                            .is_some()
                        {
                            return Err(Error::structural(
                                "contracted forest gained a duplicate star edge",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedily add bold edges satisfying the triangle rule until no
    /// candidate remains. A candidate `((u,v),(u,w))` needs base `vw` to be
    /// an MST edge of the bag being processed (each base therefore collects
    /// triangles in one bag only) and the two φ-vertices to sit in distinct
    /// dashed-free trees holding at most one root between them (so no
    /// dashed-free tree ever acquires a second root); joining within one
    /// tree of Φ deletes the most recently added dashed edge on the
    /// connecting path first. Candidates are scanned in lexicographic order
    /// and structures are recomputed after every mutation.
    fn run_bold_closure(&mut self, i: usize) -> Result<()> {
        let bases: Vec<Pair> = self
            .mst_pairs
            .iter()
            .filter(|&(_, &bg)| bg == i)
            .map(|(&p, _)| p)
            .collect();
        loop {
            let comp = self.phi.component_ids(false);
            let dfc = self.phi.component_ids(true);
            let ndf = dfc.iter().copied().max().map(|m| m + 1).unwrap_or(0);
            let mut df_roots = vec![0usize; ndf];
            for (id, &c) in dfc.iter().enumerate() {
                if self.phi.root_flag[id] {
                    df_roots[c] += 1;
                }
            }

            let mut cands: Vec<(Pair, Pair, Pair)> = Vec::new();
            for &(v, w) in &bases {
                for &u in self.seen_adj[v].intersection(&self.seen_adj[w]) {
                    if u == v || u == w {
                        continue;
                    }
                    let p1 = pair_of(u, v);
                    let p2 = pair_of(u, w);
                    let (pa, pb) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
                    cands.push((pa, pb, (v, w)));
                }
            }
            cands.sort();
            cands.dedup();

            let mut progressed = false;
            for (pa, pb, base) in cands {
                let ia = self.phi.id(pa).expect("candidate φ-vertex exists");
                let ib = self.phi.id(pb).expect("candidate φ-vertex exists");
                if dfc[ia] == dfc[ib] {
                    continue;
                }
                if df_roots[dfc[ia]] + df_roots[dfc[ib]] > 1 {
                    continue;
                }
                if comp[ia] != comp[ib] {
                    self.phi.push_edge(ia, ib, EdgeKind::Bold, base, 0);
                } else {
                    let path = self.phi.path_edges(ia, ib).ok_or_else(|| {
                        Error::structural("same-component φ-vertices are not connected")
                    })?;
                    let victim = path
                        .iter()
                        .copied()
                        .filter(|&ei| self.phi.edges[ei].kind == EdgeKind::Dashed)
                        .max_by_key(|&ei| self.phi.edges[ei].itime)
                        .ok_or_else(|| {
                            Error::structural(
                                "triangle-rule cycle contains no dashed edge to delete",
                            )
                        })?;
                    self.phi.kill_edge(victim);
                    self.phi.push_edge(ia, ib, EdgeKind::Bold, base, 0);
                }
                progressed = true;
                break;
            }
            if !progressed {
                return Ok(());
            }
        }
    }

    /// Reconnect every dashed-free tree whose φ-vertices all become
    /// inactive at the next bag: BFS through the surrounding tree of Φ to
    /// the nearest still-active φ-vertex and convert the dashed edges along
    /// the discovered path to mixed. Dashed edges are explored earliest
    /// insertion first, then highest rank, so the converted set matches the
    /// construction's tie-breaks.
    fn dying_pass(&mut self, i: usize) -> Result<()> {
        let next_bag: BTreeSet<usize> = self.dec.bags()[i + 1].iter().copied().collect();
        let active = |p: Pair| next_bag.contains(&p.0) && next_bag.contains(&p.1);
        loop {
            let dfc = self.phi.component_ids(true);
            let ncomp = dfc.iter().copied().max().map(|m| m + 1).unwrap_or(0);
            let mut has_root = vec![false; ncomp];
            let mut has_active = vec![false; ncomp];
            for (id, &c) in dfc.iter().enumerate() {
                if self.phi.root_flag[id] {
                    has_root[c] = true;
                }
                if active(self.phi.pairs[id]) {
                    has_active[c] = true;
                }
            }
            // the dying tree containing the smallest φ-vertex goes first
            let mut seed: Option<usize> = None;
            let mut order: Vec<usize> = (0..self.phi.pairs.len()).collect();
            order.sort_by_key(|&id| self.phi.pairs[id]);
            for &id in &order {
                let c = dfc[id];
                if !has_root[c] && !has_active[c] {
                    seed = Some(id);
                    break;
                }
            }
            let seed = match seed {
                Some(s) => s,
                None => return Ok(()),
            };
            let seed_comp = dfc[seed];

            // BFS from the dying tree across the whole tree of Φ
            let mut parent: Vec<Option<usize>> = vec![None; self.phi.pairs.len()];
            let mut seen = vec![false; self.phi.pairs.len()];
            let mut queue = VecDeque::new();
            for &id in &order {
                if dfc[id] == seed_comp {
                    seen[id] = true;
                    queue.push_back(id);
                }
            }
            let mut target: Option<usize> = None;
            'bfs: while let Some(x) = queue.pop_front() {
                let mut out: Vec<usize> = self.phi.adj[x]
                    .iter()
                    .copied()
                    .filter(|&ei| self.phi.edges[ei].alive)
                    .collect();
                out.sort_by_key(|&ei| {
                    let e = &self.phi.edges[ei];
                    let dashed = e.kind == EdgeKind::Dashed;
                    (
                        dashed,
                        if dashed { e.itime } else { 0 },
                        if dashed { u64::MAX - e.rank } else { 0 },
                        self.phi.pairs[self.phi.other(ei, x)],
                    )
                });
                for ei in out {
                    let y = self.phi.other(ei, x);
                    if seen[y] {
                        continue;
                    }
                    seen[y] = true;
                    parent[y] = Some(ei);
                    if active(self.phi.pairs[y]) {
                        target = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
            let target = target.ok_or_else(|| {
                Error::structural(
                    "a dashed-free tree has no reachable active φ-vertex; construction failed",
                )
            })?;
            let mut converted = 0usize;
            let mut cur = target;
            while let Some(ei) = parent[cur] {
                if self.phi.edges[ei].kind == EdgeKind::Dashed {
                    self.phi.edges[ei].kind = EdgeKind::Mixed;
                    converted += 1;
                }
                cur = self.phi.other(ei, cur);
            }
            if converted == 0 {
                return Err(Error::structural(
                    "dying tree reached an active φ-vertex without any conversion",
                ));
            }
        }
    }

    /// Verify the contracted forest against its defining property: each
    /// edge's rank equals the minimum MST-edge rank along the path its
    /// endpoints trace through the MST seen so far, ranks are unique, and
    /// the component structure matches the seen MST exactly.
    fn check_lambda(&self, i: usize) -> Vec<String> {
        let mut out = Vec::new();
        let last = i + 1 == self.dec.len();
        let mut expected: BTreeSet<usize> = self.dec.bags()[i].iter().copied().collect();
        if !last {
            if let Some(v) = self.dec.forgotten(i) {
                expected.remove(&v);
            }
        }
        if self.lam.verts != expected {
            out.push(format!(
                "bag {}: contracted forest spans {:?}, expected {:?}",
                i, self.lam.verts, expected
            ));
        }

        // prefix MST adjacency over original vertices
        let mut adj: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        let mut uf = UnionFind::new(self.g.n());
        for (&(a, bb), &bg) in &self.mst_pairs {
            if bg <= i {
                let r = self.mst_rank[&(a, bb)];
                adj.entry(a).or_default().push((bb, r));
                adj.entry(bb).or_default().push((a, r));
                uf.union(a, bb);
            }
        }

        let mut seen_ranks = BTreeSet::new();
        for (&(a, bb), &r) in &self.lam.edges {
            if !seen_ranks.insert(r) {
                out.push(format!("bag {i}: duplicate contracted-forest rank {r}"));
            }
            if !self.lam.verts.contains(&a) || !self.lam.verts.contains(&bb) {
                out.push(format!(
                    "bag {i}: contracted-forest edge ({a},{bb}) leaves the vertex set"
                ));
                continue;
            }
            // path minimum in the seen MST
            match path_min_rank(&adj, a, bb) {
                Some(minr) => {
                    if minr != r {
                        out.push(format!(
                            "bag {i}: edge ({a},{bb}) has rank {r}, path minimum is {minr}"
                        ));
                    }
                }
                None => out.push(format!(
                    "bag {i}: contracted-forest edge ({a},{bb}) joins disconnected vertices"
                )),
            }
        }

        // forest & component agreement
        let mut luf = UnionFind::new(self.g.n());
        for &(a, bb) in self.lam.edges.keys() {
            if !luf.union(a, bb) {
                out.push(format!("bag {i}: contracted forest contains a cycle"));
            }
        }
        let vs: Vec<usize> = self.lam.verts.iter().copied().collect();
        for (t, &x) in vs.iter().enumerate() {
            for &y in &vs[t + 1..] {
                let together = luf.same(x, y);
                let connected = uf.same(x, y);
                if together != connected {
                    out.push(format!(
                        "bag {i}: vertices {x},{y} {} in the contracted forest but {} in the seen MST",
                        if together { "joined" } else { "split" },
                        if connected { "joined" } else { "split" },
                    ));
                }
            }
        }
        out
    }

    /// Discard the dashed edges that survive the last bag. A surviving
    /// dashed edge was never needed as a conversion route, which is only
    /// sound when both of its endpoints already sit in rooted dashed-free
    /// trees; anything else is reported as a structural defect.
    fn drop_spent_dashed(&mut self) -> Result<()> {
        let dfc = self.phi.component_ids(true);
        let ndf = dfc.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut df_rooted = vec![false; ndf];
        for (id, &c) in dfc.iter().enumerate() {
            if self.phi.root_flag[id] {
                df_rooted[c] = true;
            }
        }
        let spent: Vec<usize> = (0..self.phi.edges.len())
            .filter(|&ei| self.phi.edges[ei].alive && self.phi.edges[ei].kind == EdgeKind::Dashed)
            .collect();
        for ei in spent {
            let (a, b) = (self.phi.edges[ei].a, self.phi.edges[ei].b);
            if !df_rooted[dfc[a]] || !df_rooted[dfc[b]] {
                return Err(Error::structural(
                    "finished charging forest keeps a dashed edge next to an unrooted tree",
                ));
            }
            self.phi.kill_edge(ei);
        }
        Ok(())
    }

    fn final_checks(&self) -> Result<()> {
        if self.phi.count_dashed() > 0 {
            return Err(Error::structural(
                "finished charging forest still contains dashed edges",
            ));
        }
        let comp = self.phi.component_ids(false);
        let ncomp = comp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut roots = vec![0usize; ncomp];
        for (id, &c) in comp.iter().enumerate() {
            if self.phi.root_flag[id] {
                roots[c] += 1;
            }
        }
        if roots.iter().any(|&r| r != 1) {
            return Err(Error::structural(
                "finished charging forest has a tree without exactly one root",
            ));
        }
        if self.phi.pairs.len() != self.g.m() {
            return Err(Error::structural(
                "finished charging forest does not cover every edge",
            ));
        }
        Ok(())
    }
}

fn path_min_rank(
    adj: &BTreeMap<usize, Vec<(usize, u64)>>,
    a: usize,
    b: usize,
) -> Option<u64> {
    if a == b {
        return None;
    }
    let mut parent: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(x) = queue.pop_front() {
        if let Some(nbrs) = adj.get(&x) {
            for &(y, r) in nbrs {
                if seen.insert(y) {
                    parent.insert(y, (x, r));
                    if y == b {
                        let mut cur = b;
                        let mut best = u64::MAX;
                        while cur != a {
                            let (px, r) = parent[&cur];
                            best = best.min(r);
                            cur = px;
                        }
                        return Some(best);
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    None
}

/// Brute-force check of the four structural invariants after bag `i`
/// (0-based), plus the basic forest facts they presuppose. Returns one
/// message per violation; an empty list means the state is consistent.
///
/// The invariants, with components taken in the MST restricted to the
/// vertices seen so far:
/// (i) all φ-vertices spanning the same pair of distinct components share
///     one unrooted tree of Φ, and unrooted trees hold only such spanning
///     φ-vertices;
/// (ii) φ-vertices inside a single component sit in rooted dashed-free
///     trees;
/// (iii) every unrooted dashed-free tree keeps at least one φ-vertex that
///     survives into the next bag (at the last bag, none may remain);
/// (iv) for every window of bags `j..=i`, with components taken over the
///     MST edges assigned to those bags, φ-vertices joining two distinct
///     window components at the window's boundary bags — provided the
///     components are not already joined in the seen MST — share one
///     unrooted dashed-free tree.
pub fn check_invariants(
    phi: &PhiForest,
    g: &WeightedGraph,
    ng: &NormalizedGraph,
    dec: &SmoothPathDecomposition,
    mst_pairs: &BTreeMap<Pair, usize>,
    i: usize,
) -> Vec<String> {
    let mut out = Vec::new();
    let last = i + 1 == dec.len();

    // expected φ-vertex set: every edge assigned to a bag ≤ i
    let mut expected = BTreeSet::new();
    for (ei, e) in g.edges().iter().enumerate() {
        if ng.edge_bag[ei] <= i {
            expected.insert((e.u, e.v));
        }
    }
    let have: BTreeSet<Pair> = phi.vertices().into_iter().collect();
    if have != expected {
        out.push(format!(
            "bag {}: φ-vertex set has {} members, expected {}",
            i,
            have.len(),
            expected.len()
        ));
        return out;
    }

    // forest-ness and root placement
    let mut fuf = UnionFind::new(phi.pairs.len());
    for e in phi.edges.iter().filter(|e| e.alive) {
        if e.a == e.b {
            out.push(format!("bag {i}: self loop in the charging forest"));
        } else if !fuf.union(e.a, e.b) {
            out.push(format!("bag {i}: cycle in the charging forest"));
        }
    }
    for (id, &p) in phi.pairs.iter().enumerate() {
        let should = mst_pairs.contains_key(&p);
        if phi.root_flag[id] != should {
            out.push(format!(
                "bag {i}: φ-vertex ({},{}) root flag disagrees with the MST",
                p.0, p.1
            ));
        }
    }
    if !out.is_empty() {
        return out;
    }

    let comp = phi.component_ids(false);
    let dfc = phi.component_ids(true);
    let ncomp = comp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let ndf = dfc.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut roots_in = vec![0usize; ncomp];
    let mut df_rooted = vec![false; ndf];
    for (id, &c) in comp.iter().enumerate() {
        if phi.root_flag[id] {
            roots_in[c] += 1;
            df_rooted[dfc[id]] = true;
        }
    }
    let mut df_roots = vec![0usize; ndf];
    for (id, &c) in dfc.iter().enumerate() {
        if phi.root_flag[id] {
            df_roots[c] += 1;
        }
    }
    for (c, &r) in df_roots.iter().enumerate() {
        if r > 1 {
            out.push(format!("bag {i}: dashed-free tree {c} holds {r} roots"));
        }
    }

    // seen-MST components over original vertices
    let mut uf = UnionFind::new(g.n());
    for (&(a, b), &bg) in mst_pairs {
        if bg <= i {
            uf.union(a, b);
        }
    }

    // (i): group spanning φ-vertices by their component pair
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (id, &p) in phi.pairs.iter().enumerate() {
        let (ca, cb) = (uf.find(p.0), uf.find(p.1));
        if ca != cb {
            groups
                .entry((ca.min(cb), ca.max(cb)))
                .or_default()
                .push(id);
        } else {
            // (ii)
            if !df_rooted[dfc[id]] {
                out.push(format!(
                    "bag {}: φ-vertex ({},{}) joins one component but its dashed-free tree is unrooted",
                    i, p.0, p.1
                ));
            }
        }
    }
    for ((_, _), ids) in &groups {
        let c0 = comp[ids[0]];
        if ids.iter().any(|&id| comp[id] != c0) {
            let p = phi.pairs[ids[0]];
            out.push(format!(
                "bag {}: spanning φ-vertices for the component pair of ({},{}) split across trees",
                i, p.0, p.1
            ));
        }
        if roots_in[c0] > 0 {
            let p = phi.pairs[ids[0]];
            out.push(format!(
                "bag {}: spanning φ-vertices for the component pair of ({},{}) sit in a rooted tree",
                i, p.0, p.1
            ));
        }
    }
    // unrooted trees hold spanning φ-vertices only
    for (id, &p) in phi.pairs.iter().enumerate() {
        if roots_in[comp[id]] == 0 && uf.same(p.0, p.1) {
            out.push(format!(
                "bag {}: unrooted tree holds the one-component φ-vertex ({},{})",
                i, p.0, p.1
            ));
        }
    }

    // (iii)
    if !last {
        let next: BTreeSet<usize> = dec.bags()[i + 1].iter().copied().collect();
        let mut ok = vec![false; ndf];
        for (id, &p) in phi.pairs.iter().enumerate() {
            if next.contains(&p.0) && next.contains(&p.1) {
                ok[dfc[id]] = true;
            }
        }
        for c in 0..ndf {
            if !df_rooted[c] && !ok[c] {
                let p = phi
                    .pairs
                    .iter()
                    .enumerate()
                    .filter(|&(id, _)| dfc[id] == c)
                    .map(|(_, &p)| p)
                    .min()
                    .expect("component is nonempty");
                out.push(format!(
                    "bag {}: unrooted dashed-free tree of ({},{}) has no surviving φ-vertex",
                    i, p.0, p.1
                ));
            }
        }
    } else {
        for c in 0..ndf {
            if !df_rooted[c] {
                out.push(format!("bag {i}: final forest has an unrooted dashed-free tree"));
            }
        }
    }

    // (iv): windows j..=i, components over the MST edges assigned to the
    // window's bags (each bag contributes its own star, not every MST edge
    // its vertices happen to span)
    for j in 0..=i {
        let mut wuf = UnionFind::new(g.n());
        for (&(a, b), &bg) in mst_pairs {
            if bg >= j && bg <= i {
                wuf.union(a, b);
            }
        }
        let bag_j: Vec<usize> = dec.bags()[j].clone();
        let bag_i: Vec<usize> = dec.bags()[i].clone();
        // window components touching both boundary bags
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for &x in &bag_j {
            comps.entry(wuf.find(x)).or_default().0.push(x);
        }
        for &x in &bag_i {
            comps.entry(wuf.find(x)).or_default().1.push(x);
        }
        let full: Vec<(usize, Vec<usize>, Vec<usize>)> = comps
            .into_iter()
            .filter(|(_, (a, b))| !a.is_empty() && !b.is_empty())
            .map(|(c, (a, b))| (c, a, b))
            .collect();
        for s in 0..full.len() {
            for t in s + 1..full.len() {
                let (c1, ref j1, ref i1) = full[s];
                let (c2, ref j2, ref i2) = full[t];
                // pairs inside one seen-MST component answer to (ii) instead
                if uf.same(c1, c2) {
                    continue;
                }
                let mut members = Vec::new();
                for &y1 in j1 {
                    for &y2 in j2 {
                        members.push(pair_of(y1, y2));
                    }
                }
                for &y1 in i1 {
                    for &y2 in i2 {
                        members.push(pair_of(y1, y2));
                    }
                }
                members.sort();
                members.dedup();
                let ids: Vec<usize> = members
                    .iter()
                    .filter_map(|&p| phi.id(p))
                    .collect();
                if ids.len() != members.len() {
                    out.push(format!(
                        "bag {i}: window {j}..{i} boundary pair is missing a φ-vertex"
                    ));
                    continue;
                }
                if ids.is_empty() {
                    continue;
                }
                let d0 = dfc[ids[0]];
                if ids.iter().any(|&id| dfc[id] != d0) {
                    let p = phi.pairs[ids[0]];
                    out.push(format!(
                        "bag {}: window {}..{} boundary φ-vertices near ({},{}) split across dashed-free trees",
                        i, j, i, p.0, p.1
                    ));
                } else if df_rooted[d0] {
                    let p = phi.pairs[ids[0]];
                    out.push(format!(
                        "bag {}: window {}..{} boundary φ-vertices near ({},{}) sit in a rooted dashed-free tree",
                        i, j, i, p.0, p.1
                    ));
                }
            }
        }
    }

    out
}

/// Extract the charging scheme from a finished forest: per tree, a DFS
/// pre-order from the root; each non-root φ-vertex charges the path between
/// its endpoints in `MST ∪ {pred}` forced through its pre-order predecessor
/// `pred` when such a simple path exists, and the plain MST path otherwise,
/// mapped back to original vertices and reduced to a simple path. Since
/// every φ-vertex is the predecessor of at most one other, no non-tree edge
/// is ever charged twice.
pub fn extract_scheme(
    run: &ForestRun,
    g: &WeightedGraph,
    ng: &NormalizedGraph,
) -> Result<ChargingScheme> {
    let phi = &run.phi;
    if phi.count_dashed() > 0 {
        return Err(Error::structural("cannot extract from a forest with dashed edges"));
    }

    // MST of the normalized graph as a rooted tree
    let np = ng.graph.n();
    let mut tadj: Vec<Vec<usize>> = vec![Vec::new(); np];
    for &ei in &run.msf_edges {
        let e = ng.graph.edge(ei);
        tadj[e.u].push(e.v);
        tadj[e.v].push(e.u);
    }
    let mut parent = vec![usize::MAX; np];
    let mut depth = vec![usize::MAX; np];
    let mut queue = VecDeque::from([0usize]);
    depth[0] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in &tadj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if depth.iter().any(|&d| d == usize::MAX) {
        return Err(Error::structural("normalized MST does not span all copies"));
    }
    let tree_path = |a: usize, b: usize| -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while depth[x] > depth[y] {
            x = parent[x];
            left.push(x);
        }
        while depth[y] > depth[x] {
            y = parent[y];
            right.push(y);
        }
        while x != y {
            x = parent[x];
            left.push(x);
            y = parent[y];
            right.push(y);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    };

    // copy endpoints of each real edge, aligned with the sorted original pair
    let mut copies: BTreeMap<Pair, (usize, usize)> = BTreeMap::new();
    for e in ng.graph.edges() {
        let (ou, ov) = (ng.back[e.u].1, ng.back[e.v].1);
        if ou == ov {
            continue;
        }
        let ends = if ou < ov { (e.u, e.v) } else { (e.v, e.u) };
        copies.insert(pair_of(ou, ov), ends);
    }

    let comp = phi.component_ids(false);
    let ncomp = comp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut root_of = vec![usize::MAX; ncomp];
    for (id, &c) in comp.iter().enumerate() {
        if phi.root_flag[id] {
            if root_of[c] != usize::MAX {
                return Err(Error::structural("a tree of Φ has two roots"));
            }
            root_of[c] = id;
        }
    }
    if root_of.iter().any(|&r| r == usize::MAX) {
        return Err(Error::structural("a tree of Φ has no root"));
    }

    let mut paths: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
    let mut mark = vec![false; np];
    for &root in &root_of {
        // DFS pre-order, children in lexicographic order
        let mut order = Vec::new();
        let mut visited = vec![false; phi.pairs.len()];
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            let mut kids: Vec<usize> = phi.adj[x]
                .iter()
                .copied()
                .filter(|&ei| phi.edges[ei].alive)
                .map(|ei| phi.other(ei, x))
                .filter(|&y| !visited[y])
                .collect();
            kids.sort_by_key(|&y| phi.pairs[y]);
            kids.dedup();
            for &k in &kids {
                visited[k] = true;
            }
            for &k in kids.iter().rev() {
                stack.push(k);
            }
        }
        for t in 1..order.len() {
            let cur = phi.pairs[order[t]];
            let pred = phi.pairs[order[t - 1]];
            let (ca, cb) = copies[&cur];
            let (px, py) = copies[&pred];
            // orient the forced crossing of pred so the two MST segments
            // are vertex-disjoint
            let mut chosen: Option<(Vec<usize>, Vec<usize>)> = None;
            for (s1_end, s2_start) in [(px, py), (py, px)] {
                let seg1 = tree_path(ca, s1_end);
                let seg2 = tree_path(s2_start, cb);
                let mut clash = false;
                for &x in &seg1 {
                    mark[x] = true;
                }
                for &x in &seg2 {
                    if mark[x] {
                        clash = true;
                        break;
                    }
                }
                for &x in &seg1 {
                    mark[x] = false;
                }
                if !clash {
                    chosen = Some((seg1, seg2));
                    break;
                }
            }
            // When the predecessor sits so far across the tree that neither
            // crossing is simple, charge the plain MST path instead: it is
            // always simple, stays within the same realized tree edges, and
            // only relaxes the counts (the predecessor then goes uncharged).
            let walk_copies: Vec<usize> = match chosen {
                Some((seg1, seg2)) => seg1.into_iter().chain(seg2).collect(),
                None => tree_path(ca, cb),
            };
            let mut walk: Vec<usize> = Vec::with_capacity(walk_copies.len());
            for &c in walk_copies.iter() {
                let o = ng.back[c].1;
                if walk.last() != Some(&o) {
                    walk.push(o);
                }
            }
            // cut any loops introduced by copy collapsing
            let mut simple: Vec<usize> = Vec::with_capacity(walk.len());
            for &v in &walk {
                if let Some(pos) = simple.iter().position(|&x| x == v) {
                    simple.truncate(pos + 1);
                } else {
                    simple.push(v);
                }
            }
            if simple.first() != Some(&cur.0) && simple.first() != Some(&cur.1) {
                return Err(Error::structural("charging path lost its start"));
            }
            if simple.len() < 2
                || pair_of(*simple.first().unwrap(), *simple.last().unwrap()) != cur
            {
                return Err(Error::structural(format!(
                    "charging path for ({},{}) does not join its endpoints",
                    cur.0, cur.1
                )));
            }
            let mut edge_path = Vec::with_capacity(simple.len() - 1);
            for t in 0..simple.len() - 1 {
                let p = pair_of(simple[t], simple[t + 1]);
                if g.edge_index(p.0, p.1).is_none() {
                    return Err(Error::structural(format!(
                        "charging path uses the non-edge ({},{})",
                        p.0, p.1
                    )));
                }
                if p == cur {
                    return Err(Error::structural(
                        "charging path passes through the charged edge",
                    ));
                }
                edge_path.push(p);
            }
            paths.insert(cur, edge_path);
        }
    }

    Ok(ChargingScheme::new(
        run.mst_pairs.keys().copied().collect(),
        paths,
    ))
}

/// Audit entry for one positive-weight MST edge.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeAudit {
    pub edge: Pair,
    /// bold forest edges whose base this edge is
    pub triangles: usize,
    /// mixed forest edges whose pseudo-edge path crosses this edge
    pub pseudo_triangles: usize,
    /// appearances in the extracted scheme's paths
    pub total_charges: usize,
}

/// Whole-instance audit of the charge-count bounds at pathwidth `pw`:
/// per MST edge, at most `pw−2` triangles, `2·pw²` pseudo-triangles and
/// `2(pw−2)+4pw²` total charges.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub pw: usize,
    pub triangle_bound: usize,
    pub pseudo_bound: usize,
    pub total_bound: usize,
    pub per_edge: Vec<EdgeAudit>,
    pub max_triangles: usize,
    pub max_pseudo: usize,
    pub max_total: usize,
    pub violations: Vec<String>,
}

/// The per-edge bound implied by the construction at pathwidth `pw`.
pub fn charge_bound(pw: usize) -> usize {
    2 * pw.saturating_sub(2) + 4 * pw * pw
}

/// Count, for every positive-weight MST edge, its associated triangles,
/// the pseudo-edges crossing it, and its total charges in `scheme`
/// (normally the scheme extracted from `run` before any strengthening).
pub fn audit_charges(run: &ForestRun, scheme: &ChargingScheme, pw: usize) -> AuditReport {
    let triangle_bound = pw.saturating_sub(2);
    let pseudo_bound = 2 * pw * pw;
    let total_bound = charge_bound(pw);

    // MST adjacency over original vertices, for pseudo-edge paths
    let mut adj: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for &(a, b) in run.mst_pairs.keys() {
        adj.entry(a).or_default().push((b, 0));
        adj.entry(b).or_default().push((a, 0));
    }
    let tree_pairs_between = |a: usize, b: usize| -> Vec<Pair> {
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([a]);
        let mut seen = BTreeSet::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            if let Some(nbrs) = adj.get(&x) {
                for &(y, _) in nbrs {
                    if seen.insert(y) {
                        parent.insert(y, x);
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = b;
        while cur != a {
            match parent.get(&cur) {
                Some(&p) => {
                    out.push(pair_of(p, cur));
                    cur = p;
                }
                None => return Vec::new(),
            }
        }
        out
    };

    let mut tri: BTreeMap<Pair, usize> = BTreeMap::new();
    let mut pseudo: BTreeMap<Pair, usize> = BTreeMap::new();
    for (_, _, kind, base) in run.phi.edges_alive() {
        match kind {
            EdgeKind::Bold => *tri.entry(base).or_insert(0) += 1,
            EdgeKind::Mixed => {
                for p in tree_pairs_between(base.0, base.1) {
                    *pseudo.entry(p).or_insert(0) += 1;
                }
            }
            EdgeKind::Dashed => {}
        }
    }
    let counts = scheme.charge_counts();

    let mut per_edge = Vec::new();
    let mut violations = Vec::new();
    let (mut mt, mut mp, mut mc) = (0, 0, 0);
    for &p in run.mst_pairs.keys() {
        let t = tri.get(&p).copied().unwrap_or(0);
        let ps = pseudo.get(&p).copied().unwrap_or(0);
        let c = counts.get(&p).copied().unwrap_or(0);
        mt = mt.max(t);
        mp = mp.max(ps);
        mc = mc.max(c);
        if t > triangle_bound {
            violations.push(format!(
                "edge ({},{}): {} triangles exceed the bound {}",
                p.0, p.1, t, triangle_bound
            ));
        }
        if ps > pseudo_bound {
            violations.push(format!(
                "edge ({},{}): {} pseudo-triangles exceed the bound {}",
                p.0, p.1, ps, pseudo_bound
            ));
        }
        if c > total_bound {
            violations.push(format!(
                "edge ({},{}): {} charges exceed the bound {}",
                p.0, p.1, c, total_bound
            ));
        }
        per_edge.push(EdgeAudit {
            edge: p,
            triangles: t,
            pseudo_triangles: ps,
            total_charges: c,
        });
    }

    AuditReport {
        pw,
        triangle_bound,
        pseudo_bound,
        total_bound,
        per_edge,
        max_triangles: mt,
        max_pseudo: mp,
        max_total: mc,
        violations,
    }
}
