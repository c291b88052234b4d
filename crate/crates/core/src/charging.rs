//! Charging schemes: a spanning tree `T` of a spanner `S` plus, for every
//! non-tree edge `e`, a simple path `P(e)` between `e`'s endpoints in `S`.
//!
//! A scheme is *k-simple* when every non-tree edge appears in at most one
//! path and every tree edge in at most `k`; *acyclic* when the "charges"
//! digraph on non-tree edges (an arc `e1 -> e0` whenever `e0` lies on
//! `P(e1)`) has no directed cycle; and *strong* when
//! `(1+eps) * w(e) <= w(P(e))` for every pair. A verified scheme certifies
//! the lightness bound `w(S) <= (1 + k/eps) * w(T)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{w_int, w_zero, Weight, WeightedGraph};
use crate::{Error, Result};

/// Sorted vertex pair naming an edge.
pub type Pair = (usize, usize);

pub fn pair_of(u: usize, v: usize) -> Pair {
    (u.min(v), u.max(v))
}

/// A charging scheme over some spanner graph. Edges are named by sorted
/// vertex pairs; each path is an ordered edge list running from one
/// endpoint of its key to the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargingScheme {
    pub tree: BTreeSet<Pair>,
    pub paths: BTreeMap<Pair, Vec<Pair>>,
}

impl ChargingScheme {
    pub fn new(tree: BTreeSet<Pair>, paths: BTreeMap<Pair, Vec<Pair>>) -> Self {
        ChargingScheme { tree, paths }
    }

    /// How many times each edge is charged (appears in some path).
    pub fn charge_counts(&self) -> BTreeMap<Pair, usize> {
        let mut counts = BTreeMap::new();
        for path in self.paths.values() {
            for &f in path {
                *counts.entry(f).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Outcome of checking a scheme against a spanner graph.
#[derive(Debug, Clone)]
pub struct SchemeReport {
    /// tree edges exist in the graph and form a maximal spanning forest
    pub tree_ok: bool,
    /// the path keys are exactly the non-tree edges of the graph
    pub coverage_ok: bool,
    /// every path is a simple path between its key's endpoints
    pub paths_ok: bool,
    pub max_nontree_charge: usize,
    pub max_tree_charge: usize,
    /// non-tree edges charged <= 1 and tree edges <= k
    pub k_simple_ok: bool,
    /// the charges digraph on non-tree edges has no directed cycle
    pub acyclic_ok: bool,
    /// (1+eps) * w(e) <= w(P(e)) for every pair
    pub strong_ok: bool,
    pub w_tree: Weight,
    pub w_spanner: Weight,
    pub violations: Vec<String>,
}

impl SchemeReport {
    pub fn all_ok(&self) -> bool {
        self.tree_ok
            && self.coverage_ok
            && self.paths_ok
            && self.k_simple_ok
            && self.acyclic_ok
            && self.strong_ok
    }
}

/// Walk a path given as an ordered edge list; return the vertex sequence if
/// it is a simple path from `u` to `v` (either orientation), else an error
/// message.
fn walk_path(path: &[Pair], u: usize, v: usize) -> std::result::Result<Vec<usize>, String> {
    if path.is_empty() {
        return Err("empty path".into());
    }
    let (a0, b0) = path[0];
    let start = if a0 == u || b0 == u {
        u
    } else if a0 == v || b0 == v {
        v
    } else {
        return Err(format!("first edge ({a0},{b0}) touches neither endpoint"));
    };
    let goal = if start == u { v } else { u };
    let mut seen = BTreeSet::new();
    seen.insert(start);
    let mut cur = start;
    let mut verts = vec![start];
    for &(a, b) in path {
        let next = if a == cur {
            b
        } else if b == cur {
            a
        } else {
            return Err(format!("edge ({a},{b}) does not continue the walk at {cur}"));
        };
        if !seen.insert(next) {
            return Err(format!("vertex {next} repeats; path is not simple"));
        }
        verts.push(next);
        cur = next;
    }
    if cur != goal {
        return Err(format!("path ends at {cur}, expected {goal}"));
    }
    Ok(verts)
}

/// Verify a charging scheme against a spanner graph `s` with stretch
/// parameter `eps`, at simplicity level `k`. All outcomes are reported;
/// only malformed arguments (`eps <= 0`) produce an `Err`.
pub fn verify_scheme(
    s: &WeightedGraph,
    eps: &Weight,
    cs: &ChargingScheme,
    k: usize,
) -> Result<SchemeReport> {
    if *eps <= w_zero() {
        return Err(Error::invalid("eps must be positive"));
    }
    let mut violations = Vec::new();
    let edge_set: BTreeSet<Pair> = s.edges().iter().map(|e| (e.u, e.v)).collect();

    // tree: subset, acyclic, maximal
    let mut tree_ok = true;
    let mut uf = crate::graph::UnionFind::new(s.n());
    for &(u, v) in &cs.tree {
        if !edge_set.contains(&(u, v)) {
            tree_ok = false;
            violations.push(format!("tree edge ({u},{v}) is not in the graph"));
            continue;
        }
        if !uf.union(u, v) {
            tree_ok = false;
            violations.push(format!("tree edge ({u},{v}) closes a cycle"));
        }
    }
    if tree_ok {
        // maximality: no graph edge joins two different tree components
        for e in s.edges() {
            if uf.find(e.u) != uf.find(e.v) {
                tree_ok = false;
                violations.push(format!(
                    "tree is not spanning: edge ({},{}) joins two tree components",
                    e.u, e.v
                ));
                break;
            }
        }
    }

    // coverage: keys == non-tree edges
    let nontree: BTreeSet<Pair> = edge_set.difference(&cs.tree).copied().collect();
    let keys: BTreeSet<Pair> = cs.paths.keys().copied().collect();
    let mut coverage_ok = true;
    for &(u, v) in nontree.difference(&keys) {
        coverage_ok = false;
        violations.push(format!("non-tree edge ({u},{v}) has no charging path"));
    }
    for &(u, v) in keys.difference(&nontree) {
        coverage_ok = false;
        violations.push(format!(
            "({u},{v}) has a charging path but is not a non-tree edge of the graph"
        ));
    }

    // each path: simple, in the graph, correct endpoints, avoids its key
    let mut paths_ok = true;
    let mut strong_ok = true;
    let one_plus_eps = w_int(1) + eps;
    for (&(u, v), path) in &cs.paths {
        let mut this_ok = true;
        for &(a, b) in path {
            if !edge_set.contains(&(a, b)) {
                this_ok = false;
                violations.push(format!("P({u},{v}) uses ({a},{b}) which is not in the graph"));
            }
            if (a, b) == (u, v) {
                this_ok = false;
                violations.push(format!("P({u},{v}) contains the charged edge itself"));
            }
        }
        if this_ok {
            if let Err(msg) = walk_path(path, u, v) {
                this_ok = false;
                violations.push(format!("P({u},{v}): {msg}"));
            }
        }
        if !this_ok {
            paths_ok = false;
            continue;
        }
        if let Some(w_e) = edge_set.contains(&(u, v)).then(|| s.weight(u, v)).flatten() {
            let w_path: Weight = path
                .iter()
                .map(|&(a, b)| s.weight(a, b).cloned().unwrap_or_else(w_zero))
                .fold(w_zero(), |acc, w| acc + w);
            if one_plus_eps.clone() * w_e.clone() > w_path {
                strong_ok = false;
                violations.push(format!(
                    "P({u},{v}) is not strong: (1+eps)*w = {} > {} = w(P)",
                    crate::graph::format_weight(&(one_plus_eps.clone() * w_e.clone())),
                    crate::graph::format_weight(&w_path),
                ));
            }
        }
    }

    // charge counts
    let counts = cs.charge_counts();
    let mut max_nontree = 0usize;
    let mut max_tree = 0usize;
    let mut k_simple_ok = true;
    for (&f, &c) in &counts {
        if cs.tree.contains(&f) {
            max_tree = max_tree.max(c);
            if c > k {
                k_simple_ok = false;
                violations.push(format!(
                    "tree edge ({},{}) charged {c} times, limit {k}",
                    f.0, f.1
                ));
            }
        } else {
            max_nontree = max_nontree.max(c);
            if c > 1 {
                k_simple_ok = false;
                violations.push(format!(
                    "non-tree edge ({},{}) charged {c} times, limit 1",
                    f.0, f.1
                ));
            }
        }
    }

    // acyclicity of the charges digraph (Kahn)
    let mut indeg: BTreeMap<Pair, usize> = keys.iter().map(|&e| (e, 0)).collect();
    let mut succs: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
    for (&e1, path) in &cs.paths {
        for &e0 in path {
            if keys.contains(&e0) {
                succs.entry(e1).or_default().push(e0);
                *indeg.entry(e0).or_insert(0) += 1;
            }
        }
    }
    let mut queue: VecDeque<Pair> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&e, _)| e)
        .collect();
    let mut visited = 0usize;
    while let Some(e) = queue.pop_front() {
        visited += 1;
        for &f in succs.get(&e).into_iter().flatten() {
            let d = indeg.get_mut(&f).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(f);
            }
        }
    }
    let acyclic_ok = visited == indeg.len();
    if !acyclic_ok {
        violations.push("the charges digraph contains a directed cycle".into());
    }

    let w_tree: Weight = cs
        .tree
        .iter()
        .filter_map(|&(u, v)| s.weight(u, v).cloned())
        .fold(w_zero(), |acc, w| acc + w);
    Ok(SchemeReport {
        tree_ok,
        coverage_ok,
        paths_ok,
        max_nontree_charge: max_nontree,
        max_tree_charge: max_tree,
        k_simple_ok,
        acyclic_ok,
        strong_ok,
        w_tree,
        w_spanner: s.total_weight(),
        violations,
    })
}

/// A verified lightness certificate: a scheme that passed all checks,
/// together with the bound `w(S) <= (1 + k/eps) * w(T)` it implies.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub k: usize,
    pub bound: Weight,
    pub w_tree: Weight,
    pub w_spanner: Weight,
}

/// Check the scheme and, if it verifies, return the implied lightness
/// certificate. Refuses (with the first violation) otherwise. A verified
/// k-simple strong scheme *guarantees* the bound, so a verified scheme with
/// `w(S)` above the bound indicates a bug and reports a structural error.
pub fn lightness_certificate(
    s: &WeightedGraph,
    eps: &Weight,
    cs: &ChargingScheme,
    k: usize,
) -> Result<Certificate> {
    let report = verify_scheme(s, eps, cs, k)?;
    if !report.all_ok() {
        let detail = report
            .violations
            .first()
            .cloned()
            .unwrap_or_else(|| "scheme failed verification".into());
        return Err(Error::Refused(detail));
    }
    let bound = (w_int(1) + w_int(k as i64) / eps.clone()) * report.w_tree.clone();
    if report.w_spanner > bound {
        return Err(Error::structural(format!(
            "verified scheme contradicts the bound: w(S) = {} > {} = (1+k/eps)*w(T)",
            crate::graph::format_weight(&report.w_spanner),
            crate::graph::format_weight(&bound),
        )));
    }
    Ok(Certificate {
        k,
        bound,
        w_tree: report.w_tree,
        w_spanner: report.w_spanner,
    })
}

/// The n boundary pairs of the cycle 0-1-...-(n-1)-0, sorted.
pub fn boundary_pairs(n: usize) -> Vec<Pair> {
    let mut out: Vec<Pair> = (0..n - 1).map(|u| (u, u + 1)).collect();
    out.push((0, n - 1));
    out
}

/// Build the 1-simple acyclic charging scheme for an outer-planar graph
/// whose outer cycle 0-1-...-(n-1)-0 is fully present: the tree is the
/// boundary minus one designated boundary edge, every non-tree edge is
/// charged to the rest of its inner face, and faces are charged along the
/// dual tree rooted at the designated edge's face.
///
/// `designated` defaults to the heaviest boundary edge (ties by pair),
/// which for instances whose chords all outweigh the boundary makes the
/// tree an MST. Errors if the graph is not boundary + non-crossing chords
/// or if `designated` is not a boundary edge.
pub fn outerplanar_charging(
    g: &WeightedGraph,
    designated: Option<Pair>,
) -> Result<ChargingScheme> {
    let n = g.n();
    if n < 3 {
        return Err(Error::invalid("outer-planar charging needs n >= 3"));
    }
    let boundary: BTreeSet<Pair> = boundary_pairs(n).into_iter().collect();
    let mut chords: Vec<Pair> = Vec::new();
    for e in g.edges() {
        let p = (e.u, e.v);
        if boundary.contains(&p) {
            continue;
        }
        if e.v >= e.u + 2 && p != (0, n - 1) {
            chords.push(p);
        } else {
            return Err(Error::invalid(format!(
                "edge ({},{}) is neither boundary nor chord",
                e.u, e.v
            )));
        }
    }
    for &p in &boundary {
        if g.edge_index(p.0, p.1).is_none() {
            return Err(Error::invalid(format!(
                "boundary edge ({},{}) is missing",
                p.0, p.1
            )));
        }
    }
    chords.sort_unstable();
    if !crate::generators::chords_noncrossing(n, &chords) {
        return Err(Error::invalid("chords cross; graph is not outer-planar"));
    }

    let designated = designated.unwrap_or_else(|| {
        boundary
            .iter()
            .copied()
            .max_by(|&a, &b| {
                let wa = g.weight(a.0, a.1).unwrap();
                let wb = g.weight(b.0, b.1).unwrap();
                wa.cmp(wb).then(a.cmp(&b))
            })
            .unwrap()
    });
    if !boundary.contains(&designated) {
        return Err(Error::invalid(format!(
            "designated edge ({},{}) is not a boundary edge",
            designated.0, designated.1
        )));
    }

    // enumerate inner faces: one per "arc" (chord or the closing boundary
    // edge (0,n-1)); the face under arc (a,b) is the walk a -> b taking the
    // longest available edge at each step
    let arc_set: BTreeSet<Pair> = chords
        .iter()
        .copied()
        .chain(std::iter::once((0, n - 1)))
        .collect();
    let mut face_walk: BTreeMap<Pair, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &arc_set {
        let mut walk = vec![a];
        let mut cur = a;
        while cur < b {
            let mut best = cur + 1; // boundary edge always available
            for &(c, d) in &arc_set {
                if c == cur && d <= b && (c, d) != (a, b) && d > best {
                    best = d;
                }
            }
            walk.push(best);
            cur = best;
        }
        face_walk.insert((a, b), walk);
    }

    // locate the face whose walk (or arc, for (0,n-1)) contains `designated`
    let mut root_arc: Option<Pair> = None;
    if designated == (0, n - 1) {
        root_arc = Some((0, n - 1));
    } else {
        for (&arc, walk) in &face_walk {
            for w in walk.windows(2) {
                if (w[0], w[1]) == designated {
                    root_arc = Some(arc);
                }
            }
        }
    }
    let root_arc =
        root_arc.ok_or_else(|| Error::structural("designated edge not found on any face"))?;

    // dual adjacency: face(arc) <-> face whose walk contains arc
    let mut adj: BTreeMap<Pair, Vec<(Pair, Pair)>> = BTreeMap::new(); // face -> (nbr face, shared chord)
    for (&arc, walk) in &face_walk {
        for w in walk.windows(2) {
            let e = (w[0], w[1]);
            if arc_set.contains(&e) {
                adj.entry(arc).or_default().push((e, e));
                adj.entry(e).or_default().push((arc, e));
            }
        }
    }

    // BFS from the root face; each face is charged through its parent edge
    let mut parent_edge: BTreeMap<Pair, Pair> = BTreeMap::new();
    parent_edge.insert(root_arc, designated);
    let mut queue = VecDeque::from([root_arc]);
    let mut seen = BTreeSet::from([root_arc]);
    while let Some(face) = queue.pop_front() {
        for &(nbr, shared) in adj.get(&face).into_iter().flatten() {
            if seen.insert(nbr) {
                parent_edge.insert(nbr, shared);
                queue.push_back(nbr);
            }
        }
    }
    if seen.len() != face_walk.len() {
        return Err(Error::structural("dual face graph is not connected"));
    }

    let mut paths: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
    for (&arc, walk) in &face_walk {
        let e0 = parent_edge[&arc];
        // face cycle = walk edges + the arc; path = cycle minus e0,
        // ordered from e0.0 to e0.1
        let mut path = Vec::new();
        if e0 == arc {
            for w in walk.windows(2) {
                path.push((w[0], w[1]));
            }
        } else {
            let j = walk
                .windows(2)
                .position(|w| (w[0], w[1]) == e0)
                .ok_or_else(|| Error::structural("parent edge missing from its face"))?;
            // from walk[j] back to walk[0], across the arc, down to walk[j+1]
            for t in (0..j).rev() {
                path.push(pair_of(walk[t], walk[t + 1]));
            }
            path.push(arc);
            for t in ((j + 1)..(walk.len() - 1)).rev() {
                path.push(pair_of(walk[t], walk[t + 1]));
            }
        }
        paths.insert(e0, path);
    }

    let tree: BTreeSet<Pair> = boundary.into_iter().filter(|&p| p != designated).collect();
    Ok(ChargingScheme::new(tree, paths))
}

/// Strengthen a weak scheme on a completed k-path: splice every virtual
/// edge out of the paths that charge it (in decreasing weight order) and
/// drop the virtual edges' own pairs, yielding a scheme on the real graph.
///
/// `is_virtual[i]` flags edge `i` of `shat`. Each virtual edge is charged
/// at most once in a 1-simple-on-non-tree scheme, so each removal splices
/// one path: the new path is a shortest (fewest edges, then lexicographic)
/// simple path between the charging edge's endpoints inside
/// `P(e) ∪ P(ê) \ {ê}`. Simplicity counts never increase and acyclicity is
/// preserved.
pub fn strengthen_weak_scheme(
    shat: &WeightedGraph,
    is_virtual: &[bool],
    cs: &ChargingScheme,
) -> Result<ChargingScheme> {
    if is_virtual.len() != shat.m() {
        return Err(Error::invalid("virtual flag count does not match edge count"));
    }
    let mut virtuals: Vec<(Weight, Pair)> = Vec::new();
    for (i, e) in shat.edges().iter().enumerate() {
        if is_virtual[i] {
            let p = (e.u, e.v);
            if cs.tree.contains(&p) {
                return Err(Error::invalid(format!(
                    "virtual edge ({},{}) is a tree edge; cannot strengthen",
                    e.u, e.v
                )));
            }
            virtuals.push((e.w.clone(), p));
        }
    }
    // decreasing weight, ties by pair descending, for a deterministic order
    virtuals.sort_by(|a, b| b.cmp(a));

    let mut paths = cs.paths.clone();
    for (_, vhat) in virtuals {
        let vpath = paths.remove(&vhat).ok_or_else(|| {
            Error::invalid(format!(
                "virtual edge ({},{}) has no charging path",
                vhat.0, vhat.1
            ))
        })?;
        let chargers: Vec<Pair> = paths
            .iter()
            .filter(|(_, p)| p.contains(&vhat))
            .map(|(&e, _)| e)
            .collect();
        if chargers.len() > 1 {
            return Err(Error::invalid(format!(
                "virtual edge ({},{}) is charged {} times; scheme is not 1-simple on non-tree edges",
                vhat.0, vhat.1,
                chargers.len()
            )));
        }
        if let Some(&e) = chargers.first() {
            let old = &paths[&e];
            let mut union: BTreeSet<Pair> = old.iter().copied().collect();
            union.extend(vpath.iter().copied());
            union.remove(&vhat);
            if union.contains(&e) {
                return Err(Error::structural(format!(
                    "splice for ({},{}) would route through the charged edge itself",
                    e.0, e.1
                )));
            }
            let new_path = bfs_path(&union, e.0, e.1).ok_or_else(|| {
                Error::structural(format!(
                    "no replacement path for ({},{}) after removing virtual edge ({},{})",
                    e.0, e.1, vhat.0, vhat.1
                ))
            })?;
            paths.insert(e, new_path);
        }
    }
    for (e, path) in &paths {
        for f in path {
            if let Some(i) = shat.edge_index(f.0, f.1) {
                if is_virtual[i] {
                    return Err(Error::structural(format!(
                        "P({},{}) still contains virtual edge ({},{})",
                        e.0, e.1, f.0, f.1
                    )));
                }
            }
        }
    }
    Ok(ChargingScheme::new(cs.tree.clone(), paths))
}

/// Shortest (fewest edges, lexicographically smallest) simple path from
/// `from` to `to` using only the given edges, as an ordered edge list.
fn bfs_path(edges: &BTreeSet<Pair>, from: usize, to: usize) -> Option<Vec<Pair>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for nbrs in adj.values_mut() {
        nbrs.sort_unstable();
    }
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in adj.get(&x).into_iter().flatten() {
            if seen.insert(y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    if from != to && !parent.contains_key(&to) {
        return None;
    }
    let mut verts = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[&cur];
        verts.push(cur);
    }
    verts.reverse();
    Some(
        verts
            .windows(2)
            .map(|w| pair_of(w[0], w[1]))
            .collect(),
    )
}
