//! Random instance generators. Everything is seeded and deterministic:
//! the same arguments always produce the same graph.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::{w_int, Weight, WeightedGraph};
use crate::{Error, Result};

/// Edge-weight distribution for generated instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightDist {
    /// Uniform over the integers `lo..=hi`.
    UniformInt { lo: i64, hi: i64 },
    /// Every edge gets the same weight.
    Constant(Weight),
}

impl WeightDist {
    pub fn sample(&self, rng: &mut impl Rng) -> Weight {
        match self {
            WeightDist::UniformInt { lo, hi } => w_int(rng.gen_range(*lo..=*hi)),
            WeightDist::Constant(w) => w.clone(),
        }
    }
}

/// Erdős–Rényi graph with weights from `dist`. `p` is in [0,1]; each of the
/// n·(n-1)/2 pairs is included independently. Edge order (and therefore RNG
/// consumption) is the sorted pair order.
pub fn gnp(n: usize, p: f64, seed: u64, dist: &WeightDist) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} out of range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v, dist.sample(&mut rng))?;
            }
        }
    }
    Ok(g)
}

/// A connected G(n,p): like [`gnp`] but any leftover components are stitched
/// together afterwards with extra edges (weights from the same `dist`),
/// connecting each later component's smallest vertex to vertex 0's component.
pub fn gnp_connected(n: usize, p: f64, seed: u64, dist: &WeightDist) -> Result<WeightedGraph> {
    let mut g = gnp(n, p, seed, dist)?;
    if n == 0 {
        return Ok(g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    loop {
        let comp = crate::graph::components(&g);
        let root = comp[0];
        let stray = (0..n).find(|&v| comp[v] != root);
        match stray {
            None => break,
            Some(v) => {
                g.add_edge(0, v, dist.sample(&mut rng))?;
            }
        }
    }
    Ok(g)
}

/// An outer-planar instance: vertices `0..n` on a cycle in index order, the
/// full boundary present, plus a random set of non-crossing chords.
///
/// Weights are chosen so the boundary is much cheaper than any chord
/// (boundary uniform in [1,50], chords uniform in [200,1000]); every
/// boundary edge's best alternative route costs at least 200, so greedy
/// spanners with moderate stretch keep the whole boundary.
#[derive(Debug, Clone)]
pub struct OuterPlanarInstance {
    pub graph: WeightedGraph,
    /// the boundary cycle is 0-1-...-(n-1)-0
    pub n: usize,
    /// chords as sorted vertex pairs
    pub chords: Vec<(usize, usize)>,
}

/// Generate an outer-planar instance with `n >= 3` boundary vertices.
/// Chords come from a random triangulation of the polygon, each retained
/// independently with probability `chord_keep`.
pub fn outerplanar(n: usize, chord_keep: f64, seed: u64) -> Result<OuterPlanarInstance> {
    if n < 3 {
        return Err(Error::invalid("outer-planar instance needs n >= 3"));
    }
    if !(0.0..=1.0).contains(&chord_keep) {
        return Err(Error::invalid(format!(
            "chord probability {chord_keep} out of range"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random triangulation by recursive ear splitting
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![(0..n).collect()];
    while let Some(poly) = stack.pop() {
        if poly.len() < 4 {
            continue;
        }
        // split the polygon at a random chord (i, j) with |i-j| >= 2
        let k = poly.len();
        let i = rng.gen_range(0..k);
        let span = rng.gen_range(2..k - 1);
        let j = (i + span) % k;
        let (a, b) = (poly[i].min(poly[j]), poly[i].max(poly[j]));
        chords.push((a, b));
        let (lo, hi) = (i.min(j), i.max(j));
        stack.push(poly[lo..=hi].to_vec());
        let mut rest: Vec<usize> = poly[hi..].to_vec();
        rest.extend_from_slice(&poly[..=lo]);
        stack.push(rest);
    }
    chords.sort_unstable();
    chords.dedup();
    let mut g = WeightedGraph::new(n);
    for u in 0..n {
        let v = (u + 1) % n;
        g.add_edge(u.min(v), u.max(v), w_int(rng.gen_range(1..=50)))?;
    }
    let mut kept = Vec::new();
    for (u, v) in chords {
        if rng.gen_bool(chord_keep) {
            g.add_edge(u, v, w_int(rng.gen_range(200..=1000)))?;
            kept.push((u, v));
        }
    }
    Ok(OuterPlanarInstance {
        graph: g,
        n,
        chords: kept,
    })
}

/// Check that the chords of an outer-planar instance are pairwise
/// non-crossing (chords (a,b) and (c,d) cross iff exactly one of c,d lies
/// strictly between a and b on the cycle).
pub fn chords_noncrossing(_n: usize, chords: &[(usize, usize)]) -> bool {
    let strictly_between = |a: usize, b: usize, x: usize| a < x && x < b;
    for (i, &(a, b)) in chords.iter().enumerate() {
        for &(c, d) in &chords[i + 1..] {
            let c_in = strictly_between(a, b, c);
            let d_in = strictly_between(a, b, d);
            // crossing = exactly one endpoint strictly inside, none shared
            if c_in != d_in && c != a && c != b && d != a && d != b {
                return false;
            }
        }
    }
    true
}
