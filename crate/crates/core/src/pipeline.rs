//! End-to-end pipelines: greedy spanner -> charging scheme -> verified
//! lightness certificate, for the three instance families.
//!
//! Each pipeline runs every verifier on the way and reports the verdicts;
//! a run only errors when a stage cannot produce its object at all (bad
//! input, or broken internal structure). Negative verdicts are returned in
//! the outcome so callers can flag the instance and keep sweeping.

use num_traits::Zero;

use crate::charging::{
    boundary_pairs, lightness_certificate, outerplanar_charging, strengthen_weak_scheme,
    verify_scheme, Certificate, ChargingScheme, Pair, SchemeReport,
};
use crate::forest::{audit_charges, build_forest, charge_bound, extract_scheme, AuditReport};
use crate::generators::OuterPlanarInstance;
use crate::graph::{mst, w_zero, Weight, WeightedGraph};
use crate::pathdec::{complete_to_kpath, normalize, SmoothPathDecomposition};
use crate::spanner::{greedy_spanner, verify_edge_path_property, verify_stretch, Spanner};
use crate::{Error, Result};

/// Everything the bounded-pathwidth pipeline produces for one instance.
#[derive(Debug, Clone)]
pub struct KpathRun {
    pub pw: usize,
    /// the per-edge charge bound `2(pw-2) + 4pw^2` the scheme is verified at
    pub k: usize,
    pub spanner: Spanner,
    /// scheme on the spanner itself, after virtual edges are spliced out
    pub scheme: ChargingScheme,
    /// scheme as extracted from the charging forest, on the completed k-path
    pub pre_scheme: ChargingScheme,
    /// per-MST-edge triangle / pseudo-triangle / total-charge counts
    pub audit: AuditReport,
    /// verification of `scheme` against the spanner at level `k`
    pub report: SchemeReport,
    /// issued iff `report` is fully positive and the bound holds
    pub cert: Option<Certificate>,
    pub stretch_ok: bool,
    pub edge_path_ok: bool,
    /// per-bag forest invariants, when they were checked
    pub invariants_ok: bool,
    pub w_mst: Weight,
    pub w_spanner: Weight,
    pub lightness: Weight,
}

impl KpathRun {
    /// All verdicts positive and the certificate issued.
    pub fn all_ok(&self) -> bool {
        self.stretch_ok
            && self.edge_path_ok
            && self.invariants_ok
            && self.report.all_ok()
            && self.cert.is_some()
    }
}

/// Run the full bounded-pathwidth pipeline on `g` with decomposition `dec`:
/// greedy spanner, completion to a k-path, charging forest, scheme
/// extraction and strengthening, verification at `k = 2(pw-2)+4pw^2`, and
/// the lightness certificate `w(S) <= (1+k/eps) * w(MST)`.
pub fn run_kpath_pipeline(
    g: &WeightedGraph,
    dec: &SmoothPathDecomposition,
    eps: &Weight,
    check_every_bag: bool,
) -> Result<KpathRun> {
    for e in g.edges() {
        if e.w <= w_zero() {
            return Err(Error::invalid(
                "the charging pipeline requires strictly positive edge weights",
            ));
        }
    }
    let spanner = greedy_spanner(g, eps)?;
    let s_graph = spanner.to_graph(g);
    let stretch_ok = verify_stretch(g, &spanner)?.is_empty();
    let edge_path_ok = verify_edge_path_property(g, &spanner)?.is_empty();

    let (shat, is_virtual) = complete_to_kpath(&s_graph, dec)?;
    let ng = normalize(&shat, dec)?;
    let run = build_forest(&shat, &ng, dec, check_every_bag)?;
    let invariants_ok = run.reports.iter().all(|r| r.violations.is_empty());

    // A virtual completion edge can never enter the MST: its weight is the
    // spanner distance, realized by a path of >= 2 strictly lighter real
    // edges, so Kruskal connects its endpoints before reaching it. Check
    // anyway, since a virtual tree edge would poison everything downstream.
    for &(u, v) in run.mst_pairs.keys() {
        let idx = shat
            .edge_index(u, v)
            .ok_or_else(|| Error::structural(format!("MST pair ({u},{v}) is not an edge")))?;
        if is_virtual[idx] {
            return Err(Error::structural(format!(
                "virtual completion edge ({u},{v}) entered the MST"
            )));
        }
    }

    let pre_scheme = extract_scheme(&run, &shat, &ng)?;
    let pw = dec.pw();
    let audit = audit_charges(&run, &pre_scheme, pw);
    let scheme = strengthen_weak_scheme(&shat, &is_virtual, &pre_scheme)?;

    let k = charge_bound(pw);
    let report = verify_scheme(&s_graph, eps, &scheme, k)?;
    let cert = if report.all_ok() {
        Some(lightness_certificate(&s_graph, eps, &scheme, k)?)
    } else {
        None
    };

    let t = mst(g);
    if report.tree_ok && report.w_tree != t.total_weight {
        return Err(Error::structural(format!(
            "scheme tree weight {} differs from the MST weight {}",
            crate::graph::format_weight(&report.w_tree),
            crate::graph::format_weight(&t.total_weight),
        )));
    }
    let w_spanner = spanner.weight(g);
    if t.total_weight.is_zero() {
        return Err(Error::invalid("MST weight is zero; lightness undefined"));
    }
    let lightness = &w_spanner / &t.total_weight;

    Ok(KpathRun {
        pw,
        k,
        spanner,
        scheme,
        pre_scheme,
        audit,
        report,
        cert,
        stretch_ok,
        edge_path_ok,
        invariants_ok,
        w_mst: t.total_weight,
        w_spanner,
        lightness,
    })
}

/// Outcome of the outer-planar pipeline.
#[derive(Debug, Clone)]
pub struct OuterplanarRun {
    pub spanner: Spanner,
    /// 1-simple scheme on the spanner
    pub scheme: ChargingScheme,
    pub report: SchemeReport,
    pub cert: Option<Certificate>,
    pub stretch_ok: bool,
    pub edge_path_ok: bool,
    /// the boundary edge the greedy spanner dropped, if any
    pub dropped_boundary: Option<Pair>,
    pub w_mst: Weight,
    pub w_spanner: Weight,
    pub lightness: Weight,
}

impl OuterplanarRun {
    pub fn all_ok(&self) -> bool {
        self.stretch_ok && self.edge_path_ok && self.report.all_ok() && self.cert.is_some()
    }
}

/// Run the outer-planar pipeline: greedy spanner, the face-tree 1-simple
/// charging scheme, verification at k = 1 and the lightness certificate
/// `w(S) <= (1+1/eps) * w(T)`.
///
/// The greedy spanner drops at most one boundary edge (once the cycle is
/// broken, every remaining boundary edge is a bridge among the processed
/// ones); if it dropped one, the scheme is built on `S` plus that edge and
/// the edge — necessarily the designated one, since the tree must avoid
/// it — is spliced back out afterwards.
pub fn run_outerplanar_pipeline(
    inst: &OuterPlanarInstance,
    eps: &Weight,
) -> Result<OuterplanarRun> {
    let g = &inst.graph;
    let spanner = greedy_spanner(g, eps)?;
    let s_graph = spanner.to_graph(g);
    let stretch_ok = verify_stretch(g, &spanner)?.is_empty();
    let edge_path_ok = verify_edge_path_property(g, &spanner)?.is_empty();

    let missing: Vec<Pair> = boundary_pairs(inst.n)
        .into_iter()
        .filter(|&(u, v)| s_graph.edge_index(u, v).is_none())
        .collect();
    if missing.len() > 1 {
        return Err(Error::structural(format!(
            "greedy spanner dropped {} boundary edges; expected at most one",
            missing.len()
        )));
    }
    let dropped_boundary = missing.first().copied();

    let mut shat = s_graph.clone();
    let mut is_virtual = vec![false; shat.m()];
    if let Some((u, v)) = dropped_boundary {
        let w = g
            .weight(u, v)
            .ok_or_else(|| Error::structural(format!("boundary edge ({u},{v}) not in input")))?
            .clone();
        shat.add_edge(u, v, w)?;
        is_virtual.push(true);
    }

    let cs_hat = outerplanar_charging(&shat, dropped_boundary)?;
    let scheme = if dropped_boundary.is_some() {
        strengthen_weak_scheme(&shat, &is_virtual, &cs_hat)?
    } else {
        cs_hat
    };

    let report = verify_scheme(&s_graph, eps, &scheme, 1)?;
    let cert = if report.all_ok() {
        Some(lightness_certificate(&s_graph, eps, &scheme, 1)?)
    } else {
        None
    };

    let t = mst(g);
    if t.total_weight.is_zero() {
        return Err(Error::invalid("MST weight is zero; lightness undefined"));
    }
    let w_spanner = spanner.weight(g);
    let lightness = &w_spanner / &t.total_weight;

    Ok(OuterplanarRun {
        spanner,
        scheme,
        report,
        cert,
        stretch_ok,
        edge_path_ok,
        dropped_boundary,
        w_mst: t.total_weight,
        w_spanner,
        lightness,
    })
}

/// Outcome of the plain spanner pipeline (no charging scheme).
#[derive(Debug, Clone)]
pub struct RandomRun {
    pub spanner: Spanner,
    pub stretch_ok: bool,
    pub edge_path_ok: bool,
    pub w_mst: Weight,
    pub w_spanner: Weight,
    pub lightness: Weight,
}

impl RandomRun {
    pub fn all_ok(&self) -> bool {
        self.stretch_ok && self.edge_path_ok
    }
}

/// Build and verify the greedy spanner of an arbitrary weighted graph.
pub fn run_random_pipeline(g: &WeightedGraph, eps: &Weight) -> Result<RandomRun> {
    let spanner = greedy_spanner(g, eps)?;
    let stretch_ok = verify_stretch(g, &spanner)?.is_empty();
    let edge_path_ok = verify_edge_path_property(g, &spanner)?.is_empty();
    let t = mst(g);
    if t.total_weight.is_zero() {
        return Err(Error::invalid("MST weight is zero; lightness undefined"));
    }
    let w_spanner = spanner.weight(g);
    let lightness = &w_spanner / &t.total_weight;
    Ok(RandomRun {
        spanner,
        stretch_ok,
        edge_path_ok,
        w_mst: t.total_weight,
        w_spanner,
        lightness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gnp_connected, outerplanar, WeightDist};
    use crate::graph::{w_int, w_ratio};
    use crate::pathdec::generate_kpath;

    #[test]
    fn kpath_pipeline_end_to_end() {
        let dist = WeightDist::UniformInt { lo: 1, hi: 100 };
        let (g, dec) = generate_kpath(14, 3, 7, &dist).unwrap();
        let eps = w_ratio(1, 2);
        let run = run_kpath_pipeline(&g, &dec, &eps, true).unwrap();
        assert!(run.stretch_ok);
        assert!(run.edge_path_ok);
        assert!(run.invariants_ok);
        assert!(run.report.all_ok(), "{:?}", run.report.violations);
        let cert = run.cert.as_ref().expect("certificate issued");
        assert!(run.w_spanner <= cert.bound);
        assert_eq!(cert.w_tree, run.w_mst);
        assert_eq!(run.k, charge_bound(3));
    }

    #[test]
    fn kpath_pipeline_full_graph_when_eps_tiny() {
        // with eps = 10 the greedy spanner drops a lot; with eps = 1/1000
        // it keeps nearly everything; both must verify
        let dist = WeightDist::UniformInt { lo: 1, hi: 50 };
        let (g, dec) = generate_kpath(10, 2, 3, &dist).unwrap();
        for eps in [w_ratio(1, 1000), w_int(10)] {
            let run = run_kpath_pipeline(&g, &dec, &eps, false).unwrap();
            assert!(run.all_ok(), "eps {eps}: {:?}", run.report.violations);
        }
    }

    #[test]
    fn kpath_pipeline_rejects_nonpositive_weights() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, w_int(0)).unwrap();
        g.add_edge(1, 2, w_int(1)).unwrap();
        g.add_edge(0, 2, w_int(1)).unwrap();
        let dec = SmoothPathDecomposition::from_dec(crate::pathdec::PathDecomposition::new(
            vec![vec![0, 1, 2]],
        ))
        .unwrap();
        assert!(run_kpath_pipeline(&g, &dec, &w_int(1), false).is_err());
    }

    #[test]
    fn outerplanar_pipeline_end_to_end() {
        for seed in 0..12u64 {
            let inst = outerplanar(9, 0.6, seed).unwrap();
            let eps = w_ratio(1, 2);
            let run = run_outerplanar_pipeline(&inst, &eps).unwrap();
            assert!(run.all_ok(), "seed {seed}: {:?}", run.report.violations);
            // empirical planar lightness bound 1 + 2/eps
            let bound = w_int(1) + w_int(2) / &eps;
            assert!(run.lightness <= bound, "seed {seed}");
        }
    }

    #[test]
    fn outerplanar_pipeline_handles_dropped_boundary() {
        // triangle with one heavy side: greedy at eps = 1 drops it
        // (2 <= (1+1)*5), so the pipeline must take the weak-scheme route
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, w_int(1)).unwrap();
        g.add_edge(1, 2, w_int(1)).unwrap();
        g.add_edge(0, 2, w_int(5)).unwrap();
        let inst = OuterPlanarInstance {
            graph: g,
            n: 3,
            chords: vec![],
        };
        let run = run_outerplanar_pipeline(&inst, &w_int(1)).unwrap();
        assert_eq!(run.dropped_boundary, Some((0, 2)));
        assert!(run.all_ok(), "{:?}", run.report.violations);
        assert_eq!(run.spanner.edge_indices.len(), 2);
    }

    #[test]
    fn random_pipeline_end_to_end() {
        let dist = WeightDist::UniformInt { lo: 1, hi: 100 };
        let g = gnp_connected(16, 0.4, 5, &dist).unwrap();
        let run = run_random_pipeline(&g, &w_ratio(1, 4)).unwrap();
        assert!(run.all_ok());
        assert!(run.lightness >= w_int(1));
    }
}
