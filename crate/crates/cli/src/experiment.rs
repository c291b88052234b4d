//! Experiment sweeps: a flat TOML config describes an instance family and
//! parameter grid; every instance runs the full pipeline with all verifiers
//! on, and one CSV row is emitted per (instance, eps). Reruns with the same
//! config produce byte-identical CSV.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use spanner_core::generators::{gnp_connected, outerplanar, WeightDist};
use spanner_core::graph::{format_weight, parse_weight, w_int, w_zero, Weight, WeightedGraph};
use spanner_core::pathdec::generate_kpath;
use spanner_core::pipeline::{run_kpath_pipeline, run_outerplanar_pipeline, run_random_pipeline};
use spanner_core::{Error, Result};

pub const CSV_COLUMNS: &str = "family,n,pw,eps,seed,vertices,edges,spanner_edges,w_mst,\
w_spanner,lightness,max_tree_charge,charge_bound,stretch_ok,edge_path_ok,k_simple_ok,\
acyclic_ok,strong_ok,invariants_ok,status";

fn one() -> usize {
    1
}
fn default_weight_lo() -> i64 {
    1
}
fn default_weight_hi() -> i64 {
    1000
}
fn default_p() -> f64 {
    0.5
}
fn default_chord_keep() -> f64 {
    0.5
}
fn default_check_bags() -> bool {
    true
}

/// Flat key-value experiment description. `pw_min`/`pw_max` apply to the
/// kpath family only; `p` to random; `chord_keep` to outerplanar.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: String,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "one")]
    pub n_step: usize,
    #[serde(default = "one")]
    pub pw_min: usize,
    #[serde(default = "one")]
    pub pw_max: usize,
    pub eps: Vec<String>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_weight_lo")]
    pub weight_lo: i64,
    #[serde(default = "default_weight_hi")]
    pub weight_hi: i64,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_chord_keep")]
    pub chord_keep: f64,
    pub out: String,
    #[serde(default = "default_check_bags")]
    pub check_bags: bool,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !matches!(self.family.as_str(), "kpath" | "outerplanar" | "random") {
            return Err(Error::invalid(format!(
                "unknown family '{}'; expected kpath, outerplanar or random",
                self.family
            )));
        }
        if self.eps.is_empty() {
            return Err(Error::invalid("eps list is empty"));
        }
        for e in &self.eps {
            if parse_weight(e)? <= w_zero() {
                return Err(Error::invalid(format!("eps '{e}' is not positive")));
            }
        }
        if self.seeds.is_empty() {
            return Err(Error::invalid("seed list is empty"));
        }
        if self.n_min > self.n_max {
            return Err(Error::invalid("n_min exceeds n_max"));
        }
        if self.n_step == 0 {
            return Err(Error::invalid("n_step must be at least 1"));
        }
        if self.weight_lo < 1 || self.weight_lo > self.weight_hi {
            return Err(Error::invalid("weights must satisfy 1 <= weight_lo <= weight_hi"));
        }
        if self.family == "kpath" {
            if self.pw_min == 0 || self.pw_min > self.pw_max {
                return Err(Error::invalid("need 1 <= pw_min <= pw_max"));
            }
            if self.n_min < self.pw_max + 1 {
                return Err(Error::invalid(format!(
                    "kpath instances need n >= pw+1; n_min {} is below pw_max+1 = {}",
                    self.n_min,
                    self.pw_max + 1
                )));
            }
        }
        if self.family == "outerplanar" && self.n_min < 3 {
            return Err(Error::invalid("outerplanar instances need n >= 3"));
        }
        if !(0.0..=1.0).contains(&self.p) || !(0.0..=1.0).contains(&self.chord_keep) {
            return Err(Error::invalid("p and chord_keep must lie in [0, 1]"));
        }
        Ok(())
    }

    fn dist(&self) -> WeightDist {
        WeightDist::UniformInt {
            lo: self.weight_lo,
            hi: self.weight_hi,
        }
    }
}

/// One CSV row. `None` renders as `na` (a column the family does not have).
#[derive(Debug, Clone)]
pub struct Row {
    pub family: String,
    pub n: usize,
    pub pw: Option<usize>,
    pub eps: String,
    pub seed: u64,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub spanner_edges: Option<usize>,
    pub w_mst: Option<String>,
    pub w_spanner: Option<String>,
    pub lightness: Option<String>,
    pub max_tree_charge: Option<usize>,
    pub charge_bound: Option<usize>,
    pub stretch_ok: Option<bool>,
    pub edge_path_ok: Option<bool>,
    pub k_simple_ok: Option<bool>,
    pub acyclic_ok: Option<bool>,
    pub strong_ok: Option<bool>,
    pub invariants_ok: Option<bool>,
    pub status: String,
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "na".into())
}

impl Row {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            cell(&self.pw),
            self.eps,
            self.seed,
            cell(&self.vertices),
            cell(&self.edges),
            cell(&self.spanner_edges),
            cell(&self.w_mst),
            cell(&self.w_spanner),
            cell(&self.lightness),
            cell(&self.max_tree_charge),
            cell(&self.charge_bound),
            cell(&self.stretch_ok),
            cell(&self.edge_path_ok),
            cell(&self.k_simple_ok),
            cell(&self.acyclic_ok),
            cell(&self.strong_ok),
            cell(&self.invariants_ok),
            self.status,
        )
    }
}

/// Commas and newlines would break the CSV; semicolons read fine.
fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n'], ";")
}

struct Job {
    n: usize,
    pw: Option<usize>,
    seed: u64,
    eps_text: String,
    eps: Weight,
}

fn empty_row(cfg: &ExperimentConfig, job: &Job, status: String) -> Row {
    Row {
        family: cfg.family.clone(),
        n: job.n,
        pw: job.pw,
        eps: job.eps_text.clone(),
        seed: job.seed,
        vertices: None,
        edges: None,
        spanner_edges: None,
        w_mst: None,
        w_spanner: None,
        lightness: None,
        max_tree_charge: None,
        charge_bound: None,
        stretch_ok: None,
        edge_path_ok: None,
        k_simple_ok: None,
        acyclic_ok: None,
        strong_ok: None,
        invariants_ok: None,
        status,
    }
}

fn run_one(cfg: &ExperimentConfig, job: &Job) -> Row {
    let mut row = empty_row(cfg, job, "ok".into());
    let outcome: Result<()> = (|| {
        match cfg.family.as_str() {
            "kpath" => {
                let pw = job.pw.expect("kpath jobs carry pw");
                let (g, dec) = generate_kpath(job.n, pw, job.seed, &cfg.dist())?;
                let r = run_kpath_pipeline(&g, &dec, &job.eps, cfg.check_bags)?;
                row.vertices = Some(g.n());
                row.edges = Some(g.m());
                row.spanner_edges = Some(r.spanner.edge_indices.len());
                row.w_mst = Some(format_weight(&r.w_mst));
                row.w_spanner = Some(format_weight(&r.w_spanner));
                row.lightness = Some(format_weight(&r.lightness));
                row.max_tree_charge = Some(r.report.max_tree_charge);
                row.charge_bound = Some(r.k);
                row.stretch_ok = Some(r.stretch_ok);
                row.edge_path_ok = Some(r.edge_path_ok);
                row.k_simple_ok = Some(r.report.k_simple_ok);
                row.acyclic_ok = Some(r.report.acyclic_ok);
                row.strong_ok = Some(r.report.strong_ok);
                row.invariants_ok = Some(r.invariants_ok);
                if !r.all_ok() {
                    row.status = "FAILED".into();
                }
            }
            "outerplanar" => {
                let inst = outerplanar(job.n, cfg.chord_keep, job.seed)?;
                let r = run_outerplanar_pipeline(&inst, &job.eps)?;
                row.vertices = Some(inst.graph.n());
                row.edges = Some(inst.graph.m());
                row.spanner_edges = Some(r.spanner.edge_indices.len());
                row.w_mst = Some(format_weight(&r.w_mst));
                row.w_spanner = Some(format_weight(&r.w_spanner));
                row.lightness = Some(format_weight(&r.lightness));
                row.max_tree_charge = Some(r.report.max_tree_charge);
                row.charge_bound = Some(1);
                row.stretch_ok = Some(r.stretch_ok);
                row.edge_path_ok = Some(r.edge_path_ok);
                row.k_simple_ok = Some(r.report.k_simple_ok);
                row.acyclic_ok = Some(r.report.acyclic_ok);
                row.strong_ok = Some(r.report.strong_ok);
                if !r.all_ok() {
                    row.status = "FAILED".into();
                }
            }
            "random" => {
                let g: WeightedGraph = gnp_connected(job.n, cfg.p, job.seed, &cfg.dist())?;
                let r = run_random_pipeline(&g, &job.eps)?;
                row.vertices = Some(g.n());
                row.edges = Some(g.m());
                row.spanner_edges = Some(r.spanner.edge_indices.len());
                row.w_mst = Some(format_weight(&r.w_mst));
                row.w_spanner = Some(format_weight(&r.w_spanner));
                row.lightness = Some(format_weight(&r.lightness));
                row.stretch_ok = Some(r.stretch_ok);
                row.edge_path_ok = Some(r.edge_path_ok);
                if !r.all_ok() {
                    row.status = "FAILED".into();
                }
            }
            other => return Err(Error::invalid(format!("unknown family '{other}'"))),
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.status = format!("FAILED: {}", sanitize(&e.to_string()));
    }
    row
}

/// Run the sweep: one row per (instance, eps), instances in config order
/// (pw outer, then n, then seed, then eps), executed in parallel but
/// collected in order. Returns the rows and whether every row verified.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<Row>, bool)> {
    let mut jobs = Vec::new();
    let pws: Vec<Option<usize>> = if cfg.family == "kpath" {
        (cfg.pw_min..=cfg.pw_max).map(Some).collect()
    } else {
        vec![None]
    };
    let eps_list: Vec<(String, Weight)> = cfg
        .eps
        .iter()
        .map(|t| Ok((t.clone(), parse_weight(t)?)))
        .collect::<Result<_>>()?;
    for &pw in &pws {
        let mut n = cfg.n_min;
        while n <= cfg.n_max {
            for &seed in &cfg.seeds {
                for (t, e) in &eps_list {
                    jobs.push(Job {
                        n,
                        pw,
                        seed,
                        eps_text: t.clone(),
                        eps: e.clone(),
                    });
                }
            }
            n += cfg.n_step;
        }
    }
    let rows: Vec<Row> = jobs.par_iter().map(|j| run_one(cfg, j)).collect();
    let all_ok = rows.iter().all(|r| r.ok());
    Ok((rows, all_ok))
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 256);
    out.push_str(CSV_COLUMNS);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

pub fn write_csv(path: impl AsRef<Path>, rows: &[Row]) -> Result<()> {
    Ok(fs::write(path, render_csv(rows))?)
}

/// Exact 4-decimal rendering of a nonnegative rational (truncated), for the
/// human-readable summary table.
fn approx4(w: &Weight) -> String {
    let scaled = (w * w_int(10000)).trunc().to_integer();
    let mut digits = scaled.to_string();
    while digits.len() < 5 {
        digits.insert(0, '0');
    }
    let cut = digits.len() - 4;
    format!("{}.{}", &digits[..cut], &digits[cut..])
}

#[derive(Debug, Default)]
struct Agg {
    rows: usize,
    failed: usize,
    max_lightness: Option<Weight>,
    sum_lightness: Weight,
    lightness_rows: usize,
    max_charge: Option<usize>,
    bound: Option<usize>,
}

/// Parse a sweep CSV and render the per-(family, pw, eps) summary: row and
/// failure counts, max/mean lightness, and the observed maximum tree-edge
/// charge against its bound. Malformed input reports the offending line.
pub fn summarize_csv(text: &str) -> Result<String> {
    if text.trim().is_empty() {
        return Ok("(empty CSV: no rows)\n".into());
    }
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().expect("non-empty text has a first line");
    if header.trim() != CSV_COLUMNS {
        return Err(Error::Format {
            line: 1,
            msg: format!("unexpected header; want '{CSV_COLUMNS}'"),
        });
    }
    let ncols = CSV_COLUMNS.split(',').count();
    let mut groups: BTreeMap<(String, String, String), Agg> = BTreeMap::new();
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != ncols {
            return Err(Error::Format {
                line: ln,
                msg: format!("expected {ncols} fields, found {}", fields.len()),
            });
        }
        let key = (
            fields[0].to_string(),
            fields[2].to_string(),
            fields[3].to_string(),
        );
        let agg = groups.entry(key).or_default();
        agg.rows += 1;
        if fields[19] != "ok" {
            agg.failed += 1;
        }
        if fields[10] != "na" {
            let l = parse_weight(fields[10]).map_err(|e| Error::Format {
                line: ln,
                msg: format!("lightness: {e}"),
            })?;
            if agg.max_lightness.as_ref().is_none_or(|m| l > *m) {
                agg.max_lightness = Some(l.clone());
            }
            agg.sum_lightness += l;
            agg.lightness_rows += 1;
        }
        if fields[11] != "na" {
            let c: usize = fields[11].parse().map_err(|_| Error::Format {
                line: ln,
                msg: format!("bad max_tree_charge '{}'", fields[11]),
            })?;
            if agg.max_charge.is_none_or(|m| c > m) {
                agg.max_charge = Some(c);
            }
        }
        if fields[12] != "na" {
            let b: usize = fields[12].parse().map_err(|_| Error::Format {
                line: ln,
                msg: format!("bad charge_bound '{}'", fields[12]),
            })?;
            if agg.bound.is_none_or(|m| b > m) {
                agg.bound = Some(b);
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:>4} {:>6} {:>6} {:>7} {:>14} {:>14} {:>11} {:>6}\n",
        "family", "pw", "eps", "rows", "failed", "max_lightness", "mean_lightness", "max_charge", "bound"
    ));
    for ((family, pw, eps), agg) in &groups {
        let maxl = agg
            .max_lightness
            .as_ref()
            .map(approx4)
            .unwrap_or_else(|| "na".into());
        let meanl = if agg.lightness_rows > 0 {
            approx4(&(&agg.sum_lightness / w_int(agg.lightness_rows as i64)))
        } else {
            "na".into()
        };
        out.push_str(&format!(
            "{:<12} {:>4} {:>6} {:>6} {:>7} {:>14} {:>14} {:>11} {:>6}\n",
            family,
            pw,
            eps,
            agg.rows,
            agg.failed,
            maxl,
            meanl,
            agg.max_charge.map(|c| c.to_string()).unwrap_or_else(|| "na".into()),
            agg.bound.map(|b| b.to_string()).unwrap_or_else(|| "na".into()),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_cfg(family: &str) -> ExperimentConfig {
        ExperimentConfig::parse(&format!(
            r#"
family = "{family}"
n_min = 6
n_max = 8
n_step = 2
pw_min = 2
pw_max = 2
eps = ["1/2"]
seeds = [0, 1]
weight_lo = 1
weight_hi = 40
out = "unused.csv"
check_bags = false
"#
        ))
        .unwrap()
    }

    #[test]
    fn sweep_is_deterministic_and_verified() {
        for family in ["kpath", "outerplanar", "random"] {
            let cfg = tiny_cfg(family);
            let (rows, ok) = run_experiment(&cfg).unwrap();
            assert!(ok, "family {family} had a failed row");
            assert_eq!(rows.len(), 4);
            let (rows2, _) = run_experiment(&cfg).unwrap();
            assert_eq!(render_csv(&rows), render_csv(&rows2));
        }
    }

    #[test]
    fn summary_single_row_matches_row() {
        let cfg = tiny_cfg("kpath");
        let (rows, _) = run_experiment(&cfg).unwrap();
        let csv = render_csv(&rows[..1]);
        let summary = summarize_csv(&csv).unwrap();
        let line = summary.lines().nth(1).unwrap();
        assert!(line.starts_with("kpath"));
        assert!(line.contains(" 1 "), "one row counted: {line}");
        let light = parse_weight(rows[0].lightness.as_ref().unwrap()).unwrap();
        assert!(line.contains(&approx4(&light)));
    }

    #[test]
    fn summary_of_empty_csv_is_empty() {
        assert!(summarize_csv("").unwrap().contains("no rows"));
        let header_only = format!("{CSV_COLUMNS}\n");
        let s = summarize_csv(&header_only).unwrap();
        assert_eq!(s.lines().count(), 1);
    }

    #[test]
    fn summary_reports_malformed_line() {
        let bad = format!("{CSV_COLUMNS}\nkpath,6\n");
        match summarize_csv(&bad) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(ExperimentConfig::parse("family = \"kpath\"").is_err());
        let base = r#"
family = "kpath"
n_min = 4
n_max = 6
pw_min = 2
pw_max = 5
eps = ["1/2"]
seeds = [0]
out = "x.csv"
"#;
        // n_min < pw_max + 1
        assert!(ExperimentConfig::parse(base).is_err());
        let empty_eps = base.replace("eps = [\"1/2\"]", "eps = []");
        assert!(ExperimentConfig::parse(&empty_eps).is_err());
        let neg_eps = base.replace("eps = [\"1/2\"]", "eps = [\"-1/2\"]");
        assert!(ExperimentConfig::parse(&neg_eps).is_err());
    }

    #[test]
    fn approx4_truncates_exactly() {
        assert_eq!(approx4(&parse_weight("7/2").unwrap()), "3.5000");
        assert_eq!(approx4(&parse_weight("1/3").unwrap()), "0.3333");
        assert_eq!(approx4(&parse_weight("2").unwrap()).as_str(), "2.0000");
    }
}
