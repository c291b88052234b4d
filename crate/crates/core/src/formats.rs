//! Text file formats for graphs, spanners, path decompositions and
//! charging schemes, plus the JSON-lines audit dump.
//!
//! All formats are line-oriented; blank lines and lines starting with `#`
//! are ignored everywhere (a spanner file additionally carries its stretch
//! parameter in a `# eps p/q` comment). Parse errors report 1-based line
//! numbers of the file as written.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;

use crate::charging::{pair_of, ChargingScheme, Pair};
use crate::forest::AuditReport;
use crate::graph::{format_weight, parse_weight, Weight, WeightedGraph};
use crate::pathdec::PathDecomposition;
use crate::{Error, Result};

fn fmt_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

/// Numbered content lines: skips blanks and `#` comments, keeps file line
/// numbers for error messages.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| fmt_err(line, format!("bad {what} '{tok}'")))
}

/// Parse a graph from the text format: header `n m`, then m edge lines
/// `u v p` or `u v p q` (weight p/q).
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| fmt_err(1, "missing 'n m' header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(fmt_err(hline, "header must be 'n m'"));
    }
    let n = parse_usize(toks[0], hline, "vertex count")?;
    let m = parse_usize(toks[1], hline, "edge count")?;
    let mut g = WeightedGraph::new(n);
    let mut seen = 0usize;
    for (ln, l) in lines {
        if seen == m {
            return Err(fmt_err(ln, format!("more than {m} edge lines")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 && toks.len() != 4 {
            return Err(fmt_err(ln, "edge line must be 'u v p' or 'u v p q'"));
        }
        let u = parse_usize(toks[0], ln, "vertex id")?;
        let v = parse_usize(toks[1], ln, "vertex id")?;
        let p: BigInt = toks[2]
            .parse()
            .map_err(|_| fmt_err(ln, format!("bad weight numerator '{}'", toks[2])))?;
        let q: BigInt = match toks.get(3) {
            Some(t) => t
                .parse()
                .map_err(|_| fmt_err(ln, format!("bad weight denominator '{t}'")))?,
            None => BigInt::one(),
        };
        if q == BigInt::from(0) {
            return Err(fmt_err(ln, "zero weight denominator"));
        }
        g.add_edge(u, v, Weight::new(p, q))
            .map_err(|e| fmt_err(ln, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::invalid(format!(
            "header promises {m} edges but the file has {seen}"
        )));
    }
    Ok(g)
}

/// Render a graph in the text format parsed by [`parse_graph`].
pub fn render_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        if e.w.denom().is_one() {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w.numer());
        } else {
            let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.w.numer(), e.w.denom());
        }
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    Ok(fs::write(path, render_graph(g))?)
}

/// Parse a spanner file: a graph file whose comments carry `# eps p/q`.
pub fn parse_spanner(text: &str) -> Result<(WeightedGraph, Option<Weight>)> {
    let mut eps = None;
    for l in text.lines() {
        let l = l.trim();
        if let Some(rest) = l.strip_prefix("# eps") {
            eps = Some(parse_weight(rest)?);
        }
    }
    Ok((parse_graph(text)?, eps))
}

/// Render a spanner file: the spanner's edges as a graph plus the stretch
/// parameter as a `# eps` comment.
pub fn render_spanner(s: &WeightedGraph, eps: &Weight) -> String {
    format!("# eps {}\n{}", format_weight(eps), render_graph(s))
}

pub fn read_spanner(path: impl AsRef<Path>) -> Result<(WeightedGraph, Option<Weight>)> {
    parse_spanner(&fs::read_to_string(path)?)
}

pub fn write_spanner(path: impl AsRef<Path>, s: &WeightedGraph, eps: &Weight) -> Result<()> {
    Ok(fs::write(path, render_spanner(s, eps))?)
}

/// Parse a path decomposition: line i lists the vertex ids of bag i.
pub fn parse_dec(text: &str) -> Result<PathDecomposition> {
    let mut bags = Vec::new();
    for (ln, l) in content_lines(text) {
        let mut bag = Vec::new();
        for tok in l.split_whitespace() {
            bag.push(parse_usize(tok, ln, "vertex id")?);
        }
        bags.push(bag);
    }
    Ok(PathDecomposition::new(bags))
}

pub fn render_dec(d: &PathDecomposition) -> String {
    let mut out = String::new();
    for bag in d.bags() {
        let ids: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

pub fn read_dec(path: impl AsRef<Path>) -> Result<PathDecomposition> {
    parse_dec(&fs::read_to_string(path)?)
}

pub fn write_dec(path: impl AsRef<Path>, d: &PathDecomposition) -> Result<()> {
    Ok(fs::write(path, render_dec(d))?)
}

/// Parse a charging scheme: `tree u v` lines name the tree edges and
/// `e_u e_v : p1_u p1_v p2_u p2_v ...` lines give each charged pair's path
/// as a list of edge endpoints.
pub fn parse_scheme(text: &str) -> Result<ChargingScheme> {
    let mut tree = std::collections::BTreeSet::new();
    let mut paths = std::collections::BTreeMap::new();
    for (ln, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("tree ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(fmt_err(ln, "tree line must be 'tree u v'"));
            }
            let u = parse_usize(toks[0], ln, "vertex id")?;
            let v = parse_usize(toks[1], ln, "vertex id")?;
            if u == v {
                return Err(fmt_err(ln, "tree edge endpoints coincide"));
            }
            tree.insert(pair_of(u, v));
            continue;
        }
        let (head, tail) = l
            .split_once(':')
            .ok_or_else(|| fmt_err(ln, "expected 'e_u e_v : path...'"))?;
        let htoks: Vec<&str> = head.split_whitespace().collect();
        if htoks.len() != 2 {
            return Err(fmt_err(ln, "charged edge must be two vertex ids"));
        }
        let eu = parse_usize(htoks[0], ln, "vertex id")?;
        let ev = parse_usize(htoks[1], ln, "vertex id")?;
        if eu == ev {
            return Err(fmt_err(ln, "charged edge endpoints coincide"));
        }
        let ptoks: Vec<&str> = tail.split_whitespace().collect();
        if ptoks.is_empty() || ptoks.len() % 2 != 0 {
            return Err(fmt_err(
                ln,
                "path must be a non-empty even list of endpoints",
            ));
        }
        let mut path: Vec<Pair> = Vec::with_capacity(ptoks.len() / 2);
        for c in ptoks.chunks(2) {
            let a = parse_usize(c[0], ln, "vertex id")?;
            let b = parse_usize(c[1], ln, "vertex id")?;
            if a == b {
                return Err(fmt_err(ln, "path edge endpoints coincide"));
            }
            path.push(pair_of(a, b));
        }
        if paths.insert(pair_of(eu, ev), path).is_some() {
            return Err(fmt_err(ln, format!("pair ({eu},{ev}) charged twice")));
        }
    }
    Ok(ChargingScheme::new(tree, paths))
}

pub fn render_scheme(cs: &ChargingScheme) -> String {
    let mut out = String::new();
    for &(u, v) in &cs.tree {
        let _ = writeln!(out, "tree {u} {v}");
    }
    for (&(eu, ev), path) in &cs.paths {
        let mut toks = Vec::with_capacity(path.len() * 2);
        for &(a, b) in path {
            toks.push(a.to_string());
            toks.push(b.to_string());
        }
        let _ = writeln!(out, "{eu} {ev} : {}", toks.join(" "));
    }
    out
}

pub fn read_scheme(path: impl AsRef<Path>) -> Result<ChargingScheme> {
    parse_scheme(&fs::read_to_string(path)?)
}

pub fn write_scheme(path: impl AsRef<Path>, cs: &ChargingScheme) -> Result<()> {
    Ok(fs::write(path, render_scheme(cs))?)
}

/// Parse a pair list (`u v` per line), e.g. the virtual-edge list consumed
/// by scheme strengthening.
pub fn parse_pairs(text: &str) -> Result<Vec<Pair>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(fmt_err(ln, "pair line must be 'u v'"));
        }
        let u = parse_usize(toks[0], ln, "vertex id")?;
        let v = parse_usize(toks[1], ln, "vertex id")?;
        if u == v {
            return Err(fmt_err(ln, "pair endpoints coincide"));
        }
        out.push(pair_of(u, v));
    }
    Ok(out)
}

pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<Pair>> {
    parse_pairs(&fs::read_to_string(path)?)
}

/// Render the per-edge audit as JSON lines, one record per MST edge:
/// `{"edge":[u,v],"triangles":t,"pseudo_triangles":p,"total_charges":c}`.
pub fn render_audit_jsonl(report: &AuditReport) -> String {
    let mut out = String::new();
    for rec in &report.per_edge {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string(rec).expect("audit records serialize")
        );
    }
    out
}

pub fn write_audit_jsonl(path: impl AsRef<Path>, report: &AuditReport) -> Result<()> {
    Ok(fs::write(path, render_audit_jsonl(report))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::w_int;

    fn sample_graph() -> WeightedGraph {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, w_int(3)).unwrap();
        g.add_edge(1, 2, Weight::new(BigInt::from(7), BigInt::from(2)))
            .unwrap();
        g.add_edge(2, 3, w_int(1)).unwrap();
        g
    }

    #[test]
    fn graph_roundtrip() {
        let g = sample_graph();
        let text = render_graph(&g);
        let h = parse_graph(&text).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.m(), 3);
        assert_eq!(h.weight(1, 2), g.weight(1, 2));
        assert_eq!(text, render_graph(&h));
    }

    #[test]
    fn graph_rejects_malformed() {
        assert!(matches!(
            parse_graph("2 1\n0 1"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("2 2\n0 1 5"),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            parse_graph("2 1\n0 1 5\n1 0 2"),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("2 1\n0 1 5 0"),
            Err(Error::Format { line: 2, .. })
        ));
        // self-loops and duplicates are rejected by the graph itself
        assert!(parse_graph("2 1\n0 0 5").is_err());
        assert!(parse_graph("2 2\n0 1 5\n0 1 6").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_graph("# a graph\n\n3 1\n# edge\n0 2 4\n").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn spanner_roundtrip_keeps_eps() {
        let g = sample_graph();
        let eps = Weight::new(BigInt::from(1), BigInt::from(2));
        let text = render_spanner(&g, &eps);
        let (h, got) = parse_spanner(&text).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(got, Some(eps));
    }

    #[test]
    fn dec_roundtrip() {
        let d = PathDecomposition::new(vec![vec![0, 1, 2], vec![1, 2, 3]]);
        let text = render_dec(&d);
        let e = parse_dec(&text).unwrap();
        assert_eq!(e.bags(), d.bags());
    }

    #[test]
    fn scheme_roundtrip() {
        let mut tree = std::collections::BTreeSet::new();
        tree.insert((0, 1));
        tree.insert((1, 2));
        let mut paths = std::collections::BTreeMap::new();
        paths.insert((0, 2), vec![(0, 1), (1, 2)]);
        let cs = ChargingScheme::new(tree, paths);
        let text = render_scheme(&cs);
        let back = parse_scheme(&text).unwrap();
        assert_eq!(back, cs);
    }

    #[test]
    fn scheme_rejects_malformed() {
        assert!(matches!(
            parse_scheme("0 1 : 0"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_scheme("tree 0"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_scheme("0 1 : 0 2\n0 1 : 1 2"),
            Err(Error::Format { line: 2, .. })
        ));
    }
}
