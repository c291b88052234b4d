//! spanlab: greedy spanners, path decompositions, charging schemes and
//! verified lightness experiments from the command line.
//!
//! Exit codes: 0 = success, 1 = a verification verdict was negative (or a
//! certificate was refused / internal structure broke), 2 = input error
//! (bad arguments, unreadable or malformed files).

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spanner_core::charging::{outerplanar_charging, pair_of, strengthen_weak_scheme, verify_scheme};
use spanner_core::formats;
use spanner_core::generators::WeightDist;
use spanner_core::graph::{format_weight, parse_weight};
use spanner_core::pathdec::{generate_kpath, smooth, validate};
use spanner_core::pipeline::run_kpath_pipeline;
use spanner_core::spanner::{greedy_spanner, verify_edge_path_property, verify_stretch};
use spanner_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "spanlab",
    version,
    about = "Greedy (1+eps)-spanners with verified charging-scheme lightness certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a greedy spanner
    #[command(subcommand)]
    Spanner(SpannerCmd),
    /// Validate, smooth or generate path decompositions
    #[command(subcommand)]
    Pathdec(PathdecCmd),
    /// Verify, construct or strengthen charging schemes
    #[command(subcommand)]
    Charge(ChargeCmd),
    /// Build a charging forest and extract its scheme
    #[command(subcommand)]
    Forest(ForestCmd),
    /// Run an experiment sweep from a config file
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize an experiment CSV
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum SpannerCmd {
    /// Build the greedy (1+eps)-spanner of a graph and verify it
    Build {
        /// stretch parameter, e.g. 1/2
        #[arg(long)]
        eps: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PathdecCmd {
    /// Check a decomposition against a graph
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dec: PathBuf,
    },
    /// Convert a decomposition to a smooth one
    Smooth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dec: PathBuf,
        /// output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random k-path instance with a smooth decomposition
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pw: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        weight_lo: i64,
        #[arg(long, default_value_t = 1000)]
        weight_hi: i64,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_dec: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChargeCmd {
    /// Verify a charging scheme at simplicity level k
    Verify {
        /// spanner (or graph) file; `# eps` comment supplies eps unless --eps is given
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Build the 1-simple face-tree scheme of an outer-planar graph
    Outerplanar {
        #[arg(long)]
        graph: PathBuf,
        /// designated boundary edge "u,v"; heaviest boundary edge when omitted
        #[arg(long)]
        designated: Option<String>,
        /// output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Splice virtual edges out of a weak scheme on a completed graph
    Strengthen {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        /// file listing the virtual edges, one "u v" per line
        #[arg(long = "virtual")]
        virtual_pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ForestCmd {
    /// Run the charging-forest construction on a k-path and extract the scheme
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dec: PathBuf,
        /// stretch parameter the extracted scheme is verified against
        #[arg(long)]
        eps: String,
        /// scheme output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// write the per-MST-edge charge audit as JSON lines to this path
        #[arg(long)]
        audit: Option<PathBuf>,
        /// check the forest invariants after every bag, not just at the end
        #[arg(long)]
        check_bags: bool,
    },
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Format { line, msg } => Error::Format {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn cmd_spanner(cmd: SpannerCmd) -> Result<bool> {
    let SpannerCmd::Build { eps, input, out } = cmd;
    let eps = parse_weight(&eps)?;
    let g = in_file(&input, formats::parse_graph(&read_to_string(&input)?))?;
    let s = greedy_spanner(&g, &eps)?;
    let stretch = verify_stretch(&g, &s)?;
    let edge_path = verify_edge_path_property(&g, &s)?;
    let sg = s.to_graph(&g);
    write_file(&out, &formats::render_spanner(&sg, &eps))?;
    println!(
        "spanner: kept {} of {} edges, w(S) = {}, stretch {}, edge-path {}",
        sg.m(),
        g.m(),
        format_weight(&s.weight(&g)),
        flag(stretch.is_empty()),
        flag(edge_path.is_empty()),
    );
    for v in &stretch {
        println!("  stretch violation: {v:?}");
    }
    for v in &edge_path {
        println!("  edge-path violation: {v:?}");
    }
    Ok(stretch.is_empty() && edge_path.is_empty())
}

fn cmd_pathdec(cmd: PathdecCmd) -> Result<bool> {
    match cmd {
        PathdecCmd::Validate { graph, dec } => {
            let g = in_file(&graph, formats::parse_graph(&read_to_string(&graph)?))?;
            let d = in_file(&dec, formats::parse_dec(&read_to_string(&dec)?))?;
            let violations = validate(&g, &d);
            if violations.is_empty() {
                println!(
                    "valid: {} bags, width {}",
                    d.len(),
                    d.width().map(|w| w.to_string()).unwrap_or_else(|| "-".into())
                );
                Ok(true)
            } else {
                for v in &violations {
                    println!("violation: {v:?}");
                }
                Ok(false)
            }
        }
        PathdecCmd::Smooth { graph, dec, out } => {
            let g = in_file(&graph, formats::parse_graph(&read_to_string(&graph)?))?;
            let d = in_file(&dec, formats::parse_dec(&read_to_string(&dec)?))?;
            let sm = smooth(&g, &d)?;
            let text = formats::render_dec(sm.as_dec());
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        PathdecCmd::Gen {
            n,
            pw,
            seed,
            weight_lo,
            weight_hi,
            out_graph,
            out_dec,
        } => {
            if weight_lo < 1 || weight_lo > weight_hi {
                return Err(Error::invalid("need 1 <= weight_lo <= weight_hi"));
            }
            let dist = WeightDist::UniformInt {
                lo: weight_lo,
                hi: weight_hi,
            };
            let (g, dec) = generate_kpath(n, pw, seed, &dist)?;
            write_file(&out_graph, &formats::render_graph(&g))?;
            write_file(&out_dec, &formats::render_dec(dec.as_dec()))?;
            println!(
                "generated k-path: n = {}, m = {}, pw = {}, {} bags",
                g.n(),
                g.m(),
                dec.pw(),
                dec.len()
            );
            Ok(true)
        }
    }
}

fn parse_pair_arg(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::invalid(format!("expected 'u,v', got '{text}'")))?;
    let u: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad vertex id '{a}'")))?;
    let v: usize = b
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad vertex id '{b}'")))?;
    if u == v {
        return Err(Error::invalid("pair endpoints coincide"));
    }
    Ok(pair_of(u, v))
}

fn cmd_charge(cmd: ChargeCmd) -> Result<bool> {
    match cmd {
        ChargeCmd::Verify {
            graph,
            scheme,
            k,
            eps,
        } => {
            let (g, header_eps) = in_file(&graph, formats::parse_spanner(&read_to_string(&graph)?))?;
            let eps = match eps {
                Some(t) => parse_weight(&t)?,
                None => header_eps.ok_or_else(|| {
                    Error::invalid("no --eps given and the graph file has no '# eps' comment")
                })?,
            };
            let cs = in_file(&scheme, formats::parse_scheme(&read_to_string(&scheme)?))?;
            let report = verify_scheme(&g, &eps, &cs, k)?;
            println!(
                "tree {}  coverage {}  paths {}  {}-simple {} (max tree charge {}, max non-tree {})  acyclic {}  strong {}",
                flag(report.tree_ok),
                flag(report.coverage_ok),
                flag(report.paths_ok),
                k,
                flag(report.k_simple_ok),
                report.max_tree_charge,
                report.max_nontree_charge,
                flag(report.acyclic_ok),
                flag(report.strong_ok),
            );
            for v in &report.violations {
                println!("violation: {v}");
            }
            Ok(report.all_ok())
        }
        ChargeCmd::Outerplanar {
            graph,
            designated,
            out,
        } => {
            let g = in_file(&graph, formats::parse_graph(&read_to_string(&graph)?))?;
            let des = designated.as_deref().map(parse_pair_arg).transpose()?;
            let cs = outerplanar_charging(&g, des)?;
            let text = formats::render_scheme(&cs);
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        ChargeCmd::Strengthen {
            graph,
            scheme,
            virtual_pairs,
            out,
        } => {
            let g = in_file(&graph, formats::parse_graph(&read_to_string(&graph)?))?;
            let cs = in_file(&scheme, formats::parse_scheme(&read_to_string(&scheme)?))?;
            let pairs = in_file(&virtual_pairs, formats::parse_pairs(&read_to_string(&virtual_pairs)?))?;
            let mut is_virtual = vec![false; g.m()];
            for (u, v) in pairs {
                let idx = g.edge_index(u, v).ok_or_else(|| {
                    Error::invalid(format!("virtual pair ({u},{v}) is not an edge of the graph"))
                })?;
                is_virtual[idx] = true;
            }
            let strong = strengthen_weak_scheme(&g, &is_virtual, &cs)?;
            write_file(&out, &formats::render_scheme(&strong))?;
            Ok(true)
        }
    }
}

fn cmd_forest(cmd: ForestCmd) -> Result<bool> {
    let ForestCmd::Build {
        graph,
        dec,
        eps,
        out,
        audit,
        check_bags,
    } = cmd;
    let eps = parse_weight(&eps)?;
    let g = in_file(&graph, formats::parse_graph(&read_to_string(&graph)?))?;
    let d = in_file(&dec, formats::parse_dec(&read_to_string(&dec)?))?;
    let sm = smooth(&g, &d)?;
    let r = run_kpath_pipeline(&g, &sm, &eps, check_bags)?;
    let text = formats::render_scheme(&r.scheme);
    match &out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(p) = &audit {
        write_file(p, &formats::render_audit_jsonl(&r.audit))?;
    }
    println!(
        "forest: pw = {}, k = {}, spanner {} of {} edges, {} charged pairs; stretch {}  edge-path {}  invariants {}  {}-simple {}  acyclic {}  strong {}",
        r.pw,
        r.k,
        r.spanner.edge_indices.len(),
        g.m(),
        r.scheme.paths.len(),
        flag(r.stretch_ok),
        flag(r.edge_path_ok),
        flag(r.invariants_ok),
        r.k,
        flag(r.report.k_simple_ok),
        flag(r.report.acyclic_ok),
        flag(r.report.strong_ok),
    );
    match &r.cert {
        Some(c) => println!(
            "lightness: w(S) = {} <= {} = (1+k/eps)*w(MST), ratio {}",
            format_weight(&r.w_spanner),
            format_weight(&c.bound),
            format_weight(&r.lightness),
        ),
        None => println!("lightness: certificate refused"),
    }
    println!(
        "audit: max triangles {} (cap {}), max pseudo-triangles {} (cap {}), max total {} (cap {})",
        r.audit.max_triangles,
        r.audit.triangle_bound,
        r.audit.max_pseudo,
        r.audit.pseudo_bound,
        r.audit.max_total,
        r.audit.total_bound,
    );
    // the audit caps are observational (see README); they do not gate the exit code
    for v in &r.audit.violations {
        println!("audit: {v}");
    }
    for v in &r.report.violations {
        println!("violation: {v}");
    }
    Ok(r.all_ok())
}

fn cmd_run(config: PathBuf) -> Result<bool> {
    let cfg = experiment::ExperimentConfig::parse(&read_to_string(&config)?)?;
    let (rows, all_ok) = experiment::run_experiment(&cfg)?;
    let out = PathBuf::from(&cfg.out);
    experiment::write_csv(&out, &rows).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", out.display()),
        )),
        other => other,
    })?;
    let failed = rows.iter().filter(|r| !r.ok()).count();
    println!(
        "wrote {} rows to {} ({} failed)",
        rows.len(),
        cfg.out,
        failed
    );
    for r in rows.iter().filter(|r| !r.ok()).take(10) {
        println!(
            "  FAILED: family {} n {} pw {} seed {} eps {}: {}",
            r.family,
            r.n,
            r.pw.map(|p| p.to_string()).unwrap_or_else(|| "na".into()),
            r.seed,
            r.eps,
            r.status
        );
    }
    Ok(all_ok)
}

fn cmd_report(input: PathBuf) -> Result<bool> {
    let text = read_to_string(&input)?;
    let summary = in_file(&input, experiment::summarize_csv(&text))?;
    print!("{summary}");
    Ok(true)
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Spanner(c) => cmd_spanner(c),
        Cmd::Pathdec(c) => cmd_pathdec(c),
        Cmd::Charge(c) => cmd_charge(c),
        Cmd::Forest(c) => cmd_forest(c),
        Cmd::Run { config } => cmd_run(config),
        Cmd::Report { input } => cmd_report(input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("spanlab: {e}");
            match e {
                Error::Refused(_) | Error::Structural(_) => ExitCode::from(1),
                Error::InvalidInput(_) | Error::Format { .. } | Error::Io(_) => ExitCode::from(2),
            }
        }
    }
}
