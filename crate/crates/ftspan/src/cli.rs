//! Command-line entry points.
//!
//! Exit codes: 0 on success, 1 when a verification found violations,
//! 2 on usage, parse or I/O errors.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gen::{generate, pick_sources, Model};
use crate::graph::{Graph, Vertex};
use crate::io;
use crate::spanner::{build, Kind, Spanner};
use crate::sweep;
use crate::verify::{check_ftmbfs_exact, check_stretch, check_structural, size_report};

#[derive(Parser)]
#[command(name = "ftspan", version, about = "Fault-tolerant additive spanners")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded graph and write it as an edge list.
    Gen {
        /// gnp | regular | grid
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a spanner from an edge-list graph.
    Build {
        /// 2add | 6add | 4sw | 8sw | ftmbfs
        #[arg(long)]
        kind: String,
        #[arg(long)]
        input: PathBuf,
        /// Source file (one id per line); sourcewise kinds only.
        #[arg(long)]
        sources: Option<PathBuf>,
        /// Pick this many smallest-degree vertices as sources instead.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the spanner as an edge list.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a JSON report (runs the stretch and structural checks).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a spanner file against a graph file at a given stretch.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        spanner: PathBuf,
        /// Additive stretch bound; 0 demands exact distances.
        #[arg(long)]
        beta: u32,
        #[arg(long)]
        sources: Option<PathBuf>,
    },
    /// Run a sweep config and write a CSV of per-instance rows.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Gen {
            model,
            n,
            p,
            d,
            rows,
            cols,
            seed,
            out,
        } => {
            let model = match model.as_str() {
                "gnp" => Model::Gnp {
                    n: n.ok_or_else(|| Error::Config("gnp needs --n".into()))?,
                    p: p.ok_or_else(|| Error::Config("gnp needs --p".into()))?,
                },
                "regular" => Model::Regular {
                    n: n.ok_or_else(|| Error::Config("regular needs --n".into()))?,
                    d: d.ok_or_else(|| Error::Config("regular needs --d".into()))?,
                },
                "grid" => Model::Grid {
                    rows: rows.ok_or_else(|| Error::Config("grid needs --rows".into()))?,
                    cols: cols.ok_or_else(|| Error::Config("grid needs --cols".into()))?,
                },
                other => return Err(Error::Config(format!("unknown model {other:?}"))),
            };
            let g = generate(&model, seed)?;
            io::write_edge_list_file(&g, &out)?;
            println!("wrote {} vertices, {} edges to {}", g.n(), g.m(), out.display());
            Ok(0)
        }
        Cmd::Build {
            kind,
            input,
            sources,
            k,
            seed,
            out,
            report,
        } => {
            let kind =
                Kind::parse(&kind).ok_or_else(|| Error::Config(format!("unknown kind {kind:?}")))?;
            let g = io::read_edge_list_file(&input)?;
            let sources = resolve_sources(&g, kind, sources.as_deref(), k)?;
            let start = std::time::Instant::now();
            let sp = build(&g, kind, &sources, seed)?;
            let millis = start.elapsed().as_millis() as u64;
            if let Some(path) = &out {
                std::fs::write(path, io::write_edge_set(sp.n, &sp.edges))?;
            }
            let mut code = 0;
            if let Some(path) = &report {
                let stretch = run_contract_check(&g, &sp, &sources)?;
                let structural = check_structural(&g, &sp)?;
                let size = size_report(&g, &sp);
                let rep = io::build_report(&g, &sp, &size, &stretch, structural.passed(), millis);
                io::write_json_file(&rep, path)?;
                if !stretch.passed() || !structural.passed() {
                    code = 1;
                }
            }
            println!(
                "built {} spanner: {} of {} edges in {} ms",
                kind,
                sp.edges.len(),
                g.m(),
                millis
            );
            Ok(code)
        }
        Cmd::Verify {
            graph,
            spanner,
            beta,
            sources,
        } => {
            let g = io::read_edge_list_file(&graph)?;
            let h = io::read_edge_list_file(&spanner)?;
            if h.n() != g.n() {
                return Err(Error::Config(format!(
                    "vertex counts differ: graph {} vs spanner {}",
                    g.n(),
                    h.n()
                )));
            }
            let sources = sources
                .map(|p| io::read_sources_file(&p, g.n()))
                .transpose()?;
            let rep = if beta == 0 {
                let all: Vec<Vertex> = (0..g.n()).collect();
                check_ftmbfs_exact(&g, &h.edge_set(), sources.as_deref().unwrap_or(&all))?
            } else {
                check_stretch(&g, &h.edge_set(), beta, sources.as_deref())?
            };
            println!(
                "checked {} triples, beta={}, max stretch {}, {} infinite, {} violations",
                rep.checked,
                rep.beta,
                rep.max_observed_stretch,
                rep.infinite_pairs,
                rep.violations.len()
            );
            for v in rep.violations.iter().take(10) {
                println!(
                    "  violation s={} t={} fault={:?}: {:?} vs {:?}",
                    v.s, v.t, v.fault, v.h_dist, v.g_dist
                );
            }
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Cmd::Sweep { config, out } => {
            let cfg = sweep::read_config(&std::fs::read_to_string(&config)?)?;
            let rows = sweep::run_sweep(&cfg)?;
            std::fs::write(&out, sweep::write_csv(&rows))?;
            let failed = rows
                .iter()
                .filter(|r| r.verify_pass == Some(false))
                .count();
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(if failed > 0 { 1 } else { 0 })
        }
    }
}

fn resolve_sources(
    g: &Graph,
    kind: Kind,
    sources: Option<&std::path::Path>,
    k: Option<usize>,
) -> Result<Vec<Vertex>> {
    if !kind.needs_sources() {
        if sources.is_some() || k.is_some() {
            return Err(Error::Config(format!(
                "--sources/--k do not apply to kind {kind}"
            )));
        }
        return Ok(Vec::new());
    }
    match (sources, k) {
        (Some(path), None) => {
            let s = io::read_sources_file(path, g.n())?;
            if s.is_empty() {
                return Err(Error::Config("source file is empty".into()));
            }
            Ok(s)
        }
        (None, Some(k)) => pick_sources(g, k),
        (None, None) => Err(Error::Config(format!(
            "kind {kind} needs --sources or --k"
        ))),
        (Some(_), Some(_)) => Err(Error::Config("--sources and --k are exclusive".into())),
    }
}

/// The check a kind's contract asks for: exactness for the multi-source
/// structure, stretch over the source set (or everything) otherwise.
fn run_contract_check(
    g: &Graph,
    sp: &Spanner,
    sources: &[Vertex],
) -> Result<crate::verify::StretchReport> {
    if sp.params.kind == Kind::Ftmbfs {
        check_ftmbfs_exact(g, &sp.edges, sources)
    } else if sp.params.kind.needs_sources() {
        check_stretch(g, &sp.edges, sp.beta, Some(sources))
    } else {
        check_stretch(g, &sp.edges, sp.beta, None)
    }
}
