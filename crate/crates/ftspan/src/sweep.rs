//! Experiment sweeps: a config fans out into (kind, n, seed) runs, each row
//! records the spanner size and a normalized ratio for trend plots.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{generate, pick_sources, Model};
use crate::spanner::{build, ceil_cbrt, Kind};
use crate::verify::{check_ftmbfs_exact, check_stretch};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kinds: Vec<String>,
    /// One of `gnp`, `regular`, `grid` (for `grid`, `n` is the side length).
    pub model: String,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub p: Option<f64>,
    /// `"2lnn-over-n"` scales the edge probability with n.
    #[serde(default)]
    pub p_rule: Option<String>,
    #[serde(default)]
    pub d: Option<usize>,
    /// Source count for the sourcewise kinds; defaults to `ceil(n^(1/3))`.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub verify: bool,
    /// Overrides the kind's stretch contract during verification.
    #[serde(default)]
    pub beta: Option<u32>,
}

pub fn read_config(text: &str) -> Result<SweepConfig> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("sweep config: {e}")))
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub kind: Kind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub spanner_edges: usize,
    pub ratio: f64,
    pub verify_pass: Option<bool>,
    pub millis: u64,
}

fn model_for(cfg: &SweepConfig, n: usize) -> Result<Model> {
    match cfg.model.as_str() {
        "gnp" => {
            let p = match (&cfg.p_rule, cfg.p) {
                (Some(rule), _) if rule == "2lnn-over-n" => {
                    (2.0 * (n.max(2) as f64).ln() / n as f64).min(1.0)
                }
                (Some(rule), _) => {
                    return Err(Error::Config(format!("unknown p_rule {rule:?}")));
                }
                (None, Some(p)) => p,
                (None, None) => return Err(Error::Config("gnp needs p or p_rule".into())),
            };
            Ok(Model::Gnp { n, p })
        }
        "regular" => {
            let d = cfg.d.ok_or_else(|| Error::Config("regular needs d".into()))?;
            Ok(Model::Regular { n, d })
        }
        "grid" => Ok(Model::Grid { rows: n, cols: n }),
        other => Err(Error::Config(format!("unknown model {other:?}"))),
    }
}

/// The size scale a kind is plotted against.
fn ratio_exponent(kind: Kind) -> f64 {
    match kind {
        Kind::TwoAdd => 5.0 / 3.0,
        Kind::SixAdd | Kind::FourSw => 1.5,
        Kind::EightSw | Kind::Ftmbfs => 4.0 / 3.0,
    }
}

fn run_one(cfg: &SweepConfig, kind: Kind, n: usize, seed: u64) -> Result<SweepRow> {
    let model = model_for(cfg, n)?;
    let g = generate(&model, seed)?;
    let sources = if kind.needs_sources() {
        pick_sources(&g, cfg.k.unwrap_or_else(|| ceil_cbrt(g.n()).max(1)))?
    } else {
        Vec::new()
    };
    let start = std::time::Instant::now();
    let sp = build(&g, kind, &sources, seed)?;
    let millis = start.elapsed().as_millis() as u64;
    let verify_pass = if cfg.verify {
        let pass = if kind == Kind::Ftmbfs {
            check_ftmbfs_exact(&g, &sp.edges, &sources)?.passed()
        } else {
            let beta = cfg.beta.unwrap_or(kind.beta());
            let src = if kind.needs_sources() {
                Some(sources.as_slice())
            } else {
                None
            };
            check_stretch(&g, &sp.edges, beta, src)?.passed()
        };
        Some(pass)
    } else {
        None
    };
    let denom = (g.n().max(1) as f64).powf(ratio_exponent(kind));
    Ok(SweepRow {
        kind,
        n: g.n(),
        m: g.m(),
        seed,
        spanner_edges: sp.edges.len(),
        ratio: sp.edges.len() as f64 / denom,
        verify_pass,
        millis,
    })
}

/// Runs the full cross product `kinds × ns × seeds`. Rows are computed in a
/// worker pool but always returned sorted, so output does not depend on the
/// worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut kinds = Vec::new();
    for name in &cfg.kinds {
        kinds.push(
            Kind::parse(name).ok_or_else(|| Error::Config(format!("unknown kind {name:?}")))?,
        );
    }
    let mut jobs = Vec::new();
    for &kind in &kinds {
        for &n in &cfg.ns {
            for &seed in &cfg.seeds {
                jobs.push((kind, n, seed));
            }
        }
    }
    let mut rows = jobs
        .par_iter()
        .map(|&(kind, n, seed)| run_one(cfg, kind, n, seed))
        .collect::<Result<Vec<SweepRow>>>()?;
    rows.sort_by(|a, b| {
        (a.kind.name(), a.n, a.seed).cmp(&(b.kind.name(), b.n, b.seed))
    });
    Ok(rows)
}

pub fn write_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("kind,n,m,seed,|H|,ratio,verify_pass,millis\n");
    for r in rows {
        let pass = match r.verify_pass {
            Some(true) => "true",
            Some(false) => "false",
            None => "na",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{},{}\n",
            r.kind.name(),
            r.n,
            r.m,
            r.seed,
            r.spanner_edges,
            r.ratio,
            pass,
            r.millis
        ));
    }
    out
}
