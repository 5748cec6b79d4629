//! Text formats: edge lists, source lists, JSON build reports and sweep CSV.
//!
//! Edge-list format, bit-exact on write: a header line `n m`, then `m` lines
//! `u v` with `0 <= u < v < n`, sorted lexicographically. Blank lines and
//! lines starting with `#` are ignored on read.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, Vertex};
use crate::spanner::{BuildParams, Spanner};
use crate::verify::{SizeReport, StretchReport};

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Same format for a bare edge set over `n` vertices (spanner files).
pub fn write_edge_set(n: usize, edges: &EdgeSet) -> String {
    let mut out = format!("{} {}\n", n, edges.len());
    for &(u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_edge_list_file(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = EdgeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut fields = content.split_whitespace();
        let parse = |tok: Option<&str>, line: usize| -> Result<usize> {
            tok.ok_or(Error::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse::<usize>()
            .map_err(|_| Error::Parse {
                line,
                msg: "expected an integer".into(),
            })
        };
        let a = parse(fields.next(), line)?;
        let b = parse(fields.next(), line)?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line,
                msg: "trailing tokens".into(),
            });
        }
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a == b {
                    return Err(Error::Parse {
                        line,
                        msg: format!("self-loop at vertex {a}"),
                    });
                }
                if a > b {
                    return Err(Error::Parse {
                        line,
                        msg: format!("endpoints must satisfy u < v, got {a} {b}"),
                    });
                }
                if b >= n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("vertex {b} out of range for n={n}"),
                    });
                }
                if !seen.insert((a, b)) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate edge ({a},{b})"),
                    });
                }
                pairs.push((a, b));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing header line".into(),
        });
    };
    if pairs.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header claims {m} edges, found {}", pairs.len()),
        });
    }
    Graph::new(n, &pairs)
}

pub fn read_edge_list_file(path: &Path) -> Result<Graph> {
    read_edge_list(&std::fs::read_to_string(path)?)
}

/// Whitespace-separated vertex ids; `#` starts a comment line.
pub fn read_sources(text: &str, n: usize) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        for tok in content.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad vertex id {tok:?}"),
            })?;
            if v >= n {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("source {v} out of range for n={n}"),
                });
            }
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn read_sources_file(path: &Path, n: usize) -> Result<Vec<Vertex>> {
    read_sources(&std::fs::read_to_string(path)?, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpannerSummary {
    pub edges: usize,
    pub tag_counts: BTreeMap<String, usize>,
    pub ratio_n53: f64,
    pub ratio_n32: f64,
    pub ratio_n43: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StretchSummary {
    pub beta: u32,
    pub exact: bool,
    pub checked: u64,
    pub violations: usize,
    pub max_observed_stretch: u32,
    pub infinite_pairs: u64,
    pub pass: bool,
}

impl StretchSummary {
    pub fn from_report(r: &StretchReport) -> Self {
        StretchSummary {
            beta: r.beta,
            exact: r.exact,
            checked: r.checked,
            violations: r.violations.len(),
            max_observed_stretch: r.max_observed_stretch,
            infinite_pairs: r.infinite_pairs,
            pass: r.passed(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub params: BuildParams,
    pub graph: GraphSummary,
    pub spanner: SpannerSummary,
    pub stretch: StretchSummary,
    pub structural_pass: bool,
    pub millis: u64,
}

pub fn build_report(
    g: &Graph,
    sp: &Spanner,
    size: &SizeReport,
    stretch: &StretchReport,
    structural_pass: bool,
    millis: u64,
) -> BuildReport {
    BuildReport {
        params: sp.params.clone(),
        graph: GraphSummary { n: g.n(), m: g.m() },
        spanner: SpannerSummary {
            edges: sp.edges.len(),
            tag_counts: sp.tag_counts(),
            ratio_n53: size.ratio_n53,
            ratio_n32: size.ratio_n32,
            ratio_n43: size.ratio_n43,
        },
        stretch: StretchSummary::from_report(stretch),
        structural_pass,
        millis,
    }
}

pub fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    #[test]
    fn c5_format() {
        let text = write_edge_list(&cycle(5));
        assert_eq!(text, "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
    }

    #[test]
    fn round_trip_is_identity() {
        for g in [cycle(5), crate::gen::fixture_f1()] {
            let text = write_edge_list(&g);
            let back = read_edge_list(&text).unwrap();
            assert_eq!(write_edge_list(&back), text);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_edge_list("2 2\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = read_edge_list("3 1\n2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = read_edge_list("2 1\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = read_edge_list("3 2\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));

        let err = read_edge_list("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 0, .. }));
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let g = read_edge_list("# a cycle\n\n3 3\n0 1\n# middle\n0 2\n1 2\n").unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn sources_parse_and_dedup() {
        let s = read_sources("# picked\n2 0\n2\n", 5).unwrap();
        assert_eq!(s, vec![0, 2]);
        assert!(read_sources("9", 5).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn round_trip_random_graphs(n in 1usize..14, seed in 0u64..200) {
            let g = crate::gen::generate(&crate::gen::Model::Gnp { n, p: 0.4 }, seed).unwrap();
            let text = write_edge_list(&g);
            let back = read_edge_list(&text).unwrap();
            proptest::prop_assert_eq!(back.edges(), g.edges());
            proptest::prop_assert_eq!(write_edge_list(&back), text);
        }
    }
}
