//! Spanner records and the top-level constructions.
//!
//! Every builder returns a [`Spanner`]: the edge subset, per-edge provenance
//! tags, the parameters needed to reproduce the build bit-for-bit, and the
//! buying instrumentation the structural checks consume. The additive stretch
//! contract (`beta`) travels with the record so verification needs no
//! out-of-band knowledge.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cluster::build_clustering;
use crate::error::{Error, Result};
use crate::ftmbfs::build_ftmbfs_parts;
use crate::graph::{Edge, EdgeSet, Graph, PerturbedWeights, Vertex};
use crate::sourcewise::{build_h4, build_h8, SwBuild};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "2add")]
    TwoAdd,
    #[serde(rename = "6add")]
    SixAdd,
    #[serde(rename = "4sw")]
    FourSw,
    #[serde(rename = "8sw")]
    EightSw,
    #[serde(rename = "ftmbfs")]
    Ftmbfs,
}

impl Kind {
    /// The additive stretch contract; 0 means exact distances.
    pub fn beta(self) -> u32 {
        match self {
            Kind::TwoAdd => 2,
            Kind::SixAdd => 6,
            Kind::FourSw => 4,
            Kind::EightSw => 8,
            Kind::Ftmbfs => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::TwoAdd => "2add",
            Kind::SixAdd => "6add",
            Kind::FourSw => "4sw",
            Kind::EightSw => "8sw",
            Kind::Ftmbfs => "ftmbfs",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "2add" => Some(Kind::TwoAdd),
            "6add" => Some(Kind::SixAdd),
            "4sw" => Some(Kind::FourSw),
            "8sw" => Some(Kind::EightSw),
            "ftmbfs" => Some(Kind::Ftmbfs),
            _ => None,
        }
    }

    /// True for the sourcewise kinds that need an explicit source set.
    pub fn needs_sources(self) -> bool {
        matches!(self, Kind::FourSw | Kind::EightSw | Kind::Ftmbfs)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a spanner edge came from. An edge may carry several tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Tree,
    Cluster,
    Local,
    Dep,
    Bought,
    Ftmbfs,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Tree => "tree",
            Tag::Cluster => "cluster",
            Tag::Local => "local",
            Tag::Dep => "dep",
            Tag::Bought => "bought",
            Tag::Ftmbfs => "ftmbfs",
        }
    }
}

/// Everything needed to reproduce a build. `seed` is what the caller asked
/// for; `seed_used` is what succeeded after tie retries (almost always equal).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildParams {
    pub kind: Kind,
    pub seed: u64,
    pub seed_used: u64,
    /// Effective clustering degree threshold; 0 when the build has no
    /// clustering stage of its own.
    pub delta: usize,
    pub sources: Vec<Vertex>,
    pub centers: Vec<Vertex>,
    /// Composition stage (the sourcewise build inside an all-pairs build).
    pub inner: Option<Box<BuildParams>>,
}

/// One path-buying decision.
#[derive(Debug, Clone, Serialize)]
pub struct BuyRecord {
    pub index: usize,
    pub s: Vertex,
    pub t: Vertex,
    pub fault: Vertex,
    pub cost: usize,
    pub value: usize,
    pub bought: bool,
}

#[derive(Debug, Clone)]
pub struct Spanner {
    pub n: usize,
    pub beta: u32,
    pub edges: EdgeSet,
    pub provenance: BTreeMap<Edge, BTreeSet<Tag>>,
    pub params: BuildParams,
    pub buy_log: Vec<BuyRecord>,
    /// Buys credited to each ordered pair of cluster centers.
    pub pair_credits: BTreeMap<(Vertex, Vertex), u32>,
    /// Per heavy target: how many distinct local protection edges it got.
    pub elocal_sizes: BTreeMap<Vertex, usize>,
}

impl Spanner {
    pub(crate) fn shell(n: usize, beta: u32, params: BuildParams) -> Spanner {
        Spanner {
            n,
            beta,
            edges: EdgeSet::new(),
            provenance: BTreeMap::new(),
            params,
            buy_log: Vec::new(),
            pair_credits: BTreeMap::new(),
            elocal_sizes: BTreeMap::new(),
        }
    }

    pub(crate) fn add_tagged(&mut self, edges: impl IntoIterator<Item = Edge>, tag: Tag) {
        for e in edges {
            self.edges.insert(e);
            self.provenance.entry(e).or_default().insert(tag);
        }
    }

    pub fn tag_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for tags in self.provenance.values() {
            for tag in tags {
                *out.entry(tag.name().to_string()).or_insert(0) += 1;
            }
        }
        out
    }

    /// Merges another spanner's edges, provenance and instrumentation.
    fn absorb(&mut self, other: Spanner) {
        for (e, tags) in other.provenance {
            self.edges.insert(e);
            self.provenance.entry(e).or_default().extend(tags);
        }
        self.buy_log.extend(other.buy_log);
        for (pair, c) in other.pair_credits {
            *self.pair_credits.entry(pair).or_insert(0) += c;
        }
        self.elocal_sizes.extend(other.elocal_sizes);
    }
}

/// Retries a seeded build on perturbation ties, advancing the seed by one.
fn with_seed_retry<T>(seed: u64, mut f: impl FnMut(u64) -> Result<T>) -> Result<(u64, T)> {
    const MAX_ATTEMPTS: u64 = 32;
    let mut last = Error::PerturbationTie;
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        match f(s) {
            Ok(v) => return Ok((s, v)),
            Err(Error::PerturbationTie) => {
                log::warn!("perturbation tie at seed {s}; retrying with seed {}", s + 1);
                last = Error::PerturbationTie;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `ceil(n^(2/3))` in integer arithmetic.
fn ceil_n23(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    let target = (n as u128) * (n as u128);
    let mut d = (n as f64).powf(2.0 / 3.0).floor() as usize;
    d = d.saturating_sub(2).max(1);
    while (d as u128).pow(3) < target {
        d += 1;
    }
    d
}

fn ceil_sqrt(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    let mut d = (n as f64).sqrt().floor() as usize;
    d = d.saturating_sub(2).max(1);
    while (d as u128) * (d as u128) < n as u128 {
        d += 1;
    }
    d
}

/// `ceil(n^(1/3))`, used for default sourcewise source counts.
pub fn ceil_cbrt(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    let mut d = (n as f64).cbrt().floor() as usize;
    d = d.saturating_sub(2).max(1);
    while (d as u128).pow(3) < n as u128 {
        d += 1;
    }
    d
}

/// All-pairs spanner with additive stretch 2: a clustering graph at
/// `Δ = ceil(n^(2/3))` plus an exact multi-source structure rooted at the
/// cluster centers.
pub fn build_2add(g: &Graph, seed: u64) -> Result<Spanner> {
    let (seed_used, spanner) = with_seed_retry(seed, |s| {
        let delta = ceil_n23(g.n()).max(2);
        let cl = build_clustering(g, delta)?;
        let mut params = BuildParams {
            kind: Kind::TwoAdd,
            seed,
            seed_used: s,
            delta: cl.delta(),
            sources: Vec::new(),
            centers: cl.centers().to_vec(),
            inner: None,
        };
        if !cl.centers().is_empty() {
            params.inner = Some(Box::new(BuildParams {
                kind: Kind::Ftmbfs,
                seed,
                seed_used: s,
                delta: 0,
                sources: cl.centers().to_vec(),
                centers: Vec::new(),
                inner: None,
            }));
        }
        let mut spanner = Spanner::shell(g.n(), Kind::TwoAdd.beta(), params);
        spanner.add_tagged(cl.edges().iter().copied(), Tag::Cluster);
        if !cl.centers().is_empty() {
            let w = PerturbedWeights::assign(g, s);
            let parts = build_ftmbfs_parts(g, cl.centers(), &w)?;
            spanner.add_tagged(parts.tree_edges.iter().copied(), Tag::Tree);
            spanner.add_tagged(parts.new_last_edges.iter().copied(), Tag::Ftmbfs);
        }
        Ok(spanner)
    })?;
    let mut spanner = spanner;
    spanner.params.seed_used = seed_used;
    Ok(spanner)
}

/// All-pairs spanner with additive stretch 6: a clustering graph at
/// `Δ = ceil(sqrt(n))` plus a stretch-4 sourcewise spanner rooted at the
/// cluster centers.
pub fn build_6add(g: &Graph, seed: u64) -> Result<Spanner> {
    let (seed_used, spanner) = with_seed_retry(seed, |s| {
        let delta = ceil_sqrt(g.n()).max(2);
        let cl = build_clustering(g, delta)?;
        let params = BuildParams {
            kind: Kind::SixAdd,
            seed,
            seed_used: s,
            delta: cl.delta(),
            sources: Vec::new(),
            centers: cl.centers().to_vec(),
            inner: None,
        };
        let mut spanner = Spanner::shell(g.n(), Kind::SixAdd.beta(), params);
        spanner.add_tagged(cl.edges().iter().copied(), Tag::Cluster);
        if !cl.centers().is_empty() {
            let inner = build_h4(g, cl.centers(), s)?;
            spanner.params.inner = Some(Box::new(inner.spanner.params.clone()));
            spanner.absorb(inner.spanner);
        }
        Ok(spanner)
    })?;
    let mut spanner = spanner;
    spanner.params.seed_used = seed_used;
    Ok(spanner)
}

/// Sourcewise spanner with additive stretch 4 for the given sources.
pub fn build_4sw(g: &Graph, sources: &[Vertex], seed: u64) -> Result<Spanner> {
    let (seed_used, build) = with_seed_retry(seed, |s| build_h4(g, sources, s))?;
    Ok(finish_sourcewise(build, seed, seed_used))
}

/// Sourcewise spanner with additive stretch 8 for the given sources.
///
/// Warns when the source set is larger than `ceil(n^(1/3) * ln n)`, past
/// which the sparsity advantage over the stretch-4 construction evaporates.
pub fn build_8sw(g: &Graph, sources: &[Vertex], seed: u64) -> Result<Spanner> {
    let n = g.n().max(2);
    let limit = ((n as f64).cbrt() * (n as f64).ln()).ceil() as usize;
    if sources.len() > limit {
        log::warn!(
            "{} sources exceed the useful bound {} for n={}; the stretch-8 size advantage is lost",
            sources.len(),
            limit,
            g.n()
        );
    }
    let (seed_used, build) = with_seed_retry(seed, |s| build_h8(g, sources, s))?;
    Ok(finish_sourcewise(build, seed, seed_used))
}

fn finish_sourcewise(build: SwBuild, seed: u64, seed_used: u64) -> Spanner {
    let mut spanner = build.spanner;
    spanner.params.seed = seed;
    spanner.params.seed_used = seed_used;
    spanner
}

/// Exact multi-source structure wrapped as a spanner record (`beta = 0`).
pub fn build_ftmbfs_spanner(g: &Graph, sources: &[Vertex], seed: u64) -> Result<Spanner> {
    assert!(!sources.is_empty(), "ftmbfs needs at least one source");
    let mut sources: Vec<Vertex> = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let (seed_used, parts) = with_seed_retry(seed, |s| {
        let w = PerturbedWeights::assign(g, s);
        build_ftmbfs_parts(g, &sources, &w)
    })?;
    let params = BuildParams {
        kind: Kind::Ftmbfs,
        seed,
        seed_used,
        delta: 0,
        sources: sources.clone(),
        centers: Vec::new(),
        inner: None,
    };
    let mut spanner = Spanner::shell(g.n(), 0, params);
    spanner.add_tagged(parts.tree_edges.iter().copied(), Tag::Tree);
    spanner.add_tagged(parts.new_last_edges.iter().copied(), Tag::Ftmbfs);
    Ok(spanner)
}

/// Dispatches on [`Kind`]. Sourcewise kinds require a nonempty source set.
pub fn build(g: &Graph, kind: Kind, sources: &[Vertex], seed: u64) -> Result<Spanner> {
    match kind {
        Kind::TwoAdd => build_2add(g, seed),
        Kind::SixAdd => build_6add(g, seed),
        Kind::FourSw => build_4sw(g, sources, seed),
        Kind::EightSw => build_8sw(g, sources, seed),
        Kind::Ftmbfs => build_ftmbfs_spanner(g, sources, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check_ftmbfs_exact, check_stretch};

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Graph::new(n, &pairs).unwrap()
    }

    #[test]
    fn integer_roots() {
        assert_eq!(ceil_n23(5), 3);
        assert_eq!(ceil_n23(8), 4);
        assert_eq!(ceil_n23(27), 9);
        assert_eq!(ceil_n23(28), 10);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(ceil_sqrt(17), 5);
        assert_eq!(ceil_cbrt(27), 3);
        assert_eq!(ceil_cbrt(28), 4);
    }

    #[test]
    fn two_add_on_c5_is_the_cycle() {
        let g = cycle(5);
        let sp = build_2add(&g, 1).unwrap();
        assert_eq!(sp.params.delta, 3);
        assert!(sp.params.centers.is_empty());
        assert_eq!(sp.edges, g.edge_set());
        assert!(check_stretch(&g, &sp.edges, 2, None).unwrap().passed());
    }

    #[test]
    fn two_add_on_a_tree_is_the_tree() {
        let g = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let sp = build_2add(&g, 1).unwrap();
        assert_eq!(sp.edges, g.edge_set());
    }

    #[test]
    fn six_add_on_k4_passes() {
        let g = complete(4);
        let sp = build_6add(&g, 1).unwrap();
        assert!(sp.edges.is_subset(&g.edge_set()));
        assert!(check_stretch(&g, &sp.edges, 6, None).unwrap().passed());
    }

    #[test]
    fn ftmbfs_spanner_is_exact() {
        let g = cycle(5);
        let sp = build_ftmbfs_spanner(&g, &[0], 3).unwrap();
        assert_eq!(sp.beta, 0);
        assert!(check_ftmbfs_exact(&g, &sp.edges, &[0]).unwrap().passed());
    }

    #[test]
    fn builds_are_reproducible() {
        let g = crate::gen::fixture_f1();
        for kind in [Kind::TwoAdd, Kind::SixAdd] {
            let a = build(&g, kind, &[], 9).unwrap();
            let b = build(&g, kind, &[], 9).unwrap();
            assert_eq!(a.edges, b.edges);
            assert_eq!(a.tag_counts(), b.tag_counts());
        }
        let a = build(&g, Kind::EightSw, &[0, 2], 9).unwrap();
        let b = build(&g, Kind::EightSw, &[0, 2], 9).unwrap();
        assert_eq!(a.edges, b.edges);
    }

    #[test]
    fn kind_roundtrip() {
        for kind in [
            Kind::TwoAdd,
            Kind::SixAdd,
            Kind::FourSw,
            Kind::EightSw,
            Kind::Ftmbfs,
        ] {
            assert_eq!(Kind::parse(kind.name()), Some(kind));
        }
        assert_eq!(Kind::parse("3add"), None);
    }
}
