//! Seeded graph generators, fixtures and source selection.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::graph::{bfs_hops, edge, Edge, Graph, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Gnp { n: usize, p: f64 },
    Regular { n: usize, d: usize },
    Grid { rows: usize, cols: usize },
}

/// Deterministic generation from `(model, seed)`.
///
/// `Gnp` resamples up to 100 times looking for a connected graph, then falls
/// back to the largest component (logged). `Regular` rejects infeasible
/// parameters and retries stub matchings until a simple graph comes out.
pub fn generate(model: &Model, seed: u64) -> Result<Graph> {
    match *model {
        Model::Gnp { n, p } => gnp(n, p, seed),
        Model::Regular { n, d } => regular(n, d, seed),
        Model::Grid { rows, cols } => grid(rows, cols),
    }
}

fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InfeasibleModel(format!("p={p} outside [0,1]")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut last = None;
    for _attempt in 0..100 {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    pairs.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &pairs)?;
        if n == 0 || bfs_hops(&g, &[0], &[]).iter().all(|d| d.is_some()) {
            return Ok(g);
        }
        last = Some(g);
    }
    let g = last.expect("at least one attempt ran");
    log::warn!(
        "gnp(n={n}, p={p}, seed={seed}) stayed disconnected after 100 attempts; \
         returning the largest component"
    );
    Ok(largest_component(&g))
}

fn largest_component(g: &Graph) -> Graph {
    let mut comp = vec![usize::MAX; g.n()];
    let mut sizes = Vec::new();
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let d = bfs_hops(g, &[s], &[]);
        let mut size = 0;
        for (v, dv) in d.iter().enumerate() {
            if dv.is_some() && comp[v] == usize::MAX {
                comp[v] = id;
                size += 1;
            }
        }
        sizes.push(size);
    }
    let best = (0..sizes.len()).max_by_key(|&i| (sizes[i], usize::MAX - i)).unwrap();
    // order-preserving relabel of the surviving vertices
    let keep: Vec<Vertex> = (0..g.n()).filter(|&v| comp[v] == best).collect();
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v] = i;
    }
    let pairs: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| comp[u] == best && comp[v] == best)
        .map(|&(u, v)| (new_id[u], new_id[v]))
        .collect();
    Graph::new(keep.len(), &pairs).expect("relabeled component is a valid graph")
}

fn regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return Err(Error::InfeasibleModel(format!("d={d} >= n={n}")));
    }
    if n * d % 2 != 0 {
        return Err(Error::InfeasibleModel(format!("n*d odd for n={n}, d={d}")));
    }
    if d == 0 {
        return Graph::new(n, &[]);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    'attempt: for _ in 0..1000 {
        let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert(edge(u, v)) {
                continue 'attempt;
            }
        }
        let pairs: Vec<Edge> = seen.into_iter().collect();
        return Graph::new(n, &pairs);
    }
    Err(Error::InfeasibleModel(format!(
        "could not realize a simple {d}-regular graph on {n} vertices"
    )))
}

fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InfeasibleModel("empty grid".into()));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, &pairs)
}

/// The `k` vertices of smallest degree, ties broken by id.
pub fn pick_sources(g: &Graph, k: usize) -> Result<Vec<Vertex>> {
    if k == 0 || k > g.n() {
        return Err(Error::Config(format!(
            "source count {k} out of range for n={}",
            g.n()
        )));
    }
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut picked: Vec<Vertex> = order.into_iter().take(k).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// Small workbench fixture: eight vertices, a high-degree hub, and two
/// close-together sources whose far faults produce both dependent and
/// independent detours at `Δ = 2`.
pub fn fixture_f1() -> Graph {
    Graph::new(
        8,
        &[
            (0, 1),
            (0, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (4, 5),
            (4, 6),
            (4, 7),
            (5, 7),
            (6, 7),
            (1, 5),
        ],
    )
    .expect("fixture is valid")
}
