//! Graph substrate: immutable simple graphs, tie-breaking edge perturbations,
//! unique shortest paths, shortest-path trees, and LCA queries.
//!
//! Paths are ordered lexicographically by `(hop count, perturbation sum)`.
//! With distinct per-edge perturbations the minimizer is unique with high
//! probability, in the full graph and in every vertex- or edge-deleted
//! subgraph, so "the shortest path" is well defined everywhere. All reported
//! distances are hop counts; perturbations only select the path.

use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Undirected edge, always normalized so that the smaller endpoint comes first.
pub type Edge = (Vertex, Vertex);

pub type EdgeSet = BTreeSet<Edge>;

/// Normalizes an endpoint pair into an [`Edge`].
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// An immutable simple undirected unweighted graph with vertex ids `0..n`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// (in either orientation) and out-of-range endpoints.
    pub fn new(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in pairs {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if !seen.insert(edge(u, v)) {
                let (a, b) = edge(u, v);
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(Graph {
            n,
            adj,
            edges,
            index,
        })
    }

    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Self> {
        let pairs: Vec<Edge> = edges.iter().copied().collect();
        Graph::new(n, &pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.index.contains_key(&edge(u, v))
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index.get(&edge(u, v)).copied()
    }

    /// All edges, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }
}

/// Per-edge tie-breaking perturbations.
///
/// Each edge carries a distinct positive integer drawn uniformly from a
/// 62-bit range, so a sum over any simple path fits comfortably in 128 bits.
/// Regeneration from the same `(graph, seed)` is bit-identical.
#[derive(Debug, Clone)]
pub struct PerturbedWeights {
    seed: u64,
    values: Vec<u64>,
}

const PERT_RANGE: u64 = 1 << 62;

impl PerturbedWeights {
    /// Draws one distinct perturbation per edge, deterministically from `seed`.
    pub fn assign(g: &Graph, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut used = HashSet::with_capacity(g.m());
        let mut values = Vec::with_capacity(g.m());
        for _ in 0..g.m() {
            loop {
                let r = rng.gen_range(1..PERT_RANGE);
                if used.insert(r) {
                    values.push(r);
                    break;
                }
            }
        }
        PerturbedWeights { seed, values }
    }

    /// Builds from explicit values; mainly for tests that need crafted sums.
    /// Values must be positive, distinct, and one per edge of `g`.
    pub fn from_values(g: &Graph, values: Vec<u64>) -> Result<Self> {
        if values.len() != g.m() {
            return Err(Error::InvalidGraph(format!(
                "expected {} perturbations, got {}",
                g.m(),
                values.len()
            )));
        }
        let mut seen = HashSet::new();
        for &r in &values {
            if r == 0 || !seen.insert(r) {
                return Err(Error::InvalidGraph(
                    "perturbations must be positive and pairwise distinct".into(),
                ));
            }
        }
        Ok(PerturbedWeights { seed: 0, values })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Perturbation of edge `(u,v)`. Panics if the edge is not in `g`.
    pub fn weight(&self, g: &Graph, u: Vertex, v: Vertex) -> u64 {
        let id = g
            .edge_id(u, v)
            .unwrap_or_else(|| panic!("edge ({u},{v}) not in graph"));
        self.values[id]
    }
}

/// A non-materialized view of a graph with some vertices and edges deleted.
///
/// Queries never report an edge incident to a deleted vertex.
#[derive(Debug, Clone)]
pub struct SubgraphView<'g> {
    base: &'g Graph,
    deleted_vertices: HashSet<Vertex>,
    deleted_edges: HashSet<Edge>,
}

impl<'g> SubgraphView<'g> {
    pub fn full(base: &'g Graph) -> Self {
        SubgraphView {
            base,
            deleted_vertices: HashSet::new(),
            deleted_edges: HashSet::new(),
        }
    }

    pub fn without_vertex(base: &'g Graph, v: Vertex) -> Self {
        let mut view = SubgraphView::full(base);
        view.deleted_vertices.insert(v);
        view
    }

    pub fn without_vertices(base: &'g Graph, vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut view = SubgraphView::full(base);
        view.deleted_vertices.extend(vs);
        view
    }

    pub fn delete_vertex(mut self, v: Vertex) -> Self {
        self.deleted_vertices.insert(v);
        self
    }

    pub fn delete_edge(mut self, u: Vertex, v: Vertex) -> Self {
        self.deleted_edges.insert(edge(u, v));
        self
    }

    pub fn base(&self) -> &Graph {
        self.base
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.base.n() && !self.deleted_vertices.contains(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u)
            && self.contains(v)
            && self.base.has_edge(u, v)
            && !self.deleted_edges.contains(&edge(u, v))
    }

    pub fn neighbors<'a>(&'a self, u: Vertex) -> impl Iterator<Item = Vertex> + 'a {
        self.base
            .neighbors(u)
            .iter()
            .copied()
            .filter(move |&v| !self.deleted_vertices.contains(&v))
            .filter(move |&v| self.deleted_edges.is_empty() || !self.deleted_edges.contains(&edge(u, v)))
    }
}

/// A simple path together with its perturbation sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    pub pert_sum: u128,
}

impl Path {
    pub fn hop_len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn last_edge(&self) -> Option<Edge> {
        let k = self.vertices.len();
        if k < 2 {
            None
        } else {
            Some(edge(self.vertices[k - 2], self.vertices[k - 1]))
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| edge(w[0], w[1]))
    }
}

/// Shortest-path tree under `(hops, perturbation sum)` from a single root.
///
/// For every reachable `t` the tree path from the root equals the unique
/// shortest path, so the tree doubles as a compact all-targets path oracle.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    dist: Vec<Option<u32>>,
    sum: Vec<u128>,
}

impl ShortestPathTree {
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    /// Hop distance from the root, `None` if unreachable.
    pub fn depth(&self, v: Vertex) -> Option<u32> {
        self.dist[v]
    }

    pub fn reachable(&self, v: Vertex) -> bool {
        self.dist[v].is_some()
    }

    pub fn pert_sum(&self, v: Vertex) -> u128 {
        self.sum[v]
    }

    /// Root-to-`t` path vertices, or `None` if `t` is unreachable.
    pub fn path_vertices(&self, t: Vertex) -> Option<Vec<Vertex>> {
        self.dist[t]?;
        let mut out = Vec::with_capacity(self.dist[t].unwrap() as usize + 1);
        let mut cur = t;
        out.push(cur);
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Some(out)
    }

    pub fn path_to(&self, t: Vertex) -> Option<Path> {
        let vertices = self.path_vertices(t)?;
        Some(Path {
            vertices,
            pert_sum: self.sum[t],
        })
    }

    /// Last edge of the root-to-`t` path; `None` if unreachable or `t` is the root.
    pub fn last_edge_to(&self, t: Vertex) -> Option<Edge> {
        self.parent[t].map(|p| edge(p, t))
    }

    /// All tree edges as a set.
    pub fn edges(&self) -> EdgeSet {
        (0..self.n())
            .filter_map(|v| self.parent[v].map(|p| edge(p, v)))
            .collect()
    }
}

/// Computes the shortest-path tree rooted at `s` in `view`.
///
/// Dijkstra on `(hops, perturbation sum)` keys. If two distinct equal-weight
/// paths to the same vertex are observed, the perturbation failed to break a
/// tie and [`Error::PerturbationTie`] is returned; callers retry with seed+1.
pub fn bfs_tree(s: Vertex, view: &SubgraphView, w: &PerturbedWeights) -> Result<ShortestPathTree> {
    assert!(view.contains(s), "root {s} is deleted from the view");
    let n = view.base().n();
    let mut dist: Vec<Option<(u32, u128)>> = vec![None; n];
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some((0, 0));
    heap.push(std::cmp::Reverse((0u32, 0u128, s)));
    while let Some(std::cmp::Reverse((h, sum, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for nb in view.neighbors(u) {
            let cand = (h + 1, sum + w.weight(view.base(), u, nb) as u128);
            match dist[nb] {
                None => {
                    dist[nb] = Some(cand);
                    parent[nb] = Some(u);
                    heap.push(std::cmp::Reverse((cand.0, cand.1, nb)));
                }
                Some(best) if cand < best => {
                    dist[nb] = Some(cand);
                    parent[nb] = Some(u);
                    heap.push(std::cmp::Reverse((cand.0, cand.1, nb)));
                }
                Some(best) if cand == best && parent[nb] != Some(u) => {
                    return Err(Error::PerturbationTie);
                }
                Some(_) => {}
            }
        }
    }
    Ok(ShortestPathTree {
        root: s,
        parent,
        dist: dist.iter().map(|d| d.map(|(h, _)| h)).collect(),
        sum: dist.iter().map(|d| d.map_or(0, |(_, x)| x)).collect(),
    })
}

/// The unique shortest `s`-`t` path in `view`, or `None` if unreachable.
pub fn shortest_path(
    s: Vertex,
    t: Vertex,
    view: &SubgraphView,
    w: &PerturbedWeights,
) -> Result<Option<Path>> {
    assert!(view.contains(t), "target {t} is deleted from the view");
    let tree = bfs_tree(s, view, w)?;
    Ok(tree.path_to(t))
}

/// Ancestor and LCA queries over a [`ShortestPathTree`], via Euler intervals
/// and binary lifting.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    tin: Vec<u32>,
    tout: Vec<u32>,
    depth: Vec<u32>,
    up: Vec<Vec<Vertex>>,
    reach: Vec<bool>,
}

impl TreeIndex {
    pub fn new(tree: &ShortestPathTree) -> Self {
        let n = tree.n();
        let mut children = vec![Vec::new(); n];
        let mut reach = vec![false; n];
        let mut max_depth = 0u32;
        for v in 0..n {
            if let Some(d) = tree.depth(v) {
                reach[v] = true;
                max_depth = max_depth.max(d);
                if let Some(p) = tree.parent(v) {
                    children[p].push(v);
                }
            }
        }
        // children lists come out sorted because v runs in increasing order
        let mut tin = vec![0u32; n];
        let mut tout = vec![0u32; n];
        let mut timer = 0u32;
        let mut stack = vec![(tree.root(), false)];
        while let Some((v, leaving)) = stack.pop() {
            if leaving {
                tout[v] = timer;
                continue;
            }
            tin[v] = timer;
            timer += 1;
            stack.push((v, true));
            for &c in children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        let levels = (32 - u32::leading_zeros(max_depth.max(1))) as usize;
        let mut up = Vec::with_capacity(levels + 1);
        let base: Vec<Vertex> = (0..n)
            .map(|v| tree.parent(v).unwrap_or(v))
            .collect();
        up.push(base);
        for k in 1..=levels {
            let prev = &up[k - 1];
            let next: Vec<Vertex> = (0..n).map(|v| prev[prev[v]]).collect();
            up.push(next);
        }
        let depth = (0..n).map(|v| tree.depth(v).unwrap_or(0)).collect();
        TreeIndex {
            tin,
            tout,
            depth,
            up,
            reach,
        }
    }

    pub fn reachable(&self, v: Vertex) -> bool {
        self.reach[v]
    }

    /// True iff `a` lies on the tree path from the root to `d` (inclusive).
    pub fn is_ancestor(&self, a: Vertex, d: Vertex) -> bool {
        self.reach[a] && self.reach[d] && self.tin[a] <= self.tin[d] && self.tout[d] <= self.tout[a]
    }

    pub fn depth(&self, v: Vertex) -> u32 {
        self.depth[v]
    }

    /// Ancestor of `v` exactly `k` levels up.
    fn lift(&self, mut v: Vertex, mut k: u32) -> Vertex {
        let mut level = 0;
        while k > 0 {
            if k & 1 == 1 {
                v = self.up[level][v];
            }
            k >>= 1;
            level += 1;
        }
        v
    }

    pub fn lca(&self, a: Vertex, b: Vertex) -> Result<Vertex> {
        if !self.reach[a] {
            return Err(Error::VertexOutsideTree(a));
        }
        if !self.reach[b] {
            return Err(Error::VertexOutsideTree(b));
        }
        if self.is_ancestor(a, b) {
            return Ok(a);
        }
        if self.is_ancestor(b, a) {
            return Ok(b);
        }
        let (mut x, mut y) = if self.depth[a] >= self.depth[b] {
            (a, b)
        } else {
            (b, a)
        };
        x = self.lift(x, self.depth[x] - self.depth[y]);
        debug_assert_ne!(x, y, "equal-after-lift is the ancestor case");
        for level in (0..self.up.len()).rev() {
            if self.up[level][x] != self.up[level][y] {
                x = self.up[level][x];
                y = self.up[level][y];
            }
        }
        Ok(self.up[0][x])
    }

    /// Deepest common ancestor of a nonempty vertex set.
    pub fn lca_of_set(&self, vs: impl IntoIterator<Item = Vertex>) -> Result<Vertex> {
        let mut it = vs.into_iter();
        let first = it.next().expect("lca_of_set on empty set");
        if !self.reach[first] {
            return Err(Error::VertexOutsideTree(first));
        }
        let mut acc = first;
        for v in it {
            acc = self.lca(acc, v)?;
        }
        Ok(acc)
    }
}

/// Deepest vertex that is an ancestor (inclusive) of every member of `vs`.
pub fn lca_of_set(tree: &ShortestPathTree, vs: &[Vertex]) -> Result<Vertex> {
    assert!(!vs.is_empty(), "lca_of_set on empty set");
    let idx = TreeIndex::new(tree);
    idx.lca_of_set(vs.iter().copied())
}

/// Duplicate-free union of edge sets; every edge must belong to `host`.
pub fn union_edges<'a>(
    host: &Graph,
    parts: impl IntoIterator<Item = &'a EdgeSet>,
) -> Result<EdgeSet> {
    let mut out = EdgeSet::new();
    for part in parts {
        for &(u, v) in part {
            if !host.has_edge(u, v) {
                return Err(Error::EdgeNotInGraph(u, v));
            }
            out.insert((u, v));
        }
    }
    Ok(out)
}

/// Multi-source BFS hop distances over `g`, skipping vertices where
/// `deleted[v]` is true. Pass an empty slice to delete nothing.
pub fn bfs_hops(g: &Graph, sources: &[Vertex], deleted: &[bool]) -> Vec<Option<u32>> {
    debug_assert!(deleted.is_empty() || deleted.len() == g.n());
    let is_deleted = |v: Vertex| !deleted.is_empty() && deleted[v];
    let mut dist = vec![None; g.n()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if !is_deleted(s) && dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if !is_deleted(v) && dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cycle(n: usize) -> Graph {
        let pairs: Vec<Edge> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Graph::new(n, &pairs).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        let pairs: Vec<Edge> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &pairs).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Graph::new(3, &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn perturbations_distinct_and_reproducible() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 7);
        let mut seen = HashSet::new();
        for &(u, v) in g.edges() {
            assert!(seen.insert(w.weight(&g, u, v)));
        }
        assert_eq!(seen.len(), 5);

        let g4 = complete(4);
        let w1 = PerturbedWeights::assign(&g4, 1);
        let w2 = PerturbedWeights::assign(&g4, 1);
        for &(u, v) in g4.edges() {
            assert_eq!(w1.weight(&g4, u, v), w2.weight(&g4, u, v));
        }
    }

    #[test]
    fn empty_graph_has_empty_weights() {
        let g = Graph::new(3, &[]).unwrap();
        let w = PerturbedWeights::assign(&g, 99);
        assert_eq!(w.values.len(), 0);
    }

    #[test]
    fn c5_shortest_paths() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 3);
        let p = shortest_path(0, 2, &SubgraphView::full(&g), &w)
            .unwrap()
            .unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);

        let view = SubgraphView::without_vertex(&g, 1);
        let p = shortest_path(0, 2, &view, &w).unwrap().unwrap();
        assert_eq!(p.vertices, vec![0, 4, 3, 2]);
    }

    #[test]
    fn c4_tie_broken_by_smaller_sum() {
        // Even cycle: two 2-hop paths 0-1-2 and 0-3-2; the smaller
        // perturbation sum must win.
        let g = cycle(4);
        let w = PerturbedWeights::assign(&g, 1);
        let via1 = w.weight(&g, 0, 1) as u128 + w.weight(&g, 1, 2) as u128;
        let via3 = w.weight(&g, 0, 3) as u128 + w.weight(&g, 2, 3) as u128;
        assert_ne!(via1, via3);
        let p = shortest_path(0, 2, &SubgraphView::full(&g), &w)
            .unwrap()
            .unwrap();
        let expect = if via1 < via3 {
            vec![0, 1, 2]
        } else {
            vec![0, 3, 2]
        };
        assert_eq!(p.vertices, expect);
        assert_eq!(p.pert_sum, via1.min(via3));
    }

    #[test]
    fn crafted_tie_is_detected() {
        // C4 with sums 1+4 = 2+3 on the two 0-2 routes.
        let g = cycle(4);
        // edges sorted: (0,1) (0,3) (1,2) (2,3)
        let w = PerturbedWeights::from_values(&g, vec![1, 2, 4, 3]).unwrap();
        let err = shortest_path(0, 2, &SubgraphView::full(&g), &w);
        assert!(matches!(err, Err(Error::PerturbationTie)));
    }

    #[test]
    fn unreachable_is_not_an_error() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let w = PerturbedWeights::assign(&g, 5);
        let p = shortest_path(0, 3, &SubgraphView::full(&g), &w).unwrap();
        assert!(p.is_none());
    }

    #[test]
    fn c5_tree_misses_the_far_edge() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 11);
        let t = bfs_tree(0, &SubgraphView::full(&g), &w).unwrap();
        let edges = t.edges();
        assert_eq!(edges.len(), 4);
        assert!(!edges.contains(&(2, 3)));
        assert_eq!(t.depth(2), Some(2));
        assert_eq!(t.depth(3), Some(2));
    }

    #[test]
    fn trivial_trees() {
        let g1 = Graph::new(1, &[]).unwrap();
        let w1 = PerturbedWeights::assign(&g1, 0);
        let t = bfs_tree(0, &SubgraphView::full(&g1), &w1).unwrap();
        assert!(t.edges().is_empty());
        assert_eq!(t.depth(0), Some(0));

        let s = star(4);
        let ws = PerturbedWeights::assign(&s, 0);
        let t = bfs_tree(0, &SubgraphView::full(&s), &ws).unwrap();
        assert_eq!(t.edges(), s.edge_set());
    }

    #[test]
    fn tree_paths_match_shortest_paths() {
        let g = complete(6);
        let w = PerturbedWeights::assign(&g, 42);
        let view = SubgraphView::full(&g);
        let tree = bfs_tree(0, &view, &w).unwrap();
        for t in 1..6 {
            let direct = shortest_path(0, t, &view, &w).unwrap().unwrap();
            assert_eq!(tree.path_to(t).unwrap(), direct);
        }
    }

    #[test]
    fn prefix_property_holds() {
        let g = cycle(9);
        let w = PerturbedWeights::assign(&g, 17);
        let view = SubgraphView::full(&g);
        for t in 1..9 {
            let p = shortest_path(0, t, &view, &w).unwrap().unwrap();
            for (i, &u) in p.vertices.iter().enumerate() {
                let pre = shortest_path(0, u, &view, &w).unwrap().unwrap();
                assert_eq!(pre.vertices, p.vertices[..=i]);
            }
        }
    }

    #[test]
    fn lca_basics() {
        // path 0-1-2-3 rooted at 0
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = PerturbedWeights::assign(&g, 2);
        let tree = bfs_tree(0, &SubgraphView::full(&g), &w).unwrap();
        assert_eq!(lca_of_set(&tree, &[2]).unwrap(), 2);
        assert_eq!(lca_of_set(&tree, &[0, 3]).unwrap(), 0);
        assert_eq!(lca_of_set(&tree, &[2, 3]).unwrap(), 2);

        let idx = TreeIndex::new(&tree);
        assert!(idx.is_ancestor(1, 3));
        assert!(!idx.is_ancestor(3, 1));
        assert!(idx.is_ancestor(2, 2));
    }

    #[test]
    fn lca_rejects_unreachable() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let w = PerturbedWeights::assign(&g, 2);
        let tree = bfs_tree(0, &SubgraphView::full(&g), &w).unwrap();
        assert!(matches!(
            lca_of_set(&tree, &[1, 2]),
            Err(Error::VertexOutsideTree(2))
        ));
    }

    #[test]
    fn union_edges_dedups_and_validates() {
        let g = cycle(5);
        let a: EdgeSet = [(0, 1), (1, 2)].into_iter().collect();
        let b: EdgeSet = [(1, 2), (2, 3), (3, 4)].into_iter().collect();
        let u = union_edges(&g, [&a, &b]).unwrap();
        assert_eq!(u.len(), 4);
        assert_eq!(union_edges(&g, [&a, &a]).unwrap(), a);

        let foreign: EdgeSet = [(0, 2)].into_iter().collect();
        assert!(matches!(
            union_edges(&g, [&foreign]),
            Err(Error::EdgeNotInGraph(0, 2))
        ));
    }

    #[test]
    fn bfs_hops_multi_source() {
        let g = cycle(6);
        let d = bfs_hops(&g, &[0], &[]);
        assert_eq!(d[3], Some(3));
        let d = bfs_hops(&g, &[0, 3], &[]);
        assert_eq!(d[1], Some(1));
        assert_eq!(d[2], Some(1));
        let mut deleted = vec![false; 6];
        deleted[1] = true;
        let d = bfs_hops(&g, &[0], &deleted);
        assert_eq!(d[2], Some(4));
        assert_eq!(d[1], None);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        /// Hop-optimality: the perturbed shortest path has exactly the
        /// unweighted BFS hop count, in the full view and minus one vertex.
        #[test]
        fn hop_optimality(n in 2usize..10, seed in 0u64..500, density in 0u64..3) {
            let mut pairs = Vec::new();
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            for u in 0..n {
                for v in u + 1..n {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if state >> 33 & 3 <= density {
                        pairs.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &pairs).unwrap();
            let w = PerturbedWeights::assign(&g, seed);
            let view = SubgraphView::full(&g);
            let hops = bfs_hops(&g, &[0], &[]);
            for t in 1..n {
                let p = shortest_path(0, t, &view, &w).unwrap();
                proptest::prop_assert_eq!(p.as_ref().map(|p| p.hop_len() as u32), hops[t]);
            }
            if n > 2 {
                let v = n - 1;
                let view = SubgraphView::without_vertex(&g, v);
                let mut deleted = vec![false; n];
                deleted[v] = true;
                let hops = bfs_hops(&g, &[0], &deleted);
                for t in 1..n - 1 {
                    let p = shortest_path(0, t, &view, &w).unwrap();
                    proptest::prop_assert_eq!(p.as_ref().map(|p| p.hop_len() as u32), hops[t]);
                }
            }
        }
    }
}
