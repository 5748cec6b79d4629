//! Exact fault-tolerant multi-source BFS structures.
//!
//! The structure is the union of one shortest-path tree per source plus the
//! last edge of every replacement path that ends differently from the
//! fault-free path. It preserves post-failure source distances exactly:
//! `dist(s, t, H \ {v}) = dist(s, t, G \ {v})` for every source `s`, every
//! target and every single failed vertex.

use crate::error::Result;
use crate::graph::{
    bfs_tree, edge, union_edges, EdgeSet, Graph, PerturbedWeights, SubgraphView, TreeIndex, Vertex,
};

/// The two kinds of edges the structure is made of, kept separate so callers
/// can tag provenance.
#[derive(Debug, Clone)]
pub struct FtmbfsParts {
    pub tree_edges: EdgeSet,
    pub new_last_edges: EdgeSet,
}

impl FtmbfsParts {
    pub fn union(&self, g: &Graph) -> Result<EdgeSet> {
        union_edges(g, [&self.tree_edges, &self.new_last_edges])
    }
}

/// Builds the structure for `sources`, keeping tree edges and collected last
/// edges separate.
pub fn build_ftmbfs_parts(
    g: &Graph,
    sources: &[Vertex],
    w: &PerturbedWeights,
) -> Result<FtmbfsParts> {
    assert!(!sources.is_empty(), "ftmbfs needs at least one source");
    let mut tree_edges = EdgeSet::new();
    let mut new_last_edges = EdgeSet::new();
    for &s in sources {
        let t0 = bfs_tree(s, &SubgraphView::full(g), w)?;
        tree_edges.extend(t0.edges());
        let idx = TreeIndex::new(&t0);
        for v in 0..g.n() {
            if v == s || !t0.reachable(v) {
                continue;
            }
            // only faults interior to some shortest path matter; v must have
            // strict descendants in the tree
            let has_descendant = (0..g.n()).any(|t| t != v && idx.is_ancestor(v, t));
            if !has_descendant {
                continue;
            }
            let r = bfs_tree(s, &SubgraphView::without_vertex(g, v), w)?;
            for t in 0..g.n() {
                if t == s || t == v || !idx.is_ancestor(v, t) {
                    continue;
                }
                let (Some(pr), Some(p0)) = (r.parent(t), t0.parent(t)) else {
                    continue;
                };
                if pr != p0 {
                    new_last_edges.insert(edge(pr, t));
                }
            }
        }
    }
    // tree edges subsume duplicates; keep the sets disjoint
    new_last_edges.retain(|e| !tree_edges.contains(e));
    Ok(FtmbfsParts {
        tree_edges,
        new_last_edges,
    })
}

/// Union form of [`build_ftmbfs_parts`].
pub fn build_ftmbfs(g: &Graph, sources: &[Vertex], w: &PerturbedWeights) -> Result<EdgeSet> {
    build_ftmbfs_parts(g, sources, w)?.union(g)
}
