//! Replacement paths: shortest `s`-`t` paths avoiding one failed vertex,
//! with their divergence point, detour segment and last edge.

use crate::error::Result;
use crate::graph::{
    bfs_tree, Edge, EdgeSet, Graph, Path, PerturbedWeights, SubgraphView, Vertex,
};

/// The shortest `s`-`t` path avoiding `fault`, classified against the
/// fault-free shortest path.
///
/// `fault = None` models the fault-free case so that verifiers can treat
/// every `(s, t, v)` triple uniformly. `path = None` means `t` became
/// unreachable, which is a valid outcome, not an error.
#[derive(Debug, Clone)]
pub struct ReplacementPath {
    pub s: Vertex,
    pub t: Vertex,
    pub fault: Option<Vertex>,
    pub path: Option<Path>,
    /// Last vertex of the common prefix with the fault-free shortest path;
    /// `None` when the paths coincide or `t` is unreachable.
    pub divergence: Option<Vertex>,
    divergence_idx: Option<usize>,
}

impl ReplacementPath {
    pub fn last_edge(&self) -> Option<Edge> {
        self.path.as_ref().and_then(|p| p.last_edge())
    }

    /// Detour segment: the path suffix from the divergence point to `t`.
    pub fn detour(&self) -> Option<&[Vertex]> {
        let i = self.divergence_idx?;
        Some(&self.path.as_ref()?.vertices[i..])
    }

    /// Detour segment without the divergence point itself.
    pub fn detour_plus(&self) -> Option<&[Vertex]> {
        let i = self.divergence_idx?;
        Some(&self.path.as_ref()?.vertices[i + 1..])
    }
}

/// Index of the last position where `path` still agrees with `baseline`.
pub(crate) fn common_prefix_end(path: &[Vertex], baseline: &[Vertex]) -> usize {
    let mut i = 0;
    while i + 1 < path.len() && i + 1 < baseline.len() && path[i + 1] == baseline[i + 1] {
        i += 1;
    }
    i
}

/// Computes `P_{s,t,v}` in the graph minus `fault` and classifies it against
/// the fault-free shortest path `(s,t)`.
pub fn replacement_path(
    g: &Graph,
    w: &PerturbedWeights,
    s: Vertex,
    t: Vertex,
    fault: Option<Vertex>,
) -> Result<ReplacementPath> {
    assert_ne!(s, t, "replacement path needs distinct endpoints");
    if let Some(v) = fault {
        assert!(v != s && v != t, "fault must not be an endpoint");
    }
    let base = bfs_tree(s, &SubgraphView::full(g), w)?.path_to(t);
    let path = match fault {
        None => base.clone(),
        Some(v) => bfs_tree(s, &SubgraphView::without_vertex(g, v), w)?.path_to(t),
    };
    Ok(classify(g, s, t, fault, base, path))
}

fn classify(
    _g: &Graph,
    s: Vertex,
    t: Vertex,
    fault: Option<Vertex>,
    base: Option<Path>,
    path: Option<Path>,
) -> ReplacementPath {
    let divergence_idx = match (&base, &path) {
        (Some(b), Some(p)) if b.vertices != p.vertices => {
            Some(common_prefix_end(&p.vertices, &b.vertices))
        }
        _ => None,
    };
    ReplacementPath {
        s,
        t,
        fault,
        divergence: divergence_idx.map(|i| path.as_ref().unwrap().vertices[i]),
        path,
        divergence_idx,
    }
}

/// True iff the path's last edge is not in `baseline`.
///
/// The baseline varies by use: the fault-free last edge for exact structures,
/// the current partial spanner for the builders.
pub fn is_new_ending(rp: &ReplacementPath, baseline: &EdgeSet) -> bool {
    let e = rp
        .last_edge()
        .expect("is_new_ending requires a reachable replacement path");
    !baseline.contains(&e)
}

/// One replacement path per internal vertex of the fault-free shortest
/// `s`-`t` path, in path order. Faults off the path provably reproduce the
/// original path, so they are not enumerated.
pub fn enumerate_faults(
    g: &Graph,
    w: &PerturbedWeights,
    s: Vertex,
    t: Vertex,
) -> Result<Vec<ReplacementPath>> {
    assert_ne!(s, t);
    let tree = bfs_tree(s, &SubgraphView::full(g), w)?;
    let base = tree.path_to(t);
    let Some(base) = base else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for &v in &base.vertices[1..base.vertices.len() - 1] {
        let path = bfs_tree(s, &SubgraphView::without_vertex(g, v), w)?.path_to(t);
        out.push(classify(g, s, t, Some(v), Some(base.clone()), path));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edge, PerturbedWeights};

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    #[test]
    fn c5_detour() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 9);
        let rp = replacement_path(&g, &w, 0, 2, Some(1)).unwrap();
        let p = rp.path.as_ref().unwrap();
        assert_eq!(p.vertices, vec![0, 4, 3, 2]);
        assert_eq!(rp.divergence, Some(0));
        assert_eq!(rp.last_edge(), Some((2, 3)));
        assert_eq!(rp.detour().unwrap(), &[0, 4, 3, 2]);
        assert_eq!(rp.detour_plus().unwrap(), &[4, 3, 2]);
    }

    #[test]
    fn fault_off_path_is_the_original() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 9);
        let rp = replacement_path(&g, &w, 0, 2, Some(3)).unwrap();
        assert_eq!(rp.path.as_ref().unwrap().vertices, vec![0, 1, 2]);
        assert_eq!(rp.divergence, None);
        assert!(rp.detour().is_none());
    }

    #[test]
    fn disconnecting_fault_is_unreachable() {
        // C5 minus edge (3,4): deleting 1 separates 0 from 2
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (0, 4)]).unwrap();
        let w = PerturbedWeights::assign(&g, 9);
        let rp = replacement_path(&g, &w, 0, 2, Some(1)).unwrap();
        assert!(rp.path.is_none());
        assert!(rp.last_edge().is_none());
        assert_eq!(rp.divergence, None);
    }

    #[test]
    fn new_ending_baselines() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 9);
        let tree0 = bfs_tree(0, &SubgraphView::full(&g), &w).unwrap();

        // fault-free path against a baseline that contains it
        let rp = replacement_path(&g, &w, 0, 2, None).unwrap();
        assert!(!is_new_ending(&rp, &tree0.edges()));

        // the C5 detour ends with (2,3), which the tree from 0 lacks
        let rp = replacement_path(&g, &w, 0, 2, Some(1)).unwrap();
        assert!(!tree0.edges().contains(&(2, 3)));
        assert!(is_new_ending(&rp, &tree0.edges()));

        // against the full edge set nothing is new-ending
        assert!(!is_new_ending(&rp, &g.edge_set()));
    }

    #[test]
    fn enumerate_faults_cases() {
        let g = cycle(5);
        let w = PerturbedWeights::assign(&g, 9);

        // adjacent endpoints: no internal vertices
        assert!(enumerate_faults(&g, &w, 0, 1).unwrap().is_empty());

        // 0->2 has exactly one internal vertex
        let rps = enumerate_faults(&g, &w, 0, 2).unwrap();
        assert_eq!(rps.len(), 1);
        assert_eq!(rps[0].fault, Some(1));

        // path graph: every internal deletion disconnects
        let p = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let wp = PerturbedWeights::assign(&p, 9);
        let rps = enumerate_faults(&p, &wp, 0, 3).unwrap();
        assert_eq!(rps.len(), 2);
        assert!(rps.iter().all(|rp| rp.path.is_none()));
    }

    #[test]
    fn divergence_is_where_paths_split() {
        // two disjoint 0-5 routes of different length; kill the short one
        let g = Graph::new(6, &[(0, 1), (1, 5), (0, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let w = PerturbedWeights::assign(&g, 4);
        let rp = replacement_path(&g, &w, 0, 5, Some(1)).unwrap();
        assert_eq!(rp.path.as_ref().unwrap().vertices, vec![0, 2, 3, 4, 5]);
        assert_eq!(rp.divergence, Some(0));
        let e = rp.last_edge().unwrap();
        assert_eq!(e, edge(4, 5));
    }
}
