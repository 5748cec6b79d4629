//! Heavy/light classification, double-cover center sets, and the
//! fault-tolerant clustering graph.
//!
//! Every vertex of degree at least `Δ` ("heavy") is assigned two distinct
//! adjacent centers, so that after any single vertex failure at least one of
//! its clusters survives intact. The clustering graph keeps two center edges
//! per heavy vertex plus all edges incident to light vertices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, Graph, Vertex};

#[derive(Debug, Clone)]
pub struct Clustering {
    delta: usize,
    heavy: Vec<Vertex>,
    heavy_mask: Vec<bool>,
    centers: Vec<Vertex>,
    z1: Vec<Option<Vertex>>,
    z2: Vec<Option<Vertex>>,
    clusters: BTreeMap<Vertex, Vec<Vertex>>,
    g_delta: EdgeSet,
}

impl Clustering {
    /// Effective degree threshold (requested Δ clamped to at least 2).
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn heavy(&self) -> &[Vertex] {
        &self.heavy
    }

    pub fn is_heavy(&self, v: Vertex) -> bool {
        self.heavy_mask[v]
    }

    pub fn centers(&self) -> &[Vertex] {
        &self.centers
    }

    /// First (smallest-id) center of a heavy vertex.
    pub fn z1(&self, v: Vertex) -> Option<Vertex> {
        self.z1[v]
    }

    /// Second center of a heavy vertex.
    pub fn z2(&self, v: Vertex) -> Option<Vertex> {
        self.z2[v]
    }

    /// Members of the cluster centered at `z`, sorted.
    pub fn cluster(&self, z: Vertex) -> Option<&[Vertex]> {
        self.clusters.get(&z).map(|m| m.as_slice())
    }

    pub fn clusters(&self) -> &BTreeMap<Vertex, Vec<Vertex>> {
        &self.clusters
    }

    /// Edges of the clustering graph.
    pub fn edges(&self) -> &EdgeSet {
        &self.g_delta
    }

    /// The center of `t` that survives the failure of `v`, with its cluster:
    /// `z1(t)` unless that is the failed vertex, in which case `z2(t)`.
    pub fn surviving_center(&self, t: Vertex, v: Vertex) -> Result<(Vertex, &[Vertex])> {
        debug_assert_ne!(t, v, "surviving_center with t == fault");
        if !self.is_heavy(t) {
            return Err(Error::Unclustered(t));
        }
        let z1 = self.z1[t].expect("heavy vertex has z1");
        let z = if z1 != v {
            z1
        } else {
            self.z2[t].expect("heavy vertex has z2")
        };
        Ok((z, self.clusters[&z].as_slice()))
    }
}

/// Vertices of degree at least `delta`.
pub fn heavy_vertices(g: &Graph, delta: usize) -> Vec<Vertex> {
    assert!(delta >= 1);
    (0..g.n()).filter(|&v| g.degree(v) >= delta).collect()
}

/// Deterministic greedy double cover: every heavy vertex ends up with at
/// least two neighbors in the returned set. Each round adds the vertex that
/// is adjacent to the most heavy vertices still missing hits, ties broken by
/// smallest id.
pub fn ft_center_set(g: &Graph, heavy: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut need = vec![0u8; g.n()];
    for &v in heavy {
        if g.degree(v) < 2 {
            return Err(Error::Uncoverable(v));
        }
        need[v] = 2;
    }
    let mut in_z = vec![false; g.n()];
    let mut centers = Vec::new();
    let mut remaining: usize = heavy.len() * 2;
    while remaining > 0 {
        let mut best: Option<(usize, Vertex)> = None;
        for z in 0..g.n() {
            if in_z[z] {
                continue;
            }
            let gain = g.neighbors(z).iter().filter(|&&u| need[u] > 0).count();
            if gain > 0 && best.map_or(true, |(bg, _)| gain > bg) {
                best = Some((gain, z));
            }
        }
        let (gain, z) = best.expect("heavy vertex with >=2 neighbors is always coverable");
        in_z[z] = true;
        centers.push(z);
        remaining -= gain;
        for &u in g.neighbors(z) {
            if need[u] > 0 {
                need[u] -= 1;
            }
        }
    }
    centers.sort_unstable();
    Ok(centers)
}

/// Builds the full clustering for `max(delta, 2)`.
///
/// Center assignment is deterministic: `z1(v)` is the smallest-id center
/// adjacent to `v` and `z2(v)` the second smallest.
pub fn build_clustering(g: &Graph, delta: usize) -> Result<Clustering> {
    let delta = delta.max(2);
    let heavy = heavy_vertices(g, delta);
    let mut heavy_mask = vec![false; g.n()];
    for &v in &heavy {
        heavy_mask[v] = true;
    }
    let centers = ft_center_set(g, &heavy)?;
    let mut center_mask = vec![false; g.n()];
    for &z in &centers {
        center_mask[z] = true;
    }

    let mut z1 = vec![None; g.n()];
    let mut z2 = vec![None; g.n()];
    let mut clusters: BTreeMap<Vertex, Vec<Vertex>> =
        centers.iter().map(|&z| (z, vec![z])).collect();
    let mut g_delta = EdgeSet::new();

    for &v in &heavy {
        // adjacency is sorted, so the first two center neighbors are the
        // two smallest ids
        let mut picks = g.neighbors(v).iter().copied().filter(|&u| center_mask[u]);
        let a = picks.next().expect("double cover guarantees a first center");
        let b = picks.next().expect("double cover guarantees a second center");
        z1[v] = Some(a);
        z2[v] = Some(b);
        for z in [a, b] {
            clusters.get_mut(&z).unwrap().push(v);
            g_delta.insert(edge(v, z));
        }
    }
    for members in clusters.values_mut() {
        members.sort_unstable();
        members.dedup();
    }
    for v in 0..g.n() {
        if !heavy_mask[v] {
            for &u in g.neighbors(v) {
                g_delta.insert(edge(v, u));
            }
        }
    }

    Ok(Clustering {
        delta,
        heavy,
        heavy_mask,
        centers,
        z1,
        z2,
        clusters,
        g_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn star(leaves: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &pairs).unwrap()
    }

    fn valid_double_cover(g: &Graph, heavy: &[Vertex], z: &[Vertex]) -> bool {
        heavy.iter().all(|&v| {
            g.neighbors(v).iter().filter(|u| z.contains(u)).count() >= 2
        })
    }

    #[test]
    fn heavy_classification() {
        assert_eq!(heavy_vertices(&complete(4), 3), vec![0, 1, 2, 3]);
        assert_eq!(heavy_vertices(&cycle(5), 3), Vec::<usize>::new());
        assert_eq!(heavy_vertices(&star(5), 3), vec![0]);
    }

    #[test]
    fn center_set_empty_for_no_heavy() {
        let g = cycle(5);
        assert_eq!(ft_center_set(&g, &[]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn center_set_k4_needs_three() {
        let g = complete(4);
        let heavy = heavy_vertices(&g, 3);
        let z = ft_center_set(&g, &heavy).unwrap();
        assert_eq!(z.len(), 3);
        assert!(valid_double_cover(&g, &heavy, &z));
        // brute force: no 2-subset double-covers K4, every 3-subset does
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(!valid_double_cover(&g, &heavy, &[a, b]));
            }
        }
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    assert!(valid_double_cover(&g, &heavy, &[a, b, c]));
                }
            }
        }
    }

    #[test]
    fn center_set_star_picks_two_leaves() {
        let g = star(5);
        let z = ft_center_set(&g, &[0]).unwrap();
        assert_eq!(z, vec![1, 2]);
    }

    #[test]
    fn uncoverable_is_reported() {
        // pretend the degree-1 vertex of a path is heavy
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(ft_center_set(&g, &[0]), Err(Error::Uncoverable(0))));
    }

    #[test]
    fn clustering_all_light_keeps_the_graph() {
        let g = cycle(5);
        let c = build_clustering(&g, 3).unwrap();
        assert!(c.heavy().is_empty());
        assert!(c.centers().is_empty());
        assert_eq!(c.edges(), &g.edge_set());
    }

    #[test]
    fn clustering_k4_counts() {
        let g = complete(4);
        let c = build_clustering(&g, 3).unwrap();
        assert_eq!(c.heavy().len(), 4);
        assert!(c.edges().len() <= 2 * 4);
        // every edge missing from the clustering graph has a heavy endpoint
        for &(u, v) in g.edges() {
            if !c.edges().contains(&(u, v)) {
                assert!(c.is_heavy(u) || c.is_heavy(v));
            }
        }
        // cluster invariant: C_z = {z} plus the heavy vertices that chose z
        for (&z, members) in c.clusters() {
            for &m in members {
                assert!(m == z || c.z1(m) == Some(z) || c.z2(m) == Some(z));
            }
        }
    }

    #[test]
    fn clustering_star() {
        let g = star(5);
        let c = build_clustering(&g, 3).unwrap();
        assert_eq!(c.heavy(), &[0]);
        // center edges of the hub plus every light leaf edge = all star edges
        assert_eq!(c.edges(), &g.edge_set());
    }

    #[test]
    fn surviving_center_rule() {
        let g = complete(4);
        let c = build_clustering(&g, 3).unwrap();
        let t = 3;
        let z1 = c.z1(t).unwrap();
        let z2 = c.z2(t).unwrap();
        let other = (0..4).find(|&v| v != t && v != z1 && v != z2).unwrap();
        assert_eq!(c.surviving_center(t, other).unwrap().0, z1);
        assert_eq!(c.surviving_center(t, z1).unwrap().0, z2);
        assert_eq!(c.surviving_center(t, z2).unwrap().0, z1);
    }

    #[test]
    fn surviving_center_rejects_light() {
        let g = cycle(5);
        let c = build_clustering(&g, 3).unwrap();
        assert!(matches!(c.surviving_center(0, 1), Err(Error::Unclustered(0))));
    }

    #[test]
    fn cluster_diameter_is_two_in_g_delta() {
        let g = complete(6);
        let c = build_clustering(&g, 3).unwrap();
        let gd = Graph::from_edge_set(g.n(), c.edges()).unwrap();
        for (&z, members) in c.clusters() {
            for &u in members {
                let d = crate::graph::bfs_hops(&gd, &[u], &[]);
                for &v in members {
                    assert!(d[v].unwrap() <= 2, "cluster {z}: {u}->{v} too far");
                }
            }
        }
    }

    #[test]
    fn size_bound_holds() {
        for (g, delta) in [(complete(7), 3), (star(6), 2), (cycle(9), 2)] {
            let c = build_clustering(&g, delta).unwrap();
            let light_deg: usize = (0..g.n())
                .filter(|&v| !c.is_heavy(v))
                .map(|v| g.degree(v))
                .sum();
            assert!(c.edges().len() <= 2 * c.heavy().len() + light_deg);
            assert!(c.edges().len() <= c.delta() * g.n() + 2 * g.n());
        }
    }
}
