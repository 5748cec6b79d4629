//! Sourcewise additive fault-tolerant spanners.
//!
//! Two builders over a shared pipeline. Both guarantee, for every source
//! `s`, target `t` and failed vertex `v`, that the spanner distance in
//! `H \ {v}` exceeds the graph distance in `G \ {v}` by at most 4
//! (`build_h4`) or at most 8 (`build_h8`).
//!
//! Pipeline: cluster the graph with `Δ = |S|`; root a shortest-path tree at
//! every source; protect faults at a target's primary center and at the LCA
//! of its primary cluster by collecting replacement-path last edges; classify
//! the remaining *far* faults (above the LCA) into dependent paths, whose
//! last edges are collected directly, and independent paths, which enter a
//! sequential path-buying pass. `build_h4` buys whole paths when they
//! strictly improve one pair of cluster distances; `build_h8` buys only a
//! path suffix and charges its cost against the number of cluster pairs it
//! improves.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cluster::{build_clustering, Clustering};
use crate::error::{Error, Result};
use crate::graph::{
    bfs_tree, edge, Edge, EdgeSet, Graph, PerturbedWeights, ShortestPathTree, SubgraphView,
    TreeIndex, Vertex,
};
use crate::spanner::{BuildParams, BuyRecord, Kind, Spanner, Tag};

/// Split of a shortest path `s -> t` around the LCA of `t`'s primary cluster.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub s: Vertex,
    pub t: Vertex,
    /// The LCA of the primary cluster of `t` in the tree rooted at `s`.
    pub ell: Vertex,
    /// Vertices strictly above `ell` on the path (closer to `s`).
    pub far: Vec<Vertex>,
    /// Vertices strictly below `ell` on the path (closer to `t`).
    pub near: Vec<Vertex>,
}

/// Segments the shortest path from `s` to a heavy `t`. Returns `None` when
/// `t` is unreachable from `s` (the pair is skipped).
pub fn segment(
    tree: &ShortestPathTree,
    idx: &TreeIndex,
    cl: &Clustering,
    s: Vertex,
    t: Vertex,
) -> Result<Option<Segmentation>> {
    if !cl.is_heavy(t) {
        return Err(Error::Unclustered(t));
    }
    if !tree.reachable(t) {
        return Ok(None);
    }
    let z1 = cl.z1(t).expect("heavy vertex has a primary center");
    let members = cl.cluster(z1).expect("primary cluster exists");
    // restrict the fold to members reachable from s; t itself always is
    let ell = idx.lca_of_set(members.iter().copied().filter(|&m| idx.reachable(m)))?;
    let path = tree.path_vertices(t).expect("t is reachable");
    let pos = path
        .iter()
        .position(|&u| u == ell)
        .expect("the cluster LCA lies on the path to t");
    Ok(Some(Segmentation {
        s,
        t,
        ell,
        far: path[..pos].to_vec(),
        near: path[pos + 1..].to_vec(),
    }))
}

/// Vertices forbidden for a cluster: everything on the tree paths from each
/// source down to the cluster's LCA, minus the cluster members themselves.
pub fn forbidden_vertices(
    trees: &[ShortestPathTree],
    idxs: &[TreeIndex],
    members: &[Vertex],
) -> BTreeSet<Vertex> {
    let mut out = BTreeSet::new();
    for (tree, idx) in trees.iter().zip(idxs) {
        let reachable: Vec<Vertex> = members
            .iter()
            .copied()
            .filter(|&m| idx.reachable(m))
            .collect();
        if reachable.is_empty() {
            continue;
        }
        let ell = idx
            .lca_of_set(reachable)
            .expect("reachable members stay in the tree");
        let mut cur = ell;
        out.insert(cur);
        while let Some(p) = tree.parent(cur) {
            out.insert(p);
            cur = p;
        }
    }
    for m in members {
        out.remove(m);
    }
    out
}

/// Hop distance between the surviving parts of two clusters inside the given
/// edge set, with `forbidden` vertices removed. `None` means no surviving
/// pair is connected.
pub fn cluster_distance(
    n: usize,
    edges: &EdgeSet,
    ca: &[Vertex],
    cb: &[Vertex],
    forbidden: &BTreeSet<Vertex>,
) -> Option<u32> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut mask = vec![false; n];
    for &v in forbidden {
        mask[v] = true;
    }
    cluster_distance_adj(&adj, ca, cb, &mask)
}

fn cluster_distance_adj(
    adj: &[Vec<Vertex>],
    ca: &[Vertex],
    cb: &[Vertex],
    forbidden: &[bool],
) -> Option<u32> {
    let n = adj.len();
    let mut target = vec![false; n];
    let mut any_target = false;
    for &b in cb {
        if !forbidden[b] {
            target[b] = true;
            any_target = true;
        }
    }
    if !any_target {
        return None;
    }
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &a in ca {
        if !forbidden[a] && dist[a].is_none() {
            if target[a] {
                return Some(0);
            }
            dist[a] = Some(0);
            queue.push_back(a);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &x in &adj[u] {
            if !forbidden[x] && dist[x].is_none() {
                if target[x] {
                    return Some(d + 1);
                }
                dist[x] = Some(d + 1);
                queue.push_back(x);
            }
        }
    }
    None
}

/// An independent far-fault replacement path queued for the buying pass.
#[derive(Debug, Clone)]
struct FarCandidate {
    si: usize,
    s: Vertex,
    t: Vertex,
    v: Vertex,
    path: Vec<Vertex>,
    div_idx: usize,
}

/// The growing spanner during the buying pass.
struct PartialSpanner {
    adj: Vec<Vec<Vertex>>,
    edges: EdgeSet,
}

impl PartialSpanner {
    fn new(n: usize, init: &EdgeSet) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in init {
            adj[u].push(v);
            adj[v].push(u);
        }
        PartialSpanner {
            adj,
            edges: init.clone(),
        }
    }

    fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    fn insert(&mut self, e: Edge) -> bool {
        if self.edges.insert(e) {
            self.adj[e.0].push(e.1);
            self.adj[e.1].push(e.0);
            true
        } else {
            false
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BuyVariant {
    /// Buy the whole path when it strictly improves one cluster-pair distance.
    WholePath,
    /// Buy a suffix when its cost is at most four times the number of
    /// cluster-pair distances it improves.
    SuffixByValue,
}

pub struct SwBuild {
    pub spanner: Spanner,
    pub clustering: Clustering,
}

/// Sourcewise spanner with additive stretch 4.
pub fn build_h4(g: &Graph, sources: &[Vertex], seed: u64) -> Result<SwBuild> {
    build(g, sources, seed, BuyVariant::WholePath)
}

/// Sourcewise spanner with additive stretch 8 (sparser on paper-scale
/// instances, at the expense of stretch).
pub fn build_h8(g: &Graph, sources: &[Vertex], seed: u64) -> Result<SwBuild> {
    build(g, sources, seed, BuyVariant::SuffixByValue)
}

fn build(g: &Graph, sources_in: &[Vertex], seed: u64, variant: BuyVariant) -> Result<SwBuild> {
    assert!(!sources_in.is_empty(), "need at least one source");
    let mut sources: Vec<Vertex> = sources_in.to_vec();
    sources.sort_unstable();
    sources.dedup();
    for &s in &sources {
        assert!(s < g.n(), "source {s} out of range");
    }

    let w = PerturbedWeights::assign(g, seed);
    let cl = build_clustering(g, sources.len())?;
    let full = SubgraphView::full(g);
    let trees: Vec<ShortestPathTree> = sources
        .iter()
        .map(|&s| bfs_tree(s, &full, &w))
        .collect::<Result<_>>()?;
    let idxs: Vec<TreeIndex> = trees.iter().map(TreeIndex::new).collect();
    let mut t0s = EdgeSet::new();
    for tree in &trees {
        t0s.extend(tree.edges());
    }

    // per-target last edges protecting the primary center and the LCA, and
    // the far-fault candidates that survive the tree/cluster baseline
    let mut elocal: BTreeMap<Vertex, EdgeSet> = BTreeMap::new();
    let mut candidates: Vec<FarCandidate> = Vec::new();
    for (si, &s) in sources.iter().enumerate() {
        let tree = &trees[si];
        let idx = &idxs[si];
        let mut local_faults: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        let mut far_faults: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for &t in cl.heavy() {
            if t == s {
                continue;
            }
            let Some(seg) = segment(tree, idx, &cl, s, t)? else {
                continue;
            };
            let z1 = cl.z1(t).unwrap();
            for v in [z1, seg.ell] {
                if v != s && v != t {
                    local_faults.entry(v).or_default().insert(t);
                }
            }
            for &v in &seg.far {
                if v != s {
                    far_faults.entry(v).or_default().insert(t);
                }
            }
        }
        let faults: BTreeSet<Vertex> = local_faults
            .keys()
            .chain(far_faults.keys())
            .copied()
            .collect();
        for &v in &faults {
            let r = bfs_tree(s, &SubgraphView::without_vertex(g, v), &w)?;
            if let Some(ts) = local_faults.get(&v) {
                for &t in ts {
                    if let Some(e) = r.last_edge_to(t) {
                        elocal.entry(t).or_default().insert(e);
                    }
                }
            }
            if let Some(ts) = far_faults.get(&v) {
                for &t in ts {
                    let Some(e) = r.last_edge_to(t) else {
                        continue;
                    };
                    if t0s.contains(&e) || cl.edges().contains(&e) {
                        continue;
                    }
                    let path = r.path_vertices(t).expect("t has a last edge");
                    let base = tree.path_vertices(t).expect("t reachable in the tree");
                    let div_idx = crate::replacement::common_prefix_end(&path, &base);
                    candidates.push(FarCandidate {
                        si,
                        s,
                        t,
                        v,
                        path,
                        div_idx,
                    });
                }
            }
        }
    }

    let mut elocal_all = EdgeSet::new();
    for set in elocal.values() {
        elocal_all.extend(set.iter().copied());
    }

    // dependent paths: the detour meets a source tree of t beyond t itself
    let mut efar_dep = EdgeSet::new();
    let mut independents: Vec<FarCandidate> = Vec::new();
    for cand in candidates {
        let e = edge(cand.path[cand.path.len() - 2], cand.path[cand.path.len() - 1]);
        if elocal_all.contains(&e) {
            continue; // not new-ending once the local edges are in
        }
        let dplus = &cand.path[cand.div_idx + 1..];
        let dependent = dplus[..dplus.len() - 1]
            .iter()
            .any(|&u| idxs.iter().any(|ix| ix.is_ancestor(u, cand.t)));
        if dependent {
            efar_dep.insert(e);
        } else {
            independents.push(cand);
        }
    }
    independents.sort_by_key(|c| (c.s, c.t, c.v));

    let delta = cl.delta();
    let params = BuildParams {
        kind: match variant {
            BuyVariant::WholePath => Kind::FourSw,
            BuyVariant::SuffixByValue => Kind::EightSw,
        },
        seed,
        seed_used: seed,
        delta,
        sources: sources.clone(),
        centers: cl.centers().to_vec(),
        inner: None,
    };
    let mut spanner = Spanner::shell(g.n(), params.kind.beta(), params);
    spanner.add_tagged(t0s.iter().copied(), Tag::Tree);
    spanner.add_tagged(cl.edges().iter().copied(), Tag::Cluster);
    spanner.add_tagged(elocal_all.iter().copied(), Tag::Local);
    spanner.add_tagged(efar_dep.iter().copied(), Tag::Dep);
    spanner.elocal_sizes = elocal.iter().map(|(&t, set)| (t, set.len())).collect();

    let mut state = PartialSpanner::new(g.n(), &spanner.edges);
    let mut vf_masks: BTreeMap<Vertex, Vec<bool>> = BTreeMap::new();
    let n = g.n();
    for (tau, cand) in independents.iter().enumerate() {
        let record = match variant {
            BuyVariant::WholePath => {
                buy_whole_path(tau, cand, &cl, &trees, &idxs, &mut state, &mut vf_masks, n)?
            }
            BuyVariant::SuffixByValue => buy_suffix(
                tau, cand, &cl, &trees, &idxs, &mut state, &mut vf_masks, n,
            )?,
        };
        let (bought_edges, pairs, rec) = record;
        if rec.bought {
            spanner.add_tagged(bought_edges, Tag::Bought);
            for pair in pairs {
                *spanner.pair_credits.entry(pair).or_insert(0) += 1;
            }
        }
        spanner.buy_log.push(rec);
    }
    debug_assert_eq!(spanner.edges, state.edges);

    Ok(SwBuild {
        spanner,
        clustering: cl,
    })
}

type BuyOutcome = (Vec<Edge>, Vec<(Vertex, Vertex)>, BuyRecord);

fn vf_mask<'m>(
    masks: &'m mut BTreeMap<Vertex, Vec<bool>>,
    center: Vertex,
    members: &[Vertex],
    trees: &[ShortestPathTree],
    idxs: &[TreeIndex],
    n: usize,
) -> &'m Vec<bool> {
    masks.entry(center).or_insert_with(|| {
        let vf = forbidden_vertices(trees, idxs, members);
        let mut mask = vec![false; n];
        for v in vf {
            mask[v] = true;
        }
        mask
    })
}

#[allow(clippy::too_many_arguments)]
fn buy_whole_path(
    tau: usize,
    cand: &FarCandidate,
    cl: &Clustering,
    trees: &[ShortestPathTree],
    idxs: &[TreeIndex],
    state: &mut PartialSpanner,
    masks: &mut BTreeMap<Vertex, Vec<bool>>,
    n: usize,
) -> Result<BuyOutcome> {
    let path = &cand.path;
    let missing: Vec<usize> = (0..path.len() - 1)
        .filter(|&i| !state.contains(&edge(path[i], path[i + 1])))
        .collect();
    let Some(&first) = missing.first() else {
        // nothing to buy
        let rec = BuyRecord {
            index: tau,
            s: cand.s,
            t: cand.t,
            fault: cand.v,
            cost: 0,
            value: 0,
            bought: false,
        };
        return Ok((Vec::new(), Vec::new(), rec));
    };
    let x = path[first];
    if !cl.is_heavy(x) {
        return Err(Error::ClusteringViolation(x));
    }
    let (zx, cx) = cl.surviving_center(x, cand.v)?;
    let (zt, ct) = cl.surviving_center(cand.t, cand.v)?;
    let cx = cx.to_vec();
    let ct = ct.to_vec();
    let lhs = (path.len() - 1 - first) as u32;
    let mask = vf_mask(masks, zt, &ct, trees, idxs, n);
    let rhs = cluster_distance_adj(&state.adj, &cx, &ct, mask);
    let bought = rhs.map_or(true, |d| lhs < d);
    let cost = missing.len();
    let mut added = Vec::new();
    if bought {
        for i in missing {
            let e = edge(path[i], path[i + 1]);
            if state.insert(e) {
                added.push(e);
            }
        }
    }
    let rec = BuyRecord {
        index: tau,
        s: cand.s,
        t: cand.t,
        fault: cand.v,
        cost,
        value: usize::from(bought),
        bought,
    };
    let pairs = if bought { vec![(zx, zt)] } else { Vec::new() };
    Ok((added, pairs, rec))
}

#[allow(clippy::too_many_arguments)]
fn buy_suffix(
    tau: usize,
    cand: &FarCandidate,
    cl: &Clustering,
    trees: &[ShortestPathTree],
    idxs: &[TreeIndex],
    state: &mut PartialSpanner,
    masks: &mut BTreeMap<Vertex, Vec<bool>>,
    n: usize,
) -> Result<BuyOutcome> {
    let path = &cand.path;
    let v = cand.v;
    let idx = &idxs[cand.si];

    // pivot: deepest vertex whose entering edge is missing and whose fault
    // lies strictly below the LCA of its surviving cluster
    let mut phi_idx = None;
    for i in (1..path.len()).rev() {
        let u = path[i];
        if state.contains(&edge(path[i - 1], path[i])) {
            continue;
        }
        if !cl.is_heavy(u) {
            continue; // light vertices have no cluster to anchor the test
        }
        let (_, cu) = cl.surviving_center(u, v)?;
        let reach: Vec<Vertex> = cu.iter().copied().filter(|&m| idx.reachable(m)).collect();
        if reach.is_empty() {
            continue;
        }
        let ell = idx.lca_of_set(reach).expect("members are reachable");
        if idx.reachable(v) && idx.is_ancestor(v, u) && idx.is_ancestor(ell, v) && v != ell {
            phi_idx = Some(i);
            break;
        }
    }
    let phi_idx = phi_idx.unwrap_or_else(|| {
        (0..path.len() - 1)
            .find(|&i| !state.contains(&edge(path[i], path[i + 1])))
            .unwrap_or(path.len() - 1)
    });

    let q = &path[phi_idx..];
    let missing_in_q: Vec<usize> = (0..q.len().saturating_sub(1))
        .filter(|&j| !state.contains(&edge(q[j], q[j + 1])))
        .collect();
    let kappa = missing_in_q.len();

    let phi = q[0];
    let c1 = if cl.is_heavy(phi) {
        let (z, m) = cl.surviving_center(phi, v)?;
        Some((z, m.to_vec()))
    } else {
        None
    };
    let (z2, c2m) = cl.surviving_center(cand.t, v)?;
    let c2m = c2m.to_vec();

    let mut valset: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    if kappa <= 4 {
        if let Some((z1c, c1m)) = &c1 {
            let lhs = (q.len() - 1) as u32;
            let mask = vf_mask(masks, z2, &c2m, trees, idxs, n);
            let rhs = cluster_distance_adj(&state.adj, c1m, &c2m, mask);
            if rhs.map_or(true, |d| lhs < d) {
                valset.insert((*z1c, z2));
            }
        }
    } else {
        // representatives: heads of missing edges, kept greedily at pairwise
        // distance >= 3 along the suffix
        let mut reps: Vec<usize> = Vec::new();
        let mut last: Option<usize> = None;
        for j in missing_in_q.iter().map(|&j| j + 1) {
            if last.map_or(true, |lk| j - lk >= 3) {
                reps.push(j);
                last = Some(j);
            }
        }
        for &j in &reps {
            let u = q[j];
            if !cl.is_heavy(u) {
                // heads of missing edges are clustered on a consistent build
                return Err(Error::ClusteringViolation(u));
            }
            let (zl, clm) = cl.surviving_center(u, v)?;
            let clm = clm.to_vec();
            if let Some((z1c, c1m)) = &c1 {
                let lhs = j as u32;
                let mask = vf_mask(masks, zl, &clm, trees, idxs, n);
                let rhs = cluster_distance_adj(&state.adj, c1m, &clm, mask);
                if rhs.map_or(true, |d| lhs < d) {
                    valset.insert((*z1c, zl));
                }
            }
            let lhs = (q.len() - 1 - j) as u32;
            let mask = vf_mask(masks, z2, &c2m, trees, idxs, n);
            let rhs = cluster_distance_adj(&state.adj, &clm, &c2m, mask);
            if rhs.map_or(true, |d| lhs < d) {
                valset.insert((zl, z2));
            }
        }
    }

    let value = valset.len();
    let bought = kappa <= 4 * value;
    let mut added = Vec::new();
    if bought {
        for &j in &missing_in_q {
            let e = edge(q[j], q[j + 1]);
            if state.insert(e) {
                added.push(e);
            }
        }
    }
    let rec = BuyRecord {
        index: tau,
        s: cand.s,
        t: cand.t,
        fault: cand.v,
        cost: kappa,
        value,
        bought,
    };
    let pairs = if bought {
        valset.into_iter().collect()
    } else {
        Vec::new()
    };
    Ok((added, pairs, rec))
}
