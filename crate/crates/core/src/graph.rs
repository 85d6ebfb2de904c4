//! Vertex–edge graphs of polytopes, BFS distances, diameters and the
//! subgraphs of a Minkowski sum spanned by a fixed vertex of one summand.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::minkowski::SumResult;
use crate::polytope::{edges, ExactPolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeGraph {
    adjacency: Vec<Vec<usize>>,
}

impl PolytopeGraph {
    /// Graph on `n` vertices from an edge list. No connectivity check; use
    /// [`build_graph`] for polytopes.
    pub fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> PolytopeGraph {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edge_list {
            assert!(u != v, "self-loop at {u}");
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        PolytopeGraph { adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        bfs_adj(&self.adjacency, source)
    }

    pub fn is_connected(&self) -> bool {
        self.adjacency.is_empty() || self.bfs(0).iter().all(Option::is_some)
    }
}

fn bfs_adj(adjacency: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adjacency.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adjacency[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Graph of a polytope from its edges. Panics if it is disconnected, which
/// would mean the polytope data is corrupt.
pub fn build_graph(p: &ExactPolytope) -> PolytopeGraph {
    let g = PolytopeGraph::from_edges(p.f0(), &edges(p));
    assert!(g.is_connected(), "polytope graph must be connected");
    g
}

pub fn distance(g: &PolytopeGraph, u: usize, v: usize) -> Option<usize> {
    g.bfs(u)[v]
}

/// Lexicographically least shortest path from `u` to `v`.
pub fn geodesic(g: &PolytopeGraph, u: usize, v: usize) -> Option<Vec<usize>> {
    let to_target = g.bfs(v);
    let mut d = to_target[u]?;
    let mut path = vec![u];
    let mut cur = u;
    while d > 0 {
        cur = *g
            .neighbors(cur)
            .iter()
            .find(|&&w| to_target[w] == Some(d - 1))
            .expect("BFS layers are consistent");
        path.push(cur);
        d -= 1;
    }
    Some(path)
}

/// Diameter with the lexicographically least pair realizing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Diameter {
    pub value: usize,
    pub witness: (usize, usize),
}

/// Exact diameter by BFS from every vertex. Panics on a disconnected graph.
pub fn diameter(g: &PolytopeGraph) -> Diameter {
    let n = g.vertex_count();
    if n == 0 {
        return Diameter {
            value: 0,
            witness: (0, 0),
        };
    }
    let ecc: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|s| {
            let dist = g.bfs(s);
            let mut best = (0, s);
            for (v, d) in dist.iter().enumerate() {
                let d = d.expect("graph must be connected");
                if d > best.0 {
                    best = (d, v);
                }
            }
            best
        })
        .collect();
    let (mut value, mut witness) = (0, (0, 0));
    for (s, &(d, v)) in ecc.iter().enumerate() {
        if d > value {
            value = d;
            witness = (s.min(v), s.max(v));
        }
    }
    Diameter { value, witness }
}

/// Subgraph of the sum's graph induced by the sum vertices whose
/// decomposition has first part `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaGraph {
    pub base: usize,
    /// Sum-vertex indices, sorted.
    pub members: Vec<usize>,
    /// Adjacency in local indices into `members`.
    pub adjacency: Vec<Vec<usize>>,
}

impl GammaGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        self.members.is_empty() || bfs_adj(&self.adjacency, 0).iter().all(Option::is_some)
    }

    /// Diameter in local indices, or `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        if !self.is_connected() {
            return None;
        }
        let g = PolytopeGraph {
            adjacency: self.adjacency.clone(),
        };
        Some(diameter(&g).value)
    }
}

pub fn gamma_subgraph(s: &SumResult, base: usize) -> GammaGraph {
    gamma_from_parts(&s.decomposition, s.graph(), base)
}

/// Same as [`gamma_subgraph`] for an explicit decomposition and sum graph.
pub fn gamma_from_parts(decomposition: &[(usize, usize)], g: &PolytopeGraph, base: usize) -> GammaGraph {
    let members: Vec<usize> = (0..decomposition.len())
        .filter(|&w| decomposition[w].0 == base)
        .collect();
    let adjacency = members
        .iter()
        .map(|&w| {
            g.neighbors(w)
                .iter()
                .filter_map(|x| members.binary_search(x).ok())
                .collect()
        })
        .collect();
    GammaGraph {
        base,
        members,
        adjacency,
    }
}

/// One subgraph per vertex of the first summand.
pub fn gamma_subgraphs(s: &SumResult, p_vertices: usize) -> Vec<GammaGraph> {
    (0..p_vertices).map(|u| gamma_subgraph(s, u)).collect()
}
