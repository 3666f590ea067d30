//! All-pairs shortest directed paths with path reconstruction.

use crate::surface_graph::{ArcId, EmbeddedDigraph, VertexId};

#[derive(Clone, Debug)]
pub struct ShortestPaths {
    n: usize,
    dist: Vec<f64>,
    first_arc: Vec<Option<ArcId>>,
    heads: Vec<VertexId>,
}

impl ShortestPaths {
    /// Floyd-Warshall over the arc costs of `g`. Among equally short paths
    /// the one found first (lowest arc ids, lowest intermediate vertices)
    /// is kept.
    pub fn new(g: &EmbeddedDigraph) -> Self {
        let n = g.num_vertices();
        let mut dist = vec![f64::INFINITY; n * n];
        let mut first_arc = vec![None; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for (a, arc) in g.arcs().iter().enumerate() {
            let ix = arc.tail * n + arc.head;
            if arc.tail != arc.head && arc.cost < dist[ix] {
                dist[ix] = arc.cost;
                first_arc[ix] = Some(a);
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if !dik.is_finite() || i == k {
                    continue;
                }
                for j in 0..n {
                    let candidate = dik + dist[k * n + j];
                    if candidate < dist[i * n + j] {
                        dist[i * n + j] = candidate;
                        first_arc[i * n + j] = first_arc[i * n + k];
                    }
                }
            }
        }
        let heads = g.arcs().iter().map(|a| a.head).collect();
        Self { n, dist, first_arc, heads }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> f64 {
        self.dist[u * self.n + v]
    }

    /// Arcs of a shortest `u -> v` path; empty when `u == v`.
    pub fn path(&self, u: VertexId, v: VertexId) -> Vec<ArcId> {
        let mut out = Vec::new();
        let mut cur = u;
        while cur != v {
            let a = self.first_arc[cur * self.n + v].expect("target is reachable");
            out.push(a);
            cur = self.heads[a];
            assert!(out.len() <= self.n, "shortest path reconstruction cycled");
        }
        out
    }
}
