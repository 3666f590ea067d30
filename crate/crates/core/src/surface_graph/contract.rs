use super::embedding::{EdgeEnd, EdgeId, Embedding, Sign, VertexId};
use super::GraphError;

/// What happened to an edge during a contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeFate {
    /// Survives as a non-loop edge with the given new id.
    Kept(EdgeId),
    /// Survives with the given new id but both ends now sit on one vertex.
    BecameLoop(EdgeId),
    Contracted,
}

impl EdgeFate {
    pub fn survivor(self) -> Option<EdgeId> {
        match self {
            EdgeFate::Kept(e) | EdgeFate::BecameLoop(e) => Some(e),
            EdgeFate::Contracted => None,
        }
    }
}

/// Surjection from the vertices of a graph onto the vertices of a contracted
/// graph, plus the fate of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    pub vertex_map: Vec<VertexId>,
    pub edge_fate: Vec<EdgeFate>,
    pub vertex_count: usize,
}

impl ContractionMap {
    pub fn identity(num_vertices: usize, num_edges: usize, loops: impl Fn(EdgeId) -> bool) -> Self {
        Self {
            vertex_map: (0..num_vertices).collect(),
            edge_fate: (0..num_edges)
                .map(|e| if loops(e) { EdgeFate::BecameLoop(e) } else { EdgeFate::Kept(e) })
                .collect(),
            vertex_count: num_vertices,
        }
    }

    /// `self` followed by `later`.
    pub fn then(&self, later: &ContractionMap) -> ContractionMap {
        let vertex_map = self.vertex_map.iter().map(|&v| later.vertex_map[v]).collect();
        let edge_fate = self
            .edge_fate
            .iter()
            .map(|fate| match *fate {
                EdgeFate::Contracted => EdgeFate::Contracted,
                EdgeFate::Kept(e) => later.edge_fate[e],
                EdgeFate::BecameLoop(e) => match later.edge_fate[e] {
                    EdgeFate::Kept(f) | EdgeFate::BecameLoop(f) => EdgeFate::BecameLoop(f),
                    EdgeFate::Contracted => EdgeFate::Contracted,
                },
            })
            .collect();
        ContractionMap { vertex_map, edge_fate, vertex_count: later.vertex_count }
    }

    /// True when every new vertex has a preimage.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.vertex_count];
        for &v in &self.vertex_map {
            if v >= self.vertex_count {
                return false;
            }
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

impl Embedding {
    /// Contracts every edge of `set`, splicing rotations so the embedding is
    /// preserved.
    ///
    /// Edges are processed in the given order. An edge of `set` whose ends
    /// were already merged by an earlier contraction is deleted. Edges outside
    /// `set` are never removed, so parallel edges and new loops survive.
    pub fn contract_edges(&self, set: &[EdgeId]) -> Result<(Embedding, ContractionMap), GraphError> {
        let m = self.num_edges();
        let n = self.num_vertices();
        let mut in_set = vec![false; m];
        for &e in set {
            if e >= m {
                return Err(GraphError::MalformedRotation(format!("unknown edge {e}")));
            }
            if self.is_loop(e) {
                return Err(GraphError::ContractLoop(e));
            }
            in_set[e] = true;
        }

        let mut rotation: Vec<Vec<EdgeEnd>> = self.rotations().to_vec();
        let mut signature: Vec<Sign> = self.signatures().to_vec();
        let mut owner: Vec<[VertexId; 2]> = (0..m).map(|e| self.endpoints(e)).collect();
        let mut parent: Vec<VertexId> = (0..n).collect();
        let mut removed = vec![false; m];

        let mut done = vec![false; m];
        for &e in set {
            if done[e] {
                continue;
            }
            done[e] = true;
            removed[e] = true;
            let [u, v] = owner[e];
            if u == v {
                rotation[u].retain(|h| h.edge != e);
                continue;
            }
            if signature[e] == Sign::Minus {
                rotation[v].reverse();
                for h in &rotation[v] {
                    let [a, b] = owner[h.edge];
                    if a != b {
                        signature[h.edge] = signature[h.edge].flip();
                    }
                }
            }
            let pu = rotation[u].iter().position(|h| *h == EdgeEnd::new(e, 0)).unwrap();
            let pv = rotation[v].iter().position(|h| *h == EdgeEnd::new(e, 1)).unwrap();
            let ru = std::mem::take(&mut rotation[u]);
            let rv = std::mem::take(&mut rotation[v]);
            let mut merged = Vec::with_capacity(ru.len() + rv.len() - 2);
            merged.extend_from_slice(&ru[pu + 1..]);
            merged.extend_from_slice(&ru[..pu]);
            merged.extend_from_slice(&rv[pv + 1..]);
            merged.extend_from_slice(&rv[..pv]);
            for h in &rv {
                owner[h.edge][h.end as usize] = u;
            }
            rotation[u] = merged;
            parent[v] = u;
        }

        let find = |mut v: VertexId| {
            while parent[v] != v {
                v = parent[v];
            }
            v
        };
        let mut new_vertex = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if parent[v] == v {
                new_vertex[v] = next;
                next += 1;
            }
        }
        let vertex_map: Vec<VertexId> = (0..n).map(|v| new_vertex[find(v)]).collect();

        let mut edge_fate = Vec::with_capacity(m);
        let mut new_edge = vec![usize::MAX; m];
        let mut next_edge = 0;
        for e in 0..m {
            if removed[e] {
                edge_fate.push(EdgeFate::Contracted);
                continue;
            }
            new_edge[e] = next_edge;
            let [a, b] = owner[e];
            edge_fate.push(if a == b { EdgeFate::BecameLoop(next_edge) } else { EdgeFate::Kept(next_edge) });
            next_edge += 1;
        }
        let new_rotation: Vec<Vec<EdgeEnd>> = (0..n)
            .filter(|&v| parent[v] == v)
            .map(|v| rotation[v].iter().map(|h| EdgeEnd::new(new_edge[h.edge], h.end)).collect())
            .collect();
        let new_signature: Vec<Sign> = (0..m).filter(|&e| !removed[e]).map(|e| signature[e]).collect();
        let contracted = Embedding::new(new_rotation, new_signature)?;
        let map = ContractionMap { vertex_map, edge_fate, vertex_count: next };
        Ok((contracted, map))
    }
}
