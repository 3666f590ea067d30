use std::collections::VecDeque;

use super::contract::ContractionMap;
use super::embedding::{ArcId, EdgeId, Embedding, VertexId};
use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: f64,
}

/// An ATSP instance: a digraph with arc costs whose underlying undirected
/// multigraph carries an embedding.
///
/// Every arc belongs to exactly one edge. Slot 0 of an edge holds the arc
/// running from the vertex at end 0 to the vertex at end 1, slot 1 the
/// reverse arc; either may be absent.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedDigraph {
    embedding: Embedding,
    arcs: Vec<Arc>,
    edge_arcs: Vec<[Option<ArcId>; 2]>,
    arc_edge: Vec<(EdgeId, u8)>,
}

impl EmbeddedDigraph {
    /// Validates costs, arc/edge consistency and strong connectivity.
    pub fn new(
        embedding: Embedding,
        arcs: Vec<Arc>,
        edge_arcs: Vec<[Option<ArcId>; 2]>,
    ) -> Result<Self, GraphError> {
        if edge_arcs.len() != embedding.num_edges() {
            return Err(GraphError::ArcMismatch(format!(
                "{} edge records for {} embedded edges",
                edge_arcs.len(),
                embedding.num_edges()
            )));
        }
        for (a, arc) in arcs.iter().enumerate() {
            if !arc.cost.is_finite() || arc.cost < 0.0 {
                return Err(GraphError::NegativeCost { arc: a, cost: arc.cost });
            }
        }
        let mut arc_edge = vec![(usize::MAX, 0u8); arcs.len()];
        for (e, slots) in edge_arcs.iter().enumerate() {
            let [u, v] = embedding.endpoints(e);
            for (slot, a) in slots.iter().enumerate() {
                let Some(a) = *a else { continue };
                let arc = arcs.get(a).ok_or_else(|| {
                    GraphError::ArcMismatch(format!("edge {e} names unknown arc {a}"))
                })?;
                let (tail, head) = if slot == 0 { (u, v) } else { (v, u) };
                if arc.tail != tail || arc.head != head {
                    return Err(GraphError::ArcMismatch(format!(
                        "arc {a} ({} -> {}) does not run {tail} -> {head} along edge {e}",
                        arc.tail, arc.head
                    )));
                }
                if arc_edge[a].0 != usize::MAX {
                    return Err(GraphError::ArcMismatch(format!("arc {a} is bound to two edge slots")));
                }
                arc_edge[a] = (e, slot as u8);
            }
        }
        if let Some(a) = arc_edge.iter().position(|&(e, _)| e == usize::MAX) {
            return Err(GraphError::ArcMismatch(format!("arc {a} is not bound to any edge")));
        }
        let g = Self { embedding, arcs, edge_arcs, arc_edge };
        if !g.is_strongly_connected() {
            return Err(GraphError::NotStronglyConnected);
        }
        Ok(g)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn num_vertices(&self) -> usize {
        self.embedding.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.embedding.num_edges()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> &Arc {
        &self.arcs[a]
    }

    pub fn edge_arcs(&self, e: EdgeId) -> [Option<ArcId>; 2] {
        self.edge_arcs[e]
    }

    pub fn edge_of_arc(&self, a: ArcId) -> EdgeId {
        self.arc_edge[a].0
    }

    /// Cost of an undirected edge: the cheaper of its arcs, `None` without arcs.
    pub fn edge_cost(&self, e: EdgeId) -> Option<f64> {
        self.edge_arcs[e]
            .iter()
            .flatten()
            .map(|&a| self.arcs[a].cost)
            .min_by(f64::total_cmp)
    }

    /// Same instance with every arc cost replaced.
    pub fn with_costs(&self, costs: &[f64]) -> Result<Self, GraphError> {
        assert_eq!(costs.len(), self.arcs.len());
        let arcs = self.arcs.iter().zip(costs).map(|(a, &cost)| Arc { cost, ..*a }).collect();
        Self::new(self.embedding.clone(), arcs, self.edge_arcs.clone())
    }

    pub fn out_arcs(&self) -> Vec<Vec<ArcId>> {
        let mut out = vec![Vec::new(); self.num_vertices()];
        for (a, arc) in self.arcs.iter().enumerate() {
            out[arc.tail].push(a);
        }
        out
    }

    fn reaches_all(&self, forward: bool) -> bool {
        let n = self.num_vertices();
        let mut adj = vec![Vec::new(); n];
        for arc in &self.arcs {
            if forward {
                adj[arc.tail].push(arc.head);
            } else {
                adj[arc.head].push(arc.tail);
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.reaches_all(true) && self.reaches_all(false)
    }

    /// Contracts edges of the embedding; arcs of contracted edges disappear
    /// and the remaining arcs are renumbered in their original order.
    pub fn contract_edges(&self, set: &[EdgeId]) -> Result<(EmbeddedDigraph, ContractionMap), GraphError> {
        let (embedding, map) = self.embedding.contract_edges(set)?;
        let mut arcs = Vec::new();
        let mut new_arc = vec![usize::MAX; self.arcs.len()];
        for (a, arc) in self.arcs.iter().enumerate() {
            if map.edge_fate[self.edge_of_arc(a)].survivor().is_some() {
                new_arc[a] = arcs.len();
                arcs.push(Arc {
                    tail: map.vertex_map[arc.tail],
                    head: map.vertex_map[arc.head],
                    cost: arc.cost,
                });
            }
        }
        let mut edge_arcs = vec![[None, None]; embedding.num_edges()];
        for (e, fate) in map.edge_fate.iter().enumerate() {
            if let Some(ne) = fate.survivor() {
                edge_arcs[ne] = self.edge_arcs[e].map(|slot| slot.map(|a| new_arc[a]));
            }
        }
        let g = EmbeddedDigraph::new(embedding, arcs, edge_arcs)?;
        Ok((g, map))
    }
}
