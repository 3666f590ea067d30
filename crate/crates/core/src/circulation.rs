//! Integral circulations through the oriented thin forest and their
//! decomposition into closed walks.

use std::collections::VecDeque;

use thiserror::Error;

use crate::maxflow::FlowNetwork;
use crate::surface_graph::{ArcId, EdgeId, EmbeddedDigraph, VertexId};

const ROUND_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CirculationError {
    #[error("forest edge {edge} has no arc in either direction")]
    MissingArc { edge: EdgeId },
    #[error("no feasible circulation: {demand} units must leave {side:?} but only {routed} can")]
    InfeasibleCirculation { side: Vec<VertexId>, demand: i64, routed: i64 },
    #[error("flow is not Eulerian at vertex {vertex}")]
    NotEulerian { vertex: VertexId },
}

/// The cheaper arc of every forest edge; ties go to the lexicographically
/// smaller `(tail, head)`.
pub fn orient_forest(g: &EmbeddedDigraph, forest: &[EdgeId]) -> Result<Vec<ArcId>, CirculationError> {
    forest
        .iter()
        .map(|&e| {
            g.edge_arcs(e)
                .into_iter()
                .flatten()
                .min_by(|&a, &b| {
                    let (x, y) = (g.arc(a), g.arc(b));
                    x.cost.total_cmp(&y.cost).then((x.tail, x.head).cmp(&(y.tail, y.head)))
                })
                .ok_or(CirculationError::MissingArc { edge: e })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedArcNetwork {
    pub lower: Vec<i64>,
    /// Integral capacity `l + ⌈2α'·x⌉`.
    pub upper: Vec<i64>,
    /// Unrounded capacity `l + 2α'·x`.
    pub upper_real: Vec<f64>,
    pub forest_arcs: Vec<ArcId>,
}

/// Bounds `l = [a ∈ T⃗]`, `u = l + 2·alpha·x`, with `u` rounded up to an integer.
pub fn hoffman_bounds(num_arcs: usize, forest_arcs: &[ArcId], x: &[f64], alpha: f64) -> BoundedArcNetwork {
    let mut lower = vec![0; num_arcs];
    for &a in forest_arcs {
        lower[a] = 1;
    }
    let extra: Vec<f64> = x.iter().map(|&v| 2.0 * alpha * v).collect();
    let upper = lower.iter().zip(&extra).map(|(&l, &w)| l + ((w - ROUND_TOL).ceil().max(0.0) as i64)).collect();
    let upper_real = lower.iter().zip(&extra).map(|(&l, &w)| l as f64 + w).collect();
    BoundedArcNetwork { lower, upper, upper_real, forest_arcs: forest_arcs.to_vec() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circulation {
    pub f: Vec<i64>,
}

impl Circulation {
    pub fn cost(&self, g: &EmbeddedDigraph) -> f64 {
        g.arcs().iter().zip(&self.f).map(|(a, &f)| a.cost * f as f64).sum()
    }

    /// Checks conservation and bounds exactly.
    pub fn verify(&self, g: &EmbeddedDigraph, b: &BoundedArcNetwork) -> Result<(), String> {
        let mut balance = vec![0i64; g.num_vertices()];
        for (a, arc) in g.arcs().iter().enumerate() {
            let f = self.f[a];
            if f < b.lower[a] || f > b.upper[a] {
                return Err(format!("arc {a}: flow {f} outside [{}, {}]", b.lower[a], b.upper[a]));
            }
            balance[arc.tail] -= f;
            balance[arc.head] += f;
        }
        match balance.iter().position(|&x| x != 0) {
            Some(v) => Err(format!("vertex {v}: imbalance {}", balance[v])),
            None => Ok(()),
        }
    }
}

/// Supplies created by routing the lower bounds: positive entries must be
/// shipped out of the vertex, negative ones into it.
fn lower_bound_excess(g: &EmbeddedDigraph, b: &BoundedArcNetwork) -> Vec<i64> {
    let mut excess = vec![0i64; g.num_vertices()];
    for (a, arc) in g.arcs().iter().enumerate() {
        excess[arc.head] += b.lower[a];
        excess[arc.tail] -= b.lower[a];
    }
    excess
}

fn infeasible(reach: &[bool], n: usize, demand: i64, routed: i64) -> CirculationError {
    CirculationError::InfeasibleCirculation {
        side: (0..n).filter(|&v| reach[v]).collect(),
        demand,
        routed,
    }
}

/// Some integral circulation within the bounds, by lower-bound elimination
/// and one max-flow.
pub fn feasible_integer_circulation(
    g: &EmbeddedDigraph,
    b: &BoundedArcNetwork,
) -> Result<Circulation, CirculationError> {
    let n = g.num_vertices();
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    let handles: Vec<usize> = g
        .arcs()
        .iter()
        .enumerate()
        .map(|(a, arc)| net.add_edge(arc.tail, arc.head, b.upper[a] - b.lower[a]))
        .collect();
    let mut demand = 0;
    for (v, &ex) in lower_bound_excess(g, b).iter().enumerate() {
        if ex > 0 {
            net.add_edge(s, v, ex);
            demand += ex;
        } else if ex < 0 {
            net.add_edge(v, t, -ex);
        }
    }
    let routed = net.max_flow(s, t);
    if routed < demand {
        return Err(infeasible(&net.reachable_from(s), n, demand, routed));
    }
    let f = handles.iter().enumerate().map(|(a, &h)| b.lower[a] + net.flow(h)).collect();
    Ok(Circulation { f })
}

/// A cheapest integral circulation within the bounds, by successive
/// shortest paths over the same reduction. Arc costs must be nonnegative.
pub fn min_cost_integer_circulation(
    g: &EmbeddedDigraph,
    b: &BoundedArcNetwork,
) -> Result<Circulation, CirculationError> {
    let n = g.num_vertices();
    let (s, t) = (n, n + 1);
    let mut net = CostNetwork::new(n + 2);
    for (a, arc) in g.arcs().iter().enumerate() {
        net.add_edge(arc.tail, arc.head, b.upper[a] - b.lower[a], arc.cost);
    }
    let mut demand = 0;
    for (v, &ex) in lower_bound_excess(g, b).iter().enumerate() {
        if ex > 0 {
            net.add_edge(s, v, ex, 0.0);
            demand += ex;
        } else if ex < 0 {
            net.add_edge(v, t, -ex, 0.0);
        }
    }
    let routed = net.min_cost_flow(s, t, demand);
    if routed < demand {
        return Err(infeasible(&net.reachable_from(s), n, demand, routed));
    }
    let f = (0..g.num_arcs()).map(|a| b.lower[a] + net.flow(a)).collect();
    Ok(Circulation { f })
}

struct CostNetwork {
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl CostNetwork {
    fn new(n: usize) -> Self {
        Self { to: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: i64, cost: f64) {
        for (from, to, c, w) in [(u, v, cap, cost), (v, u, 0, -cost)] {
            self.adj[from].push(self.to.len());
            self.to.push(to);
            self.cap.push(c);
            self.cost.push(w);
        }
    }

    fn flow(&self, k: usize) -> i64 {
        self.cap[2 * k + 1]
    }

    /// Augments along cheapest residual paths (Bellman-Ford queue variant)
    /// until `limit` units are routed or `t` is unreachable.
    fn min_cost_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let n = self.adj.len();
        let mut routed = 0;
        while routed < limit {
            let mut dist = vec![f64::INFINITY; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            dist[s] = 0.0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                queued[v] = false;
                for &e in &self.adj[v] {
                    let w = self.to[e];
                    if self.cap[e] > 0 && dist[v] + self.cost[e] < dist[w] - 1e-12 {
                        dist[w] = dist[v] + self.cost[e];
                        via[w] = e;
                        if !queued[w] {
                            queued[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            if !dist[t].is_finite() {
                break;
            }
            let mut push = limit - routed;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            routed += push;
        }
        routed
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                if self.cap[e] > 0 && !seen[self.to[e]] {
                    seen[self.to[e]] = true;
                    stack.push(self.to[e]);
                }
            }
        }
        seen
    }
}

/// A closed walk given by its start vertex and arcs; no arcs means the walk
/// stays at `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: VertexId,
    pub arcs: Vec<ArcId>,
}

impl Walk {
    /// Vertices in visiting order, without repeating the start at the end.
    pub fn vertices(&self, g: &EmbeddedDigraph) -> Vec<VertexId> {
        let mut out = vec![self.start];
        for &a in self.arcs.iter().take(self.arcs.len().saturating_sub(1)) {
            out.push(g.arc(a).head);
        }
        out
    }

    pub fn cost(&self, g: &EmbeddedDigraph) -> f64 {
        self.arcs.iter().map(|&a| g.arc(a).cost).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkCover {
    pub walks: Vec<Walk>,
    pub cost: f64,
}

impl WalkCover {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// One Euler circuit per connected component of the flow support, plus a
/// degenerate walk for every vertex carrying no flow. Walks are ordered by
/// their smallest vertex.
pub fn walks_from_circulation(g: &EmbeddedDigraph, f: &Circulation) -> Result<WalkCover, CirculationError> {
    let n = g.num_vertices();
    let mut balance = vec![0i64; n];
    let mut touched = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut out: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for (a, arc) in g.arcs().iter().enumerate() {
        if f.f[a] <= 0 {
            continue;
        }
        balance[arc.tail] += f.f[a];
        balance[arc.head] -= f.f[a];
        touched[arc.tail] = true;
        touched[arc.head] = true;
        out[arc.tail].push(a);
        let (x, y) = (find(&mut parent, arc.tail), find(&mut parent, arc.head));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    if let Some(vertex) = balance.iter().position(|&b| b != 0) {
        return Err(CirculationError::NotEulerian { vertex });
    }
    let mut remaining = f.f.clone();
    let mut cursor = vec![0usize; n];
    let mut walks = Vec::new();
    let mut done = vec![false; n];
    for v in 0..n {
        if !touched[v] {
            walks.push(Walk { start: v, arcs: Vec::new() });
            continue;
        }
        let root = find(&mut parent, v);
        if done[root] {
            continue;
        }
        done[root] = true;
        // Hierholzer from the smallest vertex of the component.
        let mut stack: Vec<(VertexId, Option<ArcId>)> = vec![(v, None)];
        let mut circuit = Vec::new();
        while let Some(&(u, _)) = stack.last() {
            while cursor[u] < out[u].len() && remaining[out[u][cursor[u]]] == 0 {
                cursor[u] += 1;
            }
            if cursor[u] < out[u].len() {
                let a = out[u][cursor[u]];
                remaining[a] -= 1;
                stack.push((g.arc(a).head, Some(a)));
            } else {
                let (_, a) = stack.pop().unwrap();
                circuit.extend(a);
            }
        }
        circuit.reverse();
        walks.push(Walk { start: v, arcs: circuit });
    }
    if let Some(a) = remaining.iter().position(|&r| r > 0) {
        return Err(CirculationError::NotEulerian { vertex: g.arc(a).tail });
    }
    let cost = walks.iter().map(|w| w.cost(g)).sum();
    Ok(WalkCover { walks, cost })
}

/// Summary of the walk-cover stage.
#[derive(Clone, Debug, PartialEq)]
pub struct CirculationCertificate {
    pub cost: f64,
    /// `c(T) + 2α'·LP`, i.e. `(2α' + ŝ)·LP`.
    pub bound: f64,
    /// Cost above `Σ c(a)·u(a)` with unrounded `u`, caused by rounding.
    pub slack: f64,
}

impl CirculationCertificate {
    pub fn new(g: &EmbeddedDigraph, b: &BoundedArcNetwork, cost: f64) -> Self {
        let bound: f64 = g.arcs().iter().zip(&b.upper_real).map(|(a, u)| a.cost * u).sum();
        Self { cost, bound, slack: (cost - bound).max(0.0) }
    }

    pub fn line(&self) -> String {
        format!("circulation cost={} bound={} slack={}", self.cost, self.bound, self.slack)
    }
}
