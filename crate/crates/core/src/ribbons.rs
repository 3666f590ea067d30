//! Ribbon decompositions and the max-ribbon contraction sequence.
//!
//! A ribbon is a maximal chain of parallel non-loop edges in which every two
//! consecutive edges bound a bigon face. Repeatedly contracting the heaviest
//! ribbon and keeping one weighted-median edge per contraction yields a
//! spanning forest with one component per vertex of the final graph.

use thiserror::Error;

use crate::surface_graph::{ContractionMap, EdgeId, Embedding, FaceSet, GraphError, VertexId};

/// Lower bound on the weight of every contracted ribbon, given that every cut
/// carries weight at least 2.
pub const MIN_RIBBON_WEIGHT: f64 = 2.0 / 5.0;

/// Absolute slack applied to [`MIN_RIBBON_WEIGHT`] at runtime.
pub const RIBBON_WEIGHT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RibbonError {
    #[error("ribbon has no edges")]
    EmptyRibbon,
    #[error("graph has no non-loop edges left")]
    NoRibbons,
    #[error("step {step}: heaviest ribbon weighs {weight}, below 2/5; some cut has weight < 2")]
    CutConditionViolated { step: usize, weight: f64 },
    #[error("cut is empty or the whole vertex set")]
    DegenerateCut,
    #[error("weight vector has {got} entries for {expected} edges")]
    WeightLength { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn approx_le(a: f64, b: f64) -> bool {
    a <= b + 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ribbon {
    /// Edges in chain order; consecutive edges share a bigon.
    pub edges: Vec<EdgeId>,
    pub endpoints: (VertexId, VertexId),
}

impl Ribbon {
    pub fn weight(&self, z: &[f64]) -> f64 {
        self.edges.iter().map(|&e| z[e]).sum()
    }

    pub fn min_edge(&self) -> EdgeId {
        *self.edges.iter().min().expect("ribbons are nonempty")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RibbonDecomposition {
    /// Sorted by smallest edge id.
    pub ribbons: Vec<Ribbon>,
    /// Ribbon index of every edge; `None` for loops.
    pub ribbon_of_edge: Vec<Option<usize>>,
}

impl RibbonDecomposition {
    pub fn len(&self) -> usize {
        self.ribbons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ribbons.is_empty()
    }
}

/// Groups the non-loop edges into maximal bigon chains.
pub fn ribbon_decomposition(g: &Embedding, faces: &FaceSet) -> RibbonDecomposition {
    let m = g.num_edges();
    // bigon neighbours of every edge: at most one per side
    let mut links: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    for face in faces.faces() {
        if face.len() != 2 {
            continue;
        }
        let (a, b) = (face.boundary[0].edge, face.boundary[1].edge);
        if a == b || g.is_loop(a) || g.is_loop(b) {
            continue;
        }
        if !links[a].contains(&b) {
            links[a].push(b);
        }
        if !links[b].contains(&a) {
            links[b].push(a);
        }
    }

    let mut ribbon_of_edge = vec![None; m];
    let mut ribbons = Vec::new();
    for e in 0..m {
        if g.is_loop(e) || ribbon_of_edge[e].is_some() {
            continue;
        }
        // collect the chain containing e
        let mut members = vec![e];
        let mut stack = vec![e];
        let mut seen = vec![e];
        while let Some(f) = stack.pop() {
            for &h in &links[f] {
                if !seen.contains(&h) {
                    seen.push(h);
                    members.push(h);
                    stack.push(h);
                }
            }
        }
        let edges = chain_order(&members, &links);
        let id = ribbons.len();
        for &f in &edges {
            ribbon_of_edge[f] = Some(id);
        }
        let [u, v] = g.endpoints(e);
        ribbons.push(Ribbon { edges, endpoints: (u.min(v), u.max(v)) });
    }
    RibbonDecomposition { ribbons, ribbon_of_edge }
}

/// Walks a chain (path, or cycle when the ribbon closes up) from a canonical
/// start: the lower-id end of a path, or the lowest edge of a cycle heading
/// towards its lower-id neighbour.
fn chain_order(members: &[EdgeId], links: &[Vec<EdgeId>]) -> Vec<EdgeId> {
    if members.len() == 1 {
        return members.to_vec();
    }
    let start = members
        .iter()
        .copied()
        .filter(|&e| links[e].len() < 2)
        .min()
        .unwrap_or_else(|| *members.iter().min().unwrap());
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = links[cur].iter().copied().filter(|&h| h != prev && !order.contains(&h)).min();
        match next {
            Some(h) => {
                prev = cur;
                cur = h;
                order.push(h);
            }
            None => break,
        }
    }
    debug_assert_eq!(order.len(), members.len());
    order
}

/// Every weighted median of the ribbon order, in chain order. When the ribbon
/// has positive weight only positive-weight medians are returned.
pub fn central_edges(ribbon: &Ribbon, z: &[f64]) -> Result<Vec<EdgeId>, RibbonError> {
    if ribbon.edges.is_empty() {
        return Err(RibbonError::EmptyRibbon);
    }
    let total = ribbon.weight(z);
    let half = total / 2.0;
    let mut before = 0.0;
    let mut out = Vec::new();
    for &e in &ribbon.edges {
        let after = total - before - z[e];
        if approx_le(before, half) && approx_le(after, half) && (total <= 0.0 || z[e] > 0.0) {
            out.push(e);
        }
        before += z[e];
    }
    debug_assert!(!out.is_empty());
    Ok(out)
}

/// The central edge used by the contraction sequence: the lowest-id median.
pub fn central_edge(ribbon: &Ribbon, z: &[f64]) -> Result<EdgeId, RibbonError> {
    Ok(*central_edges(ribbon, z)?.iter().min().unwrap())
}

/// Heaviest ribbon; ties go to the ribbon with the smaller minimum edge id.
pub fn max_weight_ribbon<'a>(d: &'a RibbonDecomposition, z: &[f64]) -> Result<&'a Ribbon, RibbonError> {
    let mut best: Option<(&Ribbon, f64)> = None;
    for r in &d.ribbons {
        let w = r.weight(z);
        best = match best {
            None => Some((r, w)),
            Some((b, bw)) => {
                let tie = (w - bw).abs() <= 1e-12 * (1.0 + w.abs().max(bw.abs()));
                if (!tie && w > bw) || (tie && r.min_edge() < b.min_edge()) {
                    Some((r, w))
                } else {
                    Some((b, bw))
                }
            }
        };
    }
    best.map(|(r, _)| r).ok_or(RibbonError::NoRibbons)
}

/// One contraction step, with edges reported in original ids.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionStep {
    pub vertices: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub ribbon_count: usize,
    pub ribbon: Vec<EdgeId>,
    pub weight: f64,
    pub central: EdgeId,
}

impl ContractionStep {
    /// Ribbon-count bound `3|V| - 3 chi` for this graph.
    pub fn ribbon_bound(&self) -> i64 {
        3 * self.vertices as i64 - 3 * self.euler_characteristic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionTrace {
    pub steps: Vec<ContractionStep>,
    /// Composition of all step maps, from the input graph to the last graph.
    pub map: ContractionMap,
    pub final_vertices: usize,
}

impl ContractionTrace {
    /// Audit lines `step i |V_i| ribbon_size z(R_i) central_edge`.
    pub fn audit_lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| format!("step {i} {} {} {} {}", s.vertices, s.ribbon.len(), s.weight, s.central))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakThinForest {
    /// Central edges in original ids, one per step.
    pub edges: Vec<EdgeId>,
    pub components: usize,
    /// Component (final vertex) of every original vertex.
    pub component_of: Vec<usize>,
}

/// Contracts the heaviest ribbon until at most `max(target, 1)` vertices
/// remain, keeping the central edge of every contracted ribbon.
///
/// `z` is indexed by edge of `g`. Every cut of `g` must carry weight at
/// least 2; a step whose ribbon weighs less than 2/5 reports the breach.
pub fn contraction_sequence(
    g: &Embedding,
    z: &[f64],
    target: usize,
) -> Result<(ContractionTrace, WeakThinForest), RibbonError> {
    if z.len() != g.num_edges() {
        return Err(RibbonError::WeightLength { expected: g.num_edges(), got: z.len() });
    }
    let stop = target.max(1);
    let mut cur = g.clone();
    let mut origin: Vec<EdgeId> = (0..g.num_edges()).collect();
    let mut total = ContractionMap::identity(g.num_vertices(), g.num_edges(), |e| g.is_loop(e));
    let mut steps = Vec::new();
    let mut forest = Vec::new();

    while cur.num_vertices() > stop {
        let faces = cur.faces();
        let decomposition = ribbon_decomposition(&cur, &faces);
        let weights: Vec<f64> = origin.iter().map(|&e| z[e]).collect();
        let ribbon = max_weight_ribbon(&decomposition, &weights)?;
        let weight = ribbon.weight(&weights);
        if weight < MIN_RIBBON_WEIGHT - RIBBON_WEIGHT_TOL {
            return Err(RibbonError::CutConditionViolated { step: steps.len(), weight });
        }
        let central = central_edge(ribbon, &weights)?;
        steps.push(ContractionStep {
            vertices: cur.num_vertices(),
            edges: cur.num_edges(),
            euler_characteristic: cur.euler_characteristic_with(&faces),
            ribbon_count: decomposition.len(),
            ribbon: ribbon.edges.iter().map(|&e| origin[e]).collect(),
            weight,
            central: origin[central],
        });
        forest.push(origin[central]);

        let mut order = vec![central];
        order.extend(ribbon.edges.iter().copied().filter(|&e| e != central));
        let (next, map) = cur.contract_edges(&order)?;
        let mut next_origin = vec![usize::MAX; next.num_edges()];
        for (e, fate) in map.edge_fate.iter().enumerate() {
            if let Some(ne) = fate.survivor() {
                next_origin[ne] = origin[e];
            }
        }
        total = total.then(&map);
        origin = next_origin;
        cur = next;
    }

    let final_vertices = cur.num_vertices();
    let weak = WeakThinForest {
        edges: forest,
        components: final_vertices,
        component_of: total.vertex_map.clone(),
    };
    Ok((ContractionTrace { steps, map: total, final_vertices }, weak))
}

/// `|T ∩ δ(U)|` for an edge multiset `T`; `in_u` marks the vertices of `U`.
pub fn cut_crossing(g: &Embedding, t: &[EdgeId], in_u: &[bool]) -> Result<usize, RibbonError> {
    check_cut(in_u)?;
    Ok(t.iter()
        .filter(|&&e| {
            let [a, b] = g.endpoints(e);
            in_u[a] != in_u[b]
        })
        .count())
}

/// `|T ∩ δ(U)| / z(δ(U))`; zero for an uncrossed cut, infinite when a
/// weightless cut is crossed.
pub fn thinness_ratio(g: &Embedding, t: &[EdgeId], z: &[f64], in_u: &[bool]) -> Result<f64, RibbonError> {
    let crossing = cut_crossing(g, t, in_u)?;
    let weight: f64 = (0..g.num_edges())
        .filter(|&e| {
            let [a, b] = g.endpoints(e);
            in_u[a] != in_u[b]
        })
        .map(|e| z[e])
        .sum();
    Ok(match (crossing, weight > 0.0) {
        (0, _) => 0.0,
        (_, true) => crossing as f64 / weight,
        (_, false) => f64::INFINITY,
    })
}

fn check_cut(in_u: &[bool]) -> Result<(), RibbonError> {
    let inside = in_u.iter().filter(|&&b| b).count();
    if inside == 0 || inside == in_u.len() {
        return Err(RibbonError::DegenerateCut);
    }
    Ok(())
}
