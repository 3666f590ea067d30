//! Assembly of the final tour: one representative per closed walk, an ATSP
//! instance on the representatives, and composition with shortcutting.

use serde::Serialize;
use thiserror::Error;

use crate::circulation::{
    hoffman_bounds, min_cost_integer_circulation, orient_forest, walks_from_circulation, CirculationCertificate,
    CirculationError, Walk, WalkCover,
};
use crate::harness::{AuditMode, HarnessError};
use crate::heldkarp_lp::{normalize_metric, solve_held_karp, symmetrize, LpConfig, LpError};
use crate::paths::ShortestPaths;
use crate::surface_graph::{ArcId, EmbeddedDigraph, VertexId};
use crate::thin_forest::{compute_thin_forest, ThinForestConfig, ThinForestError, THIN_ALPHA};

/// Default largest representative count solved exactly.
pub const DEFAULT_DP_CAP: usize = 24;

const COST_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TourError {
    #[error("{k} components exceed the exact DP cap of {cap}")]
    TooManyComponents { k: usize, cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("lp stage: {0}")]
    Lp(#[from] LpError),
    #[error("thin forest stage: {0}")]
    ThinForest(#[from] ThinForestError),
    #[error("circulation stage: {0}")]
    Circulation(#[from] CirculationError),
    #[error("tour stage: {0}")]
    Tour(#[from] TourError),
    #[error("audit: {0}")]
    Audit(#[from] HarnessError),
    #[error("internal check failed in {stage} stage: {detail}")]
    Check { stage: &'static str, detail: String },
}

/// The minimum vertex of every walk.
pub fn representatives(g: &EmbeddedDigraph, cover: &WalkCover) -> Vec<VertexId> {
    cover.walks.iter().map(|w| w.vertices(g).into_iter().min().unwrap()).collect()
}

/// Complete metric instance on the representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractedInstance {
    pub reps: Vec<VertexId>,
    /// `cost[i][j]`: shortest directed path cost from `reps[i]` to `reps[j]`.
    pub cost: Vec<Vec<f64>>,
    /// The arcs of those shortest paths.
    pub paths: Vec<Vec<Vec<ArcId>>>,
}

impl ContractedInstance {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Cost of visiting the representatives in `order` and returning.
    pub fn tour_cost(&self, order: &[usize]) -> f64 {
        (0..order.len()).map(|i| self.cost[order[i]][order[(i + 1) % order.len()]]).sum()
    }
}

pub fn contracted_instance(sp: &ShortestPaths, reps: &[VertexId]) -> ContractedInstance {
    let cost = reps.iter().map(|&u| reps.iter().map(|&v| sp.dist(u, v)).collect()).collect();
    let paths = reps.iter().map(|&u| reps.iter().map(|&v| sp.path(u, v)).collect()).collect();
    ContractedInstance { reps: reps.to_vec(), cost, paths }
}

/// A cyclic order of representative indices, starting with index 0.
#[derive(Clone, Debug, PartialEq)]
pub struct RepTour {
    pub order: Vec<usize>,
    pub cost: f64,
}

/// Exact optimum by the subset dynamic program.
pub fn exact_atsp_dp(inst: &ContractedInstance, cap: usize) -> Result<RepTour, TourError> {
    let k = inst.len();
    if k > cap {
        return Err(TourError::TooManyComponents { k, cap });
    }
    if k <= 1 {
        return Ok(RepTour { order: (0..k).collect(), cost: 0.0 });
    }
    // Index j of the table stands for representative j + 1; 0 is the start.
    let m = k - 1;
    let full = 1usize << m;
    let c = &inst.cost;
    let mut best = vec![f64::INFINITY; full * m];
    let mut from = vec![u8::MAX; full * m];
    for j in 0..m {
        best[(1 << j) * m + j] = c[0][j + 1];
    }
    for mask in 1..full {
        for j in 0..m {
            let cur = best[mask * m + j];
            if mask >> j & 1 == 0 || !cur.is_finite() {
                continue;
            }
            for l in 0..m {
                if mask >> l & 1 == 1 {
                    continue;
                }
                let next = (mask | 1 << l) * m + l;
                let cand = cur + c[j + 1][l + 1];
                if cand < best[next] {
                    best[next] = cand;
                    from[next] = j as u8;
                }
            }
        }
    }
    let last = full - 1;
    let (mut end, mut cost) = (0, f64::INFINITY);
    for j in 0..m {
        let total = best[last * m + j] + c[j + 1][0];
        if total < cost {
            cost = total;
            end = j;
        }
    }
    let mut order = Vec::with_capacity(k);
    let mut mask = last;
    let mut j = end;
    loop {
        order.push(j + 1);
        let prev = from[mask * m + j];
        mask &= !(1 << j);
        if mask == 0 {
            break;
        }
        j = prev as usize;
    }
    order.push(0);
    order.reverse();
    Ok(RepTour { order, cost })
}

/// Pluggable solver for the representative instance.
pub trait AtspHook {
    fn name(&self) -> &str;
    fn tour(&self, inst: &ContractedInstance) -> RepTour;
}

/// Nearest neighbour from representative 0 followed by pairwise position
/// exchanges while they strictly improve the cost. No approximation
/// guarantee.
#[derive(Clone, Copy, Debug, Default)]
pub struct NearestNeighborHook;

impl AtspHook for NearestNeighborHook {
    fn name(&self) -> &str {
        "nearest-neighbor+exchange"
    }

    fn tour(&self, inst: &ContractedInstance) -> RepTour {
        let k = inst.len();
        if k == 0 {
            return RepTour { order: Vec::new(), cost: 0.0 };
        }
        let mut order = vec![0];
        let mut used = vec![false; k];
        used[0] = true;
        for _ in 1..k {
            let last = *order.last().unwrap();
            let next = (0..k)
                .filter(|&j| !used[j])
                .min_by(|&a, &b| inst.cost[last][a].total_cmp(&inst.cost[last][b]))
                .unwrap();
            used[next] = true;
            order.push(next);
        }
        let mut cost = inst.tour_cost(&order);
        let mut improved = true;
        while improved {
            improved = false;
            for i in 1..k {
                for j in i + 1..k {
                    order.swap(i, j);
                    let cand = inst.tour_cost(&order);
                    if cand < cost - 1e-12 {
                        cost = cand;
                        improved = true;
                    } else {
                        order.swap(i, j);
                    }
                }
            }
        }
        RepTour { order, cost }
    }
}

/// A closed walk given as arcs from `start`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedWalk {
    pub start: VertexId,
    pub arcs: Vec<ArcId>,
}

impl ClosedWalk {
    pub fn cost(&self, g: &EmbeddedDigraph) -> f64 {
        self.arcs.iter().map(|&a| g.arc(a).cost).sum()
    }

    /// Vertices in walk order, start first, final return omitted.
    pub fn vertex_sequence(&self, g: &EmbeddedDigraph) -> Vec<VertexId> {
        let mut out = vec![self.start];
        for &a in self.arcs.iter().take(self.arcs.len().saturating_sub(1)) {
            out.push(g.arc(a).head);
        }
        out
    }

    /// Vertices in order of first visit.
    pub fn first_visits(&self, g: &EmbeddedDigraph) -> Vec<VertexId> {
        let mut seen = vec![false; g.num_vertices()];
        self.vertex_sequence(g)
            .into_iter()
            .filter(|&v| !std::mem::replace(&mut seen[v], true))
            .collect()
    }

    /// Closed, made of consecutive arcs, and visiting every vertex.
    pub fn validate(&self, g: &EmbeddedDigraph) -> Result<(), String> {
        let mut at = self.start;
        for &a in &self.arcs {
            let arc = g.arcs().get(a).ok_or_else(|| format!("unknown arc {a}"))?;
            if arc.tail != at {
                return Err(format!("arc {a} leaves {} but the walk is at {at}", arc.tail));
            }
            at = arc.head;
        }
        if at != self.start {
            return Err(format!("walk ends at {at}, not at its start {}", self.start));
        }
        let visited = self.first_visits(g).len();
        if visited != g.num_vertices() {
            return Err(format!("walk visits {visited} of {} vertices", g.num_vertices()));
        }
        Ok(())
    }
}

fn rotate_to(walk: &Walk, g: &EmbeddedDigraph, v: VertexId) -> Vec<ArcId> {
    match walk.arcs.iter().position(|&a| g.arc(a).tail == v) {
        Some(p) => walk.arcs[p..].iter().chain(&walk.arcs[..p]).copied().collect(),
        None => Vec::new(),
    }
}

/// Joins every walk into the representative tour at its representative.
pub fn compose(g: &EmbeddedDigraph, cover: &WalkCover, inst: &ContractedInstance, tour: &RepTour) -> ClosedWalk {
    let mut arcs = Vec::new();
    for (p, &i) in tour.order.iter().enumerate() {
        arcs.extend(rotate_to(&cover.walks[i], g, inst.reps[i]));
        if tour.order.len() > 1 {
            let j = tour.order[(p + 1) % tour.order.len()];
            arcs.extend(&inst.paths[i][j]);
        }
    }
    let start = tour.order.first().map_or(0, |&i| inst.reps[i]);
    ClosedWalk { start, arcs }
}

/// Replaces the walk by shortest paths between its first visits in order,
/// repeating while that strictly lowers the cost. Running it on its own
/// output changes nothing.
pub fn shortcut(g: &EmbeddedDigraph, sp: &ShortestPaths, walk: &ClosedWalk) -> ClosedWalk {
    let mut cur = walk.clone();
    let mut cost = cur.cost(g);
    loop {
        let order = cur.first_visits(g);
        let mut arcs = Vec::new();
        if order.len() > 1 {
            for (i, &u) in order.iter().enumerate() {
                arcs.extend(sp.path(u, order[(i + 1) % order.len()]));
            }
        }
        let cand = ClosedWalk { start: cur.start, arcs };
        let cand_cost = cand.cost(g);
        if cand_cost < cost - 1e-9 {
            cur = cand;
            cost = cand_cost;
        } else {
            return cur;
        }
    }
}

pub fn compose_and_shortcut(
    g: &EmbeddedDigraph,
    sp: &ShortestPaths,
    cover: &WalkCover,
    inst: &ContractedInstance,
    tour: &RepTour,
) -> ClosedWalk {
    shortcut(g, sp, &compose(g, cover, inst, tour))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub lp: LpConfig,
    pub dp_cap: usize,
    /// Cut audit of the thin forest; `None` picks by instance size.
    pub thin_audit: Option<AuditMode>,
    /// Seed for sampled cut audits.
    pub seed: u64,
    pub early_exit: bool,
    /// Thinness constant used for the circulation bounds.
    pub alpha_prime: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            lp: LpConfig::default(),
            dp_cap: DEFAULT_DP_CAP,
            thin_audit: None,
            seed: 0,
            early_exit: false,
            alpha_prime: THIN_ALPHA,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForestReport {
    pub k: usize,
    pub alpha_hat: Option<f64>,
    pub s_hat: f64,
    pub cost: f64,
    pub iteration: usize,
    pub rounds: usize,
    pub cuts_audited: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalksReport {
    #[serde(rename = "k'")]
    pub k_prime: usize,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CirculationReport {
    pub cost: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub vertices: usize,
    pub arcs: usize,
    pub euler_genus: usize,
    pub lp: f64,
    pub lp_rounds: usize,
    pub forest: ForestReport,
    pub walks: WalksReport,
    pub circulation: CirculationReport,
    pub dp_cost: f64,
    /// `"exact-dp"` or the hook name.
    pub rep_solver: String,
    pub tour_cost: f64,
    /// `circulation.bound + circulation.slack + dp_cost`.
    pub bound: f64,
    pub ratio_vs_lp: Option<f64>,
    /// Every audited constant is within its proven limit and the DP path was used.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Closed spanning walk in the input instance.
    pub tour: ClosedWalk,
    pub certificate: Certificate,
    pub audit: Vec<String>,
    /// Arc values of the LP optimum, on the normalized instance.
    pub x: Vec<f64>,
}

impl Solution {
    /// Vertices in order of first visit: the Hamiltonian tour on the metric closure.
    pub fn permutation(&self, g: &EmbeddedDigraph) -> Vec<VertexId> {
        self.tour.first_visits(g)
    }
}

fn check(ok: bool, stage: &'static str, detail: impl FnOnce() -> String) -> Result<(), SolveError> {
    if ok {
        Ok(())
    } else {
        Err(SolveError::Check { stage, detail: detail() })
    }
}

/// Runs the whole pipeline with the exact DP, falling back to `hook` when
/// the representatives exceed the DP cap.
pub fn solve(g: &EmbeddedDigraph, config: &SolveConfig) -> Result<Solution, SolveError> {
    solve_with_hook(g, config, &NearestNeighborHook)
}

pub fn solve_with_hook(g: &EmbeddedDigraph, config: &SolveConfig, hook: &dyn AtspHook) -> Result<Solution, SolveError> {
    let n = g.num_vertices();
    let mut audit = Vec::new();
    let h = normalize_metric(g);
    let sp = ShortestPaths::new(&h);

    let lp = solve_held_karp(&h, &config.lp)?;
    audit.push(format!("lp objective={} rounds={} cuts={}", lp.objective, lp.rounds, lp.cuts.len()));
    let z = symmetrize(&h, &lp.x);

    let euler_genus = g.embedding().euler_genus();
    let audit_mode = match config.thin_audit.unwrap_or_else(|| AuditMode::default_for(n)) {
        AuditMode::Sample { cuts, .. } => AuditMode::Sample { cuts, seed: config.seed },
        mode => mode,
    };
    let forest_config = ThinForestConfig { target: euler_genus.max(1), audit: audit_mode, early_exit: config.early_exit };
    let forest = compute_thin_forest(&h, lp.objective, &z, &forest_config)?;
    audit.extend(forest.steps.iter().cloned());
    audit.extend(forest.audit_lines());
    check(forest.components <= euler_genus.max(1), "thin forest", || {
        format!("{} components for Euler genus {euler_genus}", forest.components)
    })?;

    let oriented = orient_forest(&h, &forest.edges)?;
    let bounds = hoffman_bounds(h.num_arcs(), &oriented, &lp.x, config.alpha_prime);
    let circulation = min_cost_integer_circulation(&h, &bounds)?;
    circulation.verify(&h, &bounds).map_err(|detail| SolveError::Check { stage: "circulation", detail })?;
    let cover = walks_from_circulation(&h, &circulation)?;
    let circ_cert = CirculationCertificate::new(&h, &bounds, cover.cost);
    audit.push(circ_cert.line());
    check(cover.len() <= forest.components, "circulation", || {
        format!("{} walks for {} forest components", cover.len(), forest.components)
    })?;

    let reps = representatives(&h, &cover);
    let inst = contracted_instance(&sp, &reps);
    let (rep_tour, rep_solver) = match exact_atsp_dp(&inst, config.dp_cap) {
        Ok(t) => (t, "exact-dp".to_string()),
        Err(TourError::TooManyComponents { .. }) => (hook.tour(&inst), hook.name().to_string()),
    };
    audit.push(format!("reps k={} solver={} cost={}", reps.len(), rep_solver, rep_tour.cost));

    let walk = compose_and_shortcut(&h, &sp, &cover, &inst, &rep_tour);
    walk.validate(&h).map_err(|detail| SolveError::Check { stage: "tour", detail })?;
    let normalized_cost = walk.cost(&h);

    // Each normalized arc stands for a shortest path of the input instance.
    let sp_in = ShortestPaths::new(g);
    let arcs = walk.arcs.iter().flat_map(|&a| sp_in.path(h.arc(a).tail, h.arc(a).head)).collect();
    let tour = ClosedWalk { start: walk.start, arcs };
    tour.validate(g).map_err(|detail| SolveError::Check { stage: "tour", detail })?;
    let tour_cost = tour.cost(g);

    let bound = circ_cert.bound + circ_cert.slack + rep_tour.cost;
    let tol = COST_TOL * (1.0 + bound.abs());
    check(tour_cost <= normalized_cost + tol && tour_cost <= bound + tol, "tour", || {
        format!("tour cost {tour_cost} exceeds walks + representative tour {bound}")
    })?;
    audit.push(format!("tour cost={tour_cost} bound={bound}"));

    let certified = rep_solver == "exact-dp" && forest.certified() && circ_cert.slack <= tol;
    let ratio_vs_lp = if lp.objective > 0.0 {
        Some(tour_cost / lp.objective)
    } else {
        (tour_cost == 0.0).then_some(1.0)
    };
    let certificate = Certificate {
        vertices: n,
        arcs: g.num_arcs(),
        euler_genus,
        lp: lp.objective,
        lp_rounds: lp.rounds,
        forest: ForestReport {
            k: forest.components,
            alpha_hat: forest.alpha_hat,
            s_hat: forest.s_hat,
            cost: forest.cost,
            iteration: forest.iteration,
            rounds: forest.rounds.len(),
            cuts_audited: forest.cuts_audited,
        },
        walks: WalksReport { k_prime: cover.len(), cost: cover.cost },
        circulation: CirculationReport { cost: circ_cert.cost, bound: circ_cert.bound, slack: circ_cert.slack },
        dp_cost: rep_tour.cost,
        rep_solver,
        tour_cost,
        bound,
        ratio_vs_lp,
        certified,
    };
    Ok(Solution { tour, certificate, audit, x: lp.x })
}
