//! Held-Karp LP over the arcs of an instance, solved by cutting planes.
//!
//! The LP keeps flow conservation at every vertex and the cut constraints
//! `x(δ⁺(U)) >= 1`, separated lazily with max-flow computations from vertex
//! 0. Degree equalities are deliberately absent.

mod simplex;

use std::collections::HashSet;

use thiserror::Error;

use crate::maxflow::FlowNetwork;
use crate::paths::ShortestPaths;
use crate::surface_graph::{EmbeddedDigraph, GraphError};

pub use simplex::{DenseSimplex, LinearProgram, LpBackend, LpOptimum, Row, RowKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
    #[error("no convergence after {rounds} separation rounds")]
    SolverStall { rounds: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpConfig {
    /// Feasibility tolerance for cut constraints.
    pub tol: f64,
    /// Cap on separation rounds; `None` means `10·|A|`.
    pub max_rounds: Option<usize>,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self { tol: 1e-6, max_rounds: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    /// One value per arc.
    pub x: Vec<f64>,
    pub objective: f64,
    pub rounds: usize,
    pub pivots: usize,
    /// Vertex sets `U` whose constraint `x(δ⁺(U)) >= 1` is in the final LP.
    pub cuts: Vec<Vec<bool>>,
}

impl LpSolution {
    /// `x <arc> <value>` lines.
    pub fn dump(&self) -> String {
        self.x.iter().enumerate().map(|(a, v)| format!("x {a} {v:?}\n")).collect()
    }
}

/// Per-edge symmetrized weights `z(uv) = x(u→v) + x(v→u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymWeights {
    pub z: Vec<f64>,
}

/// Replaces every arc cost by the shortest-path distance from its tail to its head.
pub fn normalize_metric(g: &EmbeddedDigraph) -> EmbeddedDigraph {
    let sp = ShortestPaths::new(g);
    let costs: Vec<f64> = g.arcs().iter().map(|a| sp.dist(a.tail, a.head)).collect();
    g.with_costs(&costs).expect("shortest-path costs are valid")
}

/// `x(δ⁺(U))`.
pub fn out_flow(g: &EmbeddedDigraph, x: &[f64], in_u: &[bool]) -> f64 {
    g.arcs().iter().zip(x).filter(|(a, _)| in_u[a.tail] && !in_u[a.head]).map(|(_, v)| v).sum()
}

/// Largest `|x(δ⁺(v)) − x(δ⁻(v))|` over all vertices.
pub fn conservation_residual(g: &EmbeddedDigraph, x: &[f64]) -> f64 {
    let mut balance = vec![0.0; g.num_vertices()];
    for (a, v) in g.arcs().iter().zip(x) {
        balance[a.tail] += v;
        balance[a.head] -= v;
    }
    balance.into_iter().fold(0.0, |m, b| m.max(b.abs()))
}

fn violated_cuts(g: &EmbeddedDigraph, x: &[f64], tol: f64, first_only: bool) -> Vec<Vec<bool>> {
    let n = g.num_vertices();
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    for t in 1..n {
        for (s, sink) in [(0, t), (t, 0)] {
            let mut net = FlowNetwork::new(n);
            for (a, &v) in g.arcs().iter().zip(x) {
                if a.tail != a.head && v > 0.0 {
                    net.add_edge(a.tail, a.head, v);
                }
            }
            if net.max_flow(s, sink) < 1.0 - tol {
                let side = net.reachable_from(s);
                if seen.insert(side.clone()) {
                    found.push(side);
                    if first_only {
                        return found;
                    }
                }
            }
        }
    }
    found
}

/// Some `U` with `x(δ⁺(U)) < 1 − tol`, if one exists.
pub fn separate_subtour(g: &EmbeddedDigraph, x: &[f64], tol: f64) -> Option<Vec<bool>> {
    violated_cuts(g, x, tol, true).pop()
}

pub fn solve_held_karp(g: &EmbeddedDigraph, config: &LpConfig) -> Result<LpSolution, LpError> {
    solve_held_karp_with(g, config, &mut DenseSimplex::default())
}

pub fn solve_held_karp_with(
    g: &EmbeddedDigraph,
    config: &LpConfig,
    backend: &mut dyn LpBackend,
) -> Result<LpSolution, LpError> {
    let n = g.num_vertices();
    let m = g.num_arcs();
    let max_rounds = config.max_rounds.unwrap_or(10 * m.max(1));
    let mut lp = LinearProgram::new(g.arcs().iter().map(|a| a.cost).collect());
    // Conservation at vertex 0 follows from the others.
    for v in 1..n {
        let mut coeffs = Vec::new();
        for (a, arc) in g.arcs().iter().enumerate() {
            if arc.tail == arc.head {
                continue;
            }
            if arc.tail == v {
                coeffs.push((a, 1.0));
            } else if arc.head == v {
                coeffs.push((a, -1.0));
            }
        }
        lp.add_row(coeffs, RowKind::Eq, 0.0);
    }
    let mut cuts: Vec<Vec<bool>> = Vec::new();
    let mut known: HashSet<Vec<bool>> = HashSet::new();
    let mut add_cut = |lp: &mut LinearProgram, cuts: &mut Vec<Vec<bool>>, in_u: Vec<bool>| {
        if !known.insert(in_u.clone()) {
            return false;
        }
        let coeffs = g
            .arcs()
            .iter()
            .enumerate()
            .filter(|(_, a)| in_u[a.tail] && !in_u[a.head])
            .map(|(i, _)| (i, 1.0))
            .collect();
        lp.add_row(coeffs, RowKind::Ge, 1.0);
        cuts.push(in_u);
        true
    };
    if n >= 2 {
        for v in 0..n {
            let in_u = (0..n).map(|w| w == v).collect();
            add_cut(&mut lp, &mut cuts, in_u);
        }
    }
    let mut pivots = 0;
    for round in 1..=max_rounds {
        let opt = backend.solve(&lp)?;
        pivots += opt.pivots;
        let mut x = opt.x;
        x.iter_mut().for_each(|v| {
            if *v < 1e-10 {
                *v = 0.0
            }
        });
        let violated = violated_cuts(g, &x, config.tol, false);
        let mut added = false;
        for in_u in violated {
            added |= add_cut(&mut lp, &mut cuts, in_u);
        }
        if !added {
            let objective = g.arcs().iter().zip(&x).map(|(a, v)| a.cost * v).sum();
            return Ok(LpSolution { x, objective, rounds: round, pivots, cuts });
        }
    }
    Err(LpError::SolverStall { rounds: max_rounds })
}

pub fn symmetrize(g: &EmbeddedDigraph, x: &[f64]) -> SymWeights {
    let z = (0..g.num_edges())
        .map(|e| g.edge_arcs(e).iter().flatten().map(|&a| x[a]).sum())
        .collect();
    SymWeights { z }
}
