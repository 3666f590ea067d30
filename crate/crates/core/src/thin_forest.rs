//! Iterative reweighting that turns the weak-thin forest construction into
//! a thin spanning forest.
//!
//! Weights live on the grid `1/n²` and are stored as integers scaled by
//! `n²`, so the loop is exact. Each round contracts ribbons under the current
//! weights, records the resulting forest and lowers the weight of its edges
//! by one grid unit. The cheapest forest seen is returned.

use thiserror::Error;

use crate::cuts::stoer_wagner;
use crate::harness::{audit_cuts, AuditMode, HarnessError};
use crate::heldkarp_lp::SymWeights;
use crate::ribbons::{contraction_sequence, RibbonError, WeakThinForest};
use crate::surface_graph::{EdgeId, EmbeddedDigraph};

/// Weak-thinness constant of the ribbon contraction forest.
pub const ALPHA: f64 = 20.0;
/// Thinness constant certified for the final forest, `3·ALPHA`.
pub const THIN_ALPHA: f64 = 3.0 * ALPHA;

const CUT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThinForestError {
    #[error("edge {edge} would get negative weight")]
    NegativeWeight { edge: EdgeId },
    #[error("invariant broken in round {round}: {detail}")]
    InvariantBroken { round: usize, detail: String },
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error(transparent)]
    Audit(#[from] HarnessError),
}

/// Weights `z_i` as integer multiples of `1/n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSchedule {
    pub grid: u64,
    pub scaled: Vec<u64>,
    pub iteration: usize,
    pub rounds: usize,
}

impl WeightSchedule {
    /// `z_0 = 3⌊z·n²⌋/n²`; the floor forgives float noise of 1e-6 grid units.
    pub fn new(z: &[f64], n: usize) -> Self {
        let grid = (n * n) as u64;
        let scaled = z.iter().map(|&w| 3 * (w * grid as f64 + 1e-6).floor().max(0.0) as u64).collect();
        let rounds = ((n * n) as f64 / ALPHA).ceil() as usize;
        Self { grid, scaled, iteration: 0, rounds }
    }

    pub fn weights(&self) -> Vec<f64> {
        self.scaled.iter().map(|&s| s as f64 / self.grid as f64).collect()
    }

    /// Lowers the weight of every edge of `forest` by one grid unit.
    pub fn decrement_on_forest(&self, forest: &[EdgeId]) -> Result<Self, ThinForestError> {
        let mut next = self.clone();
        for &e in forest {
            next.scaled[e] = next.scaled[e].checked_sub(1).ok_or(ThinForestError::NegativeWeight { edge: e })?;
        }
        next.iteration += 1;
        Ok(next)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThinForestConfig {
    /// Stop contracting at `max(target, 1)` vertices; normally the Euler genus.
    pub target: usize,
    pub audit: AuditMode,
    /// Stop at the first forest whose cost is at most the LP objective.
    pub early_exit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub cost: f64,
    /// Global min cut of `z_{i-1}`, the weights the round contracted with.
    pub min_cut: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThinForest {
    pub edges: Vec<EdgeId>,
    /// Number of components `k`.
    pub components: usize,
    pub component_of: Vec<usize>,
    pub cost: f64,
    /// Max `|T ∩ δ(U)| / z(δ(U))` over audited cuts; `None` when not audited.
    pub alpha_hat: Option<f64>,
    pub cuts_audited: usize,
    /// `c(T)` over the LP objective.
    pub s_hat: f64,
    /// 1-based round that produced `T`.
    pub iteration: usize,
    pub rounds: Vec<RoundRecord>,
    /// Max over edges of (rounds containing it) / `z_0` in grid units.
    pub max_charge: f64,
    /// Contraction audit lines of the round that produced `T`.
    pub steps: Vec<String>,
}

impl ThinForest {
    /// `round i cost(T_i) min_cut_slack` lines.
    pub fn audit_lines(&self) -> Vec<String> {
        self.rounds
            .iter()
            .enumerate()
            .map(|(i, r)| format!("round {} {} {}", i + 1, r.cost, r.min_cut - 2.0))
            .collect()
    }

    /// Both thinness constants within `THIN_ALPHA`, relative tolerance 1e-6.
    pub fn certified(&self) -> bool {
        self.s_hat <= THIN_ALPHA * (1.0 + 1e-6) && self.alpha_hat.is_none_or(|a| a <= THIN_ALPHA * (1.0 + 1e-6))
    }
}

fn forest_cost(g: &EmbeddedDigraph, t: &[EdgeId]) -> f64 {
    t.iter().map(|&e| g.edge_cost(e).unwrap_or(0.0)).sum()
}

pub fn compute_thin_forest(
    g: &EmbeddedDigraph,
    objective: f64,
    z: &SymWeights,
    config: &ThinForestConfig,
) -> Result<ThinForest, ThinForestError> {
    let emb = g.embedding();
    let n = g.num_vertices();
    if z.z.len() != g.num_edges() {
        return Err(ThinForestError::WeightLength { expected: g.num_edges(), got: z.z.len() });
    }
    let mut schedule = WeightSchedule::new(&z.z, n);
    let z0 = schedule.scaled.clone();
    let mut charge = vec![0u64; g.num_edges()];
    let mut rounds = Vec::new();
    let mut best: Option<(f64, usize, WeakThinForest, Vec<String>)> = None;

    for round in 1..=schedule.rounds.max(1) {
        let weights = schedule.weights();
        let min_cut = if n >= 2 {
            let edges: Vec<_> = (0..g.num_edges())
                .map(|e| {
                    let [u, v] = emb.endpoints(e);
                    (u, v, weights[e])
                })
                .collect();
            stoer_wagner(n, &edges).0
        } else {
            f64::INFINITY
        };
        if min_cut < 2.0 - CUT_TOL {
            return Err(ThinForestError::InvariantBroken {
                round,
                detail: format!("minimum cut weight {min_cut} below 2"),
            });
        }
        let (trace, weak) = contraction_sequence(emb, &weights, config.target)?;
        let cost = forest_cost(g, &weak.edges);
        rounds.push(RoundRecord { cost, min_cut });
        for &e in &weak.edges {
            charge[e] += 1;
            if charge[e] > z0[e] {
                return Err(ThinForestError::InvariantBroken {
                    round,
                    detail: format!("edge {e} used in {} rounds, z_0 allows {}", charge[e], z0[e]),
                });
            }
        }
        let decrement = schedule.decrement_on_forest(&weak.edges);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, round, weak, trace.audit_lines()));
        }
        if config.early_exit && cost <= objective {
            break;
        }
        schedule = decrement?;
    }

    let (cost, iteration, weak, steps) = best.expect("at least one round runs");
    let WeakThinForest { edges, components, component_of } = weak;
    let audit = audit_cuts(emb, &edges, &z.z, config.audit)?;
    let alpha_hat = (config.audit != AuditMode::Off).then_some(audit.max_ratio);
    let s_hat = if objective > 0.0 {
        cost / objective
    } else if cost == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let max_charge = charge
        .iter()
        .zip(&z0)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &cap)| c as f64 / cap as f64)
        .fold(0.0, f64::max);
    Ok(ThinForest {
        edges,
        components,
        component_of,
        cost,
        alpha_hat,
        cuts_audited: audit.cuts_audited,
        s_hat,
        iteration,
        rounds,
        max_charge,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_graph::fixtures::{bidirected, triangle};

    fn config() -> ThinForestConfig {
        ThinForestConfig { target: 1, audit: AuditMode::Exhaustive, early_exit: false }
    }

    #[test]
    fn schedule_grid_arithmetic() {
        let s = WeightSchedule::new(&[1.0, 0.5, 0.0], 3);
        assert_eq!(s.scaled, vec![27, 12, 0]);
        assert_eq!(s.rounds, 1);
        let t = s.decrement_on_forest(&[0]).unwrap();
        assert_eq!(t.scaled, vec![26, 12, 0]);
        assert_eq!(t.iteration, 1);
        assert_eq!(t.decrement_on_forest(&[2]), Err(ThinForestError::NegativeWeight { edge: 2 }));
    }

    #[test]
    fn triangle_gives_cheap_spanning_tree() {
        let g = bidirected(triangle(), &[1.0; 6]);
        let z = SymWeights { z: vec![1.0; 3] };
        let t = compute_thin_forest(&g, 3.0, &z, &config()).unwrap();
        assert_eq!(t.edges.len(), 2);
        assert_eq!(t.components, 1);
        assert_eq!(t.cost, 2.0);
        assert!(t.certified());
        assert_eq!(t.cuts_audited, 3);
        assert!(t.max_charge <= 1.0);
    }

    #[test]
    fn rejects_weights_below_the_cut_condition() {
        let g = bidirected(triangle(), &[1.0; 6]);
        let z = SymWeights { z: vec![0.2; 3] };
        assert!(matches!(
            compute_thin_forest(&g, 3.0, &z, &config()),
            Err(ThinForestError::InvariantBroken { round: 1, .. })
        ));
    }
}
