use std::fmt;
use std::str::FromStr;

use super::HarnessError;
use crate::cuts::{exhaustive_cuts, sample_cuts};
use crate::surface_graph::{EdgeId, Embedding};

/// Largest vertex count for which exhaustive auditing is allowed.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Exhaustive,
    Sample { cuts: usize, seed: u64 },
    Off,
}

impl AuditMode {
    /// Exhaustive for small graphs, 10⁴ sampled cuts otherwise.
    pub fn default_for(n: usize) -> Self {
        if n <= 12 {
            AuditMode::Exhaustive
        } else {
            AuditMode::Sample { cuts: 10_000, seed: 0 }
        }
    }
}

impl FromStr for AuditMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "exhaustive" => Ok(AuditMode::Exhaustive),
            None if s == "off" => Ok(AuditMode::Off),
            Some(("sample", k)) => k
                .parse()
                .map(|cuts| AuditMode::Sample { cuts, seed: 0 })
                .map_err(|_| HarnessError::BadSpec(format!("bad sample count `{k}`"))),
            _ => Err(HarnessError::BadSpec(format!("unknown audit mode `{s}`"))),
        }
    }
}

impl fmt::Display for AuditMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditMode::Exhaustive => write!(f, "exhaustive"),
            AuditMode::Sample { cuts, .. } => write!(f, "sample:{cuts}"),
            AuditMode::Off => write!(f, "off"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutAudit {
    pub cuts_audited: usize,
    /// Max over cuts of `|W ∩ δ(U)| / z(δ(U))`; infinite if some cut of
    /// zero weight is crossed.
    pub max_ratio: f64,
    /// Min over cuts of `z(δ(U))`.
    pub min_weight: f64,
    /// A cut attaining `max_ratio`.
    pub worst_cut: Option<Vec<bool>>,
}

/// Audits the multiset of edges `set` (repeats count) against weights `z`.
pub fn audit_cuts(emb: &Embedding, set: &[EdgeId], z: &[f64], mode: AuditMode) -> Result<CutAudit, HarnessError> {
    let n = emb.num_vertices();
    let cuts: Box<dyn Iterator<Item = Vec<bool>>> = match mode {
        AuditMode::Off => Box::new(std::iter::empty()),
        AuditMode::Exhaustive if n > EXHAUSTIVE_MAX_VERTICES => {
            return Err(HarnessError::TooLarge { n, max: EXHAUSTIVE_MAX_VERTICES })
        }
        AuditMode::Exhaustive => Box::new(exhaustive_cuts(n)),
        AuditMode::Sample { cuts, seed } => Box::new(sample_cuts(n, cuts, seed).into_iter()),
    };
    let ends: Vec<[usize; 2]> = (0..emb.num_edges()).map(|e| emb.endpoints(e)).collect();
    let mut audit = CutAudit { cuts_audited: 0, max_ratio: 0.0, min_weight: f64::INFINITY, worst_cut: None };
    for in_u in cuts {
        let crosses = |e: usize| in_u[ends[e][0]] != in_u[ends[e][1]];
        let weight: f64 = (0..ends.len()).filter(|&e| crosses(e)).map(|e| z[e]).sum();
        let count = set.iter().filter(|&&e| crosses(e)).count();
        let ratio = match (count, weight > 0.0) {
            (0, _) => 0.0,
            (_, true) => count as f64 / weight,
            (_, false) => f64::INFINITY,
        };
        audit.cuts_audited += 1;
        audit.min_weight = audit.min_weight.min(weight);
        if ratio > audit.max_ratio || audit.worst_cut.is_none() {
            audit.max_ratio = audit.max_ratio.max(ratio);
            audit.worst_cut = Some(in_u);
        }
    }
    Ok(audit)
}
