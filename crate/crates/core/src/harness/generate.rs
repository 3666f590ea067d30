use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::surface_graph::{Arc, EdgeEnd, EmbeddedDigraph, Embedding, Sign};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenMode {
    /// Spanning tree plus chords, each drawn inside an existing face.
    Planar,
    /// Uniform random rotations; each extra edge gets signature -1 with
    /// the given probability.
    RandomRotation { flip_prob: f64 },
    /// A planar instance with `k` non-tree edges switched to signature -1.
    AddCrosscaps(usize),
}

impl FromStr for GenMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::BadSpec(format!("unknown genus mode `{s}`"));
        match s.split_once(':') {
            None if s == "planar" => Ok(GenMode::Planar),
            None if s == "random-rotation" => Ok(GenMode::RandomRotation { flip_prob: 0.0 }),
            Some(("random-rotation", p)) => {
                let p: f64 = p.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                Ok(GenMode::RandomRotation { flip_prob: p })
            }
            Some(("add-crosscaps", k)) => Ok(GenMode::AddCrosscaps(k.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenMode::Planar => write!(f, "planar"),
            GenMode::RandomRotation { flip_prob } => write!(f, "random-rotation:{flip_prob}"),
            GenMode::AddCrosscaps(k) => write!(f, "add-crosscaps:{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CostModel {
    /// Independent integer costs in `[1, 100]` per arc.
    Uniform,
    /// A base cost in `[1, 100]` per edge; one random direction is
    /// multiplied by `1 + λ` and rounded.
    Skew(f64),
}

impl FromStr for CostModel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "uniform" => Ok(CostModel::Uniform),
            Some(("skew", l)) => match l.parse::<f64>() {
                Ok(l) if l >= 0.0 && l.is_finite() => Ok(CostModel::Skew(l)),
                _ => Err(HarnessError::BadSpec(format!("bad skew factor `{l}`"))),
            },
            _ => Err(HarnessError::BadSpec(format!("unknown cost model `{s}`"))),
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostModel::Uniform => write!(f, "uniform"),
            CostModel::Skew(l) => write!(f, "skew:{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Target edges per vertex; the edge count is `max(n - 1, round(density * n))`.
    pub density: f64,
    pub mode: GenMode,
    pub costs: CostModel,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, mode: GenMode, seed: u64) -> Self {
        Self { n, density: 1.5, mode, costs: CostModel::Uniform, seed }
    }
}

/// Probability that an edge receives both arc directions.
const BOTH_DIRECTIONS: f64 = 0.75;

/// Draws a random embedded instance. Identical specs give identical instances.
pub fn generate(spec: &GenSpec) -> Result<EmbeddedDigraph, HarnessError> {
    if spec.n < 2 {
        return Err(HarnessError::BadSpec(format!("need at least 2 vertices, got {}", spec.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let target_edges = ((spec.density * n as f64).round() as usize).max(n - 1);

    let mut rotation: Vec<Vec<EdgeEnd>> = vec![Vec::new(); n];
    for v in 1..n {
        let p = rng.gen_range(0..v);
        let e = v - 1;
        let at = rng.gen_range(0..=rotation[p].len());
        rotation[p].insert(at, EdgeEnd::new(e, 0));
        rotation[v].push(EdgeEnd::new(e, 1));
    }
    let mut emb = Embedding::new(rotation, vec![Sign::Plus; n - 1])?;

    match spec.mode {
        GenMode::Planar | GenMode::AddCrosscaps(_) => {
            let mut attempts = 0;
            while emb.num_edges() < target_edges && attempts < 50 * target_edges {
                attempts += 1;
                if let Some(next) = planar_chord(&emb, &mut rng) {
                    emb = next;
                }
            }
            if let GenMode::AddCrosscaps(k) = spec.mode {
                let mut chords: Vec<usize> = (n - 1..emb.num_edges()).collect();
                chords.shuffle(&mut rng);
                for &e in chords.iter().take(k) {
                    emb = emb.with_signature(e, emb.signature(e).flip());
                }
            }
        }
        GenMode::RandomRotation { flip_prob } => {
            while emb.num_edges() < target_edges {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                let at_u = rng.gen_range(0..=emb.degree(u));
                let at_v = rng.gen_range(0..=emb.degree(v));
                let sign = if rng.gen_bool(flip_prob) { Sign::Minus } else { Sign::Plus };
                emb = emb.with_edge((u, at_u), (v, at_v), sign)?;
            }
        }
    }

    let mut arcs = Vec::new();
    let mut edge_arcs = Vec::with_capacity(emb.num_edges());
    let mut missing = Vec::new();
    for e in 0..emb.num_edges() {
        let [u, v] = emb.endpoints(e);
        let (c0, c1) = match spec.costs {
            CostModel::Uniform => (rng.gen_range(1..=100) as f64, rng.gen_range(1..=100) as f64),
            CostModel::Skew(l) => {
                let base = rng.gen_range(1..=100) as f64;
                let skewed = (base * (1.0 + l)).round();
                if rng.gen_bool(0.5) {
                    (base, skewed)
                } else {
                    (skewed, base)
                }
            }
        };
        let both = rng.gen_bool(BOTH_DIRECTIONS);
        let forward = rng.gen_bool(0.5);
        let mut slots = [None, None];
        if both || forward {
            slots[0] = Some(arcs.len());
            arcs.push(Arc { tail: u, head: v, cost: c0 });
        } else {
            missing.push((e, 0, c0));
        }
        if both || !forward {
            slots[1] = Some(arcs.len());
            arcs.push(Arc { tail: v, head: u, cost: c1 });
        } else {
            missing.push((e, 1, c1));
        }
        edge_arcs.push(slots);
    }
    // Restore strong connectivity by adding reverse arcs in edge order.
    for (e, slot, cost) in missing {
        if strongly_connected(n, &arcs) {
            break;
        }
        let [u, v] = emb.endpoints(e);
        let (tail, head) = if slot == 0 { (u, v) } else { (v, u) };
        edge_arcs[e][slot] = Some(arcs.len());
        arcs.push(Arc { tail, head, cost });
    }
    Ok(EmbeddedDigraph::new(emb, arcs, edge_arcs)?)
}

fn strongly_connected(n: usize, arcs: &[Arc]) -> bool {
    let reach = |forward: bool| {
        let mut adj = vec![Vec::new(); n];
        for a in arcs {
            if forward {
                adj[a.tail].push(a.head);
            } else {
                adj[a.head].push(a.tail);
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Adds one edge between two corners of a random face so that the face
/// splits in two, keeping the Euler genus. `None` if the draw failed.
fn planar_chord(emb: &Embedding, rng: &mut ChaCha8Rng) -> Option<Embedding> {
    let faces = emb.faces();
    let face = faces.face(rng.gen_range(0..faces.len()));
    if face.len() < 2 {
        return None;
    }
    let i = rng.gen_range(0..face.len());
    let j = rng.gen_range(0..face.len());
    let (hu, hv) = (face.boundary[i], face.boundary[j]);
    let (u, v) = (emb.vertex_of(hu), emb.vertex_of(hv));
    if u == v {
        return None;
    }
    let target = faces.len() + 1;
    let (pu, pv) = (emb.position(hu), emb.position(hv));
    for sign in [Sign::Plus, Sign::Minus] {
        for du in 0..2 {
            for dv in 0..2 {
                let g = emb.with_edge((u, pu + du), (v, pv + dv), sign).ok()?;
                if g.faces().len() == target {
                    return Some(g);
                }
            }
        }
    }
    None
}
