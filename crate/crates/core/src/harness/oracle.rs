use super::HarnessError;
use crate::paths::ShortestPaths;
use crate::surface_graph::{EmbeddedDigraph, VertexId};

/// Largest instance the exact oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    /// Minimum cost of a closed walk visiting every vertex.
    pub opt: f64,
    /// Visiting order starting at vertex 0; consecutive vertices are joined
    /// by shortest paths.
    pub order: Vec<VertexId>,
}

/// Exact ATSP optimum by dynamic programming over subsets of the metric closure.
pub fn brute_force_atsp(g: &EmbeddedDigraph) -> Result<OracleResult, HarnessError> {
    let n = g.num_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(HarnessError::TooLarge { n, max: ORACLE_MAX_VERTICES });
    }
    if n == 1 {
        return Ok(OracleResult { opt: 0.0, order: vec![0] });
    }
    let sp = ShortestPaths::new(g);
    let full = 1usize << n;
    // best[mask][v]: cheapest path from 0 through `mask` ending at v
    let mut best = vec![f64::INFINITY; full * n];
    let mut from = vec![usize::MAX; full * n];
    best[n] = 0.0; // mask {0}, at vertex 0
    for mask in 1..full {
        if mask & 1 == 0 {
            continue;
        }
        for v in 0..n {
            let cur = best[mask * n + v];
            if !cur.is_finite() {
                continue;
            }
            for w in 0..n {
                if mask >> w & 1 == 1 {
                    continue;
                }
                let next = mask | 1 << w;
                let cand = cur + sp.dist(v, w);
                if cand < best[next * n + w] {
                    best[next * n + w] = cand;
                    from[next * n + w] = v;
                }
            }
        }
    }
    let last = full - 1;
    let (mut end, mut opt) = (usize::MAX, f64::INFINITY);
    for v in 1..n {
        let total = best[last * n + v] + sp.dist(v, 0);
        if total < opt {
            opt = total;
            end = v;
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut v) = (last, end);
    while v != 0 {
        order.push(v);
        let prev = from[mask * n + v];
        mask &= !(1 << v);
        v = prev;
    }
    order.push(0);
    order.reverse();
    Ok(OracleResult { opt, order })
}
