#![allow(dead_code)]

use genus_atsp::surface_graph::{Arc, EdgeEnd, EmbeddedDigraph, Embedding, Sign};

/// Cycle `0 - 1 - ... - n-1 - 0` embedded in the plane. Edge `i` joins
/// `i` and `i+1`; `forward[i]` and `backward[i]` are the costs of
/// `i -> i+1` and `i+1 -> i` (`None` drops the arc).
pub fn cycle(forward: &[Option<f64>], backward: &[Option<f64>]) -> EmbeddedDigraph {
    let n = forward.len();
    let rotation = (0..n).map(|i| vec![EdgeEnd::new(i, 0), EdgeEnd::new((i + n - 1) % n, 1)]).collect();
    let emb = Embedding::new(rotation, vec![Sign::Plus; n]).unwrap();
    let mut arcs = Vec::new();
    let mut edge_arcs = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let mut slots = [None, None];
        if let Some(c) = forward[i] {
            slots[0] = Some(arcs.len());
            arcs.push(Arc { tail: i, head: j, cost: c });
        }
        if let Some(c) = backward[i] {
            slots[1] = Some(arcs.len());
            arcs.push(Arc { tail: j, head: i, cost: c });
        }
        edge_arcs.push(slots);
    }
    EmbeddedDigraph::new(emb, arcs, edge_arcs).unwrap()
}

pub fn bidirected_cycle(n: usize, cost: f64) -> EmbeddedDigraph {
    cycle(&vec![Some(cost); n], &vec![Some(cost); n])
}

/// Permutation brute force for closed tours over a complete cost matrix,
/// with city 0 fixed first.
pub fn permutation_optimum(cost: &[Vec<f64>]) -> f64 {
    let k = cost.len();
    if k <= 1 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..k).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |p| {
        let mut total = cost[0][p[0]] + cost[p[p.len() - 1]][0];
        for w in p.windows(2) {
            total += cost[w[0]][w[1]];
        }
        best = best.min(total);
    });
    best
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}
