//! Cut enumeration, sampling and exact global minimum cuts.
//!
//! A cut is described by a membership vector `in_u`. Enumerated and sampled
//! cuts never contain vertex 0, so each unordered cut appears once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every non-trivial cut of an `n`-vertex graph as `U ⊆ {1, ..., n-1}`,
/// `U` non-empty. Yields `2^(n-1) - 1` cuts.
pub fn exhaustive_cuts(n: usize) -> impl Iterator<Item = Vec<bool>> {
    assert!(n <= 63, "exhaustive enumeration limited to 63 vertices");
    let total: u64 = if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 };
    (1..=total).map(move |mask| (0..n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect())
}

/// `k` uniformly random non-trivial cuts, reproducible from `seed`.
pub fn sample_cuts(n: usize, k: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k);
    if n < 2 {
        return out;
    }
    while out.len() < k {
        let u: Vec<bool> = (0..n).map(|v| v > 0 && rng.gen_bool(0.5)).collect();
        if u.iter().any(|&b| b) {
            out.push(u);
        }
    }
    out
}

/// Stoer-Wagner global minimum cut of an undirected weighted graph given as
/// `(u, v, weight)` triples; loops are ignored. Returns the cut weight and a
/// side of the cut (`in_u[0]` is always false). Needs `n >= 2`.
pub fn stoer_wagner(n: usize, edges: &[(usize, usize, f64)]) -> (f64, Vec<bool>) {
    assert!(n >= 2, "a cut needs at least two vertices");
    let mut w = vec![vec![0.0; n]; n];
    for &(u, v, x) in edges {
        if u != v {
            w[u][v] += x;
            w[v][u] += x;
        }
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let mut best_side = Vec::new();
    while alive.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![0.0; n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let mut sel = usize::MAX;
            for &v in &alive {
                if !added[v] && (sel == usize::MAX || key[v] > key[sel]) {
                    sel = v;
                }
            }
            added[sel] = true;
            if step == alive.len() - 1 {
                if key[sel] < best {
                    best = key[sel];
                    best_side = members[sel].clone();
                }
                last = sel;
            } else {
                prev = sel;
                for &v in &alive {
                    if !added[v] {
                        key[v] += w[sel][v];
                    }
                }
            }
        }
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &alive {
            let x = w[last][v];
            w[prev][v] += x;
            w[v][prev] += x;
        }
        w[prev][prev] = 0.0;
        alive.retain(|&v| v != last);
    }
    let mut in_u = vec![false; n];
    for v in best_side {
        in_u[v] = true;
    }
    if in_u[0] {
        in_u.iter_mut().for_each(|b| *b = !*b);
    }
    (best, in_u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min_cut(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
        exhaustive_cuts(n)
            .map(|u| edges.iter().filter(|&&(a, b, _)| u[a] != u[b]).map(|e| e.2).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(exhaustive_cuts(1).count(), 0);
        assert_eq!(exhaustive_cuts(4).count(), 7);
        assert!(exhaustive_cuts(5).all(|u| !u[0] && u.iter().any(|&b| b)));
    }

    #[test]
    fn samples_are_reproducible() {
        let a = sample_cuts(7, 20, 3);
        assert_eq!(a, sample_cuts(7, 20, 3));
        assert!(a.iter().all(|u| !u[0] && u.iter().any(|&b| b)));
    }

    #[test]
    fn stoer_wagner_matches_enumeration() {
        // Stoer and Wagner's own example graph, minimum cut 4.
        let edges = [
            (0, 1, 2.0), (0, 4, 3.0), (1, 2, 3.0), (1, 4, 2.0), (1, 5, 2.0), (2, 3, 4.0),
            (2, 6, 2.0), (3, 6, 2.0), (3, 7, 2.0), (4, 5, 3.0), (5, 6, 1.0), (6, 7, 3.0),
        ];
        let (value, side) = stoer_wagner(8, &edges);
        assert_eq!(value, 4.0);
        assert_eq!(brute_min_cut(8, &edges), 4.0);
        let crossing: f64 = edges.iter().filter(|&&(a, b, _)| side[a] != side[b]).map(|e| e.2).sum();
        assert_eq!(crossing, 4.0);
    }

    #[test]
    fn disconnected_graph_has_zero_cut() {
        let (value, side) = stoer_wagner(4, &[(0, 1, 1.0), (2, 3, 5.0)]);
        assert_eq!(value, 0.0);
        assert!(!side[0] && !side[1] && side[2] && side[3]);
    }
}
