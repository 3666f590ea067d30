//! Dinic max-flow over a generic capacity type.

use std::collections::VecDeque;
use std::ops::{Add, AddAssign, Sub, SubAssign};

pub trait Capacity:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + AddAssign + SubAssign + std::fmt::Debug
{
    const ZERO: Self;
    /// Residual capacities at or below this are treated as saturated.
    fn is_positive(self) -> bool;
}

impl Capacity for i64 {
    const ZERO: Self = 0;
    fn is_positive(self) -> bool {
        self > 0
    }
}

impl Capacity for f64 {
    const ZERO: Self = 0.0;
    fn is_positive(self) -> bool {
        self > 1e-12
    }
}

fn min<C: Capacity>(a: C, b: C) -> C {
    if b < a {
        b
    } else {
        a
    }
}

/// Residual network; edge `2k` is the k-th added edge, `2k+1` its reverse.
#[derive(Clone, Debug)]
pub struct FlowNetwork<C> {
    to: Vec<usize>,
    residual: Vec<C>,
    original: Vec<C>,
    adj: Vec<Vec<usize>>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(n: usize) -> Self {
        Self { to: Vec::new(), residual: Vec::new(), original: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: C) -> usize {
        let k = self.original.len();
        self.adj[from].push(self.to.len());
        self.to.push(to);
        self.residual.push(cap);
        self.adj[to].push(self.to.len());
        self.to.push(from);
        self.residual.push(C::ZERO);
        self.original.push(cap);
        k
    }

    /// Flow currently routed on the k-th added edge.
    pub fn flow(&self, k: usize) -> C {
        self.residual[2 * k + 1]
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> C {
        let n = self.num_nodes();
        let mut total = C::ZERO;
        if s == t {
            return total;
        }
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &e in &self.adj[v] {
                    let w = self.to[e];
                    if level[w] == usize::MAX && self.residual[e].is_positive() {
                        level[w] = level[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut iter = vec![0; n];
            while let Some(pushed) = self.augment(s, t, None, &level, &mut iter) {
                total += pushed;
            }
        }
    }

    fn augment(&mut self, v: usize, t: usize, limit: Option<C>, level: &[usize], iter: &mut [usize]) -> Option<C> {
        if v == t {
            return limit;
        }
        while iter[v] < self.adj[v].len() {
            let e = self.adj[v][iter[v]];
            let w = self.to[e];
            if level[w] == level[v].wrapping_add(1) && self.residual[e].is_positive() {
                let cap = match limit {
                    Some(l) => min(l, self.residual[e]),
                    None => self.residual[e],
                };
                if let Some(pushed) = self.augment(w, t, Some(cap), level, iter) {
                    self.residual[e] -= pushed;
                    self.residual[e ^ 1] += pushed;
                    return Some(pushed);
                }
            }
            iter[v] += 1;
        }
        None
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let w = self.to[e];
                if !seen[w] && self.residual[e].is_positive() {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Capacity the k-th edge was created with.
    pub fn capacity(&self, k: usize) -> C {
        self.original[k]
    }
}
