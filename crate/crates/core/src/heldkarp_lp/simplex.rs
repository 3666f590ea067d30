//! Dense revised simplex with Bland's rule.
//!
//! Problems are `min c·x` subject to sparse rows `a·x {<=,=,>=} b` and
//! `x >= 0`. The basis inverse is kept explicitly and rebuilt from scratch
//! every [`REFACTOR_EVERY`] pivots to bound drift.

use super::LpError;

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self { num_vars: objective.len(), objective, rows: Vec::new() }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, kind: RowKind, rhs: f64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOptimum {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Anything able to solve a [`LinearProgram`] to optimality.
pub trait LpBackend {
    fn solve(&mut self, lp: &LinearProgram) -> Result<LpOptimum, LpError>;
}

#[derive(Clone, Debug)]
pub struct DenseSimplex {
    pub max_pivots: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        Self { max_pivots: 1_000_000 }
    }
}

impl LpBackend for DenseSimplex {
    fn solve(&mut self, lp: &LinearProgram) -> Result<LpOptimum, LpError> {
        Tableau::build(lp).run(lp, self.max_pivots)
    }
}

struct Tableau {
    m: usize,
    /// Sparse columns: structural, then slack/surplus, then artificial.
    cols: Vec<Vec<(usize, f64)>>,
    first_artificial: usize,
    b: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars];
        let mut b = Vec::with_capacity(m);
        let mut kinds = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = row.rhs < 0.0;
            let s = if flip { -1.0 } else { 1.0 };
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((i, s * a));
                }
            }
            b.push(s * row.rhs);
            kinds.push(match (row.kind, flip) {
                (RowKind::Eq, _) => RowKind::Eq,
                (RowKind::Le, false) | (RowKind::Ge, true) => RowKind::Le,
                (RowKind::Ge, false) | (RowKind::Le, true) => RowKind::Ge,
            });
        }
        let mut basis = vec![usize::MAX; m];
        for (i, kind) in kinds.iter().enumerate() {
            match kind {
                RowKind::Le => {
                    basis[i] = cols.len();
                    cols.push(vec![(i, 1.0)]);
                }
                RowKind::Ge => cols.push(vec![(i, -1.0)]),
                RowKind::Eq => {}
            }
        }
        let first_artificial = cols.len();
        for i in 0..m {
            if basis[i] == usize::MAX {
                basis[i] = cols.len();
                cols.push(vec![(i, 1.0)]);
            }
        }
        let mut is_basic = vec![false; cols.len()];
        for &j in &basis {
            is_basic[j] = true;
        }
        let binv = (0..m).map(|i| (0..m).map(|k| if i == k { 1.0 } else { 0.0 }).collect()).collect();
        let xb = b.clone();
        Self { m, cols, first_artificial, b, basis, is_basic, binv, xb, pivots: 0 }
    }

    fn run(mut self, lp: &LinearProgram, max_pivots: usize) -> Result<LpOptimum, LpError> {
        let n = self.cols.len();
        if self.first_artificial < n {
            let cost: Vec<f64> = (0..n).map(|j| if j >= self.first_artificial { 1.0 } else { 0.0 }).collect();
            self.optimize(&cost, n, max_pivots)?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&k| self.basis[k] >= self.first_artificial)
                .map(|k| self.xb[k])
                .sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if infeasibility > 1e-7 * scale {
                return Err(LpError::LpInfeasible);
            }
            self.drive_out_artificials();
        }
        let mut cost = lp.objective.clone();
        cost.resize(n, 0.0);
        self.optimize(&cost, self.first_artificial, max_pivots)?;
        let mut x = vec![0.0; lp.num_vars];
        for (k, &j) in self.basis.iter().enumerate() {
            if j < lp.num_vars {
                x[j] = self.xb[k].max(0.0);
            }
        }
        let objective = x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum();
        Ok(LpOptimum { x, objective, pivots: self.pivots })
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.m];
        for &(r, a) in &self.cols[j] {
            for (k, dk) in d.iter_mut().enumerate() {
                *dk += self.binv[k][r] * a;
            }
        }
        d
    }

    /// Minimizes `cost` over columns `< allowed`, starting from the current basis.
    fn optimize(&mut self, cost: &[f64], allowed: usize, max_pivots: usize) -> Result<(), LpError> {
        loop {
            let mut y = vec![0.0; self.m];
            for (k, &j) in self.basis.iter().enumerate() {
                let cb = cost[j];
                if cb != 0.0 {
                    for (yi, bi) in y.iter_mut().zip(&self.binv[k]) {
                        *yi += cb * bi;
                    }
                }
            }
            let entering = (0..allowed).find(|&j| {
                !self.is_basic[j] && cost[j] - self.cols[j].iter().map(|&(r, a)| y[r] * a).sum::<f64>() < -PIVOT_TOL
            });
            let Some(j) = entering else { return Ok(()) };
            let d = self.column(j);
            let mut leave: Option<(usize, f64)> = None;
            for k in 0..self.m {
                if d[k] > PIVOT_TOL {
                    let ratio = self.xb[k].max(0.0) / d[k];
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[k] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((k, ratio));
                    }
                }
            }
            let Some((k, _)) = leave else { return Err(LpError::Unbounded) };
            self.pivot(k, j, &d);
            if self.pivots > max_pivots {
                return Err(LpError::PivotLimit(max_pivots));
            }
        }
    }

    fn pivot(&mut self, k: usize, j: usize, d: &[f64]) {
        let p = d[k];
        let theta = self.xb[k] / p;
        for i in 0..self.m {
            if i != k {
                self.xb[i] -= theta * d[i];
            }
        }
        self.xb[k] = theta;
        let pivot_row: Vec<f64> = self.binv[k].iter().map(|v| v / p).collect();
        for i in 0..self.m {
            if i != k && d[i] != 0.0 {
                let f = d[i];
                for (a, b) in self.binv[i].iter_mut().zip(&pivot_row) {
                    *a -= f * b;
                }
            }
        }
        self.binv[k] = pivot_row;
        self.is_basic[self.basis[k]] = false;
        self.is_basic[j] = true;
        self.basis[k] = j;
        self.pivots += 1;
        if self.pivots.is_multiple_of(REFACTOR_EVERY) {
            self.refactor();
        }
    }

    /// Recomputes the basis inverse and basic values by Gauss-Jordan
    /// elimination with partial pivoting.
    fn refactor(&mut self) {
        let m = self.m;
        let mut a = vec![vec![0.0; 2 * m]; m];
        for (k, &j) in self.basis.iter().enumerate() {
            for &(r, v) in &self.cols[j] {
                a[r][k] = v;
            }
        }
        for (r, row) in a.iter_mut().enumerate() {
            row[m + r] = 1.0;
        }
        for c in 0..m {
            let p = (c..m).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs())).unwrap();
            if a[p][c].abs() < 1e-12 {
                // Numerically singular; keep the product-form inverse.
                return;
            }
            a.swap(c, p);
            let inv = 1.0 / a[c][c];
            a[c].iter_mut().for_each(|v| *v *= inv);
            let pivot_row = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != c && row[c] != 0.0 {
                    let f = row[c];
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        // Row k of the inverse belongs to basis position k.
        self.binv = a.into_iter().map(|row| row[m..].to_vec()).collect();
        self.xb = (0..m).map(|k| self.binv[k].iter().zip(&self.b).map(|(x, y)| x * y).sum()).collect();
    }

    fn drive_out_artificials(&mut self) {
        for k in 0..self.m {
            if self.basis[k] < self.first_artificial {
                continue;
            }
            let replacement = (0..self.first_artificial).find_map(|j| {
                if self.is_basic[j] {
                    return None;
                }
                let d = self.column(j);
                (d[k].abs() > 1e-7).then_some((j, d))
            });
            // A row with no structural replacement is redundant; its
            // artificial stays basic at zero and can never move.
            if let Some((j, d)) = replacement {
                self.xb[k] = 0.0;
                self.pivot(k, j, &d);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(lp: &LinearProgram) -> Result<LpOptimum, LpError> {
        DenseSimplex::default().solve(lp)
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
        let mut lp = LinearProgram::new(vec![-3.0, -5.0]);
        lp.add_row(vec![(0, 1.0)], RowKind::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], RowKind::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], RowKind::Le, 18.0);
        let opt = solve(&lp).unwrap();
        assert!((opt.objective + 36.0).abs() < 1e-9);
        assert!((opt.x[0] - 2.0).abs() < 1e-9 && (opt.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_covering_rows() {
        // min x + 2y + 3z, x + y + z = 2, y + z >= 1.5, z >= 0.25
        let mut lp = LinearProgram::new(vec![1.0, 2.0, 3.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0), (2, 1.0)], RowKind::Eq, 2.0);
        lp.add_row(vec![(1, 1.0), (2, 1.0)], RowKind::Ge, 1.5);
        lp.add_row(vec![(2, 1.0)], RowKind::Ge, 0.25);
        let opt = solve(&lp).unwrap();
        assert!((opt.objective - 3.75).abs() < 1e-9, "{opt:?}");
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x <= -1 is x >= 1; the duplicated equality is redundant.
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add_row(vec![(0, -1.0)], RowKind::Le, -1.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], RowKind::Eq, 0.0);
        lp.add_row(vec![(0, 2.0), (1, -2.0)], RowKind::Eq, 0.0);
        let opt = solve(&lp).unwrap();
        assert!((opt.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_row(vec![(0, 1.0)], RowKind::Le, 1.0);
        lp.add_row(vec![(0, 1.0)], RowKind::Ge, 2.0);
        assert_eq!(solve(&lp), Err(LpError::LpInfeasible));

        let mut lp = LinearProgram::new(vec![-1.0, 0.0]);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], RowKind::Le, 1.0);
        assert_eq!(solve(&lp), Err(LpError::Unbounded));
    }

    #[test]
    fn many_pivots_survive_refactoring() {
        // Assignment-like LP large enough to trigger several refactorings:
        // min sum c_ij x_ij with row and column sums equal to 1.
        let k = 9;
        let cost: Vec<f64> = (0..k * k).map(|v| ((v * 37 + 11) % 23) as f64 + 1.0).collect();
        let mut lp = LinearProgram::new(cost.clone());
        for i in 0..k {
            lp.add_row((0..k).map(|j| (i * k + j, 1.0)).collect(), RowKind::Eq, 1.0);
            lp.add_row((0..k).map(|j| (j * k + i, 1.0)).collect(), RowKind::Eq, 1.0);
        }
        let opt = solve(&lp).unwrap();
        // Oracle: brute force over all permutations of 9 elements is 362880
        // evaluations, cheap enough for a unit test.
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            best = best.min((0..k).map(|i| cost[i * k + p[i]]).sum());
        });
        assert!((opt.objective - best).abs() < 1e-7, "{} vs {best}", opt.objective);
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
}
