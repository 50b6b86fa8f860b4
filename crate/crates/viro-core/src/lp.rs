//! Linear programming: an exact rational simplex for small decision
//! problems, and a fast float simplex used to *propose* lifting certificates
//! that are then verified exactly elsewhere.
//!
//! Both solve `min c.x  s.t.  A x = b, x >= 0` by the two-phase method with
//! Bland's rule.  The exact solver is authoritative (used where the answer
//! is itself a decision); the float solver never decides anything — every
//! consumer re-checks its output with exact arithmetic.

use crate::linalg::{QMat, QVec};
use crate::Rat;
use num_traits::{One, Signed, Zero};

/// Outcome of an exact linear program.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    /// Optimal solution (values of the original variables) and objective.
    Optimal { x: QVec, objective: Rat },
    Infeasible,
    Unbounded,
}

/// Exact two-phase simplex for `min c.x  s.t.  a x = b, x >= 0`.
pub fn exact_min(c: &QVec, a: &QMat, b: &QVec) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau columns: n real variables, m artificials, then the rhs.
    let width = n + m + 1;
    let mut t: QMat = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: QVec = Vec::with_capacity(width);
        let flip = b[i].is_negative();
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut cost: QVec = vec![Rat::zero(); width];
    for j in n..n + m {
        cost[j] = Rat::one();
    }
    reduce_cost_row(&mut cost, &t, &basis);
    if !pivot_loop(&mut t, &mut basis, &mut cost, n + m) {
        unreachable!("phase 1 of the simplex method is always bounded");
    }
    // cost[width-1] holds -objective after reductions.
    if cost[width - 1].is_negative() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis where possible; drop redundant rows.
    let mut keep: Vec<bool> = vec![true; m];
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, &mut cost, i, j);
            } else {
                keep[i] = false;
            }
        }
    }
    let mut t2: QMat = Vec::new();
    let mut basis2: Vec<usize> = Vec::new();
    for i in 0..m {
        if keep[i] {
            t2.push(t[i].clone());
            basis2.push(basis[i]);
        }
    }
    let mut t = t2;
    let mut basis = basis2;

    // Phase 2 with the real objective (artificial columns barred).
    let mut cost: QVec = vec![Rat::zero(); width];
    cost[..n].clone_from_slice(c);
    reduce_cost_row(&mut cost, &t, &basis);
    if !pivot_loop(&mut t, &mut basis, &mut cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    let objective = -cost[width - 1].clone();
    LpOutcome::Optimal { x, objective }
}

fn reduce_cost_row(cost: &mut QVec, t: &QMat, basis: &[usize]) {
    for (i, &bv) in basis.iter().enumerate() {
        if !cost[bv].is_zero() {
            let f = cost[bv].clone();
            for (cj, tj) in cost.iter_mut().zip(t[i].iter()) {
                let sub = &f * tj;
                *cj = &*cj - &sub;
            }
        }
    }
}

/// Bland pivoting until optimal.  Returns false on unboundedness.
fn pivot_loop(t: &mut QMat, basis: &mut Vec<usize>, cost: &mut QVec, ncols: usize) -> bool {
    let width = cost.len();
    loop {
        let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) else {
            return true;
        };
        // Ratio test with Bland tie-breaking (smallest basis variable).
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            return false;
        };
        pivot(t, basis, cost, li, enter);
    }
}

fn pivot(t: &mut QMat, basis: &mut [usize], cost: &mut QVec, li: usize, enter: usize) {
    let piv = t[li][enter].clone();
    for v in t[li].iter_mut() {
        *v = &*v / &piv;
    }
    let prow = t[li].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != li && !row[enter].is_zero() {
            let f = row[enter].clone();
            for (rj, pj) in row.iter_mut().zip(prow.iter()) {
                let sub = &f * pj;
                *rj = &*rj - &sub;
            }
        }
    }
    if !cost[enter].is_zero() {
        let f = cost[enter].clone();
        for (cj, pj) in cost.iter_mut().zip(prow.iter()) {
            let sub = &f * pj;
            *cj = &*cj - &sub;
        }
    }
    basis[li] = enter;
}

/// Float two-phase simplex for `min c.x  s.t.  a x = b, x >= 0`.
/// Returns the solution vector, or `None` when infeasible/unbounded/stalled.
/// Nothing downstream trusts this value without exact re-verification.
pub fn float_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    const EPS: f64 = 1e-9;
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < 0.0;
        let s = if flip { -1.0 } else { 1.0 };
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(s * a[i][j]);
        }
        for j in 0..m {
            row.push(if i == j { 1.0 } else { 0.0 });
        }
        row.push(s * b[i]);
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cap = 50 * (n + m) + 1000;

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &mut Vec<f64>, ncols: usize| -> Option<bool> {
        for _ in 0..cap {
            let Some(enter) = (0..ncols).find(|&j| cost[j] < -EPS) else {
                return Some(true);
            };
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for (i, row) in t.iter().enumerate() {
                if row[enter] > EPS {
                    let ratio = row[width - 1] / row[enter];
                    if ratio < best - EPS
                        || (ratio < best + EPS
                            && leave.map(|l| basis[i] < basis[l]).unwrap_or(true))
                    {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let li = leave?;
            let piv = t[li][enter];
            for v in t[li].iter_mut() {
                *v /= piv;
            }
            let prow = t[li].clone();
            for (i, row) in t.iter_mut().enumerate() {
                if i != li && row[enter].abs() > 0.0 {
                    let f = row[enter];
                    for (rj, pj) in row.iter_mut().zip(prow.iter()) {
                        *rj -= f * pj;
                    }
                }
            }
            let f = cost[enter];
            if f.abs() > 0.0 {
                for (cj, pj) in cost.iter_mut().zip(prow.iter()) {
                    *cj -= f * pj;
                }
            }
            basis[li] = enter;
        }
        None // stalled
    };

    let mut cost = vec![0.0; width];
    for cj in cost.iter_mut().take(n + m).skip(n) {
        *cj = 1.0;
    }
    for (i, &bv) in basis.iter().enumerate() {
        if cost[bv] != 0.0 {
            let f = cost[bv];
            let row = t[i].clone();
            for (cj, rj) in cost.iter_mut().zip(row.iter()) {
                *cj -= f * rj;
            }
        }
    }
    run(&mut t, &mut basis, &mut cost, n + m)?;
    if cost[width - 1] < -1e-6 {
        return None; // infeasible
    }
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(c);
    for (i, &bv) in basis.iter().enumerate() {
        if bv < width - 1 && cost[bv] != 0.0 {
            let f = cost[bv];
            let row = t[i].clone();
            for (cj, rj) in cost.iter_mut().zip(row.iter()) {
                *cj -= f * rj;
            }
        }
    }
    run(&mut t, &mut basis, &mut cost, n)?;
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1];
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    fn qv(v: &[i64]) -> QVec {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn exact_basic() {
        // min -x1 - x2  s.t. x1 + x2 + s = 1  ->  optimum -1.
        let c = qv(&[-1, -1, 0]);
        let a = vec![qv(&[1, 1, 1])];
        let b = qv(&[1]);
        match exact_min(&c, &a, &b) {
            LpOutcome::Optimal { objective, .. } => assert_eq!(objective, rat_int(-1)),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn exact_infeasible() {
        // x1 = -1 with x1 >= 0 is infeasible.
        let c = qv(&[0]);
        let a = vec![qv(&[1])];
        let b = qv(&[-1]);
        assert!(matches!(exact_min(&c, &a, &b), LpOutcome::Infeasible));
    }

    #[test]
    fn exact_unbounded() {
        // min -x1 s.t. x1 - x2 = 0: x1 can grow without bound.
        let c = qv(&[-1, 0]);
        let a = vec![qv(&[1, -1])];
        let b = qv(&[0]);
        assert!(matches!(exact_min(&c, &a, &b), LpOutcome::Unbounded));
    }

    #[test]
    fn exact_degenerate_fractions() {
        // min x3 s.t. 2x1 + x2 = 3, x1 + 3x2 + x3 = 4.
        let c = qv(&[0, 0, 1]);
        let a = vec![qv(&[2, 1, 0]), qv(&[1, 3, 1])];
        let b = qv(&[3, 4]);
        match exact_min(&c, &a, &b) {
            LpOutcome::Optimal { objective, x } => {
                assert_eq!(objective, rat_int(0));
                // 2x1 + x2 = 3 and x1 + 3x2 = 4 -> x = (1, 1).
                assert_eq!(x[0], rat(1, 1));
                assert_eq!(x[1], rat_int(1));
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn float_agrees() {
        let c = vec![-1.0, -1.0, 0.0];
        let a = vec![vec![1.0, 1.0, 1.0]];
        let b = vec![1.0];
        let x = float_min(&c, &a, &b).unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-6);
    }
}
