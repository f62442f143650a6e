//! Exact rational linear programming by the two-phase dense simplex method
//! with Bland's rule. Small problems only; every pivot is exact.

use num::{One, Signed, Zero};

use crate::mat::Q;

/// A linear constraint on nonnegative variables.
pub enum Constraint {
    Le(Vec<Q>, Q),
    Ge(Vec<Q>, Q),
    Eq(Vec<Q>, Q),
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    obj: Vec<Q>,
    objval: Q,
    allowed: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= piv.clone();
        }
        self.rhs[r] /= piv.clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let delta = f.clone() * self.rows[r][j].clone();
                self.rows[i][j] -= delta;
            }
            let delta = f * self.rhs[r].clone();
            self.rhs[i] -= delta;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for j in 0..self.obj.len() {
                let delta = f.clone() * self.rows[r][j].clone();
                self.obj[j] -= delta;
            }
            let delta = f * self.rhs[r].clone();
            self.objval += delta;
        }
        self.basis[r] = c;
    }

    /// Reduced-cost objective row for a fresh objective vector under the
    /// current basis.
    fn set_objective(&mut self, cost: &[Q]) {
        self.obj = cost.to_vec();
        self.objval = Q::zero();
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.obj.len() {
                let delta = cb.clone() * self.rows[r][j].clone();
                self.obj[j] -= delta;
            }
            let delta = cb * self.rhs[r].clone();
            self.objval += delta;
        }
    }

    /// Bland-rule simplex iterations; returns false on unboundedness.
    fn optimize(&mut self) -> bool {
        loop {
            let entering = (0..self.obj.len())
                .find(|&j| self.allowed[j] && self.obj[j].is_positive());
            let c = match entering {
                Some(c) => c,
                None => return true,
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(lr) => {
                        let cur = self.rhs[lr].clone() / self.rows[lr][c].clone();
                        let cand = self.rhs[r].clone() / self.rows[r][c].clone();
                        cand < cur || (cand == cur && self.basis[r] < self.basis[lr])
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            match leave {
                Some(r) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximize `objective . x` over x >= 0 subject to the constraints.
pub fn maximize(objective: &[Q], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    let mut rel: Vec<i8> = Vec::with_capacity(m);
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    for cst in constraints {
        let (coef, b, r) = match cst {
            Constraint::Le(c, b) => (c, b, 1i8),
            Constraint::Ge(c, b) => (c, b, -1i8),
            Constraint::Eq(c, b) => (c, b, 0i8),
        };
        assert_eq!(coef.len(), n, "constraint arity mismatch");
        if b.is_negative() {
            rows.push(coef.iter().map(|x| -x.clone()).collect());
            rhs.push(-b.clone());
            rel.push(-r);
        } else {
            rows.push(coef.clone());
            rhs.push(b.clone());
            rel.push(r);
        }
    }
    let n_le = rel.iter().filter(|&&r| r == 1).count();
    let n_ge = rel.iter().filter(|&&r| r == -1).count();
    let n_art = m - n_le;
    let cols = n + n_le + n_ge + n_art;
    let mut t = Tableau {
        rows: vec![vec![Q::zero(); cols]; m],
        rhs,
        basis: vec![0; m],
        obj: vec![Q::zero(); cols],
        objval: Q::zero(),
        allowed: vec![true; cols],
    };
    let mut slack_at = n;
    let mut art_at = n + n_le + n_ge;
    let mut art_cols: Vec<usize> = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        t.rows[i][..n].clone_from_slice(&row);
        match rel[i] {
            1 => {
                t.rows[i][slack_at] = Q::one();
                t.basis[i] = slack_at;
                slack_at += 1;
            }
            -1 => {
                t.rows[i][slack_at] = -Q::one();
                slack_at += 1;
                t.rows[i][art_at] = Q::one();
                t.basis[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
            _ => {
                t.rows[i][art_at] = Q::one();
                t.basis[i] = art_at;
                art_cols.push(art_at);
                art_at += 1;
            }
        }
    }
    if !art_cols.is_empty() {
        let mut phase1 = vec![Q::zero(); cols];
        for &c in &art_cols {
            phase1[c] = -Q::one();
        }
        t.set_objective(&phase1);
        let bounded = t.optimize();
        debug_assert!(bounded);
        if !t.objval.is_zero() {
            return LpOutcome::Infeasible;
        }
        // pivot lingering artificials out of the basis or drop redundant rows
        let mut r = 0;
        while r < t.rows.len() {
            if art_cols.contains(&t.basis[r]) {
                let c = (0..n + n_le + n_ge).find(|&j| !t.rows[r][j].is_zero());
                match c {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for &c in &art_cols {
            t.allowed[c] = false;
        }
    }
    let mut phase2 = vec![Q::zero(); cols];
    phase2[..n].clone_from_slice(objective);
    t.set_objective(&phase2);
    if !t.optimize() {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Q::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rhs[r].clone();
        }
    }
    LpOutcome::Optimal { value: t.objval.clone(), point }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    #[test]
    fn box_corner() {
        // max x + y, x <= 3, y <= 5
        let out = maximize(
            &[q(1), q(1)],
            &[
                Constraint::Le(vec![q(1), q(0)], q(3)),
                Constraint::Le(vec![q(0), q(1)], q(5)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(8));
                assert_eq!(point, vec![q(3), q(5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_phase_one() {
        // max -x subject to x >= 7
        let out = maximize(&[q(-1)], &[Constraint::Ge(vec![q(1)], q(7))]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(-7)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible() {
        let out = maximize(
            &[q(0)],
            &[
                Constraint::Le(vec![q(1)], q(1)),
                Constraint::Ge(vec![q(1)], q(2)),
            ],
        );
        assert!(matches!(out, LpOutcome::Infeasible));
    }

    #[test]
    fn unbounded() {
        let out = maximize(&[q(1)], &[Constraint::Ge(vec![q(1)], q(1))]);
        assert!(matches!(out, LpOutcome::Unbounded));
    }

    #[test]
    fn fractional_optimum() {
        // max y with 2y <= 1
        let out = maximize(&[q(0), q(1)], &[Constraint::Le(vec![q(0), q(2)], q(1))]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::new(1.into(), 2.into())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_mix() {
        // max x + 2y, x + y = 4, y <= 3
        let out = maximize(
            &[q(1), q(2)],
            &[
                Constraint::Eq(vec![q(1), q(1)], q(4)),
                Constraint::Le(vec![q(0), q(1)], q(3)),
            ],
        );
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(7));
                assert_eq!(point, vec![q(1), q(3)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
