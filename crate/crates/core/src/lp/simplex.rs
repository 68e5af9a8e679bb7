//! Two-phase dense tableau simplex over exact rationals with Bland's rule.

use crate::rational::Rational;

use super::{LinearProgram, LpSolution, LpStatus, RowKind, Sense};

struct Tableau {
    /// `rows[i]` holds the constraint coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs followed by minus the current objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, p: usize, c: usize) {
        self.pivots += 1;
        let inv = self.rows[p][c].recip();
        let support: Vec<usize> = (0..=self.ncols).filter(|&j| !self.rows[p][j].is_zero()).collect();
        for &j in &support {
            let v = &self.rows[p][j] * &inv;
            self.rows[p][j] = v;
        }
        let pivot_row = std::mem::take(&mut self.rows[p]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &support {
                let d = &f * &pivot_row[j];
                self.obj[j] -= d;
            }
        }
        self.rows[p] = pivot_row;
        self.basis[p] = c;
    }

    /// Maximizes over the columns allowed by `eligible`.
    fn run(&mut self, eligible: &dyn Fn(usize) -> bool) -> Outcome {
        loop {
            // Bland: lowest-index improving column, then lowest-index basic variable on ties
            let Some(c) = (0..self.ncols).find(|&j| eligible(j) && self.obj[j].is_positive()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Outcome::Unbounded,
                Some((p, _)) => self.pivot(p, c),
            }
        }
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o -= cb * v;
                }
            }
        }
        self.obj = obj;
    }
}

/// Solves `lp` exactly. Free variables are split into two nonnegative parts,
/// inequality rows get slack columns, and rows without an identity column get
/// artificials for phase one.
pub fn solve_exact(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    // column layout: structural parts, then slacks, then artificials
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for j in 0..n {
        if lp.is_nonneg(j) {
            col_of.push((ncols, None));
            ncols += 1;
        } else {
            col_of.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let structural = ncols;
    let m = lp.rows().len();
    let mut slack_of = vec![None; m];
    for (i, row) in lp.rows().iter().enumerate() {
        if row.kind != RowKind::Eq {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut dense: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::with_capacity(m);
    for (i, row) in lp.rows().iter().enumerate() {
        let mut coeffs = Vec::new();
        for (j, c) in &row.coeffs {
            let (pos, neg) = col_of[*j];
            coeffs.push((pos, c.clone()));
            if let Some(neg) = neg {
                coeffs.push((neg, -c));
            }
        }
        if let Some(s) = slack_of[i] {
            let sign = if row.kind == RowKind::Le { 1 } else { -1 };
            coeffs.push((s, Rational::from_integer(sign)));
        }
        let mut rhs = row.rhs.clone();
        if rhs.is_negative() {
            for (_, c) in coeffs.iter_mut() {
                *c = -&*c;
            }
            rhs = -rhs;
        }
        dense.push((coeffs, rhs));
    }
    let mut basis = Vec::with_capacity(m);
    let mut art_rows = Vec::new();
    for (i, (coeffs, _)) in dense.iter().enumerate() {
        match slack_of[i] {
            Some(s) if coeffs.iter().any(|(j, c)| *j == s && c.is_one()) => basis.push(s),
            _ => {
                basis.push(usize::MAX);
                art_rows.push(i);
            }
        }
    }
    let first_art = ncols;
    for (k, &i) in art_rows.iter().enumerate() {
        basis[i] = first_art + k;
    }
    ncols += art_rows.len();
    let rows: Vec<Vec<Rational>> = dense
        .into_iter()
        .enumerate()
        .map(|(i, (coeffs, rhs))| {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (j, c) in coeffs {
                row[j] = c;
            }
            if basis[i] >= first_art {
                row[basis[i]] = Rational::one();
            }
            row[ncols] = rhs;
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
        pivots: 0,
    };

    if !art_rows.is_empty() {
        let mut cost = vec![Rational::zero(); ncols];
        for c in cost.iter_mut().skip(first_art) {
            *c = Rational::from_integer(-1);
        }
        t.set_objective(&cost);
        let all = |_j: usize| true;
        t.run(&all);
        if !t.obj[ncols].is_zero() {
            return not_optimal(lp, LpStatus::Infeasible, t.pivots);
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(c) => {
                        t.pivot(i, c);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    let flip = lp.sense() == Sense::Minimize;
    for (j, c) in lp.objective() {
        let c = if flip { -c } else { c.clone() };
        let (pos, neg) = col_of[*j];
        if let Some(neg) = neg {
            cost[neg] = -&c;
        }
        cost[pos] = c;
    }
    t.set_objective(&cost);
    let real = |j: usize| j < first_art;
    if let Outcome::Unbounded = t.run(&real) {
        return not_optimal(lp, LpStatus::Unbounded, t.pivots);
    }

    let mut col_value = vec![Rational::zero(); ncols];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        col_value[b] = row[ncols].clone();
    }
    let assignment: Vec<Rational> = col_of
        .iter()
        .map(|&(pos, neg)| match neg {
            Some(neg) => &col_value[pos] - &col_value[neg],
            None => col_value[pos].clone(),
        })
        .collect();
    debug_assert!(structural <= first_art);
    let value = lp.objective_value(&assignment);
    let tableau_value = if flip { t.obj[ncols].clone() } else { -&t.obj[ncols] };
    assert_eq!(value, tableau_value, "simplex objective bookkeeping diverged");
    let violated = lp.violations(&assignment);
    assert!(violated.is_empty(), "simplex returned an infeasible point: {violated:?}");
    LpSolution {
        status: LpStatus::Optimal,
        value,
        assignment,
        pivots: t.pivots,
    }
}

fn not_optimal(lp: &LinearProgram, status: LpStatus, pivots: usize) -> LpSolution {
    LpSolution {
        status,
        value: Rational::zero(),
        assignment: vec![Rational::zero(); lp.num_vars()],
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LinearProgram, RowKind, Sense};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", true);
        lp.set_objective(vec![(x, r(1, 1))]);
        lp.add_row("cap", vec![(x, r(1, 1))], RowKind::Le, r(3, 4));
        let s = solve_exact(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, r(3, 4));
    }

    #[test]
    fn textbook_program() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", true);
        let y = lp.add_var("y", true);
        lp.set_objective(vec![(x, r(3, 1)), (y, r(5, 1))]);
        lp.add_row("a", vec![(x, r(1, 1))], RowKind::Le, r(4, 1));
        lp.add_row("b", vec![(y, r(2, 1))], RowKind::Le, r(12, 1));
        lp.add_row("c", vec![(x, r(3, 1)), (y, r(2, 1))], RowKind::Le, r(18, 1));
        let s = solve_exact(&lp);
        assert_eq!(s.value, r(36, 1));
        assert_eq!(s.assignment, vec![r(2, 1), r(6, 1)]);
    }

    #[test]
    fn minimize_with_free_variable_and_equalities() {
        // min x + 2y s.t. x - y = -3/2, x + y >= 1, y free, x >= 0 -> x = 0, y = 3/2
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var("x", true);
        let y = lp.add_var("y", false);
        lp.set_objective(vec![(x, r(1, 1)), (y, r(2, 1))]);
        lp.add_row("e", vec![(x, r(1, 1)), (y, r(-1, 1))], RowKind::Eq, r(-3, 2));
        lp.add_row("g", vec![(x, r(1, 1)), (y, r(1, 1))], RowKind::Ge, r(1, 1));
        let s = solve_exact(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, r(3, 1));
        // y = x + 3/2 gives x + 2y = 3x + 3, minimized at x = 0
        assert_eq!(s.assignment, vec![r(0, 1), r(3, 2)]);
    }

    #[test]
    fn negative_free_optimum() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let y = lp.add_var("y", false);
        lp.set_objective(vec![(y, r(1, 1))]);
        lp.add_row("g", vec![(y, r(1, 1))], RowKind::Ge, r(-7, 3));
        let s = solve_exact(&lp);
        assert_eq!(s.value, r(-7, 3));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", true);
        lp.set_objective(vec![(x, r(1, 1))]);
        lp.add_row("lo", vec![(x, r(1, 1))], RowKind::Ge, r(2, 1));
        assert_eq!(solve_exact(&lp).status, LpStatus::Unbounded);
        lp.add_row("hi", vec![(x, r(1, 1))], RowKind::Le, r(1, 1));
        assert_eq!(solve_exact(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", true);
        let y = lp.add_var("y", true);
        lp.set_objective(vec![(x, r(1, 1))]);
        lp.add_row("e1", vec![(x, r(1, 1)), (y, r(1, 1))], RowKind::Eq, r(1, 1));
        lp.add_row("e2", vec![(x, r(2, 1)), (y, r(2, 1))], RowKind::Eq, r(2, 1));
        let s = solve_exact(&lp);
        assert_eq!(s.value, r(1, 1));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule; Bland terminates
        let mut lp = LinearProgram::new(Sense::Maximize);
        let v: Vec<usize> = (0..4).map(|i| lp.add_var(format!("x{i}"), true)).collect();
        lp.set_objective(vec![(v[0], r(3, 4)), (v[1], r(-150, 1)), (v[2], r(1, 50)), (v[3], r(-6, 1))]);
        lp.add_row("a", vec![(v[0], r(1, 4)), (v[1], r(-60, 1)), (v[2], r(-1, 25)), (v[3], r(9, 1))], RowKind::Le, r(0, 1));
        lp.add_row("b", vec![(v[0], r(1, 2)), (v[1], r(-90, 1)), (v[2], r(-1, 50)), (v[3], r(3, 1))], RowKind::Le, r(0, 1));
        lp.add_row("c", vec![(v[2], r(1, 1))], RowKind::Le, r(1, 1));
        let s = solve_exact(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, r(1, 20));
    }
}
