//! Linear programs and their solutions.
//!
//! Problems are small and dense-ish; the solver in [`simplex`] is a bounded
//! variable revised simplex that always returns a basic (vertex) solution.

pub mod simplex;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct LpRow<S> {
    pub coefs: Vec<(usize, S)>,
    pub sense: Sense,
    pub rhs: S,
}

#[derive(Debug, Clone)]
pub struct LpProblem<S> {
    pub direction: Direction,
    pub objective: Vec<S>,
    pub lower: Vec<S>,
    /// `None` is an infinite upper bound.
    pub upper: Vec<Option<S>>,
    pub rows: Vec<LpRow<S>>,
}

impl<S: Scalar> LpProblem<S> {
    pub fn new(direction: Direction) -> Self {
        LpProblem {
            direction,
            objective: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_col(&mut self, lower: S, upper: Option<S>, cost: S) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coefs: Vec<(usize, S)>, sense: Sense, rhs: S) -> usize {
        self.rows.push(LpRow { coefs, sense, rhs });
        self.rows.len() - 1
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_cols();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Invalid("bound vectors do not match column count".into()));
        }
        for j in 0..n {
            if let Some(hi) = &self.upper[j] {
                if *hi < self.lower[j] {
                    return Err(LpError::Invalid(format!("column {j} has lower bound above upper bound")));
                }
            }
            if !self.lower[j].to_f64().is_finite() || !self.objective[j].to_f64().is_finite() {
                return Err(LpError::Invalid(format!("column {j} has non-finite data")));
            }
        }
        for (r, row) in self.rows.iter().enumerate() {
            for (j, v) in &row.coefs {
                if *j >= n {
                    return Err(LpError::Invalid(format!("row {r} references column {j} of {n}")));
                }
                if !v.to_f64().is_finite() {
                    return Err(LpError::Invalid(format!("row {r} has a non-finite coefficient")));
                }
            }
            if !row.rhs.to_f64().is_finite() {
                return Err(LpError::Invalid(format!("row {r} has a non-finite right-hand side")));
            }
        }
        Ok(())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LpProblem<T> {
        LpProblem {
            direction: self.direction,
            objective: self.objective.iter().map(&f).collect(),
            lower: self.lower.iter().map(&f).collect(),
            upper: self.upper.iter().map(|u| u.as_ref().map(&f)).collect(),
            rows: self
                .rows
                .iter()
                .map(|row| LpRow {
                    coefs: row.coefs.iter().map(|(j, v)| (*j, f(v))).collect(),
                    sense: row.sense,
                    rhs: f(&row.rhs),
                })
                .collect(),
        }
    }

    /// Activity `a_r x` of every row.
    pub fn activities(&self, x: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                row.coefs
                    .iter()
                    .fold(S::zero(), |acc, (j, v)| acc + v.clone() * x[*j].clone())
            })
            .collect()
    }

    /// Largest violation of a row or bound by `x`.
    pub fn max_violation(&self, x: &[S]) -> S {
        let mut worst = S::zero();
        for (j, v) in x.iter().enumerate() {
            worst = S::max_of(worst, self.lower[j].clone() - v.clone());
            if let Some(hi) = &self.upper[j] {
                worst = S::max_of(worst, v.clone() - hi.clone());
            }
        }
        for (row, act) in self.rows.iter().zip(self.activities(x)) {
            let gap = match row.sense {
                Sense::Ge => row.rhs.clone() - act,
                Sense::Le => act - row.rhs.clone(),
                Sense::Eq => (act - row.rhs.clone()).abs(),
            };
            worst = S::max_of(worst, gap);
        }
        worst
    }

    pub fn objective_value(&self, x: &[S]) -> S {
        self.objective
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome<S> {
    pub status: LpStatus,
    /// Basic solution over the structural columns (empty unless optimal).
    pub solution: Vec<S>,
    pub objective: S,
    /// Basic columns; indices `>= num_cols` are the logical column of row `index - num_cols`.
    pub basis: Vec<usize>,
    /// Row duals for the problem as posed (sign follows the objective direction).
    pub duals: Vec<S>,
    pub iterations: usize,
}

impl<S: Scalar> LpOutcome<S> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LpOutcome<T> {
        LpOutcome {
            status: self.status,
            solution: self.solution.iter().map(&f).collect(),
            objective: f(&self.objective),
            basis: self.basis.clone(),
            duals: self.duals.iter().map(&f).collect(),
            iterations: self.iterations,
        }
    }

    pub(crate) fn without_solution(status: LpStatus, iterations: usize) -> Self {
        LpOutcome {
            status,
            solution: Vec::new(),
            objective: S::zero(),
            basis: Vec::new(),
            duals: Vec::new(),
            iterations,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("iteration guard exceeded after {0} pivots")]
    CyclingGuard(usize),
    #[error("numeric breakdown: {0}")]
    NumericBreakdown(String),
}

/// Solves in the arithmetic of `S` (float solves fall back to exact arithmetic on breakdown).
pub fn solve<S: Scalar>(problem: &LpProblem<S>) -> Result<LpOutcome<S>, LpError> {
    S::solve_lp(problem)
}

/// Dual objective implied by row duals `y` for a problem as posed.
///
/// The value is a valid bound on the primal optimum whenever the signs of `y`
/// and of the implied reduced costs are dual feasible; returns `None` when they
/// are not (up to `tol`), or when an infinite bound would carry weight.
pub fn dual_bound<S: Scalar>(problem: &LpProblem<S>, duals: &[S], tol: &S) -> Option<S> {
    // Work on the minimisation form: max problems negate costs and duals.
    let flip = problem.direction == Direction::Maximize;
    let signed = |v: &S| if flip { -v.clone() } else { v.clone() };
    let y: Vec<S> = duals.iter().map(signed).collect();
    let mut reduced: Vec<S> = problem.objective.iter().map(signed).collect();
    let mut value = S::zero();
    for (r, row) in problem.rows.iter().enumerate() {
        for (j, a) in &row.coefs {
            reduced[*j] = reduced[*j].clone() - y[r].clone() * a.clone();
        }
        let yr = y[r].clone();
        let ok = match row.sense {
            Sense::Ge => yr >= -tol.clone(),
            Sense::Le => yr <= tol.clone(),
            Sense::Eq => true,
        };
        if !ok {
            return None;
        }
        value = value + yr * row.rhs.clone();
    }
    for (j, d) in reduced.into_iter().enumerate() {
        if d > S::zero() {
            value = value + d * problem.lower[j].clone();
        } else if d < S::zero() {
            match &problem.upper[j] {
                Some(hi) => value = value + d * hi.clone(),
                None if -d.clone() <= tol.clone() => {}
                None => return None,
            }
        }
    }
    Some(if flip { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn max_x_with_upper_bound_row() {
        let mut p = LpProblem::<f64>::new(Direction::Maximize);
        let x = p.add_col(0.0, None, 1.0);
        p.add_row(vec![(x, 1.0)], Sense::Le, 1.0);
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.solution[0] - 1.0).abs() < 1e-12);
        assert!((out.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        let x = p.add_col(r(0), None, r(1));
        p.add_row(vec![(x, r(1))], Sense::Ge, r(2));
        p.add_row(vec![(x, r(1))], Sense::Le, r(1));
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray_is_detected() {
        let mut p = LpProblem::<Rational>::new(Direction::Maximize);
        let x = p.add_col(r(0), None, r(1));
        let y = p.add_col(r(0), None, r(0));
        p.add_row(vec![(x, r(1)), (y, r(-1))], Sense::Le, r(3));
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn rejects_bad_column_reference() {
        let mut p = LpProblem::<f64>::new(Direction::Minimize);
        p.add_col(0.0, Some(1.0), 0.0);
        p.add_row(vec![(3, 1.0)], Sense::Ge, 0.0);
        assert!(matches!(solve(&p), Err(LpError::Invalid(_))));
    }

    #[test]
    fn dual_bound_matches_optimum() {
        // min x + 2y  s.t. x + y >= 1, x - y <= 0.5, 0 <= x,y <= 1
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        let x = p.add_col(r(0), Some(r(1)), r(1));
        let y = p.add_col(r(0), Some(r(1)), r(2));
        p.add_row(vec![(x, r(1)), (y, r(1))], Sense::Ge, r(1));
        p.add_row(vec![(x, r(1)), (y, r(-1))], Sense::Le, Rational::new(1.into(), 2.into()));
        let out = solve(&p).unwrap();
        let bound = dual_bound(&p, &out.duals, &r(0)).unwrap();
        assert_eq!(bound, out.objective);
        assert_eq!(out.objective, Rational::new(5.into(), 4.into()));
    }
}
