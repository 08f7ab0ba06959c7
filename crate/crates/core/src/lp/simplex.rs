//! Two-phase bounded-variable revised simplex.
//!
//! Each row `r` gets a logical column `w_r` with `a_r x - w_r = 0`; the row
//! sense only shapes the bounds of `w_r`. Column bounds are handled by the
//! ratio test (no explicit bound rows). The basis inverse is kept dense and
//! updated by elementary row operations; float solves refactor it periodically.
//!
//! Pricing is Dantzig's rule until a run of degenerate pivots is seen, after
//! which Bland's rule is used for the rest of the phase.

use crate::lp::{Direction, LpError, LpOutcome, LpProblem, LpStatus, Sense};
use crate::scalar::Scalar;

const DEGENERATE_RUN_BEFORE_BLAND: usize = 30;
const REFACTOR_EVERY: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structural,
    Logical,
    Artificial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Tableau<S> {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, S)>>,
    kind: Vec<Kind>,
    lo: Vec<Option<S>>,
    hi: Vec<Option<S>>,
    x: Vec<S>,
    place: Vec<Place>,
    basis: Vec<usize>,
    binv: Vec<Vec<S>>,
    cost: Vec<S>,
    pivots_since_refactor: usize,
    iterations: usize,
    iteration_limit: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

pub fn solve<S: Scalar>(problem: &LpProblem<S>) -> Result<LpOutcome<S>, LpError> {
    problem.validate()?;
    let mut tab = Tableau::build(problem)?;

    let has_artificials = tab.kind.iter().any(|k| *k == Kind::Artificial);
    if has_artificials {
        tab.cost = tab
            .kind
            .iter()
            .map(|k| if *k == Kind::Artificial { S::one() } else { S::zero() })
            .collect();
        match tab.run_phase()? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(LpError::NumericBreakdown("phase one reported an unbounded ray".into()))
            }
        }
        let infeasibility = tab.current_cost();
        if infeasibility > S::feas_tol() {
            return Ok(LpOutcome::without_solution(LpStatus::Infeasible, tab.iterations));
        }
        tab.retire_artificials();
    }

    let flip = problem.direction == Direction::Maximize;
    tab.cost = (0..tab.cols.len())
        .map(|k| {
            if k < tab.n {
                if flip {
                    -problem.objective[k].clone()
                } else {
                    problem.objective[k].clone()
                }
            } else {
                S::zero()
            }
        })
        .collect();
    match tab.run_phase()? {
        PhaseEnd::Unbounded => return Ok(LpOutcome::without_solution(LpStatus::Unbounded, tab.iterations)),
        PhaseEnd::Optimal => {}
    }
    if !S::EXACT {
        tab.refactor()?;
    }

    let solution: Vec<S> = tab.x[..tab.n].to_vec();
    if !S::EXACT {
        let scale = problem
            .rows
            .iter()
            .map(|r| r.rhs.abs())
            .fold(S::one(), S::max_of);
        let violation = problem.max_violation(&solution);
        if violation > S::from_rational(&crate::scalar::rational_from_f64(1e-6)) * scale {
            return Err(LpError::NumericBreakdown(format!(
                "final residual {violation} exceeds tolerance"
            )));
        }
    }
    let mut duals = tab.row_duals();
    if flip {
        duals = duals.into_iter().map(|v| -v).collect();
    }
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        objective: problem.objective_value(&solution),
        solution,
        basis: tab.basis.clone(),
        duals,
        iterations: tab.iterations,
    })
}

impl<S: Scalar> Tableau<S> {
    fn build(problem: &LpProblem<S>) -> Result<Self, LpError> {
        let n = problem.num_cols();
        let m = problem.num_rows();
        let mut cols: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
        for (r, row) in problem.rows.iter().enumerate() {
            for (j, v) in &row.coefs {
                if !v.is_exact_zero() {
                    cols[*j].push((r, v.clone()));
                }
            }
        }
        // Merge duplicate entries within a column.
        for col in cols.iter_mut() {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, S)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv = lv.clone() + v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_exact_zero());
            *col = merged;
        }
        let mut kind = vec![Kind::Structural; n];
        let mut lo: Vec<Option<S>> = problem.lower.iter().cloned().map(Some).collect();
        let mut hi: Vec<Option<S>> = problem.upper.clone();
        let mut x: Vec<S> = problem.lower.clone();
        let mut place = vec![Place::AtLower; n];

        let activities = problem.activities(&x);
        let mut basis = vec![usize::MAX; m];
        let mut needs_artificial = vec![false; m];
        let mut diag: Vec<S> = vec![S::one(); m];
        for (r, row) in problem.rows.iter().enumerate() {
            cols.push(vec![(r, -S::one())]);
            kind.push(Kind::Logical);
            let (wl, wh) = match row.sense {
                Sense::Ge => (Some(row.rhs.clone()), None),
                Sense::Le => (None, Some(row.rhs.clone())),
                Sense::Eq => (Some(row.rhs.clone()), Some(row.rhs.clone())),
            };
            lo.push(wl.clone());
            hi.push(wh.clone());
            let act = activities[r].clone();
            let below = wl.as_ref().map_or(false, |l| act < *l);
            let above = wh.as_ref().map_or(false, |h| act > *h);
            if !below && !above {
                x.push(act);
                place.push(Place::Basic(r));
                basis[r] = n + r;
                diag[r] = -S::one();
            } else {
                let (bound, at) = if below {
                    (wl.unwrap(), Place::AtLower)
                } else {
                    (wh.unwrap(), Place::AtUpper)
                };
                x.push(bound);
                place.push(at);
                needs_artificial[r] = true;
            }
        }
        // Artificials for rows whose logical could not start basic.
        for r in 0..m {
            if needs_artificial[r] {
                let w = x[n + r].clone();
                let gap = w - activities[r].clone();
                let sign = if gap > S::zero() { S::one() } else { -S::one() };
                let k = cols.len();
                cols.push(vec![(r, sign.clone())]);
                kind.push(Kind::Artificial);
                lo.push(Some(S::zero()));
                hi.push(None);
                x.push(gap.abs());
                place.push(Place::Basic(r));
                basis[r] = k;
                diag[r] = sign;
            }
        }
        let mut binv = vec![vec![S::zero(); m]; m];
        for r in 0..m {
            binv[r][r] = S::one() / diag[r].clone();
        }
        let total = cols.len();
        Ok(Tableau {
            m,
            n,
            cols,
            kind,
            lo,
            hi,
            x,
            place,
            basis,
            binv,
            cost: vec![S::zero(); total],
            pivots_since_refactor: 0,
            iterations: 0,
            iteration_limit: 1000 + 100 * (n + m),
        })
    }

    fn current_cost(&self) -> S {
        self.cost
            .iter()
            .zip(&self.x)
            .fold(S::zero(), |acc, (c, v)| if c.is_exact_zero() { acc } else { acc + c.clone() * v.clone() })
    }

    /// `y = c_B B^{-1}`.
    fn row_duals(&self) -> Vec<S> {
        let mut y = vec![S::zero(); self.m];
        for (p, &k) in self.basis.iter().enumerate() {
            let c = &self.cost[k];
            if c.is_exact_zero() {
                continue;
            }
            for (i, b) in self.binv[p].iter().enumerate() {
                if !b.is_exact_zero() {
                    y[i] = y[i].clone() + c.clone() * b.clone();
                }
            }
        }
        y
    }

    fn reduced_cost(&self, k: usize, y: &[S]) -> S {
        self.cols[k]
            .iter()
            .fold(self.cost[k].clone(), |acc, (r, v)| acc - y[*r].clone() * v.clone())
    }

    /// `B^{-1} a_k`.
    fn column(&self, k: usize) -> Vec<S> {
        let mut alpha = vec![S::zero(); self.m];
        for (p, row) in self.binv.iter().enumerate() {
            let mut acc = S::zero();
            for (r, v) in &self.cols[k] {
                let b = &row[*r];
                if !b.is_exact_zero() {
                    acc = acc + b.clone() * v.clone();
                }
            }
            alpha[p] = acc;
        }
        alpha
    }

    fn is_fixed(&self, k: usize) -> bool {
        matches!((&self.lo[k], &self.hi[k]), (Some(l), Some(h)) if l >= h)
    }

    fn candidate_direction(&self, k: usize, d: &S) -> Option<bool> {
        if self.is_fixed(k) {
            return None;
        }
        let tol = S::opt_tol();
        match self.place[k] {
            Place::Basic(_) => None,
            Place::AtLower if *d < -tol.clone() => Some(true),
            Place::AtUpper if *d > tol => Some(false),
            _ => None,
        }
    }

    fn run_phase(&mut self) -> Result<PhaseEnd, LpError> {
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= self.iteration_limit {
                return Err(LpError::CyclingGuard(self.iterations));
            }
            if !S::EXACT && self.pivots_since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.row_duals();

            let mut entering: Option<(usize, bool, S)> = None;
            for k in 0..self.cols.len() {
                if matches!(self.place[k], Place::Basic(_)) {
                    continue;
                }
                let d = self.reduced_cost(k, &y);
                if let Some(increase) = self.candidate_direction(k, &d) {
                    let score = d.abs();
                    match &entering {
                        None => entering = Some((k, increase, score)),
                        Some((_, _, best)) if !bland && score > *best => entering = Some((k, increase, score)),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some((q, increase, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let alpha = self.column(q);
            let dir = if increase { S::one() } else { -S::one() };

            // Step along the edge: basic p changes by -dir * alpha_p per unit.
            let mut best: Option<(S, Option<usize>, S)> = None;
            if let (Some(l), Some(h)) = (&self.lo[q], &self.hi[q]) {
                best = Some((h.clone() - l.clone(), None, S::zero()));
            }
            let ptol = S::pivot_tol();
            for p in 0..self.m {
                let a = alpha[p].clone();
                if a.abs() <= ptol {
                    continue;
                }
                let delta = -(dir.clone() * a.clone());
                let k = self.basis[p];
                let limit = if delta < S::zero() {
                    self.lo[k].as_ref().map(|l| (self.x[k].clone() - l.clone()) / (-delta.clone()))
                } else {
                    self.hi[k].as_ref().map(|h| (h.clone() - self.x[k].clone()) / delta.clone())
                };
                let Some(limit) = limit else { continue };
                let limit = S::max_of(limit, S::zero());
                let better = match &best {
                    None => true,
                    Some((t, leaving, mag)) => {
                        if limit < *t {
                            true
                        } else if limit == *t {
                            match leaving {
                                None => false,
                                Some(lp) => {
                                    if bland {
                                        k < self.basis[*lp]
                                    } else {
                                        a.abs() > *mag
                                    }
                                }
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((limit, Some(p), a.abs()));
                }
            }
            let Some((step, leaving, _)) = best else {
                return Ok(PhaseEnd::Unbounded);
            };

            self.iterations += 1;
            if step.is_zero_tol() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }

            if !step.is_exact_zero() {
                self.x[q] = self.x[q].clone() + dir.clone() * step.clone();
                for p in 0..self.m {
                    if alpha[p].is_exact_zero() {
                        continue;
                    }
                    let k = self.basis[p];
                    self.x[k] = self.x[k].clone() - dir.clone() * alpha[p].clone() * step.clone();
                }
            }
            match leaving {
                None => {
                    // Bound flip.
                    self.place[q] = if increase { Place::AtUpper } else { Place::AtLower };
                    self.x[q] = if increase {
                        self.hi[q].clone().unwrap()
                    } else {
                        self.lo[q].clone().unwrap()
                    };
                }
                Some(p) => {
                    let out = self.basis[p];
                    let delta = -(dir.clone() * alpha[p].clone());
                    if delta < S::zero() {
                        self.place[out] = Place::AtLower;
                        self.x[out] = self.lo[out].clone().unwrap();
                    } else {
                        self.place[out] = Place::AtUpper;
                        self.x[out] = self.hi[out].clone().unwrap();
                    }
                    self.pivot(p, q, &alpha);
                }
            }
        }
    }

    fn pivot(&mut self, p: usize, q: usize, alpha: &[S]) {
        let piv = alpha[p].clone();
        let pivot_row: Vec<S> = self.binv[p]
            .iter()
            .map(|v| if v.is_exact_zero() { S::zero() } else { v.clone() / piv.clone() })
            .collect();
        let nonzero: Vec<usize> = (0..self.m).filter(|c| !pivot_row[*c].is_exact_zero()).collect();
        for (i, row) in self.binv.iter_mut().enumerate() {
            if i == p || alpha[i].is_exact_zero() {
                continue;
            }
            let f = alpha[i].clone();
            for &c in &nonzero {
                row[c] = row[c].clone() - f.clone() * pivot_row[c].clone();
            }
        }
        self.binv[p] = pivot_row;
        self.basis[p] = q;
        self.place[q] = Place::Basic(p);
        self.pivots_since_refactor += 1;
    }

    /// After phase one: pivot basic artificials out where possible and pin all artificials at zero.
    fn retire_artificials(&mut self) {
        for p in 0..self.m {
            let k = self.basis[p];
            if self.kind[k] != Kind::Artificial {
                continue;
            }
            let mut best: Option<(usize, S)> = None;
            for j in 0..self.cols.len() {
                if self.kind[j] == Kind::Artificial || matches!(self.place[j], Place::Basic(_)) {
                    continue;
                }
                let v = self.cols[j].iter().fold(S::zero(), |acc, (r, a)| {
                    let b = &self.binv[p][*r];
                    if b.is_exact_zero() {
                        acc
                    } else {
                        acc + b.clone() * a.clone()
                    }
                });
                let mag = v.abs();
                if mag > S::pivot_tol() && best.as_ref().map_or(true, |(_, m)| mag > *m) {
                    best = Some((j, mag));
                }
            }
            if let Some((j, _)) = best {
                let alpha = self.column(j);
                // Degenerate pivot: the artificial is zero (float residue is cleared by the refactor below).
                self.x[k] = S::zero();
                self.place[k] = Place::AtLower;
                self.pivot(p, j, &alpha);
            }
        }
        for k in 0..self.cols.len() {
            if self.kind[k] == Kind::Artificial {
                self.hi[k] = Some(S::zero());
                self.lo[k] = Some(S::zero());
                if !matches!(self.place[k], Place::Basic(_)) {
                    self.x[k] = S::zero();
                    self.place[k] = Place::AtLower;
                }
            }
        }
        if !S::EXACT {
            // Singular here only if phase one already broke down; the next refactor reports it.
            let _ = self.refactor();
        }
    }

    /// Rebuilds `B^{-1}` from scratch and recomputes basic values (float only).
    ///
    /// Basic columns with a single entry (logicals, artificials) on distinct rows
    /// are inverted directly; only the block of the remaining columns on the
    /// remaining rows goes through Gauss-Jordan.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut row_owner: Vec<Option<usize>> = vec![None; m];
        let mut dense_pos: Vec<usize> = Vec::new();
        for (p, &k) in self.basis.iter().enumerate() {
            match self.cols[k].as_slice() {
                [(r, _)] if row_owner[*r].is_none() => row_owner[*r] = Some(p),
                _ => dense_pos.push(p),
            }
        }
        let dense_rows: Vec<usize> = (0..m).filter(|r| row_owner[*r].is_none()).collect();
        let t = dense_pos.len();
        if dense_rows.len() != t {
            return Err(LpError::NumericBreakdown("singular basis during refactorisation".into()));
        }
        let mut local = vec![usize::MAX; m];
        for (i, r) in dense_rows.iter().enumerate() {
            local[*r] = i;
        }
        // [F | I] where F is the dense block (rows `dense_rows`, columns `dense_pos`).
        let mut a = vec![vec![S::zero(); 2 * t]; t];
        for (c, &p) in dense_pos.iter().enumerate() {
            for (r, v) in &self.cols[self.basis[p]] {
                if local[*r] != usize::MAX {
                    a[local[*r]][c] = v.clone();
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[t + i] = S::one();
        }
        for c in 0..t {
            let mut piv = c;
            let mut mag = a[c][c].abs();
            for r in c + 1..t {
                let v = a[r][c].abs();
                if v > mag {
                    mag = v;
                    piv = r;
                }
            }
            if mag <= S::from_rational(&crate::scalar::rational_from_f64(1e-12)) {
                return Err(LpError::NumericBreakdown("singular basis during refactorisation".into()));
            }
            a.swap(c, piv);
            let d = a[c][c].clone();
            for v in a[c].iter_mut() {
                *v = v.clone() / d.clone();
            }
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == c || row[c].is_exact_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (dst, src) in row.iter_mut().zip(&pivot_row) {
                    *dst = dst.clone() - f.clone() * src.clone();
                }
            }
        }
        // Rows of F^{-1} by dense position, columns by dense row.
        for (c, &p) in dense_pos.iter().enumerate() {
            let mut row = vec![S::zero(); m];
            for (i, &r) in dense_rows.iter().enumerate() {
                row[r] = a[c][t + i].clone();
            }
            self.binv[p] = row;
        }
        // A singleton at (r, v) gives the row (e_r - E_r F^{-1}) / v, with E_r the
        // entries of row r in the dense columns.
        let mut e_rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); m];
        for &p in &dense_pos {
            for (r, v) in &self.cols[self.basis[p]] {
                if row_owner[*r].is_some() {
                    e_rows[*r].push((p, v.clone()));
                }
            }
        }
        for r in 0..m {
            let Some(p) = row_owner[r] else { continue };
            let v = self.cols[self.basis[p]][0].1.clone();
            let mut row = vec![S::zero(); m];
            row[r] = S::one() / v.clone();
            for (q, e) in &e_rows[r] {
                let f = e.clone() / v.clone();
                for &rr in &dense_rows {
                    let b = &self.binv[*q][rr];
                    if !b.is_exact_zero() {
                        row[rr] = row[rr].clone() - f.clone() * b.clone();
                    }
                }
            }
            self.binv[p] = row;
        }
        // x_B = B^{-1} (-N x_N)
        let mut rhs = vec![S::zero(); m];
        for k in 0..self.cols.len() {
            if matches!(self.place[k], Place::Basic(_)) || self.x[k].is_exact_zero() {
                continue;
            }
            for (r, v) in &self.cols[k] {
                rhs[*r] = rhs[*r].clone() - v.clone() * self.x[k].clone();
            }
        }
        for p in 0..m {
            let k = self.basis[p];
            self.x[k] = self.binv[p]
                .iter()
                .zip(&rhs)
                .fold(S::zero(), |acc, (b, v)| acc + b.clone() * v.clone());
        }
        self.pivots_since_refactor = 0;
        Ok(())
    }
}

/// Number of structural coordinates strictly inside their bounds.
pub fn interior_count<S: Scalar>(problem: &LpProblem<S>, x: &[S]) -> usize {
    x.iter()
        .enumerate()
        .filter(|(j, v)| {
            let above = **v > problem.lower[*j].clone() + S::zero_tol();
            let below = problem.upper[*j]
                .as_ref()
                .map_or(true, |h| **v < h.clone() - S::zero_tol());
            above && below
        })
        .count()
}

/// Number of rows satisfied with equality by `x` (within the zero tolerance).
pub fn active_rows<S: Scalar>(problem: &LpProblem<S>, x: &[S]) -> usize {
    let tol = S::from_rational(&crate::scalar::rational_from_f64(1e-7));
    problem
        .rows
        .iter()
        .zip(problem.activities(x))
        .filter(|(row, act)| {
            let gap = (act.clone() - row.rhs.clone()).abs();
            if S::EXACT {
                gap.is_exact_zero()
            } else {
                gap <= tol.clone()
            }
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{dual_bound, solve as solve_any};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn equality_rows_and_bound_flips() {
        // max 3x + 2y  s.t. x + y = 4, x <= 3 (bound), y in [0, 10]
        let mut p = LpProblem::<Rational>::new(Direction::Maximize);
        let x = p.add_col(q(0, 1), Some(q(3, 1)), q(3, 1));
        let y = p.add_col(q(0, 1), Some(q(10, 1)), q(2, 1));
        p.add_row(vec![(x, q(1, 1)), (y, q(1, 1))], Sense::Eq, q(4, 1));
        let out = solve(&p).unwrap();
        assert_eq!(out.solution, vec![q(3, 1), q(1, 1)]);
        assert_eq!(out.objective, q(11, 1));
    }

    #[test]
    fn degenerate_vertex_problem_terminates() {
        // Classic Beale-style cycling example (Chvatal), solved with the guard.
        let mut p = LpProblem::<Rational>::new(Direction::Maximize);
        let c = [q(10, 1), q(-57, 1), q(-9, 1), q(-24, 1)];
        let cols: Vec<usize> = c.iter().map(|v| p.add_col(q(0, 1), None, v.clone())).collect();
        let rows = [
            [q(1, 2), q(-11, 2), q(-5, 2), q(9, 1)],
            [q(1, 2), q(-3, 2), q(-1, 2), q(1, 1)],
            [q(1, 1), q(0, 1), q(0, 1), q(0, 1)],
        ];
        let rhs = [q(0, 1), q(0, 1), q(1, 1)];
        for (row, b) in rows.iter().zip(rhs) {
            let coefs = cols.iter().zip(row).map(|(j, v)| (*j, v.clone())).collect();
            p.add_row(coefs, Sense::Le, b);
        }
        let out = solve(&p).unwrap();
        assert_eq!(out.objective, q(1, 1));
    }

    #[test]
    fn prune_style_lp_has_sparse_vertex() {
        // max t1 + t2 s.t. t1 + t2 <= 1: a vertex has at most one nonzero.
        let mut p = LpProblem::<Rational>::new(Direction::Maximize);
        let a = p.add_col(q(0, 1), None, q(1, 1));
        let b = p.add_col(q(0, 1), None, q(1, 1));
        p.add_row(vec![(a, q(1, 1)), (b, q(1, 1))], Sense::Le, q(1, 1));
        let out = solve(&p).unwrap();
        assert_eq!(out.objective, q(1, 1));
        assert_eq!(out.solution.iter().filter(|v| !v.is_exact_zero()).count(), 1);
        assert!(interior_count(&p, &out.solution) <= active_rows(&p, &out.solution));
    }

    fn random_problem(seed: &[(i8, i8, i8)], costs: &[i8], senses: &[u8]) -> LpProblem<Rational> {
        let n = costs.len();
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        for c in costs {
            p.add_col(q(0, 1), Some(q(3, 1)), q(*c as i64, 1));
        }
        for (r, chunk) in seed.chunks(n.max(1)).enumerate() {
            let coefs: Vec<(usize, Rational)> =
                chunk.iter().enumerate().map(|(j, (a, _, _))| (j, q(*a as i64, 1))).collect();
            let rhs = chunk.first().map_or(0, |(_, b, _)| *b as i64);
            let sense = match senses.get(r).copied().unwrap_or(0) % 3 {
                0 => Sense::Ge,
                1 => Sense::Le,
                _ => Sense::Eq,
            };
            p.add_row(coefs, sense, q(rhs, 1));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn float_and_exact_agree_and_duals_certify(
            costs in proptest::collection::vec(-4i8..5, 1..6),
            entries in proptest::collection::vec((-3i8..4, -4i8..5, 0i8..1), 1..24),
            senses in proptest::collection::vec(0u8..3, 0..6),
        ) {
            let exact = random_problem(&entries, &costs, &senses);
            let float = exact.map(|v| v.to_f64());
            let a = solve_any(&exact).unwrap();
            let b = solve_any(&float).unwrap();
            prop_assert_eq!(a.status, b.status);
            if a.is_optimal() {
                prop_assert!((a.objective.to_f64() - b.objective).abs() < 1e-6);
                prop_assert_eq!(exact.max_violation(&a.solution), q(0, 1));
                let bound = dual_bound(&exact, &a.duals, &q(0, 1)).expect("dual feasible");
                prop_assert_eq!(bound, a.objective.clone());
                let fbound = dual_bound(&float, &b.duals, &1e-7).expect("dual feasible");
                prop_assert!((fbound - b.objective).abs() < 1e-7);
                prop_assert!(interior_count(&exact, &a.solution) <= active_rows(&exact, &a.solution));
            }
        }
    }
}
