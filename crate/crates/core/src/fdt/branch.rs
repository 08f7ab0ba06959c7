//! Splitting a node into a 0-branch and a 1-branch on one coordinate.

use crate::error::{FdtError, Result};
use crate::lp::{self, Direction, LpProblem, LpStatus, Sense};
use crate::model::IpInstance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BranchResult<S> {
    /// `gamma[j]` is the weight of branch `j`.
    pub gamma: [S; 2],
    /// Branch points; `None` when the branch has zero weight.
    pub x_hat: [Option<Vec<S>>; 2],
}

impl<S: Scalar> BranchResult<S> {
    pub fn total(&self) -> S {
        self.gamma[0].clone() + self.gamma[1].clone()
    }
}

/// Column layout of the branching LP: `lambda_0`, `lambda_1`, then `x^0` and `x^1`
/// on the support of `x'`. The branch coordinate of `x^0` is fixed at zero and
/// the one of `x^1` equals `lambda_1`, so neither gets a column.
pub(crate) struct Layout {
    support: Vec<usize>,
    cols: [Vec<Option<usize>>; 2],
}

impl Layout {
    /// Column holding `x^j_i`, if it has one.
    fn entry(&self, j: usize, i: usize) -> Option<usize> {
        self.cols[j][i]
    }
}

pub(crate) fn build_lpc<S: Scalar>(inst: &IpInstance, x_prime: &[S], ell: usize) -> (LpProblem<S>, Layout) {
    let n = inst.num_vars;
    let upper = S::from_i64(inst.var_upper() as i64);
    let mut lp = LpProblem::new(Direction::Maximize);
    let lam = [
        lp.add_col(S::zero(), None, S::one()),
        lp.add_col(S::zero(), None, S::one()),
    ];
    let support: Vec<usize> = (0..n).filter(|i| !x_prime[*i].is_zero_tol()).collect();
    let mut cols = [vec![None; n], vec![None; n]];
    for (j, col) in cols.iter_mut().enumerate() {
        for &i in &support {
            if i == ell {
                // x^0_ell = 0; x^1_ell is lambda_1 itself.
                col[i] = if j == 1 { Some(lam[1]) } else { None };
            } else {
                col[i] = Some(lp.add_col(S::zero(), None, S::zero()));
            }
        }
    }
    let layout = Layout { support, cols };

    for j in 0..2 {
        for row in &inst.rows {
            let mut coefs: Vec<(usize, S)> = Vec::with_capacity(row.coefs.len() + 1);
            let mut lam_coef = -S::from_rational(&row.rhs);
            for (i, a) in &row.coefs {
                match layout.entry(j, *i) {
                    Some(c) if c == lam[j] => lam_coef = lam_coef + S::from_rational(a),
                    Some(c) => coefs.push((c, S::from_rational(a))),
                    None => {}
                }
            }
            coefs.push((lam[j], lam_coef));
            lp.add_row(coefs, Sense::Ge, S::zero());
        }
        for &i in &layout.support {
            if let Some(c) = layout.entry(j, i) {
                if c != lam[j] {
                    lp.add_row(vec![(c, S::one()), (lam[j], -upper.clone())], Sense::Le, S::zero());
                }
            }
        }
    }
    for &i in &layout.support {
        let coefs: Vec<(usize, S)> = (0..2)
            .filter_map(|j| layout.entry(j, i).map(|c| (c, S::one())))
            .collect();
        if !coefs.is_empty() {
            lp.add_row(coefs, Sense::Le, x_prime[i].clone());
        }
    }
    if !layout.support.contains(&ell) {
        // x'_ell = 0 forces lambda_1 = 0 through the packing row.
        lp.add_row(vec![(lam[1], S::one())], Sense::Le, S::zero());
    }
    lp.add_row(vec![(lam[0], S::one()), (lam[1], S::one())], Sense::Le, S::one());
    (lp, layout)
}

/// Solves the branching LP for `x'` on coordinate `ell` and rounds up the
/// coordinates in `fixed` (those branched on earlier).
pub fn branch_lpc<S: Scalar>(
    inst: &IpInstance,
    x_prime: &[S],
    ell: usize,
    fixed: &[usize],
) -> Result<BranchResult<S>> {
    if x_prime.len() != inst.num_vars || ell >= inst.num_vars {
        return Err(FdtError::Dimension(format!(
            "branch point has {} entries, coordinate {ell}, instance has {} variables",
            x_prime.len(),
            inst.num_vars
        )));
    }
    let (lp, layout) = build_lpc(inst, x_prime, ell);
    let out = lp::solve(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(FdtError::Invariant(format!("branching LP returned {:?}", out.status)));
    }
    let upper = S::from_i64(inst.var_upper() as i64);
    let mut gamma = [out.solution[0].clone(), out.solution[1].clone()];
    let mut x_hat: [Option<Vec<S>>; 2] = [None, None];
    for j in 0..2 {
        if !gamma[j].is_pos() {
            gamma[j] = S::zero();
            continue;
        }
        let mut point = vec![S::zero(); inst.num_vars];
        for &i in &layout.support {
            if let Some(c) = layout.entry(j, i) {
                let v = out.solution[c].clone() / gamma[j].clone();
                point[i] = S::min_of(S::max_of(v, S::zero()), upper.clone());
            }
        }
        point[ell] = S::from_i64(j as i64);
        for &i in fixed {
            point[i] = point[i].ceil_tol();
        }
        x_hat[j] = Some(point);
    }
    let result = BranchResult { gamma, x_hat };
    if !result.total().is_pos() {
        return Err(FdtError::UnboundedGapOrInfeasible(format!(
            "branching on coordinate {ell} leaves no weight"
        )));
    }
    Ok(result)
}
