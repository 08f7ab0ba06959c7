//! Turning an integral point of the dominant into a feasible integer solution.
//!
//! Coordinates of the support are visited in ascending order. Each step asks
//! whether the relaxation still has a point below the current one with the
//! coordinate at zero; if so it is fixed to 0, otherwise it stays at 1.

use crate::error::{FdtError, Result};
use crate::lp::{self, Direction, LpOutcome, LpProblem, LpStatus, Sense};
use crate::model::{check_integer_feasible, IpInstance, VarKind};
use crate::scalar::{Rational, Scalar};

/// Intermediate point `x^(ell)` whose first `ell` support coordinates are final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomState {
    pub x: Vec<u8>,
    pub ell: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomTrace {
    /// Visiting order (the support of the input).
    pub order: Vec<usize>,
    /// `states[l]` is `x^(l)`; the last entry is the output.
    pub states: Vec<Vec<u8>>,
}

/// The LP `min z_i : A z >= b, z_j = x_j (j finalized), 0 <= z_j <= x_j (otherwise)`,
/// where `i = order[state.ell]`. Columns are the support coordinates, in `order`.
pub fn helper_lp<S: Scalar>(inst: &IpInstance, order: &[usize], state: &DomState) -> LpProblem<S> {
    let mut col_of = vec![usize::MAX; inst.num_vars];
    let mut lp = LpProblem::new(Direction::Minimize);
    for (pos, &j) in order.iter().enumerate() {
        let hi = S::from_i64(state.x[j] as i64);
        let lo = if pos < state.ell { hi.clone() } else { S::zero() };
        let cost = if pos == state.ell { S::one() } else { S::zero() };
        col_of[j] = lp.add_col(lo, Some(hi), cost);
    }
    for row in &inst.rows {
        let coefs: Vec<(usize, S)> = row
            .coefs
            .iter()
            .filter(|(j, _)| col_of[*j] != usize::MAX)
            .map(|(j, v)| (col_of[*j], S::from_rational(v)))
            .collect();
        lp.add_row(coefs, Sense::Ge, S::from_rational(&row.rhs));
    }
    lp
}

pub fn solve_helper_lp<S: Scalar>(
    inst: &IpInstance,
    order: &[usize],
    state: &DomState,
) -> Result<LpOutcome<S>> {
    Ok(lp::solve(&helper_lp::<S>(inst, order, state))?)
}

fn validate_input(inst: &IpInstance, x_tilde: &[u8]) -> Result<()> {
    if inst.kind != VarKind::Binary {
        return Err(FdtError::Validation("DomToIP needs a binary instance".into()));
    }
    if x_tilde.len() != inst.num_vars {
        return Err(FdtError::Dimension(format!(
            "point has {} entries, instance has {} variables",
            x_tilde.len(),
            inst.num_vars
        )));
    }
    if let Some(j) = x_tilde.iter().position(|v| *v > 1) {
        return Err(FdtError::Domain(format!("coordinate {j} of the input is not 0 or 1")));
    }
    Ok(())
}

fn run<S: Scalar>(inst: &IpInstance, x_tilde: &[u8]) -> Result<DomTrace> {
    let order: Vec<usize> = (0..x_tilde.len()).filter(|j| x_tilde[*j] != 0).collect();
    let mut state = DomState {
        x: x_tilde.to_vec(),
        ell: 0,
    };
    let mut states = vec![state.x.clone()];
    while state.ell < order.len() {
        let out = solve_helper_lp::<S>(inst, &order, &state)?;
        match out.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return Err(FdtError::UnboundedGapOrInfeasible(format!(
                    "helper LP infeasible at step {} (coordinate {})",
                    state.ell, order[state.ell]
                )))
            }
            LpStatus::Unbounded => {
                return Err(FdtError::Invariant("helper LP is bounded below by zero".into()))
            }
        }
        if out.objective.abs() <= S::value_zero_tol() {
            state.x[order[state.ell]] = 0;
        }
        state.ell += 1;
        states.push(state.x.clone());
    }
    let report = check_integer_feasible(&state.x, inst)?;
    if !report.feasible {
        return Err(FdtError::UnboundedGapOrInfeasible(format!(
            "final point violates row {:?}",
            report.violated_rows
        )));
    }
    Ok(DomTrace { order, states })
}

/// Runs DomToIP and returns the whole sequence of intermediate points.
///
/// Float runs that end in the unbounded-gap error are repeated exactly, since
/// a misjudged zero test can make a later helper LP infeasible.
pub fn dom_to_ip_traced<S: Scalar>(inst: &IpInstance, x_tilde: &[u8]) -> Result<DomTrace> {
    validate_input(inst, x_tilde)?;
    match run::<S>(inst, x_tilde) {
        Err(e) if e.is_unbounded_gap() && !S::EXACT => {
            log::debug!("DomToIP failed in float mode ({e}); retrying exactly");
            run::<Rational>(inst, x_tilde)
        }
        other => other,
    }
}

/// Returns `z` in `S(I)` with `z <= x_tilde`, or the unbounded-gap error.
pub fn dom_to_ip<S: Scalar>(inst: &IpInstance, x_tilde: &[u8]) -> Result<Vec<u8>> {
    let mut trace = dom_to_ip_traced::<S>(inst, x_tilde)?;
    Ok(trace.states.pop().expect("trace holds the input state"))
}

/// `dom_to_ip(ceil(x))` for a point `x` of the relaxation.
pub fn dom_to_ip_from_fractional<S: Scalar>(inst: &IpInstance, x: &[S]) -> Result<Vec<u8>> {
    let rounded = x
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let c = v.ceil_tol().to_f64();
            if (0.0..=1.0).contains(&c) {
                Ok(c as u8)
            } else {
                Err(FdtError::Domain(format!("coordinate {j} = {v} is outside [0, 1]")))
            }
        })
        .collect::<Result<Vec<u8>>>()?;
    dom_to_ip::<S>(inst, &rounded)
}
