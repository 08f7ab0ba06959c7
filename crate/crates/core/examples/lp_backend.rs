//! Solve a small LP with both arithmetic backends.

use fdt::lp::{self, Direction, LpProblem, Sense};
use fdt::{Rational, Scalar};

fn build<S: Scalar>() -> LpProblem<S> {
    // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6,  0 <= x, y
    let mut p = LpProblem::new(Direction::Maximize);
    let x = p.add_col(S::zero(), None, S::one());
    let y = p.add_col(S::zero(), None, S::one());
    p.add_row(vec![(x, S::one()), (y, S::from_i64(2))], Sense::Le, S::from_i64(4));
    p.add_row(vec![(x, S::from_i64(3)), (y, S::one())], Sense::Le, S::from_i64(6));
    p
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = lp::solve(&build::<Rational>())?;
    println!("rational: {:?} value {} at ({}, {})", exact.status, exact.objective, exact.solution[0], exact.solution[1]);
    let float = lp::solve(&build::<f64>())?;
    println!("float:    {:?} value {:.6} after {} pivots", float.status, float.objective, float.iterations);
    Ok(())
}
