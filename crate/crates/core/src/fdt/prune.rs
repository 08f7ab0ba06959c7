//! Shrinking a level to at most `t` nodes while keeping its total multiplier.

use crate::error::{FdtError, Result};
use crate::lp::{self, simplex, Direction, LpProblem, LpStatus, Sense};
use crate::model::support;
use crate::scalar::Scalar;

use super::{total_multiplier, Node};

#[derive(Debug, Clone)]
pub struct Pruned<S> {
    pub nodes: Vec<Node<S>>,
    pub total_before: S,
    pub total_after: S,
}

/// Re-weights `nodes` by a vertex of `max sum theta : sum theta_j x^j <= x*, theta >= 0`
/// and drops nodes whose weight becomes zero.
pub fn prune<S: Scalar>(nodes: Vec<Node<S>>, x_star: &[S]) -> Result<Pruned<S>> {
    let total_before = total_multiplier(&nodes);
    let rows = support(x_star).indices;
    let mut lp = LpProblem::new(Direction::Maximize);
    for _ in &nodes {
        lp.add_col(S::zero(), None, S::one());
    }
    for &i in &rows {
        let coefs: Vec<(usize, S)> = nodes
            .iter()
            .enumerate()
            .filter(|(_, node)| !node.point[i].is_exact_zero())
            .map(|(j, node)| (j, node.point[i].clone()))
            .collect();
        lp.add_row(coefs, Sense::Le, x_star[i].clone());
    }
    let out = lp::solve(&lp)?;
    match out.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => {
            return Err(FdtError::Invariant("pruning LP is unbounded (a node is the zero vector)".into()))
        }
        LpStatus::Infeasible => return Err(FdtError::Invariant("pruning LP is infeasible".into())),
    }
    let interior = simplex::interior_count(&lp, &out.solution);
    let active = simplex::active_rows(&lp, &out.solution);
    if interior > active {
        return Err(FdtError::Invariant(format!(
            "pruning solution is not a vertex: {interior} free columns, {active} tight rows"
        )));
    }
    let nodes: Vec<Node<S>> = nodes
        .into_iter()
        .zip(out.solution)
        .filter(|(_, theta)| theta.is_pos())
        .map(|(node, theta)| Node {
            multiplier: theta,
            ..node
        })
        .collect();
    let total_after = total_multiplier(&nodes);
    Ok(Pruned {
        nodes,
        total_before,
        total_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn node(point: Vec<Rational>, m: Rational) -> Node<Rational> {
        Node {
            point,
            multiplier: m,
            fixed_prefix: 0,
        }
    }

    #[test]
    fn duplicates_collapse_to_one_node() {
        let x = vec![q(1, 1)];
        let nodes = vec![node(x.clone(), q(3, 10)), node(x.clone(), q(3, 10))];
        let pruned = prune(nodes, &x).unwrap();
        assert_eq!(pruned.total_after, q(1, 1));
        assert_eq!(pruned.nodes.len(), 1);
    }

    #[test]
    fn single_root_is_unchanged() {
        let x = vec![q(1, 2), q(1, 3), q(0, 1)];
        let pruned = prune(vec![Node::root(x.clone())], &x).unwrap();
        assert_eq!(pruned.nodes, vec![Node::root(x)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn never_loses_mass_and_keeps_at_most_t(
            points in prop::collection::vec(prop::collection::vec(0i64..3, 4), 1..9),
            weights in prop::collection::vec(1i64..5, 9),
        ) {
            // Points with entries in {0, 1/2, 1} and an x* that dominates their combination.
            let points: Vec<Vec<Rational>> = points
                .into_iter()
                .map(|p| p.into_iter().map(|v| q(v, 2)).collect())
                .filter(|p: &Vec<Rational>| p.iter().any(|v| *v > q(0, 1)))
                .collect();
            prop_assume!(!points.is_empty());
            let total: i64 = weights[..points.len()].iter().sum();
            let nodes: Vec<Node<Rational>> = points
                .iter()
                .zip(&weights)
                .map(|(p, w)| node(p.clone(), q(*w, total)))
                .collect();
            let x_star = super::super::weighted_sum(&nodes, 4);
            let t = support(&x_star).len();
            let pruned = prune(nodes, &x_star).unwrap();
            prop_assert!(pruned.total_after >= pruned.total_before);
            prop_assert!(pruned.nodes.len() <= t);
            let after = super::super::weighted_sum(&pruned.nodes, 4);
            prop_assert!(after.iter().zip(&x_star).all(|(a, b)| a <= b));
        }
    }
}
