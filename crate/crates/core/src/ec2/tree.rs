//! Level-by-level three-way decomposition with floor rounding at the leaves.

use rayon::prelude::*;

use crate::certificate::{verify_with, Certificate, VerifyReport};
use crate::error::{FdtError, Result};
use crate::fdt::{prune, Node};
use crate::graph::{check_2ec, Graph};
use crate::model::support;
use crate::scalar::{Rational, Scalar};

use super::{branch_lpc_2ec, floor_round, SubtourPoint};

#[derive(Debug, Clone, Copy)]
pub struct Ec2Options {
    pub parallel: bool,
}

impl Default for Ec2Options {
    fn default() -> Self {
        Ec2Options { parallel: true }
    }
}

#[derive(Debug, Clone)]
pub struct Ec2Level<S> {
    pub edge: usize,
    /// `gamma` of every node that was branched.
    pub branch_masses: Vec<[S; 3]>,
    pub passed_through: usize,
    pub unpruned: Vec<Node<S>>,
    pub nodes: Vec<Node<S>>,
}

#[derive(Debug, Clone)]
pub struct Ec2Run<S> {
    pub certificate: Certificate<S>,
    pub order: Vec<usize>,
    pub levels: Vec<Ec2Level<S>>,
    /// Whether the run had to be repeated in exact arithmetic.
    pub exact_retry: bool,
}

/// Support edges with fractional values first, then the rest, each by index.
pub fn branch_order<S: Scalar>(x: &[S]) -> Vec<usize> {
    let supp = support(x).indices;
    let (mut frac, ints): (Vec<usize>, Vec<usize>) =
        supp.into_iter().partition(|k| x[*k].near_integer().is_none());
    frac.extend(ints);
    frac
}

pub fn fdt_2ec<S: Scalar>(point: &SubtourPoint<S>) -> Result<Certificate<S>> {
    Ok(fdt_2ec_with(point, &Ec2Options::default())?.certificate)
}

/// Runs the tree; a float run whose leaves fail the connectivity check is
/// repeated with rationals.
pub fn fdt_2ec_with<S: Scalar>(point: &SubtourPoint<S>, opts: &Ec2Options) -> Result<Ec2Run<S>> {
    if let Some(u) = point.violated_cut() {
        return Err(FdtError::Validation(format!(
            "point violates the cut around vertices {u:?}"
        )));
    }
    match run(point, opts) {
        Err(e) if !S::EXACT && matches!(e, FdtError::Invariant(_) | FdtError::Lp(_)) => {
            log::debug!("2EC tree failed in float mode ({e}); retrying exactly");
            let exact = run(&point.convert::<Rational>(), opts)?;
            let back = |v: &Rational| S::from_rational(v);
            Ok(Ec2Run {
                certificate: Certificate {
                    factor: back(&exact.certificate.factor),
                    weights: exact.certificate.weights.iter().map(back).collect(),
                    theta: exact.certificate.theta.iter().map(back).collect(),
                    solutions: exact.certificate.solutions,
                    base_point: point.x.clone(),
                },
                order: exact.order,
                levels: exact
                    .levels
                    .into_iter()
                    .map(|l| Ec2Level {
                        edge: l.edge,
                        branch_masses: l.branch_masses.iter().map(|g| g.each_ref().map(back)).collect(),
                        passed_through: l.passed_through,
                        unpruned: l.unpruned.iter().map(|n| convert_node(n)).collect(),
                        nodes: l.nodes.iter().map(|n| convert_node(n)).collect(),
                    })
                    .collect(),
                exact_retry: true,
            })
        }
        other => other,
    }
}

fn convert_node<S: Scalar>(node: &Node<Rational>) -> Node<S> {
    Node {
        point: node.point.iter().map(S::from_rational).collect(),
        multiplier: S::from_rational(&node.multiplier),
        fixed_prefix: node.fixed_prefix,
    }
}

#[allow(clippy::type_complexity)]
fn expand<S: Scalar>(graph: &Graph, node: &Node<S>, e: usize, pos: usize) -> Result<(Vec<Node<S>>, Option<[S; 3]>)> {
    if let Some(v) = node.point[e].near_integer() {
        let mut point = node.point.clone();
        point[e] = v;
        let child = Node {
            point,
            multiplier: node.multiplier.clone(),
            fixed_prefix: pos + 1,
        };
        return Ok((vec![child], None));
    }
    let res = branch_lpc_2ec(graph, &node.point, e)?;
    let children = res
        .x_hat
        .iter()
        .zip(&res.gamma)
        .filter_map(|(p, g)| {
            p.as_ref().map(|p| Node {
                point: p.clone(),
                multiplier: node.multiplier.clone() * g.clone(),
                fixed_prefix: pos + 1,
            })
        })
        .collect();
    Ok((children, Some(res.gamma)))
}

fn run<S: Scalar>(point: &SubtourPoint<S>, opts: &Ec2Options) -> Result<Ec2Run<S>> {
    let graph = &point.graph;
    let x = &point.x;
    let order = branch_order(x);
    let mut level = vec![Node::root(x.clone())];
    let mut levels = Vec::with_capacity(order.len());

    for (pos, &e) in order.iter().enumerate() {
        let expanded: Vec<Result<_>> = if opts.parallel && level.len() > 1 {
            level.par_iter().map(|n| expand(graph, n, e, pos)).collect()
        } else {
            level.iter().map(|n| expand(graph, n, e, pos)).collect()
        };
        let mut unpruned = Vec::new();
        let mut branch_masses = Vec::new();
        let mut passed_through = 0;
        for item in expanded {
            let (children, masses) = item?;
            match masses {
                Some(g) => branch_masses.push(g),
                None => passed_through += 1,
            }
            unpruned.extend(children);
        }
        let pruned = prune(unpruned.clone(), x)?;
        log::trace!(
            "edge {e}: {} branched, {} passed, {} -> {} nodes",
            branch_masses.len(),
            passed_through,
            unpruned.len(),
            pruned.nodes.len()
        );
        levels.push(Ec2Level {
            edge: e,
            branch_masses,
            passed_through,
            unpruned,
            nodes: pruned.nodes.clone(),
        });
        level = pruned.nodes;
    }

    let mut theta: Vec<S> = Vec::new();
    let mut solutions: Vec<Vec<u8>> = Vec::new();
    for leaf in &level {
        let z = floor_round(&leaf.point)?;
        if !check_2ec(graph, &z) {
            return Err(FdtError::Invariant("a floored leaf is not 2-edge-connected".into()));
        }
        match solutions.iter().position(|s| *s == z) {
            Some(k) => theta[k] = theta[k].clone() + leaf.multiplier.clone(),
            None => {
                solutions.push(z);
                theta.push(leaf.multiplier.clone());
            }
        }
    }
    let certificate = Certificate::from_leaves(theta, solutions, x.clone())?;
    Ok(Ec2Run {
        certificate,
        order,
        levels,
        exact_retry: false,
    })
}

/// Certificate check with 2-edge-connectivity as the feasibility test and cap 2.
pub fn verify_2ec_certificate<S: Scalar>(cert: &Certificate<S>, graph: &Graph) -> Result<VerifyReport> {
    verify_with(cert, graph.num_edges(), 2, |z| {
        Ok((!check_2ec(graph, z)).then(|| "multigraph has a cut crossed fewer than 2 times".to_string()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn integral_cycle_is_its_own_certificate() {
        let p = SubtourPoint::new(Graph::cycle(5), vec![q(1, 1); 5]).unwrap();
        let cert = fdt_2ec(&p).unwrap();
        assert_eq!(cert.solutions, vec![vec![1; 5]]);
        assert_eq!(cert.factor, q(1, 1));
        assert!(verify_2ec_certificate(&cert, &p.graph).unwrap().is_valid());
    }

    #[test]
    fn six_cycle_with_diagonals() {
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend([(0, 3), (1, 4), (2, 5)]);
        let g = Graph::new(6, edges).unwrap();
        let mut x = vec![q(1, 2); 6];
        x.extend(vec![q(1, 1); 3]);
        let p = SubtourPoint::new(g, x).unwrap();
        let run = fdt_2ec_with(&p, &Ec2Options::default()).unwrap();
        let cert = &run.certificate;
        assert!(verify_2ec_certificate(cert, &p.graph).unwrap().is_valid());
        assert!(cert.factor <= q(3, 2), "factor {}", cert.factor);
        assert_eq!(run.order[..6], [0, 1, 2, 3, 4, 5]);

        let float = fdt_2ec(&p.convert::<f64>()).unwrap();
        assert!((float.factor - cert.factor.to_f64()).abs() < 1e-6);
    }

    #[test]
    fn rejects_points_with_a_small_cut() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let p = SubtourPoint::new(g, vec![1.0, 1.0]).unwrap();
        assert!(matches!(fdt_2ec(&p), Err(FdtError::Validation(_))));
    }
}
