//! The full decomposition tree: branch every node level by level, prune, and
//! turn the leaves into feasible solutions.

use rayon::prelude::*;

use crate::certificate::Certificate;
use crate::domtoip::dom_to_ip;
use crate::error::{FdtError, Result};
use crate::model::{support, to_integer_point, IpInstance, VarKind};
use crate::scalar::Scalar;

use super::{branch_lpc, prune, BranchOrder, Node};

#[derive(Debug, Clone, Copy)]
pub struct FdtOptions {
    pub order: BranchOrder,
    /// Branch the nodes of a level in parallel.
    pub parallel: bool,
}

impl Default for FdtOptions {
    fn default() -> Self {
        FdtOptions {
            order: BranchOrder::Ascending,
            parallel: true,
        }
    }
}

/// What happened at one level of the tree.
#[derive(Debug, Clone)]
pub struct LevelRecord<S> {
    pub coordinate: usize,
    /// `(gamma_0, gamma_1)` for every node that was branched.
    pub branch_masses: Vec<(S, S)>,
    pub passed_through: usize,
    /// The level before pruning.
    pub unpruned: Vec<Node<S>>,
    /// The level after pruning.
    pub nodes: Vec<Node<S>>,
}

#[derive(Debug, Clone)]
pub struct FdtRun<S> {
    pub certificate: Certificate<S>,
    pub order: Vec<usize>,
    pub levels: Vec<LevelRecord<S>>,
}

/// Builds the tree with default options and returns its certificate.
pub fn fdt_tree<S: Scalar>(inst: &IpInstance, x_star: &[S]) -> Result<Certificate<S>> {
    Ok(fdt_tree_with(inst, x_star, &FdtOptions::default())?.certificate)
}

pub(crate) fn check_start_point<S: Scalar>(inst: &IpInstance, x_star: &[S]) -> Result<()> {
    if inst.kind != VarKind::Binary {
        return Err(FdtError::Validation("the binary tree needs a binary instance".into()));
    }
    if x_star.len() != inst.num_vars {
        return Err(FdtError::Dimension(format!(
            "point has {} entries, instance has {} variables",
            x_star.len(),
            inst.num_vars
        )));
    }
    if !inst.lp_feasible(x_star, &S::value_zero_tol()) {
        return Err(FdtError::Validation("starting point is not in the LP relaxation".into()));
    }
    Ok(())
}

/// Expands one node on the coordinate at `order[pos]`.
pub(crate) fn expand<S: Scalar>(
    inst: &IpInstance,
    node: &Node<S>,
    order: &[usize],
    pos: usize,
) -> Result<(Vec<Node<S>>, Option<(S, S)>)> {
    let i = order[pos];
    if let Some(v) = node.point[i].near_integer() {
        let mut point = node.point.clone();
        point[i] = v;
        let child = Node {
            point,
            multiplier: node.multiplier.clone(),
            fixed_prefix: pos + 1,
        };
        return Ok((vec![child], None));
    }
    let res = branch_lpc(inst, &node.point, i, &order[..pos])?;
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
    let [g0, g1] = res.gamma;
    Ok((children, Some((g0, g1))))
}

pub fn fdt_tree_with<S: Scalar>(inst: &IpInstance, x_star: &[S], opts: &FdtOptions) -> Result<FdtRun<S>> {
    check_start_point(inst, x_star)?;
    let order = opts.order.arrange(support(x_star).indices);
    let mut level = vec![Node::root(x_star.to_vec())];
    let mut levels = Vec::with_capacity(order.len());

    for pos in 0..order.len() {
        let expanded: Vec<Result<_>> = if opts.parallel && level.len() > 1 {
            level.par_iter().map(|node| expand(inst, node, &order, pos)).collect()
        } else {
            level.iter().map(|node| expand(inst, node, &order, pos)).collect()
        };
        let mut unpruned = Vec::new();
        let mut branch_masses = Vec::new();
        let mut passed_through = 0;
        for item in expanded {
            let (children, masses) = item?;
            match masses {
                Some(m) => branch_masses.push(m),
                None => passed_through += 1,
            }
            unpruned.extend(children);
        }
        if unpruned.iter().any(|n| n.point.iter().all(|v| v.is_zero_tol())) {
            // The zero vector lies in the relaxation, so it is itself feasible
            // and dominated by any multiple of x*.
            log::debug!("zero vector reached at level {}; certificate has factor 0", pos + 1);
            let zero = vec![0u8; inst.num_vars];
            return Ok(FdtRun {
                certificate: Certificate {
                    factor: S::zero(),
                    weights: vec![S::one()],
                    theta: vec![S::one()],
                    solutions: vec![zero],
                    base_point: x_star.to_vec(),
                },
                order,
                levels,
            });
        }
        let pruned = prune(unpruned.clone(), x_star)?;
        log::trace!(
            "level {}: {} branched, {} passed, {} -> {} nodes",
            pos + 1,
            branch_masses.len(),
            passed_through,
            unpruned.len(),
            pruned.nodes.len()
        );
        levels.push(LevelRecord {
            coordinate: order[pos],
            branch_masses,
            passed_through,
            unpruned,
            nodes: pruned.nodes.clone(),
        });
        level = pruned.nodes;
    }

    let leaf_solutions: Vec<Result<Vec<u8>>> = level
        .par_iter()
        .map(|leaf| {
            let x = to_integer_point(&leaf.point)?;
            dom_to_ip::<S>(inst, &x)
        })
        .collect();
    let mut theta: Vec<S> = Vec::new();
    let mut solutions: Vec<Vec<u8>> = Vec::new();
    for (leaf, z) in level.iter().zip(leaf_solutions) {
        let z = z?;
        match solutions.iter().position(|s| *s == z) {
            Some(k) => theta[k] = theta[k].clone() + leaf.multiplier.clone(),
            None => {
                solutions.push(z);
                theta.push(leaf.multiplier.clone());
            }
        }
    }
    let certificate = Certificate::from_leaves(theta, solutions, x_star.to_vec())?;
    Ok(FdtRun {
        certificate,
        order,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn triangle() -> IpInstance {
        let mut inst = IpInstance::new("k3", 3, VarKind::Binary);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            inst.push_row([(u, q(1, 1)), (v, q(1, 1))], q(1, 1));
        }
        inst
    }

    #[test]
    fn integral_start_gives_identity() {
        let x = vec![q(0, 1), q(1, 1), q(1, 1)];
        let cert = fdt_tree(&triangle(), &x).unwrap();
        assert_eq!(cert.solutions, vec![vec![0, 1, 1]]);
        assert_eq!(cert.weights, vec![q(1, 1)]);
        assert_eq!(cert.factor, q(1, 1));
    }

    #[test]
    fn triangle_half_point_certificate() {
        let inst = triangle();
        let x = vec![q(1, 2); 3];
        let run = fdt_tree_with(&inst, &x, &FdtOptions::default()).unwrap();
        let cert = &run.certificate;
        assert!(cert.factor <= q(2, 1));
        assert!(verify_certificate(cert, &inst).unwrap().is_valid());
        for z in &cert.solutions {
            assert!(z.iter().map(|v| *v as u32).sum::<u32>() >= 2);
        }
        assert_eq!(run.levels.len(), 3);
        assert!(run.levels.iter().all(|l| l.nodes.len() <= 3));
    }

    #[test]
    fn float_and_exact_agree_on_triangle() {
        let inst = triangle();
        let exact = fdt_tree(&inst, &vec![q(1, 2); 3]).unwrap();
        let float = fdt_tree(&inst, &[0.5; 3]).unwrap();
        assert!((float.factor - exact.factor.to_f64()).abs() < 1e-9);
        assert!(verify_certificate(&float, &inst).unwrap().is_valid());
    }

    #[test]
    fn zero_in_relaxation_gives_zero_factor() {
        let mut inst = IpInstance::new("ge0", 2, VarKind::Binary);
        inst.push_row([(0, q(1, 1)), (1, q(1, 1))], q(0, 1));
        let cert = fdt_tree(&inst, &[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(cert.factor, q(0, 1));
        assert!(verify_certificate(&cert, &inst).unwrap().is_valid());
    }

    #[test]
    fn rejects_points_outside_relaxation() {
        let err = fdt_tree(&triangle(), &[q(0, 1), q(0, 1), q(1, 1)]).unwrap_err();
        assert!(matches!(err, FdtError::Validation(_)));
    }
}
