//! Randomized root-to-leaf walk through the decomposition tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domtoip::dom_to_ip;
use crate::error::Result;
use crate::model::{support, to_integer_point, IpInstance};
use crate::scalar::Scalar;

use super::tree::{check_start_point, expand};
use super::{BranchOrder, Node};

#[derive(Debug, Clone)]
pub struct DiveRun<S> {
    pub solution: Vec<u8>,
    /// Branch taken at each branched coordinate, with the weights it was drawn from.
    pub choices: Vec<DiveStep<S>>,
    /// The point reached before the final repair step.
    pub leaf: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct DiveStep<S> {
    pub coordinate: usize,
    pub gamma: (S, S),
    pub branch: u8,
}

impl<S> DiveRun<S> {
    pub fn root_choice(&self) -> Option<&DiveStep<S>> {
        self.choices.first()
    }
}

/// Follows branch `j` with probability `gamma_j / (gamma_0 + gamma_1)`.
pub fn fdt_dive<S: Scalar>(inst: &IpInstance, x_star: &[S], seed: u64) -> Result<DiveRun<S>> {
    fdt_dive_with(inst, x_star, seed, BranchOrder::Ascending)
}

pub fn fdt_dive_with<S: Scalar>(
    inst: &IpInstance,
    x_star: &[S],
    seed: u64,
    order: BranchOrder,
) -> Result<DiveRun<S>> {
    check_start_point(inst, x_star)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = order.arrange(support(x_star).indices);
    let mut node = Node::root(x_star.to_vec());
    let mut choices = Vec::new();
    for pos in 0..order.len() {
        let (children, masses) = expand(inst, &node, &order, pos)?;
        let Some((g0, g1)) = masses else {
            node = children.into_iter().next().expect("pass-through keeps the node");
            continue;
        };
        let p0 = g0.to_f64() / (g0.to_f64() + g1.to_f64());
        let branch: u8 = if rng.gen::<f64>() < p0 { 0 } else { 1 };
        // An absent branch has weight zero and is never drawn.
        let wanted = S::from_i64(branch as i64);
        node = children
            .into_iter()
            .find(|c| c.point[order[pos]] == wanted)
            .expect("the drawn branch has positive weight");
        choices.push(DiveStep {
            coordinate: order[pos],
            gamma: (g0, g1),
            branch,
        });
    }
    let x = to_integer_point(&node.point)?;
    let solution = dom_to_ip::<S>(inst, &x)?;
    Ok(DiveRun {
        solution,
        choices,
        leaf: node.point,
    })
}
