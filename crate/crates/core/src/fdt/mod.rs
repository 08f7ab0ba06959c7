//! Fractional decomposition trees for binary programs.

pub mod branch;
pub mod dive;
pub mod prune;
pub mod tree;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use branch::{branch_lpc, BranchResult};
pub use dive::{fdt_dive, DiveRun};
pub use prune::{prune, Pruned};
pub use tree::{fdt_tree, fdt_tree_with, FdtOptions, FdtRun, LevelRecord};

use crate::scalar::Scalar;

/// A point of the dominant together with its multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct Node<S> {
    pub point: Vec<S>,
    pub multiplier: S,
    /// Number of leading branch coordinates known to be integral.
    pub fixed_prefix: usize,
}

impl<S: Scalar> Node<S> {
    pub fn root(point: Vec<S>) -> Self {
        Node {
            point,
            multiplier: S::one(),
            fixed_prefix: 0,
        }
    }
}

/// Order in which support coordinates are branched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchOrder {
    #[default]
    Ascending,
    /// Support shuffled by a seeded generator.
    Shuffled(u64),
}

impl BranchOrder {
    pub fn arrange(self, mut support: Vec<usize>) -> Vec<usize> {
        if let BranchOrder::Shuffled(seed) = self {
            support.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        support
    }
}

/// `sum multiplier * point` over a list of nodes.
pub fn weighted_sum<S: Scalar>(nodes: &[Node<S>], n: usize) -> Vec<S> {
    let mut acc = vec![S::zero(); n];
    for node in nodes {
        for (a, v) in acc.iter_mut().zip(&node.point) {
            if !v.is_exact_zero() {
                *a = a.clone() + node.multiplier.clone() * v.clone();
            }
        }
    }
    acc
}

pub fn total_multiplier<S: Scalar>(nodes: &[Node<S>]) -> S {
    crate::scalar::sum(nodes.iter().map(|n| n.multiplier.clone()))
}
