//! Tree augmentation instances on full binary trees.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FdtError, Result};
use crate::graph::Graph;
use crate::model::{IpInstance, VarKind};
use crate::scalar::{Rational, Scalar};

/// Costs are drawn on this grid in `[0, 1)` so they stay exact as rationals.
const COST_GRID: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TapInstance {
    pub tree: Graph,
    pub links: Vec<(usize, usize)>,
    pub costs: Vec<Rational>,
}

impl TapInstance {
    pub fn new(tree: Graph, links: Vec<(usize, usize)>, costs: Vec<Rational>) -> Result<Self> {
        if tree.num_edges() + 1 != tree.vertices || !tree.is_connected() {
            return Err(FdtError::Validation("tree must be connected with n - 1 edges".into()));
        }
        if let Some(k) = links.iter().position(|(a, b)| *a >= tree.vertices || *b >= tree.vertices) {
            return Err(FdtError::Validation(format!("link {k} leaves the tree's vertex set")));
        }
        if costs.len() != links.len() {
            return Err(FdtError::Dimension(format!("{} costs for {} links", costs.len(), links.len())));
        }
        if let Some(k) = costs.iter().position(|c| *c < Rational::zero()) {
            return Err(FdtError::Validation(format!("link {k} has a negative cost")));
        }
        Ok(TapInstance { tree, links, costs })
    }

    /// `cov[e]`: links whose tree path uses tree edge `e`.
    pub fn cov(&self) -> Vec<Vec<usize>> {
        let n = self.tree.vertices;
        let mut adj = vec![Vec::new(); n];
        for (k, &(u, v)) in self.tree.edges.iter().enumerate() {
            adj[u].push((v, k));
            adj[v].push((u, k));
        }
        // Parent pointers from a BFS at vertex 0.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, k) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, k));
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut cov = vec![Vec::new(); self.tree.num_edges()];
        for (l, &(a, b)) in self.links.iter().enumerate() {
            let (mut a, mut b) = (a, b);
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (up, k) = parent[a].expect("non-root vertex has a parent");
                cov[k].push(l);
                a = up;
            }
        }
        cov
    }

    /// One covering row per tree edge over the links in `cov(e)`.
    pub fn cut_lp(&self) -> Result<IpInstance> {
        let one = Rational::one();
        let mut inst = IpInstance::new(
            format!("tap-v{}-l{}", self.tree.vertices, self.links.len()),
            self.links.len(),
            VarKind::Binary,
        );
        for (e, links) in self.cov().into_iter().enumerate() {
            if links.is_empty() {
                return Err(FdtError::Validation(format!("tree edge {e} is covered by no link")));
            }
            inst.push_row(links.into_iter().map(|l| (l, one.clone())), one.clone());
        }
        let inst = inst.with_objective(self.costs.clone());
        inst.validate()?;
        Ok(inst)
    }
}

/// Full binary tree on `2^levels - 1` vertices, a link for every pair of leaves,
/// costs uniform in `[0, 1)`.
pub fn gen_tap(levels: u32, seed: u64) -> Result<(TapInstance, IpInstance)> {
    if !(2..=16).contains(&levels) {
        return Err(FdtError::Validation(format!("levels must lie in 2..=16, got {levels}")));
    }
    let n = (1usize << levels) - 1;
    let edges: Vec<(usize, usize)> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    let first_leaf = (1usize << (levels - 1)) - 1;
    let mut links = Vec::new();
    for a in first_leaf..n {
        for b in a + 1..n {
            links.push((a, b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs = links
        .iter()
        .map(|_| Rational::new(rng.gen_range(0..COST_GRID).into(), COST_GRID.into()))
        .collect();
    let tap = TapInstance::new(Graph { vertices: n, edges }, links, costs)?;
    let mut ip = tap.cut_lp()?;
    ip.name = format!("tap-L{levels}-s{seed}");
    Ok((tap, ip))
}
