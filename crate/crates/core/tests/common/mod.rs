//! Helpers shared by the integration tests: instance oracles and level invariant checks.
#![allow(dead_code)]

use fdt::ec2::Ec2Run;
use fdt::fdt::{total_multiplier, weighted_sum, FdtRun};
use fdt::model::check_integer_feasible;
use fdt::{IpInstance, Rational, Scalar, VarKind};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Every 0/1 point of `S(I)` below `cap`, by enumeration.
pub fn dominated_feasible(inst: &IpInstance, cap: &[u8]) -> Vec<Vec<u8>> {
    let n = inst.num_vars;
    (0u32..1 << n)
        .map(|mask| (0..n).map(|j| (mask >> j & 1) as u8).collect::<Vec<u8>>())
        .filter(|z| z.iter().zip(cap).all(|(a, b)| a <= b))
        .filter(|z| check_integer_feasible(z, inst).unwrap().feasible)
        .collect()
}

/// Random `>=` rows with small integer data.
pub fn random_ip(rng: &mut impl Rng, n: usize) -> IpInstance {
    let m = rng.gen_range(1..=6);
    let mut inst = IpInstance::new("random", n, VarKind::Binary);
    for _ in 0..m {
        let mut coefs: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.6) {
                coefs.push((j, Rational::from_i64(rng.gen_range(-2..=3))));
            }
        }
        inst.push_row(coefs, Rational::from_i64(rng.gen_range(-1..=2)));
    }
    let costs = (0..n).map(|_| Rational::from_i64(rng.gen_range(0..=5))).collect();
    inst.with_objective(costs)
}

pub fn random_covering(rng: &mut impl Rng, n: usize) -> IpInstance {
    let m = rng.gen_range(1..=6);
    let mut inst = IpInstance::new("covering", n, VarKind::Binary);
    for _ in 0..m {
        let mut coefs: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.5) {
                coefs.push((j, Rational::from_i64(rng.gen_range(1..=3))));
            }
        }
        if coefs.is_empty() {
            continue;
        }
        let total: i64 = coefs.iter().map(|(_, c)| c.to_f64() as i64).sum();
        inst.push_row(coefs, Rational::from_i64(rng.gen_range(1..=total.min(4))));
    }
    inst
}

/// Violations of the level invariants of a binary tree run, as messages.
pub fn binary_level_violations<S: Scalar>(run: &FdtRun<S>, x_star: &[S]) -> Vec<String> {
    let n = x_star.len();
    let t = run.order.len();
    let tol = S::value_zero_tol();
    let mut out = Vec::new();
    for (i, level) in run.levels.iter().enumerate() {
        for (k, node) in level.nodes.iter().enumerate() {
            for &j in &run.order[..=i] {
                if node.point[j].near_integer().is_none() {
                    out.push(format!("level {i} node {k}: coordinate {j} is fractional"));
                }
            }
            if node.point.iter().any(|v| *v < -tol.clone() || !v.approx_le(&S::one(), &tol)) {
                out.push(format!("level {i} node {k}: point leaves [0, 1]"));
            }
        }
        for (name, nodes) in [("unpruned", &level.unpruned), ("pruned", &level.nodes)] {
            let sum = weighted_sum(nodes, n);
            if let Some(j) = (0..n).find(|j| !sum[*j].approx_le(&x_star[*j], &tol)) {
                out.push(format!("level {i} {name}: weighted sum exceeds x* at {j}"));
            }
        }
        if level.nodes.len() > t.max(1) {
            out.push(format!("level {i}: {} nodes for support size {t}", level.nodes.len()));
        }
        let before = total_multiplier(&level.unpruned);
        let after = total_multiplier(&level.nodes);
        if !before.approx_le(&after, &tol) {
            out.push(format!("level {i}: pruning lowered the total multiplier from {before} to {after}"));
        }
    }
    out
}

/// Same checks for 2EC runs; branched edges must be 0 or at least 1, and values stay in [0, 2].
pub fn ec2_level_violations<S: Scalar>(run: &Ec2Run<S>, x_star: &[S]) -> Vec<String> {
    let n = x_star.len();
    let t = run.order.len();
    let tol = S::value_zero_tol();
    let one = S::one();
    let two = S::from_i64(2);
    let mut out = Vec::new();
    for (i, level) in run.levels.iter().enumerate() {
        for (k, node) in level.nodes.iter().enumerate() {
            for &e in &run.order[..=i] {
                let v = &node.point[e];
                if !v.is_zero_tol() && *v < one.clone() - tol.clone() {
                    out.push(format!("level {i} node {k}: edge {e} has value {v} in (0, 1)"));
                }
            }
            if node.point.iter().any(|v| *v < -tol.clone() || !v.approx_le(&two, &tol)) {
                out.push(format!("level {i} node {k}: point leaves [0, 2]"));
            }
        }
        for (name, nodes) in [("unpruned", &level.unpruned), ("pruned", &level.nodes)] {
            let sum = weighted_sum(nodes, n);
            if let Some(j) = (0..n).find(|j| !sum[*j].approx_le(&x_star[*j], &tol)) {
                out.push(format!("level {i} {name}: weighted sum exceeds x* at {j}"));
            }
        }
        if level.nodes.len() > t.max(1) {
            out.push(format!("level {i}: {} nodes for support size {t}", level.nodes.len()));
        }
        let before = total_multiplier(&level.unpruned);
        let after = total_multiplier(&level.nodes);
        if !before.approx_le(&after, &tol) {
            out.push(format!("level {i}: pruning lowered the total multiplier from {before} to {after}"));
        }
    }
    out
}
