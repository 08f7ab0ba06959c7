//! Carr-Vempala points: a fractional cycle whose vertices are paired by paths of unit edges.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ec2::{separate_subtour, SubtourPoint};
use crate::error::{FdtError, Result};
use crate::graph::Graph;
use crate::lp::{self, Direction, LpProblem, LpStatus, Sense};
use crate::scalar::{Rational, Scalar};

/// Random objectives tried before giving up on a support.
const ATTEMPTS: u64 = 16;
const COST_RANGE: std::ops::RangeInclusive<i64> = 1..=1000;
/// Largest vertex count for the exhaustive tight-cut rank check.
const MAX_BRUTE_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct CvInstance {
    pub cycle_len: usize,
    /// Pairs of cycle positions, each joined by a path of unit edges.
    pub matching: Vec<(usize, usize)>,
    pub path_lengths: Vec<usize>,
    /// Edges `0..cycle_len` are the cycle `(i, i + 1)`; path edges follow.
    pub point: SubtourPoint<Rational>,
}

impl CvInstance {
    pub fn cycle_values(&self) -> &[Rational] {
        &self.point.x[..self.cycle_len]
    }
}

/// The matching drawn in the usual 8-cycle illustration.
pub fn fig3_matching() -> Vec<(usize, usize)> {
    vec![(0, 4), (1, 6), (2, 5), (3, 7)]
}

fn check_matching(k: usize, matching: &[(usize, usize)], path_lengths: &[usize]) -> Result<()> {
    if k < 4 || k % 2 == 1 {
        return Err(FdtError::Validation(format!("cycle length must be even and at least 4, got {k}")));
    }
    if matching.len() != k / 2 || path_lengths.len() != k / 2 {
        return Err(FdtError::Validation(format!(
            "need {} pairs and path lengths, got {} and {}",
            k / 2,
            matching.len(),
            path_lengths.len()
        )));
    }
    let mut seen = vec![false; k];
    for &(a, b) in matching {
        if a >= k || b >= k || a == b || seen[a] || seen[b] {
            return Err(FdtError::Validation(format!("pair ({a}, {b}) breaks the perfect matching")));
        }
        seen[a] = true;
        seen[b] = true;
    }
    if path_lengths.contains(&0) {
        return Err(FdtError::Validation("path lengths must be at least 1".into()));
    }
    Ok(())
}

/// Cycle plus matching paths; internal path vertices are numbered from `k`.
pub fn support_graph(k: usize, matching: &[(usize, usize)], path_lengths: &[usize]) -> Result<Graph> {
    check_matching(k, matching, path_lengths)?;
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    let mut next = k;
    for (&(a, b), &len) in matching.iter().zip(path_lengths) {
        let mut prev = a;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    }
    Graph::new(next, edges)
}

/// A union of matched pairs forming one arc is crossed by two cycle edges only,
/// which cannot reach 2 with values below 1.
fn closed_arc(k: usize, matching: &[(usize, usize)]) -> Option<Vec<usize>> {
    let pairs = matching.len();
    for mask in 1u32..(1 << pairs) - 1 {
        let mut inside = vec![false; k];
        for (p, &(a, b)) in matching.iter().enumerate() {
            if mask >> p & 1 == 1 {
                inside[a] = true;
                inside[b] = true;
            }
        }
        let crossings = (0..k).filter(|&i| inside[i] != inside[(i + 1) % k]).count();
        if crossings == 2 {
            return Some((0..k).filter(|&i| inside[i]).collect());
        }
    }
    None
}

fn side_of(graph: &Graph, cycle_side: &[bool]) -> Vec<bool> {
    // Internal path vertices follow the side of their path, which never splits.
    let mut side = vec![false; graph.vertices];
    side[..cycle_side.len()].copy_from_slice(cycle_side);
    side
}

/// Solves min c.y over the subtour polytope with path edges fixed at 1 and cycle edges in `[0, 1]`.
fn candidate(graph: &Graph, k: usize, costs: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let m = graph.num_edges();
    let one = Rational::one();
    let mut cuts: Vec<Vec<bool>> = (0..k)
        .map(|v| side_of(graph, &(0..k).map(|u| u == v).collect::<Vec<_>>()))
        .collect();
    loop {
        let mut lp = LpProblem::new(Direction::Minimize);
        for c in costs {
            lp.add_col(Rational::zero(), Some(one.clone()), c.clone());
        }
        for side in &cuts {
            let crossing = graph.cut_edges(side);
            let fixed = crossing.iter().filter(|e| **e >= k).count() as i64;
            let coefs = crossing.iter().filter(|e| **e < k).map(|e| (*e, one.clone())).collect();
            lp.add_row(coefs, Sense::Ge, Rational::from_i64(2 - fixed));
        }
        let out = lp::solve(&lp)?;
        if out.status != LpStatus::Optimal {
            return Ok(None);
        }
        let mut x = out.solution[..k].to_vec();
        x.extend(std::iter::repeat(one.clone()).take(m - k));
        match separate_subtour(graph, &x, &Rational::from_i64(2)) {
            Some(u) => {
                let side: Vec<bool> = (0..graph.vertices).map(|v| u.contains(&v)).collect();
                if cuts.contains(&side) {
                    return Err(FdtError::Invariant("separation repeated a cut row".into()));
                }
                cuts.push(side);
            }
            None => return Ok(Some(x)),
        }
    }
}

/// Rank of the cut constraints tight at `x`, over all proper vertex subsets.
fn tight_rank(graph: &Graph, x: &[Rational]) -> usize {
    let n = graph.vertices;
    let m = graph.num_edges();
    let two = Rational::from_i64(2);
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    for mask in 1u64..(1 << (n - 1)) {
        if basis.len() == m {
            break;
        }
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let crossing = graph.cut_edges(&side);
        let value = crossing.iter().fold(Rational::zero(), |acc, e| acc + &x[*e]);
        if value != two {
            continue;
        }
        let mut row = vec![Rational::zero(); m];
        for e in crossing {
            row[e] += Rational::one();
        }
        for (pivot, b) in &basis {
            if !row[*pivot].is_exact_zero() {
                let f = row[*pivot].clone() / &b[*pivot];
                for (r, v) in row.iter_mut().zip(b) {
                    *r -= &f * v;
                }
            }
        }
        if let Some(pivot) = row.iter().position(|v| !v.is_exact_zero()) {
            basis.push((pivot, row));
        }
    }
    basis.len()
}

/// Builds the support and searches for a fractional extreme point of the subtour polytope on it.
pub fn gen_cv(k: usize, matching: &[(usize, usize)], path_lengths: &[usize], seed: u64) -> Result<CvInstance> {
    let mut found = search(k, matching, path_lengths, seed, ATTEMPTS, true)?;
    Ok(found.remove(0))
}

/// Distinct fractional extreme points hit by `attempts` random objectives.
pub fn cv_points(
    k: usize,
    matching: &[(usize, usize)],
    path_lengths: &[usize],
    seed: u64,
    attempts: u64,
) -> Result<Vec<CvInstance>> {
    search(k, matching, path_lengths, seed, attempts, false)
}

fn search(
    k: usize,
    matching: &[(usize, usize)],
    path_lengths: &[usize],
    seed: u64,
    attempts: u64,
    first_only: bool,
) -> Result<Vec<CvInstance>> {
    let graph = support_graph(k, matching, path_lengths)?;
    if let Some(arc) = closed_arc(k, matching) {
        return Err(FdtError::Generation(format!(
            "cut around cycle vertices {arc:?} is crossed only by two cycle edges, so it stays below 2"
        )));
    }
    if graph.vertices > MAX_BRUTE_VERTICES {
        return Err(FdtError::Generation(format!(
            "{} vertices is too many for the exhaustive extremality check",
            graph.vertices
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::from("relaxation on this support is infeasible");
    let mut found: Vec<CvInstance> = Vec::new();
    for _ in 0..attempts {
        let costs: Vec<Rational> = (0..k).map(|_| Rational::from_i64(rng.gen_range(COST_RANGE))).collect();
        let Some(x) = candidate(&graph, k, &costs)? else {
            continue;
        };
        if let Some(e) = x[..k].iter().position(|v| v.is_exact_zero() || *v >= Rational::one()) {
            last = format!("cycle edge {e} came out at {}", x[e]);
            continue;
        }
        if found.iter().any(|f| f.point.x == x) {
            continue;
        }
        let rank = tight_rank(&graph, &x);
        if rank < graph.num_edges() {
            last = format!("tight cuts have rank {rank} < {}", graph.num_edges());
            continue;
        }
        let point = SubtourPoint::new(graph.clone(), x)?;
        if let Some(u) = point.violated_cut() {
            return Err(FdtError::Invariant(format!("generated point violates the cut around {u:?}")));
        }
        found.push(CvInstance {
            cycle_len: k,
            matching: matching.to_vec(),
            path_lengths: path_lengths.to_vec(),
            point,
        });
        if first_only {
            break;
        }
    }
    if found.is_empty() {
        return Err(FdtError::Generation(format!(
            "no fractional extreme point on matching {matching:?} after {attempts} objectives ({last})"
        )));
    }
    Ok(found)
}

/// All perfect matchings on `0..k`.
fn matchings(k: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

/// Smallest image of the matching under rotations and reflections of the cycle.
fn canonical(k: usize, matching: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    for r in 0..k {
        for flip in [false, true] {
            let map = |p: usize| if flip { (r + k - p) % k } else { (r + p) % k };
            let mut img: Vec<(usize, usize)> = matching
                .iter()
                .map(|&(a, b)| {
                    let (a, b) = (map(a), map(b));
                    (a.min(b), a.max(b))
                })
                .collect();
            img.sort_unstable();
            if best.as_ref().map_or(true, |b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

#[derive(Debug, Clone)]
pub struct CvEnumeration {
    pub cycle_len: usize,
    /// Matchings up to rotation and reflection.
    pub classes: usize,
    /// Labeled matchings whose class gave a point.
    pub labeled: usize,
    pub instances: Vec<CvInstance>,
    /// Classes that gave no point, with the reason.
    pub rejected: Vec<(Vec<(usize, usize)>, String)>,
}

/// One generation attempt per symmetry class of matchings, unit path lengths.
pub fn enumerate_cv(k: usize, seed: u64) -> Result<CvEnumeration> {
    if k < 4 || k % 2 == 1 || k > 14 {
        return Err(FdtError::Validation(format!("cycle length must be even in 4..=14, got {k}")));
    }
    let all = matchings(k);
    let classes: BTreeSet<Vec<(usize, usize)>> = all.iter().map(|m| canonical(k, m)).collect();
    let classes: Vec<_> = classes.into_iter().collect();
    let results: Vec<Result<CvInstance>> = classes
        .par_iter()
        .map(|m| gen_cv(k, m, &vec![1; k / 2], seed))
        .collect();
    let mut instances = Vec::new();
    let mut rejected = Vec::new();
    for (m, r) in classes.iter().zip(results) {
        match r {
            Ok(inst) => instances.push(inst),
            Err(FdtError::Generation(msg)) => rejected.push((m.clone(), msg)),
            Err(e) => return Err(e),
        }
    }
    let kept: BTreeSet<&Vec<(usize, usize)>> = instances.iter().map(|i: &CvInstance| &i.matching).collect();
    let labeled = all.iter().filter(|m| kept.contains(&canonical(k, m))).count();
    Ok(CvEnumeration {
        cycle_len: k,
        classes: classes.len(),
        labeled,
        instances,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(4).len(), 3);
        assert_eq!(matchings(8).len(), 105);
        let classes: BTreeSet<_> = matchings(4).iter().map(|m| canonical(4, m)).collect();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn k4_yields_no_fractional_point() {
        let e = enumerate_cv(4, 0).unwrap();
        assert_eq!(e.classes, 2);
        // The adjacent pairing closes an arc; the crossing pairing only has an integral face.
        assert!(e.instances.is_empty());
        assert_eq!(e.rejected.len(), 2);
        assert!(gen_cv(4, &[(0, 1), (2, 3)], &[1, 1], 0).unwrap_err().to_string().contains("[0, 1]"));
    }

    #[test]
    fn fig3_point() {
        let inst = gen_cv(8, &fig3_matching(), &[1; 4], 0).unwrap();
        assert_eq!(inst.point.graph.num_edges(), 12);
        assert!(inst.point.violated_cut().is_none());
        let x = &inst.point.x;
        for i in 0..8 {
            let prev = &x[(i + 7) % 8];
            assert!(prev + &x[i] >= Rational::one());
            assert!(x[i].is_pos() && x[i] < Rational::one());
        }
        assert!(x[8..].iter().all(|v| *v == Rational::one()));
        assert_eq!(tight_rank(&inst.point.graph, x), 12);
    }

    #[test]
    fn longer_paths_keep_unit_edges() {
        let inst = gen_cv(8, &fig3_matching(), &[2, 1, 1, 3], 0).unwrap();
        assert_eq!(inst.point.graph.vertices, 8 + 1 + 2);
        assert_eq!(inst.point.graph.num_edges(), 8 + 7);
        assert!(inst.point.x[8..].iter().all(|v| *v == Rational::one()));
        assert!(inst.point.violated_cut().is_none());
    }

    #[test]
    fn rejects_bad_matchings() {
        assert!(gen_cv(6, &[(0, 1), (1, 2), (3, 4)], &[1; 3], 0).is_err());
        assert!(gen_cv(5, &[(0, 1), (2, 3)], &[1; 2], 0).is_err());
        assert!(gen_cv(4, &[(0, 2), (1, 3)], &[0, 1], 0).is_err());
    }

    #[test]
    fn k8_enumeration_is_deterministic() {
        let a = enumerate_cv(8, 5).unwrap();
        let b = enumerate_cv(8, 5).unwrap();
        assert_eq!(a.instances, b.instances);
        assert_eq!(a.classes, 17);
        assert_eq!(a.instances.len(), 3);
        assert_eq!(a.labeled, 7);
        for inst in &a.instances {
            assert_eq!(inst.point.graph.num_edges(), 12);
            assert!(inst.point.violated_cut().is_none());
        }
    }
}
