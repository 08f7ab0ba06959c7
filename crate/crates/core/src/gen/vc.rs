//! Vertex cover instances.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FdtError, Result};
use crate::graph::Graph;
use crate::model::{IpInstance, VarKind};
use crate::scalar::{Rational, Scalar};

/// One covering row `x_u + x_v >= 1` per edge; unit costs unless given.
pub fn gen_vc(graph: &Graph, costs: Option<Vec<Rational>>) -> Result<IpInstance> {
    if let Some(k) = graph.has_self_loop() {
        return Err(FdtError::Validation(format!("edge {k} is a self-loop")));
    }
    let mut seen = HashSet::new();
    for (k, &(u, v)) in graph.edges.iter().enumerate() {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(FdtError::Validation(format!("edge {k} = ({u}, {v}) is repeated")));
        }
    }
    let one = Rational::from_i64(1);
    let mut inst = IpInstance::new(format!("vc-n{}-m{}", graph.vertices, graph.num_edges()), graph.vertices, VarKind::Binary);
    for &(u, v) in &graph.edges {
        inst.push_row([(u, one.clone()), (v, one.clone())], one.clone());
    }
    let costs = costs.unwrap_or_else(|| vec![one; graph.vertices]);
    let inst = inst.with_objective(costs);
    inst.validate()?;
    Ok(inst)
}

/// Erdos-Renyi graph `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph { vertices: n, edges }
}

/// Reads a PACE-style edge list: optional `p td n m` header, 1-indexed edges,
/// comment lines starting with `c` or `#`.
pub fn read_pace(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_vertex = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || FdtError::Parse(format!("line {}: cannot read `{line}`", lineno + 1));
        if fields[0] == "p" {
            let n = fields.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?;
            declared = Some(n);
            continue;
        }
        if fields.len() < 2 {
            return Err(bad());
        }
        let u: usize = fields[0].parse().map_err(|_| bad())?;
        let v: usize = fields[1].parse().map_err(|_| bad())?;
        if u == 0 || v == 0 {
            return Err(FdtError::Parse(format!("line {}: vertices are numbered from 1", lineno + 1)));
        }
        max_vertex = max_vertex.max(u).max(v);
        edges.push((u - 1, v - 1));
    }
    let n = declared.unwrap_or(max_vertex);
    if max_vertex > n {
        return Err(FdtError::Validation(format!(
            "edge endpoint {max_vertex} exceeds the declared {n} vertices"
        )));
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{self, LpStatus};
    use crate::model::check_integer_feasible;

    #[test]
    fn triangle_lp_optimum() {
        let inst = gen_vc(&Graph::cycle(3), None).unwrap();
        assert_eq!(inst.rows.len(), 3);
        let out = lp::solve(&inst.relaxation::<Rational>()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective, Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let inst = gen_vc(&g, None).unwrap();
        let out = lp::solve(&inst.relaxation::<Rational>()).unwrap();
        assert_eq!(out.objective, Rational::from_i64(1));
    }

    #[test]
    fn rejects_loops_and_repeats() {
        assert!(gen_vc(&Graph::new(2, vec![(1, 1)]).unwrap(), None).is_err());
        assert!(gen_vc(&Graph::new(2, vec![(0, 1), (1, 0)]).unwrap(), None).is_err());
    }

    #[test]
    fn pace_reader() {
        let text = "c sample\np td 5 3\n1 2\n# note\n2 3\n4 5\n";
        let g = read_pace(text).unwrap();
        assert_eq!(g.vertices, 5);
        assert_eq!(g.edges, vec![(0, 1), (1, 2), (3, 4)]);
        assert!(read_pace("1 x\n").is_err());
        assert!(read_pace("p td 2 1\n1 3\n").is_err());
    }

    #[test]
    fn feasible_points_are_exactly_the_covers() {
        for seed in 0..20 {
            let g = random_graph(8, 0.4, seed);
            let inst = gen_vc(&g, None).unwrap();
            for mask in 0u32..256 {
                let z: Vec<u8> = (0..8).map(|j| (mask >> j & 1) as u8).collect();
                let covers = g.edges.iter().all(|&(u, v)| z[u] == 1 || z[v] == 1);
                assert_eq!(check_integer_feasible(&z, &inst).unwrap().feasible, covers);
            }
        }
    }
}
