//! Undirected multigraphs and global minimum cuts.

use crate::error::{FdtError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    /// Endpoint pairs; parallel edges are allowed.
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((k, (u, v))) = edges
            .iter()
            .enumerate()
            .find(|(_, (u, v))| *u >= vertices || *v >= vertices)
        {
            return Err(FdtError::Validation(format!(
                "edge {k} = ({u}, {v}) has an endpoint outside 0..{vertices}"
            )));
        }
        Ok(Graph { vertices, edges })
    }

    pub fn cycle(n: usize) -> Self {
        Graph {
            vertices: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_self_loop(&self) -> Option<usize> {
        self.edges.iter().position(|(u, v)| u == v)
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self, weights: Option<&[bool]>) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if weights.map_or(true, |w| w[k]) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.vertices];
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.vertices <= 1 || self.components(None).len() == 1
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn cut_edges(&self, side: &[bool]) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| side[*u] != side[*v])
            .map(|(k, _)| k)
            .collect()
    }

    pub fn cut_weight<S: Scalar>(&self, weights: &[S], side: &[bool]) -> S {
        self.cut_edges(side)
            .into_iter()
            .fold(S::zero(), |acc, k| acc + weights[k].clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinCut<S> {
    pub value: S,
    /// Indicator of one shore of the cut.
    pub side: Vec<bool>,
}

/// Global minimum cut by Stoer and Wagner's maximum-adjacency ordering.
///
/// Returns `None` for graphs with fewer than two vertices.
pub fn min_cut<S: Scalar>(graph: &Graph, weights: &[S]) -> Option<MinCut<S>> {
    let n = graph.vertices;
    if n < 2 {
        return None;
    }
    let mut w = vec![vec![S::zero(); n]; n];
    for (k, &(u, v)) in graph.edges.iter().enumerate() {
        if u != v && !weights[k].is_exact_zero() {
            w[u][v] = w[u][v].clone() + weights[k].clone();
            w[v][u] = w[v][u].clone() + weights[k].clone();
        }
    }
    // members[v] lists the original vertices merged into v.
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(S, Vec<usize>)> = None;

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut conn = vec![S::zero(); n];
        let mut prev = active[0];
        let mut last = active[0];
        added[last] = true;
        for &v in &active {
            conn[v] = w[last][v].clone();
        }
        for _ in 1..active.len() {
            let mut next = usize::MAX;
            for &v in &active {
                if !added[v] && (next == usize::MAX || conn[v] > conn[next]) {
                    next = v;
                }
            }
            added[next] = true;
            prev = last;
            last = next;
            for &v in &active {
                if !added[v] {
                    conn[v] = conn[v].clone() + w[next][v].clone();
                }
            }
        }
        let phase = conn[last].clone();
        if best.as_ref().map_or(true, |(b, _)| phase < *b) {
            best = Some((phase, members[last].clone()));
        }
        // Merge `last` into `prev`.
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &active {
            if v != prev && v != last {
                let sum = w[prev][v].clone() + w[last][v].clone();
                w[prev][v] = sum.clone();
                w[v][prev] = sum;
            }
        }
        active.retain(|&v| v != last);
    }
    let (value, shore) = best.expect("at least one phase ran");
    let mut side = vec![false; n];
    for v in shore {
        side[v] = true;
    }
    Some(MinCut { value, side })
}

/// Whether a multiplicity vector makes the graph 2-edge-connected.
pub fn check_2ec(graph: &Graph, multiplicity: &[u8]) -> bool {
    if graph.vertices < 2 {
        return true;
    }
    // Small integer weights are exact in f64.
    let w: Vec<f64> = multiplicity.iter().map(|m| *m as f64).collect();
    min_cut(graph, &w).map_or(true, |c| c.value >= 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn brute_min_cut(graph: &Graph, weights: &[f64]) -> f64 {
        let n = graph.vertices;
        (1u32..(1 << (n - 1)))
            .map(|mask| {
                let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
                graph.cut_weight(weights, &side)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn cycle_and_path() {
        let c4 = Graph::cycle(4);
        let cut = min_cut(&c4, &[1.0; 4]).unwrap();
        assert_eq!(cut.value, 2.0);
        assert_eq!(c4.cut_weight(&[1.0; 4], &cut.side), 2.0);

        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(min_cut(&path, &[1.0, 1.0]).unwrap().value, 1.0);
    }

    #[test]
    fn two_ec_examples() {
        assert!(check_2ec(&Graph::cycle(5), &[1; 5]));
        let tree = Graph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert!(!check_2ec(&tree, &[1; 3]));
        assert!(check_2ec(&tree, &[2; 3]));
        let doubled = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(check_2ec(&doubled, &[1, 1]));
    }

    #[test]
    fn disconnected_support_has_zero_cut() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let cut = min_cut(&g, &[1.0, 1.0]).unwrap();
        assert_eq!(cut.value, 0.0);
        assert_eq!(g.components(None).len(), 2);
    }

    #[test]
    fn rejects_bad_endpoint() {
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn matches_brute_force(
            n in 2usize..8,
            raw in prop::collection::vec((0usize..8, 0usize..8, 0u32..5), 1..16),
        ) {
            let edges: Vec<(usize, usize)> = raw.iter().map(|(u, v, _)| (u % n, v % n)).collect();
            let weights: Vec<f64> = raw.iter().map(|(_, _, w)| *w as f64 / 2.0).collect();
            let g = Graph::new(n, edges).unwrap();
            let cut = min_cut(&g, &weights).unwrap();
            prop_assert_eq!(cut.value, brute_min_cut(&g, &weights));
            prop_assert_eq!(g.cut_weight(&weights, &cut.side), cut.value);
            prop_assert!(cut.side.iter().any(|s| *s) && cut.side.iter().any(|s| !*s));

            let exact: Vec<Rational> = weights.iter().map(|w| w.to_rational()).collect();
            prop_assert_eq!(min_cut(&g, &exact).unwrap().value.to_f64(), cut.value);
        }
    }
}
