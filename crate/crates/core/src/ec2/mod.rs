//! Decomposition trees for 2-edge-connected multigraphs over the subtour relaxation.

pub mod branch;
pub mod tree;

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{FdtError, Result};
use crate::graph::{min_cut, Graph};
use crate::model::write_json;
use crate::scalar::{rational_from_json, Scalar};

pub use branch::{branch_lpc_2ec, TriBranchResult};
pub use tree::{fdt_2ec, fdt_2ec_with, verify_2ec_certificate, Ec2Options, Ec2Run, Ec2Level};

/// A graph with edge values in `[0, 2]` meant to satisfy every cut constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtourPoint<S> {
    pub graph: Graph,
    pub x: Vec<S>,
}

impl<S: Scalar> SubtourPoint<S> {
    pub fn new(graph: Graph, x: Vec<S>) -> Result<Self> {
        if x.len() != graph.num_edges() {
            return Err(FdtError::Dimension(format!(
                "{} edge values for {} edges",
                x.len(),
                graph.num_edges()
            )));
        }
        if !graph.is_connected() {
            return Err(FdtError::Validation("graph is not connected".into()));
        }
        let two = S::from_i64(2);
        let tol = S::feas_tol();
        if let Some(k) = x.iter().position(|v| *v < -tol.clone() || !v.approx_le(&two, &tol)) {
            return Err(FdtError::Validation(format!("edge {k} has a value outside [0, 2]")));
        }
        Ok(SubtourPoint { graph, x })
    }

    pub fn convert<T: Scalar>(&self) -> SubtourPoint<T> {
        SubtourPoint {
            graph: self.graph.clone(),
            x: self.x.iter().map(|v| T::from_rational(&v.to_rational())).collect(),
        }
    }

    /// A cut with `x(delta(U)) < 2`, if any.
    pub fn violated_cut(&self) -> Option<Vec<usize>> {
        separate_subtour(&self.graph, &self.x, &S::from_i64(2))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.graph.vertices,
            "edges": self.graph.edges.iter().map(|(u, v)| [*u, *v]).collect::<Vec<_>>(),
            "x": self.x.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let vertices = value
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| FdtError::Parse("field `vertices` must be a nonnegative integer".into()))?
            as usize;
        let edges = value
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| FdtError::Parse("field `edges` must be an array".into()))?
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let pair = e.as_array().filter(|a| a.len() == 2).and_then(|a| {
                    Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize))
                });
                pair.ok_or_else(|| FdtError::Parse(format!("edges[{k}] must be a pair of vertex indices")))
            })
            .collect::<Result<Vec<_>>>()?;
        let x = value
            .get("x")
            .and_then(Value::as_array)
            .ok_or_else(|| FdtError::Parse("field `x` must be an array".into()))?
            .iter()
            .enumerate()
            .map(|(k, v)| {
                rational_from_json(v)
                    .map(|r| S::from_rational(&r))
                    .map_err(|e| FdtError::Parse(format!("x[{k}]: {e}")))
            })
            .collect::<Result<Vec<S>>>()?;
        SubtourPoint::new(Graph::new(vertices, edges)?, x)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| FdtError::io(path, e))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| FdtError::Parse(format!("point JSON at line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&value)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, &self.to_json())
    }
}

/// Finds `U` with `y(delta(U)) < threshold` (beyond the feasibility tolerance).
///
/// A disconnected support yields one of its components.
pub fn separate_subtour<S: Scalar>(graph: &Graph, y: &[S], threshold: &S) -> Option<Vec<usize>> {
    let cut = min_cut(graph, y)?;
    if cut.value < threshold.clone() - S::feas_tol() {
        Some((0..graph.vertices).filter(|v| cut.side[*v]).collect())
    } else {
        None
    }
}

/// Rounds a leaf whose values are all 0 or at least 1 down to multiplicities in `{0, 1, 2}`.
pub fn floor_round<S: Scalar>(x: &[S]) -> Result<Vec<u8>> {
    x.iter()
        .enumerate()
        .map(|(k, v)| {
            if v.is_pos() && *v < S::one() - S::zero_tol() {
                return Err(FdtError::Invariant(format!("leaf edge {k} has value {v} in (0, 1)")));
            }
            let f = v.floor_tol().to_f64().clamp(0.0, 2.0);
            Ok(f as u8)
        })
        .collect()
}
