//! Convex-combination certificates and their verification.

use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{FdtError, Result};
use crate::model::{check_integer_feasible, support, write_json, IpInstance};
use crate::scalar::{rational_from_json, sum, Mode, Scalar};

/// Weights `lambda_i` on integer solutions `z^i` with `sum lambda_i z^i <= min(C x*, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    pub factor: S,
    /// Normalized weights, summing to one.
    pub weights: Vec<S>,
    /// Leaf multipliers before normalization; `factor = 1 / sum(theta)`.
    pub theta: Vec<S>,
    pub solutions: Vec<Vec<u8>>,
    pub base_point: Vec<S>,
}

impl<S: Scalar> Certificate<S> {
    /// Normalizes leaf multipliers into a certificate.
    pub fn from_leaves(theta: Vec<S>, solutions: Vec<Vec<u8>>, base_point: Vec<S>) -> Result<Self> {
        let total = sum(theta.iter().cloned());
        if !total.is_pos() {
            return Err(FdtError::UnboundedGapOrInfeasible(
                "leaf multipliers sum to zero".into(),
            ));
        }
        let weights = theta.iter().map(|t| t.clone() / total.clone()).collect();
        Ok(Certificate {
            factor: S::one() / total,
            weights,
            theta,
            solutions,
            base_point,
        })
    }

    /// Identity certificate for an integral point.
    pub fn identity(z: Vec<u8>, base_point: Vec<S>) -> Self {
        Certificate {
            factor: S::one(),
            weights: vec![S::one()],
            theta: vec![S::one()],
            solutions: vec![z],
            base_point,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// `sum lambda_i z^i`.
    pub fn combination(&self) -> Vec<S> {
        let n = self.base_point.len();
        let mut out = vec![S::zero(); n];
        for (w, z) in self.weights.iter().zip(&self.solutions) {
            for (o, v) in out.iter_mut().zip(z) {
                if *v != 0 {
                    *o = o.clone() + w.clone() * S::from_i64(*v as i64);
                }
            }
        }
        out
    }

    /// Index of the cheapest solution under `cost`.
    pub fn cheapest_by<T: PartialOrd>(&self, cost: impl Fn(&[u8]) -> T) -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for (i, z) in self.solutions.iter().enumerate() {
            let c = cost(z);
            if best.as_ref().map_or(true, |(_, b)| c < *b) {
                best = Some((i, c));
            }
        }
        best
    }

    pub fn to_json(&self) -> Value {
        let nums = |v: &[S]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        json!({
            "mode": match S::MODE { Mode::Float => "float", Mode::Rational => "rational" },
            "factor": self.factor.to_json(),
            "weights": nums(&self.weights),
            "theta": nums(&self.theta),
            "solutions": self.solutions,
            "base_point": nums(&self.base_point),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |name: &str| {
            value
                .get(name)
                .ok_or_else(|| FdtError::Parse(format!("certificate is missing `{name}`")))
        };
        let scalar = |name: &str, v: &Value| -> Result<S> {
            rational_from_json(v)
                .map(|r| S::from_rational(&r))
                .map_err(|e| FdtError::Parse(format!("certificate `{name}`: {e}")))
        };
        let vector = |name: &str| -> Result<Vec<S>> {
            field(name)?
                .as_array()
                .ok_or_else(|| FdtError::Parse(format!("certificate `{name}` must be an array")))?
                .iter()
                .map(|v| scalar(name, v))
                .collect()
        };
        let factor = scalar("factor", field("factor")?)?;
        let weights = vector("weights")?;
        let base_point = vector("base_point")?;
        let theta = match value.get("theta") {
            Some(_) => vector("theta")?,
            None => weights.iter().map(|w| w.clone() / factor.clone()).collect(),
        };
        let solutions = field("solutions")?
            .as_array()
            .ok_or_else(|| FdtError::Parse("certificate `solutions` must be an array".into()))?
            .iter()
            .enumerate()
            .map(|(i, z)| {
                z.as_array()
                    .ok_or_else(|| FdtError::Parse(format!("solutions[{i}] must be an array")))?
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .filter(|v| *v <= u8::MAX as u64)
                            .map(|v| v as u8)
                            .ok_or_else(|| FdtError::Parse(format!("solutions[{i}] has a non-integer entry")))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            factor,
            weights,
            theta,
            solutions,
            base_point,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, &self.to_json())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| FdtError::io(path, e))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| {
            FdtError::Parse(format!("certificate JSON at line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_json(&value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyFailure {
    /// Weights are negative or do not sum to one.
    Weights(String),
    /// Solution `index` is infeasible; `detail` names the violated rows or cut.
    Infeasible { index: usize, detail: String },
    /// Component `index` of the combination exceeds `min(C x*, u)`.
    Domination { index: usize, lhs: f64, rhs: f64 },
    /// More solutions than support coordinates.
    TooManySolutions { k: usize, t: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Weights(msg) => write!(f, "weights: {msg}"),
            VerifyFailure::Infeasible { index, detail } => {
                write!(f, "solution {index} is infeasible: {detail}")
            }
            VerifyFailure::Domination { index, lhs, rhs } => {
                write!(f, "domination fails at component {index}: {lhs} > {rhs}")
            }
            VerifyFailure::TooManySolutions { k, t } => {
                write!(f, "{k} solutions exceed support size {t}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "certificate is valid"),
            Some(fail) => write!(f, "{fail}"),
        }
    }
}

/// Checks a certificate against an IP instance.
pub fn verify_certificate<S: Scalar>(cert: &Certificate<S>, inst: &IpInstance) -> Result<VerifyReport> {
    verify_with(cert, inst.num_vars, inst.var_upper(), |z| {
        let report = check_integer_feasible(z, inst)?;
        if report.feasible {
            return Ok(None);
        }
        let detail = if let Some(j) = report.out_of_domain.first() {
            format!("variable {j} is outside its domain")
        } else {
            let rows: Vec<String> = report.violated_rows.iter().map(|r| r.to_string()).collect();
            format!("violated row {}", rows.join(", "))
        };
        Ok(Some(detail))
    })
}

/// Checks the four certificate invariants with a caller-supplied feasibility oracle.
///
/// `infeasibility` returns `Some(reason)` for an infeasible solution.
pub fn verify_with<S: Scalar>(
    cert: &Certificate<S>,
    n: usize,
    upper: u8,
    infeasibility: impl Fn(&[u8]) -> Result<Option<String>>,
) -> Result<VerifyReport> {
    if cert.base_point.len() != n {
        return Err(FdtError::Dimension(format!(
            "base point has {} entries, expected {n}",
            cert.base_point.len()
        )));
    }
    if cert.weights.len() != cert.solutions.len() {
        return Err(FdtError::Dimension(format!(
            "{} weights for {} solutions",
            cert.weights.len(),
            cert.solutions.len()
        )));
    }
    if let Some(i) = cert.solutions.iter().position(|z| z.len() != n) {
        return Err(FdtError::Dimension(format!(
            "solution {i} has {} entries, expected {n}",
            cert.solutions[i].len()
        )));
    }
    let fail = |f| Ok(VerifyReport { failure: Some(f) });
    let tol = S::value_zero_tol();

    if cert.weights.is_empty() {
        return fail(VerifyFailure::Weights("no solutions".into()));
    }
    if let Some(i) = cert.weights.iter().position(|w| *w < -tol.clone()) {
        return fail(VerifyFailure::Weights(format!("weight {i} is negative")));
    }
    let total = sum(cert.weights.iter().cloned());
    if (total.clone() - S::one()).abs() > tol {
        return fail(VerifyFailure::Weights(format!("weights sum to {total}, not 1")));
    }
    for (index, z) in cert.solutions.iter().enumerate() {
        if let Some(detail) = infeasibility(z)? {
            return fail(VerifyFailure::Infeasible { index, detail });
        }
    }
    let upper = S::from_i64(upper as i64);
    for (index, (lhs, x)) in cert.combination().into_iter().zip(&cert.base_point).enumerate() {
        let rhs = S::min_of(cert.factor.clone() * x.clone(), upper.clone());
        if !lhs.approx_le(&rhs, &tol) {
            return fail(VerifyFailure::Domination {
                index,
                lhs: lhs.to_f64(),
                rhs: rhs.to_f64(),
            });
        }
    }
    let t = support(&cert.base_point).len();
    if cert.len() > t.max(1) {
        return fail(VerifyFailure::TooManySolutions { k: cert.len(), t });
    }
    Ok(VerifyReport { failure: None })
}
