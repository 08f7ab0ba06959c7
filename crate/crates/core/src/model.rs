//! Integer programs in covering form `A x >= b` with bounded integer variables.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{FdtError, Result};
use crate::lp::{Direction, LpProblem, Sense};
use crate::scalar::{format_rational, parse_rational, rational_from_json, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Domain {0, 1}.
    Binary,
    /// Domain {0, 1, 2}.
    ZeroOneTwo,
}

impl VarKind {
    pub fn upper(self) -> u8 {
        match self {
            VarKind::Binary => 1,
            VarKind::ZeroOneTwo => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            VarKind::Binary => "binary",
            VarKind::ZeroOneTwo => "zeroonetwo",
        }
    }
}

/// One `>=` row stored sparsely, coefficients sorted by variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coefs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) -> Self {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, v) in coefs {
            let entry = merged.entry(j).or_insert_with(<Rational as Scalar>::zero);
            *entry += v;
        }
        Row {
            coefs: merged.into_iter().filter(|(_, v)| !v.is_exact_zero()).collect(),
            rhs,
        }
    }

    pub fn activity<S: Scalar>(&self, x: &[S]) -> S {
        self.coefs
            .iter()
            .fold(S::zero(), |acc, (j, v)| acc + S::from_rational(v) * x[*j].clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IpInstance {
    pub name: String,
    pub num_vars: usize,
    pub kind: VarKind,
    pub rows: Vec<Row>,
    pub objective: Option<Vec<Rational>>,
}

impl IpInstance {
    pub fn new(name: impl Into<String>, num_vars: usize, kind: VarKind) -> Self {
        IpInstance {
            name: name.into(),
            num_vars,
            kind,
            rows: Vec::new(),
            objective: None,
        }
    }

    pub fn push_row(&mut self, coefs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        self.rows.push(Row::new(coefs, rhs));
    }

    /// Adds `coefs . x <= rhs` as the negated `>=` row.
    pub fn push_le_row(&mut self, coefs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        self.rows.push(Row::new(coefs.into_iter().map(|(j, v)| (j, -v)), -rhs));
    }

    pub fn with_objective(mut self, objective: Vec<Rational>) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn var_upper(&self) -> u8 {
        self.kind.upper()
    }

    pub fn validate(&self) -> Result<()> {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some((j, _)) = row.coefs.iter().find(|(j, _)| *j >= self.num_vars) {
                return Err(FdtError::Validation(format!(
                    "row {r} references variable {j} but the instance has {} variables",
                    self.num_vars
                )));
            }
        }
        if let Some(c) = &self.objective {
            if c.len() != self.num_vars {
                return Err(FdtError::Validation(format!(
                    "objective has {} entries for {} variables",
                    c.len(),
                    self.num_vars
                )));
            }
            if let Some(j) = c.iter().position(|v| *v < <Rational as Scalar>::zero()) {
                return Err(FdtError::Validation(format!("objective entry {j} is negative")));
            }
        }
        Ok(())
    }

    pub fn cost<S: Scalar>(&self, x: &[S]) -> S {
        match &self.objective {
            Some(c) => c
                .iter()
                .zip(x)
                .fold(S::zero(), |acc, (cj, xj)| acc + S::from_rational(cj) * xj.clone()),
            None => S::zero(),
        }
    }

    pub fn integer_cost(&self, z: &[u8]) -> Rational {
        let as_q: Vec<Rational> = z.iter().map(|v| Rational::from_i64(*v as i64)).collect();
        self.cost(&as_q)
    }

    /// The relaxation `min c x : A x >= b, 0 <= x <= u`.
    pub fn relaxation<S: Scalar>(&self) -> LpProblem<S> {
        let mut lp = LpProblem::new(Direction::Minimize);
        let upper = S::from_i64(self.var_upper() as i64);
        for j in 0..self.num_vars {
            let c = self
                .objective
                .as_ref()
                .map_or(S::zero(), |c| S::from_rational(&c[j]));
            lp.add_col(S::zero(), Some(upper.clone()), c);
        }
        for row in &self.rows {
            let coefs = row.coefs.iter().map(|(j, v)| (*j, S::from_rational(v))).collect();
            lp.add_row(coefs, Sense::Ge, S::from_rational(&row.rhs));
        }
        lp
    }

    /// Whether `x` lies in the relaxation (box plus rows) up to `tol`.
    pub fn lp_feasible<S: Scalar>(&self, x: &[S], tol: &S) -> bool {
        let upper = S::from_i64(self.var_upper() as i64);
        x.len() == self.num_vars
            && x.iter()
                .all(|v| *v >= -tol.clone() && v.approx_le(&upper, tol))
            && self
                .rows
                .iter()
                .all(|row| S::from_rational(&row.rhs).approx_le(&row.activity(x), tol))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| FdtError::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            FdtError::Parse(format!("instance JSON at line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| FdtError::Parse("instance must be a JSON object".into()))?;
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("").to_string();
        let num_vars = obj
            .get("num_vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| FdtError::Parse("field `num_vars` must be a nonnegative integer".into()))?
            as usize;
        let kind = match obj.get("kind").and_then(Value::as_str).unwrap_or("binary") {
            "binary" => VarKind::Binary,
            "zeroonetwo" => VarKind::ZeroOneTwo,
            other => return Err(FdtError::Parse(format!("field `kind`: unknown kind `{other}`"))),
        };
        let mut inst = IpInstance::new(name, num_vars, kind);
        let rows = obj
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| FdtError::Parse("field `rows` must be an array".into()))?;
        for (r, row) in rows.iter().enumerate() {
            let ctx = |msg: &str| FdtError::Parse(format!("rows[{r}]: {msg}"));
            let coef = row
                .get("coef")
                .and_then(Value::as_object)
                .ok_or_else(|| ctx("field `coef` must be an object"))?;
            let mut coefs = Vec::with_capacity(coef.len());
            for (key, v) in coef {
                let j: usize = key
                    .trim()
                    .parse()
                    .map_err(|_| ctx(&format!("coefficient key `{key}` is not a variable index")))?;
                let v = rational_from_json(v).map_err(|e| ctx(&e.to_string()))?;
                coefs.push((j, v));
            }
            let rhs = rational_from_json(row.get("rhs").ok_or_else(|| ctx("missing `rhs`"))?)
                .map_err(|e| ctx(&e.to_string()))?;
            match row.get("sense").and_then(Value::as_str).unwrap_or(">=") {
                ">=" => inst.push_row(coefs, rhs),
                "<=" => inst.push_le_row(coefs, rhs),
                "=" | "==" => {
                    inst.push_row(coefs.clone(), rhs.clone());
                    inst.push_le_row(coefs, rhs);
                }
                other => return Err(ctx(&format!("unknown sense `{other}`"))),
            }
        }
        if let Some(c) = obj.get("objective") {
            if !c.is_null() {
                let c = c
                    .as_array()
                    .ok_or_else(|| FdtError::Parse("field `objective` must be an array".into()))?;
                let values = c
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        rational_from_json(v).map_err(|e| FdtError::Parse(format!("objective[{j}]: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                inst.objective = Some(values);
            }
        }
        inst.validate()?;
        Ok(inst)
    }

    /// JSON form; with `exact` every number is written as a decimal or `p/q` string.
    pub fn to_json(&self, exact: bool) -> Value {
        let num = |v: &Rational| -> Value {
            if exact {
                Value::String(format_rational(v))
            } else {
                Value::from(Scalar::to_f64(v))
            }
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let coef: Map<String, Value> =
                    row.coefs.iter().map(|(j, v)| (j.to_string(), num(v))).collect();
                json!({"coef": coef, "rhs": num(&row.rhs)})
            })
            .collect();
        let mut out = json!({
            "name": self.name,
            "num_vars": self.num_vars,
            "kind": self.kind.as_str(),
            "rows": rows,
        });
        if let Some(c) = &self.objective {
            out["objective"] = Value::Array(c.iter().map(num).collect());
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>, exact: bool) -> Result<()> {
        write_json(path, &self.to_json(exact))
    }
}

pub fn write_json(path: impl AsRef<Path>, value: &Value) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    std::fs::write(path, text + "\n").map_err(|e| FdtError::io(path, e))
}

/// Sorted nonzero coordinates of a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    pub indices: Vec<usize>,
}

impl Support {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// Coordinates that are nonzero beyond the zero tolerance (exactly nonzero for rationals).
pub fn support<S: Scalar>(x: &[S]) -> Support {
    Support {
        indices: x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero_tol())
            .map(|(i, _)| i)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub violated_rows: Vec<usize>,
    pub out_of_domain: Vec<usize>,
}

/// Checks `A z >= b` and the variable domain for an integer point.
pub fn check_integer_feasible(z: &[u8], inst: &IpInstance) -> Result<Feasibility> {
    if z.len() != inst.num_vars {
        return Err(FdtError::Dimension(format!(
            "point has {} entries, instance has {} variables",
            z.len(),
            inst.num_vars
        )));
    }
    let zq: Vec<Rational> = z.iter().map(|v| Rational::from_i64(*v as i64)).collect();
    let violated_rows = inst
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| row.activity(&zq) < row.rhs)
        .map(|(r, _)| r)
        .collect::<Vec<_>>();
    let out_of_domain = z
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > inst.var_upper())
        .map(|(j, _)| j)
        .collect::<Vec<_>>();
    Ok(Feasibility {
        feasible: violated_rows.is_empty() && out_of_domain.is_empty(),
        violated_rows,
        out_of_domain,
    })
}

/// Rounds a numerically integral point; fails on any coordinate farther than the zero tolerance from an integer.
pub fn to_integer_point<S: Scalar>(x: &[S]) -> Result<Vec<u8>> {
    x.iter()
        .enumerate()
        .map(|(j, v)| {
            let r = v
                .near_integer()
                .ok_or_else(|| FdtError::Domain(format!("coordinate {j} = {v} is not integral")))?;
            let f = r.to_f64();
            if !(0.0..=255.0).contains(&f) {
                return Err(FdtError::Domain(format!("coordinate {j} = {v} is outside 0..=255")));
            }
            Ok(f as u8)
        })
        .collect()
}

/// Reads a point file: `{"values": [...]}`, `{"x": [...]}`, or a bare array.
pub fn load_point(path: impl AsRef<Path>) -> Result<Vec<Rational>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| FdtError::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| FdtError::Parse(format!("point JSON at line {} column {}: {e}", e.line(), e.column())))?;
    point_from_json(&value)
}

pub fn point_from_json(value: &Value) -> Result<Vec<Rational>> {
    let arr = match value {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("values")
            .or_else(|| o.get("x"))
            .and_then(Value::as_array)
            .ok_or_else(|| FdtError::Parse("point object needs a `values` array".into()))?,
        _ => return Err(FdtError::Parse("point must be an array or object".into())),
    };
    arr.iter()
        .enumerate()
        .map(|(i, v)| rational_from_json(v).map_err(|e| FdtError::Parse(format!("values[{i}]: {e}"))))
        .collect()
}

pub fn point_to_json<S: Scalar>(x: &[S]) -> Value {
    json!({ "values": x.iter().map(Scalar::to_json).collect::<Vec<_>>() })
}

pub fn parse_point_text(text: &str) -> Result<Vec<Rational>> {
    text.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}
