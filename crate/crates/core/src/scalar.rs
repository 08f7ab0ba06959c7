//! Arithmetic used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`], which is implemented for `f64`
//! (tolerance based) and [`Rational`] (exact). Tolerances collapse to zero in
//! exact mode, so the same code path gives exact decisions with rationals.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::FdtError;
use crate::lp::{self, LpError, LpOutcome, LpProblem};

pub type Rational = BigRational;

/// Arithmetic mode selected by callers that do not want to pick a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

impl Mode {
    /// Exact arithmetic for small instances, floating point above.
    pub fn auto(num_vars: usize) -> Mode {
        if num_vars <= 64 {
            Mode::Rational
        } else {
            Mode::Float
        }
    }
}

impl FromStr for Mode {
    type Err = FdtError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" => Ok(Mode::Float),
            "rational" | "exact" => Ok(Mode::Rational),
            other => Err(FdtError::Parse(format!("unknown arithmetic mode `{other}`"))),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn ceil(&self) -> Self;
    /// True only for an exact zero; used to skip work, never for decisions.
    fn is_exact_zero(&self) -> bool;

    /// Zero and integrality tolerance (1e-9 in float mode).
    fn zero_tol() -> Self;
    /// Primal feasibility tolerance (1e-7 in float mode).
    fn feas_tol() -> Self;
    /// Reduced-cost optimality tolerance (1e-9 in float mode).
    fn opt_tol() -> Self;
    /// Smallest pivot magnitude accepted by the ratio test.
    fn pivot_tol() -> Self;
    /// Threshold for "the optimal value is zero" decisions (1e-6 in float mode).
    fn value_zero_tol() -> Self;

    /// Solves an LP in this arithmetic. The float implementation retries in
    /// exact arithmetic when the floating point solve breaks down.
    fn solve_lp(problem: &LpProblem<Self>) -> Result<LpOutcome<Self>, LpError>;

    fn to_json(&self) -> serde_json::Value;

    fn is_zero_tol(&self) -> bool {
        self.abs() <= Self::zero_tol()
    }

    fn is_pos(&self) -> bool {
        *self > Self::zero_tol()
    }

    fn approx_le(&self, other: &Self, tol: &Self) -> bool {
        self.clone() <= other.clone() + tol.clone()
    }

    /// Returns the nearest integer when `self` is integral up to the zero tolerance.
    fn near_integer(&self) -> Option<Self> {
        let r = (self.clone() + Self::from_rational(&half())).floor();
        if (self.clone() - r.clone()).abs() <= Self::zero_tol() {
            Some(r)
        } else {
            None
        }
    }

    /// Ceiling that ignores tolerance-level overshoot (1 + 1e-12 ceils to 1).
    fn ceil_tol(&self) -> Self {
        match self.near_integer() {
            Some(r) => r,
            None => self.ceil(),
        }
    }

    /// Floor that ignores tolerance-level undershoot (1 - 1e-12 floors to 1).
    fn floor_tol(&self) -> Self {
        match self.near_integer() {
            Some(r) => r,
            None => self.floor(),
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(<Rational as Zero>::zero)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn ceil(&self) -> Self {
        f64::ceil(*self)
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn zero_tol() -> Self {
        1e-9
    }
    fn feas_tol() -> Self {
        1e-7
    }
    fn opt_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-9
    }
    fn value_zero_tol() -> Self {
        1e-6
    }

    fn solve_lp(problem: &LpProblem<Self>) -> Result<LpOutcome<Self>, LpError> {
        match lp::simplex::solve(problem) {
            Err(LpError::NumericBreakdown(reason)) => {
                log::debug!("float simplex broke down ({reason}); retrying in exact arithmetic");
                let exact = problem.map(|v| v.to_rational());
                let outcome = lp::simplex::solve(&exact)?;
                Ok(outcome.map(|v| Scalar::to_f64(v)))
            }
            other => other,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn floor(&self) -> Self {
        Rational::floor(self)
    }
    fn ceil(&self) -> Self {
        Rational::ceil(self)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_tol() -> Self {
        Zero::zero()
    }
    fn feas_tol() -> Self {
        Zero::zero()
    }
    fn opt_tol() -> Self {
        Zero::zero()
    }
    fn pivot_tol() -> Self {
        Zero::zero()
    }
    fn value_zero_tol() -> Self {
        Zero::zero()
    }

    fn solve_lp(problem: &LpProblem<Self>) -> Result<LpOutcome<Self>, LpError> {
        lp::simplex::solve(problem)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a decimal literal (with optional exponent) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, FdtError> {
    let s = text.trim();
    let bad = || FdtError::Parse(format!("invalid number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Reads a JSON number or numeric string exactly.
pub fn rational_from_json(value: &serde_json::Value) -> Result<Rational, FdtError> {
    match value {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(FdtError::Parse(format!("expected a number, found {other}"))),
    }
}

pub fn rational_from_f64(v: f64) -> Rational {
    <Rational as FromPrimitive>::from_f64(v).unwrap_or_else(<Rational as Zero>::zero)
}

pub fn convert_vec<S: Scalar>(values: &[Rational]) -> Vec<S> {
    values.iter().map(S::from_rational).collect()
}

pub fn sum<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("2.5e-2").unwrap(), q(1, 40));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("1E2").unwrap(), q(100, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [q(1, 3), q(-5, 7), q(4, 1), q(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn tolerant_rounding() {
        assert_eq!((1.0 + 1e-12).ceil_tol(), 1.0);
        assert_eq!((2.0 - 1e-12).floor_tol(), 2.0);
        assert_eq!(1.4f64.floor_tol(), 1.0);
        assert_eq!(0.3f64.ceil_tol(), 1.0);
        assert_eq!(q(3, 2).floor_tol(), q(1, 1));
        assert_eq!(q(1, 1000000).ceil_tol(), q(1, 1));
    }

    #[test]
    fn json_numbers_are_read_exactly() {
        let v: serde_json::Value = serde_json::from_str("[0.1, \"2/3\", 5]").unwrap();
        let parsed: Vec<Rational> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| rational_from_json(x).unwrap())
            .collect();
        assert_eq!(parsed, vec![q(1, 10), q(2, 3), q(5, 1)]);
    }
}
