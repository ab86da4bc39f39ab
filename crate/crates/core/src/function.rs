//! Complex-valued functions on a domain, stored densely by element index.

use std::fmt::Write as _;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::groups::{Domain, GroupElement};
use crate::report::fmt_f64;

pub type C = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("function has {found} values but the domain has {expected} elements")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value at element {0}")]
    NonFinite(usize),
    #[error("malformed function file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<C>,
}

impl GroupFunction {
    pub fn new(values: Vec<C>) -> Result<Self, FunctionError> {
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(FunctionError::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![C::new(0.0, 0.0); n] }
    }

    pub fn constant(n: usize, v: C) -> Self {
        Self { values: vec![v; n] }
    }

    pub fn from_fn(n: usize, f: impl FnMut(GroupElement) -> C) -> Self {
        Self { values: (0..n).map(f).collect() }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self { values: values.iter().map(|&v| C::new(v, 0.0)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C> {
        self.values
    }

    pub fn check_domain<D: Domain + ?Sized>(&self, domain: &D) -> Result<(), FunctionError> {
        if self.values.len() == domain.size() {
            Ok(())
        } else {
            Err(FunctionError::LengthMismatch { expected: domain.size(), found: self.values.len() })
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.sup_norm() <= tol
    }

    pub fn map(&self, f: impl Fn(C) -> C) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, s: C) -> Self {
        self.map(|v| v * s)
    }

    /// Pointwise product.
    pub fn times(&self, other: &GroupFunction) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    /// `x ↦ self(perm[x])`, e.g. composition with an involution.
    pub fn compose(&self, perm: &[GroupElement]) -> Self {
        Self { values: perm.iter().map(|&p| self.values[p]).collect() }
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &GroupFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Header line with the length, then one `re im` line per element.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.values.len());
        for v in &self.values {
            let _ = writeln!(out, "{} {}", fmt_f64(v.re), fmt_f64(v.im));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FunctionError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| FunctionError::Parse("missing length header".into()))?;
        let values = parse_value_lines(lines.take(n))?;
        if values.len() != n {
            return Err(FunctionError::Parse(format!("expected {n} values, found {}", values.len())));
        }
        Self::new(values)
    }
}

/// Parses `re im` lines (a bare `re` is accepted as a real value).
pub(crate) fn parse_value_lines<'a>(
    lines: impl Iterator<Item = &'a str>,
) -> Result<Vec<C>, FunctionError> {
    lines
        .map(|line| {
            let mut parts = line.split_whitespace().map(str::parse::<f64>);
            let bad = || FunctionError::Parse(format!("bad value line `{line}`"));
            let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
            let im = parts.next().transpose().map_err(|_| bad())?.unwrap_or(0.0);
            Ok(C::new(re, im))
        })
        .collect()
}

impl Index<GroupElement> for GroupFunction {
    type Output = C;

    fn index(&self, i: GroupElement) -> &C {
        &self.values[i]
    }
}

impl Add for &GroupFunction {
    type Output = GroupFunction;

    fn add(self, rhs: &GroupFunction) -> GroupFunction {
        assert_eq!(self.len(), rhs.len());
        GroupFunction { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &GroupFunction {
    type Output = GroupFunction;

    fn sub(self, rhs: &GroupFunction) -> GroupFunction {
        assert_eq!(self.len(), rhs.len());
        GroupFunction { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<C> for &GroupFunction {
    type Output = GroupFunction;

    fn mul(self, rhs: C) -> GroupFunction {
        self.scale(rhs)
    }
}

impl Neg for &GroupFunction {
    type Output = GroupFunction;

    fn neg(self) -> GroupFunction {
        self.map(|v| -v)
    }
}
