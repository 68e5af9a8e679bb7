//! Exact rational linear programs: a small modelling layer, a two-phase
//! simplex solver, and the non-signaling coding programs.

pub mod builders;
pub mod simplex;
pub mod z0z1;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use builders::{build_lp1, build_lp1_capped, build_lp2, lp1_to_lp2, lp2_to_lp1, NsShape};
pub use simplex::solve_exact;
pub use z0z1::{build_lp3_z0z1, build_lp4_z0z1, paper_certificate_z0z1, verify_certificate, CertificateCheck};

/// Default cap on the number of LP variables accepted by the builders.
pub const VARIABLE_CAP: u128 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowKind {
    Eq,
    Le,
    Ge,
}

impl RowKind {
    fn symbol(self) -> &'static str {
        match self {
            RowKind::Eq => "=",
            RowKind::Le => "<=",
            RowKind::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub label: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: RowKind,
    pub rhs: Rational,
}

impl Row {
    pub fn lhs(&self, assignment: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &assignment[*j]).sum()
    }

    pub fn holds(&self, assignment: &[Rational]) -> bool {
        let lhs = self.lhs(assignment);
        match self.kind {
            RowKind::Eq => lhs == self.rhs,
            RowKind::Le => lhs <= self.rhs,
            RowKind::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    names: Vec<String>,
    index: HashMap<String, usize>,
    nonneg: Vec<bool>,
    objective: Vec<(usize, Rational)>,
    rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            names: Vec::new(),
            index: HashMap::new(),
            nonneg: Vec::new(),
            objective: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, nonneg: bool) -> usize {
        let name = name.into();
        let j = self.names.len();
        let previous = self.index.insert(name.clone(), j);
        assert!(previous.is_none(), "duplicate variable {name}");
        self.names.push(name);
        self.nonneg.push(nonneg);
        j
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>) {
        self.objective = merge(coeffs);
    }

    /// Adds a row; repeated variables are merged and zero coefficients dropped.
    pub fn add_row(&mut self, label: impl Into<String>, coeffs: Vec<(usize, Rational)>, kind: RowKind, rhs: Rational) {
        let coeffs = merge(coeffs);
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.names.len()));
        self.rows.push(Row {
            label: label.into(),
            coeffs,
            kind,
            rhs,
        });
    }

    /// Removes every row whose label satisfies `pred`; returns how many were dropped.
    pub fn remove_rows(&mut self, pred: impl Fn(&str) -> bool) -> usize {
        let before = self.rows.len();
        self.rows.retain(|r| !pred(&r.label));
        before - self.rows.len()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_nonneg(&self, j: usize) -> bool {
        self.nonneg[j]
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn rows_of_kind(&self, kind: RowKind) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.kind == kind)
    }

    pub fn objective_value(&self, assignment: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &assignment[*j]).sum()
    }

    /// Every violated row and sign restriction, described by label.
    pub fn violations(&self, assignment: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        for (j, v) in assignment.iter().enumerate() {
            if self.nonneg[j] && v.is_negative() {
                out.push(format!("{} >= 0 (value {v})", self.names[j]));
            }
        }
        for row in &self.rows {
            if !row.holds(assignment) {
                out.push(format!(
                    "{}: {} {} {}",
                    row.label,
                    row.lhs(assignment),
                    row.kind.symbol(),
                    row.rhs
                ));
            }
        }
        out
    }

    /// Dense assignment from named values; unnamed variables are zero.
    pub fn assignment_from_map(&self, values: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.num_vars()];
        for (name, v) in values {
            let j = self
                .var(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name}")))?;
            out[j] = v.clone();
        }
        Ok(out)
    }

    /// `name = p/q` lines for the nonzero entries of an assignment.
    pub fn export_assignment(&self, assignment: &[Rational]) -> String {
        let mut out = String::new();
        for (name, v) in self.names.iter().zip(assignment) {
            if !v.is_zero() {
                let _ = writeln!(out, "{name} = {v}");
            }
        }
        out
    }
}

fn merge(coeffs: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
    for (j, c) in coeffs {
        *map.entry(j).or_default() += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal value; zero unless `status` is optimal.
    pub value: Rational,
    /// One entry per program variable; zeros unless optimal.
    pub assignment: Vec<Rational>,
    pub pivots: usize,
}

/// Parses `name = p/q` lines (blank lines and `#` comments are skipped).
pub fn parse_assignment(text: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("line {}: expected `name = value`", lineno + 1))
        })?;
        let v = crate::rational::parse_rational(value.trim())?;
        out.insert(name.trim().to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn rows_merge_and_check() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", true);
        let y = lp.add_var("y", false);
        lp.add_row("a", vec![(x, r(1, 2)), (x, r(1, 2)), (y, r(0, 1))], RowKind::Le, r(1, 1));
        assert_eq!(lp.rows()[0].coeffs, vec![(x, r(1, 1))]);
        assert!(lp.violations(&[r(1, 1), r(-5, 1)]).is_empty());
        let v = lp.violations(&[r(-1, 1), r(0, 1)]);
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("x >= 0"));
        assert_eq!(lp.violations(&[r(2, 1), r(0, 1)]), vec!["a: 2 <= 1".to_string()]);
    }

    #[test]
    fn export_and_parse() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.add_var("a", true);
        lp.add_var("b", true);
        let text = lp.export_assignment(&[r(3, 4), r(0, 1)]);
        assert_eq!(text, "a = 3/4\n");
        let map = parse_assignment(&text).unwrap();
        assert_eq!(lp.assignment_from_map(&map).unwrap(), vec![r(3, 4), r(0, 1)]);
        assert!(parse_assignment("a 3").is_err());
        let mut bad = BTreeMap::new();
        bad.insert("zz".to_string(), r(1, 1));
        assert!(lp.assignment_from_map(&bad).is_err());
    }
}
