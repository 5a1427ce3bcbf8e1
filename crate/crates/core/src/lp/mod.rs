//! Linear programs over continuous variables with an optional small
//! branch-and-bound integer mode.
//!
//! Problems are always minimized. The simplex itself runs in the `microlp`
//! backend; this module owns the problem model, result checking against
//! the stated tolerances, lazy row generation, and branch and bound.

mod ilp;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::LpError;

pub use ilp::solve_ilp_small;

/// Absolute tolerance on constraint satisfaction of a returned solution.
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Relative tolerance on objective optimality.
pub const OPTIMALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarDef {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { coeffs, sense, rhs }
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which `values` violate this row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let a = self.activity(values);
        match self.sense {
            Sense::Le => (a - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - a).max(0.0),
            Sense::Eq => (a - self.rhs).abs(),
        }
    }

    /// Coefficients with repeated variables summed and zeros dropped, in
    /// ascending variable order.
    fn merged(&self) -> Vec<(VarId, f64)> {
        let mut m: BTreeMap<VarId, f64> = BTreeMap::new();
        for &(v, c) in &self.coeffs {
            *m.entry(v).or_insert(0.0) += c;
        }
        m.into_iter().filter(|&(_, c)| c != 0.0).collect()
    }
}

/// A minimization problem `min c·x` subject to rows and variable bounds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    vars: Vec<VarDef>,
    rows: Vec<Row>,
    objective: Vec<f64>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        self.vars.push(VarDef {
            name: name.into(),
            lower,
            upper,
        });
        self.objective.push(0.0);
        VarId(self.vars.len() - 1)
    }

    pub fn set_objective(&mut self, var: VarId, coeff: f64) {
        self.objective[var.0] = coeff;
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(VarId, f64)>, sense: Sense, rhs: f64) {
        self.add_row(Row::new(coeffs, sense, rhs));
    }

    pub fn vars(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn var_mut(&mut self, v: VarId) -> &mut VarDef {
        &mut self.vars[v.0]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Largest violation of any row or bound.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(values));
        let bounds = self
            .vars
            .iter()
            .zip(values)
            .map(|(v, &x)| (v.lower - x).max(x - v.upper).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.vars.is_empty() {
            return Err(LpError::Malformed("no variables".into()));
        }
        for v in &self.vars {
            if v.lower.is_nan() || v.upper.is_nan() {
                return Err(LpError::Malformed(format!("NaN bound on {}", v.name)));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("non-finite objective coefficient".into()));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if !r.rhs.is_finite() {
                return Err(LpError::Malformed(format!("row {i} has non-finite rhs")));
            }
            for &(v, c) in &r.coeffs {
                if v.0 >= self.vars.len() {
                    return Err(LpError::Malformed(format!(
                        "row {i} references undeclared variable {}",
                        v.0
                    )));
                }
                if !c.is_finite() {
                    return Err(LpError::Malformed(format!("row {i} has non-finite coefficient")));
                }
            }
        }
        Ok(())
    }

    /// The problem in CPLEX LP text layout, for cross-checking with
    /// external solvers.
    pub fn to_lp_format(&self) -> String {
        fn term(out: &mut String, first: bool, c: f64, name: &str) {
            if first {
                let _ = write!(out, " {c} {name}");
            } else if c < 0.0 {
                let _ = write!(out, " - {} {name}", -c);
            } else {
                let _ = write!(out, " + {c} {name}");
            }
        }
        let mut out = String::from("Minimize\n obj:");
        let mut first = true;
        for (i, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                term(&mut out, first, c, &self.vars[i].name);
                first = false;
            }
        }
        if first {
            out.push_str(" 0");
        }
        out.push_str("\nSubject To\n");
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(out, " c{i}:");
            let mut first = true;
            for (v, c) in r.merged() {
                term(&mut out, first, c, &self.vars[v.0].name);
                first = false;
            }
            if first {
                out.push_str(" 0");
            }
            let _ = writeln!(out, " {} {}", r.sense.symbol(), r.rhs);
        }
        out.push_str("Bounds\n");
        for v in &self.vars {
            let lo = if v.lower.is_finite() {
                v.lower.to_string()
            } else {
                "-inf".to_string()
            };
            let hi = if v.upper.is_finite() {
                v.upper.to_string()
            } else {
                "+inf".to_string()
            };
            let _ = writeln!(out, " {lo} <= {} <= {hi}", v.name);
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Branch and bound hit its node limit; `values` hold the best integer
    /// solution found, if any.
    ResourceLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    fn status_only(status: LpStatus) -> Self {
        LpSolution {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn value(&self, v: VarId) -> f64 {
        self.values[v.0]
    }
}

fn op(s: Sense) -> ComparisonOp {
    match s {
        Sense::Le => ComparisonOp::Le,
        Sense::Eq => ComparisonOp::Eq,
        Sense::Ge => ComparisonOp::Ge,
    }
}

/// Outcome of translating one row for the backend.
enum Prepared {
    Row(Vec<(microlp::Variable, f64)>, ComparisonOp, f64),
    /// Empty row that holds trivially.
    Trivial,
    /// Empty row that can never hold.
    Contradiction,
}

fn prepare(row: &Row, handles: &[microlp::Variable]) -> Prepared {
    let coeffs = row.merged();
    if coeffs.is_empty() {
        let ok = match row.sense {
            Sense::Le => 0.0 <= row.rhs + FEASIBILITY_TOL,
            Sense::Ge => 0.0 >= row.rhs - FEASIBILITY_TOL,
            Sense::Eq => row.rhs.abs() <= FEASIBILITY_TOL,
        };
        return if ok {
            Prepared::Trivial
        } else {
            Prepared::Contradiction
        };
    }
    Prepared::Row(
        coeffs.into_iter().map(|(v, c)| (handles[v.0], c)).collect(),
        op(row.sense),
        row.rhs,
    )
}

fn backend_status(e: microlp::Error) -> Result<LpStatus, LpError> {
    match e {
        microlp::Error::Infeasible => Ok(LpStatus::Infeasible),
        microlp::Error::Unbounded => Ok(LpStatus::Unbounded),
        microlp::Error::InternalError(m) => Err(LpError::Backend(m)),
    }
}

/// Solves `p` to optimality.
///
/// Deterministic for identical input. An `Optimal` result satisfies every
/// row and bound within [`FEASIBILITY_TOL`]; otherwise a
/// [`LpError::NumericInstability`] is returned.
pub fn solve_lp(p: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_lp_with_rows(p, |_| Vec::new()).map(|(s, _)| s)
}

/// Solves `p` with lazily generated rows.
///
/// After each solve `separate` is called with the current values and may
/// return rows violated by them; those rows are added and the problem is
/// re-optimized from the current basis. The loop ends when `separate`
/// returns nothing. Returns the final solution and every row that was
/// added.
pub fn solve_lp_with_rows<F>(p: &LinearProgram, mut separate: F) -> Result<(LpSolution, Vec<Row>), LpError>
where
    F: FnMut(&[f64]) -> Vec<Row>,
{
    p.validate()?;
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let handles: Vec<_> = p
        .vars
        .iter()
        .zip(&p.objective)
        .map(|(v, &c)| problem.add_var(c, (v.lower, v.upper)))
        .collect();
    for r in &p.rows {
        match prepare(r, &handles) {
            Prepared::Row(e, o, rhs) => problem.add_constraint(e, o, rhs),
            Prepared::Trivial => {}
            Prepared::Contradiction => {
                return Ok((LpSolution::status_only(LpStatus::Infeasible), Vec::new()))
            }
        }
    }
    let mut sol = match problem.solve() {
        Ok(s) => s,
        Err(e) => return Ok((LpSolution::status_only(backend_status(e)?), Vec::new())),
    };
    let mut added: Vec<Row> = Vec::new();
    loop {
        let values: Vec<f64> = handles.iter().map(|&h| sol[h]).collect();
        let cuts = separate(&values);
        if cuts.is_empty() {
            let worst = p
                .max_violation(&values)
                .max(added.iter().map(|r| r.violation(&values)).fold(0.0, f64::max));
            if worst > FEASIBILITY_TOL {
                return Err(LpError::NumericInstability { violation: worst });
            }
            let objective_value = p.objective_value(&values);
            return Ok((
                LpSolution {
                    status: LpStatus::Optimal,
                    values,
                    objective_value,
                },
                added,
            ));
        }
        for r in cuts {
            if r.coeffs.iter().any(|(v, _)| v.0 >= handles.len()) {
                return Err(LpError::Malformed("lazy row references undeclared variable".into()));
            }
            match prepare(&r, &handles) {
                Prepared::Row(e, o, rhs) => {
                    sol = match sol.add_constraint(e, o, rhs) {
                        Ok(s) => s,
                        Err(e) => return Ok((LpSolution::status_only(backend_status(e)?), added)),
                    };
                }
                Prepared::Trivial => {}
                Prepared::Contradiction => {
                    return Ok((LpSolution::status_only(LpStatus::Infeasible), added))
                }
            }
            added.push(r);
        }
    }
}
