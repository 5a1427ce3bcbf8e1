use std::fmt;

use thiserror::Error;

use crate::lp::LpStatus;
use crate::splitter::CostTuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("phase skip {0} out of range 0..=3")]
    Skip(u8),
    #[error("splitter max fanout must be at least 2, got {0}")]
    MaxFanout(usize),
    #[error("subset cap must be positive")]
    SubsetCap,
    #[error("tree order budget must be positive")]
    OrderBudget,
    #[error("primary input level must be non-negative, got {0}")]
    PiLevel(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number, 0 when the error is not tied to a line.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate type `{0}`")]
    UnknownOp(String),
    #[error("{op} expects {expected} input(s), found {found}")]
    Arity {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("undefined signal `{0}`")]
    Undefined(String),
    #[error("signal `{0}` defined more than once")]
    Redefined(String),
    #[error("cyclic definition through `{0}`")]
    Cycle(String),
    #[error("malformed JSON netlist: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("solution violates a constraint by {violation:e}, above tolerance")]
    NumericInstability { violation: f64 },
    #[error("solver failure: {0}")]
    Backend(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no feasible splitter tree for this fanout set")]
    Infeasible,
    #[error("reconstructed tree costs {found} but the table root says {expected}")]
    Inconsistent {
        expected: CostTuple,
        found: CostTuple,
    },
    #[error("brute-force oracle limited to {max_leaves} leaves and delay {max_delay}")]
    SizeLimit { max_leaves: usize, max_delay: u32 },
}

/// Optimization step that produced a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    InitialLevels,
    SplitterInsertion,
    LevelAssignment,
    Reconstruction,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::InitialLevels => "step 1 (initial level assignment)",
            Step::SplitterInsertion => "step 2 (splitter tree insertion)",
            Step::LevelAssignment => "step 3 (level assignment)",
            Step::Reconstruction => "step 4 (splitter tree reconstruction)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("input netlist is not optimizable: {0}")]
    Input(String),
    #[error("{step}: {source}")]
    Solver { step: Step, source: LpError },
    #[error("{step}: solver returned {status:?}")]
    Status { step: Step, status: LpStatus },
    #[error("{step}: {source}")]
    Tree { step: Step, source: TreeError },
    #[error("result failed verification: {0}")]
    Verification(String),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: malformed metrics: {message}")]
    Metrics { path: String, message: String },
}
