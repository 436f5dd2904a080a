use thiserror::Error;

use crate::scheduling::ProjectDiagnostic;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a system of inequalities has no regular solution.
#[derive(Debug, Clone, PartialEq)]
pub enum Infeasibility {
    /// The trace series of the recursive matrix exceeds the unit.
    TraceSeriesAboveUnit { trace_series: f64 },
    /// The parameter box `u_lo <= u <= u_hi` is empty.
    EmptyParameterBox { delta: f64 },
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::TraceSeriesAboveUnit { trace_series } => {
                write!(f, "trace series {trace_series} exceeds the unit")
            }
            Infeasibility::EmptyParameterBox { delta } => {
                write!(f, "parameter bounds are inconsistent (delta = {delta})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("the zero element has no inverse")]
    ZeroInverse,
    #[error("invalid scalar value {0}")]
    InvalidScalar(f64),
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("vector has only zero entries")]
    ZeroVector,
    #[error("vector is not regular (entry {index} is zero)")]
    IrregularVector { index: usize },
    #[error("no regular solution: {0}")]
    NoRegularSolution(Infeasibility),
    #[error("matrix is not column-regular (column {column} is zero)")]
    NotColumnRegular { column: usize },
    #[error("bound vector is not regular (entry {index} is zero)")]
    IrregularBound { index: usize },
    #[error("constraints have no common regular solution (delta = {delta})")]
    InfeasibleProblem { delta: f64 },
    #[error("objective matrix has zero spectral radius")]
    DegenerateObjective,
    #[error("problem dimension {n} exceeds the supported maximum of {max}")]
    ProblemTooLarge { n: usize, max: usize },
    #[error("schedule is infeasible (delta = {delta})")]
    InfeasibleSchedule { delta: f64 },
    #[error("project violates solver hypotheses: {}", join_diagnostics(.0))]
    InvalidProject(Vec<ProjectDiagnostic>),
    #[error("parameter lies outside the solution bounds")]
    ParameterOutOfBounds,
    #[error("grid has {points} points, above the cap of {cap}")]
    GridTooLarge { points: f64, cap: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no feasible grid point")]
    NoFeasiblePoint,
    #[error("cannot parse literal: {0}")]
    Parse(String),
}

fn join_diagnostics(diags: &[ProjectDiagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
