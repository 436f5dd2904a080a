//! Input and output documents of the command-line tool.
//!
//! Inputs are TOML. A project document lists activities and sparse lag
//! tables:
//!
//! ```toml
//! version = 1
//!
//! [[activity]]
//! label = "a1"
//! early_start = 0
//! late_finish = 5
//!
//! [[start_start]]   # start(to) >= start(from) + lag
//! from = "a2"
//! to = "a1"
//! lag = -2
//!
//! [[start_finish]]  # finish(to) >= start(from) + lag
//! from = "a1"
//! to = "a1"
//! lag = 4
//! ```
//!
//! A raw document gives the problem matrices as literals (`;` between rows,
//! `-inf` for unset entries):
//!
//! ```toml
//! version = 1
//! a = "4 0 -inf; 2 3 1; 1 1 3"
//! b = "-inf -2 1; 0 -inf 2; -1 -inf -inf"   # optional, default all -inf
//! c = "4 0 -inf; 2 3 1; 1 1 3"              # optional, default identity
//! g = "0 0 0"
//! h = "5 5 5"                               # optional together with c
//! ```
//!
//! Results are written as JSON ([`ResultDocument`]).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::optimizer::ProblemSpec;
use crate::scheduling::{Project, Time};
use crate::semifield::{MaxPlus, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DocumentError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityEntry {
    pub label: String,
    pub early_start: f64,
    pub late_finish: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagEntry {
    pub from: String,
    pub to: String,
    pub lag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectDocument {
    pub version: u32,
    #[serde(rename = "activity", default)]
    pub activities: Vec<ActivityEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub start_start: Vec<LagEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub start_finish: Vec<LagEntry>,
}

fn syntax_error(err: toml::de::Error) -> DocumentError {
    DocumentError::Syntax(err.to_string().trim_end().to_owned())
}

fn check_version(version: u32) -> Result<(), DocumentError> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(schema(
            "version",
            format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        ))
    }
}

/// Parses and validates a project document.
pub fn parse_project(text: &str) -> Result<ProjectDocument, DocumentError> {
    let doc: ProjectDocument = toml::from_str(text).map_err(syntax_error)?;
    doc.to_project()?;
    Ok(doc)
}

impl ProjectDocument {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("project documents always serialise")
    }

    /// Builds the project; unset lags become the zero element.
    pub fn to_project(&self) -> Result<Project, DocumentError> {
        check_version(self.version)?;
        if self.activities.is_empty() {
            return Err(schema("activity", "at least one activity is required"));
        }
        let mut index = HashMap::new();
        for (k, act) in self.activities.iter().enumerate() {
            let path = format!("activity[{k}]");
            if act.label.trim().is_empty() {
                return Err(schema(format!("{path}.label"), "label must not be empty"));
            }
            if index.insert(act.label.as_str(), k).is_some() {
                return Err(schema(
                    format!("{path}.label"),
                    format!("duplicate label `{}`", act.label),
                ));
            }
            finite(act.early_start, format!("{path}.early_start"))?;
            finite(act.late_finish, format!("{path}.late_finish"))?;
        }

        let n = self.activities.len();
        let start_start = lag_matrix(n, &index, &self.start_start, "start_start")?;
        let start_finish = lag_matrix(n, &index, &self.start_finish, "start_finish")?;
        let early = self.activities.iter().map(|a| Time::finite(a.early_start)).collect();
        let late = self.activities.iter().map(|a| Time::finite(a.late_finish)).collect();
        Project::new(
            self.activities.iter().map(|a| a.label.clone()).collect(),
            start_finish,
            start_start,
            Vector::new(early).expect("nonempty"),
            Vector::new(late).expect("nonempty"),
        )
        .map_err(|e| schema("activity", e.to_string()))
    }
}

fn finite(v: f64, path: String) -> Result<(), DocumentError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(schema(path, "value must be a finite number"))
    }
}

fn lag_matrix(
    n: usize,
    index: &HashMap<&str, usize>,
    entries: &[LagEntry],
    table: &str,
) -> Result<Matrix<MaxPlus>, DocumentError> {
    let mut m = Matrix::zeros(n, n);
    for (k, e) in entries.iter().enumerate() {
        let path = format!("{table}[{k}]");
        let lookup = |label: &str, field: &str| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| schema(format!("{path}.{field}"), format!("unknown activity `{label}`")))
        };
        let from = lookup(&e.from, "from")?;
        let to = lookup(&e.to, "to")?;
        finite(e.lag, format!("{path}.lag"))?;
        if !m.get(to, from).is_zero() {
            return Err(schema(
                path,
                format!("lag from `{}` to `{}` is given twice", e.from, e.to),
            ));
        }
        m.set(to, from, Scalar::finite(e.lag));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub version: u32,
    pub a: String,
    pub b: Option<String>,
    pub c: Option<String>,
    pub g: String,
    pub h: Option<String>,
}

/// A raw problem; `upper` is `None` when the document has no upper
/// constraint at all.
#[derive(Debug, Clone, PartialEq)]
pub struct RawProblem {
    pub objective: Matrix<MaxPlus>,
    pub recurrence: Matrix<MaxPlus>,
    pub lower: Vector<MaxPlus>,
    pub upper: Option<(Matrix<MaxPlus>, Vector<MaxPlus>)>,
}

impl RawProblem {
    /// The general problem; `None` without an upper constraint.
    pub fn to_spec(&self) -> Option<ProblemSpec<MaxPlus>> {
        let (c, h) = self.upper.as_ref()?;
        ProblemSpec::new(
            self.objective.clone(),
            self.recurrence.clone(),
            c.clone(),
            self.lower.clone(),
            h.clone(),
        )
        .ok()
    }
}

pub fn parse_raw(text: &str) -> Result<RawProblem, DocumentError> {
    let doc: RawDocument = toml::from_str(text).map_err(syntax_error)?;
    check_version(doc.version)?;
    let matrix = |field: &str, lit: &str| -> Result<Matrix<MaxPlus>, DocumentError> {
        lit.parse().map_err(|e: crate::Error| schema(field, e.to_string()))
    };
    let vector = |field: &str, lit: &str| -> Result<Vector<MaxPlus>, DocumentError> {
        lit.parse().map_err(|e: crate::Error| schema(field, e.to_string()))
    };

    let objective = matrix("a", &doc.a)?;
    if !objective.is_square() {
        return Err(schema("a", format!("must be square, got {:?}", objective.shape())));
    }
    let n = objective.rows();
    let recurrence = match &doc.b {
        Some(lit) => matrix("b", lit)?,
        None => Matrix::zeros(n, n),
    };
    if recurrence.shape() != (n, n) {
        return Err(schema("b", format!("must be {n}x{n}")));
    }
    let lower = vector("g", &doc.g)?;
    if lower.dim() != n {
        return Err(schema("g", format!("must have {n} entries")));
    }
    let upper = match (&doc.c, &doc.h) {
        (None, None) => None,
        (Some(_), None) => return Err(schema("h", "required when `c` is given")),
        (c, Some(h)) => {
            let c = match c {
                Some(lit) => matrix("c", lit)?,
                None => Matrix::identity(n),
            };
            let h = vector("h", h)?;
            if c.cols() != n || c.rows() != h.dim() {
                return Err(schema("c", format!("must be {}x{n} to match `h`", h.dim())));
            }
            Some((c, h))
        }
    };
    Ok(RawProblem {
        objective,
        recurrence,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Infeasible => 2,
            Status::Invalid => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityResult {
    pub label: String,
    pub initiation: Time,
    pub completion: Time,
    pub flow_time: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyBounds {
    pub lower: Vec<Time>,
    pub upper: Option<Vec<Time>>,
    pub generator: Vec<Vec<Time>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub grid_step: f64,
    /// Grid minimum, absent when no feasible grid point exists.
    pub oracle_theta: Option<Time>,
    pub oracle_argmin: Option<Vec<Time>>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub status: Status,
    pub theta: Option<Time>,
    pub delta: Option<Time>,
    pub spectral_radius: Option<Time>,
    pub representative: Option<String>,
    #[serde(default)]
    pub activities: Vec<ActivityResult>,
    pub family: Option<FamilyBounds>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
    pub verification: Option<Verification>,
}

impl ResultDocument {
    pub fn failed(status: Status, diagnostics: Vec<String>) -> Self {
        Self {
            status,
            theta: None,
            delta: None,
            spectral_radius: None,
            representative: None,
            activities: Vec::new(),
            family: None,
            diagnostics,
            verification: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents always serialise")
    }

    /// Human-readable report. Every number is printed from this document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        let status = match self.status {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Invalid => "invalid",
        };
        line(format!("status: {status}"));
        let scalars = [
            ("theta", self.theta),
            ("delta", self.delta),
            ("spectral radius", self.spectral_radius),
        ];
        for (name, value) in scalars {
            if let Some(v) = value {
                line(format!("{name}: {v}"));
            }
        }
        if let Some(rep) = &self.representative {
            line(format!("representative: {rep}"));
        }
        if !self.activities.is_empty() {
            let width = self
                .activities
                .iter()
                .map(|a| a.label.len())
                .max()
                .unwrap_or(0)
                .max("activity".len());
            line(format!(
                "{:<width$}  {:>10}  {:>10}  {:>10}",
                "activity", "start", "finish", "flow"
            ));
            for a in &self.activities {
                line(format!(
                    "{:<width$}  {:>10}  {:>10}  {:>10}",
                    a.label,
                    a.initiation.to_string(),
                    a.completion.to_string(),
                    a.flow_time.to_string()
                ));
            }
        }
        if let Some(family) = &self.family {
            let join = |v: &[Time]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            line(format!("family lower u: {}", join(&family.lower)));
            match &family.upper {
                Some(hi) => line(format!("family upper u: {}", join(hi))),
                None => line("family upper u: unbounded".to_string()),
            }
            let rows: Vec<String> = family.generator.iter().map(|r| join(r)).collect();
            line(format!("generator: {}", rows.join("; ")));
        }
        for d in &self.diagnostics {
            line(format!("diagnostic: {d}"));
        }
        if let Some(v) = &self.verification {
            let found = match &v.oracle_theta {
                Some(t) => t.to_string(),
                None => "infeasible".to_string(),
            };
            if v.agrees {
                line(format!("oracle agrees: {found}"));
            } else {
                line(format!("oracle disagrees: grid minimum {found} (step {})", v.grid_step));
            }
        }
        out
    }
}
