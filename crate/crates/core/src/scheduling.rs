//! Project scheduling that minimises the maximum flow time.
//!
//! Activity `i` starts at `x_i` and completes at `y_i`. The constraints are
//!
//! * start-start: `x_j + b_ij <= x_i`,
//! * start-finish: `y_i = max_j (x_j + a_ij)`,
//! * early start: `g_i <= x_i`,
//! * late finish: `y_i <= h_i`,
//!
//! and the objective is `max_i (y_i - x_i)`. In max-plus terms this is
//! `minimize x^- A x` subject to `Bx (+) g <= x`, `Ax <= h`, which the
//! general optimizer solves with the upper constraint matrix set to `A`.

use std::fmt;

use crate::error::{Error, Result};
use crate::inequalities::{system_delta, SolutionSet};
use crate::linalg::{Matrix, Vector};
use crate::optimizer::{self, ProblemSpec, Representative};
use crate::semifield::{MaxPlus, Scalar};

pub type Time = Scalar<MaxPlus>;

#[derive(Debug, Clone, PartialEq)]
pub struct Project {
    labels: Vec<String>,
    start_finish: Matrix<MaxPlus>,
    start_start: Matrix<MaxPlus>,
    early_start: Vector<MaxPlus>,
    late_finish: Vector<MaxPlus>,
}

impl Project {
    /// `start_finish[i][j]` is the least lag from the start of `j` to the
    /// completion of `i`; `start_start[i][j]` the least lag from the start of
    /// `j` to the start of `i`. Unset lags are the zero element.
    pub fn new(
        labels: Vec<String>,
        start_finish: Matrix<MaxPlus>,
        start_start: Matrix<MaxPlus>,
        early_start: Vector<MaxPlus>,
        late_finish: Vector<MaxPlus>,
    ) -> Result<Self> {
        let n = labels.len();
        let shapes = [
            ("start-finish lags", start_finish.shape(), (n, n)),
            ("start-start lags", start_start.shape(), (n, n)),
            ("early start", (early_start.dim(), 1), (n, 1)),
            ("late finish", (late_finish.dim(), 1), (n, 1)),
        ];
        for (op, got, want) in shapes {
            if got != want {
                return Err(Error::ShapeMismatch {
                    op,
                    left: want,
                    right: got,
                });
            }
        }
        Ok(Self {
            labels,
            start_finish,
            start_start,
            early_start,
            late_finish,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn start_finish(&self) -> &Matrix<MaxPlus> {
        &self.start_finish
    }

    pub fn start_start(&self) -> &Matrix<MaxPlus> {
        &self.start_start
    }

    pub fn early_start(&self) -> &Vector<MaxPlus> {
        &self.early_start
    }

    pub fn late_finish(&self) -> &Vector<MaxPlus> {
        &self.late_finish
    }

    /// The equivalent constrained problem in `x` alone.
    pub fn to_problem(&self) -> ProblemSpec<MaxPlus> {
        ProblemSpec::new(
            self.start_finish.clone(),
            self.start_start.clone(),
            self.start_finish.clone(),
            self.early_start.clone(),
            self.late_finish.clone(),
        )
        .expect("project shapes are validated on construction")
    }

    /// `Tr(B) (+) h^- A B* g`.
    pub fn delta(&self) -> Result<Time> {
        system_delta(
            &self.start_start,
            &self.early_start,
            &self.start_finish,
            &self.late_finish,
        )
    }
}

/// A violated solver hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectDiagnostic {
    /// No completion depends on the start of this activity.
    ColumnNotRegular { column: usize, label: String },
    /// The start-finish lags contain no cycle, so the flow time is unbounded below.
    ZeroSpectralRadius,
    LateFinishNotRegular { index: usize, label: String },
}

impl fmt::Display for ProjectDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectDiagnostic::ColumnNotRegular { column, label } => write!(
                f,
                "column {column} not regular: start of `{label}` drives no completion"
            ),
            ProjectDiagnostic::ZeroSpectralRadius => {
                f.write_str("start-finish lag matrix has zero spectral radius")
            }
            ProjectDiagnostic::LateFinishNotRegular { index, label } => write!(
                f,
                "late-finish bound not regular: entry {index} (`{label}`) is unset"
            ),
        }
    }
}

/// Checks the solver hypotheses; an empty list means the project is
/// admissible.
pub fn validate_project(project: &Project) -> Vec<ProjectDiagnostic> {
    let mut out = Vec::new();
    let a = &project.start_finish;
    for column in 0..a.cols() {
        if (0..a.rows()).all(|i| a.get(i, column).is_zero()) {
            out.push(ProjectDiagnostic::ColumnNotRegular {
                column,
                label: project.labels[column].clone(),
            });
        }
    }
    if a.spectral_radius().map_or(true, |l| l.is_zero()) {
        out.push(ProjectDiagnostic::ZeroSpectralRadius);
    }
    for (index, h) in project.late_finish.iter().enumerate() {
        if h.is_zero() {
            out.push(ProjectDiagnostic::LateFinishNotRegular {
                index,
                label: project.labels[index].clone(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub initiation: Vector<MaxPlus>,
    pub completion: Vector<MaxPlus>,
    pub max_flow_time: Time,
    /// All optimal initiation vectors.
    pub solutions: SolutionSet<MaxPlus>,
    pub delta: Time,
    pub representative: Representative,
}

/// Earliest optimal schedule.
pub fn solve_schedule(project: &Project) -> Result<Schedule> {
    solve_schedule_with(project, Representative::Earliest)
}

pub fn solve_schedule_with(project: &Project, representative: Representative) -> Result<Schedule> {
    let diagnostics = validate_project(project);
    if !diagnostics.is_empty() {
        return Err(Error::InvalidProject(diagnostics));
    }
    let delta = project.delta()?;
    if delta.exceeds_one() {
        return Err(Error::InfeasibleSchedule {
            delta: delta.to_f64(),
        });
    }
    let optimum = optimizer::solve(&project.to_problem()).map_err(|e| match e {
        Error::InfeasibleProblem { delta } => Error::InfeasibleSchedule { delta },
        other => other,
    })?;
    let initiation = optimum
        .representative(representative)
        .expect("upper constraint bounds the family");
    if let Some(index) = initiation.first_zero() {
        return Err(Error::IrregularVector { index });
    }
    let completion = project.start_finish.apply(&initiation)?;
    Ok(Schedule {
        initiation,
        completion,
        max_flow_time: optimum.theta,
        solutions: optimum.solutions,
        delta,
        representative,
    })
}

/// Per-activity flow time `y_i - x_i`.
pub fn flow_times(schedule: &Schedule) -> Vector<MaxPlus> {
    let data = schedule
        .completion
        .iter()
        .zip(schedule.initiation.iter())
        .map(|(y, x)| y * x.pseudo_inverse())
        .collect();
    Vector::new(data).expect("schedules are nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(t: &str) -> Matrix<MaxPlus> {
        t.parse().unwrap()
    }
    fn v(t: &str) -> Vector<MaxPlus> {
        t.parse().unwrap()
    }
    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("a{}", i + 1)).collect()
    }

    fn worked_project(h: &str) -> Project {
        Project::new(
            labels(3),
            m("4 0 -inf; 2 3 1; 1 1 3"),
            m("-inf -2 1; 0 -inf 2; -1 -inf -inf"),
            v("0 0 0"),
            v(h),
        )
        .unwrap()
    }

    #[test]
    fn worked_project_is_valid() {
        assert!(validate_project(&worked_project("5 5 5")).is_empty());
    }

    #[test]
    fn validation_diagnostics() {
        let p = Project::new(labels(2), m("1 -inf; 0 -inf"), Matrix::zeros(2, 2), v("0 0"), v("5 -inf")).unwrap();
        let diags = validate_project(&p);
        assert!(diags.contains(&ProjectDiagnostic::ColumnNotRegular {
            column: 1,
            label: "a2".into()
        }));
        assert!(diags.contains(&ProjectDiagnostic::LateFinishNotRegular {
            index: 1,
            label: "a2".into()
        }));
        assert!(diags[0].to_string().starts_with("column 1 not regular"));
        assert!(diags
            .iter()
            .any(|d| d.to_string().starts_with("late-finish bound not regular")));

        let acyclic = Project::new(labels(2), m("-inf 1; -inf -inf"), Matrix::zeros(2, 2), v("0 0"), v("5 5")).unwrap();
        assert!(validate_project(&acyclic).contains(&ProjectDiagnostic::ZeroSpectralRadius));
        assert!(matches!(solve_schedule(&acyclic), Err(Error::InvalidProject(_))));
    }

    #[test]
    fn worked_schedule() {
        let s = solve_schedule(&worked_project("5 5 5")).unwrap();
        assert_eq!(s.max_flow_time, Time::finite(4.0));
        assert_eq!(s.initiation, v("1 2 0"));
        assert_eq!(s.completion, v("5 5 3"));
        assert_eq!(s.delta, Time::one());
        assert_eq!(flow_times(&s), v("4 3 3"));
        let latest = solve_schedule_with(&worked_project("5 5 5"), Representative::Latest).unwrap();
        assert_eq!(latest.initiation, v("1 2 0"));
    }

    #[test]
    fn single_activity() {
        let p = Project::new(labels(1), m("3"), m("-inf"), v("0"), v("10")).unwrap();
        let s = solve_schedule(&p).unwrap();
        assert_eq!(s.max_flow_time, Time::finite(3.0));
        assert_eq!(s.initiation, v("0"));
        assert_eq!(s.completion, v("3"));
        assert_eq!(flow_times(&s), v("3"));
        let latest = solve_schedule_with(&p, Representative::Latest).unwrap();
        assert_eq!(latest.initiation, v("7"));
        assert_eq!(latest.completion, v("10"));
    }

    #[test]
    fn tight_deadline_is_infeasible() {
        let err = solve_schedule(&worked_project("4 4 4")).unwrap_err();
        assert_eq!(err, Error::InfeasibleSchedule { delta: 1.0 });
    }

    #[test]
    fn zero_duration_activities() {
        let p = Project::new(labels(2), m("0 -inf; -inf 0"), Matrix::zeros(2, 2), v("1 2"), v("5 5")).unwrap();
        let s = solve_schedule(&p).unwrap();
        assert_eq!(s.initiation, s.completion);
        assert_eq!(flow_times(&s), Vector::filled(2, Time::one()));
    }

    #[test]
    fn shape_errors() {
        assert!(Project::new(labels(2), m("1"), m("-inf"), v("0"), v("1")).is_err());
        assert!(Project::new(labels(1), m("1"), m("-inf"), v("0 0"), v("1")).is_err());
    }
}
