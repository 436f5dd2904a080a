//! Batch driver behind the `tropical-sched` binary.
//!
//! Exit codes: 0 optimal, 2 infeasible, 3 invalid input, 4 the brute-force
//! check disagrees with the solver.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::document::{
    parse_project, parse_raw, ActivityResult, FamilyBounds, RawProblem, ResultDocument, Status,
    Verification,
};
use crate::error::Error;
use crate::inequalities::SolutionSet;
use crate::linalg::Vector;
use crate::optimizer::{self, Optimum, ProblemSpec, Representative};
use crate::oracle::{self, GridSpec};
use crate::scheduling::{self, Project, Time};
use crate::semifield::MaxPlus;

pub const EXIT_VERIFICATION_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "tropical-sched")]
#[command(about = "Minimise maximum flow time of a project under temporal constraints")]
#[command(version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a project (or, with --raw, a general problem) from a TOML file
    Solve(SolveArgs),
}

#[derive(Parser, Debug, Clone)]
pub struct SolveArgs {
    /// Input document
    #[arg(long)]
    pub input: PathBuf,

    /// Write the JSON result document here
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Member of the optimal family to report
    #[arg(long, value_enum, default_value_t = RepresentativeArg::Earliest)]
    pub representative: RepresentativeArg,

    /// Cross-check against an exhaustive grid search
    #[arg(long)]
    pub verify: bool,

    /// Grid pitch used by --verify
    #[arg(long, default_value_t = 1.0)]
    pub grid_step: f64,

    /// Input gives the matrices a, b, c, g, h directly
    #[arg(long)]
    pub raw: bool,

    /// Report format on standard output
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentativeArg {
    Earliest,
    Latest,
}

impl From<RepresentativeArg> for Representative {
    fn from(r: RepresentativeArg) -> Self {
        match r {
            RepresentativeArg::Earliest => Representative::Earliest,
            RepresentativeArg::Latest => Representative::Latest,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Runs the command and returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let Command::Solve(args) = &cli.command;
    let (doc, verification_failed) = solve_document(args);
    let exit = if verification_failed {
        EXIT_VERIFICATION_MISMATCH
    } else {
        doc.status.exit_code()
    };

    if let Some(path) = &args.output {
        if let Err(e) = fs::write(path, doc.to_json() + "\n") {
            let _ = writeln!(stderr, "cannot write {}: {e}", path.display());
            return Status::Invalid.exit_code();
        }
    }
    let report = match args.format {
        Format::Text => doc.to_text(),
        Format::Structured => doc.to_json() + "\n",
    };
    if stdout.write_all(report.as_bytes()).is_err() {
        return Status::Invalid.exit_code();
    }
    exit
}

/// Builds the result document; the flag is set when verification was
/// requested and the oracle disagrees.
pub fn solve_document(args: &SolveArgs) -> (ResultDocument, bool) {
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let msg = format!("cannot read {}: {e}", args.input.display());
            return (ResultDocument::failed(Status::Invalid, vec![msg]), false);
        }
    };
    let representative = Representative::from(args.representative);
    let (mut doc, spec) = if args.raw {
        match parse_raw(&text) {
            Ok(raw) => (solve_raw(&raw, representative), raw.to_spec()),
            Err(e) => (ResultDocument::failed(Status::Invalid, vec![e.to_string()]), None),
        }
    } else {
        match parse_project(&text).and_then(|d| d.to_project()) {
            Ok(project) => (solve_project(&project, representative), Some(project.to_problem())),
            Err(e) => (ResultDocument::failed(Status::Invalid, vec![e.to_string()]), None),
        }
    };

    if !args.verify || doc.status == Status::Invalid {
        return (doc, false);
    }
    let Some(spec) = spec else {
        doc.diagnostics
            .push("verification needs an upper constraint; skipped".to_string());
        return (doc, false);
    };
    match verify(&spec, &doc, args.grid_step) {
        Ok(v) => {
            let failed = !v.agrees;
            doc.verification = Some(v);
            (doc, failed)
        }
        Err(e) => {
            doc.diagnostics.push(format!("verification could not run: {e}"));
            doc.status = Status::Invalid;
            (doc, false)
        }
    }
}

fn classify(err: &Error) -> Status {
    match err {
        Error::InfeasibleSchedule { .. } | Error::InfeasibleProblem { .. } | Error::NoRegularSolution(_) => {
            Status::Infeasible
        }
        _ => Status::Invalid,
    }
}

fn diagnostics_for(err: &Error) -> Vec<String> {
    match err {
        Error::InvalidProject(diags) => diags.iter().map(ToString::to_string).collect(),
        Error::InfeasibleSchedule { delta } | Error::InfeasibleProblem { delta } => {
            vec![format!("delta = {} exceeds 0, no regular solution exists", Time::finite(*delta))]
        }
        other => vec![other.to_string()],
    }
}

fn family(set: &SolutionSet<MaxPlus>) -> FamilyBounds {
    let gen = set.generator();
    FamilyBounds {
        lower: set.lower().entries().to_vec(),
        upper: set.upper().map(|u| u.entries().to_vec()),
        generator: (0..gen.rows()).map(|i| gen.row(i).to_vec()).collect(),
    }
}

fn activity_rows(labels: &[String], x: &Vector<MaxPlus>, y: &Vector<MaxPlus>) -> Vec<ActivityResult> {
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| ActivityResult {
            label: label.clone(),
            initiation: x.get(i),
            completion: y.get(i),
            flow_time: y.get(i) * x.get(i).pseudo_inverse(),
        })
        .collect()
}

fn representative_name(r: Representative) -> String {
    match r {
        Representative::Earliest => "earliest",
        Representative::Latest => "latest",
    }
    .to_string()
}

pub fn solve_project(project: &Project, representative: Representative) -> ResultDocument {
    let delta = project.delta().ok();
    match scheduling::solve_schedule_with(project, representative) {
        Ok(s) => {
            let rows = activity_rows(project.labels(), &s.initiation, &s.completion);
            ResultDocument {
                status: Status::Optimal,
                theta: Some(s.max_flow_time),
                delta: Some(s.delta),
                spectral_radius: project.start_finish().spectral_radius().ok(),
                representative: Some(representative_name(representative)),
                activities: rows,
                family: Some(family(&s.solutions)),
                diagnostics: Vec::new(),
                verification: None,
            }
        }
        Err(e) => {
            let mut doc = ResultDocument::failed(classify(&e), diagnostics_for(&e));
            if doc.status == Status::Infeasible {
                doc.delta = delta;
            }
            doc
        }
    }
}

pub fn solve_raw(raw: &RawProblem, representative: Representative) -> ResultDocument {
    let n = raw.objective.rows();
    let result: Result<Optimum<MaxPlus>, Error> = match &raw.upper {
        Some((c, h)) => ProblemSpec::new(
            raw.objective.clone(),
            raw.recurrence.clone(),
            c.clone(),
            raw.lower.clone(),
            h.clone(),
        )
        .and_then(|spec| optimizer::solve(&spec)),
        None => optimizer::solve_without_upper(&raw.objective, &raw.recurrence, &raw.lower),
    };
    let optimum = match result {
        Ok(o) => o,
        Err(e) => {
            let mut doc = ResultDocument::failed(classify(&e), diagnostics_for(&e));
            if let Error::InfeasibleProblem { delta } = e {
                doc.delta = Some(Time::finite(delta));
            }
            return doc;
        }
    };

    let labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut diagnostics = Vec::new();
    let rows = match optimum.representative(representative) {
        Some(x) if x.is_regular() => {
            let y = raw.objective.apply(&x).expect("square objective");
            activity_rows(&labels, &x, &y)
        }
        Some(_) => {
            diagnostics.push("chosen representative is not regular; pick another".to_string());
            Vec::new()
        }
        None => {
            diagnostics.push("family is unbounded above; no latest representative".to_string());
            Vec::new()
        }
    };
    ResultDocument {
        status: Status::Optimal,
        theta: Some(optimum.theta),
        delta: Some(optimum.delta),
        spectral_radius: Some(optimum.spectral_radius),
        representative: Some(representative_name(representative)),
        activities: rows,
        family: Some(family(&optimum.solutions)),
        diagnostics,
        verification: None,
    }
}

/// Grid search over the default box. Agreement means: for an optimal
/// result, the grid minimum equals `theta` and the grid minimiser is
/// feasible with objective `theta`; for an infeasible one, no grid point is
/// feasible.
pub fn verify(spec: &ProblemSpec<MaxPlus>, doc: &ResultDocument, step: f64) -> Result<Verification, Error> {
    let search = GridSpec::default_for(spec, step).and_then(|grid| oracle::brute_force_min(spec, &grid));
    let found = match search {
        Ok(found) => Some(found),
        Err(Error::NoFeasiblePoint) => None,
        Err(e) => return Err(e),
    };
    let agrees = match (&found, doc.status, doc.theta) {
        (Some((value, arg)), Status::Optimal, Some(theta)) => {
            value.approx_eq(theta, optimizer::ROOT_TOLERANCE)
                && oracle::feasible(spec, arg)
                && oracle::objective(&spec.objective, arg)?.approx_eq(theta, optimizer::ROOT_TOLERANCE)
        }
        (None, Status::Infeasible, _) => true,
        _ => false,
    };
    Ok(Verification {
        grid_step: step,
        oracle_theta: found.as_ref().map(|(v, _)| *v),
        oracle_argmin: found.map(|(_, x)| x.entries().to_vec()),
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "tropical-sched",
            "solve",
            "--input",
            "p.toml",
            "--representative",
            "latest",
            "--verify",
            "--grid-step",
            "0.5",
            "--format",
            "structured",
        ])
        .unwrap();
        let Command::Solve(args) = cli.command;
        assert_eq!(args.input, PathBuf::from("p.toml"));
        assert_eq!(args.representative, RepresentativeArg::Latest);
        assert!(args.verify);
        assert_eq!(args.grid_step, 0.5);
        assert_eq!(args.format, Format::Structured);
        assert!(!args.raw);
        assert!(args.output.is_none());
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["tropical-sched", "solve", "--input", "p.toml"]).unwrap();
        let Command::Solve(args) = cli.command;
        assert_eq!(args.representative, RepresentativeArg::Earliest);
        assert_eq!(args.grid_step, 1.0);
        assert_eq!(args.format, Format::Text);
    }

    #[test]
    fn rejects_unknown_representative() {
        assert!(Cli::try_parse_from([
            "tropical-sched",
            "solve",
            "--input",
            "p.toml",
            "--representative",
            "middle"
        ])
        .is_err());
    }
}
