//! Closed-form solution of
//!
//! ```text
//! minimize    x^- A x
//! subject to  B x (+) g <= x,
//!             C x <= h,
//! ```
//!
//! over regular `x`, together with the two special cases without the upper
//! constraint (`C = 0`) and with a plain box (`B = 0`, `C = I`).
//!
//! The optimal value is
//! `theta = (+)_{k=1..n} (+)_{i_0+..+i_k <= n-k} tr^(1/k)(B^i0 A B^i1 .. A B^ik (I (+) g h^- C))`
//! and the minimisers are `x = S* u` with `S = theta^-1 A (+) B` and
//! `g <= u <= (h^- C S*)^-`.

use crate::error::{Error, Result};
use crate::inequalities::{
    solve_recursive_bound_with_tolerance, solve_system_with_tolerance, system_delta, SolutionSet,
};
use crate::linalg::{Matrix, Vector};
use crate::semifield::{Scalar, Semifield};

/// Largest dimension accepted by the closed-form evaluation. The number of
/// product chains grows like `2^n`.
pub const MAX_DIMENSION: usize = 20;

/// Slack for unit comparisons once `theta` has gone through a root.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Data of the constrained problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<S: Semifield> {
    /// `A`, n x n.
    pub objective: Matrix<S>,
    /// `B`, n x n.
    pub recurrence: Matrix<S>,
    /// `C`, m x n.
    pub constraint: Matrix<S>,
    /// `g`, n.
    pub lower: Vector<S>,
    /// `h`, m.
    pub upper: Vector<S>,
}

impl<S: Semifield> ProblemSpec<S> {
    /// Checks shapes only; the solver hypotheses are checked at solve time.
    pub fn new(
        objective: Matrix<S>,
        recurrence: Matrix<S>,
        constraint: Matrix<S>,
        lower: Vector<S>,
        upper: Vector<S>,
    ) -> Result<Self> {
        let n = objective.rows();
        let checks = [
            (objective.shape(), (n, n), "objective"),
            (recurrence.shape(), (n, n), "recurrence"),
            (constraint.shape(), (constraint.rows(), n), "constraint"),
            ((lower.dim(), 1), (n, 1), "lower bound"),
            ((upper.dim(), 1), (constraint.rows(), 1), "upper bound"),
        ];
        for (got, want, op) in checks {
            if got != want {
                return Err(Error::ShapeMismatch {
                    op,
                    left: want,
                    right: got,
                });
            }
        }
        Ok(Self {
            objective,
            recurrence,
            constraint,
            lower,
            upper,
        })
    }

    pub fn dim(&self) -> usize {
        self.objective.rows()
    }

    /// `Tr(B) (+) h^- C B* g`; the feasible set is nonempty iff this is at
    /// most one.
    pub fn feasibility_delta(&self) -> Result<Scalar<S>> {
        system_delta(&self.recurrence, &self.lower, &self.constraint, &self.upper)
    }
}

/// Which member of an optimal family to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representative {
    /// `u = u_lo`, the least solution.
    #[default]
    Earliest,
    /// `u = u_hi`, the greatest solution.
    Latest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<S: Semifield> {
    /// Minimum of the objective.
    pub theta: Scalar<S>,
    /// Every minimiser, `x = S* u`.
    pub solutions: SolutionSet<S>,
    pub spectral_radius: Scalar<S>,
    /// Feasibility indicator of the constraints, at most one.
    pub delta: Scalar<S>,
}

impl<S: Semifield> Optimum<S> {
    /// The chosen member of the optimal family. `None` for
    /// [`Representative::Latest`] when the family is unbounded above.
    pub fn representative(&self, which: Representative) -> Option<Vector<S>> {
        match which {
            Representative::Earliest => Some(self.solutions.lowest_point()),
            Representative::Latest => self.solutions.highest_point(),
        }
    }
}

/// Every tuple of `k + 1` non-negative integers whose sum is at most `smax`,
/// each exactly once.
///
/// Tuples come out in odometer order with the first component varying
/// fastest: `(0,0), (1,0), (0,1)` for `k = 1, smax = 1`.
pub fn enumerate_compositions(k: usize, smax: usize) -> impl Iterator<Item = Vec<usize>> {
    Compositions {
        smax,
        next: Some(vec![0; k + 1]),
    }
}

struct Compositions {
    smax: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut sum: usize = succ.iter().sum();
        for pos in 0..succ.len() {
            if sum < self.smax {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            sum -= succ[pos];
            succ[pos] = 0;
        }
        Some(current)
    }
}

fn is_zero_matrix<S: Semifield>(m: &Matrix<S>) -> bool {
    m.entries().iter().all(Scalar::is_zero)
}

/// Visits every product `B^i0 (A B^i1) .. (A B^ik)` with
/// `i0 + .. + ik <= budget`, passing the product and the exponent sum.
/// Without `leading`, `i0` is fixed at zero. Zero prefixes are pruned since
/// every extension of them is zero.
fn for_each_chain<S: Semifield>(
    a: &Matrix<S>,
    b_powers: &[Matrix<S>],
    factors: usize,
    budget: usize,
    leading: bool,
    visit: &mut impl FnMut(&Matrix<S>, usize),
) -> Result<()> {
    fn extend<S: Semifield>(
        prefix: &Matrix<S>,
        used: usize,
        remaining: usize,
        a: &Matrix<S>,
        b_powers: &[Matrix<S>],
        budget: usize,
        visit: &mut impl FnMut(&Matrix<S>, usize),
    ) -> Result<()> {
        if remaining == 0 {
            visit(prefix, used);
            return Ok(());
        }
        let with_a = prefix.otimes(a)?;
        if is_zero_matrix(&with_a) {
            return Ok(());
        }
        for i in 0..=budget - used {
            let next = with_a.otimes(&b_powers[i])?;
            if !is_zero_matrix(&next) {
                extend(&next, used + i, remaining - 1, a, b_powers, budget, visit)?;
            }
        }
        Ok(())
    }

    let leading_range = if leading { 0..=budget } else { 0..=0 };
    for i0 in leading_range {
        let start = &b_powers[i0];
        if !is_zero_matrix(start) {
            extend(start, i0, factors, a, b_powers, budget, visit)?;
        }
    }
    Ok(())
}

/// `B^0, .., B^n`.
fn powers_up_to<S: Semifield>(b: &Matrix<S>, n: usize) -> Result<Vec<Matrix<S>>> {
    let mut out = vec![Matrix::identity(b.rows())];
    for i in 1..=n {
        let next = out[i - 1].otimes(b)?;
        out.push(next);
    }
    Ok(out)
}

fn checked_radius<S: Semifield>(a: &Matrix<S>) -> Result<Scalar<S>> {
    let n = a.rows();
    if n > MAX_DIMENSION {
        return Err(Error::ProblemTooLarge {
            n,
            max: MAX_DIMENSION,
        });
    }
    let lambda = a.spectral_radius()?;
    if lambda.is_zero() {
        return Err(Error::DegenerateObjective);
    }
    Ok(lambda)
}

fn feasible_delta<S: Semifield>(spec: &ProblemSpec<S>) -> Result<Scalar<S>> {
    let delta = spec.feasibility_delta()?;
    if delta.exceeds_one() {
        return Err(Error::InfeasibleProblem {
            delta: delta.to_f64(),
        });
    }
    Ok(delta)
}

fn theta_of_valid<S: Semifield>(spec: &ProblemSpec<S>) -> Result<Scalar<S>> {
    let n = spec.dim();
    let a = &spec.objective;
    let b_powers = powers_up_to(&spec.recurrence, n)?;
    let h_conj_c = spec.upper.conjugate()?.times(&spec.constraint)?;
    let d = Matrix::identity(n).oplus(&spec.lower.outer(&h_conj_c))?;

    let mut theta = Scalar::zero();
    for k in 1..=n {
        let mut traces = Scalar::zero();
        let mut failure = None;
        for_each_chain(a, &b_powers, k, n - k, true, &mut |chain, _| {
            match chain.otimes(&d).and_then(|p| p.trace()) {
                Ok(t) => traces = traces + t,
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        theta = theta + traces.kth_root(k as u32);
    }
    Ok(theta)
}

/// Optimal value `theta` of the constrained problem.
pub fn compute_theta<S: Semifield>(spec: &ProblemSpec<S>) -> Result<Scalar<S>> {
    checked_radius(&spec.objective)?;
    feasible_delta(spec)?;
    theta_of_valid(spec)
}

/// Optimal value and the complete family of minimisers.
pub fn solve<S: Semifield>(spec: &ProblemSpec<S>) -> Result<Optimum<S>> {
    let lambda = checked_radius(&spec.objective)?;
    let delta = feasible_delta(spec)?;
    let theta = theta_of_valid(spec)?;
    let s = spec
        .objective
        .scale(theta.inverse()?)
        .oplus(&spec.recurrence)?;
    let solutions =
        solve_system_with_tolerance(&s, &spec.lower, &spec.constraint, &spec.upper, ROOT_TOLERANCE)?;
    Ok(Optimum {
        theta,
        solutions,
        spectral_radius: lambda,
        delta,
    })
}

/// The problem without the upper constraint:
/// `theta = lambda (+) (+)_{k=1..n-1} (+)_{1 <= i_1+..+i_k <= n-k} tr^(1/k)(A B^i1 .. A B^ik)`,
/// minimisers `x = (theta^-1 A (+) B)* u` for all `u >= g`.
pub fn solve_without_upper<S: Semifield>(
    objective: &Matrix<S>,
    recurrence: &Matrix<S>,
    lower: &Vector<S>,
) -> Result<Optimum<S>> {
    let n = objective.rows();
    if !objective.is_square() || recurrence.shape() != (n, n) || lower.dim() != n {
        return Err(Error::ShapeMismatch {
            op: "problem without upper constraint",
            left: objective.shape(),
            right: recurrence.shape(),
        });
    }
    let lambda = checked_radius(objective)?;
    let delta = recurrence.tr_series()?;
    if delta.exceeds_one() {
        return Err(Error::InfeasibleProblem {
            delta: delta.to_f64(),
        });
    }

    let b_powers = powers_up_to(recurrence, n)?;
    let mut theta = lambda;
    for k in 1..n {
        let mut traces = Scalar::zero();
        let mut failure = None;
        for_each_chain(objective, &b_powers, k, n - k, false, &mut |chain, used| {
            if used >= 1 {
                match chain.trace() {
                    Ok(t) => traces = traces + t,
                    Err(e) => failure = Some(e),
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        theta = theta + traces.kth_root(k as u32);
    }

    let s = objective.scale(theta.inverse()?).oplus(recurrence)?;
    let solutions = solve_recursive_bound_with_tolerance(&s, lower, ROOT_TOLERANCE)?;
    Ok(Optimum {
        theta,
        solutions,
        spectral_radius: lambda,
        delta,
    })
}

/// The box-constrained problem `g <= x <= h`:
/// `theta = lambda (+) (+)_{k=1..n} (h^- A^k g)^(1/k)`.
pub fn solve_box<S: Semifield>(
    objective: &Matrix<S>,
    lower: &Vector<S>,
    upper: &Vector<S>,
) -> Result<Optimum<S>> {
    let n = objective.rows();
    if !objective.is_square() || lower.dim() != n || upper.dim() != n {
        return Err(Error::ShapeMismatch {
            op: "box problem",
            left: objective.shape(),
            right: (lower.dim(), upper.dim()),
        });
    }
    if let Some(index) = upper.first_zero() {
        return Err(Error::IrregularBound { index });
    }
    let lambda = checked_radius(objective)?;
    let upper_conj = upper.conjugate()?;
    let delta = upper_conj.dot(lower)?;
    if delta.exceeds_one() {
        return Err(Error::InfeasibleProblem {
            delta: delta.to_f64(),
        });
    }

    let mut theta = lambda;
    let mut reach = lower.clone();
    for k in 1..=n {
        reach = objective.apply(&reach)?;
        theta = theta + upper_conj.dot(&reach)?.kth_root(k as u32);
    }

    let s = objective.scale(theta.inverse()?);
    let solutions =
        solve_system_with_tolerance(&s, lower, &Matrix::identity(n), upper, ROOT_TOLERANCE)?;
    Ok(Optimum {
        theta,
        solutions,
        spectral_radius: lambda,
        delta,
    })
}
