//! Complete solutions of the linear inequalities `Ax (+) b <= x`,
//! `Cx <= d`, and of the two combined into one system.
//!
//! Every solver returns a parametric [`SolutionSet`]: the regular
//! solutions are exactly `x = S* u` for regular `u` within the bounds.

use crate::error::{Error, Infeasibility, Result};
use crate::linalg::{Matrix, RowVector, Vector};
use crate::semifield::{Scalar, Semifield};

/// All regular solutions `x = generator (x) u`, `lower <= u <= upper`.
///
/// The parametrisation covers the solution set but need not be injective:
/// distinct parameters may give the same `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet<S: Semifield> {
    generator: Matrix<S>,
    lower: Vector<S>,
    upper: Option<Vector<S>>,
}

impl<S: Semifield> SolutionSet<S> {
    pub fn generator(&self) -> &Matrix<S> {
        &self.generator
    }

    pub fn lower(&self) -> &Vector<S> {
        &self.lower
    }

    /// `None` when the parameter is unbounded above.
    pub fn upper(&self) -> Option<&Vector<S>> {
        self.upper.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// Whether `u` lies inside the parameter box.
    pub fn admits(&self, u: &Vector<S>, tol: f64) -> bool {
        self.lower.approx_leq(u, tol) && self.upper.as_ref().is_none_or(|hi| u.approx_leq(hi, tol))
    }

    /// The solution generated by parameter `u`.
    pub fn point(&self, u: &Vector<S>) -> Result<Vector<S>> {
        if u.dim() != self.dim() {
            return Err(Error::ShapeMismatch {
                op: "solution parameter",
                left: (self.dim(), 1),
                right: (u.dim(), 1),
            });
        }
        if !self.admits(u, 1e-9) {
            return Err(Error::ParameterOutOfBounds);
        }
        self.generator.apply(u)
    }

    /// `generator (x) lower`, the least member of the family.
    pub fn lowest_point(&self) -> Vector<S> {
        self.generator
            .apply(&self.lower)
            .expect("generator and bounds share a dimension")
    }

    /// `generator (x) upper`, the greatest member, when bounded.
    pub fn highest_point(&self) -> Option<Vector<S>> {
        self.upper.as_ref().map(|hi| {
            self.generator
                .apply(hi)
                .expect("generator and bounds share a dimension")
        })
    }
}

fn require_square<S: Semifield>(a: &Matrix<S>) -> Result<usize> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

fn require_dim<S: Semifield>(v: &Vector<S>, n: usize, op: &'static str) -> Result<()> {
    if v.dim() == n {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            op,
            left: (n, 1),
            right: (v.dim(), 1),
        })
    }
}

/// Checks `C` is column-regular with `n` columns and `d` is regular with
/// one entry per row of `C`, and returns `d^-`.
fn upper_constraint_row<S: Semifield>(c: &Matrix<S>, d: &Vector<S>, n: usize) -> Result<RowVector<S>> {
    if c.cols() != n {
        return Err(Error::ShapeMismatch {
            op: "upper constraint",
            left: (c.rows(), n),
            right: c.shape(),
        });
    }
    require_dim(d, c.rows(), "upper bound")?;
    if let Some(column) = c.first_zero_column() {
        return Err(Error::NotColumnRegular { column });
    }
    if let Some(index) = d.first_zero() {
        return Err(Error::IrregularBound { index });
    }
    d.conjugate()
}

/// General regular solution of `Ax (+) b <= x`.
///
/// Solutions exist iff `Tr(A) <= 1`, and then they are `x = A* u` for all
/// regular `u >= b`.
pub fn solve_recursive_bound<S: Semifield>(a: &Matrix<S>, b: &Vector<S>) -> Result<SolutionSet<S>> {
    solve_recursive_bound_with_tolerance(a, b, 0.0)
}

/// [`solve_recursive_bound`] with the unit comparison relaxed by `tol`,
/// for inputs that went through root extraction.
pub fn solve_recursive_bound_with_tolerance<S: Semifield>(
    a: &Matrix<S>,
    b: &Vector<S>,
    tol: f64,
) -> Result<SolutionSet<S>> {
    let n = require_square(a)?;
    require_dim(b, n, "recursive bound")?;
    let trace_series = a.tr_series()?;
    if !trace_series.approx_leq(Scalar::one(), tol) {
        return Err(Error::NoRegularSolution(Infeasibility::TraceSeriesAboveUnit {
            trace_series: trace_series.to_f64(),
        }));
    }
    Ok(SolutionSet {
        generator: a.kleene_star()?,
        lower: b.clone(),
        upper: None,
    })
}

/// Greatest solution of `Cx <= d`: `x` solves the inequality iff
/// `x <= (d^- C)^-`.
pub fn solve_upper_bound<S: Semifield>(c: &Matrix<S>, d: &Vector<S>) -> Result<Vector<S>> {
    let d_conj = upper_constraint_row(c, d, c.cols())?;
    d_conj.times(c)?.conjugate()
}

/// `Delta = Tr(A) (+) d^- C A* b`, the solvability indicator of the system
/// `Ax (+) b <= x, Cx <= d`.
pub fn system_delta<S: Semifield>(
    a: &Matrix<S>,
    b: &Vector<S>,
    c: &Matrix<S>,
    d: &Vector<S>,
) -> Result<Scalar<S>> {
    let n = require_square(a)?;
    require_dim(b, n, "recursive bound")?;
    let d_conj = upper_constraint_row(c, d, n)?;
    let star = a.kleene_star()?;
    Ok(a.tr_series()? + d_conj.times(c)?.times(&star)?.dot(b)?)
}

/// General regular solution of the system `Ax (+) b <= x, Cx <= d`.
///
/// With `Delta = Tr(A) (+) d^- C A* b`: if `Delta <= 1` the solutions are
/// `x = A* u` with `b <= u <= (d^- C A*)^-`; otherwise there is none.
pub fn solve_system<S: Semifield>(
    a: &Matrix<S>,
    b: &Vector<S>,
    c: &Matrix<S>,
    d: &Vector<S>,
) -> Result<SolutionSet<S>> {
    solve_system_with_tolerance(a, b, c, d, 0.0)
}

pub fn solve_system_with_tolerance<S: Semifield>(
    a: &Matrix<S>,
    b: &Vector<S>,
    c: &Matrix<S>,
    d: &Vector<S>,
    tol: f64,
) -> Result<SolutionSet<S>> {
    let n = require_square(a)?;
    require_dim(b, n, "recursive bound")?;
    let d_conj = upper_constraint_row(c, d, n)?;

    let trace_series = a.tr_series()?;
    if !trace_series.approx_leq(Scalar::one(), tol) {
        return Err(Error::NoRegularSolution(Infeasibility::TraceSeriesAboveUnit {
            trace_series: trace_series.to_f64(),
        }));
    }

    let star = a.kleene_star()?;
    let bound_row = d_conj.times(c)?.times(&star)?;
    let box_term = bound_row.dot(b)?;
    let delta = trace_series + box_term;
    if !delta.approx_leq(Scalar::one(), tol) {
        return Err(Error::NoRegularSolution(Infeasibility::EmptyParameterBox {
            delta: delta.to_f64(),
        }));
    }

    let upper = bound_row.conjugate()?;
    debug_assert!(b.approx_leq(&upper, tol.max(1e-9)));
    Ok(SolutionSet {
        generator: star,
        lower: b.clone(),
        upper: Some(upper),
    })
}

/// The trace form of `Delta`:
/// `d^- C b (+) (+)_{m=1..n} tr(A^m (I (+) b d^- C))`.
///
/// Agrees with [`system_delta`] whenever that value is at most one.
pub fn delta_alternative_form<S: Semifield>(
    a: &Matrix<S>,
    b: &Vector<S>,
    c: &Matrix<S>,
    d: &Vector<S>,
) -> Result<Scalar<S>> {
    let n = require_square(a)?;
    require_dim(b, n, "recursive bound")?;
    let d_conj = upper_constraint_row(c, d, n)?;
    let dc = d_conj.times(c)?;
    let correction = Matrix::identity(n).oplus(&b.outer(&dc))?;

    let mut total = dc.dot(b)?;
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        power = power.otimes(a)?;
        total = total + power.otimes(&correction)?.trace()?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::MaxPlus;
    use proptest::prelude::*;

    type M = Matrix<MaxPlus>;
    type V = Vector<MaxPlus>;
    type Sc = Scalar<MaxPlus>;

    fn m(t: &str) -> M {
        t.parse().unwrap()
    }
    fn v(t: &str) -> V {
        t.parse().unwrap()
    }

    fn worked_a() -> M {
        m("4 0 -inf; 2 3 1; 1 1 3")
    }
    fn worked_b() -> M {
        m("-inf -2 1; 0 -inf 2; -1 -inf -inf")
    }

    fn satisfies_recursive(a: &M, b: &V, x: &V) -> bool {
        a.apply(x).unwrap().oplus(b).unwrap().leq(x)
    }

    fn satisfies_upper(c: &M, d: &V, x: &V) -> bool {
        c.apply(x).unwrap().leq(d)
    }

    #[test]
    fn recursive_bound_examples() {
        let set = solve_recursive_bound(&M::zeros(3, 3), &v("0 0 0")).unwrap();
        assert_eq!(set.generator(), &M::identity(3));
        assert_eq!(set.lower(), &v("0 0 0"));
        assert!(set.upper().is_none());

        let set = solve_recursive_bound(&worked_b(), &v("0 0 0")).unwrap();
        assert_eq!(set.generator(), &m("0 -2 1; 1 0 2; -1 -3 0"));

        let err = solve_recursive_bound(&m("1 -inf; -inf 1"), &v("0 0")).unwrap_err();
        assert!(matches!(
            err,
            Error::NoRegularSolution(Infeasibility::TraceSeriesAboveUnit { .. })
        ));
    }

    #[test]
    fn upper_bound_examples() {
        let h = v("5 5 5");
        assert_eq!(solve_upper_bound(&M::identity(3), &h).unwrap(), h);

        let s_star = m("0 -2 1; 1 0 2; -1 -3 0");
        let c = worked_a().otimes(&s_star).unwrap();
        assert_eq!(solve_upper_bound(&c, &h).unwrap(), v("1 2 0"));

        let x = solve_upper_bound(&m("0 0 0"), &v("3")).unwrap();
        assert_eq!(x, v("3 3 3"));

        assert_eq!(
            solve_upper_bound(&m("1 -inf; 0 -inf"), &v("1 1")),
            Err(Error::NotColumnRegular { column: 1 })
        );
        assert_eq!(
            solve_upper_bound(&M::identity(2), &v("1 -inf")),
            Err(Error::IrregularBound { index: 1 })
        );
    }

    #[test]
    fn upper_bound_single_row_matches_enumeration() {
        // every integer point of [-6, 6]^3 satisfies max(x) <= 3 exactly when below the bound
        let c = m("0 0 0");
        let d = v("3");
        let bound = solve_upper_bound(&c, &d).unwrap();
        for i in -6..=6 {
            for j in -6..=6 {
                for k in -6..=6 {
                    let x = V::new(vec![i, j, k].into_iter().map(|t| Sc::finite(f64::from(t))).collect()).unwrap();
                    let direct = i.max(j).max(k) <= 3;
                    assert_eq!(direct, x.leq(&bound));
                }
            }
        }
    }

    #[test]
    fn system_examples() {
        let set = solve_system(&worked_b(), &v("0 0 0"), &worked_a(), &v("5 5 5")).unwrap();
        assert_eq!(set.lower(), &v("0 0 0"));
        assert_eq!(set.upper().unwrap(), &v("1 2 0"));
        assert_eq!(
            system_delta(&worked_b(), &v("0 0 0"), &worked_a(), &v("5 5 5")).unwrap(),
            Sc::one()
        );

        let set = solve_system(&M::zeros(2, 2), &v("0 0"), &M::identity(2), &v("5 5")).unwrap();
        assert_eq!(set.generator(), &M::identity(2));
        assert_eq!(set.upper().unwrap(), &v("5 5"));

        let err = solve_system(&M::zeros(3, 3), &v("6 6 6"), &M::identity(3), &v("5 5 5")).unwrap_err();
        assert_eq!(
            err,
            Error::NoRegularSolution(Infeasibility::EmptyParameterBox { delta: 1.0 })
        );

        let err = solve_system(&m("1 -inf; -inf 1"), &v("0 0"), &M::identity(2), &v("5 5")).unwrap_err();
        assert!(matches!(
            err,
            Error::NoRegularSolution(Infeasibility::TraceSeriesAboveUnit { .. })
        ));
    }

    #[test]
    fn system_shape_errors() {
        assert!(matches!(
            solve_system(&M::zeros(2, 3), &v("0 0"), &M::identity(2), &v("1 1")),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            solve_system(&M::zeros(2, 2), &v("0 0 0"), &M::identity(2), &v("1 1")),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            solve_system(&M::zeros(2, 2), &v("0 0"), &M::identity(3), &v("1 1 1")),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn points_respect_bounds() {
        let set = solve_system(&worked_b(), &v("0 0 0"), &worked_a(), &v("5 5 5")).unwrap();
        assert_eq!(set.lowest_point(), v("1 2 0"));
        assert_eq!(set.highest_point().unwrap(), v("1 2 0"));
        assert_eq!(set.point(&v("0 0 1")), Err(Error::ParameterOutOfBounds));
        assert_eq!(set.point(&v("1 1 0")).unwrap(), v("1 2 0"));
    }

    #[test]
    fn alternative_delta_examples() {
        let d = delta_alternative_form(&worked_b(), &v("0 0 0"), &worked_a(), &v("5 5 5")).unwrap();
        assert_eq!(d, Sc::one());

        let c = m("1 0; -inf 2");
        let b = v("0 -1");
        let h = v("4 3");
        let direct = h.conjugate().unwrap().times(&c).unwrap().dot(&b).unwrap();
        assert_eq!(delta_alternative_form(&M::zeros(2, 2), &b, &c, &h).unwrap(), direct);
    }

    fn entry() -> impl Strategy<Value = Sc> {
        prop_oneof![1 => Just(Sc::zero()), 3 => (-5i32..=5).prop_map(|x| Sc::finite(f64::from(x)))]
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec(entry(), rows * cols).prop_map(move |d| M::new(rows, cols, d).unwrap())
    }

    fn vector(n: usize, regular: bool) -> impl Strategy<Value = V> {
        let e = if regular {
            (-5i32..=5).prop_map(|x| Sc::finite(f64::from(x))).boxed()
        } else {
            entry().boxed()
        };
        proptest::collection::vec(e, n).prop_map(|d| V::new(d).unwrap())
    }

    fn sample_parameter(set: &SolutionSet<MaxPlus>, offsets: &[i32]) -> V {
        let data = (0..set.dim())
            .map(|i| {
                let lo = set.lower().get(i).value().unwrap_or(-8.0);
                let t = lo + f64::from(offsets[i]);
                let t = match set.upper() {
                    Some(hi) => t.min(hi.get(i).value().unwrap()),
                    None => t,
                };
                Sc::finite(t)
            })
            .collect();
        V::new(data).unwrap()
    }

    proptest! {
        #[test]
        fn recursive_solutions_are_sound(a in matrix(3, 3), b in vector(3, false), offs in proptest::collection::vec(0i32..6, 3)) {
            match solve_recursive_bound(&a, &b) {
                Ok(set) => {
                    let u = sample_parameter(&set, &offs);
                    let x = set.point(&u).unwrap();
                    prop_assert!(satisfies_recursive(&a, &b, &x));
                }
                Err(Error::NoRegularSolution(_)) => prop_assert!(a.tr_series().unwrap().exceeds_one()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn system_solutions_are_sound(
            a in matrix(3, 3), b in vector(3, false), c in matrix(2, 3), d in vector(2, true),
            offs in proptest::collection::vec(0i32..6, 3),
        ) {
            prop_assume!(c.is_column_regular());
            match solve_system(&a, &b, &c, &d) {
                Ok(set) => {
                    let u = sample_parameter(&set, &offs);
                    let x = set.point(&u).unwrap();
                    prop_assert!(satisfies_recursive(&a, &b, &x));
                    prop_assert!(satisfies_upper(&c, &d, &x));
                    let delta = system_delta(&a, &b, &c, &d).unwrap();
                    prop_assert!(!delta.exceeds_one());
                    prop_assert_eq!(delta_alternative_form(&a, &b, &c, &d).unwrap(), delta);
                }
                Err(Error::NoRegularSolution(_)) => {
                    prop_assert!(system_delta(&a, &b, &c, &d).unwrap().exceeds_one());
                }
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn upper_bound_is_tight(c in matrix(3, 3), d in vector(3, true)) {
            prop_assume!(c.is_column_regular());
            let x = solve_upper_bound(&c, &d).unwrap();
            prop_assert!(satisfies_upper(&c, &d, &x));
            for j in 0..3 {
                let mut bumped = x.entries().to_vec();
                bumped[j] = bumped[j] * Sc::finite(1e-6);
                prop_assert!(!satisfies_upper(&c, &d, &V::new(bumped).unwrap()));
            }
        }
    }
}
