//! Brute-force reference for the optimizer: exhaustive search over a
//! rectangular grid of candidate vectors.
//!
//! The search works on plain `f64` values with `-inf` for the zero element
//! and evaluates constraints and objective entry by entry, without going
//! through the matrix routines it is meant to check.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::optimizer::ProblemSpec;
use crate::semifield::{MaxPlus, Scalar, Semifield};

/// Upper limit on the number of grid points.
pub const GRID_POINT_CAP: f64 = 1e7;

/// `x^- A x`, evaluated as `(+)_{i,j} x_i^-1 a_ij x_j`.
pub fn objective<S: Semifield>(a: &Matrix<S>, x: &Vector<S>) -> Result<Scalar<S>> {
    if let Some(index) = x.first_zero() {
        return Err(Error::IrregularVector { index });
    }
    if a.shape() != (x.dim(), x.dim()) {
        return Err(Error::ShapeMismatch {
            op: "objective",
            left: a.shape(),
            right: (x.dim(), 1),
        });
    }
    let mut total = Scalar::zero();
    for i in 0..x.dim() {
        let xi_inv = x.get(i).inverse()?;
        for j in 0..x.dim() {
            total = total + xi_inv * a.get(i, j) * x.get(j);
        }
    }
    Ok(total)
}

/// Whether `x` satisfies `Bx (+) g <= x` and `Cx <= h` entry by entry.
pub fn feasible<S: Semifield>(spec: &ProblemSpec<S>, x: &Vector<S>) -> bool {
    let n = spec.dim();
    if x.dim() != n {
        return false;
    }
    let row_value = |m: &Matrix<S>, i: usize| -> Scalar<S> {
        (0..n).fold(Scalar::zero(), |acc, j| acc + m.get(i, j) * x.get(j))
    };
    let recursive_ok = (0..n).all(|i| (row_value(&spec.recurrence, i) + spec.lower.get(i)).leq(x.get(i)));
    let upper_ok =
        (0..spec.constraint.rows()).all(|i| row_value(&spec.constraint, i).leq(spec.upper.get(i)));
    recursive_ok && upper_ok
}

/// Axis-aligned grid `lo + k * step <= hi` on every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    lo: Vec<f64>,
    hi: Vec<f64>,
    step: f64,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, step: f64) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidGrid("bounds must be nonempty and of equal length".into()));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step {step} must be positive")));
        }
        if let Some(k) = (0..lo.len()).find(|&k| !(lo[k].is_finite() && hi[k].is_finite() && lo[k] <= hi[k])) {
            return Err(Error::InvalidGrid(format!(
                "axis {k}: bounds [{}, {}] are not an interval",
                lo[k], hi[k]
            )));
        }
        let grid = Self { lo, hi, step };
        let points = grid.point_count();
        if points > GRID_POINT_CAP {
            return Err(Error::GridTooLarge {
                points,
                cap: GRID_POINT_CAP,
            });
        }
        Ok(grid)
    }

    /// Default search box for a max-plus problem.
    ///
    /// Upper bounds come from `Cx <= h` coordinate by coordinate. The lower
    /// bound `min(h) - (2n - 1) M`, with `M` the largest magnitude among the
    /// finite data, lies below the greatest minimiser; it is raised to `g_j`
    /// where `g_j` is finite. Returns [`Error::NoFeasiblePoint`] when some
    /// axis is empty, since then no point satisfies both bounds.
    pub fn default_for(spec: &ProblemSpec<MaxPlus>, step: f64) -> Result<Self> {
        let n = spec.dim();
        let c = &spec.constraint;
        let h: Vec<f64> = spec.upper.iter().map(|s| s.to_f64()).collect();
        if let Some(index) = h.iter().position(|v| !v.is_finite()) {
            return Err(Error::IrregularBound { index });
        }
        let magnitude = [&spec.objective, &spec.recurrence, c]
            .iter()
            .flat_map(|m| m.entries().iter())
            .chain(spec.lower.entries())
            .chain(spec.upper.entries())
            .filter_map(|s| s.value())
            .fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let h_min = h.iter().copied().fold(f64::INFINITY, f64::min);
        let floor = (h_min - (2 * n - 1) as f64 * magnitude).floor();

        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for j in 0..n {
            let top = (0..c.rows())
                .filter_map(|i| c.get(i, j).value().map(|cij| h[i] - cij))
                .fold(f64::INFINITY, f64::min);
            if !top.is_finite() {
                return Err(Error::NotColumnRegular { column: j });
            }
            let bottom = spec.lower.get(j).value().map_or(floor, |g| g.max(floor));
            if bottom > top {
                return Err(Error::NoFeasiblePoint);
            }
            lo.push(bottom);
            hi.push(top);
        }
        Self::new(lo, hi, step)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn axis_len(&self, k: usize) -> usize {
        ((self.hi[k] - self.lo[k]) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn point_count(&self) -> f64 {
        (0..self.dim()).map(|k| self.axis_len(k) as f64).product()
    }

    /// Same bounds, half the pitch. Every point of `self` is kept.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), self.step / 2.0)
    }
}

/// Plain-float copy of the problem, `-inf` for the zero element.
struct DenseProblem {
    n: usize,
    m: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
}

impl DenseProblem {
    fn new(spec: &ProblemSpec<MaxPlus>) -> Self {
        let flat = |m: &Matrix<MaxPlus>| m.entries().iter().map(Scalar::to_f64).collect();
        Self {
            n: spec.dim(),
            m: spec.constraint.rows(),
            a: flat(&spec.objective),
            b: flat(&spec.recurrence),
            c: flat(&spec.constraint),
            g: spec.lower.iter().map(|s| s.to_f64()).collect(),
            h: spec.upper.iter().map(|s| s.to_f64()).collect(),
        }
    }

    fn row_max(&self, mat: &[f64], i: usize, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|j| mat[i * self.n + j] + x[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn feasible(&self, x: &[f64]) -> bool {
        (0..self.n).all(|i| self.row_max(&self.b, i, x).max(self.g[i]) <= x[i])
            && (0..self.m).all(|i| self.row_max(&self.c, i, x) <= self.h[i])
    }

    fn objective(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| self.row_max(&self.a, i, x) - x[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimum of `x^- A x` over the feasible grid points, with the
/// lexicographically smallest minimiser.
pub fn brute_force_min(
    spec: &ProblemSpec<MaxPlus>,
    grid: &GridSpec,
) -> Result<(Scalar<MaxPlus>, Vector<MaxPlus>)> {
    if grid.dim() != spec.dim() {
        return Err(Error::InvalidGrid(format!(
            "grid has {} axes, problem has {} variables",
            grid.dim(),
            spec.dim()
        )));
    }
    let problem = DenseProblem::new(spec);
    let n = grid.dim();
    let lens: Vec<usize> = (0..n).map(|k| grid.axis_len(k)).collect();
    let mut idx = vec![0usize; n];
    let mut x: Vec<f64> = grid.lo.clone();
    let mut best: Option<(f64, Vec<f64>)> = None;

    // first coordinate slowest, so the first strict improvement seen is the
    // lexicographically smallest minimiser
    loop {
        if problem.feasible(&x) {
            let value = problem.objective(&x);
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, x.clone()));
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return match best {
                    Some((value, arg)) => Ok((
                        Scalar::new(value)?,
                        Vector::new(arg.into_iter().map(Scalar::finite).collect())?,
                    )),
                    None => Err(Error::NoFeasiblePoint),
                };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lens[k] {
                x[k] = grid.lo[k] + idx[k] as f64 * grid.step;
                break;
            }
            idx[k] = 0;
            x[k] = grid.lo[k];
        }
    }
}
