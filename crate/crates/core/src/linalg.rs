//! Dense matrices and vectors over a semifield.
//!
//! Storage is row-major. Target sizes are small (tens of rows), so every
//! product is the plain triple loop.
//!
//! Literal format, used by tests and the command line: rows separated by
//! `;`, entries by whitespace, the zero element written as `-inf`
//! (max-plus) or `inf` (min-times).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::semifield::{Scalar, Semifield};

#[derive(Clone, PartialEq)]
pub struct Matrix<S: Semifield> {
    rows: usize,
    cols: usize,
    data: Vec<Scalar<S>>,
}

/// Column vector.
#[derive(Clone, PartialEq)]
pub struct Vector<S: Semifield> {
    data: Vec<Scalar<S>>,
}

/// Row vector, produced by conjugate transposition.
#[derive(Clone, PartialEq)]
pub struct RowVector<S: Semifield> {
    data: Vec<Scalar<S>>,
}

impl<S: Semifield> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar<S>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension);
        }
        if rows * cols != data.len() {
            return Err(Error::ShapeMismatch {
                op: "matrix construction",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar<S>>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::ShapeMismatch {
                op: "matrix construction",
                left: (n_rows, n_cols),
                right: (1, bad.len()),
            });
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar<S>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Scalar::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar<S> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar<S>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar<S>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar<S>] {
        &self.data
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Entrywise sum.
    pub fn oplus(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                op: "matrix sum",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        })
    }

    /// Matrix product, `(AB)_ij = (+)_k a_ik (x) b_kj`.
    pub fn otimes(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "matrix product",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx] + a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        if self.cols != x.dim() {
            return Err(Error::ShapeMismatch {
                op: "matrix-vector product",
                left: self.shape(),
                right: (x.dim(), 1),
            });
        }
        Ok(Vector {
            data: (0..self.rows)
                .map(|i| self.row(i).iter().zip(&x.data).map(|(a, b)| *a * *b).sum())
                .collect(),
        })
    }

    pub fn scale(&self, c: Scalar<S>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c * *a).collect(),
        }
    }

    pub fn trace(&self) -> Result<Scalar<S>> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    /// `A^p` with `A^0 = I`.
    pub fn power(&self, p: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut acc = Self::identity(n);
        for _ in 0..p {
            acc = acc.otimes(self)?;
        }
        Ok(acc)
    }

    /// `A, A^2, ..., A^count`.
    fn powers(&self, count: usize) -> Result<Vec<Self>> {
        self.require_square()?;
        let mut out: Vec<Self> = Vec::with_capacity(count);
        for m in 0..count {
            let next = match out.last() {
                Some(prev) => prev.otimes(self)?,
                None => self.clone(),
            };
            debug_assert_eq!(out.len(), m);
            out.push(next);
        }
        Ok(out)
    }

    /// `Tr(A) = tr A (+) tr A^2 (+) ... (+) tr A^n`.
    pub fn tr_series(&self) -> Result<Scalar<S>> {
        let n = self.require_square()?;
        self.powers(n)?.iter().map(Self::trace).sum()
    }

    /// `A* = I (+) A (+) ... (+) A^(n-1)`.
    ///
    /// This is the truncated sum; it equals the full closure only when
    /// `Tr(A) <= 1`, which the caller is responsible for.
    pub fn kleene_star(&self) -> Result<Self> {
        let n = self.require_square()?;
        let mut star = Self::identity(n);
        let mut power = Self::identity(n);
        for _ in 1..n {
            power = power.otimes(self)?;
            star = star.oplus(&power)?;
        }
        Ok(star)
    }

    /// `lambda = (+)_{m=1..n} tr^(1/m)(A^m)`.
    pub fn spectral_radius(&self) -> Result<Scalar<S>> {
        let n = self.require_square()?;
        Ok(self
            .powers(n)?
            .iter()
            .zip(1u32..)
            .map(|(p, m)| p.trace().map(|t| t.kth_root(m)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum())
    }

    /// No column consists entirely of zeros.
    pub fn is_column_regular(&self) -> bool {
        self.first_zero_column().is_none()
    }

    pub fn first_zero_column(&self) -> Option<usize> {
        (0..self.cols).find(|&j| (0..self.rows).all(|i| self.get(i, j).is_zero()))
    }

    /// Entrywise `self <= rhs`. Shapes must agree.
    pub fn leq(&self, rhs: &Self) -> bool {
        self.shape() == rhs.shape() && self.data.iter().zip(&rhs.data).all(|(a, b)| a.leq(*b))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        self.shape() == rhs.shape()
            && self.data.iter().zip(&rhs.data).all(|(a, b)| a.approx_eq(*b, tol))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

impl<S: Semifield> Vector<S> {
    pub fn new(data: Vec<Scalar<S>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { data })
    }

    pub fn filled(dim: usize, v: Scalar<S>) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self { data: vec![v; dim] }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize) -> Scalar<S> {
        self.data[i]
    }

    pub fn entries(&self) -> &[Scalar<S>] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = Scalar<S>> + '_ {
        self.data.iter().copied()
    }

    /// Index of the first zero entry, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.data.iter().position(Scalar::is_zero)
    }

    pub fn is_regular(&self) -> bool {
        self.first_zero().is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Multiplicative conjugate transpose: `x^-_i = x_i^-1` for nonzero
    /// entries and zero otherwise.
    pub fn conjugate(&self) -> Result<RowVector<S>> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(RowVector {
            data: self.data.iter().map(|x| x.pseudo_inverse()).collect(),
        })
    }

    /// Outer product `self * row`.
    pub fn outer(&self, row: &RowVector<S>) -> Matrix<S> {
        Matrix::from_fn(self.dim(), row.dim(), |i, j| self.data[i] * row.data[j])
    }

    pub fn oplus(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs, "vector sum")?;
        Ok(Self {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        })
    }

    pub fn scale(&self, c: Scalar<S>) -> Self {
        Self {
            data: self.data.iter().map(|a| c * *a).collect(),
        }
    }

    pub fn leq(&self, rhs: &Self) -> bool {
        self.dim() == rhs.dim() && self.data.iter().zip(&rhs.data).all(|(a, b)| a.leq(*b))
    }

    pub fn approx_leq(&self, rhs: &Self, tol: f64) -> bool {
        self.dim() == rhs.dim()
            && self.data.iter().zip(&rhs.data).all(|(a, b)| a.approx_leq(*b, tol))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        self.dim() == rhs.dim()
            && self.data.iter().zip(&rhs.data).all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// The vector as an `n x 1` matrix.
    pub fn to_matrix(&self) -> Matrix<S> {
        Matrix::from_fn(self.dim(), 1, |i, _| self.data[i])
    }

    fn check_dim(&self, rhs: &Self, op: &'static str) -> Result<()> {
        if self.dim() == rhs.dim() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                op,
                left: (self.dim(), 1),
                right: (rhs.dim(), 1),
            })
        }
    }
}

impl<S: Semifield> RowVector<S> {
    pub fn new(data: Vec<Scalar<S>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize) -> Scalar<S> {
        self.data[i]
    }

    pub fn entries(&self) -> &[Scalar<S>] {
        &self.data
    }

    /// Row-times-matrix product.
    pub fn times(&self, m: &Matrix<S>) -> Result<RowVector<S>> {
        if self.dim() != m.rows() {
            return Err(Error::ShapeMismatch {
                op: "row-matrix product",
                left: (1, self.dim()),
                right: m.shape(),
            });
        }
        Ok(RowVector {
            data: (0..m.cols())
                .map(|j| self.data.iter().enumerate().map(|(k, a)| *a * m.get(k, j)).sum())
                .collect(),
        })
    }

    /// Inner product with a column vector.
    pub fn dot(&self, x: &Vector<S>) -> Result<Scalar<S>> {
        if self.dim() != x.dim() {
            return Err(Error::ShapeMismatch {
                op: "inner product",
                left: (1, self.dim()),
                right: (x.dim(), 1),
            });
        }
        Ok(self.data.iter().zip(&x.data).map(|(a, b)| *a * *b).sum())
    }

    /// Conjugate transpose back to a column vector.
    pub fn conjugate(&self) -> Result<Vector<S>> {
        if self.data.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Vector {
            data: self.data.iter().map(|x| x.pseudo_inverse()).collect(),
        })
    }
}

fn parse_rows<S: Semifield>(text: &str) -> Result<Vec<Vec<Scalar<S>>>> {
    text.split(';')
        .map(|row| row.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(|rows| rows.into_iter().filter(|r| !r.is_empty()).collect())
}

impl<S: Semifield> FromStr for Matrix<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_rows(s)?;
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix literal".into()));
        }
        Self::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Accepts a single row (`"0 0 0"`) or a single column (`"0; 0; 0"`).
impl<S: Semifield> FromStr for Vector<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_rows::<S>(s)?;
        let data = match rows.as_slice() {
            [] => return Err(Error::Parse("empty vector literal".into())),
            [single] => single.clone(),
            many if many.iter().all(|r| r.len() == 1) => many.iter().map(|r| r[0]).collect(),
            _ => return Err(Error::Parse("vector literal must be a single row or column".into())),
        };
        Self::new(data)
    }
}

fn write_entries<S: Semifield>(f: &mut fmt::Formatter<'_>, entries: &[Scalar<S>]) -> fmt::Result {
    for (k, e) in entries.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl<S: Semifield> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            write_entries(f, self.row(i))?;
        }
        Ok(())
    }
}

impl<S: Semifield> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.data)
    }
}

impl<S: Semifield> fmt::Display for RowVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.data)
    }
}

impl<S: Semifield> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{self}]")
    }
}

impl<S: Semifield> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector[{self}]")
    }
}

impl<S: Semifield> fmt::Debug for RowVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RowVector[{self}]")
    }
}
