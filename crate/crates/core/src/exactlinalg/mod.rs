//! Exact rational linear algebra: vectors, matrices, rank, affine solving and
//! a small simplex-based LP kernel.
//!
//! Nothing in here rounds. Matrices are dense and small (a handful of rows per
//! ambient dimension), so elimination is plain Gaussian elimination; the rank
//! routine runs fraction-free over integers.

mod lp;
mod vector;

pub use lp::{lp_solve, Constraint, LpOutcome, LpProblem, Relation, Sense};
pub use vector::QVector;
pub(crate) use vector::{int_dot, make_primitive};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("points do not span a hyperplane (affine rank {rank}, ambient dimension {dim})")]
    DegenerateSpan { rank: usize, dim: usize },
    #[error("zero vector has no primitive normalization")]
    ZeroVector,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Dense rectangular matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

impl QMatrix {
    pub fn new(rows: Vec<QVector>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, QVector::dim);
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.dim(),
            });
        }
        Ok(QMatrix { rows, cols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| QVector::from_ints(r)).collect())
            .expect("rows of equal length")
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows: vec![QVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        QVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn transpose(&self) -> QMatrix {
        let rows = (0..self.cols)
            .map(|j| QVector::new(self.rows.iter().map(|r| r[j].clone()).collect()))
            .collect();
        QMatrix {
            rows,
            cols: self.rows.len(),
        }
    }
}

/// Exact rank over the rationals, by fraction-free (Bareiss) elimination.
pub fn rank(m: &QMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> = m.rows().iter().map(|r| r.scaled_to_integers().1).collect();
    int_rank(rows, m.ncols())
}

pub(crate) fn int_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let nrows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..nrows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Reduced row echelon form; returns the reduced nonzero rows and pivot columns.
pub fn rref(m: &QMatrix) -> (Vec<QVector>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.as_slice().to_vec()).collect();
    let nrows = a.len();
    let cols = m.ncols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][col].recip();
        for c in col..cols {
            a[r][c] = &a[r][c] * &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in col..cols {
                    let delta = &f * &a[r][c];
                    a[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a.into_iter().map(QVector::new).collect(), pivots)
}

/// Basis of the right null space `{x : m x = 0}`, one vector per free column,
/// in canonical (rref-derived) form.
pub fn nullspace(m: &QMatrix) -> Vec<QVector> {
    let cols = m.ncols();
    let (reduced, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = QVector::unit(cols, free).into_inner();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(QVector::new(v));
    }
    basis
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &QMatrix) -> Result<QMatrix, LinalgError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let aug = QMatrix::new(
        m.rows()
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&QVector::unit(n, i)))
            .collect(),
    )?;
    let (reduced, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    QMatrix::new(
        reduced
            .iter()
            .map(|r| QVector::new(r.as_slice()[n..].to_vec()))
            .collect(),
    )
}

/// Positive multiple of `v` with coprime integer entries.
pub fn normalize_primitive(v: &QVector) -> Result<QVector, LinalgError> {
    if v.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    let (_, mut ints) = v.scaled_to_integers();
    make_primitive(&mut ints);
    Ok(QVector::new(ints.into_iter().map(Rational::from_integer).collect()))
}

/// Primitive integer normal `a` and offset `b` of the hyperplane `a·x = b`
/// through the given points. The first nonzero entry of `a` is positive.
pub fn solve_affine(points: &[QVector]) -> Result<(QVector, Rational), LinalgError> {
    let dim = points.first().map_or(0, QVector::dim);
    let rows: Vec<QVector> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(-Rational::one());
            r
        })
        .collect();
    let m = QMatrix::new(rows)?;
    let null = nullspace(&m);
    let affine_rank = dim + 1 - null.len();
    if null.len() != 1 || points.is_empty() {
        return Err(LinalgError::DegenerateSpan {
            rank: affine_rank,
            dim,
        });
    }
    let sol = &null[0];
    let normal = QVector::new(sol.as_slice()[..dim].to_vec());
    if normal.is_zero() {
        return Err(LinalgError::DegenerateSpan {
            rank: affine_rank,
            dim,
        });
    }
    let mut prim = normalize_primitive(&normal)?;
    if prim[prim.leading_index().unwrap()].is_negative() {
        prim = -&prim;
    }
    let offset = prim.dot(&points[0]);
    Ok((prim, offset))
}
