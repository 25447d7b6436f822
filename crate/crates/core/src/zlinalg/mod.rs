//! Exact integer linear algebra.
//!
//! Everything here is generic over [`IntegerRing`] so the same Smith
//! reduction runs on `i64` in quick checks and on [`BigInt`] everywhere the
//! library actually computes (intermediate entries grow fast, so the
//! library-facing aliases are arbitrary precision).

mod field;
mod group;
mod matrix;
mod snf;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use field::{inverse, is_prime, mat_mul, quotient, rank, reduce, rref, Field, PrimeField, Rationals};
pub use group::FinAbGroup;
pub use matrix::Matrix;
pub use snf::{snf, SnfDecomposition};

/// Commutative ring operations needed by [`Matrix`] arithmetic.
pub trait Ring:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Debug + Display
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Debug + Display
{
}

/// Euclidean integer types: `i64`, `i128`, [`BigInt`].
pub trait IntegerRing: Ring + Integer + Signed + Neg<Output = Self> + Hash {}

impl<T> IntegerRing for T where T: Ring + Integer + Signed + Neg<Output = T> + Hash {}

pub type IntMatrix = Matrix<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("no integer solution")]
    NoSolution,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Converts a small integer table into an [`IntMatrix`].
pub fn int_matrix(rows: &[&[i64]], cols: usize) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
        .expect("ragged rows")
}

/// Flips the sign of each column so its first nonzero entry is positive.
fn normalize_column_signs<T: IntegerRing>(m: &mut Matrix<T>) {
    for j in 0..m.cols() {
        let first = (0..m.rows()).map(|i| m[(i, j)].clone()).find(|x| !x.is_zero());
        if first.is_some_and(|x| x.is_negative()) {
            for i in 0..m.rows() {
                m[(i, j)] = -m[(i, j)].clone();
            }
        }
    }
}

/// Columns form a ℤ-basis of `ker M`. The basis is saturated: it spans the
/// whole kernel lattice, and its columns extend to a basis of `ℤ^cols`.
pub fn kernel_basis<T: IntegerRing>(m: &Matrix<T>) -> Matrix<T> {
    let d = snf(m);
    let idx: Vec<usize> = (d.rank..m.cols()).collect();
    let mut k = d.v_inv.select_columns(&idx);
    normalize_column_signs(&mut k);
    k
}

/// Some `x` with `M·x = b`, if one exists over ℤ.
pub fn solve<T: IntegerRing>(m: &Matrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::ShapeMismatch(format!("{} rows vs rhs of length {}", m.rows(), b.len())));
    }
    solve_with(&snf(m), b)
}

/// Solves against a precomputed decomposition of `M`.
pub fn solve_with<T: IntegerRing>(d: &SnfDecomposition<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    let pb = d.u_inv.mul_vec(b);
    let cols = d.v.rows();
    let mut y = vec![T::zero(); cols];
    for (i, c) in pb.iter().enumerate() {
        if i < d.rank {
            let (q, r) = c.div_rem(d.diagonal(i));
            if !r.is_zero() {
                return Err(LinalgError::NoSolution);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Err(LinalgError::NoSolution);
        }
    }
    Ok(d.v_inv.mul_vec(&y))
}

/// Solves `M·X = B` column by column.
pub fn solve_matrix<T: IntegerRing>(m: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if b.rows() != m.rows() {
        return Err(LinalgError::ShapeMismatch(format!("{} rows vs rhs with {} rows", m.rows(), b.rows())));
    }
    let d = snf(m);
    let cols = (0..b.cols()).map(|j| solve_with(&d, &b.column(j))).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(m.cols(), &cols))
}

/// Structure of `ℤ^rows / im M`.
pub fn cokernel_structure(m: &IntMatrix) -> FinAbGroup {
    let d = snf(m);
    FinAbGroup::from_cyclic(m.rows() - d.rank, d.invariant_factors())
}

pub fn matrix_rank<T: IntegerRing>(m: &Matrix<T>) -> usize {
    snf(m).rank
}

/// Square with determinant ±1.
pub fn is_unimodular<T: IntegerRing>(m: &Matrix<T>) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let d = snf(m);
    d.rank == m.rows() && d.invariant_factors().iter().all(|x| x.is_one())
}

/// `|det M|` for square `M`.
pub fn abs_det<T: IntegerRing>(m: &Matrix<T>) -> T {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let d = snf(m);
    if d.rank < m.rows() {
        return T::zero();
    }
    d.invariant_factors().into_iter().fold(T::one(), |acc, x| acc * x)
}

/// A ℤ-basis (as columns) of the lattice spanned by the columns of `g`.
pub fn column_span_basis(g: &IntMatrix) -> IntMatrix {
    let d = snf(g);
    Matrix::from_fn(g.rows(), d.rank, |i, j| d.u[(i, j)].clone() * d.diagonal(j).clone())
}

/// Whether `ℤ^rows / im M` is torsion-free.
pub fn has_saturated_image(m: &IntMatrix) -> bool {
    snf(m).invariant_factors().iter().all(|x| x.is_one())
}

/// A subquotient `L / W` of `ℤ^f`, where `L` is the projection to the first
/// `f` coordinates of `ker A` and `W ⊆ L` is spanned by the given columns.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FinAbGroup,
    /// One representative in `ℤ^f` per cyclic factor: torsion factors first
    /// (matching `group.torsion`), then the free generators.
    pub generators: Vec<Vec<BigInt>>,
}

/// Computes `L / W` as described on [`Subquotient`].
///
/// `constraints` has `f + extra` columns; only the first `f` coordinates of
/// its kernel are kept. `denominators` is `f × w` and must lie in `L`.
pub fn subquotient(constraints: &IntMatrix, f: usize, denominators: &IntMatrix) -> Subquotient {
    assert!(constraints.cols() >= f);
    assert_eq!(denominators.rows(), f);
    let lattice = if constraints.rows() == 0 {
        Matrix::identity(f)
    } else {
        let k = kernel_basis(constraints);
        column_span_basis(&k.row_range(0, f))
    };
    let coords = solve_matrix(&lattice, denominators).expect("denominators lie in the numerator lattice");
    let d = snf(&coords);
    let r = lattice.cols();
    let mut torsion = Vec::new();
    let mut tor_gens = Vec::new();
    let mut free_gens = Vec::new();
    for i in 0..r {
        let gen = lattice.mul_vec(&d.u.column(i));
        if i < d.rank {
            let s = d.diagonal(i);
            if !s.is_one() {
                torsion.push(s.clone());
                tor_gens.push(gen);
            }
        } else {
            free_gens.push(gen);
        }
    }
    let group = FinAbGroup { free_rank: r - d.rank, torsion };
    tor_gens.extend(free_gens);
    Subquotient { group, generators: tor_gens }
}
