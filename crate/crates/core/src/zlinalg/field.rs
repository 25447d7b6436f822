//! Linear algebra over fields, generic over a runtime field context.
//!
//! Base change sends integer data to 𝔽_p or ℚ; both share the elimination
//! code below through [`Field`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{IntMatrix, Matrix};

pub trait Field: Clone + Debug + PartialEq {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, a: &BigInt) -> Self::Elem;
    /// 0 for ℚ.
    fn characteristic(&self) -> u64;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// 𝔽_p for a prime `p < 2³²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `None` unless `p` is prime and below 2³².
    pub fn new(p: u64) -> Option<Self> {
        (is_prime(p) && p < (1 << 32)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(!(*a).is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        // Fermat
        let (mut base, mut exp, mut acc) = (*a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
    fn from_int(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_int(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

pub fn reduce<F: Field>(field: &F, m: &IntMatrix) -> Matrix<F::Elem> {
    m.map(|x| field.from_int(x))
}

pub fn mat_mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(field.zero(), |acc, k| field.add(&acc, &field.mul(&a[(i, k)], &b[(k, j)])))
    })
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&m[(i, c)])) else { continue };
        m.swap_rows(r, pr);
        let inv = field.inv(&m[(r, c)]);
        for j in 0..cols {
            m[(r, j)] = field.mul(&m[(r, j)], &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&m[(i, c)]) {
                let f = m[(i, c)].clone();
                for j in 0..cols {
                    let v = field.mul(&f, &m[(r, j)]);
                    m[(i, j)] = field.sub(&m[(i, j)], &v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let id = Matrix::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() });
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| if j < n { m[(i, j)].clone() } else { id[(i, j - n)].clone() });
    let pivots = rref(field, &mut aug);
    if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
        return None;
    }
    Some(aug.column_range(n, 2 * n))
}

/// Quotient `F^g / im(rel)`: returns `(π, σ)` with `π` the quotient map
/// (`q × g`) and `σ` a section (`g × q`), `π·σ = 1`, `π·rel = 0`.
pub fn quotient<F: Field>(field: &F, g: usize, rel: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Matrix<F::Elem>) {
    assert_eq!(rel.rows(), g);
    // Column space basis of rel, then complete greedily with unit vectors.
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    let mut current = Matrix::from_fn(g, 0, |_, _| field.zero());
    let push = |v: Vec<F::Elem>, current: &mut Matrix<F::Elem>, basis: &mut Vec<Vec<F::Elem>>| {
        let col = Matrix::from_columns(g, std::slice::from_ref(&v));
        let cand = current.hstack(&col);
        if rank(field, &cand) > current.cols() {
            *current = cand;
            basis.push(v);
            true
        } else {
            false
        }
    };
    for j in 0..rel.cols() {
        push(rel.column(j), &mut current, &mut basis);
    }
    let r = basis.len();
    let mut section_cols = Vec::new();
    for k in 0..g {
        let e: Vec<F::Elem> = (0..g).map(|i| if i == k { field.one() } else { field.zero() }).collect();
        if push(e.clone(), &mut current, &mut basis) {
            section_cols.push(e);
        }
    }
    let b = Matrix::from_columns(g, &basis);
    let b_inv = inverse(field, &b).expect("completed basis is invertible");
    let pi = b_inv.row_range(r, g);
    let sigma = Matrix::from_columns(g, &section_cols);
    (pi, sigma)
}
