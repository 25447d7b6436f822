use super::{IntegerRing, Matrix};

/// Smith decomposition `M = U·S·V` with unimodular `U`, `V`.
///
/// The inverses are kept alongside because kernels, solutions and quotient
/// maps are all read off `U⁻¹` and `V⁻¹` (`U⁻¹·M·V⁻¹ = S`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition<T> {
    pub u: Matrix<T>,
    pub s: Matrix<T>,
    pub v: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: IntegerRing> SnfDecomposition<T> {
    /// Nonzero diagonal entries, in order. Each divides the next.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn diagonal(&self, i: usize) -> &T {
        &self.s[(i, i)]
    }
}

struct Calc<T> {
    a: Matrix<T>,
    // p·m·q = a at every step; p_inv = p⁻¹, q_inv = q⁻¹.
    p: Matrix<T>,
    p_inv: Matrix<T>,
    q: Matrix<T>,
    q_inv: Matrix<T>,
}

impl<T: IntegerRing> Calc<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// row_dst += c · row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.a.cols() {
            let v = self.a[(src, k)].clone() * c.clone();
            self.a[(dst, k)] = self.a[(dst, k)].clone() + v;
        }
        for k in 0..self.p.cols() {
            let v = self.p[(src, k)].clone() * c.clone();
            self.p[(dst, k)] = self.p[(dst, k)].clone() + v;
        }
        // inverse op on the right: col_src -= c · col_dst
        for k in 0..self.p_inv.rows() {
            let v = self.p_inv[(k, dst)].clone() * c.clone();
            self.p_inv[(k, src)] = self.p_inv[(k, src)].clone() - v;
        }
    }

    /// col_dst += c · col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.a.rows() {
            let v = self.a[(k, src)].clone() * c.clone();
            self.a[(k, dst)] = self.a[(k, dst)].clone() + v;
        }
        for k in 0..self.q.rows() {
            let v = self.q[(k, src)].clone() * c.clone();
            self.q[(k, dst)] = self.q[(k, dst)].clone() + v;
        }
        // row_src -= c · row_dst on q_inv
        for k in 0..self.q_inv.cols() {
            let v = self.q_inv[(dst, k)].clone() * c.clone();
            self.q_inv[(src, k)] = self.q_inv[(src, k)].clone() - v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.a.cols() {
            self.a[(i, k)] = -self.a[(i, k)].clone();
        }
        for k in 0..self.p.cols() {
            self.p[(i, k)] = -self.p[(i, k)].clone();
        }
        for k in 0..self.p_inv.rows() {
            self.p_inv[(k, i)] = -self.p_inv[(k, i)].clone();
        }
    }

    /// Smallest nonzero |entry| in the trailing block, first in row-major order.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a[(i, j)].abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> usize {
        let (rows, cols) = self.a.shape();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..rows {
                    let qt = self.a[(i, t)].clone() / pivot.clone();
                    self.add_row(i, t, &-qt);
                    if !self.a[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    let qt = self.a[(t, j)].clone() / pivot.clone();
                    self.add_col(j, t, &-qt);
                    if !self.a[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (pi, pj) = self.find_pivot(t).expect("nonzero remainder present");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // divisibility of the trailing block by the pivot
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(self.a[(i, j)].clone() % pivot.clone()).is_zero())
                });
                match offender {
                    Some(i) => {
                        let one = T::one();
                        self.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
///
/// Deterministic: the pivot is the first entry of minimal nonzero absolute
/// value in row-major order of the trailing block.
pub fn snf<T: IntegerRing>(m: &Matrix<T>) -> SnfDecomposition<T> {
    let (rows, cols) = m.shape();
    let mut calc = Calc {
        a: m.clone(),
        p: Matrix::identity(rows),
        p_inv: Matrix::identity(rows),
        q: Matrix::identity(cols),
        q_inv: Matrix::identity(cols),
    };
    let rank = calc.run();
    SnfDecomposition { u: calc.p_inv, s: calc.a, v: calc.q_inv, u_inv: calc.p, v_inv: calc.q, rank }
}
