//! Dense matrices with a single elimination pass that yields both the
//! determinant and the solution of a linear system.
//!
//! The exact field uses fraction-free (Bareiss) elimination; the float field
//! uses Gaussian elimination with partial pivoting and declares singularity
//! when a pivot falls below `FLOAT_TOLERANCE * max |a_ij|`.

use std::fmt;

use crate::scalar::{Scalar, FLOAT_TOLERANCE};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// The matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        Self::from_fn(self.rows - 1, self.cols - 1, |a, b| {
            let a = if a >= i { a + 1 } else { a };
            let b = if b >= j { b + 1 } else { b };
            self.get(a, b).clone()
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn determinant(&self) -> S {
        eliminate(self, &[]).det
    }

    /// Solves `self * x = b` for each right-hand side in `rhs`.
    pub fn solve(&self, rhs: &[Vec<S>]) -> Elimination<S> {
        eliminate(self, rhs)
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Output of one elimination pass.
#[derive(Clone, Debug)]
pub struct Elimination<S> {
    pub det: S,
    /// `true` when the matrix was judged singular (exactly, or by tolerance).
    pub singular: bool,
    /// One solution vector per right-hand side; empty when singular.
    pub solutions: Vec<Vec<S>>,
}

fn eliminate<S: Scalar>(a: &Matrix<S>, rhs: &[Vec<S>]) -> Elimination<S> {
    assert_eq!(a.rows, a.cols, "elimination needs a square matrix");
    let n = a.rows;
    for b in rhs {
        assert_eq!(b.len(), n, "right-hand side has the wrong length");
    }
    if n == 0 {
        return Elimination { det: S::one(), singular: false, solutions: vec![Vec::new(); rhs.len()] };
    }
    let width = n + rhs.len();
    let mut w: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    if S::EXACT {
        // integral rows keep the fraction-free pass free of denominators
        let mut scale = S::one();
        for row in w.iter_mut() {
            let f = S::clearing_factor(row);
            if !f.is_one() {
                for x in row.iter_mut() {
                    *x = x.clone() * f.clone();
                }
                scale = scale * f;
            }
        }
        let mut e = bareiss(&mut w, n, width, rhs.len());
        e.det = e.det / scale;
        e
    } else {
        pivoted(&mut w, n, width, rhs.len(), a.max_magnitude())
    }
}

fn bareiss<S: Scalar>(w: &mut [Vec<S>], n: usize, width: usize, nrhs: usize) -> Elimination<S> {
    let mut sign_flip = false;
    let mut prev = S::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !w[i][k].is_zero()) else {
            return Elimination { det: S::zero(), singular: true, solutions: Vec::new() };
        };
        if p != k {
            w.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (w[i][j].clone() * w[k][k].clone() - w[i][k].clone() * w[k][j].clone())
                    / prev.clone();
                w[i][j] = v;
            }
            w[i][k] = S::zero();
        }
        prev = w[k][k].clone();
    }
    let det = if sign_flip { -prev } else { prev };
    let solutions = back_substitute(w, n, nrhs);
    Elimination { det, singular: false, solutions }
}

fn pivoted<S: Scalar>(
    w: &mut [Vec<S>],
    n: usize,
    width: usize,
    nrhs: usize,
    scale: f64,
) -> Elimination<S> {
    let threshold = FLOAT_TOLERANCE * scale.max(f64::MIN_POSITIVE);
    let mut det = S::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| w[x][k].magnitude().total_cmp(&w[y][k].magnitude()))
            .expect("nonempty pivot range");
        if w[p][k].magnitude() <= threshold {
            // report the partial product so callers can see how small it got
            return Elimination { det: det * w[p][k].clone(), singular: true, solutions: Vec::new() };
        }
        if p != k {
            w.swap(p, k);
            det = -det;
        }
        det = det * w[k][k].clone();
        for i in k + 1..n {
            let factor = w[i][k].clone() / w[k][k].clone();
            for j in k..width {
                let v = w[i][j].clone() - factor.clone() * w[k][j].clone();
                w[i][j] = v;
            }
        }
    }
    let solutions = back_substitute(w, n, nrhs);
    Elimination { det, singular: false, solutions }
}

fn back_substitute<S: Scalar>(w: &[Vec<S>], n: usize, nrhs: usize) -> Vec<Vec<S>> {
    (0..nrhs)
        .map(|r| {
            let col = n + r;
            let mut x = vec![S::zero(); n];
            for i in (0..n).rev() {
                let mut acc = w[i][col].clone();
                for j in i + 1..n {
                    acc = acc - w[i][j].clone() * x[j].clone();
                }
                x[i] = acc / w[i][i].clone();
            }
            x
        })
        .collect()
}

/// Determinant by Laplace expansion along the first row. Exponential cost;
/// intended as an independent cross-check on small matrices.
pub fn laplace_determinant<S: Scalar>(a: &Matrix<S>) -> S {
    let n = a.rows();
    match n {
        0 => S::one(),
        1 => a.get(0, 0).clone(),
        _ => (0..n).fold(S::zero(), |acc, j| {
            let term = a.get(0, j).clone() * laplace_determinant(&a.minor(0, j));
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ComplexFloat, GaussianRational as Q};

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    #[test]
    fn bareiss_matches_laplace() {
        let m = Matrix::from_fn(4, 4, |i, j| q(((i * 7 + j * 3) % 5) as i64 - 2, (j + 1) as i64));
        assert_eq!(m.determinant(), laplace_determinant(&m));
    }

    #[test]
    fn solve_with_row_swap() {
        let m = Matrix::from_fn(2, 2, |i, j| if i == j { q(0, 1) } else { q(1, 1) });
        let e = m.solve(&[vec![q(3, 1), q(5, 1)]]);
        assert_eq!(e.det, q(-1, 1));
        assert_eq!(e.solutions[0], vec![q(5, 1), q(3, 1)]);
    }

    #[test]
    fn singular_detection() {
        let m = Matrix::from_fn(3, 3, |i, j| q((i + j) as i64, 1));
        let e = m.solve(&[vec![q(1, 1); 3]]);
        assert!(e.singular);
        assert_eq!(e.det, q(0, 1));
        let mf = Matrix::from_fn(3, 3, |i, j| ComplexFloat::from_i64((i + j) as i64));
        assert!(mf.solve(&[]).singular);
    }

    #[test]
    fn empty_matrix_has_unit_determinant() {
        assert_eq!(Matrix::<Q>::zeros(0, 0).determinant(), q(1, 1));
    }
}
