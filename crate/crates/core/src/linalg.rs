//! Exact Gauss-Jordan elimination over ℚ(t).

use crate::scalar::Scalar;

/// Dense row-major matrix over [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vec<Scalar>>,
    ncols: usize,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            rows: vec![vec![Scalar::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i]
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `y^T A`.
    pub fn left_mul_vec(&self, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ncols];
        for (yi, r) in y.iter().zip(&self.rows) {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(r) {
                if !a.is_zero() {
                    *o = &*o + &(yi * a);
                }
            }
        }
        out
    }
}

/// Reduced row echelon form with the row operations recorded.
struct Reduction {
    reduced: Vec<Vec<Scalar>>,
    /// `transform * original = reduced`.
    transform: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

fn row_axpy(target: &mut [Scalar], c: &Scalar, source: &[Scalar]) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t = &*t - &(c * s);
        }
    }
}

/// Gauss-Jordan on the first `pivot_cols` columns.
fn reduce(rows: Vec<Vec<Scalar>>, pivot_cols: usize) -> Reduction {
    let m = rows.len();
    let mut a = rows;
    let mut tr: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut r = vec![Scalar::zero(); m];
            r[i] = Scalar::one();
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..pivot_cols {
        if next == m {
            break;
        }
        let Some(p) = (next..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(next, p);
        tr.swap(next, p);
        let inv = a[next][col].recip().expect("nonzero pivot");
        for x in a[next].iter_mut() {
            *x = &*x * &inv;
        }
        for x in tr[next].iter_mut() {
            *x = &*x * &inv;
        }
        let (pa, pt) = (a[next].clone(), tr[next].clone());
        for i in 0..m {
            if i == next || a[i][col].is_zero() {
                continue;
            }
            let c = a[i][col].clone();
            row_axpy(&mut a[i], &c, &pa);
            row_axpy(&mut tr[i], &c, &pt);
        }
        pivots.push(col);
        next += 1;
    }
    Reduction {
        reduced: a,
        transform: tr,
        pivots,
    }
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &Matrix) -> Vec<Vec<Scalar>> {
    let red = reduce(a.rows.clone(), a.ncols);
    kernel_from_rref(&red.reduced, &red.pivots, a.ncols)
}

fn kernel_from_rref(r: &[Vec<Scalar>], pivots: &[usize], n: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); n];
        v[free] = Scalar::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -&r[i][free];
        }
        out.push(v);
    }
    out
}

pub fn rank(a: &Matrix) -> usize {
    reduce(a.rows.clone(), a.ncols).pivots.len()
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Feasible {
        particular: Vec<Scalar>,
        homogeneous: Vec<Vec<Scalar>>,
    },
    /// `y` with `y^T A = 0` and `y^T b != 0`.
    Infeasible { certificate: Vec<Scalar> },
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Feasible { .. })
    }
}

pub fn solve(a: &Matrix, b: &[Scalar]) -> Solution {
    assert_eq!(a.nrows(), b.len(), "right-hand side length");
    let n = a.ncols;
    let rows: Vec<Vec<Scalar>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = reduce(rows, n);
    for (i, row) in red.reduced.iter().enumerate() {
        if row[..n].iter().all(Scalar::is_zero) && !row[n].is_zero() {
            return Solution::Infeasible {
                certificate: red.transform[i].clone(),
            };
        }
    }
    let mut particular = vec![Scalar::zero(); n];
    for (i, &pc) in red.pivots.iter().enumerate() {
        particular[pc] = red.reduced[i][n].clone();
    }
    Solution::Feasible {
        particular,
        homogeneous: kernel_from_rref(&red.reduced, &red.pivots, n),
    }
}
