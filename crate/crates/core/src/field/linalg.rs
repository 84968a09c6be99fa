//! Dense matrices over a field context and exact Gaussian elimination.

use std::fmt;
use std::sync::Arc;

use super::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Matrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over GF({}^{})",
            self.rows,
            self.cols,
            self.ctx.p(),
            self.ctx.m()
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

/// `dst += c * src`, entrywise.
pub fn axpy_raw(ctx: &FieldCtx, dst: &mut [u32], c: u32, src: &[u32]) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ctx.add(*d, ctx.mul(c, s));
        }
    }
}

impl Matrix {
    pub fn zeros(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ctx: Arc<FieldCtx>, cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            ctx,
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix from checked elements, rejecting entries of another field.
    pub fn from_elements(ctx: Arc<FieldCtx>, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut raw = Vec::with_capacity(rows.len());
        for r in rows {
            let mut v = Vec::with_capacity(r.len());
            for x in r {
                if x.ctx != ctx.id() {
                    return Err(Error::ContextMismatch {
                        left: ctx.id(),
                        right: x.ctx,
                    });
                }
                v.push(x.v);
            }
            raw.push(v);
        }
        Self::from_rows(ctx, cols, raw)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ctx.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ctx.id() != other.ctx.id() {
            return Err(Error::ContextMismatch {
                left: self.ctx.id(),
                right: other.ctx.id(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ctx = &*self.ctx;
        let mut out = Matrix::zeros(self.ctx.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                axpy_raw(ctx, dst, self.data[r * self.cols + k], other.row(k));
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduces to reduced row-echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let ctx = self.ctx.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = ctx.inv(self.get(r, c));
            for x in self.row_mut(r) {
                *x = ctx.mul(*x, inv);
            }
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        axpy_raw(
                            &ctx,
                            &mut self.data[i * cols..(i + 1) * cols],
                            ctx.neg(f),
                            &pivot_row,
                        );
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.ctx.clone(), self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r));
        }
        basis.rank()
    }

    /// Basis of `{x : self · x = 0}` as rows.
    pub fn kernel(&self) -> Matrix {
        let mut a = self.clone();
        let pivots = a.rref();
        kernel_from_rref(&a, &pivots)
    }

    /// Basis of `{y : y · self = 0}` as rows.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().kernel()
    }

    /// Rows of `self` after reduction, dropping zero rows.
    pub fn row_basis(&self) -> Matrix {
        let mut a = self.clone();
        let pivots = a.rref();
        a.data.truncate(pivots.len() * a.cols);
        a.rows = pivots.len();
        a
    }
}

fn kernel_from_rref(a: &Matrix, pivots: &[usize]) -> Matrix {
    let ctx = &a.ctx;
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = Matrix::zeros(ctx.clone(), free.len(), a.cols);
    for (i, &f) in free.iter().enumerate() {
        k.set(i, f, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            k.set(i, pc, ctx.neg(a.get(r, f)));
        }
    }
    k
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub rank: usize,
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    pub kernel: Matrix,
    /// `X` with `mat · X = rhs`, when a right-hand side was given and the
    /// system is consistent.
    pub solution: Option<Matrix>,
}

pub fn solve_linear(mat: &Matrix, rhs: Option<&Matrix>) -> Result<LinearSolution> {
    let mut a = mat.clone();
    let pivots = a.rref();
    let kernel = kernel_from_rref(&a, &pivots);
    let solution = match rhs {
        None => None,
        Some(b) => {
            if b.ctx.id() != mat.ctx.id() {
                return Err(Error::ContextMismatch {
                    left: mat.ctx.id(),
                    right: b.ctx.id(),
                });
            }
            if b.rows != mat.rows {
                return Err(Error::DimensionMismatch(format!(
                    "rhs has {} rows, matrix has {}",
                    b.rows, mat.rows
                )));
            }
            let mut aug = Matrix::zeros(mat.ctx.clone(), mat.rows, mat.cols + b.cols);
            for r in 0..mat.rows {
                aug.row_mut(r)[..mat.cols].copy_from_slice(mat.row(r));
                aug.row_mut(r)[mat.cols..].copy_from_slice(b.row(r));
            }
            let ap = aug.rref();
            if ap.iter().any(|&c| c >= mat.cols) {
                None
            } else {
                let mut x = Matrix::zeros(mat.ctx.clone(), mat.cols, b.cols);
                for (r, &pc) in ap.iter().enumerate() {
                    x.row_mut(pc).copy_from_slice(&aug.row(r)[mat.cols..]);
                }
                Some(x)
            }
        }
    };
    Ok(LinearSolution {
        rank: pivots.len(),
        rref: a,
        pivots,
        kernel,
        solution,
    })
}

/// Incrementally maintained echelon basis, for prefix ranks and membership.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ctx: Arc<FieldCtx>,
    cols: usize,
    /// Each row is normalized so its pivot entry is 1.
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(ctx: Arc<FieldCtx>, cols: usize) -> Self {
        EchelonBasis {
            ctx,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            let c = w[*p];
            if c != 0 {
                axpy_raw(&self.ctx, &mut w, self.ctx.neg(c), row);
            }
        }
        w
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns true when it increased the rank.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.ctx.inv(w[p]);
        for x in w.iter_mut() {
            *x = self.ctx.mul(*x, inv);
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_new;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_zero() {
        let f = field_new(3, 2).unwrap();
        let id = Matrix::identity(f.clone(), 5);
        let s = solve_linear(&id, None).unwrap();
        assert_eq!(s.rank, 5);
        assert_eq!(s.kernel.rows(), 0);
        let z = Matrix::zeros(f, 5, 5);
        let s = solve_linear(&z, None).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.kernel.rows(), 5);
    }

    #[test]
    fn random_gf9_kernel_is_annihilated() {
        let f = field_new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows = (0..6)
                .map(|_| (0..9).map(|_| rng.gen_range(0..9)).collect())
                .collect();
            let a = Matrix::from_rows(f.clone(), 9, rows).unwrap();
            let s = solve_linear(&a, None).unwrap();
            assert_eq!(s.rank + s.kernel.rows(), 9);
            assert!(a.mul(&s.kernel.transpose()).unwrap().is_zero());
            assert_eq!(s.rank, a.rank());
        }
    }

    #[test]
    fn solves_consistent_systems() {
        let f = field_new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows = (0..4)
            .map(|_| (0..6).map(|_| rng.gen_range(0..16)).collect())
            .collect();
        let a = Matrix::from_rows(f.clone(), 6, rows).unwrap();
        let xs = (0..6).map(|_| vec![rng.gen_range(0..16)]).collect();
        let x = Matrix::from_rows(f.clone(), 1, xs).unwrap();
        let b = a.mul(&x).unwrap();
        let s = solve_linear(&a, Some(&b)).unwrap();
        let y = s.solution.expect("consistent system");
        assert_eq!(a.mul(&y).unwrap(), b);
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let f = field_new(5, 1).unwrap();
        let a = Matrix::from_rows(f.clone(), 2, vec![vec![1, 1], vec![2, 2]]).unwrap();
        let b = Matrix::from_rows(f, 1, vec![vec![1], vec![1]]).unwrap();
        assert!(solve_linear(&a, Some(&b)).unwrap().solution.is_none());
        assert!(solve_linear(&a, Some(&Matrix::zeros(a.ctx().clone(), 3, 1))).is_err());
    }

    proptest! {
        #[test]
        fn echelon_matches_rref(seed in any::<u64>(), r in 1usize..8, c in 1usize..8) {
            let f = field_new(7, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Bias towards dependent rows.
            let rows: Vec<Vec<u32>> = (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..7) }).collect()).collect();
            let a = Matrix::from_rows(f.clone(), c, rows.clone()).unwrap();
            let mut b = a.clone();
            let piv = b.rref();
            prop_assert_eq!(piv.len(), a.rank());
            let mut eb = EchelonBasis::new(f, c);
            for row in &rows {
                eb.insert(row);
            }
            for row in &rows {
                prop_assert!(eb.contains(row));
            }
        }
    }
}
