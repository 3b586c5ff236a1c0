//! Dense linear algebra over F_p for small scalar problems: kernels, solves,
//! inverses. Used by the Witt machinery for coefficient-matrix work.

use crate::error::{CaError, Result};
use crate::ring::fp::FpScalar;

/// Row-major dense matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    a: Vec<FpScalar>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            a: vec![FpScalar::zero(p); rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, FpScalar::one(p));
        }
        m
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FpScalar) -> Self {
        let mut m = Self::zero(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> FpScalar {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FpScalar) {
        self.a[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(CaError::Shape("FpMatrix mul mismatch".into()));
        }
        let mut out = Self::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self.at(i, k);
                if s.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j).add(&s.mul(&other.at(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns the pivot column per pivot row.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let t = m.at(row, j);
                m.set(row, j, m.at(pr, j));
                m.set(pr, j, t);
            }
            let inv = m.at(row, col).inv().unwrap();
            for j in 0..m.cols {
                let v = m.at(row, j).mul(&inv).unwrap();
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col);
                for j in 0..m.cols {
                    let v = m.at(r, j).sub(&f.mul(&m.at(row, j)).unwrap()).unwrap();
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<FpScalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::new();
        for &fc in &free {
            let mut v = vec![FpScalar::zero(self.p); self.cols];
            v[fc] = FpScalar::one(self.p);
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = r.at(pr, fc).neg();
            }
            out.push(v);
        }
        out
    }

    /// One particular solution of A x = b, if any.
    pub fn solve(&self, b: &[FpScalar]) -> Option<Vec<FpScalar>> {
        if b.len() != self.rows {
            return None;
        }
        let mut aug = FpMatrix::zero(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![FpScalar::zero(self.p); self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(pr, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, n + i, FpScalar::one(self.p));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        Some(FpMatrix::from_fn(self.p, n, n, |i, j| r.at(i, n + j)))
    }
}
