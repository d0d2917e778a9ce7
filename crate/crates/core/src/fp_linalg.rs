//! Dense matrices over F_p: products, rank, inversion, kernels.

use std::fmt;

use crate::fp_poly::{add_mod, inv_mod, mul_mod, sub_mod};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = (0..self.rows).map(|r| self.row(r)).collect();
        write!(f, "FpMatrix(p={}, {:?})", self.p, rows)
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| x % p));
        }
        FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = FpMatrix::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
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
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix dimension mismatch");
        let p = self.p as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * rhs.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, self.p), self.p))
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != row {
                for c in 0..self.cols {
                    self.data.swap(src * self.cols + c, row * self.cols + c);
                }
            }
            let inv = inv_mod(self.get(row, col), p);
            for c in col..self.cols {
                let v = mul_mod(self.get(row, c), inv, p);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = sub_mod(self.get(r, c), mul_mod(factor, self.get(row, c), p), p);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = sub_mod(0, m.get(r, fc), self.p);
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), FpMatrix::identity(5, 3));
    }

    #[test]
    fn singular_has_kernel() {
        let m = FpMatrix::from_rows(3, &[vec![1, 2], vec![2, 1]]);
        // rows are proportional mod 3
        assert_eq!(m.rank(), 1);
        assert!(m.inverse().is_none());
        let ker = m.nullspace();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = FpMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert!(m.solve(&[1, 0]).is_none());
        let x = m.solve(&[1, 1]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 1]);
    }
}
