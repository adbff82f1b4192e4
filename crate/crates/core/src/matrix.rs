//! Small dense complex matrices and the linear solves backing the eigensolver.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    /// Build an `n x n` matrix from row-major entries. All entries must be
    /// finite and the dimension at least 1.
    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("matrix dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(n: usize, mut f: F) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Elementwise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| e.conj()).collect() }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    /// `self + c I`.
    pub fn plus_scaled_identity(&self, c: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let d = m.get(i, i);
            m.set(i, i, d + c);
        }
        m
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "matvec length mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        Self::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Maximum column sum of moduli.
    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest modulus over all entries.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Solve `A x = rhs` by LU with partial pivoting. Pivots below a small
    /// floor are replaced by the floor so solves shifted exactly onto an
    /// eigenvalue remain usable for inverse iteration.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        if rhs.len() != self.n {
            return Err(Error::Dimension(format!(
                "rhs length {} does not match dimension {}",
                rhs.len(),
                self.n
            )));
        }
        let n = self.n;
        let mut a = self.entries.clone();
        let mut x = rhs.to_vec();
        let floor = f64::EPSILON * self.max_norm().max(1.0);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| {
                    a[r * n + col].norm().partial_cmp(&a[s * n + col].norm()).unwrap()
                })
                .unwrap();
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                x.swap(col, pivot_row);
            }
            if a[col * n + col].norm() < floor {
                a[col * n + col] = C64::new(floor, 0.0);
            }
            let pivot = a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= factor * v;
                }
                let xc = x[col];
                x[row] -= factor * xc;
            }
        }
        for col in (0..n).rev() {
            let mut sum = x[col];
            for k in col + 1..n {
                sum -= a[col * n + k] * x[k];
            }
            x[col] = sum / a[col * n + col];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("linear solve produced non-finite values".into()));
        }
        Ok(x)
    }

    /// Numerical rank by row echelon with partial pivoting: counts pivots
    /// exceeding `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let pivot_row = (row..n)
                .max_by(|&r, &s| {
                    a[r * n + col].norm().partial_cmp(&a[s * n + col].norm()).unwrap()
                })
                .unwrap_or(row);
            if row >= n || a[pivot_row * n + col].norm() <= tol {
                continue;
            }
            if pivot_row != row {
                for j in 0..n {
                    a.swap(row * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[row * n + col];
            for r in row + 1..n {
                let factor = a[r * n + col] / pivot;
                for j in col..n {
                    let v = a[row * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
