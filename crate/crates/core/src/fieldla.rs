//! Dense linear algebra over a prime field `F_p`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldPrime(u32);

impl Default for FieldPrime {
    fn default() -> Self {
        FieldPrime(2)
    }
}

impl FieldPrime {
    pub fn new(p: u32) -> Result<Self> {
        let prime = p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0);
        if !prime || p > 65521 {
            return Err(Error::Parse(format!("{p} is not a supported prime")));
        }
        Ok(FieldPrime(p))
    }

    pub fn p(self) -> u32 {
        self.0
    }

    /// Reduces a signed integer into `0..p`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "inverse of zero");
        // Fermat
        let mut base = a as u64 % self.0 as u64;
        let mut e = self.0 - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0 as u64;
            }
            base = base * base % self.0 as u64;
            e >>= 1;
        }
        acc as u32
    }
}

/// Row-major dense matrix with entries reduced mod `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    field: FieldPrime,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(field: FieldPrime, rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldPrime, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: FieldPrime, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                m.data[r * cols + c] = field.reduce(*v);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: FieldPrime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v % field.p();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * out.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * out.cols + c] = self.get(r, c);
            }
            for c in 0..other.cols {
                out.data[r * out.cols + self.cols + c] = other.get(r, c);
            }
        }
        out
    }

    pub fn permute_rows(&self, perm: &[usize]) -> FpMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for (dst, &src) in perm.iter().enumerate() {
            out.data[dst * self.cols..(dst + 1) * self.cols]
                .copy_from_slice(&self.data[src * self.cols..(src + 1) * self.cols]);
        }
        out
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let sub = f.mul(factor, m.get(row, c));
                    let idx = r * m.cols + c;
                    m.data[idx] = f.sub(m.data[idx], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.sub(0, r.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn cokernel_dim(&self) -> usize {
        self.rows - self.rank()
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn restrict_map(&self, rows: &[usize], cols: &[usize]) -> Result<FpMatrix> {
        if let Some(r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::IndexOutOfRange(format!("row {r} of {}", self.rows)));
        }
        if let Some(c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange(format!("column {c} of {}", self.cols)));
        }
        let mut out = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * out.cols + j] = self.get(r, c);
            }
        }
        Ok(out)
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&FpMatrix::from_columns(self.field, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols);
        }
        Some(x)
    }
}
