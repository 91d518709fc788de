//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Kernels, images, canonical solving, and subspace arithmetic. All results
//! are canonical: reduced row-echelon bases, free variables set to zero.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always stored in lowest terms with positive
/// denominator (maintained by `num`).
pub type Scalar = BigRational;

pub fn rat(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from(BigInt::from(n))
}

/// Factorial as a scalar, for the finite exponential sums.
pub fn factorial(n: u32) -> Scalar {
    let mut f = BigInt::one();
    for k in 2..=n as u64 {
        f *= BigInt::from(k);
    }
    BigRational::from(f)
}

pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut b = BigInt::one();
    for i in 0..k as u64 {
        b = b * BigInt::from(n as u64 - i) / BigInt::from(i + 1);
    }
    BigRational::from(b)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("subspace is not contained in the claimed superspace")]
    NotContained,
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let mut m = Matrix::zero(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut m = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = m.get(i, j).clone();
                        m.set(i, j, cur + a * b);
                    }
                }
            }
        }
        m
    }

    /// Matrix-vector product (column-vector convention).
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Unique reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space {v : Mv = 0}, as a canonical subspace of Q^cols.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, basis).expect("kernel vectors share ambient dim")
    }

    /// Column space, as a canonical subspace of Q^rows.
    pub fn image(&self) -> Subspace {
        let t = self.transpose();
        let rows: Vec<Vec<Scalar>> = (0..t.rows).map(|i| t.row(i)).collect();
        Subspace::from_vectors(self.rows, rows).expect("image vectors share ambient dim")
    }

    /// Canonical particular solution of Mx = b (free variables zero), or
    /// `None` when b is not in the image.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// A linear subspace of Q^n, stored as a reduced-echelon basis (one basis
/// vector per row, pivots strictly increasing). Canonical per subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self, LinError> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(LinError::Dimension {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        let m = Matrix::from_rows(ambient, vectors);
        let (r, pivots) = m.rref();
        let mut rows = Vec::new();
        for i in 0..pivots.len() {
            rows.push(r.row(i));
        }
        Ok(Subspace {
            ambient,
            basis: Matrix::from_rows(ambient, rows),
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    /// Reduce v modulo this subspace (subtract off pivot components).
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.ambient {
                    let b = self.basis.get(row, j);
                    if !b.is_zero() {
                        w[j] = &w[j] - &f * b;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinError> {
        if self.ambient != other.ambient {
            return Err(LinError::Dimension {
                left: self.ambient,
                right: other.ambient,
            });
        }
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::from_vectors(self.ambient, vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinError> {
        if self.ambient != other.ambient {
            return Err(LinError::Dimension {
                left: self.ambient,
                right: other.ambient,
            });
        }
        let k = self.dim();
        let m = other.dim();
        if k == 0 || m == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // Solve U^T a - V^T b = 0; intersection vectors are U^T a.
        let mut mat = Matrix::zero(self.ambient, k + m);
        for j in 0..k {
            for i in 0..self.ambient {
                mat.set(i, j, self.basis.get(j, i).clone());
            }
        }
        for j in 0..m {
            for i in 0..self.ambient {
                mat.set(i, k + j, -other.basis.get(j, i).clone());
            }
        }
        let ker = mat.kernel();
        let mut vs = Vec::new();
        for kv in ker.basis_vectors() {
            let mut w = vec![Scalar::zero(); self.ambient];
            for j in 0..k {
                if !kv[j].is_zero() {
                    for i in 0..self.ambient {
                        w[i] = &w[i] + &kv[j] * self.basis.get(j, i);
                    }
                }
            }
            vs.push(w);
        }
        Subspace::from_vectors(self.ambient, vs)
    }

    /// Representative vectors projecting to a basis of self/w. Requires
    /// w contained in self.
    pub fn quotient_basis(&self, w: &Subspace) -> Result<Vec<Vec<Scalar>>, LinError> {
        if self.ambient != w.ambient {
            return Err(LinError::Dimension {
                left: self.ambient,
                right: w.ambient,
            });
        }
        if !self.contains_subspace(w) {
            return Err(LinError::NotContained);
        }
        let mut reduced = Vec::new();
        for v in self.basis_vectors() {
            let r = w.reduce(&v);
            if r.iter().any(|x| !x.is_zero()) {
                reduced.push(r);
            }
        }
        let s = Subspace::from_vectors(self.ambient, reduced)?;
        Ok(s.basis_vectors())
    }
}

pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        format!("{}", s.numer())
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn scalar_is_negative(s: &Scalar) -> bool {
    s.is_negative()
}
