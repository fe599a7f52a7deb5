//! Dense exact linear algebra over Q or a prime field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::{format_q, Q};

/// Coefficient field: the rationals (`p = 0`) or F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Field {
    pub p: u64,
}

impl Field {
    pub const Q: Field = Field { p: 0 };

    pub fn new(p: u64) -> Field {
        Field { p }
    }

    pub fn norm(self, c: Q) -> Q {
        if self.p == 0 {
            return c;
        }
        let p = BigInt::from(self.p);
        let num = c.numer().mod_floor(&p);
        let den = c.denom().mod_floor(&p);
        let inv = den.modpow(&(&p - BigInt::from(2)), &p);
        Q::from_integer((num * inv).mod_floor(&p))
    }

    pub fn inv(self, c: &Q) -> Q {
        self.norm(c.recip())
    }
}

/// Dense row-major matrix of exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> QMat {
        let mut m = QMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMat {
        let mut m = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut m = QMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |s, (a, b)| s + a * b)
            })
            .collect()
    }

    pub fn add(&self, o: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |s, i| s + self.get(i, i))
    }

    pub fn normalized(&self, f: Field) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.norm(a.clone())).collect(),
        }
    }

    /// Sub-matrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMat {
        let mut m = QMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &QMat) -> QMat {
        assert_eq!(self.rows, o.rows);
        let mut m = QMat::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, f: Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.norm(self.get(r, j) * &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rj = self.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = f.norm(self.get(i, j) - &factor * rj);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self, f: Field) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let piv = m.rref(f);
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = f.norm(-m.get(r, free).clone());
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Q], f: Field) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&QMat::from_columns(self.rows, &[b.to_vec()]));
        let mut m = aug;
        let piv = m.rref(f);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = m.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Solve `self * X = B` column by column.
    pub fn solve_mat(&self, b: &QMat, f: Field) -> Option<QMat> {
        let cols: Option<Vec<Vec<Q>>> = (0..b.cols)
            .map(|j| self.solve(&b.column(j), f))
            .collect();
        cols.map(|c| QMat::from_columns(self.cols, &c))
    }

    pub fn inverse(&self, f: Field) -> Option<QMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut m = self.hcat(&QMat::identity(n));
        let piv = m.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let all: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(m.select(&all, &right))
    }

    /// Linearly independent columns spanning the column space (a subset of the columns).
    pub fn column_basis(&self, f: Field) -> Vec<usize> {
        self.clone().rref(f)
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_q(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    #[test]
    fn rref_and_rank() {
        let m = QMat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(Field::Q), 2);
        let ns = m.nullspace(Field::Q);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_and_inverse() {
        let m = QMat::from_i64(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[q(3), q(2)], Field::Q).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = m.inverse(Field::Q).unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        let sing = QMat::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(sing.inverse(Field::Q).is_none());
        assert!(sing.solve(&[q(1), q(0)], Field::Q).is_none());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(QMat::identity(4).trace(), q(4));
        assert_eq!(QMat::identity(2).scale(&qf(1, 2)).trace(), q(1));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::new(7);
        let m = QMat::from_i64(&[&[3]]);
        assert_eq!(m.inverse(f).unwrap(), QMat::from_i64(&[&[5]]));
    }
}
