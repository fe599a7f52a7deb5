//! Dense matrices of polynomials.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::{Poly, RingRef, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMat {
    ring: RingRef,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PMat {
    pub fn zeros(ring: &RingRef, rows: usize, cols: usize) -> PMat {
        PMat {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Poly::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &RingRef, n: usize) -> PMat {
        PMat::scalar(&Poly::one(ring), n)
    }

    pub fn scalar(p: &Poly, n: usize) -> PMat {
        let mut m = PMat::zeros(p.ring(), n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(ring: &RingRef, rows: Vec<Vec<Poly>>) -> PMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        PMat {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_qmat(ring: &RingRef, m: &QMat) -> PMat {
        let mut p = PMat::zeros(ring, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                p.set(i, j, Poly::constant(ring, m.get(i, j).clone()));
            }
        }
        p
    }

    /// Constant matrix when every entry is constant.
    pub fn to_qmat(&self) -> Option<QMat> {
        if !self.data.iter().all(|p| p.is_constant()) {
            return None;
        }
        let mut m = QMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).constant_term());
            }
        }
        Some(m)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PMat {
        let data: Vec<Poly> = self.data.iter().map(f).collect();
        let ring = data.first().map_or(self.ring.clone(), |p| p.ring().clone());
        PMat {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn try_map(&self, ring: &RingRef, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PMat> {
        let data: Result<Vec<Poly>> = self.data.iter().map(f).collect();
        Ok(PMat {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: data?,
        })
    }

    pub fn transpose(&self) -> PMat {
        let mut m = PMat::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn try_mul(&self, o: &PMat) -> Result<PMat> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut m = PMat::zeros(&self.ring, self.rows, o.cols);
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
                        m.data[idx] = &m.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul(&self, o: &PMat) -> PMat {
        self.try_mul(o).expect("shape mismatch")
    }

    pub fn add(&self, o: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        PMat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &PMat) -> PMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        PMat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> PMat {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &Q) -> PMat {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, s: &Poly) -> PMat {
        self.map(|p| p * s)
    }

    pub fn partial(&self, var: usize) -> PMat {
        self.map(|p| p.partial(var))
    }

    pub fn trace(&self) -> Poly {
        let mut t = Poly::zero(&self.ring);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PMat {
        let mut m = PMat::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Copy `block` into `self` with its top-left corner at `(r, c)`.
    pub fn put(&mut self, r: usize, c: usize, block: &PMat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    /// Plain Kronecker product (no signs); row index `i·rows(o) + k`.
    pub fn kron(&self, o: &PMat) -> PMat {
        let mut m = PMat::zeros(&self.ring, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.set(i * o.rows + k, j * o.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn to_ring(&self, ring: &RingRef) -> Result<PMat> {
        self.try_map(ring, |p| p.to_ring(ring))
    }

    /// Largest total degree of an entry.
    pub fn max_degree(&self) -> u32 {
        self.data
            .iter()
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Poly)> {
        self.data
            .iter()
            .position(|p| !p.is_zero())
            .map(|k| (k / self.cols, k % self.cols, &self.data[k]))
    }

    /// Row-major list of printed entries.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|p| !p.is_zero()).count()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one(&self.ring);
        }
        if n == 1 {
            return self.get(0, 0).clone();
        }
        let mut total = Poly::zero(&self.ring);
        let rest: Vec<usize> = (1..n).collect();
        for j in 0..n {
            let a = self.get(0, j);
            if a.is_zero() {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = a * &self.select(&rest, &cols).det();
            total = if j % 2 == 0 { &total + &term } else { &total - &term };
        }
        total
    }

    pub fn constant_trace(&self) -> Q {
        let t = self.trace();
        if t.is_zero() {
            Q::zero()
        } else {
            t.constant_term()
        }
    }
}

impl fmt::Display for PMat {
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
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
