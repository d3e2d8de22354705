//! Dense matrices and vectors of Laurent series.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{FFElem, FieldConfig, GaloisField};
use crate::series::{LaurentSeries, Prec};

pub type SVec = Vec<LaurentSeries>;

/// Row-major matrix of Laurent series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentSeries>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![LaurentSeries::exact_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentSeries::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentSeries) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[SVec]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentSeries) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentSeries> {
        self.data.iter()
    }

    pub fn column(&self, j: usize) -> SVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn map(&self, g: impl Fn(&LaurentSeries) -> LaurentSeries) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn add(&self, o: &Matrix, f: &GaloisField) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j), f))
    }

    pub fn sub(&self, o: &Matrix, f: &GaloisField) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j), f))
    }

    pub fn mul(&self, o: &Matrix, f: &GaloisField) -> Matrix {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = LaurentSeries::exact_zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.is_exact() && a.is_zero() || b.is_exact() && b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b, f), f);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[LaurentSeries], f: &GaloisField) -> SVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = LaurentSeries::exact_zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if a.is_exact() && a.is_zero() || x.is_exact() && x.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(x, f), f);
                }
                acc
            })
            .collect()
    }

    pub fn phi(&self, cfg: &FieldConfig) -> Matrix {
        self.map(|x| x.phi(cfg))
    }

    pub fn shift(&self, k: i64) -> Matrix {
        self.map(|x| x.shift(k))
    }

    pub fn truncate(&self, n: i64) -> Matrix {
        self.map(|x| x.truncate(n))
    }

    /// Drop precision information: keep the known coefficients as an exact polynomial.
    pub fn to_exact(&self) -> Matrix {
        self.map(to_exact)
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(LaurentSeries::is_exact)
    }

    /// Least absolute precision among the entries (`None` when all exact).
    pub fn prec(&self) -> Prec {
        self.data.iter().filter_map(LaurentSeries::prec).min()
    }

    /// Least valuation bound among the entries (`None` when every entry is exact zero).
    pub fn val_bound(&self) -> Prec {
        self.data.iter().filter_map(LaurentSeries::val_bound).min()
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentSeries::valuation).min()
    }

    pub fn is_zero_mod(&self, n: i64) -> bool {
        self.data.iter().all(|x| x.is_zero_mod(n))
    }

    /// All entries in `k[[u]]`.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.val_bound().map_or(true, |v| v >= 0))
    }

    pub fn diag(entries: &[LaurentSeries]) -> Matrix {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Determinant. Exact cofactor expansion up to size 6, elimination with
    /// lowest-valuation pivots (series inverses expanded to `cap`) beyond.
    pub fn det(&self, f: &GaloisField, cap: i64) -> Result<LaurentSeries> {
        assert!(self.is_square());
        if self.rows <= 6 {
            let idx: Vec<usize> = (0..self.rows).collect();
            return Ok(self.det_expand(f, 0, &idx));
        }
        let mut a = self.clone();
        let n = self.rows;
        let mut det = LaurentSeries::one();
        for k in 0..n {
            let Some((pr, pc)) = a.lowest_pivot(k..n, k..n) else {
                return Ok(LaurentSeries::zero(a.prec()));
            };
            if pr != k {
                a.swap_rows(k, pr);
                det = det.neg(f);
            }
            if pc != k {
                a.swap_cols(k, pc);
                det = det.neg(f);
            }
            let piv = a.get(k, k).clone();
            det = det.mul(&piv, f);
            let pinv = piv.inv(f, cap)?;
            for i in k + 1..n {
                let c = a.get(i, k).mul(&pinv, f);
                if c.is_zero() && c.is_exact() {
                    continue;
                }
                for j in k..n {
                    let t = a.get(i, j).sub(&c.mul(a.get(k, j), f), f);
                    a.set(i, j, t);
                }
            }
        }
        Ok(det)
    }

    fn det_expand(&self, f: &GaloisField, row: usize, cols: &[usize]) -> LaurentSeries {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = LaurentSeries::exact_zero();
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() && a.is_exact() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.det_expand(f, row + 1, &rest), f);
            acc = if k % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
        }
        acc
    }

    fn lowest_pivot(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for j in cols {
            for i in rows.clone() {
                if let Some(v) = self.get(i, j).valuation() {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Inverse by Gauss-Jordan elimination with lowest-valuation pivots in
    /// each column. Monomial pivots stay exact; others are expanded to `cap`.
    pub fn inverse(&self, f: &GaloisField, cap: i64) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let Some((pr, _)) = a.lowest_pivot(k..n, k..k + 1) else {
                return Err(Error::SingularP);
            };
            a.swap_rows(k, pr);
            inv.swap_rows(k, pr);
            let pinv = a.get(k, k).inv(f, cap)?;
            for j in 0..n {
                let x = a.get(k, j).mul(&pinv, f);
                a.set(k, j, x);
                let y = inv.get(k, j).mul(&pinv, f);
                inv.set(k, j, y);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let c = a.get(i, k).clone();
                if c.is_zero() && c.is_exact() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(i, j).sub(&c.mul(a.get(k, j), f), f);
                    a.set(i, j, x);
                    let y = inv.get(i, j).sub(&c.mul(inv.get(k, j), f), f);
                    inv.set(i, j, y);
                }
            }
        }
        Ok(inv)
    }

    pub fn to_json(&self, f: &GaloisField) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json(f)).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, f: &GaloisField) -> Result<Matrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("matrix must be an array of rows".into()))?;
        let mut data = Vec::new();
        let mut cols = None;
        for r in rows {
            let r = r
                .as_array()
                .ok_or_else(|| Error::InvalidInput("matrix row must be an array".into()))?;
            if *cols.get_or_insert(r.len()) != r.len() {
                return Err(Error::InvalidInput("ragged matrix".into()));
            }
            for x in r {
                data.push(LaurentSeries::from_json(x, f)?);
            }
        }
        Ok(Matrix { rows: rows.len(), cols: cols.unwrap_or(0), data })
    }
}

pub fn to_exact(x: &LaurentSeries) -> LaurentSeries {
    LaurentSeries::from_parts(x.valuation().unwrap_or(0), x.coeffs().to_vec(), None)
}

pub fn vec_phi(v: &[LaurentSeries], cfg: &FieldConfig) -> SVec {
    v.iter().map(|x| x.phi(cfg)).collect()
}

pub fn vec_shift(v: &[LaurentSeries], k: i64) -> SVec {
    v.iter().map(|x| x.shift(k)).collect()
}

pub fn vec_truncate(v: &[LaurentSeries], n: i64) -> SVec {
    v.iter().map(|x| x.truncate(n)).collect()
}

pub fn vec_sub(a: &[LaurentSeries], b: &[LaurentSeries], f: &GaloisField) -> SVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y, f)).collect()
}

pub fn vec_scale(v: &[LaurentSeries], c: &LaurentSeries, f: &GaloisField) -> SVec {
    v.iter().map(|x| x.mul(c, f)).collect()
}

pub fn vec_scale_elem(v: &[LaurentSeries], c: FFElem, f: &GaloisField) -> SVec {
    v.iter().map(|x| x.scale(c, f)).collect()
}

/// Least valuation of a nonzero entry.
pub fn vec_min_val(v: &[LaurentSeries]) -> Option<i64> {
    v.iter().filter_map(LaurentSeries::valuation).min()
}

pub fn vec_val_bound(v: &[LaurentSeries]) -> Prec {
    v.iter().filter_map(LaurentSeries::val_bound).min()
}

pub fn vec_prec(v: &[LaurentSeries]) -> Prec {
    v.iter().filter_map(LaurentSeries::prec).min()
}

pub fn unit_vec(n: usize, i: usize) -> SVec {
    (0..n)
        .map(|j| if j == i { LaurentSeries::one() } else { LaurentSeries::exact_zero() })
        .collect()
}
