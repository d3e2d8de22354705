//! Dense linear algebra and univariate polynomials over a finite field.

use crate::field::{FFElem, GaloisField};

pub type Row = Vec<FFElem>;

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(f: &GaloisField, m: &mut [Row]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c];
                for j in 0..cols {
                    let t = f.mul(k, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant by elimination.
pub fn det(f: &GaloisField, m: &[Row]) -> FFElem {
    let n = m.len();
    let mut w = m.to_vec();
    let mut acc = FFElem::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return FFElem::ZERO;
        };
        if pr != c {
            w.swap(pr, c);
            acc = f.neg(acc);
        }
        acc = f.mul(acc, w[c][c]);
        let inv = f.inv(w[c][c]).unwrap();
        for i in c + 1..n {
            if w[i][c].is_zero() {
                continue;
            }
            let k = f.mul(w[i][c], inv);
            for j in c..n {
                let t = f.mul(k, w[c][j]);
                w[i][j] = f.sub(w[i][j], t);
            }
        }
    }
    acc
}

pub fn rank(f: &GaloisField, m: &[Row]) -> usize {
    let mut w = m.to_vec();
    rref(f, &mut w).len()
}

/// Basis of `{x : m x = 0}`, one vector per free column in increasing order,
/// with a 1 in that free column.
pub fn nullspace(f: &GaloisField, m: &[Row], cols: usize) -> Vec<Row> {
    let mut w = m.to_vec();
    let pivots = rref(f, &mut w);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FFElem::ZERO; cols];
        v[free] = FFElem::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(w[r][free]);
        }
        out.push(v);
    }
    out
}

/// Monic characteristic polynomial `det(xI - A)`, little-endian coefficients,
/// via reduction to upper Hessenberg form.
pub fn charpoly(f: &GaloisField, a: &[Row]) -> Vec<FFElem> {
    let n = a.len();
    let mut h: Vec<Row> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(h[j + 1][j]).unwrap();
        for k in j + 2..n {
            if h[k][j].is_zero() {
                continue;
            }
            let c = f.mul(h[k][j], inv);
            for col in 0..n {
                let t = f.mul(c, h[j + 1][col]);
                h[k][col] = f.sub(h[k][col], t);
            }
            for row in h.iter_mut() {
                let t = f.mul(c, row[k]);
                row[j + 1] = f.add(row[j + 1], t);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<FFElem>> = vec![vec![FFElem::ONE]];
    for m in 0..n {
        let mut next = poly_mul(f, &polys[m], &[f.neg(h[m][m]), FFElem::ONE]);
        let mut prod = FFElem::ONE;
        for i in (0..m).rev() {
            prod = f.mul(prod, h[i + 1][i]);
            let c = f.mul(h[i][m], prod);
            if !c.is_zero() {
                let term = poly_scale(f, &polys[i], c);
                next = poly_sub(f, &next, &term);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

pub fn poly_trim(p: &mut Vec<FFElem>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn poly_mul(f: &GaloisField, a: &[FFElem], b: &[FFElem]) -> Vec<FFElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FFElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

pub fn poly_scale(f: &GaloisField, a: &[FFElem], c: FFElem) -> Vec<FFElem> {
    let mut out: Vec<FFElem> = a.iter().map(|&x| f.mul(x, c)).collect();
    poly_trim(&mut out);
    out
}

pub fn poly_sub(f: &GaloisField, a: &[FFElem], b: &[FFElem]) -> Vec<FFElem> {
    let n = a.len().max(b.len());
    let mut out: Vec<FFElem> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(FFElem::ZERO);
            let y = b.get(i).copied().unwrap_or(FFElem::ZERO);
            f.sub(x, y)
        })
        .collect();
    poly_trim(&mut out);
    out
}

pub fn poly_eval(f: &GaloisField, a: &[FFElem], x: FFElem) -> FFElem {
    a.iter().rev().fold(FFElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Divide by `(x - r)`, returning the quotient; `r` must be a root.
pub fn poly_deflate(f: &GaloisField, a: &[FFElem], r: FFElem) -> Vec<FFElem> {
    let n = a.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut q = vec![FFElem::ZERO; n - 1];
    let mut carry = FFElem::ZERO;
    for i in (1..n).rev() {
        carry = f.add(a[i], f.mul(carry, r));
        q[i - 1] = carry;
    }
    q
}

/// Roots with multiplicity, sorted by encoding; `None` if the polynomial does
/// not split over `f`.
pub fn roots_with_multiplicity(f: &GaloisField, a: &[FFElem]) -> Option<Vec<(FFElem, usize)>> {
    let mut p = a.to_vec();
    poly_trim(&mut p);
    let mut out = Vec::new();
    let mut remaining = p.len().saturating_sub(1);
    if remaining == 0 {
        return Some(out);
    }
    for x in f.elements() {
        let mut mult = 0;
        while p.len() > 1 && poly_eval(f, &p, x).is_zero() {
            p = poly_deflate(f, &p, x);
            mult += 1;
        }
        if mult > 0 {
            out.push((x, mult));
            remaining -= mult;
            if remaining == 0 {
                return Some(out);
            }
        }
    }
    None
}

/// Like `roots_with_multiplicity`, trying only the given candidates.
pub fn roots_among(f: &GaloisField, a: &[FFElem], candidates: &[FFElem]) -> Option<Vec<(FFElem, usize)>> {
    let mut p = a.to_vec();
    poly_trim(&mut p);
    let mut out = Vec::new();
    for &x in candidates {
        let mut mult = 0;
        while p.len() > 1 && poly_eval(f, &p, x).is_zero() {
            p = poly_deflate(f, &p, x);
            mult += 1;
        }
        if mult > 0 {
            out.push((x, mult));
        }
    }
    (p.len() <= 1).then_some(out)
}
