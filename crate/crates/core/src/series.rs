//! Truncated Laurent series over a finite field with absolute-precision
//! tracking, and the twisted endomorphism `phi(sum a_n u^n) = sum sigma(a_n) u^{bn}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FFElem, FieldConfig, GaloisField};

/// Absolute precision: `Some(N)` means known modulo `u^N`, `None` means exact.
pub type Prec = Option<i64>;

fn min_prec(a: Prec, b: Prec) -> Prec {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_prec(a: Prec, k: i64) -> Prec {
    a.map(|x| x.saturating_add(k))
}

/// A Laurent series `sum_{i} coeffs[i] u^{val + i} + O(u^prec)`.
///
/// Normalized: `coeffs` has no leading or trailing zeros and every stored
/// exponent is below `prec`. An empty `coeffs` is the zero series (no valuation).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<FFElem>,
    prec: Prec,
}

impl LaurentSeries {
    pub fn zero(prec: Prec) -> Self {
        LaurentSeries { val: 0, coeffs: Vec::new(), prec }
    }

    pub fn exact_zero() -> Self {
        Self::zero(None)
    }

    pub fn one() -> Self {
        Self::monomial(FFElem::ONE, 0)
    }

    /// Exact `c u^e`.
    pub fn monomial(c: FFElem, e: i64) -> Self {
        Self::from_parts(e, vec![c], None)
    }

    pub fn constant(c: FFElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_parts(val: i64, coeffs: Vec<FFElem>, prec: Prec) -> Self {
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.val = 0;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if let Some(n) = self.prec {
            if self.val >= n {
                self.coeffs.clear();
                self.val = 0;
                return;
            }
            let keep = (n - self.val) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Lower bound on the valuation of the true value: the valuation when
    /// nonzero, the precision (or +inf) when zero.
    pub fn val_bound(&self) -> Prec {
        if self.is_zero() {
            self.prec
        } else {
            Some(self.val)
        }
    }

    /// Nonzero coefficients as a dense slice starting at the valuation.
    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> FFElem {
        if self.is_zero() || e < self.val {
            return FFElem::ZERO;
        }
        self.coeffs.get((e - self.val) as usize).copied().unwrap_or(FFElem::ZERO)
    }

    pub fn leading(&self) -> Option<FFElem> {
        self.coeffs.first().copied()
    }

    /// Largest exponent carrying a stored coefficient plus one (0 for zero).
    pub fn end(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.val + self.coeffs.len() as i64
        }
    }

    pub fn truncate(&self, n: i64) -> Self {
        Self::from_parts(self.val, self.coeffs.clone(), min_prec(self.prec, Some(n)))
    }

    /// Known to vanish modulo `u^n`.
    pub fn is_zero_mod(&self, n: i64) -> bool {
        match self.val_bound() {
            None => true,
            Some(v) => v >= n,
        }
    }

    pub fn add(&self, other: &Self, f: &GaloisField) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if self.is_zero() {
            return Self::from_parts(other.val, other.coeffs.clone(), prec);
        }
        if other.is_zero() {
            return Self::from_parts(self.val, self.coeffs.clone(), prec);
        }
        let lo = self.val.min(other.val);
        let mut hi = self.end().max(other.end());
        if let Some(n) = prec {
            hi = hi.min(n);
        }
        if hi <= lo {
            return Self::zero(prec);
        }
        let mut out = vec![FFElem::ZERO; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e < hi {
                out[(e - lo) as usize] = c;
            }
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let e = other.val + i as i64;
            if e < hi {
                let slot = &mut out[(e - lo) as usize];
                *slot = f.add(*slot, c);
            }
        }
        Self::from_parts(lo, out, prec)
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self, f: &GaloisField) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: FFElem, f: &GaloisField) -> Self {
        if c.is_zero() {
            return Self::exact_zero();
        }
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            val: if self.is_zero() { 0 } else { self.val + k },
            coeffs: self.coeffs.clone(),
            prec: add_prec(self.prec, k),
        }
    }

    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        // prec(xy) = min(prec x + val y, prec y + val x)
        let bound = |p: Prec, v: Prec| match (p, v) {
            (Some(a), Some(v)) => Some(a.saturating_add(v)),
            _ => None,
        };
        let prec = min_prec(
            bound(self.prec, other.val_bound()),
            bound(other.prec, self.val_bound()),
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let lo = self.val + other.val;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(n) = prec {
            if n <= lo {
                return Self::zero(prec);
            }
            len = len.min((n - lo) as usize);
        }
        let mut out = vec![FFElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            let lim = (len - i).min(other.coeffs.len());
            for (j, &b) in other.coeffs[..lim].iter().enumerate() {
                if !b.is_zero() {
                    let slot = &mut out[i + j];
                    *slot = f.add(*slot, f.mul(a, b));
                }
            }
        }
        Self::from_parts(lo, out, prec)
    }

    /// Inverse. An exact non-monomial input is expanded to absolute precision
    /// `cap`; otherwise the result carries relative precision `prec - val`.
    pub fn inv(&self, f: &GaloisField, cap: i64) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::precision("inverse of a series that vanishes to its precision"))?;
        let c0inv = f.inv(self.coeffs[0]).expect("leading coefficient nonzero");
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(c0inv, -v));
        }
        let target = match self.prec {
            Some(n) => n - 2 * v,
            None => cap,
        };
        let rel = target + v;
        if rel < 1 {
            return Err(Error::precision(format!(
                "inverse would carry {rel} significant coefficients"
            )));
        }
        let rel = rel as usize;
        let mut out = Vec::with_capacity(rel);
        out.push(c0inv);
        let neg_c0inv = f.neg(c0inv);
        for k in 1..rel {
            let mut acc = FFElem::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[j], out[k - j]));
            }
            out.push(f.mul(acc, neg_c0inv));
        }
        Ok(Self::from_parts(-v, out, Some(target)))
    }

    pub fn div(&self, other: &Self, f: &GaloisField, cap: i64) -> Result<Self> {
        Ok(self.mul(&other.inv(f, cap)?, f))
    }

    /// `phi`: coefficient of `u^n` goes to `sigma(c)` at `u^{bn}`.
    pub fn phi(&self, cfg: &FieldConfig) -> Self {
        self.phi_pow(cfg, 1)
    }

    /// `phi^k` for `k >= 0`.
    pub fn phi_pow(&self, cfg: &FieldConfig, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let bk = (cfg.b() as i64).checked_pow(k).expect("phi power overflows");
        let prec = self.prec.map(|n| n.saturating_mul(bk));
        if self.is_zero() {
            return Self::zero(prec);
        }
        let mut out = vec![FFElem::ZERO; (self.coeffs.len() - 1) * bk as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * bk as usize] = cfg.sigma_pow(c, k as i64);
        }
        Self::from_parts(self.val * bk, out, prec)
    }

    /// Apply a coefficient map (e.g. a field embedding or `sigma^j`).
    pub fn map_coeffs(&self, g: impl Fn(FFElem) -> FFElem) -> Self {
        Self::from_parts(self.val, self.coeffs.iter().map(|&c| g(c)).collect(), self.prec)
    }

    pub fn to_json(&self, f: &GaloisField) -> Value {
        json!({
            "v": if self.is_zero() { 0 } else { self.val },
            "prec": self.prec,
            "coeffs": self.coeffs.iter().map(|&c| f.to_coeffs(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, f: &GaloisField) -> Result<Self> {
        let val = v
            .get("v")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::InvalidInput("series.v must be an integer".into()))?;
        let prec = match v.get("prec") {
            None | Some(Value::Null) => None,
            Some(x) => Some(
                x.as_i64()
                    .ok_or_else(|| Error::InvalidInput("series.prec must be an integer or null".into()))?,
            ),
        };
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("series.coeffs must be an array".into()))?
            .iter()
            .map(|c| f.elem_from_json(c))
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = prec {
            if !coeffs.iter().all(|c| c.is_zero()) && val + (coeffs.len() as i64) > n {
                let last_nonzero = coeffs.iter().rposition(|c| !c.is_zero()).unwrap() as i64;
                if val + last_nonzero >= n {
                    return Err(Error::InvalidInput(format!(
                        "series has a coefficient at u^{} beyond its precision {n}",
                        val + last_nonzero
                    )));
                }
            }
        }
        Ok(Self::from_parts(val, coeffs, prec))
    }
}
