//! Finite fields `F_{p^m}` with table-backed arithmetic, the automorphism
//! `sigma = Frob^s`, and embeddings into extensions.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::{factor, gcd_u64, is_prime};
use crate::error::{Error, Result};

/// Largest field order backed by log/exp tables.
pub const MAX_ORDER: u64 = 1 << 16;

/// Largest supported field order (elements are encoded in a `u32`).
pub const MAX_FIELD_ORDER: u64 = u32::MAX as u64;

/// An element of `F_{p^m}`, encoded as `sum c_i p^i` where `c_i` is the
/// coefficient of `x^i` in the modulus basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FFElem(u32);

impl FFElem {
    pub const ZERO: FFElem = FFElem(0);
    pub const ONE: FFElem = FFElem(1);

    pub fn from_encoding(v: u32) -> Self {
        FFElem(v)
    }

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// `F_{p^m} = F_p[x]/(modulus)`. Orders up to `MAX_ORDER` use log/exp tables;
/// larger orders (still encodable in `u32`) fall back to polynomial arithmetic.
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    place: Vec<u32>,
    primitive: u32,
    tables: Option<Tables>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}, modulus={:?})", self.p, self.m, self.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for GaloisField {}

// ---- dense polynomials over F_p, little-endian ----

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `n` for `gcd(a, n) = 1`, `n >= 2`.
fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(n as i128) as u64
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                let idx = top - df + i;
                r[idx] = (r[idx] + p - c * fi % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = poly_rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility over F_p: no factor of degree <= deg/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 0..m / 2 {
        h = poly_powmod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically least monic irreducible of degree `m` over `F_p`,
/// ordering by `(c_{m-1}, ..., c_0)`.
pub fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = (p64).pow(m);
    for v in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut t = v;
        for _ in 0..m {
            f.push(t % p64);
            t /= p64;
        }
        f.push(1);
        if is_irreducible(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl GaloisField {
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::CompositeP(p as u64));
        }
        if m == 0 {
            return Err(Error::BadDegree);
        }
        let q128 = (p as u128).pow(m);
        if q128 > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q128));
        }
        let q = q128 as u32;
        let modulus = match modulus {
            Some(f) => {
                let f64v: Vec<u64> = f.iter().map(|&c| c as u64).collect();
                if f.len() != m as usize + 1
                    || f.iter().any(|&c| c >= p)
                    || f[m as usize] != 1
                    || !is_irreducible(&f64v, p as u64)
                {
                    return Err(Error::ReducibleModulus(m));
                }
                f
            }
            None => default_modulus(p, m),
        };
        let mut place = Vec::with_capacity(m as usize);
        let mut pw = 1u32;
        for _ in 0..m {
            place.push(pw);
            pw = pw.wrapping_mul(p);
        }
        let mut gf = GaloisField { p, m, q, modulus, place, primitive: 1, tables: None };
        gf.primitive = gf.find_primitive();
        if q as u64 <= MAX_ORDER {
            gf.tables = Some(gf.build_tables());
        }
        Ok(gf)
    }

    fn digits(&self, v: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut t = v;
        for _ in 0..self.m {
            out.push((t % self.p) as u64);
            t /= self.p;
        }
        trim(&mut out);
        out
    }

    fn undigits(&self, d: &[u64]) -> u32 {
        d.iter()
            .enumerate()
            .map(|(i, &c)| c as u32 * self.place[i])
            .sum()
    }

    fn modulus_u64(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let f = self.modulus_u64();
        self.undigits(&poly_mulmod(&self.digits(a), &self.digits(b), &f, self.p as u64))
    }

    fn pow_slow(&self, a: u32, e: u64) -> u32 {
        let f = self.modulus_u64();
        self.undigits(&poly_powmod(&self.digits(a), e, &f, self.p as u64))
    }

    /// Least encoding of multiplicative order `q - 1`.
    fn find_primitive(&self) -> u32 {
        let order = (self.q - 1) as u64;
        if order == 1 {
            return 1;
        }
        let primes: Vec<u64> = factor(order).into_iter().map(|(l, _)| l).collect();
        (2..self.q)
            .find(|&c| primes.iter().all(|&l| self.pow_slow(c, order / l) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let p = self.p as u64;
        let q = self.q;
        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let d: Vec<u64> = self.digits(v).iter().map(|&c| (p - c) % p).collect();
                self.undigits(&d)
            })
            .collect();
        let add = (self.p != 2 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_slow(a, b);
                }
            }
            t
        });
        let order = q - 1;
        let f = self.modulus_u64();
        let g = self.digits(self.primitive);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let enc = self.undigits(&cur);
            exp.push(enc);
            log[enc as usize] = i;
            cur = poly_mulmod(&cur, &g, &f, p);
        }
        Tables { exp, log, neg, add }
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for i in 0..self.m as usize {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.place[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let d: Vec<u64> = self.digits(a).iter().map(|&c| (p - c) % p).collect();
        self.undigits(&d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.m
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The least primitive element (by encoding).
    pub fn primitive(&self) -> FFElem {
        FFElem(self.primitive)
    }

    /// The residue class of `x` in `F_p[x]/(modulus)`.
    pub fn gen(&self) -> FFElem {
        if self.m == 1 {
            FFElem(self.neg_slow(self.modulus[0]))
        } else {
            FFElem(self.place[1])
        }
    }

    pub fn from_int(&self, c: i64) -> FFElem {
        FFElem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FFElem> {
        if c.len() > self.m as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidInput(format!(
                "coefficient vector {c:?} is not an element of F_{}^{}",
                self.p, self.m
            )));
        }
        Ok(FFElem(
            c.iter().enumerate().map(|(i, &x)| x * self.place[i]).sum(),
        ))
    }

    pub fn to_coeffs(&self, x: FFElem) -> Vec<u32> {
        let mut t = x.0;
        (0..self.m)
            .map(|_| {
                let d = t % self.p;
                t /= self.p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> {
        (0..self.q).map(FFElem)
    }

    #[inline]
    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        if self.p == 2 {
            return FFElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match self.tables.as_ref().and_then(|t| t.add.as_ref()) {
            Some(t) => FFElem(t[(a.0 * self.q + b.0) as usize]),
            None => FFElem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FFElem) -> FFElem {
        if self.p == 2 {
            return a;
        }
        match &self.tables {
            Some(t) => FFElem(t.neg[a.0 as usize]),
            None => FFElem(self.neg_slow(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        if a.0 == 0 || b.0 == 0 {
            return FFElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
                FFElem(t.exp[e as usize])
            }
            None => FFElem(self.mul_slow(a.0, b.0)),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FFElem) -> Option<FFElem> {
        if a.0 == 0 {
            return None;
        }
        Some(self.pow(a, -1))
    }

    pub fn div(&self, a: FFElem, b: FFElem) -> Option<FFElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FFElem, e: i128) -> FFElem {
        if a.0 == 0 {
            return if e == 0 { FFElem::ONE } else { FFElem::ZERO };
        }
        let n = (self.q - 1) as i128;
        let e = e.rem_euclid(n);
        match &self.tables {
            Some(t) => {
                let k = (t.log[a.0 as usize] as i128 * e).rem_euclid(n);
                FFElem(t.exp[k as usize])
            }
            None => FFElem(self.pow_slow(a.0, e as u64)),
        }
    }

    /// `x^{p^j}`.
    pub fn frobenius(&self, x: FFElem, j: i64) -> FFElem {
        if x.0 == 0 {
            return x;
        }
        let j = j.rem_euclid(self.m as i64) as u32;
        let n = (self.q - 1) as u64;
        let mut e = 1u64;
        for _ in 0..j {
            e = e * self.p as u64 % n.max(1);
        }
        self.pow(x, e as i128)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FFElem) -> u64 {
        let mut ord = (self.q - 1) as u64;
        for (l, _) in factor(ord) {
            while ord % l == 0 && self.pow(a, (ord / l) as i128) == FFElem::ONE {
                ord /= l;
            }
        }
        ord
    }

    /// Discrete logarithm to the base `primitive()` (baby-step giant-step).
    pub fn dlog(&self, a: FFElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[a.0 as usize] as u64);
        }
        let n = (self.q - 1) as u64;
        let step = (n as f64).sqrt().ceil() as u64 + 1;
        let g = self.primitive();
        let mut baby = std::collections::HashMap::with_capacity(step as usize);
        let mut cur = FFElem::ONE;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, g);
        }
        let giant = self.pow(g, -(step as i128));
        let mut y = a;
        for i in 0..=step {
            if let Some(&j) = baby.get(&y) {
                return Some((i * step + j) % n);
            }
            y = self.mul(y, giant);
        }
        None
    }

    /// All `x` in this field with `x^t = a`, sorted by encoding.
    pub fn nth_roots(&self, a: FFElem, t: u64) -> Vec<FFElem> {
        assert!(t >= 1);
        if a.is_zero() {
            return vec![FFElem::ZERO];
        }
        let n = (self.q - 1) as u64;
        let k = self.dlog(a).expect("nonzero element has a logarithm");
        let g = crate::arith::gcd_u64(t, n);
        if k % g != 0 {
            return Vec::new();
        }
        // x = prim^y with t y = k (mod n): one solution y0 plus multiples of n/g
        let (tg, kg, ng) = (t / g, k / g, n / g);
        let y0 = if ng == 1 {
            0
        } else {
            let inv = mod_inverse(tg % ng, ng);
            (kg as u128 * inv as u128 % ng as u128) as u64
        };
        let prim = self.primitive();
        let mut out: Vec<FFElem> =
            (0..g).map(|i| self.pow(prim, (y0 + i * ng) as i128)).collect();
        out.sort();
        out
    }

    /// Generator of the multiplicative group of the subfield `F_{p^k}`, `k | m`.
    pub fn subfield_generator(&self, k: u32) -> FFElem {
        debug_assert_eq!(self.m % k, 0);
        let sub = (self.p as u64).pow(k) - 1;
        let cof = (self.q as u64 - 1) / sub;
        self.pow(self.primitive(), cof as i128)
    }

    /// Elements of the subfield `F_{p^k}`, zero first then powers of its generator.
    pub fn subfield_elements(&self, k: u32) -> Vec<FFElem> {
        let g = self.subfield_generator(k);
        let n = (self.p as u64).pow(k) - 1;
        let mut out = vec![FFElem::ZERO];
        let mut cur = FFElem::ONE;
        for _ in 0..n {
            out.push(cur);
            cur = self.mul(cur, g);
        }
        out
    }

    /// Evaluate an F_p polynomial (little-endian integer coefficients) at `x`.
    pub fn eval_fp_poly(&self, f: &[u32], x: FFElem) -> FFElem {
        let mut acc = FFElem::ZERO;
        for &c in f.iter().rev() {
            acc = self.add(self.mul(acc, x), self.from_int(c as i64));
        }
        acc
    }

    pub fn elem_to_json(&self, x: FFElem) -> Value {
        json!(self.to_coeffs(x))
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<FFElem> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("field element must be an array".into()))?;
        let mut c = Vec::with_capacity(arr.len());
        for x in arr {
            let k = x
                .as_u64()
                .ok_or_else(|| Error::InvalidInput("coefficient must be a nonnegative integer".into()))?;
            c.push(u32::try_from(k).map_err(|_| Error::InvalidInput("coefficient too large".into()))?);
        }
        while c.len() > self.m as usize && c.last() == Some(&0) {
            c.pop();
        }
        self.from_coeffs(&c)
    }
}

/// The ambient data `(p, m, s, b)`: the field `F_{p^m}`, `sigma = Frob^s`,
/// and the series twist `u -> u^b`.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    gf: Arc<GaloisField>,
    s: u32,
    b: u64,
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.b == other.b && *self.gf == *other.gf
    }
}
impl Eq for FieldConfig {}

impl FieldConfig {
    pub fn new(p: u32, m: u32, s: u32, b: u64, modulus: Option<Vec<u32>>) -> Result<Self> {
        if b < 2 {
            return Err(Error::BadTwist(b));
        }
        let gf = GaloisField::new(p, m, modulus)?;
        if s >= m {
            return Err(Error::InvalidInput(format!("s = {s} must satisfy 0 <= s < m = {m}")));
        }
        Ok(FieldConfig { gf: Arc::new(gf), s, b })
    }

    pub fn field(&self) -> &GaloisField {
        &self.gf
    }
    pub fn field_arc(&self) -> &Arc<GaloisField> {
        &self.gf
    }
    pub fn p(&self) -> u32 {
        self.gf.p
    }
    pub fn m(&self) -> u32 {
        self.gf.m
    }
    pub fn q(&self) -> u32 {
        self.gf.q
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn sigma_is_identity(&self) -> bool {
        self.s == 0
    }

    /// Order of `sigma` on the realized field: `m / gcd(s, m)`.
    pub fn sigma_order(&self) -> u32 {
        self.gf.m / gcd_u64(self.s as u64, self.gf.m as u64) as u32
    }

    /// `sigma^power(x) = x^{p^{s * power mod m}}`.
    pub fn sigma_pow(&self, x: FFElem, power: i64) -> FFElem {
        let j = (self.s as i128 * power as i128).rem_euclid(self.gf.m as i128) as i64;
        self.gf.frobenius(x, j)
    }

    pub fn sigma(&self, x: FFElem) -> FFElem {
        self.sigma_pow(x, 1)
    }

    /// Degree over F_p of the fixed field of `sigma^d` inside the realized field.
    pub fn fixed_field_degree(&self, d: u64) -> u32 {
        gcd_u64(self.s as u64 * d, self.gf.m as u64) as u32
    }

    /// The realization over `F_{p^{m e}}` with the same `s` and `b`, together with
    /// the embedding of the current field.
    pub fn extend(&self, e: u32) -> Result<(FieldConfig, Embedding)> {
        if e == 0 {
            return Err(Error::BadDegree);
        }
        if e == 1 {
            return Ok((self.clone(), Embedding::identity(self.gf.clone())));
        }
        let big = FieldConfig::new(self.p(), self.m() * e, self.s, self.b, None)?;
        let emb = Embedding::new(self.gf.clone(), big.gf.clone())?;
        Ok((big, emb))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p(),
            "m": self.m(),
            "s": self.s,
            "b": self.b,
            "modulus": self.gf.modulus,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| -> Result<u64> {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidInput(format!("cfg.{k} must be a nonnegative integer")))
        };
        let p = get("p")? as u32;
        let m = get("m")? as u32;
        let s = get("s")? as u32;
        let b = get("b")?;
        let modulus = match v.get("modulus") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|c| c as u32)
                            .ok_or_else(|| Error::InvalidInput("modulus coefficients must be integers".into()))
                    })
                    .collect::<Result<Vec<u32>>>()?,
            ),
            _ => return Err(Error::InvalidInput("cfg.modulus must be an array".into())),
        };
        FieldConfig::new(p, m, s, b, modulus)
    }
}

/// A field embedding `F_{p^m} -> F_{p^{me}}` given by the image of `x`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<GaloisField>,
    target: Arc<GaloisField>,
    gen_image: FFElem,
}

impl Embedding {
    pub fn identity(gf: Arc<GaloisField>) -> Self {
        let g = gf.gen();
        Embedding { source: gf.clone(), target: gf, gen_image: g }
    }

    /// The embedding sending `x` to the least root (by encoding) of the source
    /// modulus in the target.
    pub fn new(source: Arc<GaloisField>, target: Arc<GaloisField>) -> Result<Self> {
        if source.p != target.p || target.m % source.m != 0 {
            return Err(Error::InvalidInput("target is not an extension of source".into()));
        }
        let root = target
            .subfield_elements(source.m)
            .into_iter()
            .filter(|&y| target.eval_fp_poly(&source.modulus, y).is_zero())
            .min()
            .ok_or_else(|| Error::Internal("modulus has no root in the extension".into()))?;
        Ok(Embedding { source, target, gen_image: root })
    }

    pub fn source(&self) -> &Arc<GaloisField> {
        &self.source
    }
    pub fn target(&self) -> &Arc<GaloisField> {
        &self.target
    }

    pub fn map(&self, x: FFElem) -> FFElem {
        let c = self.source.to_coeffs(x);
        let mut acc = FFElem::ZERO;
        for &ci in c.iter().rev() {
            acc = self
                .target
                .add(self.target.mul(acc, self.gen_image), self.target.from_int(ci as i64));
        }
        acc
    }

    /// Composition `other . self`.
    pub fn then(&self, other: &Embedding) -> Embedding {
        Embedding {
            source: self.source.clone(),
            target: other.target.clone(),
            gen_image: other.map(self.gen_image),
        }
    }
}
