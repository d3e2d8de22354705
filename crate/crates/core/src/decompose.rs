//! Explicit decompositions of `D(d, n, a)` into copies of `D(d', n', .)`.
//!
//! With `t = d/d'` and `n/(b^d - 1) = n'/(b^{d'} - 1)`, the basis vectors are
//! `sum_s c_s u^{-E(s,i)} e_{s d' + i}` with `E(s,i) = n' b^i (b^{s d'} - 1)/(b^{d'} - 1)`
//! and coefficients `c_s` depending on the case.

use serde_json::{json, Value};

use crate::arith::{binomial_mod, lcm_u64};
use crate::error::{Error, Result};
use crate::field::{Embedding, FFElem, FieldConfig, MAX_FIELD_ORDER};
use crate::fqlin;
use crate::matrix::Matrix;
use crate::module::{certify_base_change, lemma1_witness, standard_matrix, Certificate, PhiModule, StandardModule};
use crate::series::LaurentSeries;

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub kind: &'static str,
    /// Realized field (possibly an extension of the input field).
    pub cfg: FieldConfig,
    pub embedding: Embedding,
    /// The input module over `cfg`.
    pub module: PhiModule,
    pub dprime: usize,
    pub nprime: i64,
    /// `a`-value of each block, in basis order.
    pub block_a: Vec<FFElem>,
    /// Determinant of the coefficient matrix whose invertibility makes the families a basis.
    pub independence_det: FFElem,
    /// Matrix of phi in the new basis.
    pub transformed: Matrix,
    pub certificate: Certificate,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        let f = self.cfg.field();
        let t = self.block_a.len();
        let blocks: Vec<Value> = (0..t)
            .map(|j| {
                let r0 = j * self.dprime;
                json!({
                    "a": f.elem_to_json(self.block_a[j]),
                    "matrix": self.transformed.block(r0, r0 + self.dprime, r0, r0 + self.dprime).to_json(f),
                })
            })
            .collect();
        json!({
            "kind": self.kind,
            "field": self.cfg.to_json(),
            "dprime": self.dprime,
            "nprime": self.nprime,
            "blocks": blocks,
            "independence_det": f.elem_to_json(self.independence_det),
            "transformed": self.transformed.to_json(f),
            "certificate": self.certificate.to_json(&self.cfg),
        })
    }
}

struct Shape {
    t: usize,
}

fn check_shape(std: &StandardModule, dprime: usize, nprime: i64) -> Result<Shape> {
    let b = std.module.cfg().b() as i128;
    if dprime == 0 || std.d % dprime != 0 {
        return Err(Error::InvalidInput(format!("d' = {dprime} must divide d = {}", std.d)));
    }
    let overflow = || Error::Overflow("b^d does not fit".into());
    let bd = b.checked_pow(std.d as u32).ok_or_else(overflow)? - 1;
    let bdp = b.checked_pow(dprime as u32).ok_or_else(overflow)? - 1;
    if (std.n as i128) * bdp != (nprime as i128) * bd {
        return Err(Error::RatioMismatch);
    }
    Ok(Shape { t: std.d / dprime })
}

/// `E(s, i) = n' b^i (b^{s d'} - 1)/(b^{d'} - 1)`.
fn exponent(b: u64, dprime: usize, nprime: i64, s: usize, i: usize) -> Result<i64> {
    let b = b as i128;
    let overflow = || Error::Overflow("decomposition exponent".into());
    let num = b.checked_pow((s * dprime) as u32).ok_or_else(overflow)? - 1;
    let den = b.checked_pow(dprime as u32).ok_or_else(overflow)? - 1;
    let e = (nprime as i128)
        .checked_mul(b.checked_pow(i as u32).ok_or_else(overflow)?)
        .and_then(|x| x.checked_mul(num / den))
        .ok_or_else(overflow)?;
    i64::try_from(e).map_err(|_| overflow())
}

/// Columns `f_i(c)` for each family `c` (coefficient of `e_{s d' + i}` is `coef(j, s, i)`),
/// ordered family-major.
fn basis(
    cfg: &FieldConfig,
    d: usize,
    dprime: usize,
    nprime: i64,
    families: usize,
    coef: impl Fn(usize, usize, usize) -> FFElem,
) -> Result<Matrix> {
    let t = d / dprime;
    let mut p = Matrix::zeros(d, d);
    for j in 0..families {
        for i in 0..dprime {
            for s in 0..t {
                let c = coef(j, s, i);
                let e = exponent(cfg.b(), dprime, nprime, s, i)?;
                p.set(s * dprime + i, j * dprime + i, LaurentSeries::monomial(c, -e));
            }
        }
    }
    Ok(p)
}

fn extend_to(cfg: &FieldConfig, e: u32) -> Result<(FieldConfig, Embedding)> {
    cfg.extend(e).map_err(|err| match err {
        Error::FieldTooLarge(q) => Error::FieldTooSmall(format!("the needed extension has order {q}")),
        other => other,
    })
}

/// Case sigma != id: `D(d, n, a) ~ D(d', n')^{d/d'}`.
pub fn decompose_i(std: &StandardModule, dprime: usize, nprime: i64, check: i64) -> Result<Decomposition> {
    let cfg0 = std.module.cfg();
    if cfg0.sigma_is_identity() {
        return Err(Error::SigmaIsIdentity);
    }
    let Shape { t } = check_shape(std, dprime, nprime)?;
    // reduce to a = 1, then make sure the fixed field of sigma^d is realized
    let (cfg1, emb1, p1) = if std.a == FFElem::ONE {
        (cfg0.clone(), Embedding::identity(cfg0.field_arc().clone()), Matrix::identity(std.d))
    } else {
        let w = lemma1_witness(std, check)?;
        (w.cfg, w.embedding, w.certificate.p)
    };
    let sd = cfg1.s() as u64 * std.d as u64;
    let want = lcm_u64(cfg1.m() as u64, sd);
    if (cfg1.p() as u128).pow(want as u32) > MAX_FIELD_ORDER as u128 {
        return Err(Error::FieldTooSmall(format!("fixed field of sigma^{} needs F_{{p^{want}}}", std.d)));
    }
    let (cfg, emb2) = extend_to(&cfg1, (want / cfg1.m() as u64) as u32)?;
    let embedding = emb1.then(&emb2);
    let f = cfg.field();
    let theta = f.subfield_generator(sd as u32);
    let alphas: Vec<FFElem> = (0..t).map(|j| f.pow(theta, j as i128)).collect();
    let m0: Vec<Vec<FFElem>> = (0..t)
        .map(|s| alphas.iter().map(|&a| cfg.sigma_pow(a, (s * dprime) as i64)).collect())
        .collect();
    let independence_det = fqlin::det(f, &m0);
    if independence_det.is_zero() {
        return Err(Error::Internal("conjugate matrix of the field basis is singular".into()));
    }
    let p2 = basis(&cfg, std.d, dprime, nprime, t, |j, s, i| {
        cfg.sigma_pow(alphas[j], (s * dprime + i) as i64)
    })?;
    let p1 = p1.map(|x| x.map_coeffs(|c| emb2.map(c)));
    let p = p1.mul(&p2, f);
    let module = std.module.embed(&cfg, &embedding);
    let blocks: Vec<Matrix> = (0..t).map(|_| standard_matrix(dprime, nprime, FFElem::ONE)).collect();
    let expected = Matrix::block_diag(&blocks);
    let (certificate, out) = certify_base_change("decompose_i", &module, &p, &expected, check)?;
    Ok(Decomposition {
        kind: "i",
        cfg,
        embedding,
        module,
        dprime,
        nprime,
        block_a: vec![FFElem::ONE; t],
        independence_det,
        transformed: out.matrix().clone(),
        certificate,
    })
}

/// Case sigma = id, `gcd(t, p) = 1`: `D(d, n, a) ~ sum over alpha^t = a of D(d', n', alpha)`.
pub fn decompose_ii(std: &StandardModule, dprime: usize, nprime: i64, check: i64) -> Result<Decomposition> {
    let cfg0 = std.module.cfg();
    if !cfg0.sigma_is_identity() {
        return Err(Error::SigmaNotIdentity);
    }
    let Shape { t } = check_shape(std, dprime, nprime)?;
    if t as u64 % cfg0.p() as u64 == 0 {
        return Err(Error::TNotCoprimeToP(t as u64));
    }
    let mut e = 1u32;
    let (cfg, embedding, roots) = loop {
        if (cfg0.q() as u128).pow(e) > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooSmall(format!("x^{t} - a does not split in a supported extension")));
        }
        let (c, emb) = extend_to(cfg0, e)?;
        let roots = c.field().nth_roots(emb.map(std.a), t as u64);
        if roots.len() == t {
            break (c, emb, roots);
        }
        e += 1;
    };
    let f = cfg.field();
    let vander: Vec<Vec<FFElem>> = (0..t)
        .map(|s| roots.iter().map(|&a| f.pow(a, (t - 1 - s) as i128)).collect())
        .collect();
    let independence_det = fqlin::det(f, &vander);
    if independence_det.is_zero() {
        return Err(Error::Internal("Vandermonde matrix of the roots is singular".into()));
    }
    let p = basis(&cfg, std.d, dprime, nprime, t, |j, s, _| f.pow(roots[j], (t - 1 - s) as i128))?;
    let module = std.module.embed(&cfg, &embedding);
    let blocks: Vec<Matrix> = roots.iter().map(|&a| standard_matrix(dprime, nprime, a)).collect();
    let expected = Matrix::block_diag(&blocks);
    let (certificate, out) = certify_base_change("decompose_ii", &module, &p, &expected, check)?;
    Ok(Decomposition {
        kind: "ii",
        cfg,
        embedding,
        module,
        dprime,
        nprime,
        block_a: roots,
        independence_det,
        transformed: out.matrix().clone(),
        certificate,
    })
}

/// Expected matrix in the basis `f_{i,j}` (family `j` major): diagonal blocks
/// `D(d', n')`, and `phi(f_{d'-1,m})` has `(-1)^{m-mu} C(m, mu) u^{n'}` on `f_{0,mu}`.
pub fn flag_matrix(cfg: &FieldConfig, dprime: usize, nprime: i64) -> Matrix {
    let p = cfg.p() as usize;
    let f = cfg.field();
    let mut g = Matrix::block_diag(&vec![standard_matrix(dprime, nprime, FFElem::ONE); p]);
    for m in 0..p {
        for mu in 0..m {
            let c = binomial_mod(m as u64, mu as u64, p as u64) as i64;
            let c = if (m - mu) % 2 == 1 { -c } else { c };
            g.set(mu * dprime, m * dprime + dprime - 1, LaurentSeries::monomial(f.from_int(c), nprime));
        }
    }
    g
}

/// Case sigma = id, `t = p`, `a = 1`: a flag `D_1 < ... < D_p` with every quotient `D(d', n')`.
pub fn decompose_iii(std: &StandardModule, dprime: usize, nprime: i64, check: i64) -> Result<Decomposition> {
    let cfg = std.module.cfg().clone();
    if !cfg.sigma_is_identity() {
        return Err(Error::SigmaNotIdentity);
    }
    let Shape { t } = check_shape(std, dprime, nprime)?;
    if t as u32 != cfg.p() {
        return Err(Error::TNotP(t as u64));
    }
    if std.a != FFElem::ONE {
        return Err(Error::ANotOne);
    }
    let f = cfg.field();
    // s^j over F_p with 0^0 = 1
    let pw = |s: usize, j: usize| f.pow(f.from_int(s as i64), j as i128);
    let vander: Vec<Vec<FFElem>> = (0..t).map(|s| (0..t).map(|j| pw(s, j)).collect()).collect();
    let independence_det = fqlin::det(f, &vander);
    if independence_det.is_zero() {
        return Err(Error::Internal("power matrix over F_p is singular".into()));
    }
    let p = basis(&cfg, std.d, dprime, nprime, t, |j, s, _| pw(s, j))?;
    let expected = flag_matrix(&cfg, dprime, nprime);
    let (certificate, out) = certify_base_change("decompose_iii", &std.module, &p, &expected, check)?;
    Ok(Decomposition {
        kind: "iii",
        embedding: Embedding::identity(cfg.field_arc().clone()),
        cfg,
        module: std.module.clone(),
        dprime,
        nprime,
        block_a: vec![FFElem::ONE; t],
        independence_det,
        transformed: out.matrix().clone(),
        certificate,
    })
}

impl Decomposition {
    /// For case (iii): `dim D_m = m d'` and `phi(D_m)` stays in `D_m`, read off
    /// the transformed matrix.
    pub fn flag_is_stable(&self) -> bool {
        let dp = self.dprime;
        let t = self.block_a.len();
        (0..t).all(|m| {
            let cols = m * dp..(m + 1) * dp;
            cols.into_iter()
                .all(|c| ((m + 1) * dp..t * dp).all(|r| self.transformed.get(r, c).is_zero()))
        })
    }
}
