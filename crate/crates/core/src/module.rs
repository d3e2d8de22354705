//! Etale phi-modules given by a matrix in a basis, standard objects
//! `D(d, n, a)`, base change and isomorphism witnesses.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Embedding, FFElem, FieldConfig};
use crate::matrix::{Matrix, SVec};
use crate::norm::solve_norm_equation;
use crate::series::LaurentSeries;

/// Default working precision (absolute).
pub const DEFAULT_PRECISION: i64 = 64;

/// Serialized basis convention: `(phi(e_1), ..., phi(e_d)) = (e_1, ..., e_d) G`.
pub const CONVENTION: &str = "phi(e)=e*G";

/// A module `K^d` with `phi(x) = G phi(x)` on coordinate columns; `gamma = val(det G)`.
#[derive(Clone, Debug)]
pub struct PhiModule {
    cfg: FieldConfig,
    g: Matrix,
    gamma: i64,
}

impl PhiModule {
    pub fn new(cfg: FieldConfig, g: Matrix) -> Result<Self> {
        if !g.is_square() || g.rows() == 0 {
            return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
        }
        let cap = g.prec().unwrap_or(DEFAULT_PRECISION) + DEFAULT_PRECISION;
        let det = g.det(cfg.field(), cap)?;
        let gamma = det.valuation().ok_or(Error::NotEtale)?;
        Ok(PhiModule { cfg, g, gamma })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn cfg(&self) -> &FieldConfig {
        &self.cfg
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    /// `phi_D` on a coordinate column: `G phi(x)`.
    pub fn phi_vec(&self, x: &[LaurentSeries]) -> SVec {
        let px: SVec = x.iter().map(|s| s.phi(&self.cfg)).collect();
        self.g.mul_vec(&px, self.cfg.field())
    }

    /// The same module with scalars extended along `emb` into `target`.
    pub fn embed(&self, target: &FieldConfig, emb: &Embedding) -> PhiModule {
        let g = self.g.map(|x| x.map_coeffs(|c| emb.map(c)));
        PhiModule { cfg: target.clone(), g, gamma: self.gamma }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cfg": self.cfg.to_json(),
            "dim": self.dim(),
            "matrix": self.g.to_json(self.cfg.field()),
            "convention": CONVENTION,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let cfg = FieldConfig::from_json(
            v.get("cfg").ok_or_else(|| Error::InvalidInput("module.cfg is missing".into()))?,
        )?;
        if let Some(c) = v.get("convention") {
            if c.as_str() != Some(CONVENTION) {
                return Err(Error::InvalidInput(format!("unsupported convention {c}")));
            }
        }
        let g = Matrix::from_json(
            v.get("matrix").ok_or_else(|| Error::InvalidInput("module.matrix is missing".into()))?,
            cfg.field(),
        )?;
        if let Some(d) = v.get("dim") {
            if d.as_u64() != Some(g.rows() as u64) {
                return Err(Error::InvalidInput("module.dim does not match the matrix".into()));
            }
        }
        PhiModule::new(cfg, g)
    }
}

/// Matrix of `D(d, n, a)`: ones below the diagonal and `a u^n` in the corner.
pub fn standard_matrix(d: usize, n: i64, a: FFElem) -> Matrix {
    let mut g = Matrix::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        g.set(i + 1, i, LaurentSeries::one());
    }
    g.set(0, d - 1, LaurentSeries::monomial(a, n));
    g
}

#[derive(Clone, Debug)]
pub struct StandardModule {
    pub d: usize,
    pub n: i64,
    pub a: FFElem,
    pub module: PhiModule,
}

pub fn make_standard(cfg: &FieldConfig, d: usize, n: i64, a: FFElem) -> Result<StandardModule> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    if n < 0 {
        return Err(Error::InvalidInput("n must be nonnegative".into()));
    }
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let module = PhiModule::new(cfg.clone(), standard_matrix(d, n, a))?;
    Ok(StandardModule { d, n, a, module })
}

/// `P^{-1} G phi(P)`. Series inverses are expanded to `cap`.
pub fn base_change(m: &PhiModule, p: &Matrix, cap: i64) -> Result<PhiModule> {
    if p.rows() != m.dim() || !p.is_square() {
        return Err(Error::InvalidInput("base change matrix has the wrong shape".into()));
    }
    let f = m.cfg.field();
    let pinv = p.inverse(f, cap)?;
    let g = pinv.mul(&m.g, f).mul(&p.phi(&m.cfg), f);
    let out = PhiModule::new(m.cfg.clone(), g).map_err(|e| match e {
        Error::NotEtale => Error::precision("base change lost the determinant"),
        e => e,
    })?;
    if p.is_integral() {
        let det = p.det(f, cap)?;
        if det.valuation() == Some(0) && out.gamma != m.gamma {
            return Err(Error::Internal("unit base change moved gamma".into()));
        }
    }
    Ok(out)
}

/// A verified base change: `P^{-1} G phi(P)` agrees with an expected matrix
/// modulo `u^check_precision`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: String,
    pub p: Matrix,
    pub check_precision: i64,
    /// Least valuation of the residual; `None` when the residual is exactly zero.
    pub residual_valuation: Option<i64>,
}

impl Certificate {
    pub fn to_json(&self, cfg: &FieldConfig) -> Value {
        json!({
            "kind": self.kind,
            "P": self.p.to_json(cfg.field()),
            "check_precision": self.check_precision,
            "residual_valuation": self.residual_valuation,
        })
    }
}

/// Check that two matrices agree modulo `u^check`, with enough known precision.
pub fn residual_check(got: &Matrix, want: &Matrix, cfg: &FieldConfig, check: i64) -> Result<Option<i64>> {
    let r = got.sub(want, cfg.field());
    if let Some(pr) = r.prec() {
        if pr < check {
            return Err(Error::precision(format!(
                "residual known only modulo u^{pr}, wanted u^{check}"
            )));
        }
    }
    if !r.is_zero_mod(check) {
        return Err(Error::Internal(format!(
            "residual has valuation {:?} below the check precision {check}",
            r.min_valuation()
        )));
    }
    Ok(r.entries().filter_map(LaurentSeries::valuation).min())
}

pub fn certify_base_change(
    kind: &str,
    m: &PhiModule,
    p: &Matrix,
    expected: &Matrix,
    check: i64,
) -> Result<(Certificate, PhiModule)> {
    let cap = check + 2 * DEFAULT_PRECISION + m.gamma;
    let got = base_change(m, p, cap)?;
    let residual_valuation = residual_check(got.matrix(), expected, &m.cfg, check)?;
    let cert = Certificate { kind: kind.into(), p: p.clone(), check_precision: check, residual_valuation };
    Ok((cert, got))
}

/// Witness that `D(d, n, a) ~ D(d, n)` when sigma is not the identity.
#[derive(Clone, Debug)]
pub struct Lemma1Witness {
    /// `sigma^d(lambda) = a^{-1} lambda` in the realized field.
    pub lambda: FFElem,
    pub ext_degree: u32,
    pub cfg: FieldConfig,
    pub embedding: Embedding,
    /// The input module with scalars extended to `cfg`.
    pub module: PhiModule,
    pub certificate: Certificate,
}

/// `P = diag(sigma^i(lambda))` with `P^{-1} G_{d,n,a} phi(P) = G_{d,n,1}`.
pub fn lemma1_witness(std: &StandardModule, check: i64) -> Result<Lemma1Witness> {
    let cfg = std.module.cfg();
    if cfg.sigma_is_identity() {
        return Err(Error::SigmaIsIdentity);
    }
    let f = cfg.field();
    let ainv = f.inv(std.a).ok_or(Error::ZeroA)?;
    let sol = solve_norm_equation(cfg, std.d as u64, ainv)?;
    let big = sol.cfg.clone();
    let module = std.module.embed(&big, &sol.embedding);
    let diag: Vec<LaurentSeries> = (0..std.d)
        .map(|i| LaurentSeries::constant(big.sigma_pow(sol.lambda, i as i64)))
        .collect();
    let p = Matrix::diag(&diag);
    let expected = standard_matrix(std.d, std.n, FFElem::ONE);
    let (certificate, _) = certify_base_change("lemma1", &module, &p, &expected, check)?;
    Ok(Lemma1Witness {
        lambda: sol.lambda,
        ext_degree: sol.ext_degree,
        cfg: big,
        embedding: sol.embedding,
        module,
        certificate,
    })
}

/// Matrix `F` of `e_i -> u^{b^i m} e'_{i+s}` from `D(d,n,a)` to `D(d,n',a')`,
/// where `e'_{j+1} = phi(e'_j)` extends the target basis.
fn twist_map(cfg: &FieldConfig, d: usize, m: i128, n2: i64, a2: FFElem, s: usize) -> Result<Matrix> {
    let b = cfg.b() as i128;
    let overflow = || Error::Overflow("twist witness exponent".into());
    // e'_j = coef * u^exp * e'_idx
    let mut basis: Vec<(FFElem, i128, usize)> = (0..d).map(|j| (FFElem::ONE, 0i128, j)).collect();
    while basis.len() < d + s {
        let (c, e, idx) = *basis.last().unwrap();
        let be = e.checked_mul(b).ok_or_else(overflow)?;
        basis.push(if idx + 1 < d {
            (cfg.sigma(c), be, idx + 1)
        } else {
            let c2 = cfg.field().mul(cfg.sigma(c), a2);
            (c2, be.checked_add(n2 as i128).ok_or_else(overflow)?, 0)
        });
    }
    let mut f = Matrix::zeros(d, d);
    let mut bi = 1i128;
    for i in 0..d {
        let (c, e, idx) = basis[i + s];
        let exp = bi.checked_mul(m).and_then(|x| x.checked_add(e)).ok_or_else(overflow)?;
        let exp = i64::try_from(exp).map_err(|_| overflow())?;
        f.set(idx, i, LaurentSeries::monomial(c, exp));
        bi = bi.checked_mul(b).ok_or_else(overflow)?;
    }
    Ok(f)
}

/// Witness that `D(d, n, a) ~ D(d, n2, a2)` under `n = b^s n2 (mod b^d - 1)`
/// and `a = sigma^s(a2)`: a monomial matrix `P` with
/// `P^{-1} G_{d,n,a} phi(P) = G_{d,n2,a2}`.
#[allow(clippy::too_many_arguments)]
pub fn lemma2_witness(
    cfg: &FieldConfig,
    d: usize,
    n: i64,
    a: FFElem,
    n2: i64,
    a2: FFElem,
    s: u32,
    check: i64,
) -> Result<Certificate> {
    if a.is_zero() || a2.is_zero() {
        return Err(Error::ZeroA);
    }
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    let b = cfg.b() as i128;
    let overflow = || Error::Overflow("b^d or b^s does not fit".into());
    let bd = b.checked_pow(d as u32).ok_or_else(overflow)? - 1;
    let bs = b.checked_pow(s).ok_or_else(overflow)?;
    let diff = (n as i128) - bs.checked_mul(n2 as i128).ok_or_else(overflow)?;
    if diff.rem_euclid(bd) != 0 {
        return Err(Error::ConditionsFail(format!("{n} is not b^{s} * {n2} modulo b^{d} - 1")));
    }
    if cfg.sigma_pow(a2, s as i64) != a {
        return Err(Error::ConditionsFail(format!("a is not sigma^{s}(a')")));
    }
    let m = diff / bd;
    let std = make_standard(cfg, d, n, a)?;
    let fmat = twist_map(cfg, d, m, n2, a2, s as usize)?;
    let p = fmat.inverse(cfg.field(), check)?;
    Ok(certify_base_change("lemma2", &std.module, &p, &standard_matrix(d, n2, a2), check)?.0)
}
