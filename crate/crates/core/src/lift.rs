//! Solving `P G phi(P)^{-1} = H` for `H = G (mod u^N)` by the contraction
//! `P_{i+1} = H phi(P_i) G^{-1}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{residual_check, Certificate, PhiModule};

/// One iteration of the contraction: the update `P_{i+1} - P_i` must vanish
/// to order `predicted`; `observed` is `None` when it is zero to working precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStep {
    pub predicted: i64,
    pub observed: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    /// Unit over `k[[u]]`, `P = I (mod u)`.
    pub p: Matrix,
    /// Congruence level `val(H - G)`; `None` when `H = G` exactly.
    pub n: Option<i64>,
    pub ledger: Vec<LiftStep>,
    /// Residual `P G - H phi(P)`.
    pub certificate: Certificate,
}

impl LiftResult {
    pub fn to_json(&self, m: &PhiModule) -> Value {
        json!({
            "N": self.n,
            "ledger": self.ledger.iter().map(|s| json!({"predicted": s.predicted, "observed": s.observed})).collect::<Vec<_>>(),
            "certificate": self.certificate.to_json(m.cfg()),
        })
    }
}

/// `N (b - 1) > max(b, p) gamma`.
pub fn lift_bound_holds(n: i64, gamma: i64, b: u64, p: u32) -> bool {
    let k = b.max(p as u64) as i128;
    (n as i128) * (b as i128 - 1) > k * gamma as i128
}

fn bound_text(gamma: i64, b: u64, p: u32) -> String {
    format!("{}*{gamma}/{}", b.max(p as u64), b - 1)
}

pub fn lift_base_change(m: &PhiModule, h: &Matrix, check: i64) -> Result<LiftResult> {
    let cfg = m.cfg();
    let f = cfg.field();
    let g = m.matrix();
    let d = m.dim();
    if h.rows() != d || h.cols() != d {
        return Err(Error::InvalidInput("H has the wrong shape".into()));
    }
    if !g.is_integral() || !h.is_integral() {
        return Err(Error::InvalidInput("G and H must have entries in k[[u]]".into()));
    }
    let gamma = m.gamma();
    let diff = h.sub(g, f);
    let n = diff.val_bound();
    let ident = Matrix::identity(d);
    let Some(n) = n else {
        let residual_valuation = residual_check(&ident.mul(g, f), &h.mul(&ident, f), cfg, check)?;
        return Ok(LiftResult {
            p: ident.clone(),
            n: None,
            ledger: Vec::new(),
            certificate: Certificate { kind: "lift".into(), p: ident, check_precision: check, residual_valuation },
        });
    };
    if !lift_bound_holds(n, gamma, cfg.b(), cfg.p()) {
        return Err(Error::BoundViolated { n, bound: bound_text(gamma, cfg.b(), cfg.p()) });
    }
    let work = check + gamma + 8;
    let ginv = g.inverse(f, work + 2 * gamma + 8)?;
    let b = cfg.b() as i64;
    let mut p = ident;
    let mut predicted = n - gamma;
    let mut ledger = Vec::new();
    for _ in 0..64 {
        let next = h.mul(&p.phi(cfg), f).mul(&ginv, f).truncate(work);
        let delta = next.sub(&p, f);
        let observed = delta.min_valuation();
        if let Some(v) = observed {
            if v < predicted {
                return Err(Error::Internal(format!(
                    "lift update has valuation {v}, predicted at least {predicted}"
                )));
            }
        }
        ledger.push(LiftStep { predicted, observed });
        p = next;
        if observed.is_none() || predicted >= work {
            break;
        }
        predicted = predicted.saturating_mul(b) - gamma;
    }
    let residual_valuation = residual_check(&p.mul(g, f), &h.mul(&p.phi(cfg), f), cfg, check)?;
    Ok(LiftResult {
        p: p.clone(),
        n: Some(n),
        ledger,
        certificate: Certificate { kind: "lift".into(), p, check_precision: check, residual_valuation },
    })
}

/// Replace `G` by the exact polynomial matrix `G mod u^N`; when that changes
/// anything, the lifting witness certifies the isomorphism.
pub fn rationalize_to_subfield(m: &PhiModule, n: i64, check: i64) -> Result<(PhiModule, Option<LiftResult>)> {
    let g = m.matrix();
    let fits = g.entries().all(|x| x.is_exact() && x.end() <= n);
    if fits {
        return Ok((m.clone(), None));
    }
    let cfg = m.cfg();
    if !lift_bound_holds(n, m.gamma(), cfg.b(), cfg.p()) {
        return Err(Error::BoundViolated { n, bound: bound_text(m.gamma(), cfg.b(), cfg.p()) });
    }
    if g.prec().is_some_and(|pr| pr < n) {
        return Err(Error::precision(format!("matrix known only modulo u^{}", g.prec().unwrap())));
    }
    let h = g.truncate(n).to_exact();
    let lift = lift_base_change(m, &h, check)?;
    let out = PhiModule::new(cfg.clone(), h)?;
    if out.gamma() != m.gamma() {
        return Err(Error::Internal("truncation moved gamma".into()));
    }
    Ok((out, Some(lift)))
}
