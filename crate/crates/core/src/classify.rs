//! Jordan-Holder constituents of an etale phi-module.
//!
//! Each round finds `z` with `phi^Gamma(z) = u^n z`, splits off the
//! phi-stable span `W` of `z, phi(z), ...` by a unimodular base change, reads
//! the constituents of `W` and continues with the quotient.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::eigen::{big_to_json, find_eigen};
use crate::error::{Error, Result};
use crate::field::{Embedding, FFElem, FieldConfig, GaloisField, MAX_FIELD_ORDER};
use crate::fqlin::{charpoly, nullspace, rank, roots_among, rref, Row};
use crate::lift::{lift_bound_holds, rationalize_to_subfield};
use crate::matrix::{to_exact, vec_min_val, vec_prec, vec_shift, vec_truncate, Matrix, SVec};
use crate::module::PhiModule;
use crate::rb::{rb_reduce_periodic, RbClass};
use crate::series::LaurentSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub r: RbClass,
    /// Present exactly when sigma is the identity.
    pub a: Option<FFElem>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct JHReport {
    /// Field the `a`-values live in: the input field, or the least extension
    /// where they all exist.
    pub cfg: FieldConfig,
    pub embedding: Embedding,
    pub dim: usize,
    pub precision: i64,
    /// Sorted by `(r, a)`.
    pub constituents: Vec<Constituent>,
    pub witness_chain: Vec<Value>,
}

impl JHReport {
    pub fn total_dim(&self) -> u64 {
        self.constituents.iter().map(|c| c.multiplicity as u64 * c.r.length()).sum()
    }

    pub fn to_json(&self) -> Value {
        let f = self.cfg.field();
        json!({
            "field": self.cfg.to_json(),
            "dim": self.dim,
            "precision": self.precision,
            "total_dim": self.total_dim(),
            "constituents": self.constituents.iter().map(|c| json!({
                "r": c.r.to_json(),
                "a": c.a.map(|x| f.elem_to_json(x)),
                "multiplicity": c.multiplicity,
            })).collect::<Vec<_>>(),
            "witness_chain": self.witness_chain,
        })
    }
}

/// Cap on the internal working precision of one splitting step.
const MAX_WORK: i64 = 1 << 14;

/// Characteristic polynomial of the cyclic shift on the relations quotient,
/// waiting for a field where it splits.
struct Pending {
    r: RbClass,
    charpoly: Vec<FFElem>,
    /// Roots are `k`-th roots of unity.
    k: u64,
}

/// Minimal-valuation coordinate of a vector (lowest index on ties).
fn pivot_of(v: &[LaurentSeries]) -> Option<usize> {
    let mut best: Option<(i64, usize)> = None;
    for (i, x) in v.iter().enumerate() {
        if let Some(val) = x.valuation() {
            if best.map_or(true, |(bv, _)| val < bv) {
                best = Some((val, i));
            }
        }
    }
    best.map(|(_, i)| i)
}

/// Saturated basis of the K-span of `z, phi(z), ...`: each vector has a 1 at
/// its pivot coordinate and 0 at the other pivots.
///
/// With `phi^Gamma z = u^n z` the pivot valuations of independent vectors sum
/// to at most `n (b^d - 1)/((b^Gamma - 1)(b - 1))`, so a remainder vanishing
/// modulo `u^{bound+1}` is a dependency.
fn stable_span(m: &PhiModule, z: &SVec, prec: i64, bound: i64) -> Result<(Vec<SVec>, Vec<usize>)> {
    let f = m.cfg().field();
    let d = m.dim();
    let dep_level = bound + 1;
    let mut basis: Vec<SVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut raw = vec_truncate(z, prec);
    for _ in 0..=d {
        let mut v = raw.clone();
        for (w, &c) in basis.iter().zip(&pivots) {
            let k = v[c].clone();
            v = v.iter().zip(w).map(|(x, y)| x.sub(&k.mul(y, f), f)).collect();
        }
        if vec_prec(&v).is_some_and(|p| p < dep_level) {
            return Err(Error::precision("span vectors lost too much precision"));
        }
        if v.iter().all(|x| x.is_zero_mod(dep_level)) {
            return Ok((basis, pivots));
        }
        if basis.len() == d {
            return Err(Error::Internal("phi-stable span exceeds the dimension".into()));
        }
        let c = pivot_of(&v).expect("nonzero vector has a pivot");
        let inv = v[c].inv(f, prec)?;
        let v: SVec = v.iter().map(|x| x.mul(&inv, f)).collect();
        for w in basis.iter_mut() {
            let k = w[c].clone();
            *w = w.iter().zip(&v).map(|(x, y)| x.sub(&k.mul(y, f), f)).collect();
        }
        basis.push(v);
        pivots.push(c);
        raw = vec_truncate(&m.phi_vec(&raw), prec);
    }
    Err(Error::Internal("phi-stable span did not close".into()))
}

/// Exact `P = [W | e_T]` and `P^{-1}` for a pivot-normalized basis of `W`.
fn unimodular_completion(f: &GaloisField, d: usize, basis: &[SVec], pivots: &[usize]) -> (Matrix, Matrix) {
    let w = basis.len();
    let others: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
    let mut p = Matrix::zeros(d, d);
    for (a, v) in basis.iter().enumerate() {
        for i in 0..d {
            let x = if pivots.contains(&i) {
                if pivots[a] == i { LaurentSeries::one() } else { LaurentSeries::exact_zero() }
            } else {
                to_exact(&v[i])
            };
            p.set(i, a, x);
        }
    }
    for (b, &t) in others.iter().enumerate() {
        p.set(t, w + b, LaurentSeries::one());
    }
    // x -> (x_S, x_T - A_T x_S)
    let mut pinv = Matrix::zeros(d, d);
    for (a, &s) in pivots.iter().enumerate() {
        pinv.set(a, s, LaurentSeries::one());
    }
    for (b, &t) in others.iter().enumerate() {
        pinv.set(w + b, t, LaurentSeries::one());
        for (a, &s) in pivots.iter().enumerate() {
            pinv.set(w + b, s, p.get(t, a).neg(f));
        }
    }
    (p, pinv)
}

/// Characteristic polynomial of the cyclic shift `T` on `F_q^k / U`, where `U`
/// holds the F_q-relations among `w_s = u^{-n0 (1 + b^l + ...)} phi^{s l}(z)`.
fn shift_charpoly(
    m: &PhiModule,
    z: &SVec,
    l: u64,
    k: u64,
    n0: i64,
    prec: i64,
    expected_rank: usize,
) -> Result<Vec<FFElem>> {
    let f = m.cfg().field();
    let d = m.dim();
    let mut ws: Vec<SVec> = vec![vec_truncate(z, prec)];
    for _ in 1..k {
        let mut y = ws.last().unwrap().clone();
        for _ in 0..l {
            y = vec_truncate(&m.phi_vec(&y), prec + n0);
        }
        ws.push(vec_truncate(&vec_shift(&y, -n0), prec));
    }
    let lo = ws.iter().filter_map(|w| vec_min_val(w)).min().unwrap_or(0);
    let hi = ws.iter().filter_map(|w| vec_prec(w)).min().unwrap_or(prec);
    if hi - lo < 8 {
        return Err(Error::precision("too few known coefficients to find relations"));
    }
    let mut rows: Vec<Row> = Vec::new();
    for i in 0..d {
        for e in lo..hi {
            let row: Row = ws.iter().map(|w| w[i].coeff(e)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let k = k as usize;
    let relations = if rows.is_empty() {
        (0..k).map(|j| (0..k).map(|i| if i == j { FFElem::ONE } else { FFElem::ZERO }).collect()).collect()
    } else {
        nullspace(f, &rows, k)
    };
    if k - relations.len() != expected_rank {
        return Err(Error::Internal(format!(
            "relation space has codimension {} but the span predicts {expected_rank}",
            k - relations.len()
        )));
    }
    let mut u: Vec<Row> = relations;
    let dim_u = u.len();
    if dim_u > 0 {
        let mut stacked = u.clone();
        stacked.extend(u.iter().map(|r| (0..k).map(|i| r[(i + k - 1) % k]).collect::<Row>()));
        if rank(f, &stacked) != dim_u {
            return Err(Error::Internal("relations are not stable under the shift".into()));
        }
    }
    let piv = if dim_u > 0 { rref(f, &mut u) } else { Vec::new() };
    let free: Vec<usize> = (0..k).filter(|c| !piv.contains(c)).collect();
    let reduce = |mut x: Row| -> Row {
        for (r, &pc) in u.iter().zip(&piv) {
            let c = x[pc];
            if !c.is_zero() {
                for j in 0..k {
                    x[j] = f.sub(x[j], f.mul(c, r[j]));
                }
            }
        }
        free.iter().map(|&j| x[j]).collect()
    };
    // column j of the quotient matrix is the class of T(e_{free[j]}) = e_{free[j]+1}
    let cols: Vec<Row> = free
        .iter()
        .map(|&j| {
            let mut x = vec![FFElem::ZERO; k];
            x[(j + 1) % k] = FFElem::ONE;
            reduce(x)
        })
        .collect();
    let n = free.len();
    let mat: Vec<Row> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    Ok(charpoly(f, &mat))
}

fn big_to_i64(n: &BigUint) -> Result<i64> {
    n.to_i64().ok_or_else(|| Error::Overflow("exponent exceeds 64 bits".into()))
}

pub fn classify(m: &PhiModule, prec: i64) -> Result<JHReport> {
    let cfg = m.cfg().clone();
    let f = cfg.field();
    let b = cfg.b();
    let check = prec / 2;
    let mut chain: Vec<Value> = Vec::new();

    // make G integral: base change by u^k multiplies G by u^{(b-1)k}
    let mut cur = m.clone();
    if let Some(v) = cur.matrix().val_bound().filter(|&v| v < 0) {
        let k = (-v + b as i64 - 2) / (b as i64 - 1);
        let g = cur.matrix().shift((b as i64 - 1) * k);
        cur = PhiModule::new(cfg.clone(), g)?;
        chain.push(json!({"kind": "rescale", "k": k}));
    }
    let (mut cur, lift) = rationalize_to_subfield(&cur, prec, check)?;
    if let Some(l) = lift {
        chain.push(json!({"kind": "truncate", "N": prec, "lift": l.to_json(&cur)}));
    }

    let mut fixed: Vec<Constituent> = Vec::new();
    let mut pending: Vec<Pending> = Vec::new();
    loop {
        let d = cur.dim();
        let gamma = cur.gamma();
        let mut eig = find_eigen(&cur, prec, check)?;
        let bd = BigUint::from(b).pow(d as u32) - BigUint::one();
        let bg = BigUint::from(b).pow(eig.delta as u32) - BigUint::one();
        let bound = big_to_i64(&(&eig.n * bd / (bg * BigUint::from(b - 1))))?;
        let work = prec.max(2 * bound + gamma + 16);
        if work > MAX_WORK {
            return Err(Error::precision(format!("splitting needs {work} coefficients")));
        }
        if work > prec {
            eig = find_eigen(&cur, work, check)?;
        }
        let r = rb_reduce_periodic(&eig.n, eig.delta, b)?;
        let l = r.length();
        let (basis, pivots) = stable_span(&cur, &eig.z, work, bound)?;
        let w = basis.len();
        if w as u64 % l != 0 {
            return Err(Error::Internal(format!("span of dimension {w} is not a multiple of l(r) = {l}")));
        }
        let (p, pinv) = unimodular_completion(f, d, &basis, &pivots);
        let gp = pinv.mul(cur.matrix(), f).mul(&p.phi(&cfg).truncate(work), f).truncate(work);
        let split_val = gp.block(w, d, 0, w).val_bound().unwrap_or(work);
        if w < d && !lift_bound_holds(split_val, gamma, b, cfg.p()) {
            return Err(Error::precision(format!(
                "split block vanishes only to order {split_val} (gamma = {gamma})"
            )));
        }
        chain.push(json!({
            "kind": "split",
            "dim": d,
            "gamma": gamma,
            "Gamma": eig.delta,
            "n": big_to_json(&eig.n),
            "r": r.to_json(),
            "sub_dim": w,
            "split_valuation": split_val,
            "eigen_residual_valuation": eig.residual_valuation,
        }));
        if cfg.sigma_is_identity() {
            let bl = BigUint::from(b).pow(l as u32) - BigUint::one();
            let bg = BigUint::from(b).pow(eig.delta as u32) - BigUint::one();
            let n0 = big_to_i64(&(&eig.n * &bl / &bg))?;
            let k = eig.delta / l;
            let cp = shift_charpoly(&cur, &eig.z, l, k, n0, work, w / l as usize)?;
            pending.push(Pending { r: r.clone(), charpoly: cp, k });
        } else {
            fixed.push(Constituent { r: r.clone(), a: None, multiplicity: w / l as usize });
        }
        if w == d {
            break;
        }
        let q = gp.block(w, d, w, d).to_exact();
        let next = PhiModule::new(cfg.clone(), q)?;
        let sub = PhiModule::new(cfg.clone(), gp.block(0, w, 0, w).to_exact())?;
        if sub.gamma() + next.gamma() != gamma {
            return Err(Error::Internal("determinant valuations do not add up across the split".into()));
        }
        cur = next;
    }

    let (out_cfg, embedding, mut all) = if pending.is_empty() {
        (cfg.clone(), Embedding::identity(cfg.field_arc().clone()), fixed)
    } else {
        resolve_roots(&cfg, &pending)?
    };
    let mut merged: BTreeMap<(RbClass, Option<FFElem>), usize> = BTreeMap::new();
    for c in all.drain(..) {
        *merged.entry((c.r, c.a)).or_default() += c.multiplicity;
    }
    let constituents: Vec<Constituent> =
        merged.into_iter().map(|((r, a), multiplicity)| Constituent { r, a, multiplicity }).collect();
    let report = JHReport { cfg: out_cfg, embedding, dim: m.dim(), precision: prec, constituents, witness_chain: chain };
    if report.total_dim() != m.dim() as u64 {
        return Err(Error::Internal("constituent dimensions do not add up".into()));
    }
    Ok(report)
}

/// Least extension where every pending characteristic polynomial splits.
fn resolve_roots(cfg: &FieldConfig, pending: &[Pending]) -> Result<(FieldConfig, Embedding, Vec<Constituent>)> {
    let mut e = 1u32;
    while (cfg.q() as u128).pow(e) <= MAX_FIELD_ORDER as u128 {
        let (ext, emb) = cfg.extend(e)?;
        let f = ext.field();
        let mut out = Vec::new();
        let mut ok = true;
        for pd in pending {
            let poly: Vec<FFElem> = pd.charpoly.iter().map(|&c| emb.map(c)).collect();
            let candidates = f.nth_roots(FFElem::ONE, pd.k);
            match roots_among(f, &poly, &candidates) {
                Some(roots) => out.extend(roots.into_iter().map(|(a, mult)| Constituent {
                    r: pd.r.clone(),
                    a: Some(a),
                    multiplicity: mult,
                })),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok((ext, emb, out));
        }
        e += 1;
    }
    Err(Error::FieldTooSmall("eigenvalues need an extension beyond the supported size".into()))
}

/// Simple iff exactly one constituent, of multiplicity one, with `l(r) = dim`.
pub fn is_simple(m: &PhiModule, prec: i64) -> Result<(bool, JHReport)> {
    let rep = classify(m, prec)?;
    let simple = rep.constituents.len() == 1
        && rep.constituents[0].multiplicity == 1
        && rep.constituents[0].r.length() == m.dim() as u64;
    Ok((simple, rep))
}

/// Whether `D(r1, a1) ~ D(r2, a2)`: equal lengths and some `s` in `[0, l)` with
/// `n1 = b^s n2 (mod b^l - 1)` and `a1 = sigma^s(a2)`.
pub fn simples_equal(
    cfg: &FieldConfig,
    r1: &RbClass,
    a1: Option<FFElem>,
    r2: &RbClass,
    a2: Option<FFElem>,
) -> Result<bool> {
    let want_a = cfg.sigma_is_identity();
    if a1.is_some() != a2.is_some() || a1.is_some() != want_a {
        return Err(Error::MismatchedSigmaMode);
    }
    if r1.b() != cfg.b() || r2.b() != cfg.b() {
        return Err(Error::InvalidInput("classes use a different b than the field configuration".into()));
    }
    if r1.length() != r2.length() {
        return Ok(false);
    }
    let modulus = r1.period_modulus().max(1);
    let (n1, n2) = (r1.canonical_n() % modulus, r2.canonical_n() % modulus);
    let mut bs = 1u128;
    for s in 0..r1.length() {
        let twisted_a = a2.map(|a| cfg.sigma_pow(a, s as i64));
        if n1 == n2 * bs % modulus && a1 == twisted_a {
            return Ok(true);
        }
        bs = bs * cfg.b() as u128 % modulus;
    }
    Ok(false)
}
