//! Pigeonhole search for `z` with `phi^Gamma(z) = u^n z`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{to_exact, unit_vec, vec_min_val, vec_prec, vec_shift, vec_sub, vec_truncate, SVec};
use crate::module::PhiModule;
use crate::series::LaurentSeries;

/// Iteration cap for the repetition search when `q^{dc}` is larger.
pub const MAX_SEARCH_STEPS: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct EigenData {
    /// `Gamma = j - i`.
    pub delta: u64,
    /// `n = sum_{k in [i, j)} b^{j-1-k} n_k`.
    pub n: BigUint,
    pub z: SVec,
    /// First index `i` of the repeated reduction.
    pub start: usize,
    /// `n_0, ..., n_{j-1}`.
    pub steps: Vec<i64>,
    /// Reduction level: states are compared modulo `u^c`.
    pub c: i64,
    pub check_precision: i64,
    /// Least valuation of `u^{-n} phi^Gamma(z) - z`; `None` when zero to working precision.
    pub residual_valuation: Option<i64>,
}

/// Serialize a big integer as a JSON number.
pub fn big_to_json(n: &BigUint) -> Value {
    serde_json::from_str(&n.to_string()).expect("decimal integer is valid JSON")
}

impl EigenData {
    /// The cycle exponents `n_i, ..., n_{j-1}`.
    pub fn cycle(&self) -> &[i64] {
        &self.steps[self.start..]
    }

    pub fn to_json(&self, m: &PhiModule) -> Value {
        let f = m.cfg().field();
        json!({
            "Gamma": self.delta,
            "n": big_to_json(&self.n),
            "z": self.z.iter().map(|x| x.to_json(f)).collect::<Vec<_>>(),
            "start": self.start,
            "steps": self.steps,
            "c": self.c,
            "check_precision": self.check_precision,
            "residual_valuation": self.residual_valuation,
        })
    }
}

fn state_key(x: &[LaurentSeries], c: i64) -> Vec<u32> {
    let mut key = Vec::with_capacity(x.len() * c as usize);
    for s in x {
        for e in 0..c {
            key.push(s.coeff(e).encoding());
        }
    }
    key
}

/// `u^{-n_k} phi_D(y)` modulo `u^work`.
fn step(m: &PhiModule, y: &[LaurentSeries], nk: i64, work: i64) -> SVec {
    let cfg = m.cfg();
    let py: SVec = y.iter().map(|s| s.phi(cfg).truncate(work + nk)).collect();
    let gy = m.matrix().mul_vec(&py, cfg.field());
    vec_truncate(&vec_shift(&gy, -nk), work)
}

/// `u^{-n} phi_D^Gamma` as the composition of the normalized steps of the cycle.
pub fn psi(m: &PhiModule, cycle: &[i64], y: &[LaurentSeries], work: i64) -> SVec {
    cycle.iter().fold(y.to_vec(), |acc, &nk| step(m, &acc, nk, work))
}

pub fn find_eigen(m: &PhiModule, work: i64, check: i64) -> Result<EigenData> {
    let cfg = m.cfg();
    let g = m.matrix();
    if !g.is_integral() {
        return Err(Error::InvalidInput("eigenvector search needs G with entries in k[[u]]".into()));
    }
    let d = m.dim();
    let gamma = m.gamma();
    let b = cfg.b() as i64;
    let c = gamma / (b - 1) + 1;
    let states = (cfg.q() as f64).powf((d as i64 * c) as f64);
    let cap = if states >= MAX_SEARCH_STEPS as f64 { MAX_SEARCH_STEPS } else { states as u64 + 1 };

    let mut x = vec_truncate(&unit_vec(d, 0), c);
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut xs: Vec<SVec> = Vec::new();
    let mut steps: Vec<i64> = Vec::new();
    let (start, end) = loop {
        let key = state_key(&x, c);
        if let Some(&i) = seen.get(&key) {
            break (i, xs.len());
        }
        if xs.len() as u64 >= cap {
            return Err(Error::StateSpaceExceeded(cap));
        }
        seen.insert(key, xs.len());
        let y = m.phi_vec(&x);
        let ni = vec_min_val(&y)
            .filter(|&v| vec_prec(&y).map_or(true, |p| v < p))
            .ok_or_else(|| Error::precision("phi of a lattice vector vanishes to its precision"))?;
        if ni > gamma || ni < 0 {
            return Err(Error::Internal(format!("n_{} = {ni} is outside [0, gamma = {gamma}]", xs.len())));
        }
        xs.push(x);
        steps.push(ni);
        x = vec_truncate(&vec_shift(&y, -ni), c);
    };
    let delta = (end - start) as u64;
    let bb = BigUint::from(cfg.b());
    let mut n = BigUint::zero();
    for &nk in &steps[start..end] {
        n = n * &bb + BigUint::from(nk as u64);
    }
    let bg = bb.pow(delta as u32) - BigUint::one();
    if n.clone() * (&bb - BigUint::one()) > BigUint::from(gamma as u64) * &bg {
        return Err(Error::Internal("n exceeds gamma (b^Gamma - 1)/(b - 1)".into()));
    }
    if n >= BigUint::from(c as u64) * &bg {
        return Err(Error::Internal("n is not below c (b^Gamma - 1)".into()));
    }

    let cycle = &steps[start..end];
    let work = work.max(check);
    let mut z: SVec = xs[start].iter().map(to_exact).collect();
    let mut residual = None;
    for _ in 0..64 {
        let next = psi(m, cycle, &z, work);
        let diff = vec_sub(&next, &z, cfg.field());
        if diff.iter().all(|s| s.is_zero()) {
            residual = Some(diff);
            break;
        }
        z = next;
    }
    let diff = residual.ok_or_else(|| Error::precision("eigenvector iteration did not settle"))?;
    let known = vec_prec(&diff).unwrap_or(i64::MAX);
    if known < check {
        return Err(Error::precision(format!("eigenvector known only modulo u^{known}")));
    }
    if !vec_sub(&z, &xs[start], cfg.field()).iter().all(|s| s.is_zero_mod(1)) {
        return Err(Error::Internal("eigenvector is not congruent to x_i modulo u".into()));
    }
    Ok(EigenData {
        delta,
        n,
        z,
        start,
        steps,
        c,
        check_precision: check,
        residual_valuation: vec_min_val(&diff),
    })
}
