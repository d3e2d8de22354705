//! Randomized invariant suites behind `phimod selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use phimod::arith::gcd_u64;
use phimod::classify::classify;
use phimod::decompose::{decompose_i, decompose_ii, decompose_iii};
use phimod::matrix::Matrix;
use phimod::module::{base_change, make_standard, StandardModule};
use phimod::rb::rb_reduce;
use phimod::{Error, FFElem, FieldConfig, LaurentSeries};

use crate::{parse_list, Failure, Opts, Out};

const FIELDS: [(u32, u32); 6] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)];

struct Case {
    cfg: FieldConfig,
    d: usize,
    n: i64,
    a: FFElem,
}

impl Case {
    fn standard(&self) -> Result<StandardModule, Error> {
        make_standard(&self.cfg, self.d, self.n, self.a)
    }

    fn to_json(&self) -> Value {
        match self.standard() {
            Ok(s) => s.module.to_json(),
            Err(_) => json!({"cfg": self.cfg.to_json(), "d": self.d, "n": self.n}),
        }
    }
}

fn random_cfg(rng: &mut ChaCha8Rng, max_q: u32, bs: &[u64]) -> Option<FieldConfig> {
    let fields: Vec<_> = FIELDS.iter().filter(|(p, m)| p.pow(*m) <= max_q).collect();
    if fields.is_empty() || bs.is_empty() {
        return None;
    }
    let &(p, m) = fields[rng.gen_range(0..fields.len())];
    let s = rng.gen_range(0..m);
    let b = bs[rng.gen_range(0..bs.len())];
    FieldConfig::new(p, m, s, b, None).ok()
}

fn random_elem(rng: &mut ChaCha8Rng, cfg: &FieldConfig, nonzero: bool) -> FFElem {
    let f = cfg.field();
    loop {
        let c: Vec<u32> = (0..cfg.m()).map(|_| rng.gen_range(0..cfg.p())).collect();
        let x = f.from_coeffs(&c).expect("coefficients below p");
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, cfg: &FieldConfig, from: i64, deg: i64) -> LaurentSeries {
    let c: Vec<FFElem> = (from..=deg).map(|_| random_elem(rng, cfg, false)).collect();
    LaurentSeries::from_parts(from, c, None)
}

/// `L U` with `L` unit lower triangular and `U` upper triangular with nonzero
/// constant diagonal, polynomial entries of degree at most 2.
pub fn random_unit(rng: &mut ChaCha8Rng, cfg: &FieldConfig, d: usize) -> Matrix {
    let l = Matrix::from_fn(d, d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => LaurentSeries::one(),
        std::cmp::Ordering::Greater => random_poly(rng, cfg, 0, 2),
        std::cmp::Ordering::Less => LaurentSeries::exact_zero(),
    });
    let u = Matrix::from_fn(d, d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => {
            let c = random_elem(rng, cfg, true);
            LaurentSeries::constant(c).add(&random_poly(rng, cfg, 1, 2), cfg.field())
        }
        std::cmp::Ordering::Less => random_poly(rng, cfg, 0, 2),
        std::cmp::Ordering::Greater => LaurentSeries::exact_zero(),
    });
    l.mul(&u, cfg.field())
}

fn rb_suite(bs: &[u64]) -> Result<usize, Value> {
    let mut count = 0;
    for &b in bs {
        for den in 1..=50i64 {
            if gcd_u64(den as u64, b) != 1 {
                continue;
            }
            for num in 0..den {
                // least element of {frac(b^s num/den)} by brute force
                let mut x = num;
                let mut least = num;
                for _ in 0..den {
                    x = x * b as i64 % den;
                    least = least.min(x);
                }
                let r = rb_reduce(num, den, b).map_err(|e| json!({"b": b, "num": num, "den": den, "error": e.code()}))?;
                let g = gcd_u64(least as u64, den as u64).max(1) as i64;
                let want = if least == 0 { (0, 1) } else { (least / g, den / g) };
                let digits_ok = {
                    let w = r.digits();
                    let l = w.len();
                    l as u64 == r.length() && (1..l).filter(|k| l % k == 0).all(|k| (0..l).any(|i| w[i] != w[(i + k) % l]))
                };
                let red = want.1 as u64;
                let mut order = 1u64;
                let mut pw = b % red;
                while pw != 1 % red {
                    pw = pw * b % red;
                    order += 1;
                }
                let length_ok = order == r.length();
                if (r.num(), r.den()) != want || !digits_ok || !length_ok {
                    return Err(json!({"b": b, "num": num, "den": den, "got": r.to_json()}));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

enum Verdict {
    Pass,
    Skip,
    Fail(String),
}

fn invariance(case: &Case, p: &Matrix, prec: i64) -> Verdict {
    let Ok(std) = case.standard() else { return Verdict::Skip };
    let base = match classify(&std.module, prec) {
        Ok(r) => r,
        Err(Error::PrecisionExhausted(_) | Error::FieldTooSmall(_) | Error::StateSpaceExceeded(_)) => {
            return Verdict::Skip
        }
        Err(e) => return Verdict::Fail(format!("classify: {e}")),
    };
    let moved = match base_change(&std.module, p, prec + 32) {
        Ok(m) => m,
        Err(e) => return Verdict::Fail(format!("base change: {e}")),
    };
    match classify(&moved, prec) {
        Ok(r) if r.constituents == base.constituents => Verdict::Pass,
        Ok(_) => Verdict::Fail("constituents differ after a unit base change".into()),
        Err(Error::PrecisionExhausted(_) | Error::BoundViolated { .. }) => Verdict::Skip,
        Err(e) => Verdict::Fail(format!("classify after base change: {e}")),
    }
}

fn certificate(case: &Case, dprime: usize, nprime: i64, check: i64) -> Verdict {
    let Ok(std) = case.standard() else { return Verdict::Skip };
    let t = (case.d / dprime) as u64;
    let p = case.cfg.p() as u64;
    let res = if !case.cfg.sigma_is_identity() {
        decompose_i(&std, dprime, nprime, check)
    } else if t == p && case.a == FFElem::ONE {
        decompose_iii(&std, dprime, nprime, check).and_then(|dec| {
            if dec.flag_is_stable() { Ok(dec) } else { Err(Error::Internal("flag is not stable".into())) }
        })
    } else if gcd_u64(t, p) == 1 {
        decompose_ii(&std, dprime, nprime, check)
    } else {
        return Verdict::Skip;
    };
    match res {
        Ok(_) => Verdict::Pass,
        Err(Error::FieldTooSmall(_)) => Verdict::Skip,
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn fail_doc(suite: &str, seed: u64, msg: String, module: Value, extra: Value) -> Value {
    json!({"status": "fail", "suite": suite, "seed": seed, "message": msg, "module": module, "detail": extra})
}

pub fn run(o: &Opts) -> Out {
    let bs: Vec<u64> = if o.bs.trim().is_empty() {
        Vec::new()
    } else {
        parse_list(&o.bs, "bs")?.into_iter().map(u64::from).collect()
    };
    if bs.iter().any(|&b| b < 2) {
        return Err(Failure::Input("--bs entries must be at least 2".into()));
    }
    let prec = o.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);

    let rb_cases = match rb_suite(&bs) {
        Ok(c) => c,
        Err(detail) => return Ok(fail_doc("rb_orbit", o.seed, "class differs from orbit enumeration".into(), Value::Null, detail)),
    };

    let mut inv = (0usize, 0usize);
    let mut dec = (0usize, 0usize);
    if o.max_d > 0 {
        for _ in 0..o.cases {
            let Some(cfg) = random_cfg(&mut rng, o.max_q, &bs) else { break };
            let d = rng.gen_range(1..=o.max_d);
            let n = rng.gen_range(0..=6);
            let a = random_elem(&mut rng, &cfg, true);
            let case = Case { cfg: cfg.clone(), d, n, a };
            let p = random_unit(&mut rng, &cfg, d);
            match invariance(&case, &p, prec) {
                Verdict::Pass => inv.0 += 1,
                Verdict::Skip => inv.1 += 1,
                Verdict::Fail(msg) => {
                    // shrink n while the failure persists, then try without the base change
                    let mut small = case;
                    while small.n > 0 {
                        let next = Case { cfg: small.cfg.clone(), d: small.d, n: small.n - 1, a: small.a };
                        if matches!(invariance(&next, &p, prec), Verdict::Fail(_)) { small = next } else { break }
                    }
                    let ident = Matrix::identity(small.d);
                    let witness = if matches!(invariance(&small, &ident, prec), Verdict::Fail(_)) { ident } else { p };
                    return Ok(fail_doc(
                        "base_change_invariance",
                        o.seed,
                        msg,
                        small.to_json(),
                        json!({"P": witness.to_json(small.cfg.field())}),
                    ));
                }
            }

            // a decomposable instance: n = n' (b^d - 1)/(b^{d'} - 1) for a proper divisor d'
            let divisors: Vec<usize> = (1..d).filter(|k| d % k == 0).collect();
            if divisors.is_empty() {
                continue;
            }
            let dprime = divisors[rng.gen_range(0..divisors.len())];
            let nprime = rng.gen_range(0..=3i64);
            let b = cfg.b() as i64;
            let n = nprime * (b.pow(d as u32) - 1) / (b.pow(dprime as u32) - 1);
            let a = if cfg.sigma_is_identity() && rng.gen_bool(0.5) { FFElem::ONE } else { random_elem(&mut rng, &cfg, true) };
            let case = Case { cfg, d, n, a };
            match certificate(&case, dprime, nprime, prec / 2) {
                Verdict::Pass => dec.0 += 1,
                Verdict::Skip => dec.1 += 1,
                Verdict::Fail(msg) => {
                    return Ok(fail_doc(
                        "decomposition_certificates",
                        o.seed,
                        msg,
                        case.to_json(),
                        json!({"dprime": dprime, "nprime": nprime}),
                    ))
                }
            }
        }
    }
    Ok(json!({
        "status": "pass",
        "seed": o.seed,
        "suites": {
            "rb_orbit": {"cases": rb_cases},
            "base_change_invariance": {"cases": inv.0, "skipped": inv.1},
            "decomposition_certificates": {"cases": dec.0, "skipped": dec.1},
        },
    }))
}
