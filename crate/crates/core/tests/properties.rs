mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use phimod::classify::classify;
use phimod::lift::lift_base_change;
use phimod::matrix::Matrix;
use phimod::module::{base_change, lemma2_witness, make_standard, standard_matrix, PhiModule};
use phimod::rb::{rb_reduce, rb_reduce_periodic};
use phimod::{FFElem, FieldConfig, LaurentSeries};

const CONFIGS: [(u32, u32, u32); 8] = [(2, 1, 0), (3, 1, 0), (2, 2, 0), (2, 2, 1), (3, 2, 0), (3, 2, 1), (5, 1, 0), (2, 3, 1)];

fn config(idx: usize, b: u64) -> FieldConfig {
    let (p, m, s) = CONFIGS[idx % CONFIGS.len()];
    cfg(p, m, s, b)
}

fn series(rng: &mut ChaCha8Rng, c: &FieldConfig, prec: Option<i64>) -> LaurentSeries {
    let v = rng.gen_range(-3..4);
    let len = rng.gen_range(0..12);
    let coeffs = (0..len).map(|_| random_elem(rng, c.field(), false)).collect();
    LaurentSeries::from_parts(v, coeffs, prec.map(|p| p + v))
}

/// `U D(d, n, a) V` for random polynomial units `U`, `V`.
fn random_module(rng: &mut ChaCha8Rng, c: &FieldConfig, d: usize) -> PhiModule {
    let f = c.field();
    let n = rng.gen_range(0..=5);
    let a = random_elem(rng, f, true);
    let g = random_unit(rng, f, d).mul(&standard_matrix(d, n, a), f).mul(&random_unit(rng, f, d), f);
    PhiModule::new(c.clone(), g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_a_ring_endomorphism(seed: u64, idx in 0usize..8, b in 2u64..6, exact: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, b);
        let f = c.field();
        let prec = if exact { None } else { Some(rng.gen_range(1..20)) };
        let x = series(&mut rng, &c, prec);
        let y = series(&mut rng, &c, prec);
        let lhs = x.mul(&y, f).phi(&c);
        let rhs = x.phi(&c).mul(&y.phi(&c), f);
        prop_assert!(lhs.sub(&rhs, f).is_zero());
        prop_assert_eq!(lhs.prec(), rhs.prec());
        let lhs = x.add(&y, f).phi(&c);
        let rhs = x.phi(&c).add(&y.phi(&c), f);
        prop_assert!(lhs.sub(&rhs, f).is_zero());
        if let Some(v) = x.valuation() {
            prop_assert_eq!(x.phi(&c).valuation(), Some(b as i64 * v));
        }
    }

    #[test]
    fn higher_precision_agrees_on_the_overlap(seed: u64, idx in 0usize..8, lo in 4i64..20, extra in 1i64..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, 2);
        let f = c.field();
        let x = series(&mut rng, &c, None);
        let y = series(&mut rng, &c, None);
        let hi = lo + extra;
        let at = |n: i64| {
            let (xa, ya) = (x.truncate(n), y.truncate(n));
            xa.mul(&ya, f).add(&xa.phi(&c), f)
        };
        let (a, b) = (at(lo), at(hi));
        let known = a.prec().unwrap().min(b.prec().unwrap());
        prop_assert!(a.sub(&b, f).is_zero_mod(known));
    }

    #[test]
    fn gamma_is_preserved_by_unit_base_change(seed: u64, idx in 0usize..8, b in 2u64..4, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, b);
        let m = random_module(&mut rng, &c, d);
        let p = random_unit(&mut rng, c.field(), d);
        let moved = base_change(&m, &p, 96).unwrap();
        prop_assert_eq!(moved.gamma(), m.gamma());
    }

    #[test]
    fn standard_gamma_is_n(idx in 0usize..8, d in 1usize..5, n in 0i64..20) {
        let c = config(idx, 2);
        prop_assert_eq!(make_standard(&c, d, n, FFElem::ONE).unwrap().module.gamma(), n);
    }

    #[test]
    fn base_change_composes(seed: u64, idx in 0usize..8, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, 2);
        let f = c.field();
        let m = random_module(&mut rng, &c, d);
        let p = random_unit(&mut rng, f, d);
        let q = random_unit(&mut rng, f, d);
        let two = base_change(&base_change(&m, &p, 96).unwrap(), &q, 96).unwrap();
        let one = base_change(&m, &p.mul(&q, f), 96).unwrap();
        prop_assert!(two.matrix().sub(one.matrix(), f).is_zero_mod(40));
    }

    #[test]
    fn lemma2_witness_conjugates(seed: u64, idx in 0usize..8, b in 2u64..4, d in 1usize..4, s in 0u32..4, n2 in 0i64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, b);
        let a2 = random_elem(&mut rng, c.field(), true);
        let a = c.sigma_pow(a2, s as i64);
        let n = (b as i64).pow(s) * n2 + rng.gen_range(0..3) * ((b as i64).pow(d as u32) - 1);
        let cert = lemma2_witness(&c, d, n, a, n2, a2, s, 32).unwrap();
        prop_assert!(conjugates(&c, &standard_matrix(d, n, a), &cert.p, &standard_matrix(d, n2, a2), 32));
    }

    #[test]
    fn lift_ledger_dominates_prediction(seed: u64, idx in 0usize..8, b in 2u64..4, d in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = config(idx, b);
        let f = c.field();
        let m = random_module(&mut rng, &c, d);
        let k = (b as i64).max(c.p() as i64);
        let n = k * m.gamma() / (b as i64 - 1) + 1;
        let e = Matrix::from_fn(d, d, |_, _| random_poly(&mut rng, f, 0, 1).shift(n));
        let h = m.matrix().add(&e, f);
        let r = lift_base_change(&m, &h, 40).unwrap();
        for step in &r.ledger {
            prop_assert!(step.observed.map_or(true, |v| v >= step.predicted));
        }
        prop_assert!(r.p.mul(m.matrix(), f).sub(&h.mul(&r.p.phi(&c), f), f).is_zero_mod(40));
    }

    #[test]
    fn rb_reduce_is_idempotent_on_the_orbit(b in prop::sample::select(vec![2u64, 3, 5]), den in 1i64..60, num in -100i64..100, s in 0u32..6) {
        prop_assume!(gcd(den, b as i64) == 1);
        let r = match rb_reduce(num, den, b) {
            Err(phimod::Error::Overflow(_)) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert_eq!(rb_reduce(r.num(), r.den(), b).unwrap(), r.clone());
        let twisted = num * (b as i64).pow(s) + 7 * den;
        prop_assert_eq!(rb_reduce(twisted, den, b).unwrap(), r.clone());
        for n in r.n_set(4) {
            prop_assert!(r.contains(n as i128));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// JH multiset of `P^{-1} G phi(P)` equals that of `G`, for every
    /// configuration in each case; dimensions add up.
    #[test]
    fn classification_is_invariant_under_base_change(seed: u64, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for idx in 0..CONFIGS.len() {
            for b in [2u64, 3] {
                let c = config(idx, b);
                let m = random_module(&mut rng, &c, d);
                let p = random_unit(&mut rng, c.field(), d);
                let moved = base_change(&m, &p, 160).unwrap();
                let r1 = classify(&m, 64).unwrap();
                let r2 = classify(&moved, 64).unwrap();
                prop_assert_eq!(&r1.constituents, &r2.constituents);
                prop_assert_eq!(r1.total_dim(), d as u64);
            }
        }
    }

    /// Every constituent of `D(d, n)` has the class of `n/(b^d - 1)`.
    #[test]
    fn standard_constituents_share_the_class(idx in 0usize..8, b in 2u64..4, d in 1usize..5, n in 0i64..12) {
        let c = config(idx, b);
        let m = make_standard(&c, d, n, FFElem::ONE).unwrap().module;
        let rep = classify(&m, 64).unwrap();
        let r = rb_reduce(n, (b as i64).pow(d as u32) - 1, b).unwrap();
        prop_assert!(rep.constituents.iter().all(|k| k.r == r));
        let periodic = rb_reduce_periodic(&(n as u64).into(), d as u64, b).unwrap();
        prop_assert_eq!(periodic, r);
    }
}

#[test]
fn json_round_trip_of_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for idx in 0..CONFIGS.len() {
        let c = config(idx, 3);
        let m = random_module(&mut rng, &c, 3);
        let back = PhiModule::from_json(&m.to_json()).unwrap();
        assert_eq!(back.matrix(), m.matrix());
        assert_eq!(back.cfg(), m.cfg());
    }
}
