#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use phimod::matrix::Matrix;
use phimod::{FFElem, FieldConfig, GaloisField, LaurentSeries};

pub fn cfg(p: u32, m: u32, s: u32, b: u64) -> FieldConfig {
    FieldConfig::new(p, m, s, b, None).unwrap()
}

pub fn nonzero_elems(f: &GaloisField) -> Vec<FFElem> {
    f.elements().filter(|x| !x.is_zero()).collect()
}

pub fn random_elem(rng: &mut ChaCha8Rng, f: &GaloisField, nonzero: bool) -> FFElem {
    let all: Vec<FFElem> = f.elements().filter(|x| !nonzero || !x.is_zero()).collect();
    all[rng.gen_range(0..all.len())]
}

pub fn random_poly(rng: &mut ChaCha8Rng, f: &GaloisField, from: i64, deg: i64) -> LaurentSeries {
    let c: Vec<FFElem> = (from..=deg).map(|_| random_elem(rng, f, false)).collect();
    LaurentSeries::from_parts(from, c, None)
}

/// Polynomial matrix with constant invertible determinant: `L U`, `L` unit lower
/// triangular, `U` upper triangular with nonzero constant diagonal.
pub fn random_unit(rng: &mut ChaCha8Rng, f: &GaloisField, d: usize) -> Matrix {
    let l = Matrix::from_fn(d, d, |i, j| {
        if i == j {
            LaurentSeries::one()
        } else if i > j {
            random_poly(rng, f, 0, 2)
        } else {
            LaurentSeries::exact_zero()
        }
    });
    let u = Matrix::from_fn(d, d, |i, j| {
        if i == j {
            LaurentSeries::constant(random_elem(rng, f, true))
        } else if i < j {
            random_poly(rng, f, 0, 2)
        } else {
            LaurentSeries::exact_zero()
        }
    });
    l.mul(&u, f)
}

/// `G phi(P) - P H` vanishes modulo `u^n`, i.e. `P^{-1} G phi(P) = H` there.
pub fn conjugates(cfg: &FieldConfig, g: &Matrix, p: &Matrix, h: &Matrix, n: i64) -> bool {
    let f = cfg.field();
    g.mul(&p.phi(cfg), f).sub(&p.mul(h, f), f).is_zero_mod(n)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Least element of `{frac(b^s num/den)}`, reduced, by walking the orbit.
pub fn orbit_min(num: i64, den: i64, b: i64) -> (i64, i64) {
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    let mut x = num.rem_euclid(den);
    let mut least = x;
    for _ in 0..den {
        x = x * b % den;
        least = least.min(x);
    }
    if least == 0 {
        (0, 1)
    } else {
        (least, den)
    }
}

pub fn mult_order(b: i64, den: i64) -> u64 {
    let mut k = 1;
    let mut x = b % den;
    while x != 1 % den {
        x = x * b % den;
        k += 1;
    }
    k
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
