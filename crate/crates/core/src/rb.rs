//! The quotient set `R_b`: rationals with denominator prime to `b`, modulo
//! `x ~ b^s y (mod Z)`. Equivalently, periodic base-`b` digit words up to
//! rotation, with the all-0 and all-(b-1) words identified.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{checked_pow, gcd, mult_order};
use crate::error::{Error, Result};

/// Canonical representative of a class in `R_b`.
///
/// `num/den` is the least element of the fractional-part orbit
/// `{frac(b^s x)}`, so two classes are equal iff their fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RbClass {
    num: i64,
    den: i64,
    b: u64,
    length: u64,
    canonical_n: u128,
}

/// `l(r)` for a reduced denominator: the multiplicative order of `b` mod `den`.
pub fn rb_length(den: i64, b: u64) -> Result<u64> {
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    let d = den.unsigned_abs();
    if gcd(d as i128, b as i128) != 1 {
        return Err(Error::DenominatorNotPrimeToB(den, b));
    }
    Ok(mult_order(b, d))
}

/// Reduce `num/den` to its canonical class in `R_b`.
pub fn rb_reduce(num: i64, den: i64, b: u64) -> Result<RbClass> {
    if b < 2 {
        return Err(Error::BadTwist(b));
    }
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    let g = gcd(num as i128, den as i128).max(1) as i64;
    let (mut num, mut den) = (num / g, den / g);
    if den < 0 {
        num = -num;
        den = -den;
    }
    let length = rb_length(den, b)?;
    let x = num.rem_euclid(den) as u128;
    let d = den as u128;
    let bm = b as u128 % d.max(1);
    let mut best = x;
    let mut cur = x;
    for _ in 1..length {
        cur = cur * bm % d;
        best = best.min(cur);
    }
    // keep the fraction reduced after taking the orbit minimum
    let g2 = gcd(best as i128, den as i128).max(1);
    let (num, den) = ((best as i128 / g2) as i64, (den as i128 / g2) as i64);
    let den = if num == 0 { 1 } else { den };
    let length = if num == 0 { 1 } else { length };
    let modulus = checked_pow(b, length)
        .map(|v| v - 1)
        .ok_or_else(|| Error::Overflow(format!("{b}^{length} does not fit in 128 bits")))?;
    let canonical_n = (num as u128)
        .checked_mul(modulus)
        .ok_or_else(|| Error::Overflow("canonical numerator".into()))?
        / den as u128;
    Ok(RbClass { num, den, b, length, canonical_n })
}

/// Class of `n / (b^len - 1)` for a possibly huge `n`.
pub fn rb_reduce_periodic(n: &BigUint, len: u64, b: u64) -> Result<RbClass> {
    let den_big = BigUint::from(b).pow(len as u32) - BigUint::one();
    if den_big.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let g = n.gcd(&den_big);
    let den = (&den_big / &g)
        .to_i64()
        .ok_or_else(|| Error::Overflow("reduced denominator exceeds 64 bits".into()))?;
    let num = ((n / &g) % BigUint::from(den as u64)).to_i64().unwrap();
    rb_reduce(num, den, b)
}

/// Class of a periodic digit word `d_0 d_1 ... d_{k-1}` (value `0.(d_0...d_{k-1})` in base `b`).
pub fn rb_from_digits(digits: &[u64], b: u64) -> Result<RbClass> {
    if digits.is_empty() {
        return Err(Error::InvalidInput("empty digit word".into()));
    }
    if let Some(&d) = digits.iter().find(|&&d| d >= b) {
        return Err(Error::InvalidInput(format!("digit {d} is not below b = {b}")));
    }
    let mut n = BigUint::zero();
    for &d in digits {
        n = n * BigUint::from(b) + BigUint::from(d);
    }
    rb_reduce_periodic(&n, digits.len() as u64, b)
}

impl RbClass {
    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn den(&self) -> i64 {
        self.den
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn length(&self) -> u64 {
        self.length
    }
    pub fn canonical_n(&self) -> u128 {
        self.canonical_n
    }

    pub fn is_zero_class(&self) -> bool {
        self.num == 0
    }

    /// `b^l - 1`.
    pub fn period_modulus(&self) -> u128 {
        checked_pow(self.b, self.length).unwrap() - 1
    }

    /// The periodic digit word of `canonical_n / (b^l - 1)`; rotation-minimal.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.length as usize];
        let mut n = self.canonical_n;
        for slot in out.iter_mut().rev() {
            *slot = (n % self.b as u128) as u64;
            n /= self.b as u128;
        }
        out
    }

    /// Digits rendered with `0-9a-z` when `b <= 36`, otherwise dot-separated decimals.
    pub fn digit_string(&self) -> String {
        let d = self.digits();
        if self.b <= 36 {
            d.iter().map(|&x| std::char::from_digit(x as u32, 36).unwrap()).collect()
        } else {
            d.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
        }
    }

    /// `n` lies in `N(r)`: `n / (b^l - 1)` represents this class.
    pub fn contains(&self, n: i128) -> bool {
        let m = self.period_modulus() as i128;
        let x = n.rem_euclid(m);
        match rb_reduce_periodic(&BigUint::from(x as u128), self.length, self.b) {
            Ok(c) => &c == self,
            Err(_) => false,
        }
    }

    /// The `count` least nonnegative elements of `N(r)`.
    pub fn n_set(&self, count: usize) -> Vec<u128> {
        let m = self.period_modulus();
        // residues mod b^l - 1 in N(r), then translates by multiples of b^l - 1
        let mut residues: Vec<u128> = Vec::new();
        let mut cur = self.canonical_n % m.max(1);
        for _ in 0..self.length {
            residues.push(cur);
            cur = mul_mod(cur, self.b as u128, m.max(1));
        }
        if self.is_zero_class() {
            residues = vec![0];
        }
        residues.sort_unstable();
        residues.dedup();
        let step = m.max(1);
        let mut out = Vec::with_capacity(count);
        let mut k = 0u128;
        while out.len() < count {
            for &r in &residues {
                if out.len() < count {
                    out.push(r + k * step);
                }
            }
            k += 1;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.num,
            "den": self.den,
            "b": self.b,
            "length": self.length,
            "canonical_n": self.canonical_n,
            "digits": self.digit_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = v
            .get("num")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::InvalidInput("r.num must be an integer".into()))?;
        let den = v
            .get("den")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::InvalidInput("r.den must be an integer".into()))?;
        let b = v
            .get("b")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("r.b must be an integer".into()))?;
        rb_reduce(num, den, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orbit oracle: the set of fractional parts `{b^s x mod 1}` as reduced pairs.
    fn orbit(num: i64, den: i64, b: u64) -> Vec<(i64, i64)> {
        let g = gcd(num as i128, den as i128).max(1) as i64;
        let (n, d) = (num / g, den / g);
        let mut out = Vec::new();
        let mut x = n.rem_euclid(d);
        for _ in 0..200 {
            let g = gcd(x as i128, d as i128).max(1) as i64;
            let pair = if x == 0 { (0, 1) } else { (x / g, d / g) };
            if !out.contains(&pair) {
                out.push(pair);
            }
            x = (x as i128 * b as i128).rem_euclid(d as i128) as i64;
        }
        out.sort();
        out
    }

    #[test]
    fn zero_class() {
        let r = rb_reduce(0, 1, 2).unwrap();
        assert_eq!((r.length(), r.canonical_n()), (1, 0));
        assert_eq!(r.digit_string(), "0");
        // integers, and the all-(b-1) word, are the zero class
        assert_eq!(rb_reduce(7, 1, 2).unwrap(), r);
        assert_eq!(rb_from_digits(&[1], 2).unwrap(), r);
        assert_eq!(rb_from_digits(&[2, 2], 3).unwrap(), rb_reduce(0, 1, 3).unwrap());
    }

    #[test]
    fn one_third_base_two() {
        let o = orbit(1, 3, 2);
        assert_eq!(o, vec![(1, 3), (2, 3)]);
        let r = rb_reduce(1, 3, 2).unwrap();
        assert_eq!((r.num(), r.den(), r.length(), r.canonical_n()), (1, 3, 2, 1));
        assert_eq!(rb_reduce(5, 3, 2).unwrap(), r);
        assert_eq!(rb_reduce(2, 3, 2).unwrap(), r);
        assert_eq!(r.digit_string(), "01");
    }

    #[test]
    fn lengths_by_brute_force() {
        assert_eq!(rb_length(1, 2).unwrap(), 1);
        assert_eq!(rb_length(3, 2).unwrap(), 2);
        assert_eq!(rb_length(7, 2).unwrap(), 3);
        assert!(matches!(rb_length(4, 2), Err(Error::DenominatorNotPrimeToB(4, 2))));
    }

    #[test]
    fn digits_by_long_division() {
        // 1/7 in base 2 = 0.001001...
        let r = rb_reduce(1, 7, 2).unwrap();
        assert_eq!(r.digit_string(), "001");
        let mut rem = 1i64;
        let long: String = (0..3)
            .map(|_| {
                rem *= 2;
                let d = rem / 7;
                rem %= 7;
                std::char::from_digit(d as u32, 10).unwrap()
            })
            .collect();
        assert_eq!(long, "001");
    }

    #[test]
    fn n_set_membership() {
        let zero = rb_reduce(0, 1, 2).unwrap();
        assert_eq!(zero.n_set(2), vec![0, 1]);
        for n in 0..10 {
            assert!(zero.contains(n));
        }
        let third = rb_reduce(1, 3, 2).unwrap();
        let listed = third.n_set(5);
        let brute: Vec<u128> = (0..20i128).filter(|&n| third.contains(n)).take(5).map(|n| n as u128).collect();
        assert_eq!(listed, brute);
        assert_eq!(listed, vec![1, 2, 4, 5, 7]);
    }

    #[test]
    fn denominator_must_be_prime_to_b() {
        assert!(matches!(rb_reduce(1, 6, 2), Err(Error::DenominatorNotPrimeToB(6, 2))));
        // common factors are removed first
        assert!(rb_reduce(2, 6, 2).is_ok());
        assert!(matches!(rb_reduce(1, 0, 2), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn periodic_reduction_handles_large_numerators() {
        // n = 2^40 - 1 over 2^40 - 1 is the zero class; n = (2^40-1)/3 is 1/3
        let big = (BigUint::one() << 40usize) - BigUint::one();
        assert!(rb_reduce_periodic(&big, 40, 2).unwrap().is_zero_class());
        let third = &big / BigUint::from(3u32);
        assert_eq!(rb_reduce_periodic(&third, 40, 2).unwrap(), rb_reduce(1, 3, 2).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reduction_is_idempotent(num in -200i64..200, den in 1i64..60, b in prop::sample::select(vec![2u64, 3, 5, 7])) {
                if let Ok(r) = rb_reduce(num, den, b) {
                    prop_assert_eq!(rb_reduce(r.num(), r.den(), b).unwrap(), r.clone());
                    prop_assert_eq!(rb_from_digits(&r.digits(), b).unwrap(), r.clone());
                    prop_assert!(r.contains(r.canonical_n() as i128));
                }
            }
        }
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    match a.checked_mul(b) {
        Some(x) => x % m,
        None => ((BigUint::from(a) * BigUint::from(b)) % BigUint::from(m)).to_u128().expect("residue below m"),
    }
}
