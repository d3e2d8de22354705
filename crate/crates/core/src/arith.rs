//! Small integer helpers: primality, factoring, gcd, multiplicative order.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a as i128, b as i128) as u64
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Least `l >= 1` with `b^l = 1 (mod den)`; `den = 1` gives 1.
/// Caller guarantees `gcd(b, den) = 1`.
pub fn mult_order(b: u64, den: u64) -> u64 {
    if den <= 1 {
        return 1;
    }
    let b = (b % den) as u128;
    let den128 = den as u128;
    let mut x = b;
    let mut l = 1u64;
    while x != 1 {
        x = x * b % den128;
        l += 1;
    }
    l
}

pub fn checked_pow(b: u64, e: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(b as u128)?;
    }
    Some(acc)
}

pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    // n, k stay tiny (at most p here); exact product is fine
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    (num % p as u128) as u64
}
