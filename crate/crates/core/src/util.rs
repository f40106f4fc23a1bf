use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub(crate) fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut k = 3;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Prime factorisation of `|n|` as (prime, exponent) pairs in increasing order.
pub(crate) fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.unsigned_abs() as i64;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_squarefree(n: i64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub(crate) fn primes_up_to(n: i64) -> Vec<i64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Kronecker symbol `(a/p)` for a prime `p`.
pub(crate) fn kronecker_prime(a: i64, p: i64) -> i32 {
    if p == 2 {
        if a % 2 == 0 {
            return 0;
        }
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = a.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    // Euler's criterion.
    let e = mod_pow(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

pub(crate) fn mod_pow(base: i64, mut exp: i64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut acc: i128 = 1;
    let mut b = (base.rem_euclid(m)) as i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Exact integer square root if `n` is a perfect square.
pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

pub(crate) fn lcm_of_denoms<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub(crate) fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal text for `r` rounded up at `places` digits.
pub(crate) fn decimal_ceil(r: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = (r * BigRational::from_integer(scale.clone())).ceil().to_integer();
    let (q, m) = scaled.div_mod_floor(&scale);
    format!("{q}.{:0>width$}", m.to_string(), width = places as usize)
}

/// Wraps a sum like `1+√-5` in parentheses so it can sit in a product.
pub(crate) fn factor_text(s: &str) -> String {
    if s.chars().skip(1).any(|c| c == '+' || c == '-') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// JSON number when the value fits in an `i64`, decimal string otherwise.
pub(crate) fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

pub(crate) fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub(crate) fn rational_json(r: &BigRational) -> Value {
    Value::String(fmt_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_matches_small_cases() {
        assert_eq!(kronecker_prime(-20, 3), 1);
        assert_eq!(kronecker_prime(-20, 11), -1);
        assert_eq!(kronecker_prime(-20, 2), 0);
        assert_eq!(kronecker_prime(-23, 2), 1);
        assert_eq!(kronecker_prime(5, 2), -1);
    }

    #[test]
    fn factorize_and_squarefree() {
        assert_eq!(factorize(-20), vec![(2, 2), (5, 1)]);
        assert!(is_squarefree(-5));
        assert!(!is_squarefree(12));
        assert!(is_squarefree(1));
    }
}
