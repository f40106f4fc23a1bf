//! Exact arithmetic in `Z[ζₙ]` and square roots of integers built from
//! roots of unity.
//!
//! Elements are integer vectors in the power basis `1, ζ, …, ζ^{φ(n)−1}`,
//! reduced modulo the cyclotomic polynomial `Φₙ`, over an optional common
//! denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::claims::{ClaimId, ClaimOutcome};
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::splitting::ramified_set;
use crate::util::{factorize, int_json, is_prime, is_squarefree, kronecker_prime};

/// `Φₙ` as coefficients, constant term first.
pub fn cyclo_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // xⁿ − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclo_poly(d));
        }
    }
    num
}

/// `a / b` for monic `b` dividing `a`.
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    factorize(n as i64)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p as u64 * (p as u64 - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    n: u64,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicElement {
    /// Reduce arbitrary-length coefficients modulo `Φₙ`.
    pub fn from_coeffs(n: u64, coeffs: Vec<BigInt>, den: BigInt) -> CyclotomicElement {
        assert!(!den.is_zero());
        let modulus = cyclo_poly(n);
        let deg = modulus.len() - 1;
        let mut c = coeffs;
        for i in (deg..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, m) in modulus.iter().enumerate().take(deg) {
                c[i - deg + j] -= &lead * m;
            }
        }
        c.resize(deg, BigInt::zero());
        let mut out = CyclotomicElement { n, coeffs: c, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in self.coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        let g = self.coeffs.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn from_int(n: u64, k: i64) -> CyclotomicElement {
        CyclotomicElement::from_coeffs(n, vec![BigInt::from(k)], BigInt::one())
    }

    pub fn zero(n: u64) -> CyclotomicElement {
        CyclotomicElement::from_int(n, 0)
    }

    pub fn one(n: u64) -> CyclotomicElement {
        CyclotomicElement::from_int(n, 1)
    }

    /// `ζₙᵏ`.
    pub fn zeta_pow(n: u64, k: i64) -> CyclotomicElement {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigInt::zero(); e + 1];
        c[e] = BigInt::one();
        CyclotomicElement::from_coeffs(n, c, BigInt::one())
    }

    pub fn zeta(n: u64) -> CyclotomicElement {
        CyclotomicElement::zeta_pow(n, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational number this element equals, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.coeffs[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn pow(&self, mut e: u32) -> CyclotomicElement {
        let mut base = self.clone();
        let mut acc = CyclotomicElement::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under `ζₘ ↦ ζₙ^{n/m}` for `m | n`.
    pub fn lift(&self, n: u64) -> CyclotomicElement {
        assert_eq!(n % self.n, 0, "conductor {} does not divide {n}", self.n);
        let step = (n / self.n) as usize;
        let mut c = vec![BigInt::zero(); step * self.coeffs.len().max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * step] = a.clone();
        }
        CyclotomicElement::from_coeffs(n, c, self.den.clone())
    }

    /// `{n, coeffs, den}`.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "coeffs": self.coeffs.iter().map(int_json).collect::<Vec<_>>(),
            "den": int_json(&self.den),
        })
    }
}

fn same_conductor(a: &CyclotomicElement, b: &CyclotomicElement) {
    assert_eq!(a.n, b.n, "conductor mismatch");
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        same_conductor(self, rhs);
        let den = self.den.lcm(&rhs.den);
        let (l, r) = (&den / &self.den, &den / &rhs.den);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a * &l + b * &r)
            .collect();
        CyclotomicElement::from_coeffs(self.n, coeffs, den)
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self + &(-rhs)
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        same_conductor(self, rhs);
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CyclotomicElement::from_coeffs(self.n, c, &self.den * &rhs.den)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "ζ".to_string(),
                _ => format!("ζ^{i}"),
            };
            let coef = if mon.is_empty() || c.abs() != BigInt::one() {
                c.abs().to_string()
            } else {
                String::new()
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            terms.push((sign, format!("{coef}{mon}")));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (sign, t)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "-") => s.push('-'),
                (0, _) => {}
                (_, sg) => s.push_str(&format!(" {sg} ")),
            }
            s.push_str(t);
        }
        if self.den.is_one() {
            write!(f, "{s} (ζ = ζ_{})", self.n)
        } else {
            write!(f, "({s})/{} (ζ = ζ_{})", self.den, self.n)
        }
    }
}

/// `g(p) = Σ (a|p) ζₚᵃ`.
pub fn gauss_sum(p: i64) -> Result<CyclotomicElement> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let mut c = vec![BigInt::zero(); p as usize];
    for a in 1..p {
        c[a as usize] = BigInt::from(kronecker_prime(a, p));
    }
    Ok(CyclotomicElement::from_coeffs(p as u64, c, BigInt::one()))
}

/// `(−1)^{(p−1)/2} p`.
fn p_star(p: i64) -> i64 {
    if p % 4 == 1 {
        p
    } else {
        -p
    }
}

/// `g(p)² = (−1)^{(p−1)/2} p`, checked exactly.
pub fn verify_gauss_square(p: i64) -> Result<bool> {
    let g = gauss_sum(p)?;
    Ok((&g * &g).as_rational() == Some(BigRational::from_integer(BigInt::from(p_star(p)))))
}

/// `(n, w)` with `n = |D|` and `w ∈ Z[ζₙ]`, `w² = d`.
pub fn embed_sqrt(d: i64) -> Result<(u64, CyclotomicElement)> {
    if d == 0 || d == 1 {
        return Err(Error::DegenerateD(d));
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let n = QuadraticField::new(d)?.discriminant().unsigned_abs();
    let mut w = CyclotomicElement::one(n);
    // Remaining square class once the odd primes are accounted for.
    let mut rest = d.signum();
    for (p, _) in factorize(d) {
        if p == 2 {
            rest *= 2;
            continue;
        }
        w = &w * &gauss_sum(p)?.lift(n);
        if p % 4 == 3 {
            rest = -rest;
        }
    }
    let fix = match rest {
        1 => CyclotomicElement::one(n),
        -1 => CyclotomicElement::zeta_pow(4, 1).lift(n),
        2 => &CyclotomicElement::zeta_pow(8, 1) + &CyclotomicElement::zeta_pow(8, 7),
        -2 => &CyclotomicElement::zeta_pow(8, 1) + &CyclotomicElement::zeta_pow(8, 3),
        _ => unreachable!("square class of a squarefree integer"),
    };
    let w = &w * &fix.lift(n);
    Ok((n, w))
}

/// `{d, n, coeffs, den, verified}` for the square-root witness.
pub fn sqrt_witness_json(d: i64, n: u64, w: &CyclotomicElement) -> Value {
    let verified = (w * w).as_rational() == Some(BigRational::from_integer(BigInt::from(d)));
    json!({
        "d": d,
        "n": n,
        "coeffs": w.coeffs.iter().map(int_json).collect::<Vec<_>>(),
        "den": int_json(&w.den),
        "verified": verified,
    })
}

/// `Q(√d)` sits inside `Q(ζₙ)` with `n = |D|`, and every ramified prime
/// divides `n`.
pub fn check_cyclotomic_embedding(d: i64) -> Result<ClaimOutcome> {
    let (n, w) = embed_sqrt(d)?;
    let witness = sqrt_witness_json(d, n, &w);
    let field = QuadraticField::new(d)?;
    let ramified_ok = ramified_set(field).iter().all(|&p| n % p as u64 == 0);
    let verified = witness["verified"] == json!(true);
    let mut witness = witness;
    witness["ramified_divide_conductor"] = json!(ramified_ok);
    Ok(if verified && ramified_ok {
        ClaimOutcome::holds(ClaimId::T3_1, d, Some(witness))
    } else {
        ClaimOutcome::fails(ClaimId::T3_1, d, witness)
    })
}

/// The assertion that `Q(√p)` is not generated by roots of unity. Refuted
/// for every prime `p` by the square-root witness; other `d` are outside
/// its statement.
pub fn check_prime_conductor(d: i64) -> Result<ClaimOutcome> {
    if d < 2 || !is_prime(d) {
        return Ok(ClaimOutcome::out_of_scope(
            ClaimId::Remark,
            d,
            "statement concerns Q(√p) for a prime p",
        ));
    }
    let (n, w) = embed_sqrt(d)?;
    let witness = sqrt_witness_json(d, n, &w);
    Ok(if witness["verified"] == json!(true) {
        ClaimOutcome::fails(ClaimId::Remark, d, witness)
    } else {
        ClaimOutcome::undecided(ClaimId::Remark, d, Some(witness))
    })
}

/// Re-check a square-root witness record.
pub fn reverify_sqrt_witness(witness: &Value) -> bool {
    let parse = || -> Option<bool> {
        let d = witness.get("d")?.as_i64()?;
        let n = witness.get("n")?.as_u64()?;
        let coeffs: Vec<BigInt> = witness
            .get("coeffs")?
            .as_array()?
            .iter()
            .map(crate::util::json_int)
            .collect::<Option<_>>()?;
        let den = crate::util::json_int(witness.get("den")?)?;
        if den.is_zero() || n == 0 {
            return None;
        }
        let w = CyclotomicElement::from_coeffs(n, coeffs, den);
        Some((&w * &w).as_rational() == Some(BigRational::from_integer(BigInt::from(d))))
    };
    parse().unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclo_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclo_poly(5), ints(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclo_poly(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclo_poly(12), ints(&[1, 0, -1, 0, 1]));
        for n in 1..40 {
            assert_eq!(cyclo_poly(n).len() as u64 - 1, phi(n));
        }
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in [1u64, 3, 4, 5, 8, 12, 20] {
            let z = CyclotomicElement::zeta(n);
            for k in 1..n {
                assert_ne!(z.pow(k as u32), CyclotomicElement::one(n));
            }
            assert_eq!(z.pow(n as u32), CyclotomicElement::one(n));
        }
    }

    #[test]
    fn gauss_sums() {
        assert_eq!(gauss_sum(3).unwrap().coeffs(), ints(&[1, 2]).as_slice());
        // ζ − ζ² − ζ³ + ζ⁴ with ζ⁴ = −1 − ζ − ζ² − ζ³.
        assert_eq!(gauss_sum(5).unwrap().coeffs(), ints(&[-1, 0, -2, -2]).as_slice());
        for p in [3, 5, 7, 11, 13] {
            assert!(verify_gauss_square(p).unwrap());
        }
        assert_eq!(gauss_sum(2), Err(Error::NotOddPrime(2)));
        assert_eq!(gauss_sum(9), Err(Error::NotOddPrime(9)));
    }

    #[test]
    fn sqrt_embeddings() {
        let (n, w) = embed_sqrt(-1).unwrap();
        assert_eq!((n, w), (4, CyclotomicElement::zeta(4)));
        let (n, w) = embed_sqrt(5).unwrap();
        assert_eq!((n, w), (5, gauss_sum(5).unwrap()));
        let (n, w) = embed_sqrt(2).unwrap();
        let expected = &CyclotomicElement::zeta_pow(8, 1) + &CyclotomicElement::zeta_pow(8, 7);
        assert_eq!((n, w), (8, expected));
        assert_eq!(embed_sqrt(-5).unwrap().0, 20);
        assert_eq!(embed_sqrt(6).unwrap().0, 24);
        assert_eq!(embed_sqrt(1), Err(Error::DegenerateD(1)));
    }

    #[test]
    fn lift_is_a_ring_map() {
        let a = &CyclotomicElement::zeta(6) + &CyclotomicElement::from_int(6, 2);
        let b = CyclotomicElement::zeta_pow(6, 5);
        assert_eq!((&a * &b).lift(24), &a.lift(24) * &b.lift(24));
        assert_eq!(CyclotomicElement::zeta(3).lift(12), CyclotomicElement::zeta_pow(12, 4));
        let g = gauss_sum(3).unwrap();
        assert_eq!((&g * &g).lift(15), &g.lift(15) * &g.lift(15));
    }

    #[test]
    fn no_small_square_roots_below_conductor() {
        // √±p is absent from the cyclotomic rings of conductor 1, 2, 4, 8.
        for p in [3i64, 5, 7] {
            for m in [1u64, 2, 4, 8] {
                let deg = phi(m) as u32;
                let side = 5i64.pow(deg);
                for code in 0..side {
                    let mut c = Vec::new();
                    let mut x = code;
                    for _ in 0..deg {
                        c.push(BigInt::from(x % 5 - 2));
                        x /= 5;
                    }
                    let w = CyclotomicElement::from_coeffs(m, c, BigInt::one());
                    let sq = (&w * &w).as_rational();
                    assert_ne!(sq, Some(BigRational::from_integer(BigInt::from(p))));
                    assert_ne!(sq, Some(BigRational::from_integer(BigInt::from(-p))));
                }
            }
        }
    }

    #[test]
    fn embedding_claims() {
        use crate::claims::ClaimStatus;
        assert_eq!(check_cyclotomic_embedding(5).unwrap().status, ClaimStatus::Holds);
        assert_eq!(check_cyclotomic_embedding(-5).unwrap().status, ClaimStatus::Holds);
        let r = check_prime_conductor(5).unwrap();
        assert_eq!(r.status, ClaimStatus::Fails);
        assert!(reverify_sqrt_witness(r.witness.as_ref().unwrap()));
        assert_eq!(check_prime_conductor(-5).unwrap().status, ClaimStatus::OutOfScope);
    }
}
