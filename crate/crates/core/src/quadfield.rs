//! Exact arithmetic in `K = Q(√d)` and its ring of integers.
//!
//! Elements are stored as rational coordinates `a + bω` in the integral
//! basis `(1, ω)`, where `ω = √d` when `d ≢ 1 (mod 4)` and `ω = (1+√d)/2`
//! otherwise. Nothing here touches floating point: comparisons in the real
//! embedding are decided by squaring.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::{exact_sqrt, factorize, fmt_rational, is_integer, is_squarefree, parse_rational, rat};

/// The field `Q(√d)` for a squarefree `d ∉ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticField {
    d: i64,
    disc: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateD(d));
        }
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Self { d, disc })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// True when `ω = (1+√d)/2`.
    pub fn omega_is_half(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// `ω` satisfies `ω² = t·ω − n` with `t` the trace and `n` the norm of `ω`.
    pub(crate) fn omega_trace(&self) -> i64 {
        if self.omega_is_half() {
            1
        } else {
            0
        }
    }

    pub(crate) fn omega_norm(&self) -> i64 {
        if self.omega_is_half() {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }

    pub fn element(&self, a: BigRational, b: BigRational) -> FieldElement {
        FieldElement { field: *self, a, b }
    }

    pub fn int_element(&self, a: i64, b: i64) -> FieldElement {
        self.element(rat(a), rat(b))
    }

    pub fn from_int(&self, a: i64) -> FieldElement {
        self.int_element(a, 0)
    }

    pub fn from_bigint(&self, a: BigInt) -> FieldElement {
        self.element(BigRational::from_integer(a), BigRational::zero())
    }

    pub fn zero(&self) -> FieldElement {
        self.int_element(0, 0)
    }

    pub fn one(&self) -> FieldElement {
        self.int_element(1, 0)
    }

    pub fn omega(&self) -> FieldElement {
        self.int_element(0, 1)
    }

    pub fn sqrt_d(&self) -> FieldElement {
        if self.omega_is_half() {
            self.int_element(-1, 2)
        } else {
            self.omega()
        }
    }

    /// Human-readable description of `ω`.
    pub fn omega_description(&self) -> String {
        if self.omega_is_half() {
            format!("(1+√{})/2", self.d)
        } else {
            format!("√{}", self.d)
        }
    }

    fn isqrt_abs_d(&self) -> i64 {
        (self.d.unsigned_abs() as i64).sqrt()
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{})", self.d)
    }
}

/// An element `a + bω` of `K` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: QuadraticField,
    a: BigRational,
    b: BigRational,
}

impl FieldElement {
    pub fn field(&self) -> QuadraticField {
        self.field
    }

    /// Coefficient of `1`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `ω`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn coords(&self) -> [BigRational; 2] {
        [self.a.clone(), self.b.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        is_integer(&self.a) && is_integer(&self.b)
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    pub fn conjugate(&self) -> FieldElement {
        let t = rat(self.field.omega_trace());
        FieldElement {
            field: self.field,
            a: &self.a + &self.b * t,
            b: -self.b.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        let t = rat(self.field.omega_trace());
        let n = rat(self.field.omega_norm());
        &self.a * &self.a + &self.a * &self.b * t + &self.b * &self.b * n
    }

    pub fn trace(&self) -> BigRational {
        rat(2) * &self.a + &self.b * rat(self.field.omega_trace())
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement {
            field: self.field,
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self * &other.inverse()?)
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `x` and `y` differ by a unit of `O_K`.
    pub fn is_associate(&self, other: &FieldElement) -> bool {
        match self.checked_div(other) {
            Ok(q) => q.is_unit(),
            Err(_) => false,
        }
    }

    /// Coordinates `(r, s)` with `x = r + s√d`.
    pub fn sqrt_coords(&self) -> (BigRational, BigRational) {
        if self.field.omega_is_half() {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            (&self.a + &self.b * &half, &self.b * &half)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    /// Sign of `x` under the embedding `√d ↦ +√d` of a real field.
    pub fn real_sign(&self) -> Ordering {
        debug_assert!(self.field.is_real());
        let (r, s) = self.sqrt_coords();
        let rs = r.cmp(&BigRational::zero());
        let ss = s.cmp(&BigRational::zero());
        match (rs, ss) {
            (Ordering::Equal, o) | (o, Ordering::Equal) => o,
            (a, b) if a == b => a,
            (a, _) => {
                // r and s√d have opposite signs; the larger magnitude wins.
                let lhs = &r * &r;
                let rhs = &s * &s * rat(self.field.d);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Compare `x` and `y` in the real embedding.
    pub fn real_cmp(&self, other: &FieldElement) -> Ordering {
        (self - other).real_sign()
    }

    /// `|x|` in the real embedding.
    pub fn real_abs(&self) -> FieldElement {
        if self.real_sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// An integer `E ≥ |x|` in the real embedding.
    pub(crate) fn real_upper_bound(&self) -> BigInt {
        let (r, s) = self.sqrt_coords();
        let root = BigRational::from_integer(BigInt::from(self.field.isqrt_abs_d() + 1));
        let bound = r.abs() + s.abs() * root;
        bound.ceil().to_integer()
    }

    /// Deterministic ordering that prefers small, positive coordinates.
    pub(crate) fn simplicity_key(&self) -> (BigRational, BigRational, bool, bool, BigRational, BigRational) {
        (
            self.b.abs(),
            self.a.abs(),
            self.b.is_negative(),
            self.a.is_negative(),
            self.b.clone(),
            self.a.clone(),
        )
    }

    /// Parse an element written with `w` for `ω` and `s` for `√d`, e.g.
    /// `1+w`, `-1/2+3/2s`, `2*w`.
    pub fn parse(field: QuadraticField, text: &str) -> Result<FieldElement> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let mut acc = field.zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef_str, basis) = if let Some(c) = body.strip_suffix("sqrtd") {
                (c, field.sqrt_d())
            } else if let Some(c) = body.strip_suffix('w') {
                (c, field.omega())
            } else if let Some(c) = body.strip_suffix('s') {
                (c, field.sqrt_d())
            } else {
                (body, field.one())
            };
            let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coef_str)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{coef_str}` in `{text}`")))?
            };
            let coef = if neg { -coef } else { coef };
            acc = &acc + &basis.scale(&coef);
        }
        Ok(acc)
    }

    /// Round-trippable form accepted by [`FieldElement::parse`].
    pub fn to_input_string(&self) -> String {
        let a = fmt_rational(&self.a);
        if self.b.is_zero() {
            return a;
        }
        let b = fmt_rational(&self.b);
        if self.a.is_zero() {
            format!("{b}w")
        } else if self.b.is_negative() {
            format!("{a}{b}w")
        } else {
            format!("{a}+{b}w")
        }
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch(self.field.d, other.field.d))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, s) = self.sqrt_coords();
        let root = format!("√{}", self.field.d);
        if s.is_zero() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let s_abs = s.abs();
        let s_part = if s_abs.is_one() {
            root
        } else {
            format!("{}{}", fmt_rational(&s_abs), root)
        };
        match (r.is_zero(), s.is_negative()) {
            (true, false) => write!(f, "{s_part}"),
            (true, true) => write!(f, "-{s_part}"),
            (false, false) => write!(f, "{}+{s_part}", fmt_rational(&r)),
            (false, true) => write!(f, "{}-{s_part}", fmt_rational(&r)),
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch");
        FieldElement {
            field: self.field,
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch");
        FieldElement {
            field: self.field,
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let t = rat(self.field.omega_trace());
        let n = rat(self.field.omega_norm());
        let bb = &self.b * &rhs.b;
        FieldElement {
            field: self.field,
            a: &self.a * &rhs.a - &bb * n,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bb * t,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

pub fn make_field(d: i64) -> Result<QuadraticField> {
    QuadraticField::new(d)
}

/// Fundamental unit `ε > 1` of a real quadratic ring of integers, read off
/// the first convergent `p/q` of the continued fraction of `ω` for which
/// `p − qω` is a unit.
pub fn fundamental_unit(field: QuadraticField) -> Result<FieldElement> {
    if !field.is_real() {
        return Err(Error::ImaginaryField(field.d));
    }
    let d = field.d;
    let s = field.isqrt_abs_d();
    // ω = (P + √d)/Q with Q | d − P².
    let (mut big_p, mut big_q) = if field.omega_is_half() { (1i64, 2i64) } else { (0, 1) };
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let omega = field.omega();
    loop {
        let a = (big_p + s).div_euclid(big_q);
        let p_next = BigInt::from(a) * &p + &p_prev;
        let q_next = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);

        let small = &field.from_bigint(p.clone()) - &omega.scale(&BigRational::from_integer(q.clone()));
        if small.norm().abs().is_one() {
            let eps = small.conjugate();
            debug_assert_eq!(eps.real_sign(), Ordering::Greater);
            return Ok(eps);
        }
        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
    }
}

/// Writes a real-field unit as `sign · ε^k`.
pub fn unit_log(unit: &FieldElement) -> Result<(i8, i64)> {
    let field = unit.field();
    if !unit.is_unit() {
        return Err(Error::Internal(format!("{unit} is not a unit")));
    }
    let eps = fundamental_unit(field)?;
    let eps_inv = eps.inverse()?;
    let sign: i8 = if unit.real_sign() == Ordering::Less { -1 } else { 1 };
    let mut v = unit.real_abs();
    let one = field.one();
    let mut k = 0i64;
    while !v.is_one() {
        if v.real_cmp(&one) == Ordering::Greater {
            v = &v * &eps_inv;
            k += 1;
        } else {
            v = &v * &eps;
            k -= 1;
        }
    }
    Ok((sign, k))
}

/// The roots of unity in an imaginary field, or `{±1}` in a real one.
pub fn torsion_units(field: QuadraticField) -> Vec<FieldElement> {
    let mut units = if field.is_real() {
        vec![field.one(), -field.one()]
    } else {
        elements_of_norm(field, &BigInt::one())
    };
    units.sort_by_key(|u| u.simplicity_key());
    units
}

/// Integral elements with `|N(y)| = m`. For imaginary fields this is every
/// such element; for real fields it contains a representative of every
/// associate class (each class has a member with `√m ≤ |y| < ε√m`).
pub fn elements_of_norm(field: QuadraticField, m: &BigInt) -> Vec<FieldElement> {
    assert!(m.is_positive());
    let d = BigInt::from(field.d);
    let four_m: BigInt = m * 4;
    let v_max = if field.is_real() {
        let eps = fundamental_unit(field).expect("real field");
        let e = eps.real_upper_bound() + 1;
        let q: BigInt = &e * &e * m / &d;
        q.sqrt() + 1
    } else {
        let q: BigInt = &four_m / (-&d);
        q.sqrt()
    };
    let targets: Vec<BigInt> = if field.is_real() {
        vec![four_m.clone(), -four_m.clone()]
    } else {
        vec![four_m.clone()]
    };
    let mut out = Vec::new();
    let mut v = BigInt::zero();
    while v <= v_max {
        let dv2 = &d * &v * &v;
        for t in &targets {
            if let Some(u) = exact_sqrt(&(t + &dv2)) {
                for us in [u.clone(), -u.clone()] {
                    for vs in [v.clone(), -v.clone()] {
                        if let Some(y) = from_half_coords(field, &us, &vs) {
                            out.push(y);
                        }
                    }
                }
            }
        }
        v += 1;
    }
    out.sort_by_key(|y| y.simplicity_key());
    out.dedup();
    out
}

/// The element `(u + v√d)/2` if it lies in `O_K`.
fn from_half_coords(field: QuadraticField, u: &BigInt, v: &BigInt) -> Option<FieldElement> {
    let two = BigInt::from(2);
    if field.omega_is_half() {
        // (u + v√d)/2 = (u − v)/2 + vω
        let diff = u - v;
        if (&diff % &two).is_zero() {
            Some(field.element(
                BigRational::from_integer(diff / &two),
                BigRational::from_integer(v.clone()),
            ))
        } else {
            None
        }
    } else if (u % &two).is_zero() && (v % &two).is_zero() {
        Some(field.element(BigRational::from_integer(u / &two), BigRational::from_integer(v / &two)))
    } else {
        None
    }
}

/// True iff `x` has no factorisation into two non-units of `O_K`.
pub fn is_irreducible(x: &FieldElement) -> Result<bool> {
    if !x.is_integral() {
        return Err(Error::NotIntegral(x.to_string()));
    }
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if x.is_unit() {
        return Err(Error::UnitInput(x.to_string()));
    }
    let n = x.norm().abs().to_integer();
    let n64 = n
        .to_i64()
        .ok_or_else(|| Error::Internal(format!("norm {n} too large for divisor search")))?;
    for m in proper_divisors_up_to_sqrt(n64) {
        for y in elements_of_norm(x.field(), &BigInt::from(m)) {
            if x.checked_div(&y)?.is_integral() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Divisors `m` of `n` with `1 < m` and `m² ≤ n`.
fn proper_divisors_up_to_sqrt(n: i64) -> Vec<i64> {
    let mut divs = vec![1i64];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for &dv in &divs {
            let mut pk = 1;
            for _ in 0..=e {
                next.push(dv * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    let mut out: Vec<i64> = divs.into_iter().filter(|&m| m > 1 && m * m <= n).collect();
    out.sort_unstable();
    out
}

/// A `p`-th root of `alpha` in `K`, if one exists.
pub fn nth_root(alpha: &FieldElement, p: u32) -> Result<Option<FieldElement>> {
    let field = alpha.field();
    if alpha.is_zero() {
        return Ok(Some(field.zero()));
    }
    if !alpha.is_integral() {
        // Roots of integral elements are integral; scale out the denominator.
        let den = alpha.a().denom().lcm(alpha.b().denom());
        let scale = BigRational::from_integer(den.pow(p));
        let scaled = alpha.scale(&scale);
        let root = nth_root(&scaled, p)?;
        return Ok(root.map(|r| r.scale(&BigRational::from_integer(den).recip())));
    }
    let n = alpha.norm().abs().to_integer();
    let m = n.nth_root(p);
    if m.pow(p) != n {
        return Ok(None);
    }
    for beta in elements_of_norm(field, &m) {
        let q = alpha.checked_div(&beta.pow(p))?;
        if !q.is_unit() {
            continue;
        }
        if field.is_real() {
            let (sign, k) = unit_log(&q)?;
            if k % p as i64 != 0 || (p.is_multiple_of(2) && sign < 0) {
                continue;
            }
            let eps = fundamental_unit(field)?;
            let j = k / p as i64;
            let mut u = if j >= 0 {
                eps.pow(j as u32)
            } else {
                eps.inverse()?.pow((-j) as u32)
            };
            if sign < 0 {
                u = -u;
            }
            return Ok(Some(&beta * &u));
        } else {
            for u in torsion_units(field) {
                if u.pow(p) == q {
                    return Ok(Some(&beta * &u));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let k = f(-5);
        assert_eq!(k.discriminant(), -20);
        assert!(!k.omega_is_half());
        let k = f(-3);
        assert_eq!(k.discriminant(), -3);
        assert!(k.omega_is_half());
        assert_eq!(QuadraticField::new(12), Err(Error::NotSquarefree(12)));
        assert_eq!(QuadraticField::new(1), Err(Error::DegenerateD(1)));
        assert_eq!(QuadraticField::new(0), Err(Error::DegenerateD(0)));
    }

    #[test]
    fn norm_trace_conjugate() {
        let k = f(-5);
        let x = k.int_element(1, 1);
        assert_eq!(x.norm(), rat(6));
        assert_eq!(k.omega().trace(), rat(0));
        for d in [-5, -3, 2, 5, 13] {
            let k = f(d);
            let x = k.int_element(3, 2);
            assert_eq!(x.conjugate().conjugate(), x);
        }
    }

    #[test]
    fn division_errors() {
        let k = f(-5);
        assert_eq!(k.one().checked_div(&k.zero()), Err(Error::DivisionByZero));
        let other = f(-3).one();
        assert_eq!(k.one().checked_add(&other), Err(Error::FieldMismatch(-5, -3)));
    }

    #[test]
    fn irreducibility_examples() {
        let k = f(-5);
        assert!(is_irreducible(&k.from_int(2)).unwrap());
        assert!(is_irreducible(&k.int_element(1, 1)).unwrap());
        assert!(!is_irreducible(&k.from_int(6)).unwrap());
        assert!(matches!(is_irreducible(&k.one()), Err(Error::UnitInput(_))));
        let half = k.element(BigRational::new(1.into(), 2.into()), rat(0));
        assert!(matches!(is_irreducible(&half), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn fundamental_unit_examples() {
        assert_eq!(fundamental_unit(f(2)).unwrap(), f(2).int_element(1, 1));
        assert_eq!(fundamental_unit(f(5)).unwrap(), f(5).omega());
        assert_eq!(fundamental_unit(f(3)).unwrap(), f(3).int_element(2, 1));
        assert_eq!(fundamental_unit(f(2)).unwrap().norm(), rat(-1));
        assert_eq!(fundamental_unit(f(5)).unwrap().norm(), rat(-1));
        assert_eq!(fundamental_unit(f(3)).unwrap().norm(), rat(1));
        assert_eq!(fundamental_unit(f(-5)), Err(Error::ImaginaryField(-5)));
    }

    #[test]
    fn parse_and_display() {
        let k = f(-5);
        let x = FieldElement::parse(k, "1+w").unwrap();
        assert_eq!(x, k.int_element(1, 1));
        assert_eq!(x.to_string(), "1+√-5");
        let k = f(-23);
        let w = FieldElement::parse(k, "w").unwrap();
        assert_eq!(w.to_string(), "1/2+1/2√-23");
        assert_eq!(FieldElement::parse(k, "-1/2+1/2s").unwrap(), &w - &k.one());
        let y = k.element(BigRational::new((-3).into(), 4.into()), rat(-2));
        assert_eq!(FieldElement::parse(k, &y.to_input_string()).unwrap(), y);
    }

    #[test]
    fn unit_log_roundtrip() {
        let k = f(7);
        let eps = fundamental_unit(k).unwrap();
        let u = -eps.pow(3).inverse().unwrap();
        assert_eq!(unit_log(&u).unwrap(), (-1, -3));
    }

    #[test]
    fn nth_roots() {
        let k = f(-5);
        let x = k.int_element(2, 3);
        let r = nth_root(&x.pow(3), 3).unwrap().unwrap();
        assert_eq!(r.pow(3), x.pow(3));
        assert!(nth_root(&k.from_int(2), 2).unwrap().is_none());
        let k = f(6);
        let eps = fundamental_unit(k).unwrap();
        let y = &k.int_element(1, 1) * &eps;
        let r = nth_root(&y.pow(2), 2).unwrap().unwrap();
        assert_eq!(r.pow(2), y.pow(2));
    }

    fn squarefree(n: i64) -> bool {
        let n = n.abs();
        (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
    }

    // Smallest y ≥ 1 with x² − dy² = ±1 (or ±4 when ω is half-integral).
    fn pell_unit(d: i64) -> (i64, i64, i64) {
        let k = if d % 4 == 1 { 4 } else { 1 };
        for y in 1i64.. {
            let t = d * y * y;
            for target in [t - k, t + k] {
                let x = (target as f64).sqrt().round() as i64;
                for x in [x - 1, x, x + 1] {
                    if x > 0 && x * x == target {
                        return (x, y, if k == 4 { 2 } else { 1 });
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn fundamental_unit_matches_pell_search() {
        for d in (2..=50).filter(|&d| squarefree(d)) {
            let (x, y, den) = pell_unit(d);
            let (r, s) = fundamental_unit(f(d)).unwrap().sqrt_coords();
            assert_eq!(
                (r, s),
                (
                    BigRational::new(x.into(), den.into()),
                    BigRational::new(y.into(), den.into())
                ),
                "d = {d}"
            );
        }
    }

    // Every integral element of norm ≤ 200 lies in the box |a|, |b| ≤ 30 for
    // these fields, so divisibility can be decided by scanning the box.
    #[test]
    fn irreducibility_matches_box_search() {
        for d in [-1, -2, -3, -5, -6, -7, -10] {
            let k = f(d);
            let mut elems = Vec::new();
            for a in -30..=30 {
                for b in -30..=30 {
                    let x = k.int_element(a, b);
                    let n = x.norm().to_integer();
                    if n > BigInt::from(1) && n <= BigInt::from(200) {
                        elems.push((n, x));
                    }
                }
            }
            for (n, x) in elems.iter().filter(|(n, _)| *n <= BigInt::from(100)) {
                let reducible = elems
                    .iter()
                    .any(|(m, y)| m < n && (n % m).is_zero() && x.checked_div(y).unwrap().is_integral());
                assert_eq!(is_irreducible(x).unwrap(), !reducible, "{x} in d = {d}");
            }
        }
    }
}
