//! Primitive integral ideals `[a, (b+√D)/2]` viewed as binary quadratic
//! forms `(a, b, c)` with `b² − 4ac = D`, and the reduction operator
//! `ρ` that moves between equivalent ideals.
//!
//! Each step records the element `λ` with `I = λ·ρ(I)`, so walking to the
//! unit ideal yields a generator.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::quadfield::{FieldElement, QuadraticField};

/// Canonical invariant of an ideal class: the reduced form for imaginary
/// fields, the smallest reduced form of the ρ-cycle for real fields.
pub type ClassKey = (BigInt, BigInt);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealForm {
    field: QuadraticField,
    a: BigInt,
    b: BigInt,
}

impl IdealForm {
    /// The primitive ideal `aZ + (B + ω)Z`.
    pub fn from_primitive(field: QuadraticField, a: BigInt, b_omega: BigInt) -> IdealForm {
        let b = if field.omega_is_half() {
            b_omega * 2 + 1
        } else {
            b_omega * 2
        };
        let mut f = IdealForm { field, a, b };
        debug_assert!(f.c_numerator().is_multiple_of(&(f.a.clone() * 4)));
        f.normalize_translate();
        f
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    fn disc(&self) -> BigInt {
        BigInt::from(self.field.discriminant())
    }

    fn c_numerator(&self) -> BigInt {
        &self.b * &self.b - self.disc()
    }

    pub fn c(&self) -> BigInt {
        self.c_numerator() / (&self.a * 4)
    }

    pub fn key(&self) -> ClassKey {
        (self.a.clone(), self.b.clone())
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.a.is_one()
    }

    /// `β = (b + √D)/2` in `(1, ω)` coordinates.
    fn beta(&self) -> FieldElement {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let shift = if self.field.omega_is_half() {
            BigRational::from_integer(&self.b - 1) * &half
        } else {
            BigRational::from_integer(self.b.clone()) * &half
        };
        self.field.element(shift, BigRational::one())
    }

    /// Move `b` into `(−a, a]`.
    fn normalize_translate(&mut self) {
        let two_a = &self.a * 2;
        let mut r = self.b.mod_floor(&two_a);
        if r > self.a {
            r -= &two_a;
        }
        self.b = r;
    }

    /// One reduction step: returns `(J, λ)` with `I = λ·J`.
    pub fn rho(&self) -> (IdealForm, FieldElement) {
        let beta_bar = self.beta().conjugate();
        let lambda = self
            .field
            .from_bigint(self.a.clone())
            .checked_div(&beta_bar)
            .expect("β̄ is nonzero");
        let c_abs = self.c().abs();
        let two_c = &c_abs * 2;
        let target = (-&self.b).mod_floor(&two_c);
        let b_new = if self.field.is_real() {
            let s = self.disc().sqrt();
            if c_abs <= s {
                // unique value ≡ −b in [s + 1 − 2|c|, s]
                let low: BigInt = &s + 1 - &two_c;
                let off: BigInt = &target - &low;
                &low + off.mod_floor(&two_c)
            } else {
                let mut r = target;
                if r > c_abs {
                    r -= &two_c;
                }
                r
            }
        } else {
            let mut r = target;
            if r > c_abs {
                r -= &two_c;
            }
            r
        };
        (
            IdealForm {
                field: self.field,
                a: c_abs,
                b: b_new,
            },
            lambda,
        )
    }

    fn is_reduced_imaginary(&self) -> bool {
        let c = self.c();
        self.b.abs() <= self.a && self.b != -self.a.clone() && (self.a < c || (self.a == c && !self.b.is_negative()))
    }

    /// `0 < b < √D` and `|√D − 2a| < b`.
    pub fn is_reduced_real(&self) -> bool {
        let s = self.disc().sqrt();
        let two_a = &self.a * 2;
        self.b.is_positive() && self.b <= s && s < &two_a + &self.b && &two_a - &self.b <= s
    }

    /// Imaginary reduction: returns the reduced form and `λ` with `I = λ·J`.
    pub fn reduce_imaginary(&self) -> (IdealForm, FieldElement) {
        let mut cur = self.clone();
        cur.normalize_translate();
        let mut lambda = self.field.one();
        while !cur.is_reduced_imaginary() {
            let (next, l) = cur.rho();
            lambda = &lambda * &l;
            cur = next;
            cur.normalize_translate();
        }
        (cur, lambda)
    }

    /// Class invariant.
    pub fn class_key(&self) -> ClassKey {
        if self.field.is_real() {
            self.real_cycle()
                .into_iter()
                .map(|f| f.key())
                .min()
                .expect("nonempty cycle")
        } else {
            self.reduce_imaginary().0.key()
        }
    }

    /// The cycle of reduced ideals equivalent to `self` (real fields).
    pub fn real_cycle(&self) -> Vec<IdealForm> {
        let mut cur = self.clone();
        while !cur.is_reduced_real() {
            cur = cur.rho().0;
        }
        let start = cur.clone();
        let mut cycle = vec![start.clone()];
        loop {
            cur = cur.rho().0;
            if cur == start {
                return cycle;
            }
            cycle.push(cur.clone());
        }
    }

    /// Walk `ρ` until the unit ideal appears; returns `λ` with `I = (λ)`.
    pub fn principal_generator_real(&self) -> Option<FieldElement> {
        let mut cur = self.clone();
        let mut lambda = self.field.one();
        let mut seen: HashSet<ClassKey> = HashSet::new();
        loop {
            if cur.is_unit_ideal() {
                return Some(lambda);
            }
            if cur.is_reduced_real() && !seen.insert(cur.key()) {
                return None;
            }
            let (next, l) = cur.rho();
            lambda = &lambda * &l;
            cur = next;
        }
    }
}
