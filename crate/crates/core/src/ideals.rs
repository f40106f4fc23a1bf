//! Fractional ideals of `O_K` as exact lattices.
//!
//! An ideal is stored as `L / den` where `L ⊂ Z²` is given by its Hermite
//! normal form in `(1, ω)` coordinates, i.e. `L = aZ + (b + cω)Z` with
//! `0 ≤ b < a`, `c | a`, `c | b`. Equality of ideals is equality of the
//! canonical data.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classgroup;
use crate::error::{Error, Result};
use crate::forms::{ClassKey, IdealForm};
use crate::lattice::Lattice;
use crate::quadfield::{FieldElement, QuadraticField};
use crate::util::{int_json, json_int};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FractionalIdeal {
    field: QuadraticField,
    lattice: Lattice,
}

/// Outcome of the σ-descent check on one ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    /// `σI = I` as ideals.
    pub ideal_fixed: bool,
    /// `σI · I⁻¹` is principal.
    pub class_fixed: bool,
    /// `I` itself is principal.
    pub class_trivial: bool,
    /// σ-fixed class that is nevertheless nontrivial.
    pub counterexample: bool,
}

impl FractionalIdeal {
    /// The `O_K`-module generated by `gens`.
    pub fn from_generators(field: QuadraticField, gens: &[FieldElement]) -> Result<FractionalIdeal> {
        let omega = field.omega();
        let mut vecs = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            if g.field() != field {
                return Err(Error::FieldMismatch(field.d(), g.field().d()));
            }
            if g.is_zero() {
                continue;
            }
            vecs.push(g.coords().to_vec());
            vecs.push((g * &omega).coords().to_vec());
        }
        if vecs.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let lattice = Lattice::from_generators(2, &vecs).ok_or(Error::ZeroIdeal)?;
        Ok(FractionalIdeal { field, lattice })
    }

    /// Build from HNF data, checking that the lattice is an `O_K`-module.
    pub fn from_hnf(field: QuadraticField, a: BigInt, b: BigInt, c: BigInt, den: BigInt) -> Result<FractionalIdeal> {
        if a.is_zero() || c.is_zero() || den.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let lattice = Lattice::from_integer_generators(2, vec![vec![a, BigInt::zero()], vec![b, c]], den)
            .ok_or(Error::ZeroIdeal)?;
        let ideal = FractionalIdeal { field, lattice };
        let omega = field.omega();
        for g in ideal.z_basis() {
            if !ideal.contains(&(&g * &omega)) {
                return Err(Error::Parse(format!("lattice {ideal} is not closed under ω")));
            }
        }
        Ok(ideal)
    }

    pub fn unit(field: QuadraticField) -> FractionalIdeal {
        FractionalIdeal::from_generators(field, &[field.one()]).expect("nonzero")
    }

    pub fn principal(x: &FieldElement) -> Result<FractionalIdeal> {
        FractionalIdeal::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// HNF entries `(a, b, c)` of the numerator lattice.
    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        let r = self.lattice.rows();
        (&r[0][0], &r[1][0], &r[1][1])
    }

    pub fn den(&self) -> &BigInt {
        self.lattice.den()
    }

    /// `Z`-basis `{a/den, (b + cω)/den}`.
    pub fn z_basis(&self) -> [FieldElement; 2] {
        let basis = self.lattice.basis();
        [
            self.field.element(basis[0][0].clone(), basis[0][1].clone()),
            self.field.element(basis[1][0].clone(), basis[1][1].clone()),
        ]
    }

    pub fn is_integral(&self) -> bool {
        self.den().is_one()
    }

    pub fn is_unit_ideal(&self) -> bool {
        *self == FractionalIdeal::unit(self.field)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.field() == self.field && self.lattice.contains(&x.coords())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &FractionalIdeal) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn mul(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.d(), other.field.d()));
        }
        let mut prods = Vec::with_capacity(4);
        for x in self.z_basis() {
            for y in other.z_basis() {
                prods.push(&x * &y);
            }
        }
        FractionalIdeal::from_generators(self.field, &prods)
    }

    pub fn scale(&self, x: &FieldElement) -> Result<FractionalIdeal> {
        let gens: Vec<FieldElement> = self.z_basis().iter().map(|g| g * x).collect();
        FractionalIdeal::from_generators(self.field, &gens)
    }

    pub fn pow(&self, e: u32) -> FractionalIdeal {
        let mut acc = FractionalIdeal::unit(self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Integer power, negative exponents through the dual.
    pub fn pow_signed(&self, e: i64) -> FractionalIdeal {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.dual().pow((-e) as u32)
        }
    }

    /// The module quotient `(O_K : I) = {x ∈ K : xI ⊆ O_K}`.
    ///
    /// With `I = L/den`, `x ∈ (O_K : L)` iff the four integer linear forms
    /// giving the coordinates of `x·v₁`, `x·v₂` take integer values. Those
    /// forms span a lattice `B`, and the solution set is `B⁻¹Z²`.
    pub fn dual(&self) -> FractionalIdeal {
        let rows = self.lattice.rows();
        let t = BigInt::from(self.field.omega_trace());
        let n = BigInt::from(self.field.omega_norm());
        let mut forms = Vec::with_capacity(4);
        for v in rows {
            let (p, q) = (&v[0], &v[1]);
            // v·(s + tω) = (p s − n q t) + (q s + (p + q·tr) t) ω
            forms.push(vec![p.clone(), -(&n * q)]);
            forms.push(vec![q.clone(), p + q * &t]);
        }
        let b = crate::lattice::hnf(2, forms).expect("nonzero ideal");
        // B = [[b00, 0], [b10, b11]] acting on column vectors (s, t).
        let det = &b[0][0] * &b[1][1];
        let col0 = [
            BigRational::new(b[1][1].clone(), det.clone()),
            BigRational::new(-b[1][0].clone(), det.clone()),
        ];
        let col1 = [BigRational::zero(), BigRational::new(b[0][0].clone(), det.clone())];
        let den = BigRational::from_integer(self.den().clone());
        let gens = [
            self.field.element(&col0[0] * &den, &col0[1] * &den),
            self.field.element(&col1[0] * &den, &col1[1] * &den),
        ];
        FractionalIdeal::from_generators(self.field, &gens).expect("nonzero dual")
    }

    pub fn inverse(&self) -> FractionalIdeal {
        self.dual()
    }

    /// `[O_K : I]` extended multiplicatively to fractional ideals.
    pub fn norm(&self) -> BigRational {
        self.lattice.covolume()
    }

    pub fn galois_conjugate(&self) -> FractionalIdeal {
        let gens: Vec<FieldElement> = self.z_basis().iter().map(|g| g.conjugate()).collect();
        FractionalIdeal::from_generators(self.field, &gens).expect("nonzero")
    }

    /// Split `I = (content/den) · P` with `P = [A, B + ω]` primitive integral.
    fn primitive_part(&self) -> (BigRational, BigInt, BigInt) {
        let (a, b, c) = self.hnf();
        let scale = BigRational::new(c.clone(), self.den().clone());
        (scale, a / c, b / c)
    }

    fn primitive_form(&self) -> (BigRational, IdealForm) {
        let (scale, a, b) = self.primitive_part();
        (scale, IdealForm::from_primitive(self.field, a, b))
    }

    /// Invariant that is equal for two ideals iff they lie in the same class.
    pub fn class_key(&self) -> ClassKey {
        self.primitive_form().1.class_key()
    }

    /// A generator `γ` with `(γ) = I`, if `I` is principal.
    ///
    /// Imaginary fields enumerate the lattice points of the primitive part
    /// with the right norm (a finite ellipse); real fields walk the cycle of
    /// reduced ideals and read the generator off the accumulated steps.
    pub fn is_principal(&self) -> Option<FieldElement> {
        let (scale, a, b) = self.primitive_part();
        let gen = if self.field.is_real() {
            IdealForm::from_primitive(self.field, a, b).principal_generator_real()?
        } else {
            primitive_generator_imaginary(self.field, &a, &b)?
        };
        let g = gen.scale(&scale);
        debug_assert_eq!(&FractionalIdeal::principal(&g).expect("nonzero"), self);
        Some(g)
    }

    /// Smallest `n ≥ 1` with `Iⁿ` principal.
    pub fn class_order(&self) -> Result<u64> {
        let h = classgroup::class_number(self.field);
        let principal_key = FractionalIdeal::unit(self.field).class_key();
        let mut power = self.clone();
        for n in 1..=h {
            if power.class_key() == principal_key {
                return Ok(n);
            }
            power = power.mul(self)?;
        }
        Err(Error::Internal(format!(
            "ideal {self} has no principal power up to the class number {h}"
        )))
    }

    /// `I ~ J` in the class group.
    pub fn equivalent(&self, other: &FractionalIdeal) -> bool {
        self.class_key() == other.class_key()
    }

    pub fn descent_check(&self) -> DescentReport {
        let conj = self.galois_conjugate();
        let ideal_fixed = conj == *self;
        let class_fixed = conj.mul(&self.dual()).expect("same field").is_principal().is_some();
        let class_trivial = self.is_principal().is_some();
        DescentReport {
            ideal_fixed,
            class_fixed,
            class_trivial,
            counterexample: class_fixed && !class_trivial,
        }
    }

    /// `(g₁, g₂)` from the Z-basis, e.g. `(2, 1+√-5)`.
    pub fn generators_text(&self) -> String {
        let [g1, g2] = self.z_basis();
        format!("({g1}, {g2})")
    }

    /// `[a b; 0 c]/den @ d=<d>`.
    pub fn to_text(&self) -> String {
        let (a, b, c) = self.hnf();
        format!("[{a} {b}; 0 {c}]/{} @ d={}", self.den(), self.field.d())
    }

    pub fn parse_text(text: &str) -> Result<FractionalIdeal> {
        let err = || Error::Parse(format!("malformed ideal `{text}`"));
        let (mat, rest) = text.trim().split_once(']').ok_or_else(err)?;
        let mat = mat.trim().strip_prefix('[').ok_or_else(err)?;
        let (row0, row1) = mat.split_once(';').ok_or_else(err)?;
        let r0: Vec<&str> = row0.split_whitespace().collect();
        let r1: Vec<&str> = row1.split_whitespace().collect();
        if r0.len() != 2 || r1.len() != 2 || r1[0] != "0" {
            return Err(err());
        }
        let rest = rest.trim().strip_prefix('/').ok_or_else(err)?;
        let (den, d) = rest.split_once('@').ok_or_else(err)?;
        let d = d.trim().strip_prefix("d=").ok_or_else(err)?;
        let parse = |s: &str| s.trim().parse::<BigInt>().map_err(|_| err());
        let field = QuadraticField::new(d.trim().parse().map_err(|_| err())?)?;
        let ideal = FractionalIdeal::from_hnf(field, parse(r0[0])?, parse(r0[1])?, parse(r1[1])?, parse(den)?)?;
        if ideal.to_text() != format!("[{} {}; 0 {}]/{} @ d={}", r0[0], r0[1], r1[1], den.trim(), d.trim()) {
            return Err(Error::Parse(format!("`{text}` is not in canonical form")));
        }
        Ok(ideal)
    }

    /// `{d, basis: [[a,b],[0,c]], den}`.
    pub fn to_json(&self) -> Value {
        let (a, b, c) = self.hnf();
        serde_json::json!({
            "d": self.field.d(),
            "basis": [[int_json(a), int_json(b)], [0, int_json(c)]],
            "den": int_json(self.den()),
        })
    }

    pub fn from_json(v: &Value) -> Result<FractionalIdeal> {
        let err = || Error::Parse(format!("malformed ideal JSON {v}"));
        let d = v.get("d").and_then(Value::as_i64).ok_or_else(err)?;
        let basis = v.get("basis").ok_or_else(err)?;
        let entry = |i: usize, j: usize| basis.get(i).and_then(|r| r.get(j)).and_then(json_int).ok_or_else(err);
        let den = v.get("den").and_then(json_int).ok_or_else(err)?;
        if !entry(1, 0)?.is_zero() {
            return Err(err());
        }
        let field = QuadraticField::new(d)?;
        let ideal = FractionalIdeal::from_hnf(field, entry(0, 0)?, entry(0, 1)?, entry(1, 1)?, den)?;
        if ideal.to_json() != *v {
            return Err(Error::Parse(format!("ideal JSON {v} is not in canonical form")));
        }
        Ok(ideal)
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Generator of the primitive ideal `[a, b + ω]` in an imaginary field.
fn primitive_generator_imaginary(field: QuadraticField, a: &BigInt, b: &BigInt) -> Option<FieldElement> {
    // x = u·a + w·β with β = b + ω = (b' + √D)/2. N(x) = a·f(u, w) where
    // f = a u² + b' u w + c w² and 4a·f = (2au + b'w)² + |D| w². We need f = 1.
    let b_prime = if field.omega_is_half() { b * 2 + 1 } else { b * 2 };
    let abs_d = BigInt::from(field.discriminant()).abs();
    let four_a = a * 4;
    let two_a = a * 2;
    let quotient: BigInt = &four_a / &abs_d;
    let w_max = num_integer::Roots::sqrt(&quotient);
    let beta = &field.from_bigint(b.clone()) + &field.omega();
    let mut best: Option<FieldElement> = None;
    let mut w = -w_max.clone();
    while w <= w_max {
        let rest = &four_a - &abs_d * &w * &w;
        if let Some(t) = crate::util::exact_sqrt(&rest) {
            for t in [t.clone(), -t] {
                let num: BigInt = &t - &b_prime * &w;
                if num.is_multiple_of(&two_a) {
                    let u = num / &two_a;
                    let x = &field.from_bigint(&u * a) + &beta.scale(&BigRational::from_integer(w.clone()));
                    if best
                        .as_ref()
                        .is_none_or(|cur| x.simplicity_key() < cur.simplicity_key())
                    {
                        best = Some(x);
                    }
                }
            }
        }
        w += 1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    fn ideal(d: i64, gens: &[(i64, i64)]) -> FractionalIdeal {
        let f = k(d);
        let g: Vec<_> = gens.iter().map(|&(a, b)| f.int_element(a, b)).collect();
        FractionalIdeal::from_generators(f, &g).unwrap()
    }

    fn hnf_tuple(i: &FractionalIdeal) -> (i64, i64, i64, i64) {
        use num_traits::ToPrimitive;
        let (a, b, c) = i.hnf();
        (
            a.to_i64().unwrap(),
            b.to_i64().unwrap(),
            c.to_i64().unwrap(),
            i.den().to_i64().unwrap(),
        )
    }

    #[test]
    fn generators_examples() {
        let unit = ideal(-5, &[(1, 0)]);
        assert_eq!(hnf_tuple(&unit), (1, 0, 1, 1));
        let p2 = ideal(-5, &[(2, 0), (1, 1)]);
        assert_eq!(hnf_tuple(&p2), (2, 1, 1, 1));
        assert!(p2.contains(&k(-5).from_int(2)));
        assert!(p2.contains(&k(-5).int_element(1, 1)));
        assert_eq!(
            FractionalIdeal::from_generators(k(-5), &[k(-5).zero()]),
            Err(Error::ZeroIdeal)
        );
    }

    #[test]
    fn non_principal_module_example() {
        let f = k(-5);
        let p1 = f.from_int(2);
        let q1 = f.int_element(1, 1);
        let m = FractionalIdeal::from_generators(f, &[p1.inverse().unwrap(), q1.inverse().unwrap()]).unwrap();
        let scaled = m.scale(&(&p1 * &q1)).unwrap();
        assert_eq!(scaled, FractionalIdeal::from_generators(f, &[q1, p1]).unwrap());
    }

    #[test]
    fn multiplication_examples() {
        let p = ideal(-5, &[(2, 0), (1, 1)]);
        let pbar = ideal(-5, &[(2, 0), (1, -1)]);
        let two = ideal(-5, &[(2, 0)]);
        assert_eq!(p.mul(&pbar).unwrap(), two);
        assert_eq!(p.mul(&p).unwrap(), two);
        assert_eq!(p.mul(&FractionalIdeal::unit(k(-5))).unwrap(), p);
        assert!(matches!(
            p.mul(&FractionalIdeal::unit(k(-3))),
            Err(Error::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn dual_examples() {
        let unit = FractionalIdeal::unit(k(-5));
        assert_eq!(unit.dual(), unit);
        let p = ideal(-5, &[(2, 0), (1, 1)]);
        let d = p.dual();
        let f = k(-5);
        let half = BigRational::new(1.into(), 2.into());
        let expected = FractionalIdeal::from_generators(f, &[f.one(), f.element(half.clone(), half)]).unwrap();
        assert_eq!(d, expected);
        assert_eq!(d.den(), &BigInt::from(2));
        assert_eq!(p.mul(&d).unwrap(), unit);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(FractionalIdeal::unit(k(-5)).norm(), rat(1));
        assert_eq!(ideal(-5, &[(2, 0), (1, 1)]).norm(), rat(2));
        let x = k(-23).int_element(3, -2);
        assert_eq!(FractionalIdeal::principal(&x).unwrap().norm(), x.norm().abs());
    }

    #[test]
    fn principality_examples() {
        assert!(ideal(-5, &[(2, 0), (1, 1)]).is_principal().is_none());
        let g = ideal(-5, &[(2, 0)]).is_principal().unwrap();
        assert!(g.is_associate(&k(-5).from_int(2)));
        assert!(ideal(-23, &[(3, 0), (0, 1)]).is_principal().is_none());
        let p = ideal(13, &[(3, 0), (0, 1)]);
        assert_eq!(p.norm(), rat(3));
        let g = p.is_principal().unwrap();
        assert_eq!(g.norm().abs(), rat(3));
    }

    #[test]
    fn class_order_examples() {
        assert_eq!(FractionalIdeal::unit(k(-5)).class_order().unwrap(), 1);
        assert_eq!(ideal(-5, &[(2, 0), (1, 1)]).class_order().unwrap(), 2);
        let p = ideal(-23, &[(2, 0), (0, 1)]);
        assert_eq!(p.class_order().unwrap(), 3);
        let g = p.pow(3).is_principal().unwrap();
        assert_eq!(g.norm(), rat(8));
    }

    #[test]
    fn galois_examples() {
        let p = ideal(-5, &[(2, 0), (1, 1)]);
        assert_eq!(p.galois_conjugate(), ideal(-5, &[(2, 0), (1, -1)]));
        let q = ideal(-23, &[(2, 0), (0, 1)]);
        assert_eq!(q.galois_conjugate().galois_conjugate(), q);
        let n = q.norm();
        assert_eq!(
            q.mul(&q.galois_conjugate()).unwrap(),
            FractionalIdeal::principal(&k(-23).element(n, rat(0))).unwrap()
        );
    }

    #[test]
    fn descent_examples() {
        let r = ideal(-5, &[(7, 0)]).descent_check();
        assert!(r.ideal_fixed && r.class_fixed && r.class_trivial && !r.counterexample);
        let r = ideal(-5, &[(2, 0), (1, 1)]).descent_check();
        assert!(r.ideal_fixed && r.class_fixed && !r.class_trivial && r.counterexample);
        let r = ideal(-5, &[(0, 1)]).descent_check();
        assert!(r.ideal_fixed && r.class_trivial && !r.counterexample);
    }

    #[test]
    fn serialization_roundtrip() {
        let p = ideal(-23, &[(2, 0), (0, 1)]).dual();
        let t = p.to_text();
        assert_eq!(FractionalIdeal::parse_text(&t).unwrap(), p);
        let j = p.to_json();
        assert_eq!(FractionalIdeal::from_json(&j).unwrap(), p);
        assert!(FractionalIdeal::parse_text("[2 0; 0 1]/1 @ d=-5").is_err());
    }
}
