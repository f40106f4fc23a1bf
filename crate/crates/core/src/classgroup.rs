//! Class groups of quadratic fields.
//!
//! Every class contains an integral ideal of norm at most the Minkowski
//! bound, so enumerating those ideals finds all classes. Classes are told
//! apart by [`FractionalIdeal::class_key`], and the group structure comes
//! from the full multiplication table.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::abelian::FiniteAbelianGroup;
use crate::claims::{ClaimId, ClaimOutcome};
use crate::forms::ClassKey;
use crate::ideals::FractionalIdeal;
use crate::quadfield::QuadraticField;
use crate::splitting;
use crate::util::{primes_up_to, rational_json};

#[derive(Debug, Clone)]
pub struct ClassGroup {
    field: QuadraticField,
    pub h: u64,
    /// Invariant factors `d₁ | d₂ | …`, all greater than one.
    pub divisors: Vec<u64>,
    /// One integral ideal per class, smallest norm first.
    pub reps: Vec<FractionalIdeal>,
    /// `generators[i]` has order `divisors[i]` and the group is their direct sum.
    pub generators: Vec<FractionalIdeal>,
    group: FiniteAbelianGroup,
    keys: HashMap<ClassKey, usize>,
    /// For S-class groups: the coset index of every class of the full group.
    coset_of: Option<(HashMap<ClassKey, usize>, Vec<usize>)>,
}

impl ClassGroup {
    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Index (into `reps`) of the class containing `ideal`.
    pub fn class_index(&self, ideal: &FractionalIdeal) -> usize {
        let key = ideal.class_key();
        match &self.coset_of {
            None => self.keys[&key],
            Some((full_keys, coset_of)) => coset_of[full_keys[&key]],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.h == 1
    }

    /// `{d, D, h, divisors, reps, minkowski}`.
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.field.d(),
            "D": self.field.discriminant(),
            "h": self.h,
            "divisors": self.divisors,
            "reps": self.reps.iter().map(FractionalIdeal::to_json).collect::<Vec<_>>(),
            "minkowski": rational_json(&minkowski_bound(self.field)),
        })
    }

    /// `C2 × C2`-style structure string; `C1` for the trivial group.
    pub fn structure(&self) -> String {
        if self.divisors.is_empty() {
            "C1".to_string()
        } else {
            self.divisors
                .iter()
                .map(|d| format!("C{d}"))
                .collect::<Vec<_>>()
                .join(" × ")
        }
    }
}

// Certified rational enclosure of π: 3.141592653589793 < π < 3.141592653589794.
const PI_LOW_NUM: u64 = 3_141_592_653_589_793;
const PI_SCALE: u64 = 1_000_000_000_000_000;

/// Upper bound on `√n` with denominator `10¹²`.
fn sqrt_upper(n: &BigInt) -> BigRational {
    let scale = BigInt::from(10u64).pow(12);
    let root = (n * &scale * &scale).sqrt() + 1;
    BigRational::new(root, scale)
}

/// Exact rational upper bound for the Minkowski constant:
/// `(2/π)√|D|` for imaginary fields, `√D / 2` for real ones.
pub fn minkowski_bound(field: QuadraticField) -> BigRational {
    let disc = BigInt::from(field.discriminant().unsigned_abs());
    let root = sqrt_upper(&disc);
    if field.is_real() {
        root / BigInt::from(2)
    } else {
        let pi_low = BigRational::new(BigInt::from(PI_LOW_NUM), BigInt::from(PI_SCALE));
        root * BigInt::from(2) / pi_low
    }
}

/// All integral ideals of norm at most `bound`, ordered by norm then HNF.
pub fn integral_ideals_up_to(field: QuadraticField, bound: u64) -> Vec<FractionalIdeal> {
    let mut out = Vec::new();
    let omega = field.omega();
    for a in 1..=bound {
        for b in 0..a {
            let beta = &field.int_element(b as i64, 0) + &omega;
            let n = beta.norm().to_integer();
            if !(n % BigInt::from(a)).is_zero() {
                continue;
            }
            let mut k = 1u64;
            while k * k * a <= bound {
                let ideal = FractionalIdeal::from_hnf(
                    field,
                    BigInt::from(k * a),
                    BigInt::from(k * b),
                    BigInt::from(k),
                    BigInt::from(1),
                )
                .expect("primitive ideal data is valid");
                out.push(ideal);
                k += 1;
            }
        }
    }
    out.sort_by(|x, y| {
        let kx = (x.norm(), x.hnf().0.clone(), x.hnf().1.clone(), x.hnf().2.clone());
        let ky = (y.norm(), y.hnf().0.clone(), y.hnf().1.clone(), y.hnf().2.clone());
        kx.cmp(&ky)
    });
    out
}

pub fn class_group(field: QuadraticField) -> ClassGroup {
    let bound = minkowski_bound(field)
        .floor()
        .to_integer()
        .to_u64()
        .expect("small bound");
    let mut reps: Vec<FractionalIdeal> = Vec::new();
    let mut keys: HashMap<ClassKey, usize> = HashMap::new();
    for ideal in integral_ideals_up_to(field, bound.max(1)) {
        let key = ideal.class_key();
        if let std::collections::hash_map::Entry::Vacant(slot) = keys.entry(key) {
            slot.insert(reps.len());
            reps.push(ideal);
        }
    }
    let h = reps.len();
    let table: Vec<Vec<usize>> = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    let prod = reps[i].mul(&reps[j]).expect("same field");
                    keys[&prod.class_key()]
                })
                .collect()
        })
        .collect();
    let identity = keys[&FractionalIdeal::unit(field).class_key()];
    let group = FiniteAbelianGroup::new(table, identity);
    let divisors = group.invariant_factors();
    let basis = group.basis_for(&divisors).expect("invariant factors admit a basis");
    let generators = basis.iter().map(|&i| reps[i].clone()).collect();
    cache_class_number(field, h as u64);
    ClassGroup {
        field,
        h: h as u64,
        divisors,
        reps,
        generators,
        group,
        keys,
        coset_of: None,
    }
}

fn class_number_cache() -> &'static Mutex<HashMap<i64, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_class_number(field: QuadraticField, h: u64) {
    class_number_cache().lock().expect("cache lock").insert(field.d(), h);
}

/// Class number, cached per field.
pub fn class_number(field: QuadraticField) -> u64 {
    if let Some(&h) = class_number_cache().lock().expect("cache lock").get(&field.d()) {
        return h;
    }
    class_group(field).h
}

/// Class indices of the prime ideals above the rational primes up to the
/// Minkowski bound.
pub fn prime_classes(cl: &ClassGroup) -> Vec<usize> {
    let bound = minkowski_bound(cl.field)
        .floor()
        .to_integer()
        .to_i64()
        .expect("small bound");
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let rep = splitting::splitting_type(cl.field, p).expect("p is prime");
        for ideal in &rep.primes_above {
            out.push(cl.class_index(ideal));
        }
    }
    out
}

/// Class group of `O_K` with the primes above `primes` inverted:
/// `Cl(K)` modulo the classes of those primes.
pub fn s_class_group(field: QuadraticField, primes: &[i64]) -> ClassGroup {
    let full = class_group(field);
    let mut gens = Vec::new();
    for &p in primes {
        let rep = splitting::splitting_type(field, p).expect("S must contain primes");
        for ideal in &rep.primes_above {
            gens.push(full.class_index(ideal));
        }
    }
    let sub = full.group.subgroup(&gens);
    let (quot, coset_of, coset_reps) = full.group.quotient(&sub);
    let divisors = quot.invariant_factors();
    let basis = quot.basis_for(&divisors).expect("invariant factors admit a basis");
    let reps: Vec<FractionalIdeal> = coset_reps.iter().map(|&i| full.reps[i].clone()).collect();
    let generators = basis.iter().map(|&i| reps[i].clone()).collect();
    ClassGroup {
        field,
        h: quot.order() as u64,
        divisors,
        reps,
        generators,
        group: quot,
        keys: HashMap::new(),
        coset_of: Some((full.keys, coset_of)),
    }
}

/// Every class is supported on the ramified primes, i.e. the class group
/// with the ramified primes inverted is trivial.
pub fn check_s_class_trivial(field: QuadraticField) -> ClaimOutcome {
    let ramified = splitting::ramified_set(field);
    let s_group = s_class_group(field, &ramified);
    if s_group.is_trivial() {
        return ClaimOutcome::holds(
            ClaimId::L1_2,
            field.d(),
            Some(json!({
                "s": ramified,
                "h": class_number(field),
                "s_class_number": 1,
            })),
        );
    }
    // Smallest representative whose coset is nontrivial.
    let idx = (0..s_group.reps.len())
        .find(|&i| i != s_group.group.identity())
        .expect("nontrivial group");
    let offender = s_group.reps[idx].clone();
    let order = s_group.group.element_order(idx);
    ClaimOutcome::fails(
        ClaimId::L1_2,
        field.d(),
        json!({
            "s": ramified,
            "class": offender.to_json(),
            "order_in_s_class_group": order,
            "s_class_number": s_group.h,
            "h": class_number(field),
        }),
    )
}

/// Re-derive an S-class group failure from its witness.
pub fn reverify_s_class_witness(witness: &Value) -> bool {
    let Some(class) = witness.get("class") else {
        return false;
    };
    let Ok(ideal) = FractionalIdeal::from_json(class) else {
        return false;
    };
    let Some(s) = witness.get("s").and_then(Value::as_array) else {
        return false;
    };
    let primes: Vec<i64> = s.iter().filter_map(Value::as_i64).collect();
    let s_group = s_class_group(ideal.field(), &primes);
    let idx = s_group.class_index(&ideal);
    let claimed = witness.get("order_in_s_class_group").and_then(Value::as_u64);
    idx != s_group.group.identity() && claimed == Some(s_group.group.element_order(idx) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::claims::ClaimStatus;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn minkowski_examples() {
        let b = minkowski_bound(k(-5));
        assert!(b <= BigRational::from_integer(3.into()));
        assert!(b > BigRational::new(2847.into(), 1000.into()));
        assert!(minkowski_bound(k(-1)) <= BigRational::from_integer(2.into()));
        assert!(minkowski_bound(k(5)) <= BigRational::from_integer(2.into()));
    }

    #[test]
    fn class_group_examples() {
        let cl = class_group(k(-5));
        assert_eq!((cl.h, cl.divisors.clone()), (2, vec![2]));
        let p = FractionalIdeal::from_generators(k(-5), &[k(-5).from_int(2), k(-5).int_element(1, 1)]).unwrap();
        assert_eq!(cl.generators, vec![p]);
        assert_eq!(class_group(k(-23)).divisors, vec![3]);
        assert_eq!(class_group(k(-1)).h, 1);
        assert_eq!(class_group(k(-21)).divisors, vec![2, 2]);
        assert_eq!(class_group(k(10)).h, 2);
        assert_eq!(class_group(k(79)).h, 3);
        assert_eq!(class_group(k(82)).divisors, vec![4]);
    }

    #[test]
    fn s_class_group_examples() {
        assert_eq!(s_class_group(k(-5), &[2, 5]).h, 1);
        assert_eq!(s_class_group(k(-23), &[23]).h, 3);
        assert_eq!(s_class_group(k(-21), &[]).h, 4);
    }

    #[test]
    fn s_class_claim_examples() {
        assert_eq!(check_s_class_trivial(k(-5)).status, ClaimStatus::Holds);
        let out = check_s_class_trivial(k(-23));
        assert_eq!(out.status, ClaimStatus::Fails);
        let w = out.witness.unwrap();
        assert_eq!(w["order_in_s_class_group"], 3);
        assert!(reverify_s_class_witness(&w));
        assert_eq!(check_s_class_trivial(k(-1)).status, ClaimStatus::Holds);
    }
}
