//! How rational primes decompose in `O_K`, and explicit failures of unique
//! factorisation of elements.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::claims::{ClaimId, ClaimOutcome};
use crate::classgroup;
use crate::error::{Error, Result};
use crate::ideals::FractionalIdeal;
use crate::quadfield::{elements_of_norm, is_irreducible, FieldElement, QuadraticField};
use crate::util::{factorize, is_prime, kronecker_prime, primes_up_to};

/// Largest rational prime tried by the witness search.
pub const WITNESS_PRIME_BOUND: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingReport {
    pub p: i64,
    pub kind: SplitKind,
    /// One prime (inert or ramified) or two conjugate primes (split).
    pub primes_above: Vec<FractionalIdeal>,
}

impl SplittingReport {
    /// `∏ P^e` over the primes above `p`, with `e = 2` when ramified.
    pub fn product(&self) -> FractionalIdeal {
        let mut acc = FractionalIdeal::unit(self.primes_above[0].field());
        for p in &self.primes_above {
            acc = acc.mul(p).expect("same field");
        }
        if self.kind == SplitKind::Ramified {
            acc = acc.mul(&self.primes_above[0]).expect("same field");
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "kind": self.kind,
            "primes_above": self.primes_above.iter().map(FractionalIdeal::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn splitting_type(field: QuadraticField, p: i64) -> Result<SplittingReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let kind = match kronecker_prime(field.discriminant(), p) {
        0 => SplitKind::Ramified,
        1 => SplitKind::Split,
        _ => SplitKind::Inert,
    };
    let prime = field.from_int(p);
    let primes_above = if kind == SplitKind::Inert {
        vec![FractionalIdeal::principal(&prime)?]
    } else {
        // Roots of ω² − tω + n modulo p.
        let t = field.omega_trace();
        let n = field.omega_norm();
        let roots: Vec<i64> = (0..p).filter(|&r| (r * r - t * r + n).rem_euclid(p) == 0).collect();
        let take = if kind == SplitKind::Ramified { 1 } else { 2 };
        roots
            .iter()
            .take(take)
            .map(|&r| {
                let gen = &field.omega() - &field.from_int(r);
                FractionalIdeal::from_generators(field, &[prime.clone(), gen])
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(SplittingReport { p, kind, primes_above })
}

/// Prime divisors of the discriminant.
pub fn ramified_set(field: QuadraticField) -> Vec<i64> {
    factorize(field.discriminant()).into_iter().map(|(p, _)| p).collect()
}

/// Four pairwise non-associate irreducibles with `p₁p₂ = q₁q₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub p1: FieldElement,
    pub p2: FieldElement,
    pub q1: FieldElement,
    pub q2: FieldElement,
}

impl Witness {
    pub fn elements(&self) -> [&FieldElement; 4] {
        [&self.p1, &self.p2, &self.q1, &self.q2]
    }

    /// Exact product equality, pairwise non-associateness, irreducibility.
    pub fn verify(&self) -> bool {
        if &self.p1 * &self.p2 != &self.q1 * &self.q2 {
            return false;
        }
        let els = self.elements();
        for i in 0..4 {
            for j in i + 1..4 {
                if els[i].is_associate(els[j]) {
                    return false;
                }
            }
        }
        els.iter().all(|x| is_irreducible(x).unwrap_or(false))
    }

    /// The module `⟨1/p₁, 1/q₁⟩` from the factorisation example.
    pub fn example_module(&self) -> FractionalIdeal {
        let field = self.p1.field();
        FractionalIdeal::from_generators(
            field,
            &[self.p1.inverse().expect("nonzero"), self.q1.inverse().expect("nonzero")],
        )
        .expect("nonzero module")
    }

    /// `{p1, p2, q1, q2, norms, verified}`.
    pub fn to_json(&self) -> Value {
        json!({
            "p1": self.p1.to_string(),
            "p2": self.p2.to_string(),
            "q1": self.q1.to_string(),
            "q2": self.q2.to_string(),
            "norms": self.elements().iter().map(|x| crate::util::rational_json(&x.norm())).collect::<Vec<_>>(),
            "verified": self.verify(),
        })
    }
}

/// Searches rational primes `p < q ≤ 50` that stay irreducible, paired with
/// an irreducible `z` of norm `±pq`: then `p·q = z·(pq/z)`.
pub fn nonufd_witness(field: QuadraticField) -> Option<Witness> {
    let primes: Vec<i64> = primes_up_to(WITNESS_PRIME_BOUND)
        .into_iter()
        .filter(|&p| is_irreducible(&field.from_int(p)).unwrap_or(false))
        .collect();
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            pairs.push((p, q));
        }
    }
    pairs.sort_by_key(|&(p, q)| (p * q, p));
    for (p, q) in pairs {
        let pq = field.from_int(p * q);
        for z in elements_of_norm(field, &BigInt::from(p * q)) {
            let w = pq.checked_div(&z).expect("nonzero");
            if !w.is_integral() || z.is_associate(&w) {
                continue;
            }
            let witness = Witness {
                p1: field.from_int(p),
                p2: field.from_int(q),
                q1: z,
                q2: w,
            };
            if witness.verify() {
                return Some(witness);
            }
        }
    }
    None
}

/// `O_K` has a factorisation collision iff `h > 1`. The `h = 1` side is a
/// proof; an empty witness search is only "none below the bound".
pub fn check_ufd_iff(field: QuadraticField) -> ClaimOutcome {
    let h = classgroup::class_number(field);
    let witness = nonufd_witness(field);
    match (witness, h == 1) {
        (None, true) => ClaimOutcome::holds(
            ClaimId::UfdIff,
            field.d(),
            Some(json!({ "h": h, "witness": null, "prime_bound": WITNESS_PRIME_BOUND })),
        ),
        (Some(w), false) => {
            let module = w.example_module();
            ClaimOutcome::holds(
                ClaimId::UfdIff,
                field.d(),
                Some(json!({
                    "h": h,
                    "witness": w.to_json(),
                    "example_module": module.to_json(),
                    "example_module_principal": module.is_principal().is_some(),
                })),
            )
        }
        (Some(w), true) => ClaimOutcome::fails(ClaimId::UfdIff, field.d(), json!({ "h": h, "witness": w.to_json() })),
        (None, false) => ClaimOutcome::undecided(
            ClaimId::UfdIff,
            field.d(),
            Some(json!({ "h": h, "witness": null, "prime_bound": WITNESS_PRIME_BOUND })),
        ),
    }
}

/// Norms of the primes above `p` (`p` or `p²`).
pub fn prime_norms(report: &SplittingReport) -> Vec<BigRational> {
    report.primes_above.iter().map(|p| p.norm().abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn splitting_examples() {
        let f = k(-5);
        let r = splitting_type(f, 2).unwrap();
        assert_eq!(r.kind, SplitKind::Ramified);
        let p = FractionalIdeal::from_generators(f, &[f.from_int(2), f.int_element(1, 1)]).unwrap();
        assert_eq!(r.primes_above, vec![p.clone()]);
        assert_eq!(p.mul(&p).unwrap(), FractionalIdeal::principal(&f.from_int(2)).unwrap());

        let r = splitting_type(f, 3).unwrap();
        assert_eq!(r.kind, SplitKind::Split);
        let a = FractionalIdeal::from_generators(f, &[f.from_int(3), f.int_element(1, 1)]).unwrap();
        let b = FractionalIdeal::from_generators(f, &[f.from_int(3), f.int_element(1, -1)]).unwrap();
        assert!(r.primes_above.contains(&a) && r.primes_above.contains(&b));
        assert_eq!(r.product(), FractionalIdeal::principal(&f.from_int(3)).unwrap());

        assert_eq!(splitting_type(f, 11).unwrap().kind, SplitKind::Inert);
        assert_eq!(splitting_type(f, 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn ramified_sets() {
        assert_eq!(ramified_set(k(-5)), vec![2, 5]);
        assert_eq!(ramified_set(k(-23)), vec![23]);
        assert_eq!(ramified_set(k(-1)), vec![2]);
    }

    #[test]
    fn witness_for_minus_five() {
        let f = k(-5);
        let w = nonufd_witness(f).unwrap();
        assert_eq!(w.p1, f.from_int(2));
        assert_eq!(w.p2, f.from_int(3));
        assert_eq!(w.q1, f.int_element(1, 1));
        assert_eq!(w.q2, f.int_element(1, -1));
        assert!(w.verify());
        assert!(nonufd_witness(k(-1)).is_none());
        assert!(nonufd_witness(k(-23)).unwrap().verify());
    }

    #[test]
    fn ufd_equivalence() {
        use crate::claims::ClaimStatus;
        for d in [-5, -1, 2] {
            assert_eq!(check_ufd_iff(k(d)).status, ClaimStatus::Holds, "d = {d}");
        }
    }
}
