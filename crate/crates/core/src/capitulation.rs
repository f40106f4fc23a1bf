//! Making an ideal class principal in a cyclic extension.
//!
//! Let `M` be an integral ideal whose class has order `n ≥ 2`, and let
//! `Mⁿ = (α)`. In `L = K[x]/(xⁿ − α)` the graded order
//!
//! ```text
//! R = O_K ⊕ M⁻¹x ⊕ M⁻²x² ⊕ … ⊕ M^{1−n}x^{n−1}
//! ```
//!
//! is closed under multiplication (the top degree wraps through
//! `M⁻ⁿα = O_K`), contains `O_K[x]`, and satisfies `xR = MR`. So `M`
//! becomes principal in `R`, hence in the maximal order of `L`.
//!
//! Elements of `L` are flat vectors of `2n` rationals: the `(1, ω)`
//! coordinates of the coefficient of `x⁰`, then of `x¹`, and so on.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classgroup;
use crate::error::{Error, Result};
use crate::ideals::FractionalIdeal;
use crate::lattice::{determinant, Lattice};
use crate::quadfield::{fundamental_unit, nth_root, torsion_units, FieldElement, QuadraticField};
use crate::util::{factorize, int_json, lcm_of_denoms};

/// Default per-coordinate bound of the generator search.
pub const DEFAULT_BOUND: u64 = 50;
/// Candidates tried before the search gives up.
pub const DEFAULT_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CapitulationStatus {
    Found,
    Undecided,
}

/// The order `R` attached to an ideal class of order `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeOrder {
    field: QuadraticField,
    n: usize,
    ideal: FractionalIdeal,
    alpha: FieldElement,
    zbasis: Lattice,
}

impl RelativeOrder {
    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn ideal(&self) -> &FractionalIdeal {
        &self.ideal
    }

    /// `α` with `xⁿ = α` and `(α) = Mⁿ`.
    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn zbasis(&self) -> &Lattice {
        &self.zbasis
    }

    /// The generator `x`. Orders are only built for `n ≥ 2`.
    pub fn x(&self) -> Vec<BigRational> {
        let mut v = zero_vec(2 * self.n);
        v[2] = BigRational::one();
        v
    }

    /// Product in `K[x]/(xⁿ − α)`.
    pub fn mul(&self, u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
        let (a, b) = (split(self.field, u), split(self.field, v));
        let mut out = vec![self.field.zero(); self.n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let mut term = ai * bj;
                let mut k = i + j;
                if k >= self.n {
                    term = &term * &self.alpha;
                    k -= self.n;
                }
                out[k] = &out[k] + &term;
            }
        }
        flatten(&out)
    }

    /// Every basis vector times `x` and `ω` lands back in the order.
    pub fn is_closed(&self) -> bool {
        let x = self.x();
        let omega = embed(&self.field.omega(), self.n);
        self.zbasis
            .basis()
            .iter()
            .all(|b| self.zbasis.contains(&self.mul(b, &x)) && self.zbasis.contains(&self.mul(b, &omega)))
    }

    /// `xⁿ − α` is irreducible over `K`, so `L` is a field of degree `n`.
    pub fn is_genuine(&self) -> bool {
        let primes = factorize(self.n as i64);
        let no_roots = primes
            .iter()
            .all(|&(p, _)| matches!(nth_root(&self.alpha, p as u32), Ok(None)));
        let quartic_ok = !self.n.is_multiple_of(4) || {
            let quarter = (-&self.alpha).scale(&BigRational::new(BigInt::one(), BigInt::from(4)));
            matches!(nth_root(&quarter, 4), Ok(None))
        };
        no_roots && quartic_ok
    }

    /// `|N_{L/Q}(γ)|`, the index of `γR` in `R`.
    pub fn norm(&self, gamma: &[BigRational]) -> BigRational {
        let dim = 2 * self.n;
        let rows: Vec<Vec<BigRational>> = (0..dim)
            .map(|k| {
                let mut e = zero_vec(dim);
                e[k] = BigRational::one();
                self.mul(gamma, &e)
            })
            .collect();
        determinant(&rows).abs()
    }

    /// `x ↦ −x`, an automorphism of `R` when `n = 2`.
    pub fn negate_x(&self, v: &[BigRational]) -> Vec<BigRational> {
        v.iter()
            .enumerate()
            .map(|(k, c)| if (k / 2) % 2 == 1 { -c.clone() } else { c.clone() })
            .collect()
    }

    /// Human-readable form such as `x` or `(1+√-5) + 1/2·x`.
    pub fn format_element(&self, v: &[BigRational]) -> String {
        let parts = split(self.field, v);
        let mut out = String::new();
        for (j, c) in parts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let coeff = if c.is_rational() || j == 0 {
                c.to_string()
            } else {
                format!("({c})")
            };
            match j {
                0 => out.push_str(&coeff),
                _ => {
                    let xp = if j == 1 { "x".to_string() } else { format!("x^{j}") };
                    if c.is_one() {
                        out.push_str(&xp);
                    } else if (-c).is_one() {
                        let _ = write!(out, "-{xp}");
                    } else {
                        let _ = write!(out, "{coeff}·{xp}");
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn zero_vec(len: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); len]
}

fn split(field: QuadraticField, v: &[BigRational]) -> Vec<FieldElement> {
    v.chunks(2).map(|c| field.element(c[0].clone(), c[1].clone())).collect()
}

fn flatten(parts: &[FieldElement]) -> Vec<BigRational> {
    parts.iter().flat_map(|p| p.coords()).collect()
}

/// `y ∈ K` as the constant `y·x⁰` of `L`.
fn embed(y: &FieldElement, n: usize) -> Vec<BigRational> {
    let mut v = zero_vec(2 * n);
    let [a, b] = y.coords();
    v[0] = a;
    v[1] = b;
    v
}

/// Canonical choice among the unit multiples of a generator.
fn normalize_generator(alpha: &FieldElement) -> FieldElement {
    let field = alpha.field();
    if !field.is_real() {
        return torsion_units(field)
            .iter()
            .map(|u| u * alpha)
            .min_by_key(|y| y.simplicity_key())
            .expect("torsion is nonempty");
    }
    // Move α by powers of ε into √|N| ≤ α < ε√|N|, then make it positive.
    let eps = fundamental_unit(field).expect("real field");
    let eps_inv = eps.inverse().expect("unit");
    let n = field.element(alpha.norm().abs(), BigRational::zero());
    let mut v = alpha.real_abs();
    let upper = &(&eps * &eps) * &n;
    while (&v * &v).real_cmp(&upper) != Ordering::Less {
        v = &v * &eps_inv;
    }
    while (&v * &v).real_cmp(&n) == Ordering::Less {
        v = &v * &eps;
    }
    v
}

/// `R` for the class of `ideal`.
pub fn build_order(field: QuadraticField, ideal: &FractionalIdeal) -> Result<RelativeOrder> {
    if ideal.field() != field {
        return Err(Error::FieldMismatch(field.d(), ideal.field().d()));
    }
    let n = ideal.class_order()?;
    if n == 1 {
        return Err(Error::TrivialClass);
    }
    let n = n as usize;
    let alpha = ideal
        .pow(n as u32)
        .is_principal()
        .map(|a| normalize_generator(&a))
        .ok_or_else(|| Error::GeneratorNotFound(ideal.to_string()))?;
    let mut gens = Vec::with_capacity(2 * n);
    for j in 0..n {
        for b in ideal.pow_signed(-(j as i64)).z_basis() {
            let mut v = zero_vec(2 * n);
            let [p, q] = b.coords();
            v[2 * j] = p;
            v[2 * j + 1] = q;
            gens.push(v);
        }
    }
    let zbasis =
        Lattice::from_generators(2 * n, &gens).ok_or_else(|| Error::Internal("order basis is degenerate".into()))?;
    Ok(RelativeOrder {
        field,
        n,
        ideal: ideal.clone(),
        alpha,
        zbasis,
    })
}

/// The module `I·R` as a rank-`2n` lattice.
pub fn extend_ideal(order: &RelativeOrder, ideal: &FractionalIdeal) -> Result<Lattice> {
    if ideal.field() != order.field {
        return Err(Error::FieldMismatch(order.field.d(), ideal.field().d()));
    }
    let basis = order.zbasis.basis();
    let gens: Vec<Vec<BigRational>> = ideal
        .z_basis()
        .iter()
        .flat_map(|g| {
            let g = embed(g, order.n);
            basis.iter().map(move |b| order.mul(&g, b)).collect::<Vec<_>>()
        })
        .collect();
    Lattice::from_generators(2 * order.n, &gens).ok_or_else(|| Error::Internal("extended ideal is degenerate".into()))
}

/// `γ·R` as a lattice.
fn principal_module(order: &RelativeOrder, gamma: &[BigRational]) -> Option<Lattice> {
    let gens: Vec<Vec<BigRational>> = order.zbasis.basis().iter().map(|b| order.mul(gamma, b)).collect();
    Lattice::from_generators(2 * order.n, &gens)
}

/// Proof that `I` becomes principal: `I·R = γ·R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapitulationCertificate {
    pub ideal: FractionalIdeal,
    /// `None` when `I` is already principal in `K`.
    pub order: Option<RelativeOrder>,
    /// Flat coordinates of `γ` in `L`; `None` when the search gave up.
    pub gamma: Option<Vec<BigRational>>,
    pub status: CapitulationStatus,
}

impl CapitulationCertificate {
    pub fn degree(&self) -> usize {
        self.order.as_ref().map_or(1, RelativeOrder::degree)
    }

    /// Recomputes `I·R` and `γ·R` from scratch and compares them, and checks
    /// `xⁿ = α` against `Iⁿ = (α)`.
    pub fn verify(&self) -> bool {
        let Some(gamma) = &self.gamma else { return false };
        let field = self.ideal.field();
        let Some(order) = &self.order else {
            let g = field.element(gamma[0].clone(), gamma[1].clone());
            return FractionalIdeal::principal(&g).is_ok_and(|p| p == self.ideal);
        };
        if order.ideal != self.ideal || gamma.len() != 2 * order.n {
            return false;
        }
        let n = order.n;
        let Ok(alpha_ideal) = FractionalIdeal::principal(&order.alpha) else {
            return false;
        };
        if alpha_ideal != self.ideal.pow(n as u32) {
            return false;
        }
        let Ok(rebuilt) = build_order(field, &self.ideal) else {
            return false;
        };
        if rebuilt.zbasis != order.zbasis || !order.is_closed() {
            return false;
        }
        let Ok(module) = extend_ideal(order, &self.ideal) else {
            return false;
        };
        if !module.contains(gamma) {
            return false;
        }
        principal_module(order, gamma).is_some_and(|p| p == module)
    }

    /// Image under `x ↦ −x`; only meaningful for `n = 2`.
    pub fn negate_x(&self) -> Option<CapitulationCertificate> {
        let order = self.order.as_ref().filter(|o| o.n == 2)?;
        let gamma = self.gamma.as_ref()?;
        Some(CapitulationCertificate {
            gamma: Some(order.negate_x(gamma)),
            ..self.clone()
        })
    }

    /// `γ` as integers over a common denominator.
    pub fn gamma_integral(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let gamma = self.gamma.as_ref()?;
        let den = lcm_of_denoms(gamma.iter());
        let coeffs = gamma.iter().map(|c| (c * &den).to_integer()).collect();
        Some((coeffs, den))
    }

    pub fn gamma_text(&self) -> Option<String> {
        let gamma = self.gamma.as_ref()?;
        Some(match &self.order {
            Some(o) => o.format_element(gamma),
            None => self
                .ideal
                .field()
                .element(gamma[0].clone(), gamma[1].clone())
                .to_string(),
        })
    }

    pub fn alpha(&self) -> Option<FieldElement> {
        match &self.order {
            Some(o) => Some(o.alpha.clone()),
            None => self
                .gamma
                .as_ref()
                .map(|g| self.ideal.field().element(g[0].clone(), g[1].clone())),
        }
    }

    /// `{d, ideal, n, alpha, gamma, verified, status}`.
    pub fn to_json(&self) -> Value {
        let gamma = self.gamma_integral().map(|(coeffs, den)| {
            json!({
                "coeffs": coeffs.iter().map(int_json).collect::<Vec<_>>(),
                "den": int_json(&den),
                "text": self.gamma_text(),
            })
        });
        json!({
            "d": self.ideal.field().d(),
            "ideal": self.ideal.to_json(),
            "n": self.degree(),
            "alpha": self.alpha().map(|a| a.to_string()),
            "gamma": gamma,
            "verified": self.verify(),
            "status": self.status,
        })
    }
}

/// Integer vectors of the given length with sup-norm exactly `s`, ordered
/// by L1 norm and then lexicographically.
fn shell(len: usize, s: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-s; len];
    loop {
        if cur.iter().any(|c| c.abs() == s) {
            out.push(cur.clone());
        }
        let mut k = len;
        loop {
            if k == 0 {
                // Within an L1 layer, larger coefficients first so `x` precedes `-x`.
                out.sort_by_key(|v| {
                    (
                        v.iter().map(|c| c.abs()).sum::<i64>(),
                        v.iter().map(|c| -c).collect::<Vec<_>>(),
                    )
                });
                return out;
            }
            k -= 1;
            if cur[k] < s {
                cur[k] += 1;
                break;
            }
            cur[k] = -s;
        }
    }
}

fn shell_size(len: usize, s: u64) -> Option<u64> {
    let outer = (2 * s + 1).checked_pow(len as u32)?;
    let inner = if s == 0 {
        0
    } else {
        (2 * s - 1).checked_pow(len as u32)?
    };
    Some(outer - inner)
}

/// Searches `γ ∈ I·R` with `γR = I·R`, enumerating coefficient vectors over
/// the HNF basis of `I·R` shell by shell (sup-norm up to `bound`). Gives
/// up once the next shell would exceed `budget` candidates in total.
pub fn find_capitulation_generator(
    order: &RelativeOrder,
    ideal: &FractionalIdeal,
    bound: u64,
    budget: u64,
) -> Result<Option<CapitulationCertificate>> {
    let module = extend_ideal(order, ideal)?;
    let index = module.covolume() / order.zbasis.covolume();
    let dim = 2 * order.n;
    let mut spent = 0u64;
    for s in 1..=bound {
        match shell_size(dim, s) {
            Some(size) if spent + size <= budget => spent += size,
            _ => break,
        }
        for coeffs in shell(dim, s as i64) {
            let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
            let gamma = module.combine(&coeffs);
            if order.norm(&gamma) != index {
                continue;
            }
            let cert = CapitulationCertificate {
                ideal: ideal.clone(),
                order: Some(order.clone()),
                gamma: Some(gamma),
                status: CapitulationStatus::Found,
            };
            // Norm equality already forces γR = I·R; keep the lattice check
            // as a guard anyway.
            if principal_module(order, cert.gamma.as_ref().expect("set")) == Some(module.clone()) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Full pipeline for one ideal: trivial certificate if `I` is already
/// principal, otherwise build `R` and search.
pub fn capitulate(ideal: &FractionalIdeal, bound: u64, budget: u64) -> Result<CapitulationCertificate> {
    if let Some(g) = ideal.is_principal() {
        let [a, b] = g.coords();
        return Ok(CapitulationCertificate {
            ideal: ideal.clone(),
            order: None,
            gamma: Some(vec![a, b]),
            status: CapitulationStatus::Found,
        });
    }
    let order = build_order(ideal.field(), ideal)?;
    Ok(
        find_capitulation_generator(&order, ideal, bound, budget)?.unwrap_or(CapitulationCertificate {
            ideal: ideal.clone(),
            order: Some(order),
            gamma: None,
            status: CapitulationStatus::Undecided,
        }),
    )
}

/// Degrees of the cyclic steps for a basis of the class group.
#[derive(Debug, Clone)]
pub struct CompositeReport {
    pub d: i64,
    pub h: u64,
    pub certificates: Vec<CapitulationCertificate>,
    pub degree_product: u64,
}

impl CompositeReport {
    pub fn degrees_match(&self) -> bool {
        self.degree_product == self.h
    }

    pub fn all_found(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| c.status == CapitulationStatus::Found && c.verify())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "h": self.h,
            "degrees": self.certificates.iter().map(CapitulationCertificate::degree).collect::<Vec<_>>(),
            "degree_product": self.degree_product,
            "degrees_match": self.degrees_match(),
            "generators": self.certificates.iter().map(|c| json!({
                "ideal": c.ideal.to_json(),
                "n": c.degree(),
                "status": c.status,
                "gamma": c.gamma_text(),
                "verified": c.verify(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One certificate per invariant-factor generator of `Cl(K)`.
pub fn composite_report(field: QuadraticField, bound: u64, budget: u64) -> Result<CompositeReport> {
    let cl = classgroup::class_group(field);
    let certificates = cl
        .generators
        .iter()
        .map(|g| capitulate(g, bound, budget))
        .collect::<Result<Vec<_>>>()?;
    let degree_product = certificates.iter().map(|c| c.degree() as u64).product();
    Ok(CompositeReport {
        d: field.d(),
        h: cl.h,
        certificates,
        degree_product,
    })
}

/// `(γR)ⁿ = (α)R` inside the order: the identification `Mⁿ ≅ O_K` is
/// consistent with the certificate.
pub fn power_matches_alpha(cert: &CapitulationCertificate) -> bool {
    let (Some(order), Some(gamma)) = (&cert.order, &cert.gamma) else {
        return true;
    };
    let mut power = gamma.clone();
    for _ in 1..order.n {
        power = order.mul(&power, gamma);
    }
    let lhs = principal_module(order, &power);
    let rhs = principal_module(order, &embed(&order.alpha, order.n));
    lhs.is_some() && lhs == rhs
}
