//! Oracles shared by the integration tests. Nothing here calls into the
//! library's lattice or class-group code; the goal is an independent second
//! opinion on the values the library derives.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use quadcap::{FieldElement, FractionalIdeal, QuadraticField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn squarefree(n: i64) -> bool {
    let n = n.abs();
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

/// Fundamental discriminants `D` with `lo < D < hi`, together with the
/// squarefree `d` such that `Q(√d)` has discriminant `D`.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for disc in (lo + 1)..hi {
        if disc == 0 || disc == 1 {
            continue;
        }
        let r = disc.rem_euclid(4);
        if r == 1 && squarefree(disc) {
            out.push((disc, disc));
        } else if r == 0 {
            let m = disc / 4;
            if matches!(m.rem_euclid(4), 2 | 3) && squarefree(m) {
                out.push((disc, m));
            }
        }
    }
    out
}

/// Number of reduced primitive positive definite forms `ax² + bxy + cy²` of
/// discriminant `disc < 0`.
pub fn forms_class_number(disc: i64) -> u64 {
    assert!(disc < 0);
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Real quadratic class numbers for squarefree `1 < d < 100` (from the
/// standard tables); every `d` not listed has `h = 1`.
pub fn real_class_number_table(d: i64) -> u64 {
    match d {
        79 => 3,
        82 => 4,
        10 | 15 | 26 | 30 | 34 | 35 | 39 | 42 | 51 | 55 | 58 | 65 | 66 | 70 | 74 | 78 | 85 | 87 | 91 | 95 => 2,
        _ => 1,
    }
}

/// Row-style HNF of the lattice spanned by rational vectors, returned with
/// a common denominator so two lattices can be compared with `==`.
pub fn rational_hnf(gens: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * &den).to_integer()).collect())
        .collect();
    let dim = gens.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for col in 0..dim {
        // Euclid down the column until a single nonzero entry survives.
        loop {
            let mut live: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by_key(|&i| rows[i][col].abs());
            let p = live[0];
            let pivot = rows[p].clone();
            for &i in &live[1..] {
                let q = rows[i][col].div_floor(&pivot[col]);
                for k in 0..dim {
                    let t = &q * &pivot[k];
                    rows[i][k] -= t;
                }
            }
        }
        let Some(p) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            panic!("lattice is not full rank");
        };
        let mut pivot = rows.remove(p);
        if pivot[col].is_negative() {
            pivot.iter_mut().for_each(|x| *x = -x.clone());
        }
        out.push(pivot);
    }
    // Reduce entries above each pivot into [0, pivot).
    for i in 0..out.len() {
        for j in 0..i {
            let q = out[j][i].div_floor(&out[i][i]);
            for k in 0..dim {
                let t = &q * &out[i][k];
                out[j][k] -= t;
            }
        }
    }
    (out, den)
}

pub fn same_lattice(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
    let (ra, da) = rational_hnf(a);
    let (rb, db) = rational_hnf(b);
    // Compare ra/da with rb/db entrywise.
    ra.len() == rb.len()
        && ra
            .iter()
            .zip(&rb)
            .all(|(x, y)| x.iter().zip(y).all(|(p, q)| p * &db == q * &da))
}

/// Polynomials over `K` reduced modulo `xⁿ − α`, coefficient `j` on `x^j`.
pub struct Kummer {
    pub field: QuadraticField,
    pub n: usize,
    pub alpha: FieldElement,
}

impl Kummer {
    pub fn mul(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![self.field.zero(); self.n];
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                let mut t = a * b;
                if i + j >= self.n {
                    t = &t * &self.alpha;
                }
                out[(i + j) % self.n] = &out[(i + j) % self.n] + &t;
            }
        }
        out
    }

    pub fn unflatten(&self, v: &[BigRational]) -> Vec<FieldElement> {
        v.chunks(2)
            .map(|c| self.field.element(c[0].clone(), c[1].clone()))
            .collect()
    }

    pub fn flat(v: &[FieldElement]) -> Vec<BigRational> {
        v.iter().flat_map(|e| e.coords()).collect()
    }

    /// Z-basis of `⊕_{j<n} M^{-j} x^j`.
    pub fn order_basis(&self, m: &FractionalIdeal) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for g in m.pow_signed(-(j as i64)).z_basis() {
                let mut v = vec![self.field.zero(); self.n];
                v[j] = g;
                out.push(v);
            }
        }
        out
    }

    /// Z-generators of `{g·b}` for `g` in `gens` and `b` in `basis`.
    pub fn products(&self, gens: &[Vec<FieldElement>], basis: &[Vec<FieldElement>]) -> Vec<Vec<BigRational>> {
        gens.iter()
            .flat_map(|g| basis.iter().map(move |b| Kummer::flat(&self.mul(g, b))))
            .collect()
    }
}

/// Independent recheck of a capitulation certificate: `(α) = Mⁿ`, the graded
/// basis is closed under multiplication, `γ ∈ M·R` and `γR = M·R`, with all
/// lattices compared through [`rational_hnf`].
pub fn recheck_certificate(cert: &quadcap::CapitulationCertificate) -> bool {
    let Some(gamma) = &cert.gamma else { return false };
    let m = &cert.ideal;
    let field = m.field();
    let Some(order) = &cert.order else {
        let g = field.element(gamma[0].clone(), gamma[1].clone());
        let gens: Vec<Vec<BigRational>> = m.z_basis().iter().map(|e| e.coords().to_vec()).collect();
        let mine: Vec<Vec<BigRational>> = [g.clone(), &g * &field.omega()]
            .iter()
            .map(|e| e.coords().to_vec())
            .collect();
        return same_lattice(&gens, &mine);
    };
    let n = order.degree();
    let k = Kummer {
        field,
        n,
        alpha: order.alpha().clone(),
    };
    let alpha_gens: Vec<Vec<BigRational>> = [k.alpha.clone(), &k.alpha * &field.omega()]
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();
    let mn: Vec<Vec<BigRational>> = m.pow(n as u32).z_basis().iter().map(|e| e.coords().to_vec()).collect();
    if !same_lattice(&alpha_gens, &mn) {
        return false;
    }
    let basis = k.order_basis(m);
    let flat_basis: Vec<Vec<BigRational>> = basis.iter().map(|b| Kummer::flat(b)).collect();
    let mut closure = flat_basis.clone();
    closure.extend(k.products(&basis, &basis));
    if !same_lattice(&flat_basis, &closure) {
        return false;
    }
    let m_embedded: Vec<Vec<FieldElement>> = m
        .z_basis()
        .iter()
        .map(|g| {
            let mut v = vec![field.zero(); n];
            v[0] = g.clone();
            v
        })
        .collect();
    let mr = k.products(&m_embedded, &basis);
    let g = k.unflatten(gamma);
    let gr = k.products(&[g], &basis);
    let mut with_gamma = mr.clone();
    with_gamma.push(gamma.clone());
    same_lattice(&mr, &with_gamma) && same_lattice(&mr, &gr)
}

/// Seeded generator so every run draws the same inputs.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero element with small numerators and denominators.
pub fn random_element(field: QuadraticField, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let a = BigRational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=6).into());
        let b = BigRational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=6).into());
        let x = field.element(a, b);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random fractional ideal generated by two random elements.
pub fn random_ideal(field: QuadraticField, rng: &mut ChaCha8Rng) -> FractionalIdeal {
    let gens = [random_element(field, rng), random_element(field, rng)];
    FractionalIdeal::from_generators(field, &gens).expect("nonzero generators")
}
