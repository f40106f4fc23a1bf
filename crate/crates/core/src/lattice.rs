//! Full-rank lattices in `Q^n` in Hermite normal form, plus the small
//! amount of integer linear algebra the rest of the crate needs
//! (exact determinants and Smith normal form).

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::util::{gcd_all, lcm_of_denoms};

/// A full-rank lattice `rows / den`.
///
/// `rows` is lower triangular (`rows[i][j] = 0` for `j > i`), the diagonal
/// is positive and every entry left of the diagonal is reduced into
/// `[0, rows[j][j])`. Together with `gcd(den, entries) = 1` this makes the
/// representation unique, so lattice equality is structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    rows: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl Lattice {
    /// Lattice spanned by rational vectors; `None` unless they span `Q^dim`.
    pub fn from_generators(dim: usize, gens: &[Vec<BigRational>]) -> Option<Lattice> {
        let den = lcm_of_denoms(gens.iter().flatten());
        let ints: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim);
                g.iter().map(|x| (x * &den).to_integer()).collect()
            })
            .collect();
        let rows = hnf(dim, ints)?;
        Some(Lattice::canonical(rows, den))
    }

    /// Lattice from integer generators scaled by `1/den`.
    pub fn from_integer_generators(dim: usize, gens: Vec<Vec<BigInt>>, den: BigInt) -> Option<Lattice> {
        let rows = hnf(dim, gens)?;
        Some(Lattice::canonical(rows, den))
    }

    fn canonical(mut rows: Vec<Vec<BigInt>>, mut den: BigInt) -> Lattice {
        let g = gcd_all(rows.iter().flatten().chain(std::iter::once(&den)));
        if !g.is_one() && !g.is_zero() {
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
            den /= &g;
        }
        Lattice { rows, den }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Basis vectors as rationals.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::new(x.clone(), self.den.clone()))
                    .collect()
            })
            .collect()
    }

    /// Covolume: `|det(rows)| / den^dim`.
    pub fn covolume(&self) -> BigRational {
        let diag: BigInt = (0..self.dim()).map(|i| self.rows[i][i].clone()).product();
        BigRational::new(diag, self.den.pow(self.dim() as u32))
    }

    /// Integer coordinates of `v` with respect to the basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim());
        let mut rest: Vec<BigRational> = v
            .iter()
            .map(|x| x * BigRational::from_integer(self.den.clone()))
            .collect();
        let mut coords = vec![BigInt::zero(); self.dim()];
        for i in (0..self.dim()).rev() {
            let q = &rest[i] / BigRational::from_integer(self.rows[i][i].clone());
            if !q.is_integer() {
                return None;
            }
            let q = q.to_integer();
            for j in 0..=i {
                rest[j] -= BigRational::from_integer(&q * &self.rows[i][j]);
            }
            coords[i] = q;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// Lattice vector with the given integer coordinates.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigRational> {
        let mut acc = vec![BigInt::zero(); self.dim()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (a, r) in acc.iter_mut().zip(row) {
                *a += c * r;
            }
        }
        acc.into_iter().map(|x| BigRational::new(x, self.den.clone())).collect()
    }
}

/// Hermite normal form of the lattice generated by integer row vectors.
/// Returns `None` when the generators do not have full rank `dim`.
pub fn hnf(dim: usize, mut gens: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigInt>>> {
    gens.retain(|g| g.iter().any(|x| !x.is_zero()));
    let mut rows: Vec<Option<Vec<BigInt>>> = vec![None; dim];
    for col in (0..dim).rev() {
        let mut active: Vec<Vec<BigInt>> = Vec::new();
        let mut rest = Vec::new();
        for g in gens.drain(..) {
            if g[col].is_zero() {
                rest.push(g);
            } else {
                active.push(g);
            }
        }
        if active.is_empty() {
            return None;
        }
        // Euclid on the column entries.
        loop {
            let (pi, _) = active
                .iter()
                .enumerate()
                .min_by(|a, b| a.1[col].abs().cmp(&b.1[col].abs()))
                .expect("nonempty");
            let pivot = active.swap_remove(pi);
            let mut remaining = Vec::new();
            for mut v in active.drain(..) {
                let q = v[col].div_floor(&pivot[col]);
                for k in 0..=col {
                    let t = &q * &pivot[k];
                    v[k] -= t;
                }
                if !v[col].is_zero() {
                    remaining.push(v);
                } else if v.iter().any(|x| !x.is_zero()) {
                    rest.push(v);
                }
            }
            if remaining.is_empty() {
                let mut pivot = pivot;
                if pivot[col].is_negative() {
                    for x in pivot.iter_mut() {
                        *x = -&*x;
                    }
                }
                rows[col] = Some(pivot);
                break;
            }
            remaining.push(pivot);
            active = remaining;
        }
        gens = rest;
    }
    let mut rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.expect("full rank")).collect();
    for i in 0..dim {
        for j in (0..i).rev() {
            let q = rows[i][j].div_floor(&rows[j][j]);
            if !q.is_zero() {
                let rj = rows[j].clone();
                for k in 0..=j {
                    rows[i][k] -= &q * &rj[k];
                }
            }
        }
    }
    Some(rows)
}

/// Exact determinant of a square rational matrix (fraction-free elimination).
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let den = lcm_of_denoms(m.iter().flatten());
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|x| (x * &den).to_integer()).collect())
        .collect();
    let det = bareiss(&mut a);
    BigRational::new(det, den.pow(n as u32))
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries only,
/// each dividing the next).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the smallest nonzero entry in the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // Clear column t.
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            // Clear row t.
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility condition against the rest of the block.
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
