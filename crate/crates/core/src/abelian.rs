//! Finite abelian groups given by a Cayley table.
//!
//! Class groups at desk scale have at most a few dozen elements, so the
//! structure is read off the full table: invariant factors from the Smith
//! form of the table's relation matrix, generators by a small search.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::lattice::smith_diagonal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteAbelianGroup {
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Self {
        debug_assert!(table.iter().all(|r| r.len() == table.len()));
        FiniteAbelianGroup { table, identity }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut n = 1;
        while acc != self.identity {
            acc = self.op(acc, x);
            n += 1;
        }
        n
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.op(x, y) == self.op(y, x)))
    }

    /// Quotient by a subgroup. Returns the quotient group and, for every
    /// element, the index of its coset. Cosets are numbered by their
    /// smallest member, so coset `i`'s representative is the `i`-th smallest
    /// "first element".
    pub fn quotient(&self, subgroup: &[usize]) -> (FiniteAbelianGroup, Vec<usize>, Vec<usize>) {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &s in subgroup {
                coset_of[self.op(x, s)] = idx;
            }
        }
        let m = reps.len();
        let table = (0..m)
            .map(|i| (0..m).map(|j| coset_of[self.op(reps[i], reps[j])]).collect())
            .collect();
        let identity = coset_of[self.identity];
        (FiniteAbelianGroup::new(table, identity), coset_of, reps)
    }

    /// Invariant factors `d₁ | d₂ | …` (all > 1) of the group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let n = self.order();
        let mut relations = Vec::new();
        for x in 0..n {
            for y in x..n {
                let mut row = vec![BigInt::from(0); n];
                row[x] += 1;
                row[y] += 1;
                row[self.op(x, y)] -= 1;
                relations.push(row);
            }
        }
        let mut id_row = vec![BigInt::from(0); n];
        id_row[self.identity] = BigInt::one();
        relations.push(id_row);
        let mut out: Vec<u64> = smith_diagonal(relations)
            .into_iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("small invariant factor"))
            .collect();
        out.sort_unstable();
        out
    }

    /// Elements `g₁, …, g_r` with `ord(gᵢ) = dᵢ` and `G = ⊕⟨gᵢ⟩`. Among all
    /// valid choices the lexicographically smallest index tuple is returned.
    pub fn basis_for(&self, factors: &[u64]) -> Option<Vec<usize>> {
        let mut chosen = Vec::new();
        if self.search_basis(factors, &mut chosen) {
            Some(chosen)
        } else {
            None
        }
    }

    fn search_basis(&self, factors: &[u64], chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == factors.len() {
            return self.subgroup(chosen).len() == self.order();
        }
        let target: u64 = factors[..=i].iter().product();
        for g in 0..self.order() {
            if self.element_order(g) as u64 != factors[i] {
                continue;
            }
            chosen.push(g);
            if self.subgroup(chosen).len() as u64 == target && self.search_basis(factors, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_product(ns: &[usize]) -> FiniteAbelianGroup {
        // Elements are mixed-radix tuples.
        let total: usize = ns.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            ns.iter()
                .map(|&n| {
                    let r = x % n;
                    x /= n;
                    r
                })
                .collect()
        };
        let encode = |v: &[usize]| -> usize {
            let mut x = 0;
            for (i, &n) in ns.iter().enumerate().rev() {
                x = x * n + v[i];
            }
            x
        };
        let table = (0..total)
            .map(|x| {
                (0..total)
                    .map(|y| {
                        let (a, b) = (decode(x), decode(y));
                        let s: Vec<usize> = a.iter().zip(&b).zip(ns).map(|((p, q), n)| (p + q) % n).collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        FiniteAbelianGroup::new(table, 0)
    }

    #[test]
    fn invariant_factors_of_products() {
        assert_eq!(cyclic_product(&[2, 3]).invariant_factors(), vec![6]);
        assert_eq!(cyclic_product(&[2, 2]).invariant_factors(), vec![2, 2]);
        assert_eq!(cyclic_product(&[4, 6]).invariant_factors(), vec![2, 12]);
        assert!(cyclic_product(&[1]).invariant_factors().is_empty());
    }

    #[test]
    fn basis_generates() {
        let g = cyclic_product(&[2, 6]);
        let f = g.invariant_factors();
        let b = g.basis_for(&f).unwrap();
        assert_eq!(g.subgroup(&b).len(), 12);
        for (x, d) in b.iter().zip(&f) {
            assert_eq!(g.element_order(*x) as u64, *d);
        }
    }

    #[test]
    fn quotient_orders() {
        let g = cyclic_product(&[2, 2]);
        let h = g.subgroup(&[1]);
        let (q, _, reps) = g.quotient(&h);
        assert_eq!(q.order(), 2);
        assert_eq!(reps, vec![0, 2]);
    }
}
