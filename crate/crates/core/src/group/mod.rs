//! Finite groups as explicit multiplication tables.
//!
//! Elements are the indices `0..n`; index `0` is always the identity.
//! Every constructor funnels through [`FiniteGroup::from_cayley`], so all
//! groups in the crate have passed the Latin-square, identity and
//! associativity checks.

mod aut;
mod hom;
mod perm;
mod subgroup;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use aut::{automorphism_group, automorphism_group_bounded, greedy_generators, DEFAULT_AUT_BOUND};
pub use hom::{GroupAutomorphism, GroupHomomorphism};
pub use perm::{compose_perm, group_from_permutations, DEFAULT_CLOSURE_BOUND};
pub use subgroup::{
    center_and_derived, conjugates_of, is_commuting_automorphism, is_nilpotent, normal_subgroups, quotient_group,
    sylow_subgroup, upper_central_series, Subgroup,
};

/// Groups up to this order get a full associativity check on construction.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;

/// Fixed seed for the sampled associativity check on larger tables.
const ASSOCIATIVITY_SEED: u64 = 0x5eed_0001;

struct GroupTable {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    element_orders: Vec<u32>,
    labels: Option<Vec<String>>,
}

/// A finite group given by its Cayley table. Cheap to clone.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupTable>);

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// If the identity is not at index 0 it is swapped with index 0 (and the
    /// table relabelled accordingly). Errors report indices of the table as
    /// given.
    pub fn from_cayley(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::invalid("empty Cayley table"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!("entry {bad} in row {i} out of range")));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for (i, row) in table.iter().enumerate() {
            for &v in row {
                if seen[v] == i {
                    return Err(Error::NotLatinSquare { line: "row", index: i });
                }
                seen[v] = i;
            }
        }
        seen.fill(usize::MAX);
        for j in 0..n {
            for row in table {
                let v = row[j];
                if seen[v] == j {
                    return Err(Error::NotLatinSquare {
                        line: "column",
                        index: j,
                    });
                }
                seen[v] = j;
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;

        let check = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..10 * n * n {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(a, b, c) {
                    return Err(Error::NotAssociative { a, b, c });
                }
            }
        }

        // relabel: identity <-> 0
        let swap = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[swap(a) * n + swap(b)] = swap(table[a][b]) as u32;
            }
        }
        Ok(Self::from_validated(name.into(), n, mul, None))
    }

    /// Builds from a flat, already relabelled table that the caller knows is
    /// a group (used by constructors that derive tables from a group).
    /// Debug builds still run the full check.
    pub(crate) fn from_flat_trusted(name: String, n: usize, mul: Vec<u32>) -> Self {
        debug_assert!({
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|a| (0..n).map(|b| mul[a * n + b] as usize).collect())
                .collect();
            Self::from_cayley(name.clone(), &rows).is_ok()
        });
        Self::from_validated(name, n, mul, None)
    }

    fn from_validated(name: String, n: usize, mul: Vec<u32>, labels: Option<Vec<String>>) -> Self {
        debug_assert!((0..n).all(|x| mul[x] as usize == x && mul[x * n] as usize == x));
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let row = &mul[a * n..(a + 1) * n];
            let b = row.iter().position(|&v| v == 0).expect("latin row");
            inv[a] = b as u32;
        }
        let mut element_orders = vec![0u32; n];
        for a in 0..n {
            let mut k = 1u32;
            let mut x = a;
            while x != 0 {
                x = mul[x * n + a] as usize;
                k += 1;
            }
            element_orders[a] = k;
        }
        FiniteGroup(Arc::new(GroupTable {
            name,
            order: n,
            mul,
            inv,
            element_orders,
            labels,
        }))
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::invalid("label count does not match group order"));
        }
        let t = &*self.0;
        Ok(FiniteGroup(Arc::new(GroupTable {
            name: t.name.clone(),
            order: t.order,
            mul: t.mul.clone(),
            inv: t.inv.clone(),
            element_orders: t.element_orders.clone(),
            labels: Some(labels),
        })))
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let t = &*self.0;
        FiniteGroup(Arc::new(GroupTable {
            name: name.into(),
            order: t.order,
            mul: t.mul.clone(),
            inv: t.inv.clone(),
            element_orders: t.element_orders.clone(),
            labels: t.labels.clone(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a] as usize
    }

    #[inline]
    pub fn element_order(&self, a: usize) -> usize {
        self.0.element_orders[a] as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Right conjugation `x^g = g⁻¹ x g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.first_noncommuting_pair().is_none()
    }

    pub(crate) fn first_noncommuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.order();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| !self.commute(a, b))
    }

    /// Exponent (lcm of element orders).
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    /// The Cayley table as rows.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// True when both groups have literally the same multiplication table.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.mul == other.0.mul
    }

    /// Histogram of element orders, a cheap isomorphism fingerprint.
    pub fn order_statistics(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for a in self.elements() {
            *counts.entry(self.element_order(a)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name(), self.order())
    }
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut out = 1;
    if p < 2 {
        return 1;
    }
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}
