//! Subgroups of `⊕ ℤ/d_c` as triangular lattices.
//!
//! A subgroup `S` corresponds to the lattice `L ⊇ DZⁿ` of its integer lifts.
//! `L` is kept as one row per coordinate: row `c` is zero before column `c`,
//! has leading entry `h_c | d_c`, and later entries reduced mod their modulus.
//! Then `|S| = ∏ d_c / h_c`, and every element of `S` is uniquely
//! `Σ a_c·row_c` with `0 ≤ a_c < d_c / h_c`.
//!
//! All updates are unimodular row operations, so entries stay below the
//! moduli and fit in machine integers.

use num_bigint::BigUint;
use num_integer::Integer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModLattice {
    moduli: Vec<u64>,
    rows: Vec<Vec<i64>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl ModLattice {
    /// The whole module.
    pub fn full(moduli: &[u64]) -> Self {
        let n = moduli.len();
        let rows = (0..n)
            .map(|c| {
                let mut r = vec![0i64; n];
                r[c] = 1;
                r
            })
            .collect();
        Self {
            moduli: moduli.to_vec(),
            rows,
        }
    }

    /// The zero subgroup.
    pub fn zero(moduli: &[u64]) -> Self {
        let n = moduli.len();
        let rows = (0..n)
            .map(|c| {
                let mut r = vec![0i64; n];
                r[c] = moduli[c] as i64;
                r
            })
            .collect();
        Self {
            moduli: moduli.to_vec(),
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn leading(&self, c: usize) -> u64 {
        self.rows[c][c] as u64
    }

    pub fn row(&self, c: usize) -> &[i64] {
        &self.rows[c]
    }

    /// Number of admissible multiples of row `c`, `d_c / h_c`.
    pub fn row_range(&self, c: usize) -> u64 {
        self.moduli[c] / self.leading(c)
    }

    pub fn order(&self) -> BigUint {
        (0..self.dim()).map(|c| BigUint::from(self.row_range(c))).product()
    }

    /// Coordinates whose row contributes a nontrivial cyclic factor.
    pub fn active_rows(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&c| self.row_range(c) > 1).collect()
    }

    fn reduce_tail(&self, row: &mut [i64], from: usize) {
        for (c, x) in row.iter_mut().enumerate().skip(from) {
            *x = x.rem_euclid(self.moduli[c] as i64);
        }
    }

    /// Intersects with the kernel of `v ↦ Σ coeff·v_c mod q`.
    ///
    /// The functional must be well defined on the module, i.e. `q` divides
    /// `coeff·d_c` for every term.
    pub fn intersect_kernel(&mut self, terms: &[(usize, i64)], q: u64) {
        if q <= 1 {
            return;
        }
        let q = q as i128;
        debug_assert!(terms
            .iter()
            .all(|&(c, a)| (a as i128 * self.moduli[c] as i128) % q == 0));
        let n = self.dim();
        let values: Vec<i128> = (0..n)
            .map(|c| {
                terms
                    .iter()
                    .map(|&(j, a)| a as i128 * self.rows[c][j] as i128)
                    .sum::<i128>()
                    .rem_euclid(q)
            })
            .collect();
        if values.iter().all(|&v| v == 0) {
            return;
        }
        // accumulator (acc0; acc) starts as (q; 0) and absorbs each row's
        // functional value, last row first
        let mut acc0 = q;
        let mut acc = vec![0i128; n];
        for c in (0..n).rev() {
            let v = values[c];
            if v == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(acc0, v);
            let (ag, vg) = (acc0 / g, v / g);
            let row = &mut self.rows[c];
            let mut new_acc = vec![0i128; n];
            for j in c..n {
                let d = self.moduli[j] as i128;
                let r = row[j] as i128;
                let a = acc[j];
                new_acc[j] = (s * a + t * r).rem_euclid(d);
                let nr = ag * r - vg * a;
                row[j] = if j == c { nr } else { nr.rem_euclid(d) } as i64;
            }
            debug_assert!(row[c] > 0);
            acc = new_acc;
            acc0 = g;
        }
    }

    /// Joins the cyclic subgroup generated by `v`.
    pub fn insert(&mut self, v: &[u64]) {
        let n = self.dim();
        let mut acc: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for c in 0..n {
            let d = self.moduli[c] as i128;
            let a = acc[c].rem_euclid(d);
            if a == 0 {
                continue;
            }
            let h = self.rows[c][c] as i128;
            let (g, s, t) = ext_gcd(h, a);
            let (hg, ag) = (h / g, a / g);
            let row = &mut self.rows[c];
            for j in c..n {
                let dj = self.moduli[j] as i128;
                let r = row[j] as i128;
                let x = acc[j];
                let nr = s * r + t * x;
                row[j] = if j == c { nr } else { nr.rem_euclid(dj) } as i64;
                acc[j] = (hg * x - ag * r).rem_euclid(dj);
            }
        }
    }

    /// Subtracts multiples of rows until the vector is zero; the multiples are
    /// returned when it is in the subgroup.
    pub fn decompose(&self, v: &[u64]) -> Option<Vec<u64>> {
        let n = self.dim();
        let mut r: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coeffs = vec![0u64; n];
        for c in 0..n {
            let d = self.moduli[c] as i128;
            let x = r[c].rem_euclid(d);
            if x == 0 {
                continue;
            }
            let h = self.rows[c][c] as i128;
            if x % h != 0 {
                return None;
            }
            let a = x / h;
            coeffs[c] = a as u64;
            for j in c..n {
                r[j] = (r[j] - a * self.rows[c][j] as i128).rem_euclid(self.moduli[j] as i128);
            }
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.decompose(v).is_some()
    }

    /// `Σ a_c·row_c` reduced mod the moduli.
    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let mut out = vec![0i128; n];
        for (c, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in c..n {
                out[j] += a as i128 * self.rows[c][j] as i128;
            }
        }
        out.iter()
            .zip(&self.moduli)
            .map(|(&x, &d)| x.rem_euclid(d as i128) as u64)
            .collect()
    }

    /// Every element, in lexicographic order of the row multiples (last row
    /// varying fastest). Returns `None` when there are more than `bound`.
    pub fn elements(&self, bound: usize) -> Option<Vec<Vec<u64>>> {
        let active = self.active_rows();
        let mut total = 1usize;
        for &c in &active {
            total = total.checked_mul(self.row_range(c) as usize)?;
            if total > bound {
                return None;
            }
        }
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u64; self.dim()];
        loop {
            out.push(self.combine(&coeffs));
            let mut i = active.len();
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                let c = active[i];
                coeffs[c] += 1;
                if coeffs[c] < self.row_range(c) {
                    break;
                }
                coeffs[c] = 0;
            }
        }
    }

    /// Generators of the subgroup: the active rows reduced mod the moduli.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.active_rows()
            .into_iter()
            .map(|c| {
                let mut r = self.rows[c].clone();
                self.reduce_tail(&mut r, c);
                r.into_iter().map(|x| x as u64).collect()
            })
            .collect()
    }
}
