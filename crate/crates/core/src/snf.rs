//! Smith normal form over ℤ with transforms: `U·A·V = S`, `U` and `V`
//! unimodular, `S` diagonal with `s₁ | s₂ | …`.
//!
//! The elimination is generic over the scalar type. [`smith_normal_form`]
//! runs it in checked `i128` arithmetic and restarts in `BigInt` if any
//! intermediate value overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer arithmetic with overflow detection.
pub trait SnfScalar: Clone + PartialEq + std::fmt::Debug {
    fn s_zero() -> Self;
    fn s_one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn s_is_zero(&self) -> bool;
    fn s_is_negative(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Truncating division.
    fn div(&self, o: &Self) -> Self;
    fn rem(&self, o: &Self) -> Self;
    /// `(g, x, y)` with `g = gcd ≥ 0` and `a·x + b·y = g`.
    fn ext_gcd(&self, o: &Self) -> (Self, Self, Self);
    fn to_big(&self) -> BigInt;
}

impl SnfScalar for i128 {
    fn s_zero() -> Self {
        0
    }
    fn s_one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn s_is_zero(&self) -> bool {
        *self == 0
    }
    fn s_is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn rem(&self, o: &Self) -> Self {
        self % o
    }
    fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let e = self.extended_gcd(o);
        if e.gcd < 0 {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfScalar for BigInt {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn s_is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn rem(&self, o: &Self) -> Self {
        self % o
    }
    fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let e = self.extended_gcd(o);
        if Signed::is_negative(&e.gcd) {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Result of the factorization, always reported in `BigInt`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries `s_i` for `i < min(rows, cols)`; zeros last.
    pub diagonal: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rank: usize,
    /// Whether the `i128` attempt overflowed.
    pub used_bigint: bool,
}

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
}

/// `row_i ← row_i − q·row_t` on `a` and `u`.
fn row_axpy<T: SnfScalar>(w: &mut Work<T>, i: usize, t: usize, q: &T) -> Option<()> {
    if q.s_is_zero() {
        return Some(());
    }
    for m in [&mut w.a, &mut w.u] {
        let (ri, rt) = pair_mut(m, i, t);
        for (x, y) in ri.iter_mut().zip(rt.iter()) {
            if !y.s_is_zero() {
                *x = x.sub(&q.mul(y)?)?;
            }
        }
    }
    Some(())
}

/// `col_j ← col_j − q·col_t` on `a` and `v`.
fn col_axpy<T: SnfScalar>(w: &mut Work<T>, j: usize, t: usize, q: &T) -> Option<()> {
    if q.s_is_zero() {
        return Some(());
    }
    for m in [&mut w.a, &mut w.v] {
        for row in m.iter_mut() {
            if !row[t].s_is_zero() {
                row[j] = row[j].sub(&q.mul(&row[t])?)?;
            }
        }
    }
    Some(())
}

fn pair_mut<T>(m: &mut [Vec<T>], i: usize, t: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(i, t);
    if i < t {
        let (lo, hi) = m.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[t])
    }
}

fn swap_cols<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    for row in m {
        row.swap(a, b);
    }
}

fn identity<T: SnfScalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::s_one() } else { T::s_zero() }).collect())
        .collect()
}

/// `(row_a, row_b) ← ((p, q), (r, s))·(row_a, row_b)` on `a` and `u`.
fn row_mix<T: SnfScalar>(w: &mut Work<T>, a: usize, b: usize, c: [&T; 4]) -> Option<()> {
    for m in [&mut w.a, &mut w.u] {
        let (ra, rb) = {
            let (lo, hi) = m.split_at_mut(b.max(a));
            if a < b {
                (&mut lo[a], &mut hi[0])
            } else {
                (&mut hi[0], &mut lo[b])
            }
        };
        for (x, y) in ra.iter_mut().zip(rb.iter_mut()) {
            let nx = c[0].mul(x)?.add(&c[1].mul(y)?)?;
            let ny = c[2].mul(x)?.add(&c[3].mul(y)?)?;
            *x = nx;
            *y = ny;
        }
    }
    Some(())
}

/// `(col_a, col_b) ← (col_a, col_b)·((p, q), (r, s))` on `a` and `v`.
fn col_mix<T: SnfScalar>(w: &mut Work<T>, a: usize, b: usize, c: [&T; 4]) -> Option<()> {
    for m in [&mut w.a, &mut w.v] {
        for row in m.iter_mut() {
            let (x, y) = (row[a].clone(), row[b].clone());
            row[a] = x.mul(c[0])?.add(&y.mul(c[2])?)?;
            row[b] = x.mul(c[1])?.add(&y.mul(c[3])?)?;
        }
    }
    Some(())
}

fn eliminate<T: SnfScalar>(a: &[Vec<T>], rows: usize, cols: usize) -> Option<(Vec<T>, Work<T>)> {
    let mut w = Work {
        a: a.to_vec(),
        u: identity(rows),
        v: identity(cols),
    };
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);
    for t in 0..steps {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if !x.s_is_zero() && best.is_none_or(|(bi, bj)| x.abs_lt(&w.a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.a.swap(t, pi);
        w.u.swap(t, pi);
        swap_cols(&mut w.a, t, pj);
        swap_cols(&mut w.v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !w.a[i][t].s_is_zero() {
                    let (g, x, y) = w.a[t][t].ext_gcd(&w.a[i][t]);
                    if w.a[i][t].rem(&w.a[t][t]).s_is_zero() {
                        let q = w.a[i][t].div(&w.a[t][t]);
                        row_axpy(&mut w, i, t, &q)?;
                    } else {
                        let p = w.a[t][t].div(&g);
                        let r = w.a[i][t].div(&g);
                        row_mix(&mut w, t, i, [&x, &y, &r.neg()?, &p])?;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].s_is_zero() {
                    if w.a[t][j].rem(&w.a[t][t]).s_is_zero() {
                        let q = w.a[t][j].div(&w.a[t][t]);
                        col_axpy(&mut w, j, t, &q)?;
                    } else {
                        let (g, x, y) = w.a[t][t].ext_gcd(&w.a[t][j]);
                        let p = w.a[t][t].div(&g);
                        let r = w.a[t][j].div(&g);
                        col_mix(&mut w, t, j, [&x, &r.neg()?, &y, &p])?;
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if w.a[t][t].s_is_negative() {
            for m in [&mut w.a, &mut w.u] {
                for x in m[t].iter_mut() {
                    *x = x.neg()?;
                }
            }
        }
        diag.push(w.a[t][t].clone());
    }
    // divisibility chain via diag(a, b) ~ diag(gcd, lcm)
    let r = diag.len();
    for i in 0..r {
        for j in i + 1..r {
            let (a, b) = (diag[i].clone(), diag[j].clone());
            if b.rem(&a).s_is_zero() {
                continue;
            }
            let (g, s, t) = a.ext_gcd(&b);
            let (ag, bg) = (a.div(&g), b.div(&g));
            // U' = ((s, t), (−b/g, a/g)), V' = ((1, −t·b/g), (1, s·a/g))
            row_mix(&mut w, i, j, [&s, &t, &bg.neg()?, &ag])?;
            let c12 = t.mul(&bg)?.neg()?;
            let c22 = s.mul(&ag)?;
            col_mix(&mut w, i, j, [&T::s_one(), &c12, &T::s_one(), &c22])?;
            diag[i] = w.a[i][i].clone();
            diag[j] = w.a[j][j].clone();
            debug_assert!(!diag[i].s_is_negative());
            if diag[j].s_is_negative() {
                for m in [&mut w.a, &mut w.u] {
                    for x in m[j].iter_mut() {
                        *x = x.neg()?;
                    }
                }
                diag[j] = w.a[j][j].clone();
            }
        }
    }
    Some((diag, w))
}

fn to_big_matrix<T: SnfScalar>(m: &[Vec<T>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect()
}

/// Smith normal form of an integer matrix given row by row.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let small: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if let Some((diag, w)) = eliminate(&small, rows, cols) {
        return finish(diag, w, rows, cols, false);
    }
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let (diag, w) = eliminate(&big, rows, cols).expect("BigInt arithmetic cannot overflow");
    finish(diag, w, rows, cols, true)
}

fn finish<T: SnfScalar>(diag: Vec<T>, w: Work<T>, rows: usize, cols: usize, used_bigint: bool) -> Smith {
    let rank = diag.len();
    let mut diagonal: Vec<BigInt> = diag.iter().map(|x| x.to_big()).collect();
    diagonal.resize(rows.min(cols), <BigInt as Zero>::zero());
    Smith {
        diagonal,
        u: to_big_matrix(&w.u),
        v: to_big_matrix(&w.v),
        rank,
        used_bigint,
    }
}

impl Smith {
    /// Diagonal entries that fit in `u64`, or `None`.
    pub fn small_diagonal(&self) -> Option<Vec<u64>> {
        self.diagonal.iter().map(|x| x.to_u64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let m = b.first().map_or(0, |r| r.len());
        let k = b.len();
        (0..n)
            .map(|i| (0..m).map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum()).collect())
            .collect()
    }

    fn det_is_unit(m: &[Vec<BigInt>]) -> bool {
        // fraction-free Bareiss determinant
        let n = m.len();
        if n == 0 {
            return true;
        }
        let mut a = m.to_vec();
        let mut prev = <BigInt as One>::one();
        let mut sign = <BigInt as One>::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return false;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        (sign * &a[n - 1][n - 1]).abs().is_one()
    }

    fn check(a: &[Vec<i64>]) -> Smith {
        let s = smith_normal_form(a);
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let prod = mat_mul(&mat_mul(&s.u, &big), &s.v);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j && i < s.diagonal.len() {
                    s.diagonal[i].clone()
                } else {
                    <BigInt as Zero>::zero()
                };
                assert_eq!(*x, expect, "U A V mismatch at ({i},{j})");
            }
        }
        assert!(det_is_unit(&s.u));
        assert!(det_is_unit(&s.v));
        for w in s.diagonal[..s.rank].windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(s.diagonal[..s.rank].iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn known_forms() {
        let s = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.small_diagonal().unwrap(), vec![2, 6, 12]);
        let s = check(&[vec![6, 0], vec![0, 4]]);
        assert_eq!(s.small_diagonal().unwrap(), vec![2, 12]);
        let s = check(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(s.rank, 0);
        let s = check(&[]);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn bigint_fallback() {
        // a Hilbert-like integer matrix with large entries forces growth
        let n = 6;
        let a: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (1i64 << 40) / ((i + j + 1) as i64) + (i * j) as i64)
                    .collect()
            })
            .collect();
        let s = check(&a);
        assert!(s.rank == n);
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 1usize..5, cols in 1usize..6, seed in prop::collection::vec(-9i64..10, 30)) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * cols + j]).collect()).collect();
            check(&a);
        }
    }
}
