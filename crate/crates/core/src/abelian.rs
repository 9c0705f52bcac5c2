//! Coordinates for a finite abelian subgroup: invariant factors, coordinate
//! vectors with one modulus per entry, and integer matrices for its
//! automorphisms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAutomorphism, Subgroup};

/// A coordinate vector; entry `i` is reduced mod `moduli[i]`.
pub type Coords = Vec<u64>;

pub fn add_coords(moduli: &[u64], a: &[u64], b: &[u64]) -> Coords {
    moduli
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&d, (&x, &y))| (x + y) % d)
        .collect()
}

pub fn sub_coords(moduli: &[u64], a: &[u64], b: &[u64]) -> Coords {
    moduli
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&d, (&x, &y))| (x + d - y) % d)
        .collect()
}

pub fn neg_coords(moduli: &[u64], a: &[u64]) -> Coords {
    moduli.iter().zip(a).map(|(&d, &x)| (d - x) % d).collect()
}

pub fn scale_coords(moduli: &[u64], k: u64, a: &[u64]) -> Coords {
    moduli
        .iter()
        .zip(a)
        .map(|(&d, &x)| ((k % d) as u128 * x as u128 % d as u128) as u64)
        .collect()
}

struct Inner {
    source: Subgroup,
    local: FiniteGroup,
    factors: Vec<u64>,
    basis: Vec<usize>,
    coords: Vec<Coords>,
    by_radix: Vec<usize>,
}

/// Invariant-factor decomposition of an abelian subgroup `N ≤ G`.
///
/// Elements of `N` are addressed either by their index in `G` or by their
/// local index (position in the sorted member list).
#[derive(Clone)]
pub struct AbelianStructure(Arc<Inner>);

impl AbelianStructure {
    pub fn source(&self) -> &Subgroup {
        &self.0.source
    }

    /// `N` as a standalone group on local indices.
    pub fn local_group(&self) -> &FiniteGroup {
        &self.0.local
    }

    /// Ascending invariant factors `d₁ | d₂ | …`; empty for the trivial group.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.0.factors
    }

    pub fn moduli(&self) -> &[u64] {
        &self.0.factors
    }

    pub fn rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn order(&self) -> usize {
        self.0.source.order()
    }

    /// Parent indices of the chosen basis, one per invariant factor.
    pub fn basis(&self) -> &[usize] {
        &self.0.basis
    }

    pub fn coords_local(&self, i: usize) -> &[u64] {
        &self.0.coords[i]
    }

    /// Coordinates of a parent element; `None` outside `N`.
    pub fn to_coords(&self, g: usize) -> Option<&[u64]> {
        self.0.source.local_index(g).map(|i| self.coords_local(i))
    }

    pub fn from_coords_local(&self, c: &[u64]) -> usize {
        self.0.by_radix[radix(&self.0.factors, c)]
    }

    /// Parent index of the element with the given coordinates.
    pub fn from_coords(&self, c: &[u64]) -> usize {
        self.0.source.members()[self.from_coords_local(c)]
    }

    pub fn zero(&self) -> Coords {
        vec![0; self.rank()]
    }

    /// Matrix of an automorphism of `N` given on local indices.
    pub fn restrict_to_matrix(&self, theta: &GroupAutomorphism) -> ActionMatrix {
        self.matrix_of(|i| theta.apply(i))
    }

    /// Matrix of `n ↦ g⁻¹ n g` for `g` in the parent normalizing `N`.
    pub fn conjugation_matrix(&self, g: usize) -> ActionMatrix {
        let parent = self.0.source.parent();
        let members = self.0.source.members();
        self.matrix_of(|i| {
            let img = parent.conjugate(members[i], g);
            self.0.source.local_index(img).expect("g normalizes N")
        })
    }

    /// Matrix of the endomorphism given on local indices by `f`.
    pub fn matrix_of(&self, f: impl Fn(usize) -> usize) -> ActionMatrix {
        let k = self.rank();
        let mut m = vec![0u64; k * k];
        for j in 0..k {
            let bj = self.0.source.local_index(self.0.basis[j]).unwrap();
            let col = self.coords_local(f(bj));
            for i in 0..k {
                m[i * k + j] = col[i];
            }
        }
        ActionMatrix {
            moduli: self.0.factors.clone().into(),
            m,
        }
    }

    /// Permutation of local indices induced by a matrix.
    pub fn matrix_to_permutation(&self, a: &ActionMatrix) -> Vec<usize> {
        (0..self.order())
            .map(|i| self.from_coords_local(&a.apply(self.coords_local(i))))
            .collect()
    }
}

impl fmt::Debug for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianStructure({:?})", self.0.factors)
    }
}

fn radix(factors: &[u64], c: &[u64]) -> usize {
    let mut idx = 0usize;
    let mut place = 1usize;
    for (&x, &d) in c.iter().zip(factors) {
        idx += (x % d) as usize * place;
        place *= d as usize;
    }
    idx
}

/// Computes the invariant factors of an abelian subgroup.
///
/// Repeatedly takes an element whose order modulo the summands chosen so far
/// is maximal (lowest index on ties) and corrects it into a complement, which
/// yields the factors in descending order; they are reversed at the end.
pub fn abelian_structure(n: &Subgroup) -> Result<AbelianStructure> {
    if let Some((a, b)) = n.noncommuting_pair() {
        return Err(Error::NotAbelian { a, b });
    }
    let g = n.parent();
    let members = n.members();
    let mut basis: Vec<usize> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    // element of the current direct sum -> its coordinates
    let mut span: HashMap<usize, Coords> = HashMap::from([(0, Vec::new())]);
    while span.len() < members.len() {
        let mut best: Option<(u64, usize)> = None;
        for &y in members {
            let mut r = 1u64;
            let mut p = y;
            while !span.contains_key(&p) {
                p = g.mul(p, y);
                r += 1;
            }
            if best.is_none_or(|(br, _)| r > br) {
                best = Some((r, y));
            }
        }
        let (r, y) = best.expect("proper sum has an outside element");
        let ry = g.pow(y, r as usize);
        let c = &span[&ry];
        let mut x = y;
        for (i, &ci) in c.iter().enumerate() {
            debug_assert_eq!(ci % r, 0);
            let shift = g.pow(basis[i], (ci / r) as usize);
            x = g.mul(x, g.inv(shift));
        }
        debug_assert_eq!(g.element_order(x) as u64, r);
        basis.push(x);
        orders.push(r);
        let mut next = HashMap::with_capacity(span.len() * r as usize);
        for (elem, coords) in &span {
            let mut e = *elem;
            for a in 0..r {
                let mut cc = coords.clone();
                cc.push(a);
                next.insert(e, cc);
                e = g.mul(e, x);
            }
        }
        span = next;
    }
    basis.reverse();
    orders.reverse();
    let mut coords = vec![Vec::new(); members.len()];
    let mut by_radix = vec![0usize; members.len()];
    let k = orders.len();
    for (elem, mut c) in span {
        c.reverse();
        debug_assert_eq!(c.len(), k);
        let li = n.local_index(elem).unwrap();
        by_radix[radix(&orders, &c)] = li;
        coords[li] = c;
    }
    let (local, _) = n.as_group(format!("N<{}>", g.name()));
    Ok(AbelianStructure(Arc::new(Inner {
        source: n.clone(),
        local,
        factors: orders,
        basis,
        coords,
        by_radix,
    })))
}

/// A `k×k` integer matrix acting on mixed-modulus column vectors; entry
/// `(i, j)` is meaningful mod `d_i`.
///
/// Products follow ordinary matrix multiplication: `a.compose(b)` applies `b`
/// first. Under the right action `n^{xy} = (n^x)^y` this means
/// `A(xy) = A(y)·A(x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ActionMatrix {
    moduli: Arc<[u64]>,
    m: Vec<u64>,
}

impl ActionMatrix {
    pub fn identity(moduli: &[u64]) -> Self {
        let k = moduli.len();
        let mut m = vec![0u64; k * k];
        for i in 0..k {
            m[i * k + i] = 1 % moduli[i];
        }
        Self {
            moduli: moduli.into(),
            m,
        }
    }

    /// Multiplication by a scalar.
    pub fn scalar(moduli: &[u64], s: i64) -> Self {
        let k = moduli.len();
        let mut m = vec![0u64; k * k];
        for i in 0..k {
            m[i * k + i] = s.rem_euclid(moduli[i] as i64) as u64;
        }
        Self {
            moduli: moduli.into(),
            m,
        }
    }

    pub fn from_rows(moduli: &[u64], rows: &[Vec<i64>]) -> Result<Self> {
        let k = moduli.len();
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::invalid("matrix shape does not match the moduli"));
        }
        let mut m = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                m[i * k + j] = rows[i][j].rem_euclid(moduli[i] as i64) as u64;
            }
        }
        Ok(Self {
            moduli: moduli.into(),
            m,
        })
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.m[i * self.dim() + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let k = self.dim();
        (0..k).map(|i| self.m[i * k..(i + 1) * k].to_vec()).collect()
    }

    pub fn apply(&self, v: &[u64]) -> Coords {
        let k = self.dim();
        let mut out = vec![0u64; k];
        self.apply_into(v, &mut out);
        out
    }

    pub fn apply_into(&self, v: &[u64], out: &mut [u64]) {
        let k = self.dim();
        for i in 0..k {
            let d = self.moduli[i] as u128;
            let mut s = 0u128;
            for j in 0..k {
                s += self.m[i * k + j] as u128 * v[j] as u128;
            }
            out[i] = (s % d) as u64;
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ActionMatrix) -> ActionMatrix {
        let k = self.dim();
        let mut m = vec![0u64; k * k];
        for i in 0..k {
            let d = self.moduli[i] as u128;
            for j in 0..k {
                let mut s = 0u128;
                for l in 0..k {
                    s += self.m[i * k + l] as u128 * other.m[l * k + j] as u128;
                }
                m[i * k + j] = (s % d) as u64;
            }
        }
        ActionMatrix {
            moduli: self.moduli.clone(),
            m,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.moduli)
    }
}

impl fmt::Debug for ActionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {:?}", self.rows(), self.moduli)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::automorphism_group;
    use std::collections::HashSet;

    fn check_isomorphism(s: &AbelianStructure) {
        let n = s.source();
        let g = n.parent();
        for &a in n.members() {
            assert_eq!(s.from_coords(s.to_coords(a).unwrap()), a);
            for &b in n.members() {
                let lhs = s.to_coords(g.mul(a, b)).unwrap().to_vec();
                let rhs = add_coords(s.moduli(), s.to_coords(a).unwrap(), s.to_coords(b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        let f = s.invariant_factors();
        assert_eq!(f.iter().product::<u64>() as usize, n.order());
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        assert!(f.iter().all(|&d| d >= 2));
    }

    #[test]
    fn invariant_factor_examples() {
        let z2 = catalog::cyclic(2).unwrap();
        let s = abelian_structure(&Subgroup::whole(&z2)).unwrap();
        assert_eq!(s.invariant_factors(), &[2]);
        let v4 = catalog::elementary_abelian(2, 2).unwrap();
        assert_eq!(
            abelian_structure(&Subgroup::whole(&v4)).unwrap().invariant_factors(),
            &[2, 2]
        );
        let z6 = catalog::cyclic(6).unwrap();
        assert_eq!(
            abelian_structure(&Subgroup::whole(&z6)).unwrap().invariant_factors(),
            &[6]
        );
        let g = catalog::parse_group_expr("cyclic(2)*cyclic(4)*cyclic(6)").unwrap();
        let s = abelian_structure(&Subgroup::whole(&g)).unwrap();
        assert_eq!(s.invariant_factors(), &[2, 2, 12]);
        check_isomorphism(&s);
        let trivial = abelian_structure(&Subgroup::trivial(&g)).unwrap();
        assert!(trivial.invariant_factors().is_empty());
        assert_eq!(trivial.from_coords(&[]), 0);
    }

    #[test]
    fn rejects_nonabelian() {
        let s3 = catalog::dihedral(6).unwrap();
        assert!(matches!(
            abelian_structure(&Subgroup::whole(&s3)),
            Err(Error::NotAbelian { .. })
        ));
    }

    #[test]
    fn conjugation_matrices() {
        // S3 on A3: a reflection acts by -1
        let s3 = catalog::dihedral(6).unwrap();
        let a3 = Subgroup::new(&s3, vec![0, 1, 2]).unwrap();
        let s = abelian_structure(&a3).unwrap();
        assert_eq!(s.conjugation_matrix(3).rows(), vec![vec![2]]);
        assert!(s.conjugation_matrix(1).is_identity());
        // D8 on its rotation subgroup
        let d8 = catalog::dihedral(8).unwrap();
        let rot = Subgroup::new(&d8, vec![0, 1, 2, 3]).unwrap();
        let s = abelian_structure(&rot).unwrap();
        assert_eq!(s.conjugation_matrix(4).rows(), vec![vec![3]]);
        // right action: A(xy) = A(y) A(x)
        for x in d8.elements() {
            for y in d8.elements() {
                assert_eq!(
                    s.conjugation_matrix(d8.mul(x, y)),
                    s.conjugation_matrix(y).compose(&s.conjugation_matrix(x))
                );
            }
        }
    }

    #[test]
    fn restriction_is_isomorphism_onto_invertible_matrices() {
        for expr in ["cyclic(2)^2", "cyclic(9)", "cyclic(2)*cyclic(4)", "cyclic(3)^2"] {
            let g = catalog::parse_group_expr(expr).unwrap();
            let s = abelian_structure(&Subgroup::whole(&g)).unwrap();
            let auts = automorphism_group(&g).unwrap();
            let mats: Vec<ActionMatrix> = auts.iter().map(|a| s.restrict_to_matrix(a)).collect();
            let distinct: HashSet<_> = mats.iter().cloned().collect();
            assert_eq!(distinct.len(), auts.len());
            for (a, ma) in auts.iter().zip(&mats) {
                assert_eq!(s.matrix_to_permutation(ma), a.images());
                for (b, mb) in auts.iter().zip(&mats).take(8) {
                    assert_eq!(s.restrict_to_matrix(&a.compose(b)), ma.compose(mb));
                }
            }
            // count invertible well-defined matrices by brute force over all
            // column choices (columns are images of basis vectors)
            let k = s.rank();
            let order = s.order();
            let mut count = 0;
            let mut cols = vec![0usize; k];
            loop {
                let rows: Vec<Vec<i64>> = (0..k)
                    .map(|i| (0..k).map(|j| s.coords_local(cols[j])[i] as i64).collect())
                    .collect();
                let m = ActionMatrix::from_rows(s.moduli(), &rows).unwrap();
                let perm = s.matrix_to_permutation(&m);
                let bijective = perm.iter().collect::<HashSet<_>>().len() == order;
                let well_defined = (0..k).all(|j| {
                    let d = s.moduli()[j];
                    scale_coords(s.moduli(), d, s.coords_local(cols[j]))
                        .iter()
                        .all(|&x| x == 0)
                });
                if bijective && well_defined {
                    count += 1;
                }
                let mut i = 0;
                while i < k {
                    cols[i] += 1;
                    if cols[i] < order {
                        break;
                    }
                    cols[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
            assert_eq!(count, auts.len(), "{expr}");
        }
    }

    #[test]
    fn swap_matrix() {
        let v4 = catalog::elementary_abelian(2, 2).unwrap();
        let s = abelian_structure(&Subgroup::whole(&v4)).unwrap();
        let b = s.basis().to_vec();
        let swap = GroupAutomorphism::from_generator_images(&v4, &[(b[0], b[1]), (b[1], b[0])]).unwrap();
        assert_eq!(s.restrict_to_matrix(&swap).rows(), vec![vec![0, 1], vec![1, 0]]);
        assert!(s.restrict_to_matrix(&GroupAutomorphism::identity(&v4)).is_identity());
    }
}
