use std::collections::BTreeSet;
use std::fmt;

use super::{p_part, FiniteGroup, GroupAutomorphism, GroupHomomorphism};
use crate::error::{Error, Result};

/// A subgroup, stored as the sorted list of its members (always containing 0).
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    /// Validates closure under multiplication and inverses.
    pub fn new(parent: &FiniteGroup, members: Vec<usize>) -> Result<Self> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::invalid("subgroup must contain the identity"));
        }
        if members.iter().any(|&m| m >= parent.order()) {
            return Err(Error::invalid("subgroup member out of range"));
        }
        let s = Self::from_sorted(parent, members);
        for &a in &s.members {
            if !s.contains(parent.inv(a)) {
                return Err(Error::invalid(format!("subgroup not closed under inverse at {a}")));
            }
            for &b in &s.members {
                if !s.contains(parent.mul(a, b)) {
                    return Err(Error::invalid(format!(
                        "subgroup not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(s)
    }

    fn from_sorted(parent: &FiniteGroup, members: Vec<usize>) -> Self {
        let mut mask = vec![false; parent.order()];
        for &m in &members {
            mask[m] = true;
        }
        Self {
            parent: parent.clone(),
            members,
            mask,
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(parent: &FiniteGroup, gens: &[usize]) -> Self {
        let mut mask = vec![false; parent.order()];
        mask[0] = true;
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = parent.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        Self {
            parent: parent.clone(),
            members: list,
            mask,
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Self::from_sorted(parent, vec![0])
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::from_sorted(parent, parent.elements().collect())
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    /// Position of `x` in the sorted member list.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if !self.parent.commute(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First `(g, n)` with `g⁻¹ n g ∉ N`, if any.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        for g in self.parent.elements() {
            for &n in &self.members {
                if !self.contains(self.parent.conjugate(n, g)) {
                    return Some((g, n));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn is_central(&self) -> bool {
        self.members
            .iter()
            .all(|&n| self.parent.elements().all(|g| self.parent.commute(n, g)))
    }

    /// `g⁻¹ S g`.
    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut m: Vec<usize> = self.members.iter().map(|&x| self.parent.conjugate(x, g)).collect();
        m.sort_unstable();
        Self::from_sorted(&self.parent, m)
    }

    /// Image under an automorphism of the parent.
    pub fn image_under(&self, a: &GroupAutomorphism) -> Subgroup {
        let mut m: Vec<usize> = self.members.iter().map(|&x| a.apply(x)).collect();
        m.sort_unstable();
        Self::from_sorted(&self.parent, m)
    }

    /// The subgroup as a standalone group together with its embedding.
    ///
    /// Local index `i` corresponds to parent element `members()[i]`, so the
    /// identity stays at 0 and the embedding is increasing.
    pub fn as_group(&self, name: impl Into<String>) -> (FiniteGroup, Vec<usize>) {
        let k = self.order();
        let mut mul = vec![0u32; k * k];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                let c = self.parent.mul(a, b);
                mul[i * k + j] = self.local_index(c).expect("closed") as u32;
            }
        }
        (
            FiniteGroup::from_flat_trusted(name.into(), k, mul),
            self.members.clone(),
        )
    }

    /// Preimage of a subgroup of the image of `pi`.
    pub fn preimage(pi: &GroupHomomorphism, target_members: &[usize]) -> Subgroup {
        let set: BTreeSet<usize> = target_members.iter().copied().collect();
        let members = pi.source().elements().filter(|&g| set.contains(&pi.apply(g))).collect();
        Self::from_sorted(pi.source(), members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

/// `G/N` with cosets numbered by their smallest member, plus the projection.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHomomorphism)> {
    if let Some((conjugator, element)) = n.normality_witness() {
        return Err(Error::NotNormal { conjugator, element });
    }
    let order = g.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in n.members() {
            coset_of[g.mul(x, m)] = c;
        }
    }
    let h = reps.len();
    let mut mul = vec![0u32; h * h];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mul[i * h + j] = coset_of[g.mul(a, b)] as u32;
        }
    }
    let quotient = FiniteGroup::from_flat_trusted(format!("{}/N", g.name()), h, mul);
    let pi = GroupHomomorphism::new_unchecked(g, &quotient, coset_of);
    Ok((quotient, pi))
}

/// A Sylow `p`-subgroup, grown greedily: repeatedly adjoin the first element
/// (in index order) that keeps the generated subgroup a `p`-group.
pub fn sylow_subgroup(g: &FiniteGroup, p: usize) -> Subgroup {
    let target = p_part(g.order(), p);
    let mut current = Subgroup::trivial(g);
    let mut gens: Vec<usize> = Vec::new();
    while current.order() < target {
        let mut grown = false;
        for x in g.elements() {
            if current.contains(x) || p_part(g.element_order(x), p) != g.element_order(x) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let s = Subgroup::generated(g, &trial);
            if p_part(s.order(), p) == s.order() {
                gens = trial;
                current = s;
                grown = true;
                break;
            }
        }
        assert!(grown, "a non-maximal p-subgroup always has a p-extension");
    }
    current
}

/// All distinct conjugates `g⁻¹ S g`, starting with `S`, in order of the
/// first conjugating element.
pub fn conjugates_of(s: &Subgroup) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = vec![s.clone()];
    for g in s.parent().elements() {
        let c = s.conjugate_by(g);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// All normal subgroups, ordered by size and then by member list.
///
/// Every normal subgroup is the join of the normal closures of its
/// elements, so joins are explored from the trivial subgroup outward.
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let classes: Vec<Vec<usize>> = g
        .elements()
        .map(|x| {
            let mut c: Vec<usize> = g.elements().map(|y| g.conjugate(x, y)).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    let mut queue = vec![vec![0usize]];
    while let Some(members) = queue.pop() {
        for x in g.elements() {
            if members.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = members.clone();
            gens.extend_from_slice(&classes[x]);
            let joined = Subgroup::generated(g, &gens).members;
            if found.insert(joined.clone()) {
                queue.push(joined);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().map(|m| Subgroup::from_sorted(g, m)).collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// Center and derived (commutator) subgroup.
pub fn center_and_derived(g: &FiniteGroup) -> (Subgroup, Subgroup) {
    let center: Vec<usize> = g
        .elements()
        .filter(|&z| g.elements().all(|x| g.commute(z, x)))
        .collect();
    let mut comms: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for a in g.elements() {
        for b in g.elements() {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                comms.push(c);
            }
        }
    }
    (Subgroup::from_sorted(g, center), Subgroup::generated(g, &comms))
}

/// Upper central series `1 = Z₀ ≤ Z₁ ≤ …` until it stabilizes.
pub fn upper_central_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::trivial(g)];
    loop {
        let last = series.last().unwrap();
        let next: Vec<usize> = g
            .elements()
            .filter(|&z| g.elements().all(|x| last.contains(g.commutator(z, x))))
            .collect();
        if next.len() == last.order() {
            return series;
        }
        series.push(Subgroup::from_sorted(g, next));
    }
}

pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    upper_central_series(g).last().unwrap().order() == g.order()
}

/// `x α(x) = α(x) x` for all `x`.
pub fn is_commuting_automorphism(g: &FiniteGroup, a: &GroupAutomorphism) -> bool {
    g.elements().all(|x| g.commute(x, a.apply(x)))
}
