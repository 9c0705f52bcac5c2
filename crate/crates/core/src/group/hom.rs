use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A homomorphism between two table groups, stored as its image sequence.
#[derive(Clone)]
pub struct GroupHomomorphism {
    source: FiniteGroup,
    target: FiniteGroup,
    image: Vec<usize>,
}

impl GroupHomomorphism {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.order() || image.iter().any(|&y| y >= target.order()) {
            return Err(Error::invalid("image sequence does not fit source/target"));
        }
        if image[0] != 0 {
            return Err(Error::invalid("homomorphism must send identity to identity"));
        }
        for a in source.elements() {
            for b in source.elements() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(Error::invalid(format!("map is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub(crate) fn new_unchecked(source: &FiniteGroup, target: &FiniteGroup, image: Vec<usize>) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            image,
        }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// Elements sent to the identity.
    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&x| self.image[x] == 0).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.image {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

impl fmt::Debug for GroupHomomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hom({} -> {}: {:?})",
            self.source.name(),
            self.target.name(),
            self.image
        )
    }
}

/// An automorphism, stored as a permutation of the element indices.
///
/// Equality, ordering and hashing only look at the image sequence; comparing
/// automorphisms of different groups is meaningless.
#[derive(Clone)]
pub struct GroupAutomorphism {
    group: FiniteGroup,
    image: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn new(group: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if image.len() != n {
            return Err(Error::invalid("automorphism image has wrong length"));
        }
        let mut hit = vec![false; n];
        for &y in &image {
            if y >= n || hit[y] {
                return Err(Error::invalid("automorphism image is not a permutation"));
            }
            hit[y] = true;
        }
        GroupHomomorphism::new(group, group, image.clone())?;
        Ok(Self {
            group: group.clone(),
            image,
        })
    }

    pub(crate) fn new_unchecked(group: &FiniteGroup, image: Vec<usize>) -> Self {
        debug_assert_eq!(image.len(), group.order());
        Self {
            group: group.clone(),
            image,
        }
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Self::new_unchecked(group, group.elements().collect())
    }

    /// `x ↦ g x g⁻¹`.
    pub fn inner(group: &FiniteGroup, g: usize) -> Self {
        let gi = group.inv(g);
        let image = group.elements().map(|x| group.mul(group.mul(g, x), gi)).collect();
        Self::new_unchecked(group, image)
    }

    /// Inversion map; an automorphism only for abelian groups.
    pub fn inversion(group: &FiniteGroup) -> Result<Self> {
        if let Some((a, b)) = group.first_noncommuting_pair() {
            return Err(Error::NotAbelian { a, b });
        }
        Ok(Self::new_unchecked(
            group,
            group.elements().map(|x| group.inv(x)).collect(),
        ))
    }

    /// Extends an assignment of images to generators. Returns `None` when the
    /// assignment does not define an automorphism.
    pub fn from_generator_images(group: &FiniteGroup, assignment: &[(usize, usize)]) -> Option<Self> {
        let n = group.order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        let mut domain = vec![0usize];
        for &(g, y) in assignment {
            if g >= n || y >= n {
                return None;
            }
        }
        let mut i = 0;
        while i < domain.len() {
            let d = domain[i];
            for &(s, t) in assignment {
                let e = group.mul(d, s);
                let ie = group.mul(map[d], t);
                if map[e] == usize::MAX {
                    if used[ie] {
                        return None;
                    }
                    map[e] = ie;
                    used[ie] = true;
                    domain.push(e);
                } else if map[e] != ie {
                    return None;
                }
            }
            i += 1;
        }
        if domain.len() != n {
            return None;
        }
        Some(Self::new_unchecked(group, map))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        let image = other.image.iter().map(|&y| self.image[y]).collect();
        Self::new_unchecked(&self.group, image)
    }

    pub fn inverse(&self) -> GroupAutomorphism {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Self::new_unchecked(&self.group, image)
    }

    /// Order of the automorphism as a permutation.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = self.compose(&cur);
            k += 1;
        }
        k
    }

    /// Does the automorphism map the element set onto itself?
    pub fn preserves(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.group.order()];
        for &m in members {
            inside[m] = true;
        }
        members.iter().all(|&m| inside[self.image[m]])
    }

    pub fn into_images(self) -> Vec<usize> {
        self.image
    }
}

impl PartialEq for GroupAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for GroupAutomorphism {}

impl PartialOrd for GroupAutomorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupAutomorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        self.image.cmp(&other.image)
    }
}

impl Hash for GroupAutomorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.image.hash(state);
    }
}

impl fmt::Debug for GroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut({:?})", self.image)
    }
}
