use std::collections::HashMap;

use super::FiniteGroup;
use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_BOUND: usize = 20_000;

/// `(p ∘ q)(i) = p(q(i))`.
pub fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn check_perm(degree: usize, p: &[usize]) -> Result<()> {
    if p.len() != degree {
        return Err(Error::invalid(format!(
            "generator has length {}, expected degree {degree}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return Err(Error::invalid("generator is not a permutation"));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Closes a set of permutations of `0..degree` under composition and returns
/// the Cayley table of the generated group.
///
/// Elements are numbered in breadth-first discovery order from the identity,
/// multiplying by generators on the right. The group product is composition
/// `a·b = a ∘ b`.
pub fn group_from_permutations(
    name: impl Into<String>,
    degree: usize,
    generators: &[Vec<usize>],
    bound: usize,
) -> Result<FiniteGroup> {
    for g in generators {
        check_perm(degree, g)?;
    }
    let id: Vec<usize> = (0..degree).collect();
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(id, 0);
    let mut i = 0;
    while i < elements.len() {
        for g in generators {
            let p = compose_perm(&elements[i], g);
            if !index.contains_key(&p) {
                if elements.len() >= bound {
                    return Err(Error::ClosureBoundExceeded { bound });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        i += 1;
    }
    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = compose_perm(&elements[a], &elements[b]);
            mul[a * n + b] = index[&p] as u32;
        }
    }
    Ok(FiniteGroup::from_flat_trusted(name.into(), n, mul))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(degree: usize, c: &[usize]) -> Vec<usize> {
        let mut p: Vec<usize> = (0..degree).collect();
        for w in 0..c.len() {
            p[c[w]] = c[(w + 1) % c.len()];
        }
        p
    }

    #[test]
    fn closure_orders() {
        let g = group_from_permutations("C3", 3, &[cycle(3, &[0, 1, 2])], 100).unwrap();
        assert_eq!(g.order(), 3);
        let s3 = group_from_permutations("S3", 3, &[cycle(3, &[0, 1, 2]), cycle(3, &[0, 1])], 100).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let d8 = group_from_permutations("D8", 4, &[cycle(4, &[0, 1, 2, 3]), cycle(4, &[1, 3])], 100).unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.order_statistics(), vec![(1, 1), (2, 5), (4, 2)]);
    }

    #[test]
    fn closure_bound_and_bad_generators() {
        let s4 = [cycle(4, &[0, 1, 2, 3]), cycle(4, &[0, 1])];
        assert_eq!(
            group_from_permutations("S4", 4, &s4, 10).unwrap_err(),
            Error::ClosureBoundExceeded { bound: 10 }
        );
        assert!(group_from_permutations("x", 3, &[vec![0, 0, 1]], 10).is_err());
        assert!(group_from_permutations("x", 3, &[vec![0, 1]], 10).is_err());
        let trivial = group_from_permutations("1", 3, &[], 10).unwrap();
        assert_eq!(trivial.order(), 1);
    }
}
