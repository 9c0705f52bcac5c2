use super::{FiniteGroup, GroupAutomorphism, Subgroup};
use crate::error::{Error, Result};

/// Default bound on |G| for full automorphism enumeration.
pub const DEFAULT_AUT_BOUND: usize = 512;

const UNSET: usize = usize::MAX;

/// A small generating set: repeatedly adjoin the element that enlarges the
/// generated subgroup the most (ties broken by lowest index).
pub fn greedy_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = Subgroup::trivial(g);
    while current.order() < g.order() {
        let mut best: Option<(usize, Subgroup)> = None;
        for x in g.elements() {
            if current.contains(x) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let s = Subgroup::generated(g, &trial);
            if best.as_ref().is_none_or(|(_, b)| s.order() > b.order()) {
                let full = s.order() == g.order();
                best = Some((x, s));
                if full {
                    break;
                }
            }
        }
        let (x, s) = best.expect("proper subgroup has an outside element");
        gens.push(x);
        current = s;
    }
    gens
}

pub fn automorphism_group(g: &FiniteGroup) -> Result<Vec<GroupAutomorphism>> {
    automorphism_group_bounded(g, DEFAULT_AUT_BOUND)
}

/// Every automorphism of `g`, sorted by image sequence.
///
/// Backtracks over images of a greedy generating set. Candidate images must
/// have the same element order as the generator; each partial choice is
/// propagated over the subgroup generated so far and rejected on the first
/// inconsistency or collision.
pub fn automorphism_group_bounded(g: &FiniteGroup, bound: usize) -> Result<Vec<GroupAutomorphism>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            what: "group order for automorphism enumeration",
            size: g.order(),
            bound,
        });
    }
    let gens = greedy_generators(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            g.elements()
                .filter(|&y| g.element_order(y) == g.element_order(s))
                .collect()
        })
        .collect();
    let mut map = vec![UNSET; g.order()];
    let mut used = vec![false; g.order()];
    map[0] = 0;
    used[0] = true;
    let mut out = Vec::new();
    search(g, &gens, &candidates, 0, &map, &used, &[0], &mut out);
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    level: usize,
    map: &[usize],
    used: &[bool],
    domain: &[usize],
    out: &mut Vec<GroupAutomorphism>,
) {
    if level == gens.len() {
        out.push(GroupAutomorphism::new_unchecked(g, map.to_vec()));
        return;
    }
    for &y in &candidates[level] {
        if used[y] {
            continue;
        }
        let mut map = map.to_vec();
        let mut used = used.to_vec();
        let mut domain = domain.to_vec();
        if extend(g, &gens[..=level], y, &mut map, &mut used, &mut domain) {
            search(g, gens, candidates, level + 1, &map, &used, &domain, out);
        }
    }
}

/// Assigns the last generator to `y` and closes the partial map over the
/// subgroup generated by `gens`, checking every edge `d → d·s`.
fn extend(
    g: &FiniteGroup,
    gens: &[usize],
    y: usize,
    map: &mut [usize],
    used: &mut [bool],
    domain: &mut Vec<usize>,
) -> bool {
    let s_new = *gens.last().unwrap();
    debug_assert_eq!(map[s_new], UNSET);
    map[s_new] = y;
    used[y] = true;
    domain.push(s_new);
    let mut i = 0;
    while i < domain.len() {
        let d = domain[i];
        for &s in gens {
            let e = g.mul(d, s);
            let ie = g.mul(map[d], map[s]);
            if map[e] == UNSET {
                if used[ie] {
                    return false;
                }
                map[e] = ie;
                used[ie] = true;
                domain.push(e);
            } else if map[e] != ie {
                return false;
            }
        }
        i += 1;
    }
    true
}
