//! Local-to-global reductions: lifting and extending automorphisms through
//! the Sylow subgroups of `H = G/N`.
//!
//! For a subgroup `Q ≤ H` with preimage `P = π⁻¹(Q)`, the extension
//! `N → P → Q` is rebuilt as a standalone [`ExtensionData`] on `P`'s own
//! element numbering (see [`LocalExtension`]).

use std::collections::HashMap;

use crate::cohomology::CohomologyClass;
use crate::error::{Error, Result};
use crate::group::{
    center_and_derived, conjugates_of, is_commuting_automorphism, is_nilpotent, prime_divisors, sylow_subgroup,
    FiniteGroup, GroupAutomorphism, Subgroup,
};
use crate::wells::{extension_with_bounds, ExtensionData, Realization};

/// The extension `N → P → Q` for `Q ≤ H`, renumbered on `P`.
#[derive(Debug, Clone)]
pub struct LocalExtension {
    pub ext: ExtensionData,
    /// Members of `P` in `G`; local element `i` is `members[i]`.
    pub members: Vec<usize>,
    /// Members of `Q` in `H`.
    pub quotient_members: Vec<usize>,
    /// Local `H`-index to global `H`-index.
    h_embed: Vec<usize>,
    h_local: HashMap<usize, usize>,
}

impl LocalExtension {
    pub fn new(ext: &ExtensionData, q: &Subgroup) -> Result<Self> {
        let p = Subgroup::preimage(ext.pi(), q.members());
        let (pg, members) = p.as_group(format!("{}|P", ext.g().name()));
        let n_local: Vec<usize> = ext
            .n()
            .members()
            .iter()
            .map(|m| members.binary_search(m).expect("N lies in P"))
            .collect();
        let n_sub = Subgroup::new(&pg, n_local)?;
        let local = extension_with_bounds(&pg, &n_sub, ext.bounds())?;
        let h_embed: Vec<usize> = local
            .transversal()
            .iter()
            .map(|&t| ext.pi().apply(members[t]))
            .collect();
        let h_local = h_embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(Self {
            ext: local,
            members,
            quotient_members: q.members().to_vec(),
            h_embed,
            h_local,
        })
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// `φ|_Q` on the local quotient; `None` if `φ(Q) ≠ Q`.
    pub fn restrict_phi(&self, phi: &GroupAutomorphism) -> Option<GroupAutomorphism> {
        let image: Option<Vec<usize>> = self
            .h_embed
            .iter()
            .map(|&x| self.h_local.get(&phi.apply(x)).copied())
            .collect();
        Some(GroupAutomorphism::new(self.ext.h(), image?).expect("restriction of an automorphism"))
    }

    /// `θ` transported to the local copy of `N` (same local numbering).
    pub fn restrict_theta(&self, theta: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism::new(self.ext.coeffs().local_group(), theta.images().to_vec())
            .expect("N has the same table inside P")
    }

    /// `γ|_P` on local indices; `None` if `γ(P) ≠ P`.
    pub fn restrict_gamma(&self, gamma: &GroupAutomorphism) -> Option<GroupAutomorphism> {
        let image: Option<Vec<usize>> = self
            .members
            .iter()
            .map(|&g| self.members.binary_search(&gamma.apply(g)).ok())
            .collect();
        Some(GroupAutomorphism::new(self.ext.g(), image?).expect("restriction of an automorphism"))
    }

    /// The local automorphism as a map on the global indices of `P`.
    pub fn globalize(&self, gamma: &GroupAutomorphism) -> Vec<(usize, usize)> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, self.members[gamma.apply(i)]))
            .collect()
    }
}

/// One prime of a Sylow reduction.
#[derive(Debug, Clone)]
pub struct SylowReport {
    pub prime: usize,
    /// `P = π⁻¹(Q)` in `G`.
    pub p_members: Vec<usize>,
    /// The Sylow subgroup `Q = P/N` of `H`, as members of `H`.
    pub quotient_sylow: Vec<usize>,
    /// `[H : Q]`.
    pub index: usize,
    pub local_success: bool,
    /// Local witness on `P`'s numbering.
    pub local_witness: Option<GroupAutomorphism>,
    /// Local obstruction class, when the local problem has one.
    pub local_obstruction: Option<CohomologyClass>,
}

/// Aggregated Sylow verdict and the global answer it predicts.
#[derive(Debug, Clone)]
pub struct SylowCheck {
    /// All local problems succeed.
    pub verdict: bool,
    pub reports: Vec<SylowReport>,
    /// Direct global computation; `None` when the map is not compatible
    /// with the action of `H` on `N`.
    pub global: Option<Realization>,
}

impl SylowCheck {
    pub fn global_realized(&self) -> bool {
        self.global.as_ref().is_some_and(Realization::is_realized)
    }
}

/// One prime of an index-kill check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexKillEntry {
    pub prime: usize,
    pub index: usize,
    pub local_lift: bool,
    /// `[H : Q]·[k_φ] = 0`.
    pub killed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexKillReport {
    pub entries: Vec<IndexKillEntry>,
    pub class_trivial: bool,
}

impl IndexKillReport {
    /// Every prime with a local lift kills the class.
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| !e.local_lift || e.killed)
    }
}

/// A lift restricted to the preimage of a characteristic subgroup.
#[derive(Debug, Clone)]
pub struct CharacteristicRestriction {
    pub local: LocalExtension,
    pub gamma: GroupAutomorphism,
}

/// Which corollaries apply to a given `φ`, and what they predict.
#[derive(Debug, Clone)]
pub struct CorollaryReport {
    pub quotient_nilpotent: bool,
    pub phi_commuting: bool,
    /// Local lifts at every prime (with invariant Sylows), if decidable.
    pub local_verdict: Option<bool>,
    pub global_lift: bool,
    /// `Some(ok)` when one of the iff corollaries applies.
    pub iff_consistent: Option<bool>,
    /// Central extensions: local pair lifts at every prime.
    pub central_pair_local: Option<bool>,
    pub central_pair_global: Option<bool>,
}

/// Caches local extensions keyed by the quotient subgroup.
pub struct Reducer<'a> {
    ext: &'a ExtensionData,
    locals: HashMap<Vec<usize>, LocalExtension>,
    sylows: HashMap<usize, Vec<Subgroup>>,
}

impl<'a> Reducer<'a> {
    pub fn new(ext: &'a ExtensionData) -> Self {
        Self {
            ext,
            locals: HashMap::new(),
            sylows: HashMap::new(),
        }
    }

    pub fn primes(&self) -> Vec<usize> {
        prime_divisors(self.ext.h().order())
    }

    /// Sylow `p`-subgroups of `H`: the deterministic one, then its conjugates.
    pub fn sylow_candidates(&mut self, p: usize) -> Result<&[Subgroup]> {
        if !self.ext.h().order().is_multiple_of(p) {
            return Err(Error::PrimeDoesNotDivide { p });
        }
        let h = self.ext.h();
        Ok(self
            .sylows
            .entry(p)
            .or_insert_with(|| conjugates_of(&sylow_subgroup(h, p))))
    }

    pub fn local(&mut self, q: &Subgroup) -> Result<&LocalExtension> {
        let key = q.members().to_vec();
        if !self.locals.contains_key(&key) {
            let l = LocalExtension::new(self.ext, q)?;
            self.locals.insert(key.clone(), l);
        }
        Ok(&self.locals[&key])
    }

    /// The first Sylow `p`-subgroup of `H` mapped onto itself by `φ`.
    pub fn invariant_sylow(&mut self, p: usize, phi: &GroupAutomorphism) -> Result<Subgroup> {
        self.sylow_candidates(p)?
            .iter()
            .find(|q| phi.preserves(q.members()))
            .cloned()
            .ok_or(Error::SylowNotInvariant { p })
    }

    fn report(&self, p: usize, q: &Subgroup, l: &LocalExtension, r: Option<Realization>) -> SylowReport {
        let (local_success, local_witness, local_obstruction) = match r {
            Some(Realization::Realized { gamma, .. }) => (true, Some(gamma), None),
            Some(Realization::Obstructed(c)) => (false, None, Some(c)),
            None => (false, None, None),
        };
        SylowReport {
            prime: p,
            p_members: l.members.clone(),
            quotient_sylow: q.members().to_vec(),
            index: self.ext.h().order() / q.order(),
            local_success,
            local_witness,
            local_obstruction,
        }
    }

    /// Lifts `φ|_Q` centralizing `N` for an invariant Sylow `Q` at each prime.
    pub fn lift_check(&mut self, phi: &GroupAutomorphism) -> Result<SylowCheck> {
        let mut reports = Vec::new();
        for p in self.primes() {
            let q = self.invariant_sylow(p, phi)?;
            let l = self.local(&q)?.clone();
            let local_phi = l.restrict_phi(phi).expect("Q is φ-invariant");
            let r = match l.ext.lift_automorphism(&local_phi) {
                Ok(r) => Some(r),
                Err(Error::NotCompatible) => None,
                Err(e) => return Err(e),
            };
            reports.push(self.report(p, &q, &l, r));
        }
        let global = match self.ext.lift_automorphism(phi) {
            Ok(r) => Some(r),
            Err(Error::NotCompatible) => None,
            Err(e) => return Err(e),
        };
        Ok(SylowCheck {
            verdict: reports.iter().all(|r| r.local_success),
            reports,
            global,
        })
    }

    /// Extends `θ` centralizing `Q` on the deterministic Sylow at each prime.
    pub fn extend_check(&mut self, theta: &GroupAutomorphism) -> Result<SylowCheck> {
        let mut reports = Vec::new();
        for p in self.primes() {
            let q = self.sylow_candidates(p)?[0].clone();
            let l = self.local(&q)?.clone();
            let r = match l.ext.extend_automorphism(&l.restrict_theta(theta)) {
                Ok(r) => Some(r),
                Err(Error::NotCompatible) => None,
                Err(e) => return Err(e),
            };
            reports.push(self.report(p, &q, &l, r));
        }
        let global = match self.ext.extend_automorphism(theta) {
            Ok(r) => Some(r),
            Err(Error::NotCompatible) => None,
            Err(e) => return Err(e),
        };
        Ok(SylowCheck {
            verdict: reports.iter().all(|r| r.local_success),
            reports,
            global,
        })
    }

    /// Realizes `(θ, φ|_Q)` on each invariant Sylow preimage of a central
    /// extension.
    pub fn pair_check(&mut self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<SylowCheck> {
        if !self.ext.is_central() {
            return Err(Error::NotCentral);
        }
        let mut reports = Vec::new();
        for p in self.primes() {
            let q = self.invariant_sylow(p, phi)?;
            let l = self.local(&q)?.clone();
            let local_phi = l.restrict_phi(phi).expect("Q is φ-invariant");
            let r = l.ext.lift_pair(&l.restrict_theta(theta), &local_phi)?;
            reports.push(self.report(p, &q, &l, Some(r)));
        }
        let global = Some(self.ext.lift_pair(theta, phi)?);
        Ok(SylowCheck {
            verdict: reports.iter().all(|r| r.local_success),
            reports,
            global,
        })
    }

    /// `[H : Q]·[k_φ]` at each prime, next to the local lift verdict.
    pub fn index_kill(&mut self, phi: &GroupAutomorphism) -> Result<IndexKillReport> {
        let k = self.ext.wells_cocycle_phi(phi)?;
        let cg = self.ext.cohomology()?;
        let class_trivial = cg.is_coboundary(&k)?;
        let mut entries = Vec::new();
        for p in self.primes() {
            let q = match self.invariant_sylow(p, phi) {
                Ok(q) => q,
                Err(Error::SylowNotInvariant { .. }) => continue,
                Err(e) => return Err(e),
            };
            let l = self.local(&q)?.clone();
            let local_phi = l.restrict_phi(phi).expect("Q is φ-invariant");
            let local_lift = l.ext.lift_automorphism(&local_phi)?.is_realized();
            let index = self.ext.h().order() / q.order();
            let killed = cg.is_coboundary(&k.scale(index as i64))?;
            entries.push(IndexKillEntry {
                prime: p,
                index,
                local_lift,
                killed,
            });
        }
        Ok(IndexKillReport { entries, class_trivial })
    }
}

/// `π⁻¹` of the deterministic Sylow `p`-subgroup of `H`.
pub fn sylow_preimage(ext: &ExtensionData, p: usize) -> Result<Subgroup> {
    if p < 2 || !ext.h().order().is_multiple_of(p) {
        return Err(Error::PrimeDoesNotDivide { p });
    }
    let q = sylow_subgroup(ext.h(), p);
    Ok(Subgroup::preimage(ext.pi(), q.members()))
}

pub fn sylow_lift_check(ext: &ExtensionData, phi: &GroupAutomorphism) -> Result<SylowCheck> {
    Reducer::new(ext).lift_check(phi)
}

pub fn sylow_extend_check(ext: &ExtensionData, theta: &GroupAutomorphism) -> Result<SylowCheck> {
    Reducer::new(ext).extend_check(theta)
}

pub fn index_kill_check(ext: &ExtensionData, phi: &GroupAutomorphism) -> Result<IndexKillReport> {
    Reducer::new(ext).index_kill(phi)
}

/// Restricts a lift `γ` (centralizing `N`) to `P` when `P/N` is
/// characteristic in `H`.
pub fn characteristic_restriction(
    ext: &ExtensionData,
    gamma: &GroupAutomorphism,
    p: &Subgroup,
) -> Result<CharacteristicRestriction> {
    if !ext.n().is_subgroup_of(p) {
        return Err(Error::invalid("P does not contain N"));
    }
    let mut q: Vec<usize> = p.members().iter().map(|&g| ext.pi().apply(g)).collect();
    q.sort_unstable();
    q.dedup();
    if ext.aut_h()?.iter().any(|a| !a.preserves(&q)) {
        return Err(Error::NotCharacteristic);
    }
    if ext.n().members().iter().any(|&m| gamma.apply(m) != m) {
        return Err(Error::invalid("automorphism does not centralize N"));
    }
    let local = LocalExtension::new(ext, &Subgroup::new(ext.h(), q)?)?;
    let restricted = local
        .restrict_gamma(gamma)
        .ok_or_else(|| Error::invalid("automorphism does not preserve P"))?;
    Ok(CharacteristicRestriction {
        local,
        gamma: restricted,
    })
}

/// Evaluates the nilpotent-quotient, commuting-automorphism and
/// central-pair packagings of the Sylow criterion for `φ` (and `θ`, used
/// only for central extensions; identity when absent).
pub fn corollary_predicates(
    ext: &ExtensionData,
    theta: Option<&GroupAutomorphism>,
    phi: &GroupAutomorphism,
) -> Result<CorollaryReport> {
    let mut red = Reducer::new(ext);
    let quotient_nilpotent = is_nilpotent(ext.h());
    let phi_commuting = is_commuting_automorphism(ext.h(), phi);
    let (local_verdict, global_lift) = match red.lift_check(phi) {
        Ok(c) => (Some(c.verdict), c.global_realized()),
        Err(Error::SylowNotInvariant { .. }) => (
            None,
            ext.lift_automorphism(phi).map(|r| r.is_realized()).unwrap_or(false),
        ),
        Err(e) => return Err(e),
    };
    let iff_consistent = if quotient_nilpotent || phi_commuting {
        Some(local_verdict == Some(global_lift))
    } else {
        None
    };
    let (central_pair_local, central_pair_global) = if ext.is_central() {
        let id = ext.identity_theta();
        match red.pair_check(theta.unwrap_or(&id), phi) {
            Ok(c) => (Some(c.verdict), Some(c.global_realized())),
            Err(Error::SylowNotInvariant { .. }) => (None, None),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    Ok(CorollaryReport {
        quotient_nilpotent,
        phi_commuting,
        local_verdict,
        global_lift,
        iff_consistent,
        central_pair_local,
        central_pair_global,
    })
}

/// Counts from [`cross_validate`]; every `*_violations` list should be empty.
#[derive(Debug, Clone, Default)]
pub struct ReductionReport {
    pub lifts_checked: usize,
    pub sylow_not_invariant: usize,
    pub extends_checked: usize,
    pub pairs_checked: usize,
    pub index_kill_checked: usize,
    pub characteristic_checked: usize,
    pub lift_violations: Vec<String>,
    pub extend_violations: Vec<String>,
    pub index_kill_violations: Vec<String>,
    pub pair_violations: Vec<String>,
    pub characteristic_violations: Vec<String>,
    pub commuting_violations: Vec<String>,
}

impl ReductionReport {
    pub fn all_pass(&self) -> bool {
        self.lift_violations.is_empty()
            && self.extend_violations.is_empty()
            && self.index_kill_violations.is_empty()
            && self.pair_violations.is_empty()
            && self.characteristic_violations.is_empty()
            && self.commuting_violations.is_empty()
    }
}

fn characteristic_quotients(h: &FiniteGroup, aut_h: &[GroupAutomorphism]) -> Vec<Subgroup> {
    let mut out = vec![center_and_derived(h).0];
    for p in prime_divisors(h.order()) {
        let q = sylow_subgroup(h, p);
        if q.is_normal() {
            out.push(q);
        }
    }
    out.retain(|q| aut_h.iter().all(|a| a.preserves(q.members())));
    out.dedup();
    out
}

/// Checks the Sylow criteria against direct global computations:
///
/// * every `φ ∈ C₂` whose Sylow restrictions all lift lifts globally, and
///   the converse wherever `H` is nilpotent or `φ` is commuting;
/// * every `θ ∈ Aut(N)` extends globally iff it extends on each Sylow preimage;
/// * `[H : Q]·[k_φ] = 0` whenever the local lift at `Q` exists;
/// * global lifts restrict to preimages of characteristic subgroups;
/// * for central extensions, local pair lifts imply global pair lifts
///   (at most `pair_limit` pairs);
/// * commuting automorphisms of `H` leave every Sylow subgroup invariant.
pub fn cross_validate(ext: &ExtensionData, pair_limit: usize) -> Result<ReductionReport> {
    let mut red = Reducer::new(ext);
    let mut rep = ReductionReport::default();
    let aut_h = ext.aut_h()?.to_vec();
    let chars = characteristic_quotients(ext.h(), &aut_h);

    for (i, phi) in ext.c2()?.iter().enumerate() {
        let check = match red.lift_check(phi) {
            Ok(c) => c,
            Err(Error::SylowNotInvariant { .. }) => {
                rep.sylow_not_invariant += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        rep.lifts_checked += 1;
        let global = check.global_realized();
        if check.verdict && !global {
            rep.lift_violations
                .push(format!("C2[{i}]: all Sylow lifts exist but no global lift"));
        }
        let iff = is_nilpotent(ext.h()) || is_commuting_automorphism(ext.h(), phi);
        if iff && check.verdict != global {
            rep.lift_violations.push(format!("C2[{i}]: corollary iff fails"));
        }
        let kill = red.index_kill(phi)?;
        rep.index_kill_checked += kill.entries.len();
        if !kill.holds() {
            rep.index_kill_violations.push(format!("C2[{i}]: {:?}", kill.entries));
        }
        if let Some(Realization::Realized { gamma, .. }) = &check.global {
            for q in &chars {
                let p = Subgroup::preimage(ext.pi(), q.members());
                rep.characteristic_checked += 1;
                let ok = characteristic_restriction(ext, gamma, &p).and_then(|cr| {
                    let local_phi = cr.local.restrict_phi(phi).expect("characteristic");
                    let pair = cr.local.ext.tau(&cr.gamma)?;
                    Ok(pair.theta.is_identity() && pair.phi == local_phi)
                });
                if !matches!(ok, Ok(true)) {
                    rep.characteristic_violations
                        .push(format!("C2[{i}] on {:?}", q.members()));
                }
            }
        }
    }

    for (i, theta) in ext.aut_n()?.iter().enumerate() {
        let check = red.extend_check(theta)?;
        rep.extends_checked += 1;
        if check.verdict != check.global_realized() {
            rep.extend_violations.push(format!(
                "Aut(N)[{i}]: local {} vs global {}",
                check.verdict,
                check.global_realized()
            ));
        }
    }

    if ext.is_central() {
        'outer: for theta in ext.aut_n()? {
            for phi in &aut_h {
                if rep.pairs_checked >= pair_limit {
                    break 'outer;
                }
                let check = match red.pair_check(theta, phi) {
                    Ok(c) => c,
                    Err(Error::SylowNotInvariant { .. }) => continue,
                    Err(e) => return Err(e),
                };
                rep.pairs_checked += 1;
                if check.verdict && !check.global_realized() {
                    rep.pair_violations.push(format!("pair {theta:?}, {phi:?}"));
                }
            }
        }
    }

    for a in aut_h.iter().filter(|a| is_commuting_automorphism(ext.h(), a)) {
        for p in red.primes() {
            for q in red.sylow_candidates(p)? {
                if !a.preserves(q.members()) {
                    rep.commuting_violations
                        .push(format!("{a:?} moves a Sylow {p}-subgroup"));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, dihedral, direct_product, generalized_quaternion, heisenberg_mod_p, symmetric};
    use crate::wells::extension_from;

    fn ext(g: &FiniteGroup, members: &[usize]) -> ExtensionData {
        extension_from(g, &Subgroup::new(g, members.to_vec()).unwrap()).unwrap()
    }

    fn a3_in(g: &FiniteGroup) -> Vec<usize> {
        g.elements().filter(|&x| g.element_order(x) != 2).collect()
    }

    #[test]
    fn preimages() {
        let s3 = symmetric(3).unwrap();
        let e = ext(&s3, &a3_in(&s3));
        assert_eq!(sylow_preimage(&e, 2).unwrap().order(), 6);
        assert!(matches!(sylow_preimage(&e, 3), Err(Error::PrimeDoesNotDivide { p: 3 })));

        let g = direct_product(&cyclic(3).unwrap(), &s3);
        // N = 1 × A3, indices a + 3b
        let n: Vec<usize> = a3_in(&s3).iter().map(|&b| 3 * b).collect();
        let e = ext(&g, &n);
        assert_eq!(e.h().order(), 6);
        assert_eq!(sylow_preimage(&e, 2).unwrap().order(), 6);
        assert_eq!(sylow_preimage(&e, 3).unwrap().order(), 9);

        let z9 = ext(&cyclic(9).unwrap(), &[0, 3, 6]);
        assert_eq!(sylow_preimage(&z9, 3).unwrap().order(), 9);
    }

    #[test]
    fn lift_checks() {
        let z9 = ext(&cyclic(9).unwrap(), &[0, 3, 6]);
        let id = z9.identity_phi();
        let c = sylow_lift_check(&z9, &id).unwrap();
        assert!(c.verdict && c.global_realized());
        let inv = GroupAutomorphism::inversion(z9.h()).unwrap();
        let c = sylow_lift_check(&z9, &inv).unwrap();
        assert!(!c.verdict && !c.global_realized());
        assert_eq!(c.reports.len(), 1);
        assert_eq!(c.reports[0].p_members.len(), 9);
        assert!(c.reports[0].local_obstruction.is_some());
    }

    #[test]
    fn extend_checks() {
        let h = heisenberg_mod_p(3).unwrap();
        let e = extension_from(&h, &center_and_derived(&h).0).unwrap();
        let inv = GroupAutomorphism::inversion(e.coeffs().local_group()).unwrap();
        let c = sylow_extend_check(&e, &inv).unwrap();
        assert!(!c.verdict && !c.global_realized());
        assert!(sylow_extend_check(&e, &e.identity_theta()).unwrap().verdict);

        let s3 = symmetric(3).unwrap();
        let e = ext(&s3, &a3_in(&s3));
        let inv = GroupAutomorphism::inversion(e.coeffs().local_group()).unwrap();
        let c = sylow_extend_check(&e, &inv).unwrap();
        assert!(c.verdict && c.global_realized());
    }

    #[test]
    fn index_kill_with_two_primes() {
        // G = ℤ/12, N = ⟨6⟩: H = ℤ/6 has two primes.
        let g = cyclic(12).unwrap();
        let e = ext(&g, &[0, 6]);
        for phi in e.c2().unwrap() {
            let r = index_kill_check(&e, &phi).unwrap();
            assert!(r.holds());
            assert_eq!(r.entries.len(), 2);
            if r.entries.iter().all(|x| x.local_lift) {
                assert!(r.class_trivial);
            }
        }
    }

    #[test]
    fn characteristic_restrictions() {
        let d16 = dihedral(16).unwrap();
        let e = extension_from(&d16, &center_and_derived(&d16).0).unwrap();
        let (zh, _) = center_and_derived(e.h());
        let p = Subgroup::preimage(e.pi(), zh.members());
        for gamma in e.aut_subgroups().unwrap().aut_upper_n {
            let cr = characteristic_restriction(&e, &gamma, &p).unwrap();
            let pair = cr.local.ext.tau(&cr.gamma).unwrap();
            assert!(pair.theta.is_identity());
        }
        let whole = Subgroup::whole(e.g());
        let gamma = &e.aut_subgroups().unwrap().aut_upper_n[1];
        assert_eq!(characteristic_restriction(&e, gamma, &whole).unwrap().gamma, *gamma);
        // A non-characteristic order-2 subgroup of H ≅ D8.
        let q = Subgroup::generated(
            e.h(),
            &[e.h()
                .elements()
                .find(|&x| e.h().element_order(x) == 2 && !zh.contains(x))
                .unwrap()],
        );
        let p = Subgroup::preimage(e.pi(), q.members());
        assert!(matches!(
            characteristic_restriction(&e, gamma, &p),
            Err(Error::NotCharacteristic)
        ));
    }

    #[test]
    fn corollaries() {
        let q8 = generalized_quaternion(8).unwrap();
        let e = extension_from(&q8, &center_and_derived(&q8).0).unwrap();
        for phi in e.aut_h().unwrap() {
            let r = corollary_predicates(&e, None, phi).unwrap();
            assert!(r.quotient_nilpotent);
            assert_eq!(r.iff_consistent, Some(true));
            assert_eq!(r.central_pair_local, r.central_pair_global);
        }
        let id = e.identity_phi();
        assert!(corollary_predicates(&e, None, &id).unwrap().phi_commuting);
    }

    #[test]
    fn cross_validation_small() {
        let s3 = symmetric(3).unwrap();
        let cases = vec![
            ext(&cyclic(9).unwrap(), &[0, 3, 6]),
            ext(&s3, &a3_in(&s3)),
            ext(&cyclic(12).unwrap(), &[0, 6]),
            ext(&cyclic(12).unwrap(), &[0, 4, 8]),
            extension_from(&dihedral(12).unwrap(), &center_and_derived(&dihedral(12).unwrap()).0).unwrap(),
            ext(&dihedral(12).unwrap(), &[0, 2, 4]),
            extension_from(&symmetric(4).unwrap(), &{
                let g = symmetric(4).unwrap();
                let v: Vec<usize> = g
                    .elements()
                    .filter(|&x| {
                        x == 0 || (g.element_order(x) == 2 && (0..24).filter(|&y| g.conjugate(x, y) != x).count() == 16)
                    })
                    .collect();
                Subgroup::new(&g, v).unwrap()
            })
            .unwrap(),
        ];
        for e in cases {
            let r = cross_validate(&e, 64).unwrap();
            assert!(r.all_pass(), "{e:?}: {r:?}");
            assert!(r.extends_checked > 0);
        }
    }
}
