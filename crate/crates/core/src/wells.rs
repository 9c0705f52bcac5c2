//! Abelian extensions `1 → N → G → H → 1`, compatible pairs, the Wells
//! cocycles and the obstruction maps `λ₁`, `λ₂`, `λ`.
//!
//! Elements of `G` are written `t(x)·n` for a transversal `t` with
//! `t(1) = 1`, and the factor set is `μ(x, y) = t(xy)⁻¹ t(x) t(y)`. `H` acts
//! on the right of `N` through `A(x)`, the matrix of `n ↦ t(x)⁻¹ n t(x)`.
//!
//! # The triple condition
//!
//! This is the one place where the multiplicative conditions for
//! `γ(t(x)n) = t(φx)·χ(x)·θ(n)` to be an automorphism are turned into
//! additive coordinates; every other formula in this module reuses it.
//!
//! ```text
//! (3)  θ ∘ A(x) = A(φx) ∘ θ                                   for all x
//! (2)  μ(φx, φy) − θ·μ(x, y) = χ(xy) − A(φy)·χ(x) − χ(y)      for all x, y
//! ```
//!
//! The right-hand side of (2) is [`ExtensionData::twisted_coboundary`]. For
//! `φ = 1`, or for `φ` with `A∘φ = A`, it is the ordinary coboundary `δχ`,
//! so `k_θ = μ − θμ` and `k_φ = μ∘φ − μ` are solved directly. For a general
//! compatible pair, substituting `u = φx`, `v = φy`, `ψ = χ∘φ⁻¹` turns (2)
//! into `δψ = w` with `w(u, v) = μ(u, v) − θ·μ(φ⁻¹u, φ⁻¹v)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{abelian_structure, add_coords, sub_coords, AbelianStructure, ActionMatrix};
use crate::cohomology::{
    is_two_cocycle, CohomologyClass, CohomologyGroup, OneCochain, TwoCochain, DEFAULT_UNKNOWN_BOUND,
};
use crate::error::{Error, Result};
use crate::group::{
    automorphism_group_bounded, quotient_group, FiniteGroup, GroupAutomorphism, GroupHomomorphism, Subgroup,
    DEFAULT_AUT_BOUND,
};

/// Enumeration bounds used by an [`ExtensionData`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest group order whose automorphism group is enumerated.
    pub aut_order: usize,
    /// Largest number of unknowns in the 2-cochain system.
    pub unknowns: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            aut_order: DEFAULT_AUT_BOUND,
            unknowns: DEFAULT_UNKNOWN_BOUND,
        }
    }
}

/// Transversal-independent data, shared by all transversals of one extension.
struct Shared {
    g: FiniteGroup,
    n: Subgroup,
    h: FiniteGroup,
    pi: GroupHomomorphism,
    coeffs: AbelianStructure,
    action: Vec<ActionMatrix>,
    central: bool,
    bounds: Bounds,
    cohomology: OnceLock<Result<CohomologyGroup>>,
    aut_n: OnceLock<Result<Vec<GroupAutomorphism>>>,
    aut_h: OnceLock<Result<Vec<GroupAutomorphism>>>,
    aut_g: OnceLock<Result<Vec<GroupAutomorphism>>>,
}

/// An abelian extension together with a transversal and its factor set.
#[derive(Clone)]
pub struct ExtensionData {
    shared: Arc<Shared>,
    transversal: Vec<usize>,
    mu: TwoCochain,
}

/// A pair `(θ, φ) ∈ Aut(N) × Aut(H)`; `θ` acts on the local indices of `N`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompatiblePair {
    pub theta: GroupAutomorphism,
    pub phi: GroupAutomorphism,
}

impl CompatiblePair {
    /// Componentwise `self ∘ other`.
    pub fn compose(&self, other: &CompatiblePair) -> CompatiblePair {
        CompatiblePair {
            theta: self.theta.compose(&other.theta),
            phi: self.phi.compose(&other.phi),
        }
    }
}

impl fmt::Debug for CompatiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.theta, self.phi)
    }
}

/// `C`, `C₁` and `C₂`.
#[derive(Debug, Clone)]
pub struct CompatibleSets {
    pub c: Vec<CompatiblePair>,
    pub c1: Vec<GroupAutomorphism>,
    pub c2: Vec<GroupAutomorphism>,
}

/// `(θ, φ, χ)` describing `γ(t(x)n) = t(φx)·χ(x)·θ(n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WellsTriple {
    pub theta: GroupAutomorphism,
    pub phi: GroupAutomorphism,
    pub chi: OneCochain,
}

impl fmt::Debug for WellsTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.theta, self.phi, self.chi)
    }
}

/// Outcome of an extension or lifting question.
#[derive(Debug, Clone)]
pub enum Realization {
    /// An automorphism of `G` inducing the requested data, and the `χ` used.
    Realized { gamma: GroupAutomorphism, chi: OneCochain },
    /// The nontrivial obstruction class.
    Obstructed(CohomologyClass),
}

impl Realization {
    pub fn is_realized(&self) -> bool {
        matches!(self, Realization::Realized { .. })
    }

    pub fn witness(&self) -> Option<&GroupAutomorphism> {
        match self {
            Realization::Realized { gamma, .. } => Some(gamma),
            Realization::Obstructed(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&CohomologyClass> {
        match self {
            Realization::Realized { .. } => None,
            Realization::Obstructed(c) => Some(c),
        }
    }
}

/// The four automorphism groups attached to `N ⊴ G`, each sorted.
#[derive(Debug, Clone)]
pub struct AutSubgroups {
    /// `Aut_N(G)`: normalizing `N`.
    pub aut_n_of_g: Vec<GroupAutomorphism>,
    /// `Aut^N(G)`: centralizing `N`.
    pub aut_upper_n: Vec<GroupAutomorphism>,
    /// `Aut_N^H(G)`: normalizing `N`, identity on `H`.
    pub aut_n_h: Vec<GroupAutomorphism>,
    /// `Aut^{N,H}(G)`: centralizing `N`, identity on `H`.
    pub aut_upper_n_h: Vec<GroupAutomorphism>,
}

/// Elementwise comparison of the automorphism sequences with their
/// cohomological descriptions.
#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub aut_g_order: usize,
    pub aut_n_of_g_order: usize,
    pub aut_upper_n_order: usize,
    pub aut_n_h_order: usize,
    pub aut_upper_n_h_order: usize,
    pub z1_order: usize,
    pub c1_order: usize,
    pub c2_order: usize,
    pub c1_star_order: usize,
    pub c2_star_order: usize,
    pub c_star_order: Option<usize>,
    /// `Z¹ ≅ Aut^{N,H}(G)`, checked by order.
    pub z1_matches: bool,
    pub seq_1_1: bool,
    pub seq_1_2: bool,
    /// `None` for non-central extensions.
    pub seq_1_3: Option<bool>,
    pub violations: Vec<String>,
}

impl ExactnessReport {
    pub fn all_pass(&self) -> bool {
        self.z1_matches && self.seq_1_1 && self.seq_1_2 && self.seq_1_3 != Some(false)
    }
}

/// Result of checking the derivation identities for `λ₁` and `λ₂`.
#[derive(Debug, Clone, Default)]
pub struct DerivationReport {
    pub c1_pairs: usize,
    pub c2_pairs: usize,
    /// False when a set was larger than the limit and only a prefix was used.
    pub exhaustive: bool,
    pub failures: Vec<String>,
}

/// Result of recomputing verdicts under random transversals.
#[derive(Debug, Clone, Default)]
pub struct TransversalReport {
    pub draws: usize,
    pub verdicts_per_draw: usize,
    pub failures: Vec<String>,
}

impl ExtensionData {
    pub fn g(&self) -> &FiniteGroup {
        &self.shared.g
    }

    pub fn n(&self) -> &Subgroup {
        &self.shared.n
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.shared.h
    }

    pub fn pi(&self) -> &GroupHomomorphism {
        &self.shared.pi
    }

    pub fn coeffs(&self) -> &AbelianStructure {
        &self.shared.coeffs
    }

    pub fn moduli(&self) -> &[u64] {
        self.shared.coeffs.moduli()
    }

    /// `A(x)` for every `x ∈ H`.
    pub fn action(&self) -> &[ActionMatrix] {
        &self.shared.action
    }

    pub fn is_central(&self) -> bool {
        self.shared.central
    }

    pub fn bounds(&self) -> Bounds {
        self.shared.bounds
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn mu(&self) -> &TwoCochain {
        &self.mu
    }

    /// Writes `g = t(x)·n` and returns `(x, coordinates of n)`.
    pub fn decompose(&self, g: usize) -> (usize, &[u64]) {
        let grp = &self.shared.g;
        let x = self.shared.pi.apply(g);
        let n = grp.mul(grp.inv(self.transversal[x]), g);
        (x, self.shared.coeffs.to_coords(n).expect("t(x)⁻¹g lies in N"))
    }

    /// `t(x)·n` for `n` given in coordinates.
    pub fn element(&self, x: usize, n: &[u64]) -> usize {
        self.shared
            .g
            .mul(self.transversal[x], self.shared.coeffs.from_coords(n))
    }

    /// Same extension with another transversal.
    pub fn with_transversal(&self, transversal: Vec<usize>) -> Result<Self> {
        let s = &self.shared;
        if transversal.len() != s.h.order() {
            return Err(Error::invalid("transversal length differs from |H|"));
        }
        if transversal[0] != 0 {
            return Err(Error::invalid("transversal must send 1 to 1"));
        }
        for (x, &g) in transversal.iter().enumerate() {
            if g >= s.g.order() || s.pi.apply(g) != x {
                return Err(Error::invalid(format!("transversal value at {x} is not in its coset")));
            }
        }
        Ok(Self::assemble(self.shared.clone(), transversal))
    }

    /// A transversal `t'(x) = t(x)·n_x` with uniformly random `n_x` (`n_1 = 1`).
    pub fn random_transversal(&self, rng: &mut impl Rng) -> Self {
        let members = self.shared.n.members();
        let g = &self.shared.g;
        let t = (0..self.shared.h.order())
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    g.mul(self.transversal[x], members[rng.gen_range(0..members.len())])
                }
            })
            .collect();
        Self::assemble(self.shared.clone(), t)
    }

    fn assemble(shared: Arc<Shared>, transversal: Vec<usize>) -> Self {
        let g = &shared.g;
        let hn = shared.h.order();
        let mu = TwoCochain::from_fn(shared.coeffs.moduli(), hn, |x, y| {
            let lhs = g.mul(transversal[x], transversal[y]);
            let xy = shared.h.mul(x, y);
            let n = g.mul(g.inv(transversal[xy]), lhs);
            shared.coeffs.to_coords(n).expect("μ takes values in N").to_vec()
        });
        assert!(
            is_two_cocycle(&mu, &shared.h, &shared.action),
            "factor set violates the cocycle identity"
        );
        Self {
            shared,
            transversal,
            mu,
        }
    }

    /// `H²(H, N)` for this module structure (computed once per extension).
    pub fn cohomology(&self) -> Result<&CohomologyGroup> {
        let s = &self.shared;
        s.cohomology
            .get_or_init(|| CohomologyGroup::with_bound(&s.h, &s.coeffs, s.action.clone(), s.bounds.unknowns))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `Aut(N)`, acting on the local indices of `N`.
    pub fn aut_n(&self) -> Result<&[GroupAutomorphism]> {
        let s = &self.shared;
        s.aut_n
            .get_or_init(|| automorphism_group_bounded(s.coeffs.local_group(), s.bounds.aut_order))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn aut_h(&self) -> Result<&[GroupAutomorphism]> {
        let s = &self.shared;
        s.aut_h
            .get_or_init(|| automorphism_group_bounded(&s.h, s.bounds.aut_order))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn aut_g(&self) -> Result<&[GroupAutomorphism]> {
        let s = &self.shared;
        s.aut_g
            .get_or_init(|| automorphism_group_bounded(&s.g, s.bounds.aut_order))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn identity_theta(&self) -> GroupAutomorphism {
        GroupAutomorphism::identity(self.shared.coeffs.local_group())
    }

    pub fn identity_phi(&self) -> GroupAutomorphism {
        GroupAutomorphism::identity(&self.shared.h)
    }

    /// Matrix of `θ` in the coordinates of `N`.
    pub fn theta_matrix(&self, theta: &GroupAutomorphism) -> ActionMatrix {
        self.shared.coeffs.restrict_to_matrix(theta)
    }

    /// Condition (3): `θ∘A(x) = A(φx)∘θ` for all `x`.
    pub fn is_compatible(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> bool {
        self.compatibility_failure(&self.theta_matrix(theta), phi).is_none()
    }

    fn compatibility_failure(&self, tm: &ActionMatrix, phi: &GroupAutomorphism) -> Option<usize> {
        let a = &self.shared.action;
        (0..a.len()).find(|&x| tm.compose(&a[x]) != a[phi.apply(x)].compose(tm))
    }

    /// `C₁ = {θ : (θ, 1) ∈ C}`.
    pub fn c1(&self) -> Result<Vec<GroupAutomorphism>> {
        let id = self.identity_phi();
        Ok(self
            .aut_n()?
            .iter()
            .filter(|t| self.is_compatible(t, &id))
            .cloned()
            .collect())
    }

    /// `C₂ = {φ : (1, φ) ∈ C}`, i.e. `A∘φ = A`.
    pub fn c2(&self) -> Result<Vec<GroupAutomorphism>> {
        let a = &self.shared.action;
        Ok(self
            .aut_h()?
            .iter()
            .filter(|p| (0..a.len()).all(|x| a[p.apply(x)] == a[x]))
            .cloned()
            .collect())
    }

    /// `C`, `C₁` and `C₂`, each checked to be closed under composition.
    pub fn compatible_pairs(&self) -> Result<CompatibleSets> {
        let aut_h = self.aut_h()?;
        let mut c = Vec::new();
        for theta in self.aut_n()? {
            let tm = self.theta_matrix(theta);
            for phi in aut_h {
                if self.compatibility_failure(&tm, phi).is_none() {
                    c.push(CompatiblePair {
                        theta: theta.clone(),
                        phi: phi.clone(),
                    });
                }
            }
        }
        let sets = CompatibleSets {
            c,
            c1: self.c1()?,
            c2: self.c2()?,
        };
        assert!(is_closed(&sets.c, |a, b| a.compose(b)), "C is not closed");
        assert!(is_closed(&sets.c1, |a, b| a.compose(b)), "C1 is not closed");
        assert!(is_closed(&sets.c2, |a, b| a.compose(b)), "C2 is not closed");
        Ok(sets)
    }

    /// `δ_φχ(x, y) = χ(xy) − A(φy)·χ(x) − χ(y)`, the right-hand side of (2).
    pub fn twisted_coboundary(&self, chi: &OneCochain, phi: &GroupAutomorphism) -> TwoCochain {
        let h = &self.shared.h;
        let a = &self.shared.action;
        let m = self.moduli();
        TwoCochain::from_fn(m, h.order(), |x, y| {
            let lhs = chi.get(h.mul(x, y));
            let twisted = a[phi.apply(y)].apply(chi.get(x));
            sub_coords(m, &sub_coords(m, lhs, &twisted), chi.get(y))
        })
    }

    /// Left-hand side of (2): `μ(φx, φy) − θ·μ(x, y)`.
    pub fn triple_defect(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> TwoCochain {
        let tm = self.theta_matrix(theta);
        self.mu.precompose(phi.images()).sub(&self.mu.map_values(&tm))
    }

    /// `k_θ = μ − θμ`.
    pub fn wells_cocycle_theta(&self, theta: &GroupAutomorphism) -> Result<TwoCochain> {
        if !self.is_compatible(theta, &self.identity_phi()) {
            return Err(Error::NotCompatible);
        }
        Ok(self.mu.sub(&self.mu.map_values(&self.theta_matrix(theta))))
    }

    /// `k_φ = μ∘(φ×φ) − μ`.
    pub fn wells_cocycle_phi(&self, phi: &GroupAutomorphism) -> Result<TwoCochain> {
        if !self.is_compatible(&self.identity_theta(), phi) {
            return Err(Error::NotCompatible);
        }
        Ok(self.mu.precompose(phi.images()).sub(&self.mu))
    }

    /// `k_{θ,φ} = μ∘(φ×φ) − θμ`; central extensions only.
    pub fn wells_cocycle_pair(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<TwoCochain> {
        if !self.shared.central {
            return Err(Error::NotCentral);
        }
        Ok(self.triple_defect(theta, phi))
    }

    /// `w(u, v) = μ(u, v) − θ·μ(φ⁻¹u, φ⁻¹v)` for any compatible pair. It
    /// is a coboundary exactly when the pair is induced by an automorphism.
    pub fn obstruction_cocycle(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<TwoCochain> {
        if !self.is_compatible(theta, phi) {
            return Err(Error::NotCompatible);
        }
        let inv = phi.inverse();
        Ok(self.triple_defect(theta, phi).precompose(inv.images()))
    }

    pub fn lambda1(&self, theta: &GroupAutomorphism) -> Result<CohomologyClass> {
        let k = self.wells_cocycle_theta(theta)?;
        Ok(self.cohomology()?.class_of_trusted(k))
    }

    pub fn lambda2(&self, phi: &GroupAutomorphism) -> Result<CohomologyClass> {
        let k = self.wells_cocycle_phi(phi)?;
        Ok(self.cohomology()?.class_of_trusted(k))
    }

    pub fn lambda_pair(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<CohomologyClass> {
        let k = self.wells_cocycle_pair(theta, phi)?;
        Ok(self.cohomology()?.class_of_trusted(k))
    }

    /// Class of [`Self::obstruction_cocycle`].
    pub fn lambda_general(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<CohomologyClass> {
        let w = self.obstruction_cocycle(theta, phi)?;
        Ok(self.cohomology()?.class_of_trusted(w))
    }

    /// `θ` on local indices of `N` for an automorphism normalizing `N`.
    pub fn restriction_to_n(&self, gamma: &GroupAutomorphism) -> Result<GroupAutomorphism> {
        let n = &self.shared.n;
        let mut image = Vec::with_capacity(n.order());
        for &m in n.members() {
            match n.local_index(gamma.apply(m)) {
                Some(i) => image.push(i),
                None => return Err(Error::DoesNotNormalize { element: m }),
            }
        }
        GroupAutomorphism::new(self.shared.coeffs.local_group(), image)
    }

    /// `φ(x) = π(γ(t(x)))` for an automorphism normalizing `N`.
    pub fn induced_on_quotient(&self, gamma: &GroupAutomorphism) -> Result<GroupAutomorphism> {
        if let Some(&m) = self
            .shared
            .n
            .members()
            .iter()
            .find(|&&m| !self.shared.n.contains(gamma.apply(m)))
        {
            return Err(Error::DoesNotNormalize { element: m });
        }
        let image = self
            .transversal
            .iter()
            .map(|&t| self.shared.pi.apply(gamma.apply(t)))
            .collect();
        GroupAutomorphism::new(&self.shared.h, image)
    }

    /// `τ(γ) = (θ, φ)`.
    pub fn tau(&self, gamma: &GroupAutomorphism) -> Result<CompatiblePair> {
        Ok(CompatiblePair {
            theta: self.restriction_to_n(gamma)?,
            phi: self.induced_on_quotient(gamma)?,
        })
    }

    /// The triple of an automorphism normalizing `N`; `χ(x) = t(φx)⁻¹γ(t(x))`.
    pub fn triple_of(&self, gamma: &GroupAutomorphism) -> Result<WellsTriple> {
        let CompatiblePair { theta, phi } = self.tau(gamma)?;
        let g = &self.shared.g;
        let chi = OneCochain::from_fn(self.moduli(), self.shared.h.order(), |x| {
            let img = gamma.apply(self.transversal[x]);
            let n = g.mul(g.inv(self.transversal[phi.apply(x)]), img);
            self.shared.coeffs.to_coords(n).expect("lies in N").to_vec()
        });
        let triple = WellsTriple { theta, phi, chi };
        debug_assert!(self.check_triple(&triple).is_ok());
        Ok(triple)
    }

    /// Checks conditions (3) and (2), reporting the first failure.
    pub fn check_triple(&self, triple: &WellsTriple) -> Result<()> {
        if triple.theta.group().order() != self.shared.n.order()
            || triple.phi.group().order() != self.shared.h.order()
            || triple.chi.moduli() != self.moduli()
            || triple.chi.domain_order() != self.shared.h.order()
        {
            return Err(Error::invalid("triple does not match the extension"));
        }
        let tm = self.theta_matrix(&triple.theta);
        if let Some(x) = self.compatibility_failure(&tm, &triple.phi) {
            return Err(Error::TripleConditionsFail {
                condition: 3,
                at: vec![x],
            });
        }
        let lhs = self.triple_defect(&triple.theta, &triple.phi);
        let rhs = self.twisted_coboundary(&triple.chi, &triple.phi);
        let hn = self.shared.h.order();
        for x in 0..hn {
            for y in 0..hn {
                if lhs.get(x, y) != rhs.get(x, y) {
                    return Err(Error::TripleConditionsFail {
                        condition: 2,
                        at: vec![x, y],
                    });
                }
            }
        }
        Ok(())
    }

    /// `γ(t(x)n) = t(φx)·χ(x)·θ(n)`, after checking the triple.
    pub fn automorphism_from_triple(&self, triple: &WellsTriple) -> Result<GroupAutomorphism> {
        self.check_triple(triple)?;
        let tm = self.theta_matrix(&triple.theta);
        let m = self.moduli();
        let image = self
            .shared
            .g
            .elements()
            .map(|g| {
                let (x, n) = self.decompose(g);
                let tail = add_coords(m, triple.chi.get(x), &tm.apply(n));
                self.element(triple.phi.apply(x), &tail)
            })
            .collect();
        GroupAutomorphism::new(&self.shared.g, image)
    }

    fn realize(
        &self,
        theta: &GroupAutomorphism,
        phi: &GroupAutomorphism,
        k: TwoCochain,
        precompose_phi: bool,
    ) -> Result<Realization> {
        let cg = self.cohomology()?;
        let class = cg.class_of_trusted(k);
        if !class.is_trivial() {
            return Ok(Realization::Obstructed(class));
        }
        match cg.coboundary_solve(class.representative())? {
            None => unreachable!("trivial class without a preimage"),
            Some(psi) => {
                let chi = if precompose_phi {
                    psi.precompose(phi.images())
                } else {
                    psi
                };
                let triple = WellsTriple {
                    theta: theta.clone(),
                    phi: phi.clone(),
                    chi,
                };
                let gamma = self.automorphism_from_triple(&triple)?;
                Ok(Realization::Realized { gamma, chi: triple.chi })
            }
        }
    }

    /// Extends `θ ∈ C₁` to an automorphism inducing the identity on `H`.
    pub fn extend_automorphism(&self, theta: &GroupAutomorphism) -> Result<Realization> {
        let k = self.wells_cocycle_theta(theta)?;
        self.realize(theta, &self.identity_phi(), k, false)
    }

    /// Lifts `φ ∈ C₂` to an automorphism centralizing `N`.
    pub fn lift_automorphism(&self, phi: &GroupAutomorphism) -> Result<Realization> {
        let k = self.wells_cocycle_phi(phi)?;
        self.realize(&self.identity_theta(), phi, k, false)
    }

    /// Realizes `(θ, φ)` for a central extension.
    pub fn lift_pair(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<Realization> {
        let k = self.wells_cocycle_pair(theta, phi)?;
        self.realize(theta, phi, k, false)
    }

    /// Realizes any compatible pair through `ψ = χ∘φ⁻¹`.
    pub fn realize_pair(&self, theta: &GroupAutomorphism, phi: &GroupAutomorphism) -> Result<Realization> {
        let w = self.obstruction_cocycle(theta, phi)?;
        self.realize(theta, phi, w, true)
    }

    /// Every valid triple: for each realizable pair, a particular `χ` plus
    /// `Z¹∘φ`. Fails if `|Z¹|` exceeds `bound`.
    pub fn all_triples(&self, bound: usize) -> Result<Vec<WellsTriple>> {
        let cg = self.cohomology()?;
        let z1 = cg.z1_elements(bound).ok_or(Error::BoundExceeded {
            what: "Z1 enumeration",
            size: bound.saturating_add(1),
            bound,
        })?;
        let mut out = Vec::new();
        for pair in self.compatible_pairs()?.c {
            let w = self.obstruction_cocycle(&pair.theta, &pair.phi)?;
            if let Some(psi) = cg.coboundary_solve(&w)? {
                for z in &z1 {
                    out.push(WellsTriple {
                        theta: pair.theta.clone(),
                        phi: pair.phi.clone(),
                        chi: psi.add(z).precompose(pair.phi.images()),
                    });
                }
            }
        }
        Ok(out)
    }

    /// `Aut_N(G)`, `Aut^N(G)`, `Aut_N^H(G)` and `Aut^{N,H}(G)` filtered from `Aut(G)`.
    pub fn aut_subgroups(&self) -> Result<AutSubgroups> {
        let n = &self.shared.n;
        let pi = &self.shared.pi;
        let mut out = AutSubgroups {
            aut_n_of_g: Vec::new(),
            aut_upper_n: Vec::new(),
            aut_n_h: Vec::new(),
            aut_upper_n_h: Vec::new(),
        };
        for gamma in self.aut_g()? {
            if !gamma.preserves(n.members()) {
                continue;
            }
            let centralizes = n.members().iter().all(|&m| gamma.apply(m) == m);
            let trivial_on_h = self
                .transversal
                .iter()
                .enumerate()
                .all(|(x, &t)| pi.apply(gamma.apply(t)) == x);
            out.aut_n_of_g.push(gamma.clone());
            if centralizes {
                out.aut_upper_n.push(gamma.clone());
            }
            if trivial_on_h {
                out.aut_n_h.push(gamma.clone());
            }
            if centralizes && trivial_on_h {
                out.aut_upper_n_h.push(gamma.clone());
            }
        }
        Ok(out)
    }

    /// Checks both sequences of the first theorem and, for central
    /// extensions, the sequence through `Aut(N) × Aut(H)`, elementwise.
    pub fn verify_exactness(&self) -> Result<ExactnessReport> {
        let cg = self.cohomology()?;
        let subs = self.aut_subgroups()?;
        let c1 = self.c1()?;
        let c2 = self.c2()?;
        let mut violations = Vec::new();
        let upper_nh: HashSet<&GroupAutomorphism> = subs.aut_upper_n_h.iter().collect();

        // Sequence through C₁.
        let mut kernel1 = HashSet::new();
        let mut image1 = BTreeSet::new();
        for gamma in &subs.aut_n_h {
            let theta = self.restriction_to_n(gamma)?;
            if theta.is_identity() {
                kernel1.insert(gamma);
            }
            image1.insert(theta);
        }
        let mut star1 = BTreeSet::new();
        for theta in &c1 {
            if self.lambda1(theta)?.is_trivial() {
                star1.insert(theta.clone());
            }
        }
        let seq_1_1 = kernel1 == upper_nh && image1 == star1;
        if kernel1 != upper_nh {
            violations.push("kernel of tau1 differs from Aut^{N,H}(G)".to_string());
        }
        if image1 != star1 {
            violations.push(format!(
                "image of tau1 has {} elements, lambda1 kernel has {}",
                image1.len(),
                star1.len()
            ));
        }

        // Sequence through C₂.
        let mut kernel2 = HashSet::new();
        let mut image2 = BTreeSet::new();
        for gamma in &subs.aut_upper_n {
            let phi = self.induced_on_quotient(gamma)?;
            if phi.is_identity() {
                kernel2.insert(gamma);
            }
            image2.insert(phi);
        }
        let mut star2 = BTreeSet::new();
        for phi in &c2 {
            if self.lambda2(phi)?.is_trivial() {
                star2.insert(phi.clone());
            }
        }
        let seq_1_2 = kernel2 == upper_nh && image2 == star2;
        if kernel2 != upper_nh {
            violations.push("kernel of tau2 differs from Aut^{N,H}(G)".to_string());
        }
        if image2 != star2 {
            violations.push(format!(
                "image of tau2 has {} elements, lambda2 kernel has {}",
                image2.len(),
                star2.len()
            ));
        }

        // Central sequence through Aut(N) × Aut(H).
        let (seq_1_3, c_star_order) = if self.shared.central {
            let mut kernel = HashSet::new();
            let mut image = BTreeSet::new();
            for gamma in &subs.aut_n_of_g {
                let pair = self.tau(gamma)?;
                if pair.theta.is_identity() && pair.phi.is_identity() {
                    kernel.insert(gamma);
                }
                image.insert(pair);
            }
            let mut star = BTreeSet::new();
            for theta in self.aut_n()? {
                for phi in self.aut_h()? {
                    if self.lambda_pair(theta, phi)?.is_trivial() {
                        star.insert(CompatiblePair {
                            theta: theta.clone(),
                            phi: phi.clone(),
                        });
                    }
                }
            }
            let ok = kernel == upper_nh && image == star;
            if kernel != upper_nh {
                violations.push("kernel of tau differs from Aut^{N,H}(G)".to_string());
            }
            if image != star {
                violations.push(format!(
                    "image of tau has {} elements, lambda kernel has {}",
                    image.len(),
                    star.len()
                ));
            }
            (Some(ok), Some(star.len()))
        } else {
            (None, None)
        };

        let z1_order = usize::try_from(cg.z1_order()).unwrap_or(usize::MAX);
        let z1_matches = z1_order == subs.aut_upper_n_h.len();
        if !z1_matches {
            violations.push(format!(
                "|Z1| = {z1_order} but |Aut^{{N,H}}(G)| = {}",
                subs.aut_upper_n_h.len()
            ));
        }
        Ok(ExactnessReport {
            aut_g_order: self.aut_g()?.len(),
            aut_n_of_g_order: subs.aut_n_of_g.len(),
            aut_upper_n_order: subs.aut_upper_n.len(),
            aut_n_h_order: subs.aut_n_h.len(),
            aut_upper_n_h_order: subs.aut_upper_n_h.len(),
            z1_order,
            c1_order: c1.len(),
            c2_order: c2.len(),
            c1_star_order: star1.len(),
            c2_star_order: star2.len(),
            c_star_order,
            z1_matches,
            seq_1_1,
            seq_1_2,
            seq_1_3,
            violations,
        })
    }

    /// `[k] ↦ [θ·k]` for `θ ∈ C₁`.
    pub fn theta_action(&self, theta: &GroupAutomorphism, class: &CohomologyClass) -> Result<CohomologyClass> {
        if !self.is_compatible(theta, &self.identity_phi()) {
            return Err(Error::NotCompatible);
        }
        let k = class.representative().map_values(&self.theta_matrix(theta));
        Ok(self.cohomology()?.class_of_trusted(k))
    }

    /// `[k] ↦ [k∘(φ×φ)]` for `φ ∈ C₂`.
    pub fn phi_action(&self, phi: &GroupAutomorphism, class: &CohomologyClass) -> Result<CohomologyClass> {
        if !self.is_compatible(&self.identity_theta(), phi) {
            return Err(Error::NotCompatible);
        }
        let k = class.representative().precompose(phi.images());
        Ok(self.cohomology()?.class_of_trusted(k))
    }

    /// Checks `λ₁(θ₁∘θ₂) = λ₁(θ₁) + θ₁·λ₁(θ₂)` on `C₁ × C₁` and
    /// `λ₂(φ₂∘φ₁) = λ₂(φ₁) + λ₂(φ₂)^{φ₁}` on `C₂ × C₂`, using at most `limit`
    /// elements of each set.
    pub fn derivation_check(&self, limit: usize) -> Result<DerivationReport> {
        let cg = self.cohomology()?;
        let mut report = DerivationReport {
            exhaustive: true,
            ..Default::default()
        };
        let mut c1 = self.c1()?;
        let mut c2 = self.c2()?;
        if c1.len() > limit || c2.len() > limit {
            report.exhaustive = false;
        }
        c1.truncate(limit);
        c2.truncate(limit);

        let k1: Vec<TwoCochain> = c1.iter().map(|t| self.wells_cocycle_theta(t)).collect::<Result<_>>()?;
        for (i, t1) in c1.iter().enumerate() {
            let m1 = self.theta_matrix(t1);
            for (j, t2) in c1.iter().enumerate() {
                let lhs = self.wells_cocycle_theta(&t1.compose(t2))?;
                let rhs = k1[i].add(&k1[j].map_values(&m1));
                if !cg.is_coboundary(&lhs.sub(&rhs))? {
                    report.failures.push(format!("lambda1 at C1 pair ({i}, {j})"));
                }
                report.c1_pairs += 1;
            }
        }

        let k2: Vec<TwoCochain> = c2.iter().map(|p| self.wells_cocycle_phi(p)).collect::<Result<_>>()?;
        for (i, p1) in c2.iter().enumerate() {
            for (j, p2) in c2.iter().enumerate() {
                let lhs = self.wells_cocycle_phi(&p2.compose(p1))?;
                let rhs = k2[i].add(&k2[j].precompose(p1.images()));
                if !cg.is_coboundary(&lhs.sub(&rhs))? {
                    report.failures.push(format!("lambda2 at C2 pair ({i}, {j})"));
                }
                report.c2_pairs += 1;
            }
        }
        Ok(report)
    }

    /// Recomputes λ-triviality and extend/lift verdicts under `draws`
    /// random transversals and compares them with this transversal's.
    /// Successful witnesses are checked to induce the requested maps.
    pub fn transversal_independence(&self, draws: usize, seed: u64, pair_limit: usize) -> Result<TransversalReport> {
        let c1 = self.c1()?;
        let c2 = self.c2()?;
        let pairs: Vec<CompatiblePair> = if self.shared.central {
            let mut v = Vec::new();
            'outer: for theta in self.aut_n()? {
                for phi in self.aut_h()? {
                    if v.len() >= pair_limit {
                        break 'outer;
                    }
                    v.push(CompatiblePair {
                        theta: theta.clone(),
                        phi: phi.clone(),
                    });
                }
            }
            v
        } else {
            Vec::new()
        };
        let verdicts = |ext: &ExtensionData| -> Result<Vec<bool>> {
            let mut v = Vec::with_capacity(c1.len() + c2.len() + pairs.len());
            for t in &c1 {
                v.push(ext.lambda1(t)?.is_trivial());
            }
            for p in &c2 {
                v.push(ext.lambda2(p)?.is_trivial());
            }
            for pr in &pairs {
                v.push(ext.lambda_pair(&pr.theta, &pr.phi)?.is_trivial());
            }
            Ok(v)
        };
        let base = verdicts(self)?;
        let mut report = TransversalReport {
            draws,
            verdicts_per_draw: base.len(),
            failures: Vec::new(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 0..draws {
            let ext = self.random_transversal(&mut rng);
            let v = verdicts(&ext)?;
            for (i, (a, b)) in base.iter().zip(&v).enumerate() {
                if a != b {
                    report.failures.push(format!("draw {d}: verdict {i} changed"));
                }
            }
            for (i, t) in c1.iter().enumerate() {
                let r = ext.extend_automorphism(t)?;
                if r.is_realized() != base[i] {
                    report
                        .failures
                        .push(format!("draw {d}: extend verdict for C1[{i}] changed"));
                }
                if let Some(gamma) = r.witness() {
                    let pair = ext.tau(gamma)?;
                    if pair.theta != *t || !pair.phi.is_identity() {
                        report
                            .failures
                            .push(format!("draw {d}: bad extension witness for C1[{i}]"));
                    }
                }
            }
            for (i, p) in c2.iter().enumerate() {
                let r = ext.lift_automorphism(p)?;
                if r.is_realized() != base[c1.len() + i] {
                    report
                        .failures
                        .push(format!("draw {d}: lift verdict for C2[{i}] changed"));
                }
                if let Some(gamma) = r.witness() {
                    let pair = ext.tau(gamma)?;
                    if !pair.theta.is_identity() || pair.phi != *p {
                        report.failures.push(format!("draw {d}: bad lift witness for C2[{i}]"));
                    }
                }
            }
        }
        Ok(report)
    }
}

impl fmt::Debug for ExtensionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Extension({} by N{:?}, |H| = {}, moduli {:?})",
            self.shared.g.name(),
            self.shared.n.members(),
            self.shared.h.order(),
            self.moduli()
        )
    }
}

/// The extension `N → G → G/N` with the minimal-index transversal.
pub fn extension_from(g: &FiniteGroup, n: &Subgroup) -> Result<ExtensionData> {
    extension_with_bounds(g, n, Bounds::default())
}

pub fn extension_with_bounds(g: &FiniteGroup, n: &Subgroup, bounds: Bounds) -> Result<ExtensionData> {
    if !n.parent().same_table(g) {
        return Err(Error::invalid("subgroup belongs to a different group"));
    }
    let (h, pi) = quotient_group(g, n)?;
    let coeffs = abelian_structure(n)?;
    let mut transversal = vec![usize::MAX; h.order()];
    for x in g.elements() {
        let c = pi.apply(x);
        if transversal[c] == usize::MAX {
            transversal[c] = x;
        }
    }
    let action: Vec<ActionMatrix> = transversal.iter().map(|&t| coeffs.conjugation_matrix(t)).collect();
    let central = action.iter().all(ActionMatrix::is_identity);
    debug_assert_eq!(central, n.is_central());
    for x in h.elements() {
        for y in h.elements() {
            debug_assert_eq!(action[h.mul(x, y)], action[y].compose(&action[x]));
        }
    }
    let shared = Arc::new(Shared {
        g: g.clone(),
        n: n.clone(),
        h,
        pi,
        coeffs,
        action,
        central,
        bounds,
        cohomology: OnceLock::new(),
        aut_n: OnceLock::new(),
        aut_h: OnceLock::new(),
        aut_g: OnceLock::new(),
    });
    Ok(ExtensionData::assemble(shared, transversal))
}

/// Whether a finite set of group elements is closed under `op`. Checks
/// `s·S ⊆ S` only for a generating subset `s`, which suffices for finite sets.
pub fn is_closed<T: Clone + Eq + Hash>(set: &[T], op: impl Fn(&T, &T) -> T) -> bool {
    let members: HashSet<&T> = set.iter().collect();
    let mut gens: Vec<&T> = Vec::new();
    let mut reached: HashSet<T> = HashSet::new();
    for s in set {
        if reached.contains(s) {
            continue;
        }
        gens.push(s);
        // Closure of the new generator set, stopping on escape.
        reached.insert(s.clone());
        let mut frontier: Vec<T> = reached.iter().cloned().collect();
        while let Some(a) = frontier.pop() {
            for g in &gens {
                let b = op(g, &a);
                if !members.contains(&b) {
                    return false;
                }
                if reached.insert(b.clone()) {
                    frontier.push(b);
                }
            }
        }
    }
    true
}
