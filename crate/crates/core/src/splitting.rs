//! Splitting: the starred sets `C₁*`, `C₂*`, `C*`, split extensions and
//! their canonical sections, a section search for the automorphism
//! sequences, and the commutator form of extraspecial-shaped extensions.

use std::collections::HashMap;

use crate::cohomology::OneCochain;
use crate::error::{Error, Result};
use crate::group::{center_and_derived, FiniteGroup, GroupAutomorphism, Subgroup};
use crate::wells::{CompatiblePair, ExtensionData, WellsTriple};

/// Largest starred set the section search accepts.
pub const SECTION_SEARCH_BOUND: usize = 120;

/// Which short exact sequence of automorphism groups is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// `Aut^{N,H}(G) → Aut_N^H(G) → C₁*`.
    C1,
    /// `Aut^{N,H}(G) → Aut^N(G) → C₂*`.
    C2,
    /// `Aut^{N,H}(G) → Aut_N(G) → C*`, central extensions only.
    Central,
}

impl Sequence {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::C1),
            2 => Some(Self::C2),
            3 => Some(Self::Central),
            _ => None,
        }
    }
}

/// The kernels of the obstruction maps and the order identities of the
/// short exact sequences they give.
#[derive(Debug, Clone)]
pub struct SplitKernels {
    pub c1_star: Vec<GroupAutomorphism>,
    pub c2_star: Vec<GroupAutomorphism>,
    /// Central extensions only.
    pub c_star: Option<Vec<CompatiblePair>>,
    pub seq_4_1_exact: bool,
    pub seq_4_2_exact: bool,
    pub seq_4_3_exact: Option<bool>,
}

/// A homomorphic section of `τ` restricted to a starred set; `domain` is
/// stored as pairs (`(θ, 1)` or `(1, φ)` for the one-sided sequences).
#[derive(Debug, Clone)]
pub struct Section {
    pub sequence: Sequence,
    pub domain: Vec<CompatiblePair>,
    pub images: Vec<GroupAutomorphism>,
}

/// A complement to `N` given by a homomorphic transversal.
#[derive(Debug, Clone)]
pub struct Complement {
    /// `t'(x)` for each `x ∈ H`; a homomorphism `H → G`.
    pub section: Vec<usize>,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CanonicalSections {
    pub psi1: Section,
    pub psi2: Section,
    pub psi: Option<Section>,
}

/// Per-sequence verdicts; `None` means undecided within the search bound.
#[derive(Debug, Clone)]
pub struct SplittingReport {
    pub extension_splits: bool,
    pub seq_4_1_splits: Option<bool>,
    pub seq_4_2_splits: Option<bool>,
    /// `None` also for non-central extensions.
    pub seq_4_3_splits: Option<bool>,
    pub sections: Vec<Section>,
}

fn one_sided(ext: &ExtensionData, which: Sequence, a: &GroupAutomorphism) -> CompatiblePair {
    match which {
        Sequence::C1 => CompatiblePair {
            theta: a.clone(),
            phi: ext.identity_phi(),
        },
        _ => CompatiblePair {
            theta: ext.identity_theta(),
            phi: a.clone(),
        },
    }
}

pub fn split_kernels(ext: &ExtensionData) -> Result<SplitKernels> {
    let mut c1_star = Vec::new();
    for theta in ext.c1()? {
        if ext.lambda1(&theta)?.is_trivial() {
            c1_star.push(theta);
        }
    }
    let mut c2_star = Vec::new();
    for phi in ext.c2()? {
        if ext.lambda2(&phi)?.is_trivial() {
            c2_star.push(phi);
        }
    }
    let c_star = if ext.is_central() {
        let mut v = Vec::new();
        for theta in ext.aut_n()? {
            for phi in ext.aut_h()? {
                if ext.lambda_pair(theta, phi)?.is_trivial() {
                    v.push(CompatiblePair {
                        theta: theta.clone(),
                        phi: phi.clone(),
                    });
                }
            }
        }
        Some(v)
    } else {
        None
    };
    let subs = ext.aut_subgroups()?;
    let k = subs.aut_upper_n_h.len();
    Ok(SplitKernels {
        seq_4_1_exact: subs.aut_n_h.len() == k * c1_star.len(),
        seq_4_2_exact: subs.aut_upper_n.len() == k * c2_star.len(),
        seq_4_3_exact: c_star.as_ref().map(|c| subs.aut_n_of_g.len() == k * c.len()),
        c1_star,
        c2_star,
        c_star,
    })
}

/// Decides whether `μ` is a coboundary; on success the homomorphic
/// transversal is `t'(x) = t(x)·χ(x)` with `δχ = μ`.
pub fn is_split_extension(ext: &ExtensionData) -> Result<Option<Complement>> {
    let chi = match ext.cohomology()?.coboundary_solve(ext.mu())? {
        Some(c) => c,
        None => return Ok(None),
    };
    let section: Vec<usize> = ext.h().elements().map(|x| ext.element(x, chi.get(x))).collect();
    let (g, h) = (ext.g(), ext.h());
    for x in h.elements() {
        for y in h.elements() {
            assert_eq!(
                g.mul(section[x], section[y]),
                section[h.mul(x, y)],
                "corrected transversal is not a homomorphism"
            );
        }
    }
    let mut members = section.clone();
    members.sort_unstable();
    debug_assert!(members.iter().filter(|&&m| ext.n().contains(m)).count() == 1);
    Ok(Some(Complement { section, members }))
}

/// `ψ₁(θ): hn ↦ hθ(n)`, `ψ₂(φ): hn ↦ φ(h)n` and, for central extensions,
/// `ψ(θ, φ): hn ↦ φ(h)θ(n)`, all in the coordinates of a complement.
pub fn canonical_sections(ext: &ExtensionData) -> Result<CanonicalSections> {
    let comp = is_split_extension(ext)?.ok_or(Error::NotSplit)?;
    let split = ext.with_transversal(comp.section)?;
    debug_assert!(split.mu().is_zero());
    let zero = OneCochain::zero(split.moduli(), split.h().order());
    let build = |pair: &CompatiblePair| -> Result<GroupAutomorphism> {
        split.automorphism_from_triple(&WellsTriple {
            theta: pair.theta.clone(),
            phi: pair.phi.clone(),
            chi: zero.clone(),
        })
    };
    let mut sections = Vec::new();
    for (which, set) in [(Sequence::C1, split.c1()?), (Sequence::C2, split.c2()?)] {
        let domain: Vec<CompatiblePair> = set.iter().map(|a| one_sided(&split, which, a)).collect();
        let images = domain.iter().map(&build).collect::<Result<Vec<_>>>()?;
        sections.push(Section {
            sequence: which,
            domain,
            images,
        });
    }
    let psi = if split.is_central() {
        let mut domain = Vec::new();
        for theta in split.aut_n()? {
            for phi in split.aut_h()? {
                domain.push(CompatiblePair {
                    theta: theta.clone(),
                    phi: phi.clone(),
                });
            }
        }
        let images = domain.iter().map(&build).collect::<Result<Vec<_>>>()?;
        Some(Section {
            sequence: Sequence::Central,
            domain,
            images,
        })
    } else {
        None
    };
    let psi2 = sections.pop().unwrap();
    let psi1 = sections.pop().unwrap();
    for s in [&psi1, &psi2].into_iter().chain(psi.as_ref()) {
        assert!(verify_section(ext, s)?, "canonical section failed verification");
    }
    Ok(CanonicalSections { psi1, psi2, psi })
}

/// Generators of a finite group given by its elements and composition,
/// chosen greedily in list order.
fn generators_of<T: Clone + Eq + std::hash::Hash>(set: &[T], op: impl Fn(&T, &T) -> T) -> Vec<usize> {
    let index: HashMap<&T, usize> = set.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut reached = vec![false; set.len()];
    let mut gens: Vec<usize> = Vec::new();
    for i in 0..set.len() {
        if reached[i] {
            continue;
        }
        gens.push(i);
        let mut frontier: Vec<usize> = (0..set.len()).filter(|&j| reached[j]).collect();
        frontier.push(i);
        reached[i] = true;
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                let b = index[&op(&set[a], &set[g])];
                if !reached[b] {
                    reached[b] = true;
                    frontier.push(b);
                }
            }
        }
    }
    gens
}

/// Checks that the images project back onto the domain under `τ` and form
/// a homomorphism. Multiplicativity is checked against a generating set.
pub fn verify_section(ext: &ExtensionData, s: &Section) -> Result<bool> {
    if s.domain.len() != s.images.len() {
        return Ok(false);
    }
    for (d, gamma) in s.domain.iter().zip(&s.images) {
        if ext.tau(gamma)? != *d {
            return Ok(false);
        }
    }
    let index: HashMap<&CompatiblePair, usize> = s.domain.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let gens = generators_of(&s.domain, |a, b| a.compose(b));
    for (i, d) in s.domain.iter().enumerate() {
        for &g in &gens {
            let Some(&j) = index.get(&d.compose(&s.domain[g])) else {
                return Ok(false);
            };
            if s.images[j] != s.images[i].compose(&s.images[g]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The starred set of a sequence, as pairs.
pub fn starred_set(ext: &ExtensionData, which: Sequence) -> Result<Vec<CompatiblePair>> {
    Ok(match which {
        Sequence::C1 => {
            let mut v = Vec::new();
            for theta in ext.c1()? {
                if ext.lambda1(&theta)?.is_trivial() {
                    v.push(one_sided(ext, which, &theta));
                }
            }
            v
        }
        Sequence::C2 => {
            let mut v = Vec::new();
            for phi in ext.c2()? {
                if ext.lambda2(&phi)?.is_trivial() {
                    v.push(one_sided(ext, which, &phi));
                }
            }
            v
        }
        Sequence::Central => {
            if !ext.is_central() {
                return Err(Error::NotCentral);
            }
            let mut v = Vec::new();
            for theta in ext.aut_n()? {
                for phi in ext.aut_h()? {
                    if ext.lambda_pair(theta, phi)?.is_trivial() {
                        v.push(CompatiblePair {
                            theta: theta.clone(),
                            phi: phi.clone(),
                        });
                    }
                }
            }
            v
        }
    })
}

/// Backtracking search for a homomorphic section of `τ` over the starred
/// set. Images are chosen for a greedy generating set from the fibres of
/// `τ`, and each choice is propagated over the subgroup generated so far.
/// `Ok(None)` means the search was exhausted.
pub fn section_search(ext: &ExtensionData, which: Sequence) -> Result<Option<Section>> {
    let domain = starred_set(ext, which)?;
    if domain.len() > SECTION_SEARCH_BOUND {
        return Err(Error::BoundExceeded {
            what: "starred set for section search",
            size: domain.len(),
            bound: SECTION_SEARCH_BOUND,
        });
    }
    let subs = ext.aut_subgroups()?;
    let source = match which {
        Sequence::C1 => &subs.aut_n_h,
        Sequence::C2 => &subs.aut_upper_n,
        Sequence::Central => &subs.aut_n_of_g,
    };
    let index: HashMap<&CompatiblePair, usize> = domain.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut fibres: Vec<Vec<GroupAutomorphism>> = vec![Vec::new(); domain.len()];
    for gamma in source {
        let pair = ext.tau(gamma)?;
        match index.get(&pair) {
            Some(&i) => fibres[i].push(gamma.clone()),
            None => panic!("τ maps outside the starred set; exactness fails"),
        }
    }
    let gens = generators_of(&domain, |a, b| a.compose(b));
    let identity = domain
        .iter()
        .position(|d| d.theta.is_identity() && d.phi.is_identity())
        .expect("starred set contains the identity");
    let mut images: Vec<Option<GroupAutomorphism>> = vec![None; domain.len()];
    images[identity] = Some(GroupAutomorphism::identity(ext.g()));
    let found = backtrack(&domain, &index, &gens, &fibres, 0, images)?;
    Ok(found.map(|images| {
        let s = Section {
            sequence: which,
            domain,
            images,
        };
        debug_assert!(verify_section(ext, &s).unwrap_or(false));
        s
    }))
}

fn backtrack(
    domain: &[CompatiblePair],
    index: &HashMap<&CompatiblePair, usize>,
    gens: &[usize],
    fibres: &[Vec<GroupAutomorphism>],
    depth: usize,
    images: Vec<Option<GroupAutomorphism>>,
) -> Result<Option<Vec<GroupAutomorphism>>> {
    if depth == gens.len() {
        return Ok(Some(
            images.into_iter().map(|x| x.expect("all elements reached")).collect(),
        ));
    }
    let g = gens[depth];
    for candidate in &fibres[g] {
        if let Some(fixed) = &images[g] {
            if fixed != candidate {
                continue;
            }
        }
        let mut trial = images.clone();
        trial[g] = Some(candidate.clone());
        if propagate(domain, index, &gens[..=depth], &mut trial) {
            if let Some(done) = backtrack(domain, index, gens, fibres, depth + 1, trial)? {
                return Ok(Some(done));
            }
        }
    }
    Ok(None)
}

/// Closes the partial map under `img(d∘g) = img(d)∘img(g)`; false on a clash.
fn propagate(
    domain: &[CompatiblePair],
    index: &HashMap<&CompatiblePair, usize>,
    gens: &[usize],
    images: &mut [Option<GroupAutomorphism>],
) -> bool {
    let mut frontier: Vec<usize> = (0..domain.len()).filter(|&i| images[i].is_some()).collect();
    while let Some(a) = frontier.pop() {
        for &g in gens {
            let b = index[&domain[a].compose(&domain[g])];
            let img = images[a].as_ref().unwrap().compose(images[g].as_ref().unwrap());
            match &images[b] {
                Some(existing) => {
                    if *existing != img {
                        return false;
                    }
                }
                None => {
                    images[b] = Some(img);
                    frontier.push(b);
                }
            }
        }
    }
    true
}

/// Splitting verdicts for the extension and the three sequences. Split
/// extensions use the canonical sections; otherwise each sequence is
/// searched (undecided when the starred set exceeds the search bound).
pub fn splitting_report(ext: &ExtensionData) -> Result<SplittingReport> {
    if is_split_extension(ext)?.is_some() {
        let cs = canonical_sections(ext)?;
        let central = cs.psi.is_some();
        let mut sections = vec![cs.psi1, cs.psi2];
        sections.extend(cs.psi);
        return Ok(SplittingReport {
            extension_splits: true,
            seq_4_1_splits: Some(true),
            seq_4_2_splits: Some(true),
            seq_4_3_splits: central.then_some(true),
            sections,
        });
    }
    let mut sections = Vec::new();
    let mut verdict = |which: Sequence| -> Result<Option<bool>> {
        match section_search(ext, which) {
            Ok(Some(s)) => {
                sections.push(s);
                Ok(Some(true))
            }
            Ok(None) => Ok(Some(false)),
            Err(e) if e.is_bound() => Ok(None),
            Err(e) => Err(e),
        }
    };
    let s1 = verdict(Sequence::C1)?;
    let s2 = verdict(Sequence::C2)?;
    let s3 = if ext.is_central() {
        verdict(Sequence::Central)?
    } else {
        None
    };
    Ok(SplittingReport {
        extension_splits: false,
        seq_4_1_splits: s1,
        seq_4_2_splits: s2,
        seq_4_3_splits: s3,
        sections,
    })
}

/// `ρ(x, y) = [t(x), t(y)]` on `H × H`, valued in `N ≅ ℤ/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorForm {
    h: usize,
    values: Vec<u8>,
    /// `q(x) = t(x)²`.
    squares: Vec<u8>,
}

impl CommutatorForm {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.values[x * self.h + y]
    }

    pub fn square(&self, x: usize) -> u8 {
        self.squares[x]
    }
}

fn check_extraspecial_shape(ext: &ExtensionData) -> Result<()> {
    let g = ext.g();
    let (z, d) = center_and_derived(g);
    if ext.n().order() != 2 {
        return Err(Error::NotExtraspecialShape("N must have order 2".into()));
    }
    if z != *ext.n() || d != *ext.n() {
        return Err(Error::NotExtraspecialShape("N must equal Z(G) and [G, G]".into()));
    }
    if !ext.h().is_abelian() || ext.h().exponent() > 2 {
        return Err(Error::NotExtraspecialShape(
            "G/N must be elementary abelian of exponent 2".into(),
        ));
    }
    Ok(())
}

pub fn commutator_form(ext: &ExtensionData) -> Result<CommutatorForm> {
    check_extraspecial_shape(ext)?;
    let (g, h) = (ext.g(), ext.h());
    let t = ext.transversal();
    let n = h.order();
    let bit = |x: usize| ext.coeffs().to_coords(x).expect("lies in N")[0] as u8;
    let mut values = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            values[x * n + y] = bit(g.commutator(t[x], t[y]));
        }
    }
    let squares = (0..n).map(|x| bit(g.mul(t[x], t[x]))).collect();
    let form = CommutatorForm { h: n, values, squares };
    for x in 0..n {
        assert_eq!(form.get(x, x), 0, "commutator form is not alternating");
        for y in 0..n {
            for z in 0..n {
                assert_eq!(
                    form.get(h.mul(x, y), z),
                    form.get(x, z) ^ form.get(y, z),
                    "commutator form is not bilinear"
                );
            }
        }
    }
    Ok(form)
}

/// `ρ(φx, φy) = ρ(x, y)` for all `x, y`.
pub fn is_form_preserving(ext: &ExtensionData, phi: &GroupAutomorphism) -> Result<bool> {
    let form = commutator_form(ext)?;
    let n = ext.h().order();
    Ok((0..n).all(|x| (0..n).all(|y| form.get(phi.apply(x), phi.apply(y)) == form.get(x, y))))
}

/// `q(φx) = q(x)` for all `x`; together with [`is_form_preserving`] this
/// describes the orthogonal group of the quadratic form `q`.
pub fn is_quadratic_preserving(ext: &ExtensionData, phi: &GroupAutomorphism) -> Result<bool> {
    let form = commutator_form(ext)?;
    Ok((0..ext.h().order()).all(|x| form.square(phi.apply(x)) == form.square(x)))
}

/// Automorphisms of `G` inducing the identity on `G/N` (they normalize `N`).
pub fn aut_upper_h(ext: &ExtensionData) -> Result<Vec<GroupAutomorphism>> {
    let pi = ext.pi();
    Ok(ext
        .aut_g()?
        .iter()
        .filter(|gamma| ext.g().elements().all(|x| pi.apply(gamma.apply(x)) == pi.apply(x)))
        .cloned()
        .collect())
}

/// `N = Z(G) = [G, G]` for a nonabelian `G`.
pub fn is_class_two_center_extension(g: &FiniteGroup, n: &Subgroup) -> bool {
    let (z, d) = center_and_derived(g);
    !g.is_abelian() && z == *n && d == *n
}
