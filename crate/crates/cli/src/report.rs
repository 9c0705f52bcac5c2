//! Serializable report shapes. Field order is fixed by the struct
//! definitions, so identical inputs give identical bytes.

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use extlift_core::cohomology::CohomologyClass;
use extlift_core::reduction::{SylowCheck, SylowReport};
use extlift_core::splitting::{Section, Sequence, SplittingReport};
use extlift_core::wells::{ExtensionData, Realization};
use extlift_core::{Error, GroupAutomorphism};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// The JSON schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionJson {
    pub group: String,
    pub order: usize,
    pub n_members: Vec<usize>,
    pub moduli: Vec<u64>,
    pub h_order: usize,
    pub central: bool,
    /// `t(x)` for each element `x` of `H`.
    pub transversal: Vec<usize>,
}

impl ExtensionJson {
    pub fn new(ext: &ExtensionData) -> Self {
        Self {
            group: ext.g().name().to_string(),
            order: ext.g().order(),
            n_members: ext.n().members().to_vec(),
            moduli: ext.moduli().to_vec(),
            h_order: ext.h().order(),
            central: ext.is_central(),
            transversal: ext.transversal().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionJson {
    /// Moduli of `coordinates`, which place the class in `C²/B²`.
    pub coordinate_moduli: Vec<u64>,
    pub coordinates: Vec<u64>,
    pub cocycle: Value,
}

impl ObstructionJson {
    pub fn new(class: &CohomologyClass) -> Self {
        Self {
            coordinate_moduli: class.parent().class_moduli(),
            coordinates: class.coordinates(),
            cocycle: class.representative().to_json(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizationJson {
    pub realized: bool,
    /// Images of every element of `G` under the witness.
    pub witness: Option<Vec<usize>>,
    pub chi: Option<Value>,
    pub obstruction: Option<ObstructionJson>,
}

impl RealizationJson {
    pub fn new(r: &Realization) -> Self {
        match r {
            Realization::Realized { gamma, chi } => Self {
                realized: true,
                witness: Some(gamma.images().to_vec()),
                chi: Some(chi.to_json()),
                obstruction: None,
            },
            Realization::Obstructed(class) => Self {
                realized: false,
                witness: None,
                chi: None,
                obstruction: Some(ObstructionJson::new(class)),
            },
        }
    }
}

/// An automorphism of `N`, written on the `G` indices of its members.
pub fn theta_images(ext: &ExtensionData, theta: &GroupAutomorphism) -> Vec<usize> {
    let m = ext.n().members();
    m.iter()
        .map(|&x| m[theta.apply(ext.n().local_index(x).unwrap())])
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexedObstruction {
    pub index: usize,
    pub obstruction: ObstructionJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct Obstructions {
    pub theta: Vec<IndexedObstruction>,
    pub phi: Vec<IndexedObstruction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactnessJson {
    pub seq_1_1: bool,
    pub seq_1_2: bool,
    pub seq_1_3: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WellsReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub extension: ExtensionJson,
    pub c1_order: usize,
    pub c2_order: usize,
    pub h2_order: u64,
    /// `C₁` as images on the members of `N`.
    pub c1: Vec<Vec<usize>>,
    /// `C₂` as images on `H`.
    pub c2: Vec<Vec<usize>>,
    pub extendable: Vec<usize>,
    pub liftable: Vec<usize>,
    pub obstructions: Obstructions,
    pub exactness: ExactnessJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct H2Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub group: String,
    pub moduli: Vec<u64>,
    pub h2_order: u64,
    pub z2_order: u64,
    pub b2_order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizeReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub extension: ExtensionJson,
    pub theta: Option<Vec<usize>>,
    pub phi: Option<Vec<usize>>,
    #[serde(flatten)]
    pub result: RealizationJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct SylowJson {
    pub p: usize,
    #[serde(rename = "P_order")]
    pub p_order: usize,
    pub p_members: Vec<usize>,
    pub index: usize,
    pub local_lift: bool,
    pub obstruction: Option<ObstructionJson>,
}

impl SylowJson {
    pub fn new(r: &SylowReport) -> Self {
        Self {
            p: r.prime,
            p_order: r.p_members.len(),
            p_members: r.p_members.clone(),
            index: r.index,
            local_lift: r.local_success,
            obstruction: r.local_obstruction.as_ref().map(ObstructionJson::new),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SylowCommandReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub extension: ExtensionJson,
    pub mode: &'static str,
    pub verdict: bool,
    pub sylow_reduction: Vec<SylowJson>,
    pub global: Option<RealizationJson>,
    pub consistent: bool,
}

impl SylowCommandReport {
    pub fn new(ext: &ExtensionData, mode: &'static str, check: &SylowCheck) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "sylow",
            extension: ExtensionJson::new(ext),
            mode,
            verdict: check.verdict,
            sylow_reduction: check.reports.iter().map(SylowJson::new).collect(),
            global: check.global.as_ref().map(RealizationJson::new),
            consistent: check.verdict == check.global_realized(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionJson {
    pub sequence: &'static str,
    pub domain_order: usize,
    /// Each domain element as `(θ on N, φ on H)` images with its section image on `G`.
    pub entries: Vec<SectionEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionEntry {
    pub theta: Vec<usize>,
    pub phi: Vec<usize>,
    pub image: Vec<usize>,
}

pub fn sequence_name(s: Sequence) -> &'static str {
    match s {
        Sequence::C1 => "seq_4_1",
        Sequence::C2 => "seq_4_2",
        Sequence::Central => "seq_4_3",
    }
}

impl SectionJson {
    pub fn new(ext: &ExtensionData, s: &Section) -> Self {
        Self {
            sequence: sequence_name(s.sequence),
            domain_order: s.domain.len(),
            entries: s
                .domain
                .iter()
                .zip(&s.images)
                .map(|(d, g)| SectionEntry {
                    theta: theta_images(ext, &d.theta),
                    phi: d.phi.images().to_vec(),
                    image: g.images().to_vec(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingJson {
    pub extension_splits: bool,
    pub seq_4_1_splits: Option<bool>,
    pub seq_4_2_splits: Option<bool>,
    pub seq_4_3_splits: Option<bool>,
    pub c1_star_order: usize,
    pub c2_star_order: usize,
    pub c_star_order: Option<usize>,
    pub complement: Option<Vec<usize>>,
    pub sections: Vec<SectionJson>,
}

impl SplittingJson {
    pub fn new(
        ext: &ExtensionData,
        r: &SplittingReport,
        kernels: &extlift_core::splitting::SplitKernels,
        complement: Option<Vec<usize>>,
    ) -> Self {
        Self {
            extension_splits: r.extension_splits,
            seq_4_1_splits: r.seq_4_1_splits,
            seq_4_2_splits: r.seq_4_2_splits,
            seq_4_3_splits: r.seq_4_3_splits,
            c1_star_order: kernels.c1_star.len(),
            c2_star_order: kernels.c2_star.len(),
            c_star_order: kernels.c_star.as_ref().map(Vec::len),
            complement,
            sections: r.sections.iter().map(|s| SectionJson::new(ext, s)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub extension: ExtensionJson,
    pub splitting: SplittingJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorJson {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub schema_version: &'static str,
    pub command: String,
    pub error: ErrorJson,
}

pub fn error_kind(e: &Error) -> &'static str {
    if e.is_bound() {
        "bound_exceeded"
    } else {
        match e {
            Error::NotCompatible => "not_compatible",
            Error::NotCentral => "not_central",
            Error::NotNormal { .. } => "not_normal",
            Error::NotAbelian { .. } => "not_abelian",
            Error::NotSplit => "not_split",
            Error::NotExtraspecialShape(_) => "not_extraspecial_shape",
            Error::SylowNotInvariant { .. } => "sylow_not_invariant",
            Error::PrimeDoesNotDivide { .. } => "prime_does_not_divide",
            _ => "invalid_input",
        }
    }
}

pub fn to_u64(x: &num_bigint::BigUint) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}
