use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building groups, extensions and
/// cohomology. Indices in the payloads refer to the element numbering of the
/// group the operation was called on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("table has no two-sided identity element")]
    NoIdentity,

    #[error("table is not a Latin square: {line} {index} repeats an entry")]
    NotLatinSquare { line: &'static str, index: usize },

    #[error("permutation closure exceeded {bound} elements")]
    ClosureBoundExceeded { bound: usize },

    #[error("unknown catalog name `{0}`")]
    UnknownName(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("subgroup is not normal: conjugating {element} by {conjugator} leaves it")]
    NotNormal { conjugator: usize, element: usize },

    #[error("subgroup is not abelian: {a} and {b} do not commute")]
    NotAbelian { a: usize, b: usize },

    #[error("{what} of size {size} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("cochain is not a 2-cocycle: identity fails at ({x}, {y}, {z})")]
    NotACocycle { x: usize, y: usize, z: usize },

    #[error("cohomology classes belong to different cohomology groups")]
    ParentMismatch,

    #[error("automorphisms do not form a compatible pair")]
    NotCompatible,

    #[error("extension is not central")]
    NotCentral,

    #[error("automorphism does not normalize N: image of {element} leaves N")]
    DoesNotNormalize { element: usize },

    #[error("triple fails condition ({condition}) at {at:?}")]
    TripleConditionsFail { condition: u8, at: Vec<usize> },

    #[error("prime {p} does not divide |G/N|")]
    PrimeDoesNotDivide { p: usize },

    #[error("no Sylow {p}-subgroup of G/N is invariant under the automorphism")]
    SylowNotInvariant { p: usize },

    #[error("subgroup is not characteristic: moved by an automorphism of the quotient")]
    NotCharacteristic,

    #[error("extension does not split")]
    NotSplit,

    #[error("extension does not have extraspecial shape: {0}")]
    NotExtraspecialShape(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for the errors that signal an enumeration or search bound.
    pub fn is_bound(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. } | Error::ClosureBoundExceeded { .. })
    }
}
