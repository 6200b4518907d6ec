use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// The identity a structure failed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `compose(x, y)` must be defined exactly when `s(x) = r(y)`.
    Composability,
    CompositeRange,
    CompositeSource,
    Associativity,
    UnitEndpoints,
    LeftUnit,
    RightUnit,
    InverseEndpoints,
    LeftInverse,
    RightInverse,
    InverseInvolution,
    LeftInvariance,
    GroupIdentity,
    GroupInverse,
    GroupAssociativity,
    ActionIdentity,
    ActionCompatibility,
    CocycleLabel,
    CocycleMultiplicative,
    CocycleUnit,
    CocycleInverse,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Composability => "composability",
            Axiom::CompositeRange => "composite range",
            Axiom::CompositeSource => "composite source",
            Axiom::Associativity => "associativity",
            Axiom::UnitEndpoints => "unit arrow endpoints",
            Axiom::LeftUnit => "left unit",
            Axiom::RightUnit => "right unit",
            Axiom::InverseEndpoints => "inverse endpoints",
            Axiom::LeftInverse => "left inverse",
            Axiom::RightInverse => "right inverse",
            Axiom::InverseInvolution => "inverse involution",
            Axiom::LeftInvariance => "left invariance",
            Axiom::GroupIdentity => "group identity",
            Axiom::GroupInverse => "group inverse",
            Axiom::GroupAssociativity => "group associativity",
            Axiom::ActionIdentity => "action identity",
            Axiom::ActionCompatibility => "action compatibility",
            Axiom::CocycleLabel => "cocycle label",
            Axiom::CocycleMultiplicative => "cocycle multiplicativity",
            Axiom::CocycleUnit => "cocycle unit",
            Axiom::CocycleInverse => "cocycle inverse",
        }
    }
}

/// A failed axiom together with the elements that witness the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
}

impl AxiomViolation {
    pub fn new<I, S>(axiom: Axiom, witness: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            axiom,
            witness: witness.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at (", self.axiom.name())?;
        for (i, w) in self.witness.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(w)?;
        }
        f.write_str(")")
    }
}

impl core::error::Error for AxiomViolation {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("groupoid has no units or no arrows")]
    EmptyGroupoid,
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("{what} index {index} out of range (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("nonpositive Haar weight at unit {unit}: {value}")]
    NonPositiveWeight { unit: String, value: f64 },
    #[error("function has {found} coefficients but the groupoid has {expected} arrows")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown unit index {0}")]
    UnknownUnit(usize),
    #[error("group element does not belong to the group")]
    ForeignElement,
    #[error("element is not self-adjoint (defect {defect})")]
    NotSelfAdjoint { defect: f64 },
    #[error("fiber over {element} at unit {unit} is empty")]
    EmptyFiber { unit: String, element: String },
    #[error("function is not supported in a single fiber: {arrows:?}")]
    NotFiberSupported { arrows: Vec<String> },
    #[error("connector arrow {0} does not end at the requested unit and fiber")]
    BadConnector(String),
    #[error(transparent)]
    Axiom(#[from] AxiomViolation),
}

pub type Result<T> = core::result::Result<T, Error>;
