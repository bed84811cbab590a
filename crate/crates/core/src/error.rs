use thiserror::Error;

/// Errors raised by the structural operations of this crate.
///
/// Axiom checks (`validate_*`) report violations as values; the variants
/// here are for inputs an operation cannot work with at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("element `{elem}` is not a member of {set}")]
    NotAMember { elem: String, set: String },

    #[error("map is not total: no image for `{0}`")]
    PartialMap(String),

    #[error("shape mismatch: {0}")]
    Mismatch(String),

    #[error("domain is not the product of the given factors")]
    NotAProduct,

    #[error("codomain is not the exponential of the given sets")]
    NotAnExponential,

    #[error("monoid axiom violated: {0}")]
    Monoid(#[from] crate::monoid::MonoidViolation),

    #[error("action axiom violated: {0}")]
    Action(#[from] crate::actions::ActionViolation),

    #[error("not a monoid homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("not a submonoid: {0}")]
    NotASubmonoid(String),

    #[error("monoid mismatch: {0}")]
    MonoidMismatch(String),

    #[error("not Hopf: `{witness}` has no two-sided inverse")]
    NotHopf { witness: String },

    #[error("not natural: {0}")]
    NotNatural(String),

    #[error("not functorial: {0}")]
    NotFunctorial(String),

    #[error("relation is not functorial: {0}")]
    NonFunctorialRelation(String),

    #[error("site mismatch: {0}")]
    SiteMismatch(String),

    #[error("sizing guard: {what} exceeded {limit} search nodes (a full product scan would visit {needed} families)")]
    SizeLimit { what: String, needed: u128, limit: u64 },

    #[error("bad site spec `{0}`")]
    SiteSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
