use thiserror::Error;

use crate::filter::FamilyKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a lattice needs at least one element")]
    EmptyLattice,

    #[error("duplicate element name `{0}`")]
    DuplicateName(String),

    #[error("unknown element name `{0}` in cover relation")]
    UnknownName(String),

    #[error("cover relation has a cycle through `{a}` and `{b}`")]
    Cycle { a: String, b: String },

    #[error("not a lattice: `{a}` and `{b}` have no {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: MissingBound,
    },

    #[error("element index {index} out of range for a lattice of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("set-lattice elements belong to different filter families")]
    FamilyMismatch,

    #[error("filter family was built over a different lattice")]
    LatticeMismatch,

    #[error("lattice is not distributive")]
    NotDistributive,

    #[error("claim is only made for all/principal families, got {0}")]
    KindUnsupported(FamilyKind),

    #[error("size {size} exceeds the supported bound {max}")]
    SizeTooLarge { size: usize, max: usize },

    #[error("not a filter: {0}")]
    NotAFilter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingBound {
    Meet,
    Join,
}

impl std::fmt::Display for MissingBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MissingBound::Meet => "greatest lower bound",
            MissingBound::Join => "least upper bound",
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
