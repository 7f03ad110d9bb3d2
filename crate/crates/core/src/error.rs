use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector {0:?} does not satisfy b^2 - 4(ac + de) = m^2 for a positive m")]
    NotDiscriminant([i64; 5]),

    #[error("vector {0:?} is not primitive")]
    NotPrimitive([i64; 5]),

    #[error("vector {0:?} has no corank-1 boundary limit (a or d is nonzero)")]
    InvalidVector([i64; 5]),

    #[error("matrix is not in the Siegel upper half space: {0}")]
    NotInSiegel(String),

    #[error("no point of H2(v) found after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    #[error("image of the exponent criterion map has real rank {rank}, expected a complex line")]
    DegenerateImage { rank: usize },

    #[error("no rank-2 sublattice found within coefficient bound {bound}")]
    LatticeNotFound { bound: i64 },

    #[error("window {window} is smaller than 3 * shift = {}", 3 * shift)]
    WindowTooSmall { window: usize, shift: usize },

    #[error("residues ({c}, {e}) do not have order {m}")]
    NotOrderM { c: i64, e: i64, m: i64 },
}
