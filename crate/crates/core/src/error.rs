use thiserror::Error;

/// Errors raised by the geometric routines.
///
/// Every variant is a *domain* failure: the input was well-formed but the
/// requested construction does not exist or could not be certified.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0} (projective dimension must be in 1..=4)")]
    UnsupportedDimension(usize),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("matrix exponential overflows (eigenvalue real part {0:.3} > 700)")]
    Overflow(f64),
    #[error("matrix is not an e-matrix: eigenvalue {re:.6e}{im:+.6e}i is not real and positive")]
    NotEMatrix { re: f64, im: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("no common invariant flag: {0}")]
    NoCommonFlag(String),
    #[error("cone is not pointed (contains a line)")]
    NotPointed,
    #[error("point is not in the interior of the body")]
    PointNotInterior,
    #[error("point is not in the interior of the cone (min functional value {0:.3e})")]
    NotInterior(f64),
    #[error("empty point set")]
    EmptySet,
    #[error("points do not span the ambient dimension (affine rank {rank} < {dim})")]
    DegenerateSpan { rank: usize, dim: usize },
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("kappa must lie in (0, 1), got {0}")]
    BadKappa(f64),
    #[error("m_kappa requires positive arguments, got ({0}, {1})")]
    NonPositiveInput(f64, f64),
    #[error("function is identically zero on the sampled domain")]
    FlatFunction,
    #[error("no valid quadratic barrier parameters after {0} halvings")]
    NoValidAlphaBeta(usize),
    #[error("patch is not the graph of a concave height function vanishing on the rim: {0}")]
    NotConvexPatch(String),
    #[error("invalid family parameters: {0}")]
    BadParams(String),
    #[error("group is not virtually a flag group within power bound {0}")]
    NotVfg(usize),
    #[error("generator {index} is not an e-matrix")]
    NotEGroup { index: usize },
    #[error("Lie span is not closed under brackets (residual {0:.3e})")]
    NotLieClosed(f64),
    #[error("unknown weight")]
    UnknownWeight,
    #[error("orbit certificate needs a translation group of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("orbit is not strictly convex (verdict {0})")]
    NotStrictlyConvex(String),
    #[error("flowline does not meet the boundary")]
    FlowlineMisses,
}

pub type Result<T> = std::result::Result<T, Error>;
