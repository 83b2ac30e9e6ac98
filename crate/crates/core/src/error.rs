use thiserror::Error;

/// Failures while reading numbers, elements, polynomials or algebra files.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("invalid element `{text}`: {reason}")]
    Element { text: String, reason: String },
    #[error("invalid polynomial `{text}` at byte {pos}: {reason}")]
    Poly {
        text: String,
        pos: usize,
        reason: String,
    },
    #[error("invalid algebra definition: {0}")]
    Algebra(String),
    #[error("invalid matrix definition: {0}")]
    Matrix(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("elements belong to different algebras (`{left}` vs `{right}`)")]
    AlgebraMismatch { left: String, right: String },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unit is not a two-sided identity (residual {residual:e})")]
    UnitNotIdentity { residual: f64 },
    #[error("algebra `{0}` carries no involution; cannot double it")]
    MissingInvolution(String),
    #[error("operation requires a real algebra")]
    NotReal,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("no element with I^2 = -1 found after {starts} starts (inconclusive)")]
    CopyNotFound { starts: usize },
    #[error("candidate I fails I^2 = -1 (residual {residual:e})")]
    CopyVerification { residual: f64 },

    #[error("degree bound {0} outside the supported range 3..=8")]
    DegreeOutOfRange(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("kernel of the seminorm is not a two-sided ideal: s({product}) = {value:e}")]
    KernelNotIdeal {
        /// Kernel vector `v`.
        kernel_vector: Vec<f64>,
        /// Basis index `i` of the offending product.
        basis_index: usize,
        /// `"u_i v"` or `"v u_i"`.
        product: String,
        value: f64,
    },

    #[error("powers of r are ambiguous: (rr)r - r(rr) has size {residual:e}")]
    PowerAmbiguity { residual: f64 },
    #[error("the copy of C is not nuclear")]
    NonNuclearCopy,
    #[error("scalars of the copy cannot be pulled through the polynomial: {0}")]
    NotHoistable(String),
    #[error("polynomial has degree {0}; a nonconstant polynomial is required")]
    ConstantPolynomial(usize),
    #[error("leading coefficient is not invertible (sigma_min = {sigma_min:e})")]
    LeadingNotInvertible { sigma_min: f64 },

    #[error("complex structure fails J^2 = -Id (residual {residual:e})")]
    NotComplexStructure { residual: f64 },
    #[error("operator is not linear over the copy of C (commutator residual {residual:e})")]
    NotComplexLinear { residual: f64 },
    #[error("algebra is not associative (associator residual {residual:e})")]
    NotAssociative { residual: f64 },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::AlgebraMismatch { .. } => "algebra_mismatch",
            Error::InvalidAlgebra(_) => "invalid_algebra",
            Error::UnitNotIdentity { .. } => "unit_not_identity",
            Error::MissingInvolution(_) => "missing_involution",
            Error::NotReal => "not_real",
            Error::Dimension { .. } => "dimension",
            Error::CopyNotFound { .. } => "copy_not_found",
            Error::CopyVerification { .. } => "copy_verification",
            Error::DegreeOutOfRange(_) => "degree_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Precondition(_) => "precondition",
            Error::KernelNotIdeal { .. } => "kernel_not_ideal",
            Error::PowerAmbiguity { .. } => "power_ambiguity",
            Error::NonNuclearCopy => "non_nuclear_copy",
            Error::NotHoistable(_) => "not_hoistable",
            Error::ConstantPolynomial(_) => "constant_polynomial",
            Error::LeadingNotInvertible { .. } => "leading_not_invertible",
            Error::NotComplexStructure { .. } => "not_complex_structure",
            Error::NotComplexLinear { .. } => "not_complex_linear",
            Error::NotAssociative { .. } => "not_associative",
            Error::Eigensolver(_) => "eigensolver",
            Error::WrongAlgebra(_) => "wrong_algebra",
        }
    }

    /// Usage and input problems, as opposed to domain failures.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Dimension { .. } | Error::InvalidArgument(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
