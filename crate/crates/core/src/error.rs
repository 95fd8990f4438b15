use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field of size {p}^{e} exceeds the supported maximum of {max} elements")]
    FieldTooLarge { p: u32, e: u32, max: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is not irreducible")]
    NotIrreducible,
    #[error("P must be nonzero")]
    ZeroPolynomial,
    #[error("tensor power n must be at least 1")]
    ZeroTensorPower,
    #[error("matrix size {k} is below the minimal admissible size {k_min}")]
    MatrixTooSmall { k: usize, k_min: usize },
    #[error("order at U = 0 is always 0; refusing to evaluate there")]
    ZeroPoint,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("U-degree {deg} exceeds the bound {bound}")]
    UDegreeTooLarge { deg: usize, bound: usize },
    #[error("T-degree bound deg C_j <= {n}*j fails at U^{j}")]
    DegreeBound { n: u32, j: usize },
    #[error("level {level} is above the admissible bound -(m+n)/(q-1) = -{num}/{den}")]
    LevelTooLarge { level: i64, num: u64, den: u64 },
    #[error("degree {m} is not admissible for iota (need m >= deg P and m = -n mod q-1)")]
    InadmissibleIota { m: usize },
    #[error("local factor at {prime} is not Frobenius-invariant")]
    FrobeniusInvariance { prime: String },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration of {size} polynomials exceeds the cap of {cap}")]
    ScanCap { size: u128, cap: u64 },
    #[error("fast rank {fast} disagrees with full rank {full} for P = {poly}")]
    AuditMismatch { poly: String, fast: u32, full: u32 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
