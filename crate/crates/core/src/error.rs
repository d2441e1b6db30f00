use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator {den} vanishes mod {p}")]
    DenominatorVanishes { den: i64, p: u64 },
    #[error("exponent {exp} exceeds bound {bound}")]
    ExponentOverflow { exp: u64, bound: u32 },
    #[error("unknown module {module} for {group}")]
    UnknownModule { group: String, module: String },
    #[error("module dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("validation failed: {0}")]
    ValidationFailure(String),
    #[error("element is not a product of positive root elements")]
    NotUnipotent,
    #[error("system mismatch for {group}: {detail}")]
    SystemMismatch { group: String, detail: String },
    #[error("no solution over extensions up to degree {0}")]
    ExtensionDegreeExceeded(u32),
    #[error("characteristic {p} excluded by constraint {constraint}")]
    CharacteristicExcluded { p: u64, constraint: String },
    #[error("budget exhausted after {0} steps")]
    BudgetExceeded(u64),
    #[error("no witness exists: {0}")]
    NoWitnessExists(String),
    #[error("no diagonal rescaling: {0}")]
    RescalingUnsolvable(String),
    #[error("identity fails: {0}")]
    IdentityFails(String),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("corrupt data file: {0}")]
    DataFileCorrupt(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
