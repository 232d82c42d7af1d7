use thiserror::Error;

/// Errors raised across the simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid [{x_min}, {x_max}] cannot hold the +/-7 sigma window [{lo}, {hi}]")]
    GridTooNarrow { x_min: f64, x_max: f64, lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("wave function is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("banded LU factorization hit a near-zero pivot at row {row}")]
    SingularFactorization { row: usize },

    #[error("wave function grid does not match the system grid")]
    GridMismatch,

    #[error("regrid would discard {discarded:e} probability (budget {budget:e})")]
    TailTruncation { discarded: f64, budget: f64 },

    #[error("LAB product state is entangled in COM coordinates: m_A sigma_A^2 and m_B sigma_B^2 differ by {rel:e} relative")]
    NotSeparable { rel: f64 },

    #[error("two-body window clips {lost:e} probability (budget {budget:e})")]
    SupportClipped { lost: f64, budget: f64 },

    #[error("Casimir proximity regime requires L > 2 R0 (L = {l}, R0 = {r0})")]
    ProximityViolated { l: f64, r0: f64 },

    #[error("effective trap is inverted: interaction omega {omega} >= trap omega0 {omega0}")]
    TrapUnstable { omega: f64, omega0: f64 },

    #[error("covariance matrix is not a physical two-mode state: {0}")]
    NonPhysical(String),

    #[error("Schmidt rank exhausted before the norm budget was met (captured {captured})")]
    RankExhausted { captured: f64 },

    #[error("mean momentum crossed the witness threshold at sample {index}")]
    ZeroMomentumCrossing { index: usize },

    #[error("root bracketing failed for the classical trajectory at t = {t}")]
    RootBracketFailure { t: f64 },

    #[error("projectile energy {e0} is not below the barrier top {v_l}")]
    AboveBarrier { e0: f64, v_l: f64 },

    #[error("flux criterion unmet within the step budget ({steps} steps)")]
    NotConverged { steps: usize },

    #[error("covariance matrix is singular")]
    SingularCovariance,

    #[error("{0}")]
    DomainError(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
