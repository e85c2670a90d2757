//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid truncation window: {0}")]
    InvalidTruncation(String),

    #[error("coherent-state tail beyond n_max carries weight {weight:.3e} > leak_tol {leak_tol:.3e}")]
    TailTooHeavy { weight: f64, leak_tol: f64 },

    #[error("kinetic energy must be positive, got {0} eV")]
    NonPositiveEnergy(f64),

    #[error("invalid field profile: {0}")]
    InvalidProfile(String),

    #[error("profile undersampled: h = {h:.6e} m exceeds the Nyquist bound {bound:.6e} m")]
    Undersampled { h: f64, bound: f64 },

    #[error("field profile must hold at least 3 samples")]
    EmptyProfile,

    #[error("field profiles are sampled on different z grids")]
    GridMismatch,

    #[error("series hit the index cap {cap} before meeting the term tolerance")]
    SeriesNotConverged { cap: usize },

    #[error("series cancellation leaves fewer than {digits_left:.1} reliable digits; parameters outside the supported regime")]
    CancellationLoss { digits_left: f64 },

    #[error("final-state index p = {p} lies below the -n = -{n} floor")]
    IndexDomain { p: i64, n: u32 },

    #[error("electron window too narrow: span {k_span} < 2*(n_max + 2) = {required}")]
    WindowTooNarrow { k_span: i64, required: i64 },

    #[error("boundary leakage {leakage:.3e} exceeds leak_tol {leak_tol:.3e}; widen the window")]
    LeakageExceeded { leakage: f64, leak_tol: f64 },

    #[error("state norm**2 = {norm_sqr} is not 1 within tolerance")]
    NotNormalized { norm_sqr: f64 },

    #[error("operation requires a {expected}-mode state, got {got} modes")]
    WrongModeCount { expected: u8, got: u8 },

    #[error("index (k = {k}, n = {n}) lies outside the truncation window")]
    IndexOutsideWindow { k: i64, n: i64 },

    #[error("density matrix eigenvalue {0:.3e} is below the physical floor")]
    NonPhysicalState(f64),
}
