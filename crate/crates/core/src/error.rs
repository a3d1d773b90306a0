use thiserror::Error;

/// Errors produced by the bound, test-density and oracle computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("peak power must be positive and finite, got {0}")]
    InvalidPower(f64),

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("derivative order must be in 1..=4, got {0}")]
    InvalidDerivativeOrder(u32),

    #[error("invalid test density: {0}")]
    InvalidTestDensity(String),

    #[error("input x = {x} lies outside the support [-{a}, {a}]")]
    OutsideSupport { x: f64, a: f64 },

    #[error("quadrature did not reach tolerance {tol:e}: estimated error {estimate:e}")]
    QuadratureFailure { tol: f64, estimate: f64 },

    #[error("optimizer did not converge within the evaluation budget")]
    OptimizationFailure,

    #[error("degenerate tail variance {sigma2} at peak power {p}")]
    DegenerateTailVariance { sigma2: f64, p: f64 },

    #[error("invalid channel grid: {0}")]
    InvalidGrid(String),

    #[error("numerical degeneracy in the capacity iteration: {0}")]
    NumericalDegeneracy(String),

    #[error("oracle did not converge at P = {p_linear} (gap {gap:e} > tol {tol:e})")]
    OracleNotConverged { p_linear: f64, gap: f64, tol: f64 },

    #[error("energy per bit requires positive capacity, got {0} bits")]
    InvalidCapacityBits(f64),

    #[error("invalid sweep grid: {0}")]
    InvalidSweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
