//! Capacity upper bounds for the amplitude-constrained scalar AWGN channel.
//!
//! The channel is `Y = X + N` with `N ~ N(0, 1)` and a hard amplitude
//! constraint `|X| <= A`; peak power is `P = A^2`. The crate evaluates the
//! classical analytic upper bounds on the capacity (Shannon's average-power
//! bound, McKellips, Thangaraj) together with a refined bound obtained by
//! giving the Thangaraj test density Gaussian tails of optimized variance,
//! and cross-validates all of them against a certified Blahut-Arimoto
//! capacity oracle on a fine input grid.
//!
//! Modules:
//! - [`specfun`]: normal density/tail, the tail-moment function, entropy.
//! - [`bounds`]: the closed-form bounds and their regime switching.
//! - [`testdensity`]: the test density, exact KL, quadrature cross-check,
//!   and a direct numerical min-max bound.
//! - [`oracle`]: discretized-channel capacity with two-sided certificates.
//! - [`sweep`]: dB sweeps, CSV output, and the gap report.
//! - [`verify`]: grid property suites behind `ampcap verify`.
//!
//! All internal entropic quantities are in nats; bits are a presentation
//! conversion at output boundaries.

pub mod bounds;
mod error;
pub mod optim;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod sweep;
pub mod testdensity;
pub mod verify;

pub use bounds::{theorem_bound, BoundPoint, PowerLevel, Regime};
pub use error::{Error, Result};
pub use oracle::{blahut_arimoto, capacity, eb_n0_db, CapacityEstimate, ChannelGrid};
pub use sweep::{gap_report, run_sweep, GapReport, GapReportConfig, SweepConfig, Units};
pub use testdensity::{minmax_bound, minmax_search, MinmaxBound, TestDensity};
pub use verify::VerifyReport;
