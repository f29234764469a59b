//! Error–disturbance analysis for sequential projective measurements.
//!
//! Given a state and the eigenbases of two observables A and B, this crate
//! answers three questions about a real-life projective measurement of A:
//!
//! 1. **Can it be perfect?** A measurement basis with zero error on the A
//!    statistics and zero disturbance to the B statistics exists exactly when
//!    the ideal A distribution majorizes the ideal B distribution
//!    ([`synthesis::zezd_basis`] constructs it, with 2^(d−1) branch choices).
//! 2. **If not, how bad must it be?** The minimum of error + disturbance
//!    (relative entropies) is bounded below by a Jensen–Shannon divergence of
//!    coarse-grained distributions, minimized over the coarsest partitions
//!    under which A majorizes B by sections ([`bound::tradeoff_bound`]).
//! 3. **Is the bound honest?** A grid/descent oracle minimizes error +
//!    disturbance over candidate bases numerically and never beats the bound
//!    ([`oracle::s2_min_numeric`], [`oracle::sweep_qubit`]).
//!
//! The `backaction` binary exposes the same operations on JSON problem files.

pub mod bound;
pub mod divergence;
pub mod error;
pub mod majorization;
pub mod numerics;
pub mod oracle;
pub mod problem;
pub mod quantum;
pub mod report;
pub mod synthesis;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{ComplexMatrix, Seed};
pub use quantum::{Basis, ProbDist, QuantumState, Scenario};
