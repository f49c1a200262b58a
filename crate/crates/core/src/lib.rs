//! Secrecy performance of a RIS-aided downlink with Poisson-distributed
//! aerial eavesdroppers.
//!
//! The base station reaches the legitimate user through a reconfigurable
//! intelligent surface while randomly placed aerial eavesdroppers overhear
//! both the direct BS emission and the RIS reflection. The crate provides
//! two independent routes to the same quantities:
//!
//! * [`analysis`] — closed-form / approximate SNR distributions and the
//!   ergodic secrecy capacity (moment-matched Gamma law for the legitimate
//!   link, point-process void functional with Marcum-Q conditionals for the
//!   eavesdroppers, Gauss-Chebyshev capacity quadrature), in single-antenna
//!   (matched phases) and multi-antenna (random phases + MRT) modes;
//! * [`montecarlo`] — a seeded, deterministic simulation of the full system
//!   built on [`geometry`] (hemisphere point process, steering vectors) and
//!   [`channel`] (fading draws, beamforming, per-trial SNRs).
//!
//! [`specfun`] supplies the self-contained special-function kernel
//! (gamma family, first-order Marcum-Q, Gauss-Chebyshev nodes) both routes
//! share.

pub mod analysis;
pub mod channel;
pub mod geometry;
pub mod montecarlo;
pub mod specfun;

mod quad;

pub use analysis::{GammaApprox, MomentSet, SnrCdf};
pub use geometry::{SphericalPoint, SystemParams};
pub use montecarlo::{EmpiricalCdf, Mode, TrialRecord};
pub use specfun::Truncation;
