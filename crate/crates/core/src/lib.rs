//! Nikiforov-Uvarov solver for (1+1)-dimensional non-Hermitian Dirac
//! Hamiltonians with a position-dependent Fermi velocity.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: complex polynomials, rational functions and the
//!   perfect-square condition in the NU constant `k`.
//! * [`specfun`]: associated Laguerre polynomials with complex upper index.
//! * [`nu`]: the NU pipeline (`pi`, `tau`, `lambda`, weights, Rodrigues
//!   solutions) and energy quantization as a root-finding problem.
//! * [`dirac`]: Dirac models, the decoupled second-order equation, PT checks
//!   and spinor reconstruction.
//! * [`models`]: the linear-LFV model families, registered by name.
//! * [`oracle`]: an independent discretized eigenvalue solver with
//!   interchangeable schemes.

pub mod algebra;
pub mod dirac;
pub mod error;
pub mod models;
pub mod nu;
pub mod oracle;
pub mod specfun;

pub use algebra::{Complex, Poly, Rational};
pub use error::{Error, Result};
