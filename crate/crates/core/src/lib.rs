//! # fluctum-core
//!
//! Quantum stochastic maps on finite-dimensional systems and exact
//! verification of the generalized Jarzynski equality with its
//! nonunitality correction term.
//!
//! The crate is organized around the pipeline it verifies:
//!
//! - [`linalg`]: dense complex matrices, a deterministic Jacobi
//!   eigensolver, Schatten norms, tensor products and partial traces.
//! - [`bloch`]: SU(N) generators and Bloch vectors of traceless Hermitian
//!   operators.
//! - [`channel`]: Kraus-form channels, Choi matrices, map norms, seeded
//!   random channel ensembles.
//! - [`nonunitality`]: the operator G = Phi(rho_*) - rho_* and every bound
//!   on its size.
//! - [`thermal`]: Gibbs states, partition functions, free energies.
//! - [`fluctuation`]: two-point-measurement statistics and the fluctuation
//!   identities themselves.
//! - [`zoo`]: the damping-channel family and closed-form correction terms
//!   used for cross-validation.
//! - [`io`]: JSON wire formats for matrices and channels.
//!
//! Everything is plain `f64`/`Complex64` arithmetic in natural units; all
//! values are immutable after construction and safe to share across
//! threads.

#![forbid(unsafe_code)]

pub mod bloch;
pub mod channel;
pub mod error;
pub mod fluctuation;
pub mod io;
pub mod linalg;
pub mod nonunitality;
pub mod rng;
pub mod thermal;
pub mod tol;
pub mod zoo;

pub use channel::{random_channel, ChoiMatrix, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem};
pub use tol::Tolerances;
