//! Finite-dimensional matrix-ordered operator spaces, numerically certified.
//!
//! The crate models concrete `*`-closed subspaces of full matrix algebras
//! together with their induced matrix norms and matrix cones, and implements
//! the calculus that connects linear maps into `M_n`, linear functionals on
//! `M_n(X)`, and block matrices in `M_m(M_n)`:
//!
//! * [`matcore`] — dense complex matrices, block elements of `M_m(M_n)`,
//!   a from-scratch Hermitian eigensolver, PSD checks, operator and trace
//!   norms, partial traces and block transposes.
//! * [`ordspace`] — concrete space models with induced cones, finite matrix
//!   gauges, the off-diagonal self-adjoint embedding, the `lambda` upper
//!   bound, and generatively described matrix convex sets.
//! * [`choiduality`] — the map/block-matrix correspondence (`theta`, Choi
//!   matrices, Kraus decompositions), the trace pairing, and the
//!   functional/map order isomorphism (`Theta`/`Upsilon`).
//! * [`hahnbanach`] — a dense simplex LP core and cutting-plane solvers for
//!   the scalar and matrix Bonsall extension problems and for matrix-convex
//!   separation, each returning an independently re-checkable certificate.
//! * [`harness`] — seeded property suites that exercise the above and emit
//!   reproducible machine-readable reports.
//! * [`canonical`] — byte-stable JSON encoding of every public artifact.
//!
//! Everything in this crate is `no_std` (with `alloc`) and deterministic:
//! all randomness flows through explicit seeds, and no operation consults
//! clocks, threads, or the environment.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod choiduality;
pub mod error;
pub mod hahnbanach;
pub mod harness;
pub mod matcore;
pub mod ordspace;
pub mod rng;

mod scalar;

pub use error::{Error, Result};
pub use matcore::{BlockElement, CMatrix, HermEig, PsdReport, C64};
pub use ordspace::{GaugeSpec, MatrixConvexModel, SpaceModel};
