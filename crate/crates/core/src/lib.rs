//! Exact certification of efficiency, approximate efficiency and Benson-type
//! proper efficiency for linear vector optimization problems
//!
//! ```text
//!     minimize f(x) = M x + q   subject to   x ∈ X
//! ```
//!
//! ordered by a polyhedral cone `K`. All arithmetic is over arbitrary-precision
//! rationals; every negative answer carries a witness that re-verifies by exact
//! arithmetic, and every LP solve carries a dual certificate.
//!
//! Modules, bottom up:
//!
//! * [`rational`]: the scalar type and dense helpers.
//! * [`lp`]: two-phase simplex with Bland's rule and certificates.
//! * [`polyhedron`]: H-polyhedra, cones, Fourier–Motzkin projection,
//!   affine images, Minkowski sums, recession and generated cones.
//! * [`vop`]: problem model and the JSON problem format.
//! * [`efficiency`]: the membership decision procedures.
//! * [`harness`]: candidate generation, classification, property suites and
//!   the built-in worked examples.
//!
//! With the default `parallel` feature, batch classification and the random
//! property suites fan out over rayon; without it they run sequentially with
//! identical results.

pub mod efficiency;
pub mod error;
pub mod harness;
pub mod lp;
pub mod par;
pub mod polyhedron;
pub mod rational;
pub mod vop;

pub use error::{Error, Result};
pub use polyhedron::{ConeWitness, GeneratedConeClosure, HPolyhedron, PolyCone, WitnessBranch};
pub use rational::Rational;
pub use vop::{LinearVop, Perturbation, PerturbationKind, QueryPoint};
