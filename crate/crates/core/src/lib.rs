//! Exact and numerical machinery for Humbert surfaces in the toroidal
//! compactification of the moduli space of principally polarized abelian
//! surfaces.
//!
//! The crate is organized along the objects it computes with:
//!
//! * [`siegel`]: discriminant vectors, period matrices and Humbert membership.
//! * [`corank1`]: the corank-1 partial quotient, its boundary limits and the
//!   torsion-class orbit structure of the stratum `K⁰(1)[m]`.
//! * [`corank2`]: toric charts of the corank-2 partial quotient, limits to the
//!   peripheral line and the exact count of its intersection with `C_m`.
//! * [`mumford`]: the period group of Mumford's construction acting by Laurent
//!   monomials, ideal invariance on the family loci and degenerate fibers.
//! * [`families`]: the explicit families of non-simple surfaces and the
//!   exponent check of their embedded elliptic curves.
//! * [`verify`]: batch checks used by the command-line `verify-all`.

pub mod arith;
pub mod corank1;
pub mod corank2;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod lattice;
pub mod mumford;
pub mod siegel;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
