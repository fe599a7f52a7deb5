//! Exact finite models of matrix-factorisation pushforwards.
//!
//! Polynomials over Q (or F_p), Gröbner bases and Milnor algebras, the
//! Z/2-graded calculus of matrix factorisations, t-adic connections and the
//! de Rham contraction, the Atiyah-class idempotent, Grothendieck residues,
//! Chern characters and convolution of kernels.

pub mod chern;
pub mod connection;
pub mod convolution;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod mf;
pub mod pmat;
pub mod perturb;
pub mod poly;
pub mod pushforward;
pub mod residue;
pub mod suites;
pub mod testkit;

pub use error::{Error, Result};
pub use linalg::{Field, QMat};
pub use poly::{parse_polynomial, q, qf, MonomialOrder, Poly, Ring, RingRef, Q};
