//! Counting rational points of bounded Igusa height on the genus-zero
//! Shimura curves of quaternion discriminant 6, 10 and 22 and on their
//! Atkin-Lehner quotients.
//!
//! The pieces, bottom up:
//!
//! - [`arith`]: exact rationals, factorization, Legendre and Hilbert symbols,
//!   square classes, splitting in quadratic fields.
//! - [`heights`]: normalization of points of weighted projective space and
//!   the height `Ht_w`.
//! - [`poly`] and [`sqclass`]: integer polynomials in `j` and square classes
//!   of rational functions of `j`.
//! - [`igusa`]: the Igusa maps `j -> P(1,2,3,5)`, special points and the
//!   Hauptmodul change of variable.
//! - [`mestre`]: the fifteen `(D, W)` cases, their obstruction symbols on the
//!   `j`-line, fiber types and `Delta`.
//! - [`counting`]: enumeration of `P^1(Q)` and count series.
//! - [`asymptotics`]: product-lemma combination and exponent fits.
//! - [`cli`]: the batch front end behind the `shimcount` binary.

pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod counting;
pub mod error;
pub mod heights;
pub mod igusa;
pub mod mestre;
pub mod poly;
pub mod sqclass;

pub use error::{Error, Result};
