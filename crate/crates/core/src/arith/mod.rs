//! Exact arithmetic over Q.

pub mod factor;
pub mod rational;
pub mod symbols;

pub use factor::{factorizer, Factorizer};
pub use rational::ExactRational;
pub use symbols::{
    class_solvable, hilbert_class, hilbert_global_solvable, hilbert_local,
    hilbert_local_bruteforce, hilbert_ramified_set, legendre, place_splitting, ramified_places,
    splits_over_quadratic, PlaceQ, Splitting, SquareClassQ,
};
