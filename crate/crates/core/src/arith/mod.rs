//! Exact integer and rational substrate: residue symbols, Hermite normal
//! forms and positive-definite lattice point enumeration.

mod enumerate;
mod hnf;
mod symbols;

pub use enumerate::{short_vectors, GramMatrix, ShortVector};
pub use hnf::{hnf, hnf_basis, Hnf, IntMatrix};
pub use symbols::{gcd, is_prime, is_square, kronecker, primes_up_to};
