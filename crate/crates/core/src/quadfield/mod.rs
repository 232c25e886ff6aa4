//! Imaginary quadratic side: binary forms, class numbers, Hurwitz class
//! numbers and the quadratic Hecke character data.

mod forms;
mod hecke;
mod hurwitz;

pub use forms::{class_number, reduce_form, reduced_forms, unit_factor, QuadForm, Transform};
pub use hecke::{
    admissible_n, canonical_ideal_above, principal_primes, split_prime_norms, HeckeCharCtx, QuadElem,
    QuadIdeal, ZPoint,
};
pub use hurwitz::{fundamental_part, hurwitz, hurwitz_mod};

/// The imaginary quadratic fields of class number one with `|N| = 3 mod 4` and `|N| > 3`.
pub const CLASS_NUMBER_ONE: [i64; 6] = [-7, -11, -19, -43, -67, -163];
