//! Central values of anticyclotomic Hecke L-functions over imaginary
//! quadratic fields of class number one, computed through theta functions of
//! genus two principally polarised abelian surfaces attached to ideals of the
//! definite quaternion algebra ramified at `|N|` and infinity.

pub mod analytic;
pub mod arith;
pub mod central;
pub mod checks;
pub mod error;
pub mod fixtures;
pub mod quadfield;
pub mod quatalg;

pub use error::{Error, Result};
