//! The definite quaternion algebra `(-1, N)` over the rationals: elements,
//! lattices, orders, ideal classes and the Siegel points of ideals.

mod ideals;
mod lattice;
mod order;
mod quat;
mod siegel;

pub use ideals::{brandt_matrix, class_set, ideal_equiv, ideal_inverse, orders_conjugate, type_partition, ClassSet};
pub use lattice::QuatLattice;
pub use order::{
    bilateral_prime, embedding_count, is_maximal_ideal_pair, left_order, right_order, standard_maximal_order,
    unit_count,
};
pub use quat::Quat;
pub use siegel::{embedding_element, siegel_ideal, siegel_point, solve_embedding, SiegelIdeal, SiegelPoint};
