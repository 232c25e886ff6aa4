//! Multiprecision evaluation of eta, theta and Eisenstein series, the
//! normalised theta quotients and two independent routes to the central value.

mod eisenstein;
mod eta;
mod lvalue;
mod prec;
mod theta;

pub use eisenstein::{dirichlet_l1, eisenstein_value, DirichletL1};
pub use eta::eta;
pub use lvalue::{
    buhler_gross_sign, l_value_formula, l_value_oracle, n_value, n_values, period, root_number_numeric, theta_action_check,
    theta_action_residual, theta_decomposition_residual, NValue,
};
pub use prec::{pi, zpoint_value, PrecComplex, Precision};
pub use theta::{theta_form, theta_gram};
