//! Hyperbolicity over function fields of quadrics, and supporting
//! computations over rational function fields and quadratic extensions.

mod decision;
mod residue;

pub use decision::{
    check_specialization_necessity, hyperbolic_over_ff, replay, witt_index_over_quad_ext, Certificate, Decision,
    HypConfig, Obstruction, SpecializationReport, Verdict,
};
pub use residue::{
    factor_over_prime_field, first_residue, hyperbolic_over_rational_function_field, rational_linear_factors,
    residue_primes, second_residue, ResidueForm,
};
