//! Exact integer and rational linear algebra.

mod inertia;
mod matrix;
mod mod2;
mod smith;

pub use inertia::{
    clear_denominators, inertia, positive_vector, rational_inverse, rational_quadratic_value,
    rational_rank, Inertia,
};
pub use matrix::{
    dot, int_vector, vec_add, vec_content, vec_is_zero, vec_scale, vec_sub, IntMatrix, IntVector,
};
pub use mod2::{mod2_rank, F2Matrix, F2Span};
pub use smith::{
    hermite_normal_form, integer_kernel, row_space_basis, smith_decomposition, smith_normal_form,
    solve_integer, unimodular_completion, SmithForm,
};
pub(crate) use smith::solve_with;
