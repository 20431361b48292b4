//! Generating matrices for the Sobol', Niederreiter, irreducible Sobol' (IS)
//! and irreducible Sobol'-Niederreiter (ISN) constructions.

mod direction;
mod laurent;
mod matrix;
mod sequence;

pub use direction::DirectionMatrix;
pub use laurent::{laurent_coeffs, niederreiter_matrix};
pub use matrix::{
    default_rows, is_matrix, sobol_matrix, Construction, GeneratingMatrix, MatrixRecord,
};
pub use sequence::{build_sequence, common_field, isn_matrix, DirectionSource, SequenceSpec};

pub(crate) use matrix::build_is;
