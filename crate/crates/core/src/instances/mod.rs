//! Seeded instance families.

pub mod affine;
pub mod ncvi1;
pub mod ncvi2;

use nalgebra::DMatrix;

use crate::rng::Stream;

pub use affine::{gen_monotone_affine, AffineKind};
pub use ncvi1::{gen_ncvi1, ncvi1_from_matrices};
pub use ncvi2::{compute_sharp_point, gen_ncvi2, gen_ncvi2_with_rows, ncvi2_from_matrix};

/// Uniform pairs used when a generator estimates `L`.
pub const LIPSCHITZ_SAMPLES: usize = 256;

/// Standard normal matrix, filled row by row.
pub(crate) fn normal_matrix(s: &mut Stream, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(s.normal());
    }
    DMatrix::from_row_slice(rows, cols, &data)
}

#[cfg(test)]
mod tests;
