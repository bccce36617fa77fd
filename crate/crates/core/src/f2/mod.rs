//! Exact linear algebra over the two-element field.
//!
//! Everything downstream (codes, products, certificates) is expressed with
//! [`BitMatrix`] and [`BitVec`]. All operations are pure and deterministic:
//! pivots are always taken at the lowest available column and row.

mod bitvec;
mod matrix;
mod reduce;

pub use bitvec::BitVec;
pub use matrix::BitMatrix;
pub use reduce::{
    cokernel, kernel, kernel_basis, rank, row_reduce, rowspace_member, RowReducedForm, RowSpace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum F2Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
