//! Classical linear codes given by parity-check maps.
//!
//! A code is the map `H: F₂ⁿ → F₂ᵐ`; its codespace is `ker H` and its
//! generator is `kernel(H)ᵀ` in the kernel normal form of [`crate::f2`].
//! This module also hosts puncture search, the canonical form and the
//! robustness decision procedure.

pub mod alist;
mod distance;
mod puncture;
mod robust;

use serde::{Deserialize, Serialize};

use crate::f2::{self, BitMatrix, F2Error};

pub use distance::{distance, DEFAULT_DISTANCE_LIMIT};
pub use puncture::{
    find_puncture, find_simultaneous_bipuncture, is_puncture, Bipuncture, Puncture, PunctureTarget,
    DEFAULT_SEARCH_CAP,
};
pub use robust::{
    canonical_form, canonical_form_with_order, is_robust, CanonicalForm, CanonicalWitness,
    RobustVerdict, RobustnessCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error(transparent)]
    Matrix(#[from] F2Error),
    #[error("column index {index} out of range for {bound} columns")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("column index {0} listed more than once")]
    DuplicateIndex(usize),
    #[error("matrices have different column counts ({left} vs {right})")]
    ColumnCountMismatch { left: usize, right: usize },
    #[error("search needs {required} candidate subsets, above the cap of {cap}")]
    SearchLimitExceeded { required: u128, cap: u64 },
    #[error("operation requires a code with k >= 1")]
    ZeroDimension,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// A classical linear code `n --H--> m`.
///
/// `H` is kept exactly as given (redundant rows included) for display and
/// export; every rank-derived quantity uses the full-rank row basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCode {
    parity: BitMatrix,
    reduced: BitMatrix,
    generator: BitMatrix,
    name: Option<String>,
}

impl ClassicalCode {
    pub fn from_parity_check(parity: BitMatrix) -> Self {
        let reduced = f2::row_reduce(&parity).basis();
        let generator = f2::kernel_basis(&parity);
        Self {
            parity,
            reduced,
            generator,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Length-`n` repetition code with the `(n-1) x n` chain of weight-two checks.
    pub fn repetition(n: usize) -> Self {
        let rows = (0..n.saturating_sub(1))
            .map(|i| f2::BitVec::from_indices(n, [i, i + 1]))
            .collect();
        Self::from_parity_check(BitMatrix::from_rows(rows, n).expect("rows of length n"))
            .with_name(format!("repetition({n})"))
    }

    /// Length-`n` cycle code: the `n x n` circulant with ones at `i` and `i+1 mod n`.
    pub fn cycle(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| f2::BitVec::from_indices(n, [i, (i + 1) % n]))
            .collect();
        Self::from_parity_check(BitMatrix::from_rows(rows, n).expect("rows of length n"))
            .with_name(format!("cycle({n})"))
    }

    /// The [7,4,3] Hamming code; column `c` of `H` is the binary expansion of `c + 1`.
    pub fn hamming_7_4() -> Self {
        let rows = (0..3)
            .map(|bit| f2::BitVec::from_bools((1..=7u32).map(|c| (c >> bit) & 1 == 1)))
            .collect();
        Self::from_parity_check(BitMatrix::from_rows(rows, 7).expect("rows of length 7"))
            .with_name("hamming(7,4)")
    }

    /// The code `m --Hᵀ--> n`. Its generator is `cokernel(H)`.
    pub fn transpose(&self) -> Self {
        let t = Self::from_parity_check(self.parity.transpose());
        match &self.name {
            Some(n) => t.with_name(format!("{n}^T")),
            None => t,
        }
    }

    /// The parity check as supplied.
    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity
    }

    /// A full-rank row basis of the parity check (its reduced row-echelon rows).
    pub fn reduced_parity_check(&self) -> &BitMatrix {
        &self.reduced
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.parity.ncols()
    }

    pub fn m(&self) -> usize {
        self.parity.nrows()
    }

    pub fn rank(&self) -> usize {
        self.reduced.nrows()
    }

    /// Dimension of the codespace, `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.generator.nrows()
    }

    /// Dimension of the cokernel, `m - rank(H)`.
    pub fn k_transpose(&self) -> usize {
        self.m() - self.rank()
    }
}
