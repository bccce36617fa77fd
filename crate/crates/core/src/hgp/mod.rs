//! Hypergraph product codes.
//!
//! For classical codes `A: n_a → m_a` and `B: n_b → m_b` the product has
//! qubits `n_a⊗m_b ⊕ m_a⊗n_b` with
//!
//! ```text
//! H_X = ( ∂_a ⊗ I_{m_b} | I_{m_a} ⊗ ∂_b )        (m_a·m_b rows)
//! H_Z = ( I_{n_a} ⊗ ∂_bᵀ | ∂_aᵀ ⊗ I_{n_b} )       (n_a·n_b rows)
//! ```
//!
//! Qubits are flattened vertical block first, both blocks row-major; see
//! [`Grid`].

mod logical;
mod taut;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::{alist, ClassicalCode};
use crate::css::CssCode;
use crate::f2::BitMatrix;

pub use logical::{logical_basis, BasisPunctures, LogicalBasis};
pub use taut::{
    decompose_taut, taut_operators, TautEnumeration, TautKind, TautOperator, DEFAULT_TAUT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HgpError {
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("product is not restricted to the vertical sector ({0})")]
    WrongSector(Sector),
    #[error("vector has length {found}, code has {expected} qubits")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vector touches horizontal qubit {0}")]
    HorizontalSupport(usize),
    #[error("vector is not a {0}-logical")]
    NotALogical(crate::css::PauliKind),
    #[error("no {size}-puncture of {what}")]
    PunctureMissing { what: &'static str, size: usize },
    #[error("invalid code description: {0}")]
    Description(String),
}

/// Position of a qubit in the product grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridQubit {
    /// `(i, j) ∈ [n_a] x [m_b]`
    Vertical { i: usize, j: usize },
    /// `(p, q) ∈ [m_a] x [n_b]`
    Horizontal { p: usize, q: usize },
}

/// The qubit index map of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n_a: usize,
    pub m_a: usize,
    pub n_b: usize,
    pub m_b: usize,
}

impl Grid {
    pub fn new(n_a: usize, m_a: usize, n_b: usize, m_b: usize) -> Self {
        Self { n_a, m_a, n_b, m_b }
    }

    pub fn vertical_len(&self) -> usize {
        self.n_a * self.m_b
    }

    pub fn horizontal_len(&self) -> usize {
        self.m_a * self.n_b
    }

    pub fn n_qubits(&self) -> usize {
        self.vertical_len() + self.horizontal_len()
    }

    pub fn vertical(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n_a && j < self.m_b);
        i * self.m_b + j
    }

    pub fn horizontal(&self, p: usize, q: usize) -> usize {
        debug_assert!(p < self.m_a && q < self.n_b);
        self.vertical_len() + p * self.n_b + q
    }

    pub fn is_vertical(&self, index: usize) -> bool {
        index < self.vertical_len()
    }

    pub fn locate(&self, index: usize) -> Option<GridQubit> {
        if index < self.vertical_len() {
            Some(GridQubit::Vertical {
                i: index / self.m_b,
                j: index % self.m_b,
            })
        } else if index < self.n_qubits() {
            let h = index - self.vertical_len();
            Some(GridQubit::Horizontal {
                p: h / self.n_b,
                q: h % self.n_b,
            })
        } else {
            None
        }
    }

    /// Vertical qubits `rows x cols`.
    pub fn vertical_rect(&self, rows: &[usize], cols: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.vertical(i, j)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Horizontal qubits `rows x cols`.
    pub fn horizontal_rect(&self, rows: &[usize], cols: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = rows
            .iter()
            .flat_map(|&p| cols.iter().map(move |&q| self.horizontal(p, q)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Where the logical qubits of a product live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    VerticalRestricted,
    HorizontalRestricted,
    BothSectors,
    Trivial,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::VerticalRestricted => "vertical_restricted",
            Sector::HorizontalRestricted => "horizontal_restricted",
            Sector::BothSectors => "both_sectors",
            Sector::Trivial => "trivial",
        })
    }
}

pub const FLATTENING: &str = "vertical-first-row-major";

/// Portable description of a product: both factors as alist text plus the
/// grid dimensions and flattening order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HgpDescription {
    pub n_a: usize,
    pub m_a: usize,
    pub n_b: usize,
    pub m_b: usize,
    #[serde(rename = "H_a")]
    pub h_a: String,
    #[serde(rename = "H_b")]
    pub h_b: String,
    pub flattening: String,
}

#[derive(Clone, Debug)]
pub struct HgpCode {
    a: ClassicalCode,
    b: ClassicalCode,
    css: CssCode,
    grid: Grid,
    k: usize,
}

/// Builds the hypergraph product of `a` and `b`.
pub fn product(a: &ClassicalCode, b: &ClassicalCode) -> Result<HgpCode, HgpError> {
    let (da, db) = (a.parity_check(), b.parity_check());
    let grid = Grid::new(a.n(), a.m(), b.n(), b.m());
    let stack = |l: BitMatrix, r: BitMatrix| {
        l.hstack(&r)
            .map_err(|e| HgpError::Inconsistent(format!("block shapes: {e}")))
    };
    let hx = stack(
        da.kron(&BitMatrix::identity(grid.m_b)),
        BitMatrix::identity(grid.m_a).kron(db),
    )?;
    let hz = stack(
        BitMatrix::identity(grid.n_a).kron(&db.transpose()),
        da.transpose().kron(&BitMatrix::identity(grid.n_b)),
    )?;
    debug_assert_eq!(hx.ncols(), grid.n_qubits());
    let css = CssCode::new(hx, hz).map_err(|e| HgpError::Inconsistent(e.to_string()))?;
    let expected = a.k() * b.k_transpose() + a.k_transpose() * b.k();
    if css.k() != expected {
        return Err(HgpError::Inconsistent(format!(
            "rank count gives k = {}, factor dimensions give {expected}",
            css.k()
        )));
    }
    Ok(HgpCode {
        a: a.clone(),
        b: b.clone(),
        k: expected,
        css,
        grid,
    })
}

impl HgpCode {
    pub fn a(&self) -> &ClassicalCode {
        &self.a
    }

    pub fn b(&self) -> &ClassicalCode {
        &self.b
    }

    pub fn css(&self) -> &CssCode {
        &self.css
    }

    pub fn hx(&self) -> &BitMatrix {
        self.css.hx()
    }

    pub fn hz(&self) -> &BitMatrix {
        self.css.hz()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_qubits(&self) -> usize {
        self.grid.n_qubits()
    }

    /// Number of logical qubits, `k_a·k_bᵀ + k_aᵀ·k_b` (checked against ranks at construction).
    pub fn logical_qubit_count(&self) -> usize {
        self.k
    }

    /// Logical qubits carried by the vertical block, `k_a·k_bᵀ`.
    pub fn vertical_logicals(&self) -> usize {
        self.a.k() * self.b.k_transpose()
    }

    /// Logical qubits carried by the horizontal block, `k_aᵀ·k_b`.
    pub fn horizontal_logicals(&self) -> usize {
        self.a.k_transpose() * self.b.k()
    }

    pub fn sector(&self) -> Sector {
        match (self.vertical_logicals() > 0, self.horizontal_logicals() > 0) {
            (true, false) => Sector::VerticalRestricted,
            (false, true) => Sector::HorizontalRestricted,
            (true, true) => Sector::BothSectors,
            (false, false) => Sector::Trivial,
        }
    }

    pub fn description(&self) -> HgpDescription {
        HgpDescription {
            n_a: self.grid.n_a,
            m_a: self.grid.m_a,
            n_b: self.grid.n_b,
            m_b: self.grid.m_b,
            h_a: alist::write(self.a.parity_check()),
            h_b: alist::write(self.b.parity_check()),
            flattening: FLATTENING.to_string(),
        }
    }
}

impl HgpDescription {
    /// Parses both factors back and checks the recorded dimensions.
    pub fn factors(&self) -> Result<(ClassicalCode, ClassicalCode), HgpError> {
        if self.flattening != FLATTENING {
            return Err(HgpError::Description(format!(
                "unsupported flattening {:?}",
                self.flattening
            )));
        }
        let parse = |text: &str, which: &str| {
            alist::parse(text)
                .map(ClassicalCode::from_parity_check)
                .map_err(|e| HgpError::Description(format!("{which}: {e}")))
        };
        let a = parse(&self.h_a, "H_a")?;
        let b = parse(&self.h_b, "H_b")?;
        if (a.n(), a.m(), b.n(), b.m()) != (self.n_a, self.m_a, self.n_b, self.m_b) {
            return Err(HgpError::Description(
                "dimensions disagree with the embedded matrices".into(),
            ));
        }
        Ok((a, b))
    }

    pub fn build(&self) -> Result<HgpCode, HgpError> {
        let (a, b) = self.factors()?;
        product(&a, &b)
    }
}
