use serde::{Deserialize, Serialize};

use super::{HgpCode, HgpError};
use crate::codes::{find_puncture, PunctureTarget};
use crate::f2::{self, BitMatrix};

/// Puncture sets used to build a logical basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisPunctures {
    /// `k_bᵀ`-puncture of `∂_bᵀ` (columns in `[m_b]`).
    pub z_vertical: Vec<usize>,
    /// `k_aᵀ`-puncture of `∂_aᵀ` (columns in `[m_a]`).
    pub z_horizontal: Vec<usize>,
    /// `k_a`-puncture of `∂_a` (columns in `[n_a]`).
    pub x_vertical: Vec<usize>,
    /// `k_b`-puncture of `∂_b` (columns in `[n_b]`).
    pub x_horizontal: Vec<usize>,
}

/// `k` Z-logicals and `k` X-logicals, rows of length `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalBasis {
    pub lz: BitMatrix,
    pub lx: BitMatrix,
    pub punctures: BasisPunctures,
}

fn puncture(m: &BitMatrix, size: usize, what: &'static str) -> Result<Vec<usize>, HgpError> {
    find_puncture(m, size, PunctureTarget::ParityCheck)
        .map(|p| p.indices)
        .ok_or(HgpError::PunctureMissing { what, size })
}

fn selection(n: usize, indices: &[usize]) -> BitMatrix {
    BitMatrix::selection(n, indices).expect("puncture indices are in range")
}

fn place(code: &HgpCode, vertical: BitMatrix, horizontal: BitMatrix) -> BitMatrix {
    let g = code.grid();
    let left = vertical
        .hstack(&BitMatrix::zeros(vertical.nrows(), g.horizontal_len()))
        .expect("row counts agree");
    let right = BitMatrix::zeros(horizontal.nrows(), g.vertical_len())
        .hstack(&horizontal)
        .expect("row counts agree");
    left.vstack(&right).expect("both have N columns")
}

/// Builds the block-product logical basis from punctures of the factors.
///
/// Z-logicals are `ker(∂_a) ⊗ γ_Zv` on the vertical block and
/// `γ_Zh ⊗ ker(∂_b)` on the horizontal block; X-logicals are
/// `γ_Xv ⊗ coker(∂_b)` and `coker(∂_a) ⊗ γ_Xh`. Each puncture is promoted to
/// its row-selection matrix. Completeness and pairing are checked by rank
/// before returning.
pub fn logical_basis(code: &HgpCode) -> Result<LogicalBasis, HgpError> {
    let (a, b) = (code.a(), code.b());
    let (da, db) = (a.parity_check(), b.parity_check());
    let punctures = BasisPunctures {
        z_vertical: puncture(&db.transpose(), b.k_transpose(), "∂_bᵀ")?,
        z_horizontal: puncture(&da.transpose(), a.k_transpose(), "∂_aᵀ")?,
        x_vertical: puncture(da, a.k(), "∂_a")?,
        x_horizontal: puncture(db, b.k(), "∂_b")?,
    };
    let (ga, gb) = (a.generator(), b.generator());
    let (ca, cb) = (f2::cokernel(da), f2::cokernel(db));
    let g = code.grid();

    let lz = place(
        code,
        ga.kron(&selection(g.m_b, &punctures.z_vertical)),
        selection(g.m_a, &punctures.z_horizontal).kron(gb),
    );
    let lx = place(
        code,
        selection(g.n_a, &punctures.x_vertical).kron(&cb),
        ca.kron(&selection(g.n_b, &punctures.x_horizontal)),
    );
    let basis = LogicalBasis { lz, lx, punctures };
    basis.check(code).map_err(HgpError::Inconsistent)?;
    Ok(basis)
}

impl LogicalBasis {
    /// Checks commutation, completeness modulo stabilizers and pairing rank.
    pub fn check(&self, code: &HgpCode) -> Result<(), String> {
        let k = code.logical_qubit_count();
        let n = code.n_qubits();
        if self.lz.shape() != (k, n) || self.lx.shape() != (k, n) {
            return Err(format!(
                "basis shapes {:?}, {:?}, expected ({k}, {n})",
                self.lz.shape(),
                self.lx.shape()
            ));
        }
        let zero = |m: BitMatrix| m.is_zero();
        if !zero(
            code.hx()
                .mul(&self.lz.transpose())
                .map_err(|e| e.to_string())?,
        ) {
            return Err("a Z-logical violates an X-check".into());
        }
        if !zero(
            code.hz()
                .mul(&self.lx.transpose())
                .map_err(|e| e.to_string())?,
        ) {
            return Err("an X-logical violates a Z-check".into());
        }
        let independent = |l: &BitMatrix, h: &BitMatrix| {
            f2::rank(&l.vstack(h).expect("same width")) == f2::rank(h) + k
        };
        if !independent(&self.lz, code.hz()) {
            return Err("Z-logicals are not independent modulo stabilizers".into());
        }
        if !independent(&self.lx, code.hx()) {
            return Err("X-logicals are not independent modulo stabilizers".into());
        }
        let pairing = self
            .lx
            .mul(&self.lz.transpose())
            .map_err(|e| e.to_string())?;
        if f2::rank(&pairing) != k {
            return Err("pairing matrix Lx·Lzᵀ is singular".into());
        }
        Ok(())
    }
}
