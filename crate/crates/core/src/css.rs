//! Region analysis for CSS codes.
//!
//! A region is correctable when it supports no nontrivial logical operator.
//! For a CSS code it suffices to look at pure X-type and pure Z-type
//! operators separately, and in the additive picture "trivial" means "in the
//! stabilizer row space". Every question here is answered by exact linear
//! algebra on the columns inside the region.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::f2::{self, BitMatrix, BitVec, RowSpace};
use crate::hgp::{Grid, GridQubit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CssError {
    #[error("H_X has {hx} columns but H_Z has {hz}")]
    ColumnMismatch { hx: usize, hz: usize },
    #[error("H_X·H_Zᵀ is nonzero")]
    NotOrthogonal,
    #[error("qubit {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} lies in the horizontal block")]
    HorizontalQubit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliKind::X => "X",
            PauliKind::Z => "Z",
        })
    }
}

/// A CSS code `(H_X, H_Z)` with `H_X·H_Zᵀ = 0`.
#[derive(Clone, Debug)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
    x_stabilizers: RowSpace,
    z_stabilizers: RowSpace,
}

impl CssCode {
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self, CssError> {
        if hx.ncols() != hz.ncols() {
            return Err(CssError::ColumnMismatch {
                hx: hx.ncols(),
                hz: hz.ncols(),
            });
        }
        let product = hx
            .mul(&hz.transpose())
            .expect("shapes agree after column check");
        if !product.is_zero() {
            return Err(CssError::NotOrthogonal);
        }
        Ok(Self {
            x_stabilizers: RowSpace::new(&hx),
            z_stabilizers: RowSpace::new(&hz),
            hx,
            hz,
        })
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn n_qubits(&self) -> usize {
        self.hx.ncols()
    }

    pub fn k(&self) -> usize {
        self.n_qubits() - self.x_stabilizers.rank() - self.z_stabilizers.rank()
    }

    /// Checks whose kernel a logical of `kind` must lie in (`H_X` for Z-type).
    pub fn checks_for(&self, kind: PauliKind) -> &BitMatrix {
        match kind {
            PauliKind::Z => &self.hx,
            PauliKind::X => &self.hz,
        }
    }

    /// Stabilizers of the same type as `kind` (`H_Z` rows for Z-type).
    pub fn stabilizers(&self, kind: PauliKind) -> &RowSpace {
        match kind {
            PauliKind::Z => &self.z_stabilizers,
            PauliKind::X => &self.x_stabilizers,
        }
    }

    pub fn stabilizer_matrix(&self, kind: PauliKind) -> &BitMatrix {
        match kind {
            PauliKind::Z => &self.hz,
            PauliKind::X => &self.hx,
        }
    }

    /// Commutes with every stabilizer of the opposite type.
    pub fn is_logical(&self, kind: PauliKind, v: &BitVec) -> bool {
        v.len() == self.n_qubits()
            && self
                .checks_for(kind)
                .mul_vec(v)
                .map(|s| s.is_zero())
                .unwrap_or(false)
    }

    pub fn is_trivial(&self, kind: PauliKind, v: &BitVec) -> bool {
        self.stabilizers(kind).contains(v)
    }
}

/// A set of qubit indices, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitRegion {
    indices: Vec<usize>,
}

impl QubitRegion {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Self {
            indices: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all(n_qubits: usize) -> Self {
        Self::new(0..n_qubits)
    }

    pub fn from_mask(mask: &BitVec) -> Self {
        Self {
            indices: mask.support(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.indices.binary_search(&q).is_ok()
    }

    pub fn validate(&self, n_qubits: usize) -> Result<(), CssError> {
        match self.indices.last() {
            Some(&q) if q >= n_qubits => Err(CssError::QubitOutOfRange { index: q, n_qubits }),
            _ => Ok(()),
        }
    }

    pub fn mask(&self, n_qubits: usize) -> BitVec {
        BitVec::from_indices(n_qubits, self.indices.iter().copied())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.indices.iter().chain(&other.indices).copied())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|&q| other.contains(q))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.indices.iter().all(|&q| other.contains(q))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.indices.iter().all(|&q| !other.contains(q))
    }

    /// Grid lines touched by the region.
    pub fn grid_view(&self, grid: &Grid) -> Result<GridView, CssError> {
        self.validate(grid.n_qubits())?;
        let mut view = GridView::default();
        for &q in &self.indices {
            match grid.locate(q).expect("validated index") {
                GridQubit::Vertical { i, j } => {
                    view.vertical_rows.insert(i);
                    view.vertical_cols.insert(j);
                }
                GridQubit::Horizontal { p, q } => {
                    view.horizontal_rows.insert(p);
                    view.horizontal_cols.insert(q);
                }
            }
        }
        Ok(view)
    }
}

impl FromIterator<usize> for QubitRegion {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::new(iter)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridView {
    pub vertical_rows: BTreeSet<usize>,
    pub vertical_cols: BTreeSet<usize>,
    pub horizontal_rows: BTreeSet<usize>,
    pub horizontal_cols: BTreeSet<usize>,
}

/// A logical operator of one type, as a bit vector over the qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: PauliKind,
    pub vector: BitVec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correctability {
    Correctable,
    NotCorrectable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectabilityCertificate {
    pub region: QubitRegion,
    pub verdict: Correctability,
    pub witness: Option<Witness>,
}

impl CorrectabilityCertificate {
    pub fn is_correctable(&self) -> bool {
        self.verdict == Correctability::Correctable
    }

    /// Re-checks the certificate: a witness must be a logical of its type,
    /// supported in the region and outside the stabilizer row space; a
    /// positive verdict is re-derived from scratch.
    pub fn verify(&self, code: &CssCode) -> Result<(), String> {
        let n = code.n_qubits();
        self.region.validate(n).map_err(|e| e.to_string())?;
        match (&self.verdict, &self.witness) {
            (Correctability::NotCorrectable, Some(w)) => {
                if w.vector.len() != n {
                    return Err("witness has the wrong length".into());
                }
                if !code.is_logical(w.kind, &w.vector) {
                    return Err(format!(
                        "{}-witness is not in the kernel of the checks",
                        w.kind
                    ));
                }
                if !w.vector.is_supported_on(&self.region.mask(n)) {
                    return Err("witness leaves the region".into());
                }
                if code.is_trivial(w.kind, &w.vector) {
                    return Err("witness is a stabilizer".into());
                }
                Ok(())
            }
            (Correctability::NotCorrectable, None) => {
                Err("negative verdict without witness".into())
            }
            (Correctability::Correctable, Some(_)) => {
                Err("positive verdict carries a witness".into())
            }
            (Correctability::Correctable, None) => {
                for kind in [PauliKind::Z, PauliKind::X] {
                    if logicals_supported_on(code, &self.region, kind).is_some() {
                        return Err(format!("region supports a nontrivial {kind}-logical"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Basis (as rows of length N) of the logicals of `kind` supported in `region`.
fn supported_logical_space(code: &CssCode, region: &QubitRegion, kind: PauliKind) -> BitMatrix {
    let n = code.n_qubits();
    let checks = code
        .checks_for(kind)
        .select_columns(region.indices())
        .expect("region validated");
    let local = f2::kernel_basis(&checks);
    let rows = local
        .rows()
        .iter()
        .map(|v| {
            let mut full = BitVec::zeros(n);
            for (local_idx, &q) in region.indices().iter().enumerate() {
                if v.get(local_idx) {
                    full.set(q, true);
                }
            }
            full
        })
        .collect();
    BitMatrix::from_rows(rows, n).expect("rows have length N")
}

/// A nontrivial logical of `kind` supported in `region`, if one exists.
///
/// # Panics
///
/// Panics if the region has indices outside the code.
pub fn logicals_supported_on(
    code: &CssCode,
    region: &QubitRegion,
    kind: PauliKind,
) -> Option<BitVec> {
    region
        .validate(code.n_qubits())
        .expect("region indices must be qubits of the code");
    let space = supported_logical_space(code, region, kind);
    let stabilizers = code.stabilizers(kind);
    space
        .rows()
        .iter()
        .find(|v| !stabilizers.contains(v))
        .cloned()
}

/// Number of independent logical classes of `kind` supported in `region`.
/// A region supports a complete set of `kind` logicals iff this equals `k`.
pub fn logical_dimension_on(code: &CssCode, region: &QubitRegion, kind: PauliKind) -> usize {
    region
        .validate(code.n_qubits())
        .expect("region indices must be qubits of the code");
    let space = supported_logical_space(code, region, kind);
    let stacked = space
        .vstack(code.stabilizer_matrix(kind))
        .expect("same column count");
    f2::rank(&stacked) - code.stabilizers(kind).rank()
}

pub fn is_correctable(code: &CssCode, region: &QubitRegion) -> CorrectabilityCertificate {
    for kind in [PauliKind::Z, PauliKind::X] {
        if let Some(vector) = logicals_supported_on(code, region, kind) {
            return CorrectabilityCertificate {
                region: region.clone(),
                verdict: Correctability::NotCorrectable,
                witness: Some(Witness { kind, vector }),
            };
        }
    }
    CorrectabilityCertificate {
        region: region.clone(),
        verdict: Correctability::Correctable,
        witness: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub horizontally: bool,
    pub vertically: bool,
}

impl Separation {
    pub fn both(&self) -> bool {
        self.horizontally && self.vertically
    }
}

/// Separation predicates for two regions of the vertical block.
///
/// Horizontally separated: no grid column `[n_a] x {j}` meets both regions.
/// Vertically separated: no grid row `{i} x [m_b]` meets both.
pub fn separation(
    grid: &Grid,
    alpha: &QubitRegion,
    beta: &QubitRegion,
) -> Result<Separation, CssError> {
    for region in [alpha, beta] {
        region.validate(grid.n_qubits())?;
        if let Some(&q) = region.indices().iter().find(|&&q| !grid.is_vertical(q)) {
            return Err(CssError::HorizontalQubit(q));
        }
    }
    let (a, b) = (alpha.grid_view(grid)?, beta.grid_view(grid)?);
    Ok(Separation {
        horizontally: a.vertical_cols.is_disjoint(&b.vertical_cols),
        vertically: a.vertical_rows.is_disjoint(&b.vertical_rows),
    })
}
