use serde::{Deserialize, Serialize};

use super::{HgpCode, HgpError, Sector};
use crate::css::PauliKind;
use crate::f2::{self, BitMatrix, BitVec, RowSpace};

/// Default number of profiles enumerated per line family.
pub const DEFAULT_TAUT_BUDGET: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TautKind {
    /// `v ⊗ e_j`, `v ∈ ker ∂_a`, on vertical column `j`.
    ZVertical,
    /// `e_i ⊗ u`, `u ∈ coker ∂_b`, on vertical row `i`.
    XVertical,
    /// `e_p ⊗ v`, `v ∈ ker ∂_b`, on horizontal row `p`.
    ZHorizontal,
    /// `u ⊗ e_q`, `u ∈ coker ∂_a`, on horizontal column `q`.
    XHorizontal,
}

impl TautKind {
    pub fn pauli(self) -> PauliKind {
        match self {
            TautKind::ZVertical | TautKind::ZHorizontal => PauliKind::Z,
            TautKind::XVertical | TautKind::XHorizontal => PauliKind::X,
        }
    }
}

/// A logical supported on one grid line, with its profile along the line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautOperator {
    pub kind: TautKind,
    pub line: usize,
    pub profile: BitVec,
    pub vector: BitVec,
}

impl TautOperator {
    pub fn new(code: &HgpCode, kind: TautKind, line: usize, profile: BitVec) -> Self {
        let g = code.grid();
        let mut vector = BitVec::zeros(g.n_qubits());
        for t in profile.ones_iter() {
            let q = match kind {
                TautKind::ZVertical => g.vertical(t, line),
                TautKind::XVertical => g.vertical(line, t),
                TautKind::ZHorizontal => g.horizontal(line, t),
                TautKind::XHorizontal => g.horizontal(t, line),
            };
            vector.set(q, true);
        }
        Self {
            kind,
            line,
            profile,
            vector,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautEnumeration {
    pub operators: Vec<TautOperator>,
    /// Set when some family had more nonzero profiles than the budget allowed.
    pub truncated: bool,
}

fn profiles(basis: &BitMatrix, budget: u64) -> (Vec<BitVec>, bool) {
    let r = basis.nrows();
    let total = if r >= 64 { u64::MAX } else { (1u64 << r) - 1 };
    let take = total.min(budget);
    let out = (1..=take)
        .map(|mask| {
            let coeffs = BitVec::from_indices(r, (0..r.min(64)).filter(|&b| mask >> b & 1 == 1));
            basis
                .combine_rows(&coeffs)
                .expect("coefficient length is the row count")
        })
        .collect();
    (out, total > budget)
}

/// Enumerates taut operators of all four kinds: every line paired with every
/// nonzero profile, up to `budget` profiles per family.
pub fn taut_operators(code: &HgpCode, budget: u64) -> TautEnumeration {
    let (a, b) = (code.a(), code.b());
    let g = *code.grid();
    let families = [
        (TautKind::ZVertical, a.generator().clone(), g.m_b),
        (TautKind::XVertical, f2::cokernel(b.parity_check()), g.n_a),
        (TautKind::ZHorizontal, b.generator().clone(), g.m_a),
        (TautKind::XHorizontal, f2::cokernel(a.parity_check()), g.n_b),
    ];
    let mut operators = Vec::new();
    let mut truncated = false;
    for (kind, basis, lines) in families {
        let (profiles, cut) = profiles(&basis, budget);
        truncated |= cut;
        for line in 0..lines {
            for p in &profiles {
                operators.push(TautOperator::new(code, kind, line, p.clone()));
            }
        }
    }
    TautEnumeration {
        operators,
        truncated,
    }
}

/// Splits a vertical-block logical into taut operators on distinct lines.
///
/// For Z, solves `v = (ker(∂_a)ᵀ ⊗ I_{m_b})·y + s` with `s` in the Z
/// stabilizer row space and groups `y` by column `j`; X is symmetric with
/// `I_{n_a} ⊗ coker(∂_b)` grouped by row `i`. The returned operators sum to
/// `v` modulo stabilizers and have pairwise disjoint supports.
pub fn decompose_taut(
    code: &HgpCode,
    v: &BitVec,
    kind: PauliKind,
) -> Result<Vec<TautOperator>, HgpError> {
    let sector = code.sector();
    if !matches!(sector, Sector::VerticalRestricted | Sector::Trivial) {
        return Err(HgpError::WrongSector(sector));
    }
    let n = code.n_qubits();
    if v.len() != n {
        return Err(HgpError::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let g = *code.grid();
    if let Some(q) = v.ones_iter().find(|&q| !g.is_vertical(q)) {
        return Err(HgpError::HorizontalSupport(q));
    }
    if !code.css().is_logical(kind, v) {
        return Err(HgpError::NotALogical(kind));
    }

    let (profile_basis, lines, taut_kind) = match kind {
        PauliKind::Z => (code.a().generator().clone(), g.m_b, TautKind::ZVertical),
        PauliKind::X => (
            f2::cokernel(code.b().parity_check()),
            g.n_a,
            TautKind::XVertical,
        ),
    };
    let r = profile_basis.nrows();
    // Generator row (u, line) is the u-th profile placed on `line`.
    let mut rows = Vec::with_capacity(r * lines);
    for u in 0..r {
        for line in 0..lines {
            rows.push(
                TautOperator::new(code, taut_kind, line, profile_basis.row(u).clone()).vector,
            );
        }
    }
    let generators = BitMatrix::from_rows(rows, n).expect("rows have length N");
    let system = generators
        .vstack(code.css().stabilizer_matrix(kind))
        .expect("same width");
    let coeffs = RowSpace::new(&system)
        .express(v)
        .map_err(|e| HgpError::Inconsistent(e.to_string()))?
        .ok_or_else(|| {
            HgpError::Inconsistent("vertical logical outside the taut span plus stabilizers".into())
        })?;

    let mut out = Vec::new();
    for line in 0..lines {
        let mut profile = BitVec::zeros(profile_basis.ncols());
        for u in 0..r {
            if coeffs.get(u * lines + line) {
                profile.xor_assign(profile_basis.row(u));
            }
        }
        if !profile.is_zero() {
            out.push(TautOperator::new(code, taut_kind, line, profile));
        }
    }
    Ok(out)
}
