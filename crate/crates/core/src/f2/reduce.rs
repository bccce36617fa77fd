use super::{BitMatrix, BitVec, F2Error};

/// Reduced row-echelon form of a matrix.
///
/// Zero rows are kept at the bottom, so `matrix` has the same shape as the
/// source. Pivot columns are chosen greedily left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReducedForm {
    pub matrix: BitMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl RowReducedForm {
    /// Columns that are not pivots, ascending.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.ncols()];
        for &p in &self.pivot_cols {
            is_pivot[p] = true;
        }
        (0..self.matrix.ncols()).filter(|&c| !is_pivot[c]).collect()
    }

    /// The nonzero rows, i.e. a reduced basis of the row space.
    pub fn basis(&self) -> BitMatrix {
        BitMatrix::from_rows(
            self.matrix.rows()[..self.rank].to_vec(),
            self.matrix.ncols(),
        )
        .expect("rows share the column count")
    }
}

/// Gauss-Jordan elimination. When `transform` is given it receives the same
/// row operations, so it ends as `T` with `T * M = rref(M)`.
fn eliminate(m: &mut BitMatrix, mut transform: Option<&mut BitMatrix>) -> Vec<usize> {
    let (nrows, ncols) = m.shape();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| m.get(r, col)) else {
            continue;
        };
        m.rows_mut().swap(rank, p);
        if let Some(t) = transform.as_deref_mut() {
            t.rows_mut().swap(rank, p);
        }
        let pivot_row = m.row(rank).clone();
        let pivot_t = transform.as_deref().map(|t| t.row(rank).clone());
        for r in 0..nrows {
            if r != rank && m.get(r, col) {
                m.rows_mut()[r].xor_assign(&pivot_row);
                if let (Some(t), Some(pt)) = (transform.as_deref_mut(), pivot_t.as_ref()) {
                    t.rows_mut()[r].xor_assign(pt);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

pub fn row_reduce(m: &BitMatrix) -> RowReducedForm {
    let mut matrix = m.clone();
    let pivot_cols = eliminate(&mut matrix, None);
    RowReducedForm {
        rank: pivot_cols.len(),
        matrix,
        pivot_cols,
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    // Reducing the thinner orientation is cheaper and gives the same rank.
    if m.nrows() > m.ncols() {
        row_reduce(&m.transpose()).rank
    } else {
        row_reduce(m).rank
    }
}

/// Null-space basis as rows: a `k x n` matrix `K` with `M * Kᵀ = 0`.
///
/// One row per free column (ascending); row `f` has a one at free column `f`,
/// zeros at the other free columns, and the pivot entries it forces.
pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    let rref = row_reduce(m);
    let n = m.ncols();
    let rows = rref
        .free_cols()
        .into_iter()
        .map(|f| {
            let mut v = BitVec::unit(n, f);
            for (i, &p) in rref.pivot_cols.iter().enumerate() {
                if rref.matrix.get(i, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    BitMatrix::from_rows(rows, n).expect("kernel rows have length n")
}

/// Kernel as an `n x k` matrix whose columns span the null space.
pub fn kernel(m: &BitMatrix) -> BitMatrix {
    kernel_basis(m).transpose()
}

/// Left null space as a `kᵀ x m` matrix `C` with `C * M = 0`.
///
/// Computed as `kernel_basis(Mᵀ)`, so it is literally `kernel(Mᵀ)ᵀ`.
pub fn cokernel(m: &BitMatrix) -> BitMatrix {
    kernel_basis(&m.transpose())
}

/// Precomputed reduction of a matrix for repeated row-space membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    rref: RowReducedForm,
    transform: BitMatrix,
}

impl RowSpace {
    pub fn new(m: &BitMatrix) -> Self {
        let mut matrix = m.clone();
        let mut transform = BitMatrix::identity(m.nrows());
        let pivot_cols = eliminate(&mut matrix, Some(&mut transform));
        Self {
            rref: RowReducedForm {
                rank: pivot_cols.len(),
                matrix,
                pivot_cols,
            },
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref.rank
    }

    pub fn ncols(&self) -> usize {
        self.rref.matrix.ncols()
    }

    /// Remainder of `v` after clearing every pivot position; zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut rem = v.clone();
        for (i, &p) in self.rref.pivot_cols.iter().enumerate() {
            if rem.get(p) {
                rem.xor_assign(self.rref.matrix.row(i));
            }
        }
        rem
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.len() == self.ncols() && self.reduce(v).is_zero()
    }

    /// Coefficients `c` (one per source row) with `cᵀ * M = v`, if any.
    pub fn express(&self, v: &BitVec) -> Result<Option<BitVec>, F2Error> {
        if v.len() != self.ncols() {
            return Err(F2Error::LengthMismatch {
                expected: self.ncols(),
                found: v.len(),
            });
        }
        let mut rem = v.clone();
        let mut coeffs = BitVec::zeros(self.transform.nrows());
        for (i, &p) in self.rref.pivot_cols.iter().enumerate() {
            if rem.get(p) {
                rem.xor_assign(self.rref.matrix.row(i));
                coeffs.xor_assign(self.transform.row(i));
            }
        }
        Ok(rem.is_zero().then_some(coeffs))
    }
}

/// Whether `v` is a sum of rows of `m`; on success the coefficient witness is returned.
pub fn rowspace_member(m: &BitMatrix, v: &BitVec) -> Result<Option<BitVec>, F2Error> {
    RowSpace::new(m).express(v)
}
