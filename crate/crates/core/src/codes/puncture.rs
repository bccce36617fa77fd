use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::CodeError;
use crate::f2::{self, BitMatrix};

/// Default cap on the number of candidate subsets an exhaustive search may visit.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctureTarget {
    Generator,
    ParityCheck,
    Other,
}

/// A set of column indices whose deletion preserves the rank of its target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puncture {
    pub indices: Vec<usize>,
    pub target: PunctureTarget,
}

impl Puncture {
    pub fn size(&self) -> usize {
        self.indices.len()
    }
}

/// Two disjoint punctures of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipuncture {
    pub gamma: Vec<usize>,
    pub delta: Vec<usize>,
}

fn validate_indices(ncols: usize, gamma: &[usize]) -> Result<(), CodeError> {
    let mut seen = vec![false; ncols];
    for &i in gamma {
        if i >= ncols {
            return Err(CodeError::IndexOutOfRange {
                index: i,
                bound: ncols,
            });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(CodeError::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// True iff deleting the columns in `gamma` leaves the rank of `m` unchanged,
/// i.e. no nonzero row-space vector is supported inside `gamma`.
pub fn is_puncture(m: &BitMatrix, gamma: &[usize]) -> Result<bool, CodeError> {
    validate_indices(m.ncols(), gamma)?;
    Ok(f2::rank(&m.delete_columns(gamma)?) == f2::rank(m))
}

/// An `e`-puncture of `m`, if one exists.
///
/// Every matrix with `k = cols - rank` is `k`-puncturable: the free columns of
/// its reduced row-echelon form work, and any `e <= k` of them do too. For
/// `e > k` no puncture exists, since `cols - e` columns cannot carry rank.
pub fn find_puncture(m: &BitMatrix, e: usize, target: PunctureTarget) -> Option<Puncture> {
    let rref = f2::row_reduce(m);
    let free = rref.free_cols();
    (e <= free.len()).then(|| Puncture {
        indices: free[..e].to_vec(),
        target,
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Disjoint `gamma`, `delta` of size `e`, each puncturing both `m1` and `m2`.
///
/// Exhaustive in lexicographic order over sorted index tuples, so the first
/// pair found is the lexicographically smallest. `Ok(None)` means the whole
/// space was searched without a hit.
pub fn find_simultaneous_bipuncture(
    m1: &BitMatrix,
    m2: &BitMatrix,
    e: usize,
    cap: u64,
) -> Result<Option<Bipuncture>, CodeError> {
    if m1.ncols() != m2.ncols() {
        return Err(CodeError::ColumnCountMismatch {
            left: m1.ncols(),
            right: m2.ncols(),
        });
    }
    let n = m1.ncols();
    if 2 * e > n {
        return Ok(None);
    }
    let required = binomial(n, e);
    if required > cap as u128 {
        return Err(CodeError::SearchLimitExceeded { required, cap });
    }
    let (r1, r2) = (f2::rank(m1), f2::rank(m2));
    let candidates: Vec<Vec<usize>> = (0..n)
        .combinations(e)
        .filter(|s| {
            f2::rank(&m1.delete_columns(s).expect("indices in range")) == r1
                && f2::rank(&m2.delete_columns(s).expect("indices in range")) == r2
        })
        .collect();
    let masks: Vec<f2::BitVec> = candidates
        .iter()
        .map(|s| f2::BitVec::from_indices(n, s.iter().copied()))
        .collect();
    for (a, ma) in masks.iter().enumerate() {
        if let Some(b) = masks.iter().position(|mb| ma.and(mb).is_zero()) {
            return Ok(Some(Bipuncture {
                gamma: candidates[a].clone(),
                delta: candidates[b].clone(),
            }));
        }
    }
    Ok(None)
}
