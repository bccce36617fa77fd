use super::ClassicalCode;
use crate::f2::BitVec;

/// Default cap on the number of codewords [`distance`] will enumerate.
pub const DEFAULT_DISTANCE_LIMIT: u64 = 1 << 20;

/// Minimum weight over all nonzero codewords, by Gray-code enumeration.
///
/// Returns `None` when `2^k` exceeds `limit` or when `k = 0` (no nonzero
/// codeword, so the distance is undefined).
pub fn distance(code: &ClassicalCode, limit: u64) -> Option<usize> {
    let k = code.k();
    if k == 0 || k >= 64 || (1u64 << k) > limit {
        return None;
    }
    let g = code.generator();
    let mut word = BitVec::zeros(code.n());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        word.xor_assign(g.row(step.trailing_zeros() as usize));
        best = best.min(word.weight());
    }
    Some(best)
}
