use serde::{Deserialize, Serialize};

use super::puncture::{is_puncture, Bipuncture};
use super::{ClassicalCode, CodeError};
use crate::f2::{self, BitMatrix, BitVec};

/// A code brought to the form `G' = (I_k  J)`, `H' = (Jᵀ  I_m)` by a column
/// permutation. Column `c` of `G'` is column `perm[c]` of the original code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub generator: BitMatrix,
    pub parity: BitMatrix,
    pub perm: Vec<usize>,
    pub j: BitMatrix,
}

impl CanonicalForm {
    pub fn k(&self) -> usize {
        self.generator.nrows()
    }

    /// Original column indices of the pivots (the identity block).
    pub fn pivots(&self) -> &[usize] {
        &self.perm[..self.k()]
    }
}

/// Canonical form with pivots chosen greedily in natural column order.
pub fn canonical_form(code: &ClassicalCode) -> Result<CanonicalForm, CodeError> {
    let order: Vec<usize> = (0..code.n()).collect();
    canonical_form_with_order(code, &order)
}

/// Canonical form with pivots chosen greedily while scanning columns in `order`.
///
/// If the first `k` columns of `order` are an information set, they become
/// exactly the pivots.
pub fn canonical_form_with_order(
    code: &ClassicalCode,
    order: &[usize],
) -> Result<CanonicalForm, CodeError> {
    let n = code.n();
    let k = code.k();
    if k == 0 {
        return Err(CodeError::ZeroDimension);
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n {
            return Err(CodeError::IndexOutOfRange { index: c, bound: n });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(CodeError::DuplicateIndex(c));
        }
    }
    if order.len() != n {
        return Err(CodeError::Internal(format!(
            "column order has {} entries for {n} columns",
            order.len()
        )));
    }

    let reordered = code.generator().select_columns(order)?;
    let rref = f2::row_reduce(&reordered);
    let free = rref.free_cols();
    let local: Vec<usize> = rref.pivot_cols.iter().chain(&free).copied().collect();
    let generator = rref.basis().select_columns(&local)?;
    let perm: Vec<usize> = local.iter().map(|&c| order[c]).collect();
    let j = generator.select_columns(&(k..n).collect::<Vec<_>>())?;
    let parity = j.transpose().hstack(&BitMatrix::identity(n - k))?;
    if !parity.mul(&generator.transpose())?.is_zero() {
        return Err(CodeError::Internal("canonical H'·G'ᵀ is nonzero".into()));
    }
    Ok(CanonicalForm {
        generator,
        parity,
        perm,
        j,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RobustVerdict {
    Robust,
    NotRobust,
}

/// Column permutation plus the `J` block of a canonical form `(I_k  J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalWitness {
    pub perm: Vec<usize>,
    pub j: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    pub verdict: RobustVerdict,
    pub n: usize,
    pub k: usize,
    pub witness_bipuncture: Option<Bipuncture>,
    pub witness_canonical: Option<CanonicalWitness>,
    /// For negative verdicts: the decision procedure ran to completion.
    pub search_exhausted: bool,
}

impl RobustnessCertificate {
    pub fn is_robust(&self) -> bool {
        self.verdict == RobustVerdict::Robust
    }

    /// Re-checks every witness against `code` using only puncture and rank tests.
    pub fn verify(&self, code: &ClassicalCode) -> Result<(), String> {
        if self.n != code.n() || self.k != code.k() {
            return Err(format!(
                "certificate is for n={}, k={} but code has n={}, k={}",
                self.n,
                self.k,
                code.n(),
                code.k()
            ));
        }
        match self.verdict {
            RobustVerdict::NotRobust => {
                if self.witness_bipuncture.is_some() {
                    return Err("negative verdict carries a bipuncture".into());
                }
                Ok(())
            }
            RobustVerdict::Robust => {
                if self.witness_bipuncture.is_none() && self.witness_canonical.is_none() {
                    return Err("positive verdict without a witness".into());
                }
                if let Some(bp) = &self.witness_bipuncture {
                    verify_bipuncture(code, bp)?;
                }
                if let Some(cw) = &self.witness_canonical {
                    verify_canonical(code, cw)?;
                }
                Ok(())
            }
        }
    }
}

fn verify_bipuncture(code: &ClassicalCode, bp: &Bipuncture) -> Result<(), String> {
    let k = code.k();
    if bp.gamma.len() != k || bp.delta.len() != k {
        return Err(format!(
            "bipuncture sizes {}/{} differ from k={k}",
            bp.gamma.len(),
            bp.delta.len()
        ));
    }
    if bp.gamma.iter().any(|g| bp.delta.contains(g)) {
        return Err("bipuncture sets overlap".into());
    }
    for (label, set) in [("gamma", &bp.gamma), ("delta", &bp.delta)] {
        for (mname, m) in [
            ("generator", code.generator()),
            ("parity check", code.parity_check()),
        ] {
            if !is_puncture(m, set).map_err(|e| e.to_string())? {
                return Err(format!("{label} does not puncture the {mname}"));
            }
        }
    }
    Ok(())
}

fn verify_canonical(code: &ClassicalCode, cw: &CanonicalWitness) -> Result<(), String> {
    let (n, k) = (code.n(), code.k());
    let mut sorted = cw.perm.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err("canonical permutation is not a permutation of the columns".into());
    }
    if cw.j.shape() != (k, n - k) {
        return Err(format!(
            "J has shape {:?}, expected {:?}",
            cw.j.shape(),
            (k, n - k)
        ));
    }
    if f2::rank(&cw.j) != k {
        return Err("J is not full rank".into());
    }
    // (I_k J) mapped back to the original column order must span the code.
    let canonical = BitMatrix::identity(k)
        .hstack(&cw.j)
        .map_err(|e| e.to_string())?;
    let mut inverse = vec![0; n];
    for (c, &p) in cw.perm.iter().enumerate() {
        inverse[p] = c;
    }
    let original_order = canonical
        .select_columns(&inverse)
        .map_err(|e| e.to_string())?;
    if !code
        .parity_check()
        .mul(&original_order.transpose())
        .map_err(|e| e.to_string())?
        .is_zero()
    {
        return Err("canonical generator rows are not codewords".into());
    }
    Ok(())
}

fn independent<'a>(vectors: impl IntoIterator<Item = &'a BitVec>) -> bool {
    let mut basis: Vec<BitVec> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for b in &basis {
            if let Some(lead) = b.first_one() {
                if r.get(lead) {
                    r.xor_assign(b);
                }
            }
        }
        let Some(lead) = r.first_one() else {
            return false;
        };
        // keep the basis reduced on leading positions
        for b in basis.iter_mut() {
            if b.get(lead) {
                b.xor_assign(&r);
            }
        }
        basis.push(r);
    }
    true
}

/// Two disjoint bases of the column matroid of `g` (a `k x n` matrix of rank `k`).
///
/// Matroid partition by shortest augmenting paths in the exchange graph: each
/// column is offered once; it joins the union if some chain of single-element
/// swaps frees a slot for it. The union of two independent sets is maximum at
/// the end, so two disjoint bases exist iff both sets reach size `k`.
fn two_disjoint_bases(g: &BitMatrix) -> Option<(Vec<usize>, Vec<usize>)> {
    let (k, n) = g.shape();
    let cols: Vec<BitVec> = (0..n).map(|c| g.column(c)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    let members = |owner: &[Option<usize>], side: usize| -> Vec<usize> {
        (0..n).filter(|&e| owner[e] == Some(side)).collect()
    };

    for s in 0..n {
        if owner.iter().filter(|o| o.is_some()).count() == 2 * k {
            break;
        }
        let sides = [members(&owner, 0), members(&owner, 1)];
        // parent[y] = (x, side): y is displaced from `side` by x
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        let mut sink: Option<(usize, usize)> = None;

        'bfs: while let Some(x) = queue.pop_front() {
            for (side, set) in sides.iter().enumerate() {
                if owner[x] == Some(side) {
                    continue;
                }
                if independent(set.iter().map(|&e| &cols[e]).chain([&cols[x]])) {
                    sink = Some((x, side));
                    break 'bfs;
                }
            }
            for (side, set) in sides.iter().enumerate() {
                if owner[x] == Some(side) {
                    continue;
                }
                for &y in set {
                    if visited[y] {
                        continue;
                    }
                    let swapped = set
                        .iter()
                        .filter(|&&e| e != y)
                        .map(|&e| &cols[e])
                        .chain([&cols[x]]);
                    if independent(swapped) {
                        visited[y] = true;
                        parent[y] = Some((x, side));
                        queue.push_back(y);
                    }
                }
            }
        }

        if let Some((mut x, side)) = sink {
            let mut updates = vec![(x, side)];
            while let Some((prev, side)) = parent[x] {
                updates.push((prev, side));
                x = prev;
            }
            for (e, side) in updates {
                owner[e] = Some(side);
            }
        }
    }

    let (a, b) = (members(&owner, 0), members(&owner, 1));
    (a.len() == k && b.len() == k).then_some((a, b))
}

/// Decides whether `code` is robust: its generator and parity check admit
/// disjoint `k`-sets each puncturing both.
///
/// Equivalently some column permutation gives a canonical form `(I_k  J)`
/// with `rank J = k`. The greedy canonical form is tried first; otherwise a
/// matroid-partition search looks for two disjoint information sets. A
/// positive answer is turned into the bipuncture `gamma = pivots`,
/// `delta = copivots of coker(Jᵀ)`, and both witnesses are re-verified.
pub fn is_robust(code: &ClassicalCode) -> Result<RobustnessCertificate, CodeError> {
    let (n, k) = (code.n(), code.k());
    if k == 0 {
        return Ok(RobustnessCertificate {
            verdict: RobustVerdict::Robust,
            n,
            k,
            witness_bipuncture: Some(Bipuncture {
                gamma: vec![],
                delta: vec![],
            }),
            witness_canonical: None,
            search_exhausted: false,
        });
    }
    let negative = RobustnessCertificate {
        verdict: RobustVerdict::NotRobust,
        n,
        k,
        witness_bipuncture: None,
        witness_canonical: None,
        search_exhausted: true,
    };
    if 2 * k > n {
        return Ok(negative);
    }

    let greedy = canonical_form(code)?;
    let info_set: Vec<usize> = if f2::rank(&greedy.j) == k {
        greedy.pivots().to_vec()
    } else {
        match two_disjoint_bases(code.generator()) {
            Some((first, _)) => first,
            None => return Ok(negative),
        }
    };

    let mut order = info_set.clone();
    order.extend((0..n).filter(|c| !info_set.contains(c)));
    let cf = canonical_form_with_order(code, &order)?;
    if cf.pivots() != info_set.as_slice() || f2::rank(&cf.j) != k {
        return Err(CodeError::Internal(
            "information set did not yield a full-rank J".into(),
        ));
    }

    // coker(Jᵀ) = ker(J)ᵀ is (m-k) x m and full rank; its k copivots puncture it.
    let coker_jt = f2::cokernel(&cf.j.transpose());
    let copivots = f2::row_reduce(&coker_jt).free_cols();
    let gamma: Vec<usize> = cf.pivots().to_vec();
    let mut delta: Vec<usize> = copivots.iter().map(|&c| cf.perm[k + c]).collect();
    delta.sort_unstable();
    let mut gamma_sorted = gamma;
    gamma_sorted.sort_unstable();

    let cert = RobustnessCertificate {
        verdict: RobustVerdict::Robust,
        n,
        k,
        witness_bipuncture: Some(Bipuncture {
            gamma: gamma_sorted,
            delta,
        }),
        witness_canonical: Some(CanonicalWitness {
            perm: cf.perm.clone(),
            j: cf.j.clone(),
        }),
        search_exhausted: false,
    };
    cert.verify(code).map_err(CodeError::Internal)?;
    Ok(cert)
}
