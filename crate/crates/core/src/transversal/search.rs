//! Exploratory searches outside the certified regime.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TransversalError;
use crate::codes::{
    canonical_form_with_order, find_puncture, is_robust, ClassicalCode, PunctureTarget,
};
use crate::css::{
    is_correctable, logical_dimension_on, CorrectabilityCertificate, PauliKind, QubitRegion,
};
use crate::ensembles::{random_code, stream_rng};
use crate::f2::{BitMatrix, BitVec};
use crate::hgp::{logical_basis, product, HgpCode, HgpDescription, Sector};

/// Pairs of dense random codes with `n, m <= max_n`; pair `i` uses streams `2i` and `2i + 1`.
pub fn random_pair_stream(
    seed: u64,
    max_n: usize,
) -> impl Iterator<Item = (ClassicalCode, ClassicalCode)> {
    (0u64..).map(move |i| {
        (
            random_code(seed, 2 * i, max_n),
            random_code(seed, 2 * i + 1, max_n),
        )
    })
}

/// Products of cycle codes: `(cycle(a), cycle(b))` for `a = 2, 3, ...` and `2 <= b <= a`.
pub fn toric_pair_stream() -> impl Iterator<Item = (ClassicalCode, ClassicalCode)> {
    (2usize..)
        .flat_map(|a| (2..=a).map(move |b| (ClassicalCode::cycle(a), ClassicalCode::cycle(b))))
}

/// Two `k`-subsets, each an information set of the code: the robustness
/// witness when the code is robust, otherwise the lexicographic puncture of
/// the parity check and an information set chosen to avoid it greedily.
fn split_information_sets(
    code: &ClassicalCode,
) -> Result<(Vec<usize>, Vec<usize>, bool), TransversalError> {
    let k = code.k();
    if k == 0 {
        return Ok((vec![], vec![], true));
    }
    let cert = is_robust(code)?;
    if let Some(bp) = cert.witness_bipuncture {
        return Ok((bp.gamma, bp.delta, true));
    }
    let gamma = find_puncture(code.parity_check(), k, PunctureTarget::ParityCheck)
        .expect("a k-puncture of the parity check always exists")
        .indices;
    let mut order: Vec<usize> = (0..code.n()).filter(|c| !gamma.contains(c)).collect();
    order.extend(&gamma);
    let mut delta = canonical_form_with_order(code, &order)?.pivots().to_vec();
    delta.sort_unstable();
    Ok((gamma, delta, false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleInstance {
    pub index: usize,
    pub code: HgpDescription,
    pub sector: Sector,
    /// `A` robust, `Bᵀ` robust and vertical sector all hold.
    pub hypotheses_hold: bool,
    pub gamma: QubitRegion,
    pub delta: QubitRegion,
    pub intersection: QubitRegion,
    pub witness: CorrectabilityCertificate,
}

impl CounterexampleInstance {
    /// Rebuilds the code and re-checks completeness of `γ`, `δ` and the witness.
    pub fn verify(&self) -> Result<(), String> {
        let code = self.code.build().map_err(|e| e.to_string())?;
        let k = code.logical_qubit_count();
        for (name, r) in [("γ", &self.gamma), ("δ", &self.delta)] {
            for kind in [PauliKind::Z, PauliKind::X] {
                r.validate(code.n_qubits()).map_err(|e| e.to_string())?;
                if logical_dimension_on(code.css(), r, kind) != k {
                    return Err(format!("{name} is not a complete {kind}-support"));
                }
            }
        }
        if self.gamma.intersection(&self.delta) != self.intersection
            || self.witness.region != self.intersection
        {
            return Err("intersection region mismatch".into());
        }
        if self.witness.is_correctable() {
            return Err("instance carries a correctable verdict".into());
        }
        self.witness.verify(code.css())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub examined: usize,
    /// Examined pairs meeting every hypothesis of the certificate.
    pub hypotheses_held: usize,
    pub instances: Vec<CounterexampleInstance>,
    /// The budget ran out before the stream did.
    pub exhausted: bool,
}

fn examine(
    index: usize,
    a: &ClassicalCode,
    b: &ClassicalCode,
) -> Result<(bool, Option<CounterexampleInstance>), TransversalError> {
    let code = product(a, b)?;
    let g = *code.grid();
    let (bt, at) = (b.transpose(), a.transpose());
    let (gxv, dxv, a_robust) = split_information_sets(a)?;
    let (gzv, dzv, bt_robust) = split_information_sets(&bt)?;
    let hypotheses_hold = a_robust && bt_robust && code.horizontal_logicals() == 0;

    let all = |n: usize| (0..n).collect::<Vec<_>>();
    let (mut gamma, mut delta) = (Vec::new(), Vec::new());
    if code.vertical_logicals() > 0 {
        let (rows, cols) = (all(g.n_a), all(g.m_b));
        gamma.extend(
            g.vertical_rect(&gxv, &cols)
                .into_iter()
                .chain(g.vertical_rect(&rows, &gzv)),
        );
        delta.extend(
            g.vertical_rect(&dxv, &cols)
                .into_iter()
                .chain(g.vertical_rect(&rows, &dzv)),
        );
    }
    if code.horizontal_logicals() > 0 {
        let (gzh, dzh, _) = split_information_sets(&at)?;
        let (gxh, dxh, _) = split_information_sets(b)?;
        let (rows, cols) = (all(g.m_a), all(g.n_b));
        gamma.extend(
            g.horizontal_rect(&gzh, &cols)
                .into_iter()
                .chain(g.horizontal_rect(&rows, &gxh)),
        );
        delta.extend(
            g.horizontal_rect(&dzh, &cols)
                .into_iter()
                .chain(g.horizontal_rect(&rows, &dxh)),
        );
    }
    let (gamma, delta) = (QubitRegion::new(gamma), QubitRegion::new(delta));
    let k = code.logical_qubit_count();
    for r in [&gamma, &delta] {
        for kind in [PauliKind::Z, PauliKind::X] {
            if logical_dimension_on(code.css(), r, kind) != k {
                return Err(TransversalError::Hypothesis(format!(
                    "pair {index}: constructed support is not complete for {kind}"
                )));
            }
        }
    }
    let intersection = gamma.intersection(&delta);
    let witness = is_correctable(code.css(), &intersection);
    let instance = (!witness.is_correctable()).then(|| CounterexampleInstance {
        index,
        code: code.description(),
        sector: code.sector(),
        hypotheses_hold,
        gamma,
        delta,
        intersection,
        witness,
    });
    Ok((hypotheses_hold, instance))
}

/// Examines up to `budget` pairs from `pairs`, building two complete logical
/// supports per product from information-set splits of all four factor
/// codes, and records every product whose support intersection is not
/// correctable. Pairs are processed in parallel; results are in stream order.
pub fn counterexample_search(
    pairs: impl IntoIterator<Item = (ClassicalCode, ClassicalCode)>,
    budget: usize,
) -> Result<CounterexampleReport, TransversalError> {
    let mut iter = pairs.into_iter();
    let batch: Vec<_> = iter.by_ref().take(budget).collect();
    let exhausted = batch.len() == budget && iter.next().is_some();
    let results = batch
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| examine(i, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CounterexampleReport {
        examined: results.len(),
        hypotheses_held: results.iter().filter(|(h, _)| *h).count(),
        instances: results.into_iter().filter_map(|(_, inst)| inst).collect(),
        exhausted,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorTrial {
    pub intersection: QubitRegion,
    pub correctable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub seed: u64,
    pub trials: Vec<CommutatorTrial>,
    pub correctable: usize,
    pub fraction_correctable: Option<f64>,
}

fn random_combination(rng: &mut impl Rng, m: &BitMatrix, nonzero: bool) -> BitVec {
    loop {
        let coeffs = BitVec::from_bools((0..m.nrows()).map(|_| rng.gen_bool(0.5)));
        if !nonzero || !coeffs.is_zero() {
            return m
                .combine_rows(&coeffs)
                .expect("coefficient length is the row count");
        }
    }
}

/// For random logicals `p` (X-type) and `q` (Z-type), each a nonzero
/// combination of basis logicals plus a random stabilizer, tests whether
/// `supp(p) ∩ supp(q)` is correctable. Trial `t` draws from stream `t` of
/// `seed`. Products with `k = 0` yield an empty report.
pub fn commutator_support_experiment(
    code: &HgpCode,
    trials: usize,
    seed: u64,
) -> Result<CommutatorReport, TransversalError> {
    let basis = logical_basis(code)?;
    let trials: Vec<CommutatorTrial> = if code.logical_qubit_count() == 0 {
        vec![]
    } else {
        (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(seed, t);
                let p = random_combination(&mut rng, &basis.lx, true).xor(&random_combination(
                    &mut rng,
                    code.hx(),
                    false,
                ));
                let q = random_combination(&mut rng, &basis.lz, true).xor(&random_combination(
                    &mut rng,
                    code.hz(),
                    false,
                ));
                let intersection = QubitRegion::from_mask(&p.and(&q));
                let correctable = is_correctable(code.css(), &intersection).is_correctable();
                CommutatorTrial {
                    intersection,
                    correctable,
                }
            })
            .collect()
    };
    let correctable = trials.iter().filter(|t| t.correctable).count();
    Ok(CommutatorReport {
        seed,
        fraction_correctable: (!trials.is_empty())
            .then(|| correctable as f64 / trials.len() as f64),
        correctable,
        trials,
    })
}
