//! Clifford-restriction certificates for hypergraph product codes.
//!
//! If a product is restricted to the vertical sector, `A` is robust and
//! `Bᵀ` is robust, then bipunctures `(γ_X, δ_X)` of `A` and `(γ_Z, δ_Z)` of
//! `Bᵀ` give two regions
//!
//! ```text
//! γ = γ_X x [m_b]  ∪  [n_a] x γ_Z
//! δ = δ_X x [m_b]  ∪  [n_a] x δ_Z
//! ```
//!
//! each supporting a complete set of logicals, whose intersection splits
//! into `α = γ_X x δ_Z` and `β = δ_X x γ_Z`. Those pieces are separated in
//! both grid directions and each is correctable, hence so is `γ ∩ δ`, and any
//! transversal gate acts as a Clifford. The pipeline checks every step
//! explicitly and emits a certificate that [`verify`] can re-check from its
//! JSON form alone.

mod search;

use serde::{Deserialize, Serialize};

use crate::codes::{is_robust, ClassicalCode, CodeError, RobustnessCertificate};
use crate::css::{
    is_correctable, logical_dimension_on, separation, CorrectabilityCertificate, PauliKind,
    QubitRegion,
};
use crate::hgp::{product, HgpCode, HgpDescription, HgpError, Sector};

pub use search::{
    commutator_support_experiment, counterexample_search, random_pair_stream, toric_pair_stream,
    CommutatorReport, CommutatorTrial, CounterexampleInstance, CounterexampleReport,
};

/// Version of the certificate JSON layout.
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransversalError {
    #[error(transparent)]
    Product(#[from] HgpError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("{0}")]
    Hypothesis(String),
    #[error("regions are not separated: {0}")]
    Separation(String),
}

/// The four puncture sets, all in factor coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelinePunctures {
    /// Columns of `∂_a` (rows of the vertical grid).
    pub gamma_x: Vec<usize>,
    pub delta_x: Vec<usize>,
    /// Columns of `∂_bᵀ` (columns of the vertical grid).
    pub gamma_z: Vec<usize>,
    pub delta_z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regions {
    pub gamma: QubitRegion,
    pub delta: QubitRegion,
    pub intersection: QubitRegion,
    pub alpha: QubitRegion,
    pub beta: QubitRegion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisChecks {
    pub a_robust: RobustnessCertificate,
    pub b_transpose_robust: RobustnessCertificate,
    pub vertical_sector: bool,
}

impl HypothesisChecks {
    pub fn all_pass(&self) -> bool {
        self.vertical_sector && self.a_robust.is_robust() && self.b_transpose_robust.is_robust()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectabilityChecks {
    pub alpha: CorrectabilityCertificate,
    pub beta: CorrectabilityCertificate,
    pub intersection: CorrectabilityCertificate,
}

impl CorrectabilityChecks {
    /// The direct check on `γ ∩ δ` agrees with the split check on `α`, `β`.
    pub fn union_consistent(&self) -> bool {
        self.intersection.is_correctable()
            == (self.alpha.is_correctable() && self.beta.is_correctable())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    CliffordRestricted,
    HypothesisFailed,
    RegionNotCorrectable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordRestrictionCertificate {
    pub version: u32,
    /// The product that was analysed. When `swapped` is set this is `B ⊗ A`.
    pub code: HgpDescription,
    pub swapped: bool,
    pub n_qubits: usize,
    pub k: usize,
    pub sector: Sector,
    pub hypothesis_checks: HypothesisChecks,
    pub punctures: Option<PipelinePunctures>,
    pub regions: Option<Regions>,
    pub correctability: Option<CorrectabilityChecks>,
    pub conclusion: Conclusion,
}

impl CliffordRestrictionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn vertical_sector(code: &HgpCode) -> bool {
    code.horizontal_logicals() == 0
}

/// Builds `γ` and `δ` from bipunctures of `A` and `Bᵀ` and checks that each
/// supports `k` independent logicals of both types.
pub fn build_supports(
    code: &HgpCode,
    gamma_x: &[usize],
    delta_x: &[usize],
    gamma_z: &[usize],
    delta_z: &[usize],
) -> Result<(QubitRegion, QubitRegion), TransversalError> {
    if !vertical_sector(code) {
        return Err(TransversalError::Hypothesis(format!(
            "product is not restricted to the vertical sector ({})",
            code.sector()
        )));
    }
    let g = *code.grid();
    let check_range =
        |set: &[usize], bound: usize, what: &str| match set.iter().find(|&&x| x >= bound) {
            Some(x) => Err(TransversalError::Hypothesis(format!(
                "{what} index {x} out of range {bound}"
            ))),
            None => Ok(()),
        };
    check_range(gamma_x, g.n_a, "γ_X")?;
    check_range(delta_x, g.n_a, "δ_X")?;
    check_range(gamma_z, g.m_b, "γ_Z")?;
    check_range(delta_z, g.m_b, "δ_Z")?;

    let all_rows: Vec<usize> = (0..g.n_a).collect();
    let all_cols: Vec<usize> = (0..g.m_b).collect();
    let region = |x: &[usize], z: &[usize]| {
        QubitRegion::new(
            g.vertical_rect(x, &all_cols)
                .into_iter()
                .chain(g.vertical_rect(&all_rows, z)),
        )
    };
    let (gamma, delta) = (region(gamma_x, gamma_z), region(delta_x, delta_z));
    let k = code.logical_qubit_count();
    for (name, r) in [("γ", &gamma), ("δ", &delta)] {
        for kind in [PauliKind::Z, PauliKind::X] {
            let dim = logical_dimension_on(code.css(), r, kind);
            if dim != k {
                return Err(TransversalError::Hypothesis(format!(
                    "{name} supports only {dim} of {k} independent {kind}-logicals"
                )));
            }
        }
    }
    Ok((gamma, delta))
}

/// Splits `γ ∩ δ` into `α = γ_X x δ_Z` and `β = δ_X x γ_Z` and checks that
/// the pieces cover the intersection and are separated both ways.
pub fn intersect_and_decompose(
    code: &HgpCode,
    gamma: &QubitRegion,
    delta: &QubitRegion,
    punctures: &PipelinePunctures,
) -> Result<Regions, TransversalError> {
    let g = code.grid();
    let intersection = gamma.intersection(delta);
    let alpha = QubitRegion::new(g.vertical_rect(&punctures.gamma_x, &punctures.delta_z));
    let beta = QubitRegion::new(g.vertical_rect(&punctures.delta_x, &punctures.gamma_z));
    if alpha.union(&beta) != intersection {
        return Err(TransversalError::Separation(
            "α ∪ β differs from γ ∩ δ; the bipunctures are not disjoint".into(),
        ));
    }
    let sep =
        separation(g, &alpha, &beta).map_err(|e| TransversalError::Separation(e.to_string()))?;
    if !sep.both() {
        return Err(TransversalError::Separation(format!(
            "horizontally separated: {}, vertically separated: {}",
            sep.horizontally, sep.vertically
        )));
    }
    Ok(Regions {
        gamma: gamma.clone(),
        delta: delta.clone(),
        intersection,
        alpha,
        beta,
    })
}

/// Runs the full pipeline on `A ⊗ B`.
///
/// Horizontal-sector products are analysed as `B ⊗ A`, which is the same
/// code up to relabelling and lies in the vertical sector; the certificate
/// records the swap. Failed hypotheses and non-correctable regions are
/// verdicts, not errors.
pub fn certify(
    a: &ClassicalCode,
    b: &ClassicalCode,
) -> Result<CliffordRestrictionCertificate, TransversalError> {
    let original = product(a, b)?;
    let swapped = original.sector() == Sector::HorizontalRestricted;
    let (a, b, code) = if swapped {
        (b, a, product(b, a)?)
    } else {
        (a, b, original)
    };

    let hypothesis_checks = HypothesisChecks {
        a_robust: is_robust(a)?,
        b_transpose_robust: is_robust(&b.transpose())?,
        vertical_sector: vertical_sector(&code),
    };
    let mut cert = CliffordRestrictionCertificate {
        version: CERTIFICATE_VERSION,
        code: code.description(),
        swapped,
        n_qubits: code.n_qubits(),
        k: code.logical_qubit_count(),
        sector: code.sector(),
        punctures: None,
        regions: None,
        correctability: None,
        conclusion: Conclusion::HypothesisFailed,
        hypothesis_checks,
    };
    if !cert.hypothesis_checks.all_pass() {
        return Ok(cert);
    }

    let bipuncture = |c: &RobustnessCertificate| {
        c.witness_bipuncture.clone().ok_or_else(|| {
            TransversalError::Hypothesis("robust verdict without a bipuncture witness".into())
        })
    };
    let x = bipuncture(&cert.hypothesis_checks.a_robust)?;
    let z = bipuncture(&cert.hypothesis_checks.b_transpose_robust)?;
    let punctures = PipelinePunctures {
        gamma_x: x.gamma,
        delta_x: x.delta,
        gamma_z: z.gamma,
        delta_z: z.delta,
    };
    let (gamma, delta) = build_supports(
        &code,
        &punctures.gamma_x,
        &punctures.delta_x,
        &punctures.gamma_z,
        &punctures.delta_z,
    )?;
    let regions = intersect_and_decompose(&code, &gamma, &delta, &punctures)?;
    let checks = CorrectabilityChecks {
        alpha: is_correctable(code.css(), &regions.alpha),
        beta: is_correctable(code.css(), &regions.beta),
        intersection: is_correctable(code.css(), &regions.intersection),
    };
    cert.conclusion = if checks.alpha.is_correctable()
        && checks.beta.is_correctable()
        && checks.intersection.is_correctable()
    {
        Conclusion::CliffordRestricted
    } else {
        Conclusion::RegionNotCorrectable
    };
    cert.punctures = Some(punctures);
    cert.regions = Some(regions);
    cert.correctability = Some(checks);
    Ok(cert)
}

/// Re-checks a certificate from its own contents: rebuilds the product from
/// the embedded matrices, re-verifies every witness and region identity, and
/// confirms the conclusion follows. No puncture search is repeated.
pub fn verify(cert: &CliffordRestrictionCertificate) -> Result<(), String> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(format!("unsupported certificate version {}", cert.version));
    }
    let (a, b) = cert.code.factors().map_err(|e| e.to_string())?;
    let code = product(&a, &b).map_err(|e| e.to_string())?;
    if (code.n_qubits(), code.logical_qubit_count(), code.sector())
        != (cert.n_qubits, cert.k, cert.sector)
    {
        return Err("recorded N, k or sector disagree with the embedded code".into());
    }
    if cert.swapped && code.sector() != Sector::VerticalRestricted {
        return Err("swapped factors should give a vertical-sector product".into());
    }

    let h = &cert.hypothesis_checks;
    h.a_robust
        .verify(&a)
        .map_err(|e| format!("A robustness: {e}"))?;
    h.b_transpose_robust
        .verify(&b.transpose())
        .map_err(|e| format!("Bᵀ robustness: {e}"))?;
    if h.vertical_sector != vertical_sector(&code) {
        return Err("vertical-sector flag is wrong".into());
    }

    if !h.all_pass() {
        if cert.conclusion != Conclusion::HypothesisFailed {
            return Err("hypotheses fail but the conclusion says otherwise".into());
        }
        return Ok(());
    }
    if cert.conclusion == Conclusion::HypothesisFailed {
        return Err("hypotheses pass but the conclusion says they failed".into());
    }

    let (Some(p), Some(regions), Some(checks)) =
        (&cert.punctures, &cert.regions, &cert.correctability)
    else {
        return Err("pipeline sections missing".into());
    };
    let witness = |c: &RobustnessCertificate| {
        c.witness_bipuncture
            .clone()
            .ok_or("robust verdict without bipuncture")
    };
    let (x, z) = (witness(&h.a_robust)?, witness(&h.b_transpose_robust)?);
    if (&x.gamma, &x.delta, &z.gamma, &z.delta) != (&p.gamma_x, &p.delta_x, &p.gamma_z, &p.delta_z)
    {
        return Err("punctures differ from the robustness witnesses".into());
    }
    let (gamma, delta) = build_supports(&code, &p.gamma_x, &p.delta_x, &p.gamma_z, &p.delta_z)
        .map_err(|e| e.to_string())?;
    if (&gamma, &delta) != (&regions.gamma, &regions.delta) {
        return Err("γ or δ differ from the puncture construction".into());
    }
    let rebuilt = intersect_and_decompose(&code, &gamma, &delta, p).map_err(|e| e.to_string())?;
    if &rebuilt != regions {
        return Err("γ ∩ δ, α or β differ from the recorded regions".into());
    }

    for (name, c, region) in [
        ("α", &checks.alpha, &regions.alpha),
        ("β", &checks.beta, &regions.beta),
        ("γ ∩ δ", &checks.intersection, &regions.intersection),
    ] {
        if &c.region != region {
            return Err(format!("{name} certificate is for a different region"));
        }
        c.verify(code.css()).map_err(|e| format!("{name}: {e}"))?;
    }
    if !checks.union_consistent() {
        return Err("direct and split correctability checks disagree".into());
    }
    let all = checks.alpha.is_correctable()
        && checks.beta.is_correctable()
        && checks.intersection.is_correctable();
    let expected = if all {
        Conclusion::CliffordRestricted
    } else {
        Conclusion::RegionNotCorrectable
    };
    if cert.conclusion != expected {
        return Err(format!("conclusion should be {expected:?}"));
    }
    Ok(())
}
