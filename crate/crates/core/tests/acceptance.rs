//! Acceptance suite: twelve end-to-end criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report is always printed.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hgpcert::codes::{
    find_simultaneous_bipuncture, is_puncture, is_robust, ClassicalCode, DEFAULT_DISTANCE_LIMIT,
};
use hgpcert::css::{is_correctable, separation, PauliKind, QubitRegion};
use hgpcert::ensembles::{survey, EnsembleSpec};
use hgpcert::f2::{self, BitMatrix, BitVec};
use hgpcert::hgp::{
    decompose_taut, logical_basis, product, taut_operators, HgpCode, Sector, TautKind,
    DEFAULT_TAUT_BUDGET,
};
use hgpcert::transversal::{self, certify, CliffordRestrictionCertificate, Conclusion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2017;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
    let density = rng.gen_range(0.2..0.7);
    let rows = (0..rows)
        .map(|_| BitVec::from_bools((0..cols).map(|_| rng.gen_bool(density))))
        .collect();
    BitMatrix::from_rows(rows, cols).unwrap()
}

fn random_code(rng: &mut impl Rng, max_n: usize) -> ClassicalCode {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_n);
    ClassicalCode::from_parity_check(random_matrix(rng, m, n))
}

fn surface() -> HgpCode {
    let a = ClassicalCode::from_parity_check("1100\n0110\n0011".parse().unwrap());
    let b = ClassicalCode::from_parity_check(a.parity_check().transpose());
    product(&a, &b).unwrap()
}

/// Random products restricted to the vertical sector with `k > 0`.
fn vertical_products(stream: u64, count: usize, max_n: usize) -> Result<Vec<HgpCode>, String> {
    let mut r = rng(stream);
    let mut out = Vec::new();
    for _ in 0..200_000 {
        if out.len() == count {
            return Ok(out);
        }
        let (a, b) = (random_code(&mut r, max_n), random_code(&mut r, max_n));
        let code = product(&a, &b).map_err(|e| e.to_string())?;
        if code.sector() == Sector::VerticalRestricted {
            out.push(code);
        }
    }
    Err(format!("only {} vertical-sector products found", out.len()))
}

fn c1_surface_code() -> Outcome {
    let code = surface();
    let g = code.grid();
    ensure(code.n_qubits() == 25, || format!("N = {}", code.n_qubits()))?;
    ensure(g.vertical_len() == 16 && g.horizontal_len() == 9, || {
        format!("blocks {} + {}", g.vertical_len(), g.horizontal_len())
    })?;
    ensure(code.hz().nrows() == 12 && code.hx().nrows() == 12, || {
        format!(
            "{} Z-checks, {} X-checks",
            code.hz().nrows(),
            code.hx().nrows()
        )
    })?;
    let k = code.n_qubits() - f2::rank(code.hx()) - f2::rank(code.hz());
    ensure(k == 1 && code.logical_qubit_count() == 1, || {
        format!("k = {k}")
    })?;
    Ok("N = 25 (16 + 9), 12 Z-checks, 12 X-checks, k = 1".into())
}

fn c2_surface_logicals() -> Outcome {
    let code = surface();
    let g = *code.grid();
    let basis = logical_basis(&code).map_err(|e| e.to_string())?;
    let j = basis.punctures.z_vertical[0];
    let i = basis.punctures.x_vertical[0];
    let z = BitVec::from_indices(25, (0..4).map(|r| g.vertical(r, j)));
    let x = BitVec::from_indices(25, (0..4).map(|c| g.vertical(i, c)));
    ensure(basis.lz.rows() == [z], || format!("Lz = {:?}", basis.lz))?;
    ensure(basis.lx.rows() == [x], || format!("Lx = {:?}", basis.lx))?;
    // any single coordinate works as the puncture
    for t in 0..4 {
        let zt = BitVec::from_indices(25, (0..4).map(|r| g.vertical(r, t)));
        let xt = BitVec::from_indices(25, (0..4).map(|c| g.vertical(t, c)));
        ensure(
            code.css().is_logical(PauliKind::Z, &zt) && !code.css().is_trivial(PauliKind::Z, &zt),
            || format!("(1111)ᵀ⊗e_{t} is not a nontrivial Z-logical"),
        )?;
        ensure(
            code.css().is_logical(PauliKind::X, &xt) && !code.css().is_trivial(PauliKind::X, &xt),
            || format!("e_{t}⊗(1111) is not a nontrivial X-logical"),
        )?;
    }
    let taut = taut_operators(&code, DEFAULT_TAUT_BUDGET);
    let horizontal = taut
        .operators
        .iter()
        .filter(|t| matches!(t.kind, TautKind::ZHorizontal | TautKind::XHorizontal))
        .count();
    ensure(horizontal == 0, || {
        format!("{horizontal} horizontal taut operators")
    })?;
    ensure(
        basis.punctures.z_horizontal.is_empty() && basis.punctures.x_horizontal.is_empty(),
        || "horizontal punctures not empty".into(),
    )?;
    Ok(format!(
        "Lz = (1111)ᵀ⊗e_{j}, Lx = e_{i}⊗(1111), no horizontal logicals"
    ))
}

fn c3_euler_identity() -> Outcome {
    let mut r = rng(3);
    for t in 0..500 {
        let (m, n) = (r.gen_range(1..=12), r.gen_range(1..=12));
        let h = random_matrix(&mut r, m, n);
        // kernel and cokernel computed independently, in opposite orientations
        let k = f2::kernel_basis(&h).nrows() as isize;
        let kt = f2::kernel_basis(&h.transpose()).nrows() as isize;
        ensure(k - n as isize + m as isize - kt == 0, || {
            format!("matrix {t} ({m}x{n}): k={k}, kᵀ={kt}")
        })?;
    }
    Ok("500 matrices up to 12x12, zero exceptions".into())
}

fn c4_logical_count() -> Outcome {
    let mut r = rng(4);
    for t in 0..100 {
        let (a, b) = (random_code(&mut r, 8), random_code(&mut r, 8));
        let code = product(&a, &b).map_err(|e| format!("pair {t}: {e}"))?;
        let from_ranks = code.n_qubits() - f2::rank(code.hx()) - f2::rank(code.hz());
        let formula = a.k() * b.k_transpose() + a.k_transpose() * b.k();
        ensure(from_ranks == formula, || {
            format!("pair {t}: rank count {from_ranks}, formula {formula}")
        })?;
    }
    Ok("100 random pairs, zero exceptions".into())
}

fn c5_robustness_equivalence() -> Outcome {
    let mut r = rng(5);
    let mut codes: Vec<ClassicalCode> = (0..500).map(|_| random_code(&mut r, 8)).collect();
    codes.push(ClassicalCode::repetition(4));
    codes.push(ClassicalCode::from_parity_check(
        "0010\n0001".parse().unwrap(),
    ));
    let mut robust = 0;
    for (t, code) in codes.iter().enumerate() {
        let cert = is_robust(code).map_err(|e| format!("code {t}: {e}"))?;
        cert.verify(code).map_err(|e| format!("code {t}: {e}"))?;
        let oracle =
            find_simultaneous_bipuncture(code.generator(), code.parity_check(), code.k(), u64::MAX)
                .map_err(|e| e.to_string())?
                .is_some();
        ensure(cert.is_robust() == oracle, || {
            format!(
                "code {t}: verdict {:?}, exhaustive search {oracle}",
                cert.verdict
            )
        })?;
        robust += usize::from(oracle);
    }
    ensure(
        codes[500].k() == 1 && is_robust(&codes[500]).unwrap().is_robust(),
        || "repetition code should be robust".into(),
    )?;
    ensure(!is_robust(&codes[501]).unwrap().is_robust(), || {
        "zero-column fixture should not be robust".into()
    })?;
    Ok(format!(
        "{} codes, {robust} robust, zero disagreements",
        codes.len()
    ))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |x| (0..n).filter(|i| x >> i & 1 == 1).collect())
}

fn c6_puncture_facts() -> Outcome {
    let h: BitMatrix = "11..\n.11.\n..11".parse().unwrap();
    let g: BitMatrix = "1111".parse().unwrap();
    ensure(f2::kernel_basis(&h) == g, || {
        "generator is not (1111)".into()
    })?;
    for s in subsets(4) {
        let on_h = is_puncture(&h, &s).unwrap();
        let on_g = is_puncture(&g, &s).unwrap();
        ensure(on_h == (s.len() <= 1), || {
            format!("∂ puncture verdict wrong on {s:?}")
        })?;
        ensure(on_g == (s.len() <= 3), || {
            format!("G puncture verdict wrong on {s:?}")
        })?;
        if s.len() == 2 {
            let rest: Vec<usize> = (0..4).filter(|i| !s.contains(i)).collect();
            ensure(on_g && is_puncture(&g, &rest).unwrap(), || {
                format!("({s:?}, {rest:?}) is not a bipuncture of G")
            })?;
        }
    }
    Ok("all 16 subsets checked against ∂ and G".into())
}

fn certified_instances() -> Result<Vec<CliffordRestrictionCertificate>, String> {
    let mut r = rng(7);
    let mut certs = Vec::new();
    let mut attempts = 0;
    while certs.len() < 50 {
        attempts += 1;
        if attempts > 500_000 {
            return Err(format!("rejection sampling found only {}", certs.len()));
        }
        let (a, b) = (random_code(&mut r, 8), random_code(&mut r, 8));
        let code = product(&a, &b).map_err(|e| e.to_string())?;
        if code.sector() != Sector::VerticalRestricted {
            continue;
        }
        if !is_robust(&a).unwrap().is_robust() || !is_robust(&b.transpose()).unwrap().is_robust() {
            continue;
        }
        certs.push(certify(&a, &b).map_err(|e| e.to_string())?);
    }
    Ok(certs)
}

fn c7_clifford_restriction(certs: &[CliffordRestrictionCertificate]) -> Outcome {
    for (t, cert) in certs.iter().enumerate() {
        ensure(cert.conclusion == Conclusion::CliffordRestricted, || {
            format!("instance {t}: {:?}", cert.conclusion)
        })?;
        let checks = cert
            .correctability
            .as_ref()
            .ok_or("missing correctability")?;
        let split = checks.alpha.is_correctable() && checks.beta.is_correctable();
        ensure(checks.intersection.is_correctable() == split, || {
            format!("instance {t}: direct and split checks disagree")
        })?;
    }
    let max_n = certs.iter().map(|c| c.n_qubits).max().unwrap_or(0);
    let max_k = certs.iter().map(|c| c.k).max().unwrap_or(0);
    Ok(format!(
        "{} instances clifford_restricted, direct = split in all (N ≤ {max_n}, k ≤ {max_k})",
        certs.len()
    ))
}

fn c8_taut_decomposition() -> Outcome {
    let codes = vertical_products(8, 50, 7)?;
    let mut r = rng(80);
    let mut checked = 0;
    for (t, code) in codes.iter().enumerate() {
        let basis = logical_basis(code).map_err(|e| e.to_string())?;
        let horizontal: Vec<usize> = (code.grid().vertical_len()..code.n_qubits()).collect();
        for (kind, logicals, stabs) in [
            (PauliKind::Z, &basis.lz, code.hz()),
            (PauliKind::X, &basis.lx, code.hx()),
        ] {
            let row = logicals.row(r.gen_range(0..logicals.nrows())).clone();
            // random stabilizer with no horizontal support
            let vertical = f2::cokernel(&stabs.select_columns(&horizontal).unwrap())
                .mul(stabs)
                .unwrap();
            let coeffs = BitVec::from_bools((0..vertical.nrows()).map(|_| r.gen_bool(0.5)));
            let v = row.xor(&vertical.combine_rows(&coeffs).unwrap());
            let parts = decompose_taut(code, &v, kind).map_err(|e| format!("code {t}: {e}"))?;
            let mut sum = BitVec::zeros(code.n_qubits());
            for (i, p) in parts.iter().enumerate() {
                ensure(code.css().is_logical(kind, &p.vector), || {
                    format!("code {t}: part is not a logical")
                })?;
                for q in &parts[i + 1..] {
                    ensure(p.vector.and(&q.vector).is_zero(), || {
                        format!("code {t}: overlapping parts")
                    })?;
                }
                sum.xor_assign(&p.vector);
            }
            let residue = sum.xor(&v);
            ensure(
                f2::rowspace_member(stabs, &residue).unwrap().is_some(),
                || format!("code {t}: parts do not recombine to the input"),
            )?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} logicals decomposed into disjoint taut operators"
    ))
}

fn c9_separated_union() -> Outcome {
    let codes = vertical_products(9, 400, 7)?;
    let mut r = rng(90);
    let mut found = 0;
    let mut tries = 0;
    while found < 50 {
        tries += 1;
        if tries > 200_000 {
            return Err(format!("only {found} supporting pairs constructed"));
        }
        let code = &codes[r.gen_range(0..codes.len())];
        let g = *code.grid();
        let row_side: Vec<bool> = (0..g.n_a).map(|_| r.gen_bool(0.5)).collect();
        let col_side: Vec<bool> = (0..g.m_b).map(|_| r.gen_bool(0.5)).collect();
        let fill = r.gen_range(0.6..1.0);
        let mut pick = |side: bool| {
            let mut cells = Vec::new();
            for (i, &ri) in row_side.iter().enumerate() {
                for (j, &cj) in col_side.iter().enumerate() {
                    if ri == side && cj == side && r.gen_bool(fill) {
                        cells.push(g.vertical(i, j));
                    }
                }
            }
            QubitRegion::new(cells)
        };
        let (alpha, beta) = (pick(true), pick(false));
        let sep = separation(&g, &alpha, &beta).map_err(|e| e.to_string())?;
        ensure(sep.both(), || {
            "constructed regions are not separated".into()
        })?;
        if is_correctable(code.css(), &alpha.union(&beta)).is_correctable() {
            continue;
        }
        let (ca, cb) = (
            is_correctable(code.css(), &alpha),
            is_correctable(code.css(), &beta),
        );
        let witness = [&ca, &cb].into_iter().find(|c| !c.is_correctable());
        let witness = witness.ok_or_else(|| format!("pair {found}: no witness on α or β alone"))?;
        witness.verify(code.css())?;
        found += 1;
    }
    Ok(format!(
        "50 separated pairs supporting a logical, witness on one side in all ({tries} draws)"
    ))
}

fn c10_toric() -> Outcome {
    let c = ClassicalCode::from_parity_check("1100\n0110\n0011\n1001".parse().unwrap());
    let code = product(&c, &c).map_err(|e| e.to_string())?;
    ensure(code.sector() == Sector::BothSectors, || {
        format!("sector {}", code.sector())
    })?;
    ensure(code.logical_qubit_count() == 2, || {
        format!("k = {}", code.logical_qubit_count())
    })?;
    ensure((c.k(), c.k_transpose()) == (1, 1), || {
        "cycle code dimensions".into()
    })?;
    Ok("sector both_sectors, k = 2".into())
}

fn c11_survey() -> Outcome {
    let spec = EnsembleSpec {
        n: 20,
        col_weight: 3,
        row_weight: 4,
        samples: 200,
        seed: SEED,
    };
    let report = survey(&spec, DEFAULT_DISTANCE_LIMIT).map_err(|e| e.to_string())?;
    report.verify()?;
    let agg = &report.aggregate;
    let fraction = agg.robust_fraction.ok_or("no code passed the filter")?;
    ensure(fraction >= 0.95, || {
        format!("robust fraction {fraction:.3}")
    })?;
    Ok(format!(
        "robust fraction {fraction:.3} ({} of {} filtered codes, {} samples)",
        agg.robust, agg.included, agg.samples
    ))
}

fn c12_round_trip(certs: &[CliffordRestrictionCertificate]) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (t, cert) in certs.iter().enumerate() {
        let path = dir.path().join(format!("certificate-{t}.json"));
        std::fs::write(&path, cert.to_json()).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let back = CliffordRestrictionCertificate::from_json(&text)
            .map_err(|e| format!("instance {t}: {e}"))?;
        transversal::verify(&back).map_err(|e| format!("instance {t}: {e}"))?;
        ensure(&back == cert, || {
            format!("instance {t}: round trip changed the certificate")
        })?;
    }
    Ok(format!("{} certificates verified from file", certs.len()))
}

struct Report {
    failures: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(format!(
                "panicked: {:?}",
                p.downcast_ref::<String>()
                    .map(String::as_str)
                    .or(p.downcast_ref::<&str>().copied())
            ))
        });
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  {id:>2}  {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL  {id:>2}  {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
}

fn main() {
    let secs = Duration::from_secs;
    let mut report = Report { failures: 0 };
    println!("acceptance suite (seed {SEED:#x})");
    report.run(
        1,
        "surface code reproduction",
        Some(secs(1)),
        c1_surface_code,
    );
    report.run(
        2,
        "surface code logical operators",
        None,
        c2_surface_logicals,
    );
    report.run(3, "Euler identity", Some(secs(5)), c3_euler_identity);
    report.run(
        4,
        "product logical-qubit count",
        Some(secs(30)),
        c4_logical_count,
    );
    report.run(
        5,
        "robustness decision vs exhaustive search",
        Some(secs(300)),
        c5_robustness_equivalence,
    );
    report.run(6, "repetition code puncture facts", None, c6_puncture_facts);

    let mut certs: Result<Vec<_>, String> = Err("criterion 7 did not produce certificates".into());
    report.run(
        7,
        "Clifford restriction at desk scale",
        Some(secs(600)),
        || {
            certs = certified_instances();
            c7_clifford_restriction(certs.as_deref().map_err(Clone::clone)?)
        },
    );
    report.run(
        8,
        "taut decomposition of vertical logicals",
        None,
        c8_taut_decomposition,
    );
    report.run(9, "union of separated regions", None, c9_separated_union);
    report.run(10, "toric code classification", None, c10_toric);
    report.run(
        11,
        "Gallager ensemble robustness survey",
        Some(secs(600)),
        c11_survey,
    );
    report.run(12, "certificate round trip", None, || {
        c12_round_trip(certs.as_deref().map_err(Clone::clone)?)
    });

    println!("{} of 12 criteria passed", 12 - report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
