use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hgpcert::codes::{
    alist, distance, find_puncture, find_simultaneous_bipuncture, is_robust, ClassicalCode,
    CodeError, PunctureTarget, DEFAULT_DISTANCE_LIMIT, DEFAULT_SEARCH_CAP,
};
use hgpcert::ensembles::{gallager, survey, EnsembleSpec};
use hgpcert::hgp::{product, taut_operators, TautKind, DEFAULT_TAUT_BUDGET};
use hgpcert::transversal::{
    self, certify, counterexample_search, random_pair_stream, toric_pair_stream,
    CliffordRestrictionCertificate, Conclusion,
};

const DEFAULT_SEED: u64 = 20_170_911;

#[derive(Parser)]
#[command(
    name = "hgpcert",
    version,
    about = "Certify transversal-gate restrictions for hypergraph product codes"
)]
struct Cli {
    /// Output format. `csv` is only available for `survey`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Maximum number of subsets a bipuncture search may examine.
    #[arg(long, env = "HGPCERT_SEARCH_CAP", default_value_t = DEFAULT_SEARCH_CAP,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    search_cap: u64,

    /// Maximum number of codewords enumerated to compute a distance.
    #[arg(long, env = "HGPCERT_DISTANCE_LIMIT", default_value_t = DEFAULT_DISTANCE_LIMIT,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    distance_limit: u64,

    /// Profiles enumerated per taut-operator family.
    #[arg(long, env = "HGPCERT_TAUT_BUDGET", default_value_t = DEFAULT_TAUT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    taut_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Toric,
}

#[derive(Subcommand)]
enum Command {
    /// Report n, m, k, kᵀ and the minimum distance of a classical code.
    Analyze { alist: PathBuf },
    /// Find an e-puncture (or with --bi, a disjoint pair) of a parity-check matrix.
    Puncture {
        alist: PathBuf,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        bi: bool,
    },
    /// Decide whether a classical code is robust.
    Robust { alist: PathBuf },
    /// Build the hypergraph product of two codes.
    Hgp {
        a: PathBuf,
        b: PathBuf,
        /// Write the product description and summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Clifford-restriction pipeline and emit a certificate.
    Certify {
        a: PathBuf,
        b: PathBuf,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file without repeating any search.
    Verify { certificate: PathBuf },
    /// Survey robustness over a Gallager ensemble.
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        col_weight: usize,
        #[arg(long)]
        row_weight: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also write survey.json, survey.csv and one alist per sampled code.
        #[arg(long)]
        export_dir: Option<PathBuf>,
    },
    /// Look for non-correctable support intersections outside the certified regime.
    Counterexample {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Family::Random)]
        family: Family,
        /// Largest factor size for the random family.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

enum Failure {
    Usage(String),
    Undecided(String),
    Io(String),
    Malformed(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Undecided(_) => 3,
            Failure::Io(_) => 4,
            Failure::Malformed(_) => 5,
            Failure::Internal(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Undecided(m)
            | Failure::Io(m)
            | Failure::Malformed(m)
            | Failure::Internal(m) => m,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

/// Positive (exit 0) or negative (exit 1) outcome of a command.
type Verdict = Result<bool, Failure>;

fn load_code(path: &Path) -> Result<ClassicalCode, Failure> {
    let h = alist::read_file(path).map_err(|e| match e {
        alist::AlistError::Io { .. } => Failure::Io(e.to_string()),
        _ => Failure::Malformed(format!("{}: {e}", path.display())),
    })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    let code = ClassicalCode::from_parity_check(h);
    Ok(match name {
        Some(n) => code.with_name(n),
        None => code,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Prints ordered fields as `key: value` lines or as one JSON object.
fn emit(format: Format, fields: Vec<(&str, Value)>) {
    match format {
        Format::Json => {
            let map: Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(map)).expect("serializable")
            );
        }
        _ => {
            for (k, v) in fields {
                match v {
                    Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
    }
}

fn analyze(cli: &Cli, path: &Path) -> Verdict {
    let code = load_code(path)?;
    let d = distance(&code, cli.distance_limit);
    let over_limit = d.is_none() && code.k() > 0;
    let d_value = match d {
        Some(d) => json!(d),
        None if over_limit => json!("over_limit"),
        None => json!("undefined"),
    };
    emit(
        cli.format,
        vec![
            ("n", json!(code.n())),
            ("m", json!(code.m())),
            ("k", json!(code.k())),
            ("k_transpose", json!(code.k_transpose())),
            ("d", d_value),
        ],
    );
    if over_limit {
        return Err(Failure::Undecided(format!(
            "distance needs 2^{} codewords, above the limit {}",
            code.k(),
            cli.distance_limit
        )));
    }
    Ok(true)
}

fn puncture(cli: &Cli, path: &Path, e: usize, bi: bool) -> Verdict {
    let code = load_code(path)?;
    let h = code.parity_check();
    if bi {
        let found =
            find_simultaneous_bipuncture(h, h, e, cli.search_cap).map_err(|err| match err {
                CodeError::SearchLimitExceeded { .. } => Failure::Undecided(err.to_string()),
                other => internal(other),
            })?;
        let mut fields = vec![("e", json!(e)), ("found", json!(found.is_some()))];
        if let Some(bp) = &found {
            fields.push(("gamma", json!(bp.gamma)));
            fields.push(("delta", json!(bp.delta)));
        }
        emit(cli.format, fields);
        Ok(found.is_some())
    } else {
        let found = find_puncture(h, e, PunctureTarget::ParityCheck);
        let mut fields = vec![("e", json!(e)), ("found", json!(found.is_some()))];
        if let Some(p) = &found {
            fields.push(("gamma", json!(p.indices)));
        }
        emit(cli.format, fields);
        Ok(found.is_some())
    }
}

fn robust(cli: &Cli, path: &Path) -> Verdict {
    let code = load_code(path)?;
    let cert = is_robust(&code).map_err(internal)?;
    cert.verify(&code).map_err(internal)?;
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&cert).expect("serializable")
        ),
        _ => {
            let mut fields = vec![
                ("n", json!(cert.n)),
                ("k", json!(cert.k)),
                ("robust", json!(cert.is_robust())),
            ];
            if let Some(bp) = &cert.witness_bipuncture {
                fields.push(("gamma", json!(bp.gamma)));
                fields.push(("delta", json!(bp.delta)));
            }
            emit(cli.format, fields);
        }
    }
    Ok(cert.is_robust())
}

fn hgp(cli: &Cli, a: &Path, b: &Path, out: Option<&Path>) -> Verdict {
    let (a, b) = (load_code(a)?, load_code(b)?);
    let code = product(&a, &b).map_err(internal)?;
    let taut = taut_operators(&code, cli.taut_budget);
    let count = |k: TautKind| taut.operators.iter().filter(|t| t.kind == k).count();
    let fields = vec![
        ("n_qubits", json!(code.n_qubits())),
        ("k", json!(code.logical_qubit_count())),
        ("vertical_logicals", json!(code.vertical_logicals())),
        ("horizontal_logicals", json!(code.horizontal_logicals())),
        ("sector", json!(code.sector())),
        ("x_checks", json!(code.hx().nrows())),
        ("z_checks", json!(code.hz().nrows())),
        (
            "taut_operators",
            json!({
                "z_vertical": count(TautKind::ZVertical),
                "x_vertical": count(TautKind::XVertical),
                "z_horizontal": count(TautKind::ZHorizontal),
                "x_horizontal": count(TautKind::XHorizontal),
                "truncated": taut.truncated,
            }),
        ),
    ];
    if let Some(out) = out {
        let mut doc: Map<String, Value> = fields
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        doc.insert(
            "code".into(),
            serde_json::to_value(code.description()).expect("serializable"),
        );
        write_file(
            out,
            &serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"),
        )?;
    }
    emit(cli.format, fields);
    Ok(true)
}

fn certify_cmd(cli: &Cli, a: &Path, b: &Path, out: Option<&Path>) -> Verdict {
    let (a, b) = (load_code(a)?, load_code(b)?);
    let cert = certify(&a, &b).map_err(internal)?;
    transversal::verify(&cert)
        .map_err(|e| internal(format!("fresh certificate failed verification: {e}")))?;
    let json = cert.to_json();
    if let Some(out) = out {
        write_file(out, &json)?;
    }
    if cli.format == Format::Json && out.is_none() {
        println!("{json}");
    } else {
        emit(cli.format, summary(&cert));
    }
    Ok(cert.conclusion == Conclusion::CliffordRestricted)
}

fn summary(cert: &CliffordRestrictionCertificate) -> Vec<(&'static str, Value)> {
    let h = &cert.hypothesis_checks;
    vec![
        ("conclusion", json!(cert.conclusion)),
        ("n_qubits", json!(cert.n_qubits)),
        ("k", json!(cert.k)),
        ("sector", json!(cert.sector)),
        ("swapped", json!(cert.swapped)),
        ("a_robust", json!(h.a_robust.is_robust())),
        (
            "b_transpose_robust",
            json!(h.b_transpose_robust.is_robust()),
        ),
        ("vertical_sector", json!(h.vertical_sector)),
    ]
}

fn verify_cmd(cli: &Cli, path: &Path) -> Verdict {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let cert = CliffordRestrictionCertificate::from_json(&text)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    let result = transversal::verify(&cert);
    let mut fields = vec![("valid", json!(result.is_ok()))];
    if let Err(reason) = &result {
        fields.push(("reason", json!(reason)));
    }
    fields.extend(summary(&cert));
    emit(cli.format, fields);
    Ok(result.is_ok())
}

fn survey_cmd(cli: &Cli, spec: EnsembleSpec, export_dir: Option<&Path>) -> Verdict {
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = survey(&spec, cli.distance_limit).map_err(internal)?;
    report.verify().map_err(internal)?;
    if let Some(dir) = export_dir {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
        write_file(&dir.join("survey.json"), &report.to_json())?;
        write_file(&dir.join("survey.csv"), &report.to_csv())?;
        for r in &report.records {
            let code = gallager(&spec, r.index).map_err(internal)?;
            write_file(
                &dir.join(format!("code-{:04}.alist", r.index)),
                &alist::write(code.parity_check()),
            )?;
        }
    }
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
        Format::Text => {
            let agg = &report.aggregate;
            emit(
                Format::Text,
                vec![
                    ("generator", json!(report.generator)),
                    ("seed", json!(spec.seed)),
                    ("samples", json!(agg.samples)),
                    ("included", json!(agg.included)),
                    ("robust", json!(agg.robust)),
                    ("not_robust", json!(agg.not_robust)),
                    ("undecided", json!(agg.undecided)),
                    ("distance_uncomputed", json!(agg.distance_uncomputed)),
                    ("robust_fraction", json!(agg.robust_fraction)),
                ],
            );
        }
    }
    Ok(true)
}

fn counterexample_cmd(
    cli: &Cli,
    seed: u64,
    budget: usize,
    family: Family,
    max_n: usize,
) -> Verdict {
    let report = match family {
        Family::Random => counterexample_search(random_pair_stream(seed, max_n), budget),
        Family::Toric => counterexample_search(toric_pair_stream(), budget),
    }
    .map_err(internal)?;
    for inst in &report.instances {
        inst.verify()
            .map_err(|e| internal(format!("instance {}: {e}", inst.index)))?;
    }
    let violations = report
        .instances
        .iter()
        .filter(|i| i.hypotheses_hold)
        .count();
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        ),
        _ => emit(
            cli.format,
            vec![
                ("examined", json!(report.examined)),
                ("hypotheses_held", json!(report.hypotheses_held)),
                ("instances", json!(report.instances.len())),
                ("instances_with_hypotheses", json!(violations)),
                (
                    "instance_indices",
                    json!(report.instances.iter().map(|i| i.index).collect::<Vec<_>>()),
                ),
            ],
        ),
    }
    Ok(true)
}

fn run(cli: &Cli) -> Verdict {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Survey { .. }) {
        return Err(Failure::Usage(
            "--format csv is only supported by `survey`".into(),
        ));
    }
    match &cli.command {
        Command::Analyze { alist } => analyze(cli, alist),
        Command::Puncture { alist, e, bi } => puncture(cli, alist, *e, *bi),
        Command::Robust { alist } => robust(cli, alist),
        Command::Hgp { a, b, out } => hgp(cli, a, b, out.as_deref()),
        Command::Certify { a, b, out } => certify_cmd(cli, a, b, out.as_deref()),
        Command::Verify { certificate } => verify_cmd(cli, certificate),
        Command::Survey {
            n,
            col_weight,
            row_weight,
            samples,
            seed,
            export_dir,
        } => survey_cmd(
            cli,
            EnsembleSpec {
                n: *n,
                col_weight: *col_weight,
                row_weight: *row_weight,
                samples: *samples,
                seed: *seed,
            },
            export_dir.as_deref(),
        ),
        Command::Counterexample {
            seed,
            budget,
            family,
            max_n,
        } => counterexample_cmd(cli, *seed, *budget, *family, *max_n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("hgpcert: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
