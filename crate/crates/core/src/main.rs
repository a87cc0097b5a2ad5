//! Command line interface: grading decisions, classification sweeps,
//! verification suites, and exact matrix utilities.
//!
//! Exit status contract: 0 = ran and all checks passed (a rejected
//! grading is a successful computation), 1 = verification failure or
//! theorem/oracle disagreement, 2 = usage or parse error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use utinv::classify::{self, DEFAULT_CAP};
use utinv::grading::ElementaryGrading;
use utinv::group::Group;
use utinv::homogeneity::{build_theta, check_segment_condition, ThetaDecision};
use utinv::matrixalg::{
    antiauto_apply, conjugate, involution_sign, Field, FieldSpec, PrimeField, Rationals, UTMatrix,
};
use utinv::verify::{run_suite, Suite, VerifyOptions};
use utinv::{cross_validate, ClassificationRecord, ClassificationSummary};

#[derive(Parser)]
#[command(name = "utinv", version, about = "Homogeneous antiautomorphisms of graded UT_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one grading: existence of a homogeneous antiautomorphism
    /// and the support permutation theta.
    Check(CheckArgs),
    /// Sweep every grading tuple of a finite group at dimension n.
    Classify(ClassifyArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Exact matrix utilities on upper triangular matrices.
    Matrix(MatrixArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Group spec: Z | Z<m> | specs joined by x | table:<path>
    #[arg(long)]
    group: String,
    /// Matrix dimension n >= 1
    #[arg(long)]
    n: usize,
    /// Comma-separated tuple of n-1 element literals (may be empty)
    #[arg(long, default_value = "")]
    tuple: String,
    /// Field for oracle validation
    #[arg(long, default_value = "F5")]
    field: String,
    /// Cross-check the decision against the matrix oracle
    #[arg(long)]
    validate: bool,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "F5")]
    field: String,
    /// Cross-check every decision against the matrix oracle
    #[arg(long)]
    validate: bool,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Cap on the number of tuples in the sweep
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Worker threads (default: env UTINV_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: block-inverse | entry-lemma | hom-aut | sign |
    /// theta-props | kezlan-small | oracle-agreement
    suite: String,
    #[arg(long, default_value = "F5")]
    field: String,
    /// Upper size bound (meaning depends on the suite)
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Random samples per size for randomized suites
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict sweep-based suites to one group
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Operation: inverse | reflect | conjugate | antiauto | sign
    op: String,
    #[arg(long)]
    n: usize,
    /// Row-major upper-triangle entries of the (first) matrix
    #[arg(long)]
    entries: String,
    /// Upper-triangle entries of X for conjugate/antiauto
    #[arg(long)]
    rhs: Option<String>,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

/// Anything that should terminate with a usage/parse status.
type UsageError = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Matrix(args) => cmd_matrix(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_field(spec: &str) -> Result<FieldSpec, UsageError> {
    Ok(spec.parse::<FieldSpec>()?)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, UsageError> {
    let group = Group::parse_spec(&args.group)?;
    let tuple = group.parse_tuple(&args.tuple)?;
    let grading = ElementaryGrading::new(group.clone(), args.n, tuple)?;
    let field = parse_field(&args.field)?;

    let decision = build_theta(&grading);
    let (literal, _) = check_segment_condition(&grading);
    let agreement = if args.validate {
        Some(match field {
            FieldSpec::Rationals => cross_validate(&grading, &Rationals).all_agree(),
            FieldSpec::Prime(p) => {
                let f = PrimeField::new(p)?;
                cross_validate(&grading, &f).all_agree()
            }
        })
    } else {
        None
    };

    match args.format {
        Format::Json => {
            let body = match &decision {
                ThetaDecision::Admits(theta) => json!({
                    "group": group.spec_string(),
                    "n": args.n,
                    "tuple": group.format_tuple(grading.tuple()),
                    "admits": true,
                    "theta": theta.mapping().iter()
                        .map(|(g, h)| vec![group.format_element(g), group.format_element(h)])
                        .collect::<Vec<_>>(),
                    "tags": theta.tags().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "literal": literal,
                    "oracle_agrees": agreement,
                }),
                ThetaDecision::Rejects(w) => json!({
                    "group": group.spec_string(),
                    "n": args.n,
                    "tuple": group.format_tuple(grading.tuple()),
                    "admits": false,
                    "witness": w.describe(&group),
                    "literal": literal,
                    "oracle_agrees": agreement,
                }),
            };
            println!("{body}");
        }
        _ => {
            match &decision {
                ThetaDecision::Admits(theta) => {
                    println!("admits: yes");
                    println!("theta: {}", theta.describe(&group));
                    println!(
                        "tags: {}",
                        theta
                            .tags()
                            .iter()
                            .map(|t| t.to_string())
                            .collect::<Vec<_>>()
                            .join(";")
                    );
                }
                ThetaDecision::Rejects(w) => {
                    println!("admits: no");
                    println!("witness: {}", w.describe(&group));
                }
            }
            println!("literal-condition: {literal}");
            if let Some(ok) = agreement {
                println!("oracle-agrees: {ok}");
            }
        }
    }
    if agreement == Some(false) || literal != decision.admits() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, UsageError> {
    configure_threads(args.threads)?;
    let group = Group::parse_spec(&args.group)?;
    let field = parse_field(&args.field)?;
    let oracle = args.validate;
    let (summary, records) = match field {
        FieldSpec::Rationals => classify::classify_space(
            &group,
            args.n,
            oracle.then_some(&Rationals),
            args.cap,
        )?,
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p)?;
            classify::classify_space(&group, args.n, oracle.then_some(&f), args.cap)?
        }
    };

    match args.format {
        Format::Human => print_human_classification(&group, &summary, &records),
        Format::Json => {
            let mut out = std::io::stdout().lock();
            classify::write_jsonl(&mut out, &records)?;
            writeln!(out, "{}", serde_json::to_string(&summary)?)?;
        }
        Format::Csv => {
            classify::write_csv(std::io::stdout().lock(), &group, &records)?;
            eprintln!(
                "{} tuples, {} admit, {} reject",
                summary.total, summary.admitted, summary.rejected
            );
        }
    }
    if summary.oracle_disagreements > 0 || summary.literal_disagreements > 0 {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_human_classification(
    group: &Group,
    summary: &ClassificationSummary,
    records: &[ClassificationRecord],
) {
    for r in records {
        let tuple = group.format_tuple(&r.tuple);
        if r.admits {
            let tags = r
                .tags
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(";");
            println!("({tuple}): admits [{tags}]");
        } else {
            let witness = r
                .witness
                .as_ref()
                .map(|w| w.describe(group))
                .unwrap_or_default();
            println!("({tuple}): rejects ({witness})");
        }
    }
    println!(
        "summary: group {} n={} total={} admit={} reject={}",
        summary.group, summary.n, summary.total, summary.admitted, summary.rejected
    );
    for (tags, count) in &summary.tag_counts {
        println!("  [{tags}]: {count}");
    }
    println!(
        "  literal disagreements: {}, oracle disagreements: {}, elapsed {} ms",
        summary.literal_disagreements, summary.oracle_disagreements, summary.elapsed_ms
    );
}

fn configure_threads(flag: Option<usize>) -> Result<(), UsageError> {
    let width = flag.or_else(|| {
        std::env::var("UTINV_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = width {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, UsageError> {
    let suite: Suite = args.suite.parse()?;
    let group = args
        .group
        .as_deref()
        .map(Group::parse_spec)
        .transpose()?;
    let opts = VerifyOptions {
        field: parse_field(&args.field)?,
        n: args.n,
        samples: args.samples,
        seed: args.seed,
        group,
    };
    let report = run_suite(suite, &opts)?;
    println!("{report}");
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_matrix(args: MatrixArgs) -> Result<ExitCode, UsageError> {
    let field = parse_field(&args.field)?;
    match field {
        FieldSpec::Rationals => matrix_op(&args, Rationals),
        FieldSpec::Prime(p) => matrix_op(&args, PrimeField::new(p)?),
    }
}

fn matrix_op<F: Field>(args: &MatrixArgs, field: F) -> Result<ExitCode, UsageError> {
    let m = parse_matrix(&field, args.n, &args.entries)?;
    let rhs = args
        .rhs
        .as_deref()
        .map(|r| parse_matrix(&field, args.n, r))
        .transpose()?;
    let need_rhs = || rhs.clone().ok_or_else::<UsageError, _>(|| "--rhs is required".into());
    match args.op.as_str() {
        "inverse" => print_matrix(&field, &m.block_inverse()?, args.format),
        "reflect" => print_matrix(&field, &m.canonical_involution(), args.format),
        "conjugate" => print_matrix(&field, &conjugate(&m, &need_rhs()?)?, args.format),
        "antiauto" => print_matrix(&field, &antiauto_apply(&m, &need_rhs()?)?, args.format),
        "sign" => {
            let sign = involution_sign(&m);
            let text = match sign {
                Some(1) => "+1",
                Some(-1) => "-1",
                _ => "none",
            };
            if args.format == Format::Json {
                println!("{}", json!({ "sign": sign }));
            } else {
                println!("{text}");
            }
        }
        other => return Err(format!("unknown matrix op `{other}`").into()),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_matrix<F: Field>(field: &F, n: usize, text: &str) -> Result<UTMatrix<F>, UsageError> {
    let entries: Vec<F::Elem> = text
        .split(',')
        .map(|s| field.parse(s))
        .collect::<Result<_, _>>()?;
    Ok(UTMatrix::from_upper_entries(field.clone(), n, entries)?)
}

fn print_matrix<F: Field>(field: &F, m: &UTMatrix<F>, format: Format) {
    match format {
        Format::Json => {
            let entries: Vec<String> = m.coords().iter().map(|e| field.format(e)).collect();
            println!("{}", json!({ "n": m.n(), "entries": entries }));
        }
        _ => {
            for i in 1..=m.n() {
                let row: Vec<String> =
                    (1..=m.n()).map(|j| field.format(&m.get(i, j))).collect();
                println!("{}", row.join(" "));
            }
        }
    }
}
