mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use siegel_core::basis::{sparse_basis_with, BasisOptions, PivotStrategy, DEFAULT_SUBSET_BUDGET};
use siegel_core::bounds::{compute_bounds, DEFAULT_EPSILON};
use siegel_core::checks::verify_instance;
use siegel_core::format::{parse_int_matrix, parse_matrix, write_int_matrix};
use siegel_core::height::{column_heights, height_subspace_with};
use siegel_core::relative::relative_report_with;
use siegel_core::sensing::{
    many_bases_with, search_sensing, small_regime_sup_norm, vandermonde_sensing, ManyBasesOptions,
    SearchParams, SensingMatrix,
};
use siegel_core::{selftest, Error, Exec, IndexSet, QMatrix};

/// Exact small-height bases, heights, and sensing matrices.
#[derive(Parser)]
#[command(name = "siegel", version)]
struct Cli {
    /// Emit one JSON document on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run every loop on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparse small-height basis of the column space of a matrix file.
    Basis {
        file: PathBuf,
        /// Pivot rule; only `lex` is available.
        #[arg(long, value_enum, default_value_t = Pivot::Lex, conflicts_with = "pivot_set")]
        pivot: Pivot,
        /// Explicit 1-based pivot rows, e.g. `1,2,4`.
        #[arg(long, value_delimiter = ',')]
        pivot_set: Option<Vec<usize>>,
        /// Largest number of column subsets tabulated exhaustively.
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        subset_budget: u64,
    },
    /// Height of the column space or of each column.
    Height {
        file: PathBuf,
        /// Height of every column.
        #[arg(long, conflicts_with = "subspace")]
        vectors: bool,
        /// Height of the column space (the default).
        #[arg(long)]
        subspace: bool,
    },
    /// Duality, Hadamard, monotonicity and equality checks on one subspace.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        subset_budget: u64,
    },
    /// Rational kernel of a matrix over a quadratic field.
    Relative { file: PathBuf },
    /// Generate or check integer sensing matrices.
    Sensing {
        #[command(subcommand)]
        action: SensingCommand,
    },
    /// M vectors of which any L form a basis of the column space.
    Manybases {
        file: PathBuf,
        /// Number of vectors M.
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        source: SourceArgs,
        /// Integer sensing matrix to use instead of generating one.
        #[arg(long)]
        sensing: Option<PathBuf>,
        /// Largest number of L-subsets checked before sampling.
        #[arg(long, default_value_t = 100_000)]
        subset_budget: u64,
    },
    /// Floating-point comparison of basis height guarantees.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Reduced property suites and the worked-example regression.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum SensingCommand {
    /// Print an integer matrix with independent column selections.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        source: SourceArgs,
        /// Required independence level (defaults to rows, i.e. full spark).
        #[arg(long)]
        sparsity: Option<usize>,
    },
    /// Exhaustively verify an integer matrix file.
    Check {
        file: PathBuf,
        /// Independence level (defaults to the row count).
        #[arg(long)]
        sparsity: Option<usize>,
    },
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, value_enum, default_value_t = Method::Vandermonde)]
    method: Method,
    /// Entry bound T for search (default ceil((2M)^((L-1)/L))).
    #[arg(long)]
    max_abs: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_tries: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pivot {
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Vandermonde,
    Search,
}

/// Command failures and their exit codes. A failed verification is not a
/// failure here: it is reported through `Outcome::verified` and exits 1.
enum Failure {
    Input(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        if e.is_input_error() {
            Failure::Input(text)
        } else {
            Failure::Precondition(text)
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

/// A finished command: its document, its text form, and the verdict.
struct Outcome {
    doc: Value,
    text: String,
    verified: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {}", path.display(), e)))
}

fn load_matrix(path: &Path) -> Result<QMatrix, Failure> {
    let m = parse_matrix(&read(path)?)?;
    eprintln!("loaded {}x{} matrix over {} from {}", m.rows(), m.cols(), m.ctx(), path.display());
    Ok(m)
}

fn generate(rows: usize, cols: usize, source: &SourceArgs, sparsity: usize, exec: Exec) -> Result<SensingMatrix, Failure> {
    match source.method {
        Method::Vandermonde => {
            if sparsity != rows {
                return Err(Failure::Precondition("Vandermonde generation is full-spark only".to_string()));
            }
            Ok(vandermonde_sensing(rows, cols)?)
        }
        Method::Search => {
            let t = source.max_abs.unwrap_or_else(|| small_regime_sup_norm(rows, cols));
            let params = SearchParams {
                rows,
                cols,
                max_abs: t,
                sparsity,
                seed: source.seed,
                max_tries: source.max_tries,
                exec,
            };
            eprintln!("searching {}x{} with |entries| <= {}, seed {}, up to {} trials", rows, cols, t, source.seed, source.max_tries);
            search_sensing(&params).ok_or_else(|| {
                Failure::Precondition(format!("no matrix found in {} trials; raise --max-tries or --max-abs", source.max_tries))
            })
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.command {
        Command::Basis {
            file,
            pivot: _,
            pivot_set,
            subset_budget,
        } => {
            let a = load_matrix(file)?;
            let strategy = match pivot_set {
                Some(set) => PivotStrategy::Explicit(IndexSet::from_one_based(set).map_err(|e| Failure::Input(e.to_string()))?),
                None => PivotStrategy::Lexicographic,
            };
            let opts = BasisOptions {
                subset_budget: *subset_budget,
                exec,
            };
            let rep = sparse_basis_with(&a, &strategy, opts)?;
            Ok(Outcome {
                doc: report::basis(&rep),
                text: report::basis_text(&rep),
                verified: rep.all_assertions_hold(),
            })
        }
        Command::Height { file, vectors, .. } => {
            let a = load_matrix(file)?;
            if *vectors {
                let hs = column_heights(&a)?;
                let text = hs.iter().enumerate().map(|(i, h)| format!("column {}: {}\n", i + 1, h)).collect();
                Ok(Outcome {
                    doc: json!({"field": a.ctx().to_string(), "column_heights": report::heights(&hs)}),
                    text,
                    verified: true,
                })
            } else {
                let h = height_subspace_with(&a, exec)?;
                Ok(Outcome {
                    doc: json!({"field": a.ctx().to_string(), "subspace_height": report::height(&h)}),
                    text: format!("H(Z): {}\n", h),
                    verified: true,
                })
            }
        }
        Command::Verify { file, subset_budget } => {
            let a = load_matrix(file)?;
            let opts = BasisOptions {
                subset_budget: *subset_budget,
                exec,
            };
            let list = verify_instance(&a, opts)?;
            Ok(Outcome {
                doc: json!({"checks": report::checks(&list)}),
                text: report::checks_text(&list),
                verified: list.iter().all(|c| c.passed),
            })
        }
        Command::Relative { file } => {
            let a = load_matrix(file)?;
            if a.ctx().is_rational() {
                return Err(Failure::Input(format!("{} must declare a quadratic field", file.display())));
            }
            let opts = BasisOptions { exec, ..BasisOptions::default() };
            let rep = relative_report_with(&a, opts)?;
            Ok(Outcome {
                doc: report::relative(&rep),
                text: report::relative_text(&rep),
                verified: rep.all_assertions_hold(),
            })
        }
        Command::Sensing { action } => match action {
            SensingCommand::Gen {
                rows,
                cols,
                source,
                sparsity,
            } => {
                let s = generate(*rows, *cols, source, sparsity.unwrap_or(*rows), exec)?;
                eprint!("{}", report::sensing_text(&s));
                Ok(Outcome {
                    doc: report::sensing(&s),
                    text: write_int_matrix(&s.matrix),
                    verified: s.verified,
                })
            }
            SensingCommand::Check { file, sparsity } => {
                let m = parse_int_matrix(&read(file)?)?;
                let level = sparsity.unwrap_or(m.rows());
                let s = SensingMatrix::from_matrix(m, level);
                Ok(Outcome {
                    doc: report::sensing(&s),
                    text: format!("{}verified={}\n", report::sensing_text(&s), s.verified),
                    verified: s.verified,
                })
            }
        },
        Command::Manybases {
            file,
            count,
            source,
            sensing,
            subset_budget,
        } => {
            let z = load_matrix(file)?;
            let s = match sensing {
                Some(path) => SensingMatrix::from_matrix(parse_int_matrix(&read(path)?)?, z.cols()),
                None => generate(z.cols(), *count, source, z.cols(), exec)?,
            };
            if s.cols() != *count {
                return Err(Failure::Input(format!("sensing matrix has {} columns, --count is {}", s.cols(), count)));
            }
            let opts = ManyBasesOptions {
                subset_budget: *subset_budget,
                sample_seed: source.seed,
                basis: BasisOptions { exec, ..BasisOptions::default() },
            };
            let res = many_bases_with(&z, &s, opts)?;
            Ok(Outcome {
                doc: report::many_bases(&res),
                text: report::many_bases_text(&res),
                verified: res.all_assertions_hold(),
            })
        }
        Command::Bounds { file, epsilon } => {
            let z = load_matrix(file)?;
            let t = compute_bounds(&z, *epsilon)?;
            Ok(Outcome {
                doc: report::bounds(&t),
                text: report::bounds_text(&t),
                verified: true,
            })
        }
        Command::Selftest { seed } => {
            let results = selftest::run_all(*seed);
            let text = results.iter().map(|r| format!("{}\n", r)).collect::<String>();
            let passed = results.iter().filter(|r| r.passed()).count();
            Ok(Outcome {
                doc: json!({"seed": seed, "suites": report::suites(&results)}),
                text: format!("{}{} of {} suites passed\n", text, passed, results.len()),
                verified: passed == results.len(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut doc = out.doc;
                if let Value::Object(map) = &mut doc {
                    map.insert("verified".to_string(), json!(out.verified));
                }
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.message(), "exit_code": f.code()}));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
