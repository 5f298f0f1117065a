use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hlevel_core::check::{AxiomPolicy, Options};
use hlevel_core::driver::Session;
use hlevel_core::report::{DiagnosticJson, Entry, EntryStatus, Report};

#[derive(Parser)]
#[command(name = "hlevel", version, about = "Proof checker for univalent type theory")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Highest universe index the kernel accepts.
    #[arg(long, env = "HLEVEL_MAX_LEVEL", global = true)]
    max_level: Option<u32>,

    /// Disable the eta rule for pairs.
    #[arg(long, global = true)]
    no_eta_sigma: bool,

    /// Axioms to leave out (a trailing `*` matches a prefix).
    #[arg(long = "omit-axiom", global = true)]
    omit_axioms: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check files in order against one shared scope. A directory stands for
    /// the files listed in its manifest, in manifest order.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check files, then print the normal form of one definition.
    Normalize {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        name: String,
    },
    /// Write the corpus for levels 0 through N and its manifest.
    Gen {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
    },
    /// Run the finite-model checks.
    Oracle {
        /// Suite to run; repeat for several. All suites run by default.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Largest set size to enumerate.
        #[arg(long, default_value_t = hlevel_oracle::DEFAULT_BOUND)]
        bound: usize,
    },
}

const EXIT_REJECTED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn options(cli: &Cli) -> Options {
    let mut opts = Options::default();
    if let Some(l) = cli.max_level {
        opts.max_level = l;
    }
    opts.eta_sigma = !cli.no_eta_sigma;
    opts
}

fn emit(format: Format, report: &Report) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn io_failure(path: &Path, err: &std::io::Error) -> Report {
    Report::failure(
        path.display().to_string(),
        DiagnosticJson {
            code: "io".into(),
            message: err.to_string(),
            line: None,
            column: None,
        },
    )
}

/// Replaces each corpus directory by the files its manifest lists.
fn expand(cli: &Cli, inputs: &[PathBuf]) -> Result<Vec<PathBuf>, u8> {
    let mut out = Vec::new();
    for input in inputs {
        if !input.is_dir() {
            out.push(input.clone());
            continue;
        }
        let manifest_path = input.join(hlevel_corpus::manifest::FILE_NAME);
        let text = match std::fs::read_to_string(&manifest_path) {
            Ok(t) => t,
            Err(e) => {
                emit(cli.format, &io_failure(&manifest_path, &e));
                return Err(EXIT_USAGE);
            }
        };
        match hlevel_corpus::Manifest::from_json(&text) {
            Ok(m) => out.extend(m.files.iter().map(|f| input.join(&f.path))),
            Err(e) => {
                let file = manifest_path.display().to_string();
                emit(cli.format, &usage_failure(&file, "bad-manifest", e.to_string()));
                return Err(EXIT_USAGE);
            }
        }
    }
    Ok(out)
}

/// Checks every file and reports each one; returns whether all were
/// accepted, or `Err` with the exit code for I/O and parse failures.
fn check_files(cli: &Cli, session: &mut Session, inputs: &[PathBuf]) -> Result<bool, u8> {
    let files = expand(cli, inputs)?;
    let mut all_ok = true;
    for path in &files {
        let source = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                emit(cli.format, &io_failure(path, &e));
                return Err(EXIT_USAGE);
            }
        };
        let file = path.display().to_string();
        match session.check_source(&file, &source) {
            Ok(result) => {
                let report = Report::from_file(&result, &source);
                all_ok &= report.all_ok();
                emit(cli.format, &report);
            }
            Err(diags) => {
                for d in &diags {
                    emit(cli.format, &Report::failure(&file, DiagnosticJson::new(d, Some(&source))));
                }
                return Err(EXIT_USAGE);
            }
        }
    }
    Ok(all_ok)
}

fn usage_failure(what: &str, code: &str, message: String) -> Report {
    Report::failure(
        what,
        DiagnosticJson {
            code: code.into(),
            message,
            line: None,
            column: None,
        },
    )
}

fn gen(cli: &Cli, level: u32, out: &Path) -> u8 {
    match hlevel_corpus::write_corpus(out, level) {
        Ok(paths) => {
            let entries = paths
                .iter()
                .map(|p| Entry {
                    name: p.display().to_string(),
                    status: EntryStatus::Written,
                    paper_ref: None,
                    ms: None,
                    diagnostic: None,
                    detail: None,
                    cases: None,
                    models: Vec::new(),
                    counterexamples: Vec::new(),
                })
                .collect();
            emit(cli.format, &Report::new(out.display().to_string(), entries));
            0
        }
        Err(hlevel_corpus::WriteError::Gen(e)) => {
            emit(cli.format, &usage_failure("gen", "unsupported-level", e.to_string()));
            EXIT_USAGE
        }
        Err(e) => {
            emit(cli.format, &usage_failure("gen", "io", e.to_string()));
            EXIT_USAGE
        }
    }
}

fn oracle(cli: &Cli, suites: &[String], bound: usize) -> u8 {
    match hlevel_oracle::run(suites, bound) {
        Ok(reports) => {
            let report = hlevel_oracle::to_report(&reports);
            emit(cli.format, &report);
            if report.all_ok() {
                0
            } else {
                EXIT_REJECTED
            }
        }
        Err(e) => {
            let code = match e {
                hlevel_oracle::OracleError::UnknownSuite(_) => "unknown-suite",
                _ => "bound-exceeded",
            };
            emit(cli.format, &usage_failure("oracle", code, e.to_string()));
            EXIT_USAGE
        }
    }
}

fn run(cli: Cli) -> u8 {
    let policy = AxiomPolicy::omitting(cli.omit_axioms.clone());
    let mut session = Session::new(options(&cli), policy);
    match &cli.command {
        Command::Check { files } => match check_files(&cli, &mut session, files) {
            Ok(true) => 0,
            Ok(false) => EXIT_REJECTED,
            Err(code) => code,
        },
        Command::Normalize { files, name } => {
            if let Err(code) = check_files(&cli, &mut session, files) {
                return code;
            }
            match session.normalize(name) {
                Some(nf) => {
                    println!("{nf}");
                    0
                }
                None => {
                    eprintln!("error: `{name}` is not a checked definition");
                    EXIT_REJECTED
                }
            }
        }
        Command::Gen { level, out } => gen(&cli, *level, out),
        Command::Oracle { suites, bound } => oracle(&cli, suites, *bound),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // Evaluation and conversion recurse on term depth, and corpus proofs are
    // deep, so the work runs on a thread with a generous stack.
    let worker = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || run(cli))
        .expect("spawn checker thread");
    ExitCode::from(worker.join().unwrap_or(EXIT_USAGE))
}
