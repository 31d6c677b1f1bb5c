use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use combi_mt::combine::{self, CombineError, CombinedStructure, FamilySpec};
use combi_mt::logic::{parse_formula, parse_formula_inferred, LogicError, Var};
use combi_mt::model::io::{parse_document, write_structure, FormatError};
use combi_mt::model::{evaluate, Assignment, FiniteStructure, ModelError};
use combi_mt::selftest::run_selftest;
use combi_mt::separate::{e_separating_set, Method, SeparateError};
use combi_mt::spectra::{gen_family_with, parse_params, spectrum_report, FamilyKind, Limits, SpectraError};

#[derive(Parser)]
#[command(name = "combi-mt", version, about = "Combinations of finite structures: build, relativize, separate, count")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    P,
    E,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse a formula and print it in canonical form.
    Parse {
        formula: String,
        /// Declarations such as `rel R/2 rel P/1`; inferred from the formula when absent.
        #[arg(long)]
        sig: Option<String>,
    },
    /// Evaluate a formula in a structure from a file.
    Eval {
        file: PathBuf,
        formula: String,
        /// Structure to use when the file holds several.
        #[arg(long)]
        name: Option<String>,
        /// Free variable values, e.g. `x1=0,x2=3`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Combine the members of a family file into one structure.
    Combine {
        family: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = combine::DEFAULT_E_SYMBOL)]
        e_symbol: String,
    },
    /// Restrict a combined structure to one block (`--tag`) or one E-class (`--class-of`).
    Restrict {
        file: PathBuf,
        #[arg(long, conflicts_with = "class_of", required_unless_present = "class_of")]
        tag: Option<String>,
        #[arg(long)]
        class_of: Option<usize>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value = combine::DEFAULT_E_SYMBOL)]
        e_symbol: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Relativize a formula to an E-class meeting sigma.
    Relativize {
        formula: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = combine::DEFAULT_E_SYMBOL)]
        e_symbol: String,
    },
    /// Separating sentences from one family member to every non-isomorphic one.
    Separate {
        family: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Evaluate a closed-form count next to its oracle.
    Spectrum {
        name: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write one of the example families as a family file.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check every closed form against its oracle.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code 2 for input that cannot be read or parsed, 1 for everything
/// the library rejects.
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<LogicError> for CliError {
    fn from(e: LogicError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<CombineError> for CliError {
    fn from(e: CombineError) -> Self {
        match e {
            CombineError::Logic(e) => e.into(),
            CombineError::Format(e) => e.into(),
            e => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SeparateError> for CliError {
    fn from(e: SeparateError) -> Self {
        match e {
            SeparateError::Combine(e) => e.into(),
            e => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Combine(e) => e.into(),
            e => CliError::Domain(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("UsageError: {}", msg.into()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write `{}`: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pick_structure(path: &Path, name: Option<&str>) -> Result<(String, FiniteStructure), CliError> {
    let doc = parse_document(&read(path)?)?;
    match name {
        Some(n) => doc
            .get(n)
            .map(|s| (n.to_string(), s.clone()))
            .ok_or_else(|| usage(format!("no structure `{n}` in `{}`", path.display()))),
        None => match doc.structures.as_slice() {
            [(n, s)] => Ok((n.clone(), s.clone())),
            [] => Err(usage(format!("`{}` holds no structure", path.display()))),
            _ => Err(usage("the file holds several structures; choose one with --name")),
        },
    }
}

fn parse_assignment(text: &str) -> Result<Assignment, CliError> {
    let mut asg = Assignment::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = item.split_once('=').and_then(|(v, e)| {
            let k: u32 = v.trim().strip_prefix('x')?.parse().ok().filter(|&k| k >= 1)?;
            Some((Var::new(k), e.trim().parse::<usize>().ok()?))
        });
        let (v, e) = parsed.ok_or_else(|| usage(format!("bad assignment `{item}`, expected x<k>=<element>")))?;
        asg.insert(v, e);
    }
    Ok(asg)
}

fn run(verb: Verb) -> Result<(), CliError> {
    match verb {
        Verb::Parse { formula, sig } => {
            let f = match sig {
                Some(decls) => parse_formula(&formula, &combi_mt::Signature::parse_decls(&decls)?)?,
                None => parse_formula_inferred(&formula)?.0,
            };
            println!("{f}");
        }
        Verb::Eval {
            file,
            formula,
            name,
            assign,
        } => {
            let (_, s) = pick_structure(&file, name.as_deref())?;
            let f = parse_formula(&formula, s.sig())?;
            println!("{}", evaluate(&s, &f, &parse_assignment(&assign)?)?);
        }
        Verb::Combine {
            family,
            mode,
            output,
            e_symbol,
        } => {
            let fam = FamilySpec::parse(&read(&family)?)?;
            let (c, suffix) = match mode {
                Mode::P => (combine::p_combine(&fam)?, "p"),
                Mode::E => (combine::e_combine_with_symbol(&fam, &e_symbol)?, "e"),
            };
            let name = format!("{}_{suffix}", fam.name());
            emit(&write_structure(&name, &c.base), output.as_deref())?;
        }
        Verb::Restrict {
            file,
            tag,
            class_of,
            name,
            e_symbol,
            output,
        } => {
            let (name, s) = pick_structure(&file, name.as_deref())?;
            let (restricted, label) = match (tag, class_of) {
                (Some(tag), _) => {
                    let c = CombinedStructure::from_p_structure(s)?;
                    (combine::restrict_to_predicate(&c, &tag)?, tag)
                }
                (None, Some(e)) => {
                    let c = CombinedStructure::from_e_structure(s, &e_symbol)?;
                    (combine::restrict_to_class(&c, e)?, format!("class{e}"))
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            emit(&write_structure(&format!("{name}_{label}"), &restricted), output.as_deref())?;
        }
        Verb::Relativize {
            formula,
            sigma,
            e_symbol,
        } => {
            let f = parse_formula_inferred(&formula)?.0;
            let s = parse_formula_inferred(&sigma)?.0;
            println!("{}", combine::relativize(&f, &e_symbol, &s)?);
        }
        Verb::Separate { family, target } => {
            let fam = FamilySpec::parse(&read(&family)?)?;
            let certs = e_separating_set(&target, &fam)?;
            let mut out = String::new();
            if certs.is_empty() {
                writeln!(out, "# every member is isomorphic to {target}").unwrap();
            }
            for c in certs {
                writeln!(out, "{}", c.sentence).unwrap();
                if c.method == Method::Scott {
                    writeln!(out, "# method=scott").unwrap();
                }
                writeln!(out, "# rank={} true={} false={}", c.rank, c.witness_true, c.witness_false).unwrap();
            }
            print!("{out}");
        }
        Verb::Spectrum { name, params, format } => {
            let p = parse_params(&params).map_err(|e| usage(e.to_string()))?;
            let r = spectrum_report(&name, &p)?;
            let oracle = r.oracle_value.map_or("n/a".to_string(), |o| o.to_string());
            match format {
                Format::Text => println!("closed_form={} oracle={oracle} agrees={}", r.closed_form, r.agrees),
                Format::Tsv => {
                    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("name\tparams\tclosed_form\toracle\tagrees");
                    println!("{name}\t{}\t{}\t{oracle}\t{}", params.join(","), r.closed_form, r.agrees);
                }
            }
        }
        Verb::Gen { kind, params, output } => {
            let p = parse_params(&params).map_err(|e| usage(e.to_string()))?;
            let kind: FamilyKind = kind.parse()?;
            let fam = gen_family_with(kind, &p, &Limits::from_env())?;
            emit(&fam.to_text(), output.as_deref())?;
        }
        Verb::Selftest { seed } => {
            let rows = run_selftest(seed)?;
            let mut failed = 0;
            for r in &rows {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let oracle = r.oracle.map_or("n/a".to_string(), |o| o.to_string());
                println!(
                    "{}\t{}\t{}\tclosed_form={}\toracle={oracle}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    params.join(","),
                    r.closed_form
                );
                failed += usize::from(!r.passed);
            }
            println!("selftest seed={seed}: {} passed, {failed} failed", rows.len() - failed);
            if failed > 0 {
                return Err(CliError::Domain(format!("SelftestFailed: {failed} rows disagree")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
