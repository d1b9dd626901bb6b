use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use lambek_nbe::gen::{Calculus, GenConfig};
use lambek_nbe::linear::rewrite::Step;
use lambek_nbe::rewrite::{EquivVerdict, RewriteStep};
use lambek_nbe::{dill, gen, mill, nbe, rewrite, text, typecheck, Error};

#[derive(Parser)]
#[command(name = "lnbe", version, about = "Normalization by evaluation for the Lambek calculus, MILL and DILL")]
struct Cli {
    /// Which calculus the input is written in.
    #[arg(long, global = true, default_value = "lambek")]
    calculus: Calculus,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sequent a term proves.
    Check { file: PathBuf },
    /// Print the normal form of a term.
    Nbe { file: PathBuf },
    /// Search for a rewrite sequence relating two terms. Exits 2 when none
    /// is found within the bounds.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        /// Largest intermediate term, in nodes.
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        /// Longest sequence of steps.
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Print a random well-typed term.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        size: usize,
        /// Print a random normal form instead.
        #[arg(long)]
        normal: bool,
    },
    /// List or apply single rewrite steps.
    Step(StepArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["list", "apply"])))]
struct StepArgs {
    file: PathBuf,
    #[arg(long)]
    list: bool,
    /// A step written PATH:EQ:DIR, the path dot-separated.
    #[arg(long, value_name = "PATH:EQ:DIR")]
    apply: Option<String>,
    /// Largest subterm an η expansion may produce, for `--list`.
    #[arg(long, default_value_t = 40)]
    eta_cap: usize,
}

enum Failure {
    Error(String),
    Unknown,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {}", path.display(), e)))
}

fn in_file<T>(path: &Path, r: lambek_nbe::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Error(format!("{}: {}", path.display(), e)))
}

fn lines<T: Display>(items: &[T]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn linear_parse(c: Calculus, path: &Path) -> Result<lambek_nbe::linear::Term, Failure> {
    let src = read(path)?;
    in_file(path, if c == Calculus::Mill { mill::parse_term(&src) } else { dill::parse_term(&src) })
}

fn meeting(m: mill::Meeting) -> Result<Vec<String>, Failure> {
    match m {
        mill::Meeting::Unknown => Err(Failure::Unknown),
        mill::Meeting::Met { left, right } => {
            let mut out = lines(&left);
            if !right.is_empty() {
                out.push("=".into());
                out.extend(lines(&right));
            }
            Ok(out)
        }
    }
}

fn run(cli: Cli) -> Result<Vec<String>, Failure> {
    let c = cli.calculus;
    match (cli.command, c) {
        (Command::Check { file }, Calculus::Lambek) => {
            let d = in_file(&file, text::parse_derivation(&read(&file)?))?;
            Ok(vec![in_file(&file, typecheck(&d))?.to_string()])
        }
        (Command::Check { file }, Calculus::Mill) => {
            let t = linear_parse(c, &file)?;
            Ok(vec![mill::sequent_string(&in_file(&file, mill::typecheck(&t))?)])
        }
        (Command::Check { file }, Calculus::Dill) => {
            let t = linear_parse(c, &file)?;
            Ok(vec![in_file(&file, dill::typecheck(&t))?.to_string()])
        }
        (Command::Nbe { file }, Calculus::Lambek) => {
            let d = in_file(&file, text::parse_derivation(&read(&file)?))?;
            Ok(vec![text::print_nf(&in_file(&file, nbe(&d))?)])
        }
        (Command::Nbe { file }, _) => {
            let t = linear_parse(c, &file)?;
            let n = in_file(&file, if c == Calculus::Mill { mill::nbe(&t) } else { dill::nbe(&t) })?;
            Ok(vec![dill::print_nf(&n)])
        }
        (Command::Equiv { left, right, nodes, steps }, Calculus::Lambek) => {
            let t = in_file(&left, text::parse_derivation(&read(&left)?))?;
            let u = in_file(&right, text::parse_derivation(&read(&right)?))?;
            match rewrite::equiv_oracle(&t, &u, nodes, steps)? {
                EquivVerdict::Related(trace) => Ok(lines(&trace)),
                EquivVerdict::Unknown => Err(Failure::Unknown),
            }
        }
        (Command::Equiv { left, right, nodes, steps }, _) => {
            let (t, u) = (linear_parse(c, &left)?, linear_parse(c, &right)?);
            meeting(if c == Calculus::Mill {
                mill::equiv(&t, &u, nodes, steps)?
            } else {
                dill::equiv(&t, &u, nodes, steps)?
            })
        }
        (Command::Gen { seed, size, normal }, _) => {
            let cfg = GenConfig {
                calculus: c,
                ..GenConfig::new(seed, size)
            };
            let line = match (c, normal) {
                (Calculus::Lambek, false) => text::print_derivation(&gen::gen_derivation(&cfg)?),
                (Calculus::Lambek, true) => text::print_nf(&gen::gen_nf(&cfg)?),
                (Calculus::Mill, false) => mill::print_term(&mill::gen_term(&cfg)?),
                (Calculus::Mill, true) => mill::print_nf(&mill::gen_nf(&cfg)?),
                (Calculus::Dill, false) => dill::print_term(&dill::gen_term(&cfg)?),
                (Calculus::Dill, true) => dill::print_nf(&dill::gen_nf(&cfg)?),
            };
            Ok(vec![line])
        }
        (Command::Step(a), Calculus::Lambek) => {
            let d = in_file(&a.file, text::parse_derivation(&read(&a.file)?))?;
            match a.apply {
                None => Ok(lines(&rewrite::applicable_steps(&d, a.eta_cap)?)),
                Some(s) => {
                    let s: RewriteStep = s.parse().map_err(Failure::Error)?;
                    Ok(vec![text::print_derivation(&rewrite::apply_step(&d, &s)?)])
                }
            }
        }
        (Command::Step(a), _) => {
            let t = linear_parse(c, &a.file)?;
            let mill = c == Calculus::Mill;
            match a.apply {
                None if mill => Ok(lines(&mill::applicable_steps(&t, a.eta_cap)?)),
                None => Ok(lines(&dill::applicable_steps(&t, a.eta_cap)?)),
                Some(s) => {
                    let s: Step = s.parse().map_err(Failure::Error)?;
                    let out = if mill { mill::apply_step(&t, &s)? } else { dill::apply_step(&t, &s)? };
                    Ok(vec![dill::print_term(&out)])
                }
            }
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1; 2 means the search came back empty-handed.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            for line in out {
                if writeln!(stdout, "{}", line).is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Unknown) => {
            eprintln!("unknown: no rewrite sequence found within the bounds");
            ExitCode::from(2)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::FAILURE
        }
    }
}
