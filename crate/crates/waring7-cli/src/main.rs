use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use waring7_cli::{
    decompose_report, decomposition_from_json, require_ternary_quartic, verify_report,
    DecompositionDto, ExperimentsDto, FailureDto, FormFile, FrameFile, InputError, LinesFile,
    ProbeDto,
};
use waring7_core::binary::Frame;
use waring7_core::decompose::{probe_frames, random_frame};
use waring7_core::experiments::{experiment_special_cases, generate, GeneratorSpec};
use waring7_core::poly::Decomposition;
use waring7_core::{HomogeneousForm, LinearForm, Tolerances};

/// Power sums of length seven for ternary quartics.
#[derive(Parser)]
#[command(name = "waring7", version, about)]
struct Cli {
    /// Verification tolerance; takes precedence over WARING7_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a form as at most seven fourth powers of linear forms.
    Decompose {
        /// Form file (dense or sparse JSON), primal ternary quartic.
        form: PathBuf,
        /// Frame file with dual rows x0, x1, x2; random when absent.
        #[arg(long, conflicts_with = "seed")]
        frame: Option<PathBuf>,
        /// Seed for the random frame.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dual lines file; reports which term directions lie on them.
        #[arg(long)]
        lines: Option<PathBuf>,
    },
    /// Check a stored decomposition against a form.
    Verify {
        form: PathBuf,
        /// Decomposition file: bare object or a decompose report.
        decomposition: PathBuf,
        /// Dual lines file; reports which term directions lie on them.
        #[arg(long)]
        lines: Option<PathBuf>,
    },
    /// Decompose over many random frames and tabulate the outcomes.
    Probe {
        form: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in special-case observations.
    Experiments {
        /// Exit nonzero when an observation fails.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        frames: u32,
    },
    /// Print a built-in example form.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Copy, Clone, ValueEnum)]
enum Kind {
    PurePower,
    RankTwo,
    RankThree,
    DoubleLineConic,
    Random,
}

enum CliError {
    /// Plain message on stderr, exit 2.
    Input(String),
    /// JSON reason on stderr, exit 1.
    Failure(String),
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e.0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(json)) => {
            eprintln!("{json}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(value: &T, pretty: bool) -> String {
    let out = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    out.expect("reports hold only finite plain data")
}

fn resolve_tolerances(flag: Option<f64>) -> Result<Tolerances, CliError> {
    let accept = |v: f64, origin: &str| -> Result<Tolerances, CliError> {
        if v.is_finite() && v > 0.0 {
            Ok(Tolerances::with_verify(v))
        } else {
            Err(CliError::Input(format!(
                "{origin} must be a positive finite number, got {v}"
            )))
        }
    };
    if let Some(v) = flag {
        return accept(v, "--tol");
    }
    match std::env::var("WARING7_TOL") {
        Ok(s) => {
            let v: f64 = s.trim().parse().map_err(|_| {
                CliError::Input(format!("WARING7_TOL is not a number: {s:?}"))
            })?;
            accept(v, "WARING7_TOL")
        }
        Err(std::env::VarError::NotPresent) => Ok(Tolerances::default()),
        Err(e) => Err(CliError::Input(format!("WARING7_TOL: {e}"))),
    }
}

fn read_text(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Input(format!("cannot read {what} {}: {e}", path.display()))
    })
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = read_text(path, what)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!("invalid {what} {}: {e}", path.display()))
    })
}

fn load_quartic(path: &Path) -> Result<HomogeneousForm, CliError> {
    let file: FormFile = read_json(path, "form file")?;
    let form = file.to_form()?;
    require_ternary_quartic(&form)?;
    Ok(form)
}

fn load_lines(path: Option<&PathBuf>) -> Result<Option<Vec<LinearForm>>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let file: LinesFile = read_json(p, "lines file")?;
            Ok(Some(file.to_lines()?))
        }
    }
}

fn load_decomposition(path: &Path) -> Result<(DecompositionDto, Decomposition), CliError> {
    let text = read_text(path, "decomposition file")?;
    let dto = decomposition_from_json(&text)?;
    if dto.degree != 4 {
        return Err(CliError::Input(format!(
            "the decomposition must have degree 4, got {}",
            dto.degree
        )));
    }
    let dec = dto.to_core()?;
    Ok((dto, dec))
}

fn failure(dto: &FailureDto, pretty: bool) -> CliError {
    CliError::Failure(emit(dto, pretty))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = resolve_tolerances(cli.tol)?;
    let pretty = cli.pretty;
    match cli.command {
        Command::Decompose {
            form,
            frame,
            seed,
            out,
            lines,
        } => {
            let f = load_quartic(&form)?;
            let lines = load_lines(lines.as_ref())?;
            let (frame, seed_used): (Frame, Option<u64>) = match frame {
                Some(p) => {
                    let file: FrameFile = read_json(&p, "frame file")?;
                    (file.to_frame()?, None)
                }
                None => {
                    let fr = random_frame(seed).map_err(|e| {
                        failure(
                            &FailureDto::new("FRAME_DEGENERATE", e.to_string()),
                            pretty,
                        )
                    })?;
                    (fr, Some(seed))
                }
            };
            let report = decompose_report(&f, &frame, seed_used, &tol, lines.as_deref())
                .map_err(|dto| failure(&dto, pretty))?;
            let text = emit(&report, pretty);
            if let Some(out) = out {
                fs::write(&out, format!("{text}\n")).map_err(|e| {
                    CliError::Input(format!("cannot write {}: {e}", out.display()))
                })?;
            }
            println!("{text}");
            Ok(())
        }
        Command::Verify {
            form,
            decomposition,
            lines,
        } => {
            let f = load_quartic(&form)?;
            let lines = load_lines(lines.as_ref())?;
            let (_, dec) = load_decomposition(&decomposition)?;
            let report = verify_report(&f, &dec, &tol, lines.as_deref());
            println!("{}", emit(&report, pretty));
            if report.pass {
                Ok(())
            } else {
                Err(failure(
                    &FailureDto::new(
                        "RESIDUAL_TOO_LARGE",
                        format!(
                            "residual {:.3e} exceeds tolerance {:.3e}",
                            report.residual, report.tolerance
                        ),
                    ),
                    pretty,
                ))
            }
        }
        Command::Probe { form, trials, seed } => {
            let f = load_quartic(&form)?;
            let report = probe_frames(&f, trials, seed, &tol);
            println!("{}", emit(&ProbeDto::from_core(&report), pretty));
            Ok(())
        }
        Command::Experiments {
            check,
            seed,
            frames,
        } => {
            if frames == 0 {
                return Err(CliError::Input(String::from("--frames must be at least 1")));
            }
            let report = experiment_special_cases(seed, frames, &tol);
            let dto = ExperimentsDto::from_core(&report);
            println!("{}", emit(&dto, pretty));
            if check && !dto.pass {
                let mut failing = Vec::new();
                if !dto.pure_power.pass {
                    failing.push("pure_power");
                }
                if !dto.rank_two.pass {
                    failing.push("rank_two");
                }
                if !dto.double_line_conic.pass {
                    failing.push("double_line_conic");
                }
                if !dto.random_quartic.pass {
                    failing.push("random_quartic");
                }
                return Err(failure(
                    &FailureDto::new(
                        "EXPERIMENTS_FAILED",
                        format!("failing cases: {}", failing.join(", ")),
                    ),
                    pretty,
                ));
            }
            Ok(())
        }
        Command::Generate { kind, seed } => {
            let spec = match kind {
                Kind::PurePower => GeneratorSpec::PurePower { seed },
                Kind::RankTwo => GeneratorSpec::RankTwo { seed },
                Kind::RankThree => GeneratorSpec::RankThree { seed },
                Kind::DoubleLineConic => GeneratorSpec::DoubleLineConic {
                    seed,
                    line: None,
                    conic: None,
                },
                Kind::Random => GeneratorSpec::RandomQuartic { seed },
            };
            let form = generate(&spec).map_err(|e| {
                failure(&FailureDto::new("TANGENT_CONIC", e.to_string()), pretty)
            })?;
            println!("{}", emit(&FormFile::from_form(&form), pretty));
            Ok(())
        }
    }
}
