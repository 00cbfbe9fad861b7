use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cosmic_code::algebra::{boson_ladder, qvsl_transform, Kind, ParticleState, QvslDirection};
use cosmic_code::constants::{AlphaScaled, ConstantsOverrides, PhysicalConstants};
use cosmic_code::report::{emit_report, sci17, Format};
use cosmic_code::scenario::{parse_scenario, run_sections, RunError, Scenario, Sections};

/// Directory searched for relative scenario paths when set.
const SCENARIO_DIR_ENV: &str = "COSMIC_CODE_SCENARIO_DIR";

#[derive(Parser)]
#[command(
    name = "cosmic-code",
    version,
    about = "Dimensional cascade and hybrid-space simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cosmic pipeline for a scenario.
    Pipeline {
        /// Scenario document; the canonical scenario when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the F5 B5 … F11 B11 mass ladder.
    Ladder {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "planck-gev")]
        planck_gev: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Collapse statistics for the scenario's wavefunction section.
    Wavefunction {
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply one QVSL transform to a state.
    Qvsl {
        /// Starting `D,d`, e.g. `11,4`.
        #[arg(long, value_parser = parse_dims)]
        from: (i32, i32),
        #[arg(long)]
        n: u8,
        #[arg(long)]
        direction: QvslDirection,
        #[arg(long = "mass-gev")]
        mass_gev: f64,
        #[arg(long, default_value = "boson", value_parser = parse_kind)]
        kind: Kind,
    },
}

fn parse_dims(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected D,d but got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<i32>().map_err(|e| format!("`{x}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    match s {
        "boson" => Ok(Kind::Boson),
        "fermion" => Ok(Kind::Fermion),
        _ => Err(format!("unknown kind `{s}`")),
    }
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Invalid(e) => Failure::Validation(e.to_string()),
            e @ RunError::Stage { .. } => Failure::Runtime(e.to_string()),
        }
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(SCENARIO_DIR_ENV) {
        Some(dir) if path.is_relative() && !path.exists() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn load_scenario(path: Option<&Path>) -> Result<Scenario, Failure> {
    let Some(path) = path else {
        return Ok(Scenario::default());
    };
    let path = resolve(path);
    let bytes = fs::read(&path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&bytes).map_err(|e| Failure::Validation(e.to_string()))
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("finite values serialize");
    v.push(b'\n');
    v
}

#[derive(Serialize)]
struct QvslOutput {
    from: String,
    to: String,
    kind: Kind,
    rest_mass_gev: f64,
    alpha_exponent: i32,
    energy_gev: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pipeline {
            scenario,
            out,
            format,
        } => {
            let scenario = load_scenario(scenario.as_deref())?;
            let sections = Sections {
                pipeline: true,
                wavefunction: false,
            };
            let report = run_sections(&scenario, sections)?;
            write_out(out.as_deref(), &emit_report(&report, format))
        }
        Command::Ladder {
            alpha,
            planck_gev,
            format,
        } => {
            let constants = PhysicalConstants::from_overrides(&ConstantsOverrides {
                alpha,
                planck_energy_gev: planck_gev,
                ..Default::default()
            })
            .map_err(|e| Failure::Validation(e.to_string()))?;
            let ladder = boson_ladder(&constants);
            let bytes = match format {
                Format::Json => to_json(&ladder),
                Format::Csv => {
                    let mut s = String::from("entry,mass_dim,kind,mass_gev\n");
                    for e in &ladder {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            e.name(),
                            e.mass_dim,
                            if e.kind == Kind::Boson {
                                "boson"
                            } else {
                                "fermion"
                            },
                            sci17(e.mass_gev)
                        ));
                    }
                    s.into_bytes()
                }
            };
            write_out(None, &bytes)
        }
        Command::Wavefunction {
            scenario,
            seed,
            out,
            format,
        } => {
            let mut scenario = load_scenario(Some(&scenario))?;
            match (&mut scenario.wavefunction, seed) {
                (Some(w), Some(seed)) => w.seed = seed,
                (None, _) => {
                    return Err(Failure::Validation(
                        "scenario has no `wavefunction` section".into(),
                    ))
                }
                _ => {}
            }
            let sections = Sections {
                pipeline: false,
                wavefunction: true,
            };
            let report = run_sections(&scenario, sections)?;
            write_out(out.as_deref(), &emit_report(&report, format))
        }
        Command::Qvsl {
            from: (dim, mass_dim),
            n,
            direction,
            mass_gev,
            kind,
        } => {
            let constants = PhysicalConstants::default();
            let state = ParticleState::new(dim, mass_dim, kind, AlphaScaled::new(mass_gev), 0)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let to = qvsl_transform(&state, n, direction)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let output = QvslOutput {
                from: state.label(),
                to: to.label(),
                kind: to.kind(),
                rest_mass_gev: to.rest_mass_gev(&constants),
                alpha_exponent: to.rest_mass().power.exponent(),
                energy_gev: to.energy_scaled().to_f64(&constants),
            };
            write_out(None, &to_json(&output))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
