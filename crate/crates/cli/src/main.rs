//! Command-line front end: single-point evaluations, parameter sweeps, the
//! verification runner and preset/recipe listings.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain/config error,
//! 3 verification failure. Diagnostics go to stderr; every run echoes the
//! fully resolved configuration before printing results.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cavity_entanglement::concurrence::concurrence_report_with;
use cavity_entanglement::config::{parse_config, RunConfig};
use cavity_entanglement::density::{
    compute_coefficients_momenta, compute_coefficients_normalized, rho_total,
};
use cavity_entanglement::entropy::entropy_report;
use cavity_entanglement::material::{presets_with_overrides, PresetSource, PRESET_FILE_ENV};
use cavity_entanglement::oracle::run_verification;
use cavity_entanglement::sweep::{
    figure_recipe, figure_verdicts, recipe_names, render_csv, run_sweep, SweepSpec,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cavent",
    about = "Vacuum-mediated entanglement between two lattice layers in a planar microcavity",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: String,
    /// Evolution time in seconds (overrides [time] t from the config).
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the three photon propagators of the configured geometry.
    Propagator {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the 4x4 density matrix at the given time.
    Rho {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the entropy report of one reduced layer.
    Entropy {
        #[command(flatten)]
        config: ConfigArgs,
        /// Which layer to keep after the partial trace.
        #[arg(long, default_value_t = 2)]
        layer: u8,
        /// Report entropic quantities in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Print the concurrence report (closed form, oracle, spectrum).
    Concurrence {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run a parameter sweep and write CSV.
    Sweep {
        /// Built-in figure recipe name (see `recipes`).
        #[arg(long, conflicts_with = "config")]
        recipe: Option<String>,
        /// Config file with a [sweep] section.
        #[arg(long)]
        config: Option<String>,
        /// Output CSV path.
        #[arg(long)]
        out: String,
    },
    /// Run the verification suites and print the report.
    Verify {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of randomized cases per suite.
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Also write the report JSON to this path.
        #[arg(long)]
        out: Option<String>,
        /// Skip the figure-shape verdict rows (faster).
        #[arg(long)]
        skip_verdicts: bool,
    },
    /// List the built-in material presets.
    Presets,
    /// List the built-in figure recipes.
    Recipes,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: e.to_string(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<cavity_entanglement::Error> for Failure {
    fn from(e: cavity_entanglement::Error) -> Self {
        Failure::domain(e)
    }
}

fn load_config(path: &str) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("cannot read {path}: {e}")))?;
    parse_config(&text).map_err(Failure::domain)
}

fn resolve_time(config: &RunConfig, flag: Option<f64>) -> Result<f64, Failure> {
    flag.or(config.t).ok_or_else(|| {
        Failure::usage("no evolution time given: set [time] t in the config or pass --t")
    })
}

fn coefficients(config: &RunConfig) -> Result<cavity_entanglement::RhoCoefficients, Failure> {
    let coeffs = if config.normalized {
        compute_coefficients_normalized(
            &config.layer1,
            &config.layer2,
            &config.cavity,
            &config.momenta,
        )?
    } else {
        compute_coefficients_momenta(
            &config.layer1,
            &config.layer2,
            &config.cavity,
            &config.momenta,
            &Default::default(),
        )?
    };
    Ok(coeffs)
}

fn warn_if_marginal(config: &RunConfig, t: f64) -> Result<(), Failure> {
    let coeffs = coefficients(config)?;
    if cavity_entanglement::admissibility(&coeffs, t)
        == cavity_entanglement::Admissibility::Marginal
    {
        eprintln!(
            "warning: t^2 max(L1, L2) = {:.3} is in the marginal band [0.5, 1]; truncation error is no longer small",
            t * t * coeffs.max_population()
        );
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::domain(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn echo_sweep(spec: &SweepSpec) {
    println!("sweep variable: {}", spec.variable.column_name());
    println!("range: {:?}", spec.range);
    println!(
        "base cavity: length = {} m, z1 = {} m, z2 = {} m, n_max = {}, mode_volume = {} m^3",
        spec.base.cavity.length,
        spec.base.cavity.z1,
        spec.base.cavity.z2,
        spec.base.cavity.n_max,
        spec.base.cavity.mode_volume,
    );
    for (tag, layer) in [("layer1", &spec.base.layer1), ("layer2", &spec.base.layer2)] {
        println!(
            "{tag}: {} (v_f = {} m/s, lambda_so = {} eV), energy = {} eV, angle = {} rad",
            layer.material.name,
            layer.material.fermi_velocity,
            layer.material.soi_strength,
            layer.electron.energy,
            layer.electron.angle,
        );
    }
    println!(
        "evaluation time t = {} s, window t_max = {:?}, coupling = {}",
        spec.base.t,
        spec.base.t_max,
        if spec.base.normalized {
            "normalized (zeta = 1)"
        } else {
            "mode volume"
        },
    );
    for note in &spec.notes {
        println!("note: {note}");
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Propagator { config } => {
            let cfg = load_config(&config.config)?;
            print!("{}", cfg.echo());
            let d11 =
                cfg.cavity
                    .photon_propagator(cfg.cavity.z1, cfg.cavity.z1, cfg.momenta.q11)?;
            let d22 =
                cfg.cavity
                    .photon_propagator(cfg.cavity.z2, cfg.cavity.z2, cfg.momenta.q22)?;
            let d12 =
                cfg.cavity
                    .photon_propagator(cfg.cavity.z1, cfg.cavity.z2, cfg.momenta.q12)?;
            print_json(&serde_json::json!({
                "delta11_s": d11,
                "delta22_s": d22,
                "delta12_s": d12,
                "flight_time_s": cfg.cavity.time_of_flight().ok(),
            }))?;
            Ok(0)
        }
        Command::Rho { config } => {
            let cfg = load_config(&config.config)?;
            let t = resolve_time(&cfg, config.t)?;
            print!("{}", cfg.echo());
            warn_if_marginal(&cfg, t)?;
            let coeffs = coefficients(&cfg)?;
            let rho = rho_total(&coeffs, t)?;
            let record = rho.record(serde_json::json!({
                "t_s": t,
                "coefficients": coeffs,
                "basis": "(|+,+>, |+,->, |-,+>, |-,->), layer 1 first",
            }));
            print_json(&record)?;
            Ok(0)
        }
        Command::Entropy {
            config,
            layer,
            bits,
        } => {
            let cfg = load_config(&config.config)?;
            let t = resolve_time(&cfg, config.t)?;
            print!("{}", cfg.echo());
            warn_if_marginal(&cfg, t)?;
            let coeffs = coefficients(&cfg)?;
            let report = entropy_report(&coeffs, t, layer)?;
            let report = if bits { report.in_bits() } else { report };
            print_json(&report)?;
            Ok(0)
        }
        Command::Concurrence { config } => {
            let cfg = load_config(&config.config)?;
            let t = resolve_time(&cfg, config.t)?;
            print!("{}", cfg.echo());
            warn_if_marginal(&cfg, t)?;
            let report = concurrence_report_with(
                &cfg.layer1,
                &cfg.layer2,
                &cfg.cavity,
                t,
                &cfg.momenta,
                &Default::default(),
                cfg.normalized,
            )?;
            if let Some(reason) = &report.selection_blocked {
                eprintln!("note: selection rule forces zero concurrence ({reason})");
            }
            print_json(&report)?;
            Ok(0)
        }
        Command::Sweep {
            recipe,
            config,
            out,
        } => {
            let spec = match (recipe, config) {
                (Some(name), None) => figure_recipe(&name)?,
                (None, Some(path)) => {
                    let cfg = load_config(&path)?;
                    if !cfg.has_sweep() {
                        return Err(Failure::domain(format!("{path} has no [sweep] section")));
                    }
                    print!("{}", cfg.echo());
                    cfg.sweep_spec()?
                }
                _ => return Err(Failure::usage("give exactly one of --recipe or --config")),
            };
            echo_sweep(&spec);
            let rows = run_sweep(&spec)?;
            let csv = render_csv(spec.variable, &rows);
            let mut file = std::fs::File::create(&out)
                .map_err(|e| Failure::domain(format!("cannot create {out}: {e}")))?;
            file.write_all(csv.as_bytes())
                .map_err(|e| Failure::domain(format!("cannot write {out}: {e}")))?;
            let flagged = rows
                .iter()
                .filter(|r| r.status != cavity_entanglement::sweep::RowStatus::Ok)
                .count();
            println!("wrote {} rows to {out} ({flagged} flagged)", rows.len());
            Ok(0)
        }
        Command::Verify {
            seed,
            cases,
            out,
            skip_verdicts,
        } => {
            let mut report = run_verification(seed, cases);
            if !skip_verdicts {
                for verdict in figure_verdicts()? {
                    report.push(verdict.into_check());
                }
            }
            let json = report.to_json();
            println!("{json}");
            if let Some(path) = out {
                std::fs::write(&path, format!("{json}\n"))
                    .map_err(|e| Failure::domain(format!("cannot write {path}: {e}")))?;
            }
            if report.passed {
                Ok(0)
            } else {
                eprintln!("verification failed: at least one hard check did not pass");
                Ok(EXIT_VERIFICATION)
            }
        }
        Command::Presets => {
            let presets = presets_with_overrides(std::env::var(PRESET_FILE_ENV).ok().as_deref())?;
            println!("name        v_f (m/s)   lambda_so (eV)  source");
            for p in presets {
                println!(
                    "{:<11} {:<11} {:<15} {}",
                    p.material.name,
                    p.material.fermi_velocity,
                    p.material.soi_strength,
                    match p.source {
                        PresetSource::Reference => "reference",
                        PresetSource::LiteraturePlaceholder => "literature placeholder",
                    }
                );
            }
            println!("(override or extend via the {PRESET_FILE_ENV} environment variable)");
            Ok(0)
        }
        Command::Recipes => {
            for name in recipe_names() {
                let spec = figure_recipe(name)?;
                println!("{name}: {} sweep", spec.variable.column_name());
                for note in &spec.notes {
                    println!("    {note}");
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion
            {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
