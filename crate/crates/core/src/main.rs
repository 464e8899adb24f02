use clap::{Parser, Subcommand, ValueEnum};
use invwell::cli::{
    self, ClassicalConfig, EigenfunctionConfig, OutputFormat, PotentialConfig, ResonancesConfig,
    SpectrumConfig, VerifyConfig,
};
use invwell::error::Error;
use invwell::exact_eigenfunctions::Family;
use invwell::grid_resonance::DiffScheme;
use invwell::model::SlopeConvention;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "invwell",
    version,
    about = "Spectral and classical toolkit for the inverted oscillator with a non-Hermitian coupling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap the worker threads used by coupling sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ket,
    Bra,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StencilArg {
    Order2,
    Order4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SlopeArg {
    Frequency,
    FrequencySquared,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels versus coupling with branch classification.
    Spectrum {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Single coupling value (overrides the range flags).
        #[arg(long)]
        g: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        g_min: f64,
        #[arg(long, default_value_t = 2.0)]
        g_max: f64,
        #[arg(long, default_value_t = 0.01)]
        g_step: f64,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 64)]
        truncation: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
    },
    /// Potential-well profiles for a set of couplings.
    Potential {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Coupling values; defaults to the reference set 0.3 0.7 1.0 1.3 1.7.
        #[arg(long, num_args = 1..)]
        g: Option<Vec<f64>>,
        #[arg(long, default_value_t = -4.0)]
        x_min: f64,
        #[arg(long, default_value_t = 4.0)]
        x_max: f64,
        #[arg(long, default_value_t = 161)]
        points: usize,
        /// Curvature convention: the effective frequency or its square.
        #[arg(long, value_enum, default_value_t = SlopeArg::Frequency)]
        slope: SlopeArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value = "potential.csv")]
        out: PathBuf,
    },
    /// Exact eigenfunction coefficients and sampled values (JSON).
    Eigenfunction {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        g: f64,
        #[arg(long, value_enum, default_value_t = FamilyArg::Ket)]
        branch: FamilyArg,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = -4.0)]
        x_min: f64,
        #[arg(long, default_value_t = 4.0)]
        x_max: f64,
        #[arg(long, default_value_t = 161)]
        points: usize,
        #[arg(long, default_value = "eigenfunction.json")]
        out: PathBuf,
    },
    /// Complex-scaled resonance eigenvalues against the imaginary ladder.
    Resonances {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Scaling angle in radians (−π/4 selects the ket branch).
        #[arg(long, default_value_t = -std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = -12.0)]
        x_min: f64,
        #[arg(long, default_value_t = 12.0)]
        x_max: f64,
        #[arg(long, default_value_t = 801)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = StencilArg::Order4)]
        stencil: StencilArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value = "resonances.csv")]
        out: PathBuf,
    },
    /// Integrate the complex classical flow and emit the trajectory.
    Classical {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        g: f64,
        /// Initial position, complex literal like "0.5-2i".
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x0: String,
        /// Initial momentum, complex literal like "1" or "i".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        p0: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 3000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value = "classical.csv")]
        out: PathBuf,
    },
    /// Run the invariant battery and write a JSON report.
    /// Exit code 0 iff every check passes.
    Verify {
        #[arg(long, default_value_t = 128)]
        truncation: usize,
        #[arg(long, default_value_t = 801)]
        grid_points: usize,
        /// Debug knob: offset the squeeze parameter in the gauge check to
        /// demonstrate the sensitivity of the identity.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb_eta: Option<f64>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::InvalidConfig(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(command: Command) -> invwell::Result<ExitCode> {
    match command {
        Command::Spectrum {
            omega,
            g,
            g_min,
            g_max,
            g_step,
            levels,
            truncation,
            format,
            out,
        } => {
            let g_values = match g {
                Some(v) => vec![v],
                None => cli::coupling_grid(g_min, g_max, g_step)?,
            };
            let config = SpectrumConfig {
                omega,
                g_values,
                truncation,
                levels,
                format: format.into(),
            };
            cli::cmd_spectrum(&config, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Potential { omega, g, x_min, x_max, points, slope, format, out } => {
            let config = PotentialConfig {
                omega,
                g_values: g.unwrap_or_else(|| cli::POTENTIAL_CURVE_SET.to_vec()),
                x_min,
                x_max,
                points,
                convention: match slope {
                    SlopeArg::Frequency => SlopeConvention::Frequency,
                    SlopeArg::FrequencySquared => SlopeConvention::FrequencySquared,
                },
                format: format.into(),
            };
            cli::cmd_potential(&config, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Eigenfunction { omega, g, branch, n, x_min, x_max, points, out } => {
            let config = EigenfunctionConfig {
                omega,
                g,
                family: match branch {
                    FamilyArg::Ket => Family::Ket,
                    FamilyArg::Bra => Family::Bra,
                },
                n,
                x_min,
                x_max,
                points,
            };
            cli::cmd_eigenfunction(&config, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Resonances {
            omega,
            theta,
            x_min,
            x_max,
            points,
            levels,
            stencil,
            format,
            out,
        } => {
            let config = ResonancesConfig {
                omega,
                theta,
                x_min,
                x_max,
                points,
                levels,
                scheme: match stencil {
                    StencilArg::Order2 => DiffScheme::Order2,
                    StencilArg::Order4 => DiffScheme::Order4,
                },
                format: format.into(),
            };
            cli::cmd_resonances(&config, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Classical { omega, g, x0, p0, dt, steps, format, out } => {
            let config = ClassicalConfig {
                omega,
                g,
                x0: cli::parse_complex(&x0)?,
                p0: cli::parse_complex(&p0)?,
                dt,
                steps,
                format: format.into(),
            };
            cli::cmd_classical(&config, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { truncation, grid_points, perturb_eta, out } => {
            let config = VerifyConfig { truncation, grid_points, eta_perturbation: perturb_eta };
            let doc = cli::cmd_verify(&config, Some(&out))?;
            for c in &doc.checks {
                let status = match c.status {
                    cli::CheckStatus::Pass => "pass",
                    cli::CheckStatus::Fail => "FAIL",
                    cli::CheckStatus::Skipped => "skip",
                };
                match (c.residual, c.tolerance) {
                    (Some(r), Some(t)) => {
                        println!("[{status}] {:<32} residual {r:.3e} (tolerance {t:.3e})", c.name)
                    }
                    _ => println!("[{status}] {}", c.name),
                }
            }
            eprintln!("wrote {}", out.display());
            if doc.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failing checks: {:?}", doc.failing());
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let body = move || run(cli.command);
    let outcome = match cli.threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Err(Error::InvalidConfig(format!("thread pool: {e}"))),
        },
        Some(_) => Err(Error::InvalidConfig("--threads must be positive".into())),
        None => body(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
