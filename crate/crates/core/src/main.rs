use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use discrete_tops::euler_lagrange::{LagrangeParams, DEFAULT_TOL};
use discrete_tops::harness::{
    convergence_study, drift_report, estimate_period, reversal_test, run, Model, Params, RunConfig,
    Scheme, DEFAULT_STRIDE,
};
use discrete_tops::kowalevski::BranchRule;
use discrete_tops::models::{BodyState, KowalevskiParams, TopParams};
use discrete_tops::{Error, Vec3};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "discrete-tops", version, about = "Discrete-time integrators for the Euler, Lagrange and Kowalevski tops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate and write the sampled trajectory as CSV.
    Run(RunArgs),
    /// Forward/backward round trip over `--steps` steps; prints the max-norm return error.
    Reverse(RunArgs),
    /// Observed order against the fourth-order reference.
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated step sizes, at least three.
        #[arg(long, value_delimiter = ',', required = true)]
        h_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
    },
    /// Dominant oscillation period of one output column.
    Period {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "g3")]
        column: String,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value = "kowalevski")]
    model: String,
    #[arg(long, default_value = "hk")]
    scheme: String,
    #[arg(long, default_value_t = 0.001, allow_negative_numbers = true)]
    h: f64,
    #[arg(long, default_value_t = 50_000)]
    steps: u64,
    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: u64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c0: f64,
    /// ω₁,ω₂,ω₃,γ₁,γ₂,γ₃ (or m,a for the Lagrange model).
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    /// A,B,C
    #[arg(long)]
    inertia: Option<String>,
    /// x0,y0,z0 with mg = 1
    #[arg(long, allow_hyphen_values = true)]
    gravity: Option<String>,
    /// Lagrange vertical vector.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, default_value = "arg-sign")]
    branch: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fixed-point tolerance of the symmetric Euler scheme.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Use ωⁿ⁺¹ in the Euler BS step (implicit).
    #[arg(long)]
    bs_next_omega: bool,
    /// Recompute ω₃ from the re-solved γ in the hybrid scheme.
    #[arg(long)]
    refresh_omega3: bool,
}

fn parse_reals<const N: usize>(flag: &str, text: &str) -> Result<[f64; N], Error> {
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::Config(format!("--{flag}: {e}")))?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| Error::Config(format!("--{flag} expects {N} values, got {}", v.len())))
}

fn parse_vec3(flag: &str, text: &str) -> Result<Vec3, Error> {
    parse_reals::<3>(flag, text).map(Vec3::from_array)
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let model: Model = self.model.parse()?;
        let scheme: Scheme = self.scheme.parse()?;
        let init = self.init.as_deref().map(|t| parse_reals::<6>("init", t)).transpose()?;
        let inertia = self.inertia.as_deref().map(|t| parse_vec3("inertia", t)).transpose()?;
        let gravity = self.gravity.as_deref().map(|t| parse_vec3("gravity", t)).transpose()?;
        let require_init = || init.ok_or_else(|| Error::Config(format!("--init is required for model `{model}`")));
        let require_inertia = || {
            inertia.ok_or_else(|| Error::Config(format!("--inertia is required for model `{model}`")))
        };

        let (params, init) = match model {
            Model::Kowalevski => {
                if inertia.is_some() || gravity.is_some() {
                    return Err(Error::Config(
                        "the Kowalevski model fixes A=B=2, C=1 and takes only --c0".into(),
                    ));
                }
                let init = init.unwrap_or_else(|| BodyState::yoshida().to_array());
                (Params::Kowalevski(KowalevskiParams::new(self.c0)), init)
            }
            Model::Euler => {
                let i = require_inertia()?;
                let g = gravity.unwrap_or(Vec3::ZERO);
                (Params::Top(TopParams::new(i.x, i.y, i.z, g)), require_init()?)
            }
            Model::General => {
                let i = require_inertia()?;
                let g = gravity.unwrap_or(Vec3::ZERO);
                (Params::Top(TopParams::new(i.x, i.y, i.z, g)), require_init()?)
            }
            Model::Lagrange => {
                let p = match &self.p {
                    Some(t) => parse_vec3("p", t)?,
                    None => LagrangeParams::default().p,
                };
                (Params::Lagrange(LagrangeParams { p }), require_init()?)
            }
        };

        let config = RunConfig {
            model,
            scheme,
            h: self.h,
            steps: self.steps,
            stride: self.stride,
            params,
            init,
            branch_rule: self.branch.parse::<BranchRule>()?,
            symmetric_tol: self.tol,
            bs_next_omega: self.bs_next_omega,
            refresh_omega3: self.refresh_omega3,
            out_path: self.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => {
            let config = args.config()?;
            let traj = run(&config)?;
            traj.write_csv(output(&config.out_path)?)?;
            for e in drift_report(&traj)?.entries {
                eprintln!(
                    "{:>9}: initial {:.16e}  min {:.16e}  max {:.16e}  max|dev| {:.3e}",
                    e.name, e.initial, e.min, e.max, e.max_abs_deviation
                );
            }
        }
        Command::Reverse(args) => {
            let config = args.config()?;
            let err = reversal_test(&config, config.steps)?;
            let mut out = output(&config.out_path)?;
            writeln!(out, "scheme,steps,h,return_error")?;
            writeln!(out, "{},{},{:.16e},{:.16e}", config.scheme, config.steps, config.h, err)?;
        }
        Command::Converge { run, h_list, t_end } => {
            let config = run.config()?;
            let table = convergence_study(&config, &h_list, t_end)?;
            let mut out = output(&config.out_path)?;
            writeln!(out, "h,steps,error,order")?;
            for (i, row) in table.rows.iter().enumerate() {
                let order = match i {
                    0 => String::new(),
                    _ => format!("{:.6}", table.orders[i - 1]),
                };
                writeln!(out, "{:.16e},{},{:.16e},{}", row.h, row.steps, row.error, order)?;
            }
        }
        Command::Period { run: args, column } => {
            let config = args.config()?;
            let traj = run(&config)?;
            let series = traj
                .column(&column)
                .ok_or_else(|| Error::Config(format!("unknown column `{column}`")))?;
            let period = estimate_period(&series, config.h * config.stride as f64)?;
            let mut out = output(&config.out_path)?;
            writeln!(out, "column,period")?;
            writeln!(out, "{column},{period:.16e}")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::from(EXIT_CONFIG)
            }
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
