use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cvac::commands::{
    abraham_cmd, corr_cmd, encode_rows, encode_verdict, ray2d_cmd, transform_events, transform_worldline,
};
use cvac::formats::{open_input, parse_event, parse_grid, read_map, read_ray_map};
use cvac::{resolve, run_suite, ConfigFile, Format, MapSpec, Overrides, Suite};

#[derive(Parser, Debug)]
#[command(name = "cvac", version, about = "Conformal accelerated frames and vacuum correlation checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Random seed for suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override (suites: every gating check; abraham: classification;
    /// ray2d: Schwarzian threshold).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Regulator ε.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Proper-time finite-difference step.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Output file (suite: directory for one report per suite).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map events or a worldline through a conformal map.
    ///
    /// Input CSV columns: `t,x1,x2,x3` (or `tau,t,x1,x2,x3` with --worldline);
    /// a non-numeric first line is a header, `#` starts a comment.
    /// Output columns: `line,[tau,]t,x1,x2,x3,t_bar,x1_bar,x2_bar,x3_bar,
    /// lambda,singular_residual,[tau_bar,]status`. Rows on a singular set
    /// have status `singular` and empty image columns.
    Transform {
        /// JSON map: {"chain": [...]} or {"alpha": [...], "beta": ...}. Identity if omitted.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Input CSV, `-` for stdin.
        input: Option<PathBuf>,
        #[arg(long)]
        worldline: bool,
    },
    /// Abraham vector along a sampled worldline, optionally after a map.
    ///
    /// Input CSV columns: `tau,t,x1,x2,x3`. Output columns:
    /// `tau,w0,w1,w2,w3,norm,constraint_residual`; the motion class goes to
    /// stderr (CSV) or into the JSON document.
    Abraham {
        #[arg(long)]
        map: Option<PathBuf>,
        input: Option<PathBuf>,
    },
    /// Scalar and field-tensor invariance of the vacuum correlation at one pair.
    Corr {
        #[arg(long)]
        map: PathBuf,
        /// First event `t,x1,x2,x3`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Second event `t,x1,x2,x3`.
        #[arg(long, allow_hyphen_values = true)]
        xp: String,
        /// Field-tensor difference step; 0 skips the field-tensor check.
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Run verification suites; exit status 1 if any fails.
    ///
    /// Per-sample CSV dumps (`--format csv`) have columns `check,index,value`.
    Suite {
        /// Suite names, or `all`.
        #[arg(default_value = "all")]
        names: Vec<String>,
        /// TOML config; command-line flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Homography verdict for a 2D light-cone map.
    Ray2d {
        /// JSON ray map {"f_plus": ..., "f_minus": ...}.
        #[arg(long)]
        map: PathBuf,
        /// Treat the map as a mirror's rest frame and test its scattering map.
        #[arg(long)]
        mirror: bool,
        /// Test grid `start:end:count`.
        #[arg(long, default_value = "-1:1:400", allow_hyphen_values = true)]
        grid: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_map(path: Option<&Path>) -> Result<MapSpec> {
    match path {
        Some(p) => read_map(p),
        None => Ok(MapSpec::identity()),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    let format = g.format.unwrap_or_default();
    let step = g.step.unwrap_or(1e-3);
    match cli.command {
        Command::Transform { map, input, worldline } => {
            let map = load_map(map.as_deref())?;
            let reader = open_input(input.as_deref())?;
            let out = if worldline {
                transform_worldline(&map, reader)?
            } else {
                transform_events(&map, reader)?
            };
            if out.singular > 0 {
                eprintln!("{} row(s) on a singular set", out.singular);
            }
            emit(g.out.as_deref(), &encode_rows(&out.rows, format)?)?;
            Ok(true)
        }
        Command::Abraham { map, input } => {
            let map = match map {
                Some(p) => Some(read_map(&p)?),
                None => None,
            };
            let out = abraham_cmd(map.as_ref(), open_input(input.as_deref())?, step, g.tol)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&out)? + "\n",
                Format::Csv => {
                    eprintln!("class: {}", out.classification.class.label());
                    encode_rows(&out.rows, format)?
                }
            };
            emit(g.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Corr { map, x, xp, h } => {
            let map = read_map(&map)?;
            let r = corr_cmd(&map, parse_event(&x)?, parse_event(&xp)?, g.epsilon.unwrap_or(1e-2), h)?;
            emit(g.out.as_deref(), &r.encode(format)?)?;
            Ok(true)
        }
        Command::Suite { names, config, samples, h } => {
            let suites: Vec<Suite> = if names.iter().any(|n| n == "all") {
                Suite::ALL.to_vec()
            } else {
                names.iter().map(|n| n.parse()).collect::<Result<_>>()?
            };
            let file = config.as_deref().map(ConfigFile::read).transpose()?;
            let cli = Overrides {
                seed: g.seed,
                samples,
                epsilon: g.epsilon,
                h,
                step: g.step,
                tol: g.tol,
                out: g.out.clone(),
                format: g.format,
            };
            let configs = suites
                .iter()
                .map(|s| resolve(*s, file.as_ref(), &cli))
                .collect::<Result<Vec<_>>>()?;
            let reports = std::thread::scope(|scope| {
                let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || run_suite(c))).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("suite thread panicked"))
                    .collect::<Vec<_>>()
            });
            let mut all = true;
            for (c, r) in configs.iter().zip(reports) {
                let r = r.with_context(|| c.suite.to_string())?;
                eprintln!("{} ({:.2} s)", r.summary(), r.wall_time);
                if c.out.is_none() {
                    std::io::stdout().write_all(r.encode(c.format)?.as_bytes())?;
                    println!();
                }
                all &= r.passed;
            }
            Ok(all)
        }
        Command::Ray2d { map, mirror, grid } => {
            let m = read_ray_map(&map)?;
            let grid = parse_grid(&grid)?;
            let threshold = g.tol.unwrap_or(conformal_vacuum::lightcone::SCHWARZIAN_THRESHOLD);
            let v = ray2d_cmd(&m, mirror, &grid, threshold)?;
            emit(g.out.as_deref(), &encode_verdict(&v, format)?)?;
            Ok(true)
        }
    }
}
