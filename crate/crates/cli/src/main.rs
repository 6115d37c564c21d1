use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dem_cli::compare::{compare_oracle, parse_oracle_spec};
use dem_cli::config::{apply_overrides, parse_config, CliConfig};
use dem_cli::presets::{preset, NAMES};
use dem_cli::snapshot::SnapshotTable;
use dem_cli::{CliError, Result};
use dem_core::regime::RegimePolicy;
use dem_core::riemann::exact_rp;
use dem_core::scheme::run;
use dem_core::{EosParams, Primitive};

#[derive(Parser)]
#[command(name = "dem1d", version, about = "One-dimensional two-phase DEM shock-tube solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file.
    Run {
        config: PathBuf,
        /// Override a configuration key, e.g. `--override n_cells=500`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run one of the built-in experiments.
    Preset {
        /// One of t1_uniform_vf, t2_relaxed, t3_pure_phases, t4_cavitation, t5_piecewise_r, t6_dense_to_dilute.
        name: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Solve one Riemann problem exactly. States are `rho,u,p,gamma,pi`.
    Riemann {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        /// Comma-separated values of x/t at which to sample the solution.
        #[arg(long, allow_hyphen_values = true)]
        sample: Option<String>,
    },
    /// Error norms of a snapshot against an exact solution, e.g. `per-phase:t1_uniform_vf`.
    Compare { snapshot: PathBuf, oracle: String },
    /// Repeat a run for several constant regime values.
    SweepR {
        config: PathBuf,
        /// Comma-separated r values.
        #[arg(long)]
        values: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("`{x}` is not a number"))))
        .collect()
}

fn load(path: &Path, overrides: &[String]) -> Result<CliConfig> {
    let mut cfg = parse_config(&std::fs::read_to_string(path)?)?;
    apply_overrides(&mut cfg, overrides)?;
    Ok(cfg)
}

/// Runs and writes every snapshot to the output directory as
/// `<prefix>snap_NNNN.csv`, or prints the final one to stdout.
fn execute(cfg: &CliConfig, prefix: &str) -> Result<()> {
    let snaps = run(&cfg.run)?;
    match &cfg.output {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (i, s) in snaps.iter().enumerate() {
                let path = dir.join(format!("{prefix}snap_{i:04}.csv"));
                SnapshotTable::from_snapshot(s, &cfg.run)?.write(&path)?;
                println!("t={:.6e} -> {}", s.t, path.display());
            }
        }
        None => {
            let last = snaps.last().expect("run always yields the final snapshot");
            print!("{}", SnapshotTable::from_snapshot(last, &cfg.run)?.to_csv());
        }
    }
    Ok(())
}

fn parse_state(s: &str) -> Result<(Primitive, EosParams)> {
    match floats(s)?[..] {
        [rho, u, p, gamma, pi] => Ok((Primitive::new(rho, u, p), EosParams::new(gamma, pi)?)),
        _ => Err(CliError::Usage(format!("state `{s}` must be rho,u,p,gamma,pi"))),
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, overrides } => execute(&load(&config, &overrides)?, ""),
        Command::Preset { name, overrides } => {
            let mut cfg = preset(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`; available: {}", NAMES.join(", "))))?;
            apply_overrides(&mut cfg, &overrides)?;
            execute(&cfg, "")
        }
        Command::Riemann { left, right, sample } => {
            let (l, el) = parse_state(&left)?;
            let (r, er) = parse_state(&right)?;
            let ex = exact_rp(&l, &r, &el, &er)?;
            println!("p_star={:.16e}", ex.p_star);
            println!("u_star={:.16e}", ex.u_star);
            println!("rho_star_left={:.16e}", ex.star_density(true));
            println!("rho_star_right={:.16e}", ex.star_density(false));
            println!("left_wave={:?}", ex.left_wave());
            println!("right_wave={:?}", ex.right_wave());
            if let Some(xs) = sample {
                println!("xi,rho,u,p,material");
                for xi in floats(&xs)? {
                    let (v, left_side) = ex.sample_with_side(xi);
                    let side = if left_side { "left" } else { "right" };
                    println!("{xi:.16e},{:.16e},{:.16e},{:.16e},{side}", v.rho, v.u, v.p);
                }
            }
            Ok(())
        }
        Command::Compare { snapshot, oracle } => {
            let table = SnapshotTable::read(&snapshot)?;
            let (kind, cfg) = parse_oracle_spec(&oracle)?;
            println!("field,l1,l1_relative,linf");
            for e in compare_oracle(&table, kind, &cfg.run)? {
                println!("{},{:.6e},{:.6e},{:.6e}", e.field, e.l1, e.l1_relative, e.linf);
            }
            Ok(())
        }
        Command::SweepR { config, values, overrides } => {
            let base = load(&config, &overrides)?;
            for r in floats(&values)? {
                let mut cfg = base.clone();
                cfg.run.regime = RegimePolicy::Constant(r);
                cfg.run.validate()?;
                if cfg.output.is_none() {
                    println!("# sweep r={r}");
                }
                execute(&cfg, &format!("r{r}_"))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
