use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ribbonfold::evolution::CharacteristicGrid;
use ribbonfold::io::{format_float, load_config, PsiTable};
use ribbonfold::pipeline::{antikink_field, cmd_reconstruct, cmd_simulate, cmd_sweep};
use ribbonfold::ribbon::WidthProfile;
use ribbonfold::soliton::AntikinkParams;
use ribbonfold::validation::{run_all, ValidationOptions};
use ribbonfold::Error;

const VALIDATION_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "ribbonfold", version, about = "Twisting-ribbon folding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline described by a config file.
    Simulate {
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the closed-form antikink field, e.g. `antikink "f=1 a=1 b=0" --grid 10,5,201,101`.
    Antikink {
        params: String,
        /// `K,U,n_sigma,n_u`.
        #[arg(long)]
        grid: String,
        /// Width segment `sigma_end=<v> f=<v>`; repeat in increasing order.
        /// The first segment's width must equal `f` in the parameters.
        #[arg(long = "segment")]
        segments: Vec<String>,
        #[arg(long, default_value = "psi_field.csv")]
        out: PathBuf,
    },
    /// Rebuild a curve from a shape file and write it as XYZ.
    Reconstruct {
        shapefile: PathBuf,
        #[arg(long, default_value = "curve.xyz")]
        out: PathBuf,
    },
    /// Run the self-check suite; exits with status 4 if any criterion fails.
    Validate {
        #[arg(long, hide = true)]
        inject_perturbation: bool,
    },
    /// Run a config once per value of one key, e.g. `--vary u_max=1,2,4`.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        vary: String,
    },
}

fn parse_grid(s: &str) -> Result<CharacteristicGrid, Error> {
    let bad = || Error::InvalidGrid(format!("expected K,U,n_sigma,n_u, got `{s}`"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let k = parts[0].parse().map_err(|_| bad())?;
    let u = parts[1].parse().map_err(|_| bad())?;
    let ns = parts[2].parse().map_err(|_| bad())?;
    let nu = parts[3].parse().map_err(|_| bad())?;
    CharacteristicGrid::new(k, u, ns, nu)
}

fn parse_segments(segments: &[String], f1: f64) -> Result<Option<WidthProfile>, Error> {
    if segments.is_empty() {
        return Ok(None);
    }
    let (mut ends, mut widths) = (Vec::new(), Vec::new());
    for seg in segments {
        let bad = || Error::InvalidParams(format!("expected `sigma_end=<v> f=<v>`, got `{seg}`"));
        let (mut end, mut f) = (None, None);
        for kv in seg.split_whitespace() {
            match kv.split_once('=').ok_or_else(bad)? {
                ("sigma_end", v) => end = Some(v.parse::<f64>().map_err(|_| bad())?),
                ("f", v) => f = Some(v.parse::<f64>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        ends.push(end.ok_or_else(bad)?);
        widths.push(f.ok_or_else(bad)?);
    }
    if widths[0] != f1 {
        return Err(Error::InvalidParams(format!(
            "first segment has f={} but the antikink has f={f1}",
            widths[0]
        )));
    }
    WidthProfile::piecewise(ends, widths).map(Some)
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Simulate { config, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let sim = cmd_simulate(&cfg)?;
            print!("{}", sim.summary());
            println!("output_dir = {}", cfg.output_dir.display());
        }
        Command::Antikink {
            params,
            grid,
            segments,
            out,
        } => {
            let params: AntikinkParams = params.parse()?;
            let grid = parse_grid(&grid)?;
            let width = parse_segments(&segments, params.f)?;
            let (field, pw) = antikink_field(&params, grid, width.as_ref())?;
            std::fs::write(&out, PsiTable::from_field(&field).to_csv())?;
            match pw {
                Some(pw) => {
                    for (n, seg) in pw.segments().iter().enumerate() {
                        println!(
                            "segment {}: sigma in ({}, {}] f={} a={} b={}",
                            n + 1,
                            seg.start,
                            seg.end,
                            seg.params.f,
                            seg.params.a,
                            seg.params.b
                        );
                    }
                }
                None => println!("{params}"),
            }
            println!("wrote {}", out.display());
        }
        Command::Reconstruct { shapefile, out } => {
            let rec = cmd_reconstruct(&shapefile)?;
            std::fs::write(&out, rec.to_xyz())?;
            let end = rec.curve.frames().last().expect("non-empty").position;
            println!("nodes = {}", rec.curve.len());
            println!(
                "end_point = {} {} {}",
                format_float(end.x),
                format_float(end.y),
                format_float(end.z)
            );
            println!("max_frame_error = {}", format_float(rec.curve.max_frame_error()));
            println!("kappa_reestimate_error = {}", format_float(rec.kappa_error));
            println!("tau_reestimate_error = {}", format_float(rec.tau_error));
            println!("wrote {}", out.display());
        }
        Command::Validate { inject_perturbation } => {
            let report = run_all(ValidationOptions { inject_perturbation });
            println!("{report}");
            if !report.all_passed() {
                return Ok(VALIDATION_FAILED);
            }
        }
        Command::Sweep { config, vary } => {
            let (key, values) = vary.split_once('=').ok_or_else(|| {
                Error::ConfigValidation(format!("--vary expects key=v1,v2,..., got `{vary}`"))
            })?;
            let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
            let mut status = 0;
            for run in cmd_sweep(&config, key.trim(), &values)? {
                match run.result {
                    Ok(sim) => {
                        let contact = sim
                            .outcome
                            .contact
                            .map_or("none".to_string(), |c| c.slice.to_string());
                        println!(
                            "{}={}: contact = {contact}, output_dir = {}",
                            key.trim(),
                            run.value,
                            run.output_dir.display()
                        );
                    }
                    Err(e) => {
                        eprintln!("{}={}: error: {e}", key.trim(), run.value);
                        status = status.max(e.exit_code() as u8);
                    }
                }
            }
            return Ok(status);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
