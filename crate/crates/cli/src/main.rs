use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grathz_core::config::make_grid;
use grathz_core::scenario::scenarios_table;
use grathz_core::sweep::{render_output, write_output};
use grathz_core::{
    parse_config, run_sweep, Error, OutputFormat, ParamValue, Parameter,
    PresetGeometry, SweepSpec, Target,
};

/// Graphene plasmonic THz antenna sweeps.
///
/// Exit status: 0 when every row succeeded, 2 when any row failed,
/// 1 on usage or configuration errors.
#[derive(Parser, Debug)]
#[command(name = "grathz", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent and the config names none.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Root-finder relative tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Plot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sheet conductivity and impedance.
    Conductivity(TargetArgs),
    /// Fundamental plasmon mode, traced over frequency.
    Dispersion(TargetArgs),
    /// Stack figures of merit (G, H1G, H2G or custom).
    Stack(TargetArgs),
    /// Dipole resonance frequency and efficiency ordering.
    Antenna(TargetArgs),
    /// Footprint check against an application scenario.
    Scenario(TargetArgs),
    /// Run a configuration file as-is.
    Sweep,
    /// Print preset stack geometry and scenario requirements.
    Presets,
}

#[derive(Args, Debug)]
struct TargetArgs {
    /// Swept variable: `name=start:stop:points` or `name=v1,v2,...`.
    #[arg(long)]
    grid: Option<String>,
    /// Logarithmic spacing for a `start:stop:points` grid.
    #[arg(long)]
    log: bool,
    /// Series variable: `name=v1,v2,...`.
    #[arg(long)]
    series: Option<String>,
    /// Fixed parameter `name=value`; repeatable.
    #[arg(long = "set")]
    set: Vec<String>,
}

fn split_assignment(s: &str) -> Result<(Parameter, &str), Error> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("expected name=value, got `{s}`")))?;
    Ok((name.trim().parse()?, value.trim()))
}

fn parse_number(s: &str) -> Result<f64, Error> {
    s.parse()
        .map_err(|_| Error::InvalidInput(format!("`{s}` is not a number")))
}

fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',').map(|v| parse_number(v.trim())).collect()
}

fn parse_grid(s: &str, log: bool) -> Result<(Parameter, Vec<f64>), Error> {
    let (p, value) = split_assignment(s)?;
    let parts: Vec<&str> = value.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, points] => {
            let points: usize = points
                .parse()
                .map_err(|_| Error::InvalidInput(format!("`{points}` is not a point count")))?;
            make_grid(parse_number(start)?, parse_number(stop)?, points, log)?
        }
        [_] => parse_list(value)?,
        _ => return Err(Error::InvalidInput(format!("bad grid `{value}`"))),
    };
    Ok((p, grid))
}

fn spec_from_args(target: Target, base: Option<SweepSpec>, args: &TargetArgs) -> Result<SweepSpec, Error> {
    let mut spec = match (base, &args.grid) {
        (Some(mut spec), grid) => {
            if spec.target != target {
                return Err(Error::InvalidInput(format!(
                    "config target is {}, subcommand is {target}",
                    spec.target
                )));
            }
            if let Some(g) = grid {
                let (p, values) = parse_grid(g, args.log)?;
                spec.variable = p;
                spec.grid = values;
            }
            spec
        }
        (None, Some(g)) => {
            let (p, values) = parse_grid(g, args.log)?;
            SweepSpec::new(target, p, values)
        }
        (None, None) => return Err(Error::InvalidInput("--grid is required without --config".into())),
    };
    if let Some(s) = &args.series {
        let (p, value) = split_assignment(s)?;
        spec.series = Some((p, parse_list(value)?));
    }
    for s in &args.set {
        let (p, value) = split_assignment(s)?;
        let v = if p.is_text() {
            ParamValue::Text(value.to_string())
        } else {
            ParamValue::Number(parse_number(value)?)
        };
        spec.fixed.insert(p, v);
    }
    // Drop defaults or config values now superseded by the grid or series.
    spec.fixed.remove(&spec.variable);
    if let Some((p, _)) = &spec.series {
        spec.fixed.remove(p);
    }
    Ok(spec)
}

fn print_presets() {
    let g = PresetGeometry::default();
    println!("# stack presets (layers listed top to bottom)");
    println!("G    cover eps={} | sheet | substrate eps={}", g.cover_permittivity, g.lim_permittivity);
    println!(
        "H1G  cover eps={} | sheet | film eps={} d={:e} m | substrate eps={}",
        g.cover_permittivity, g.him_permittivity, g.h1g_him_thickness, g.lim_permittivity
    );
    println!(
        "H2G  cover eps={} | film eps={} d={:e} m | sheet | film eps={} d={:e} m | substrate eps={}",
        g.cover_permittivity,
        g.him_permittivity,
        g.h2g_him_thickness,
        g.him_permittivity,
        g.h2g_him_thickness,
        g.lim_permittivity
    );
    println!();
    println!("# scenario requirements");
    print!("{}", scenarios_table().to_csv_string());
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Some(parse_config(&text)?)
        }
        None => None,
    };
    let target = match &cli.command {
        Command::Presets => {
            print_presets();
            return Ok(ExitCode::SUCCESS);
        }
        Command::Sweep => None,
        Command::Conductivity(_) => Some(Target::Conductivity),
        Command::Dispersion(_) => Some(Target::Dispersion),
        Command::Stack(_) => Some(Target::Stack),
        Command::Antenna(_) => Some(Target::Antenna),
        Command::Scenario(_) => Some(Target::Scenario),
    };
    let mut spec = match (&cli.command, target) {
        (Command::Conductivity(a)
        | Command::Dispersion(a)
        | Command::Stack(a)
        | Command::Antenna(a)
        | Command::Scenario(a), Some(t)) => spec_from_args(t, base, a)?,
        _ => base.ok_or_else(|| Error::InvalidInput("sweep needs --config".into()))?,
    };
    if let Some(t) = cli.tolerance {
        spec.solver.tolerance = t;
    }
    if let Some(n) = cli.max_iter {
        spec.solver.max_iterations = n;
    }
    if let Some(f) = cli.format {
        spec.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Plot => OutputFormat::Plot,
        };
    }
    if cli.out.is_some() {
        spec.output = cli.out.clone();
    }
    let spec = spec.validate()?;

    let table = run_sweep(&spec)?;
    match &spec.output {
        Some(path) => write_output(&spec, &table, path)?,
        None => print!("{}", render_output(&spec, &table)?),
    }
    let failed = table.failed_rows();
    if !cli.quiet {
        eprintln!("{} rows, {} failed", table.len(), failed);
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
