use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use d2d_adc::adc_search::decremental_search;
use d2d_adc::config::SystemConfig;
use d2d_adc::harness::plot::sweep_svg;
use d2d_adc::harness::sweep::budget_table_text;
use d2d_adc::harness::{budget_table, monte_carlo_sweep, SweepAxis, SweepReport};
use d2d_adc::Error;

#[derive(Parser)]
#[command(
    name = "d2d-adc",
    version,
    about = "D2D-underlay allocation with mixed-resolution ADCs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Monte-Carlo drops per point (overrides the file).
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed (overrides the file).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV and SVG files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and compare 4SA with random allocation.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// speed | J | N_R | p0
        #[arg(long)]
        axis: String,
        /// Comma-separated values; fractions like 1/64 are accepted.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
    },
    /// Mean 4SA sum-rate for every (antenna count, budget) combination.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        nr_values: Vec<usize>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "4,2,1,1/2,1/4,1/8,1/16,1/32,1/64"
        )]
        j_values: Vec<String>,
    },
    /// Run the resolution-profile search alone.
    AdcSearch {
        #[arg(long)]
        nr: usize,
        #[arg(long)]
        bmax: u32,
        #[arg(long)]
        c0: f64,
        #[arg(long, default_value_t = 0.0)]
        c1: f64,
        #[arg(long)]
        budget: f64,
        /// Accepted for uniformity; the search is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_value(text: &str) -> Result<f64, Error> {
    let bad = || Error::Config(format!("cannot parse '{text}' as a number"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            Ok(num / den)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

fn load_config(common: &Common) -> Result<SystemConfig, Error> {
    let mut config = match &common.config {
        Some(path) => SystemConfig::load(path)?,
        None => SystemConfig::default(),
    };
    if let Some(t) = common.trials {
        config.trials = t;
    }
    if let Some(s) = common.seed {
        config.seed = s;
    }
    config.validate()?;
    Ok(config)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_report(dir: &Path, stem: &str, report: &SweepReport) -> Result<(), Error> {
    write_file(&dir.join(format!("{stem}.csv")), &report.to_csv())?;
    write_file(&dir.join(format!("{stem}.svg")), &sweep_svg(report))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate {
            common,
            axis,
            values,
        } => {
            let config = load_config(&common)?;
            let axis: SweepAxis = axis.parse()?;
            let values = values
                .iter()
                .map(|v| parse_value(v))
                .collect::<Result<Vec<_>, _>>()?;
            let report = monte_carlo_sweep(&config, axis, &values)?;
            fs::create_dir_all(&common.out)
                .map_err(|e| Error::Config(format!("{}: {e}", common.out.display())))?;
            let stem = format!("sweep_{}", axis.name().to_lowercase());
            write_report(&common.out, &stem, &report)?;
            print!("{}", report.to_csv());
        }
        Command::Table {
            common,
            nr_values,
            j_values,
        } => {
            let config = load_config(&common)?;
            let budgets = j_values
                .iter()
                .map(|v| parse_value(v))
                .collect::<Result<Vec<_>, _>>()?;
            let table = budget_table(&config, &nr_values, &budgets)?;
            fs::create_dir_all(&common.out)
                .map_err(|e| Error::Config(format!("{}: {e}", common.out.display())))?;
            for (nr, report) in &table {
                write_report(&common.out, &format!("table_nr{nr}"), report)?;
            }
            let text = budget_table_text(&table);
            write_file(&common.out.join("table.txt"), &text)?;
            print!("{text}");
        }
        Command::AdcSearch {
            nr,
            bmax,
            c0,
            c1,
            budget,
            seed: _,
        } => {
            let profile = decremental_search(nr, bmax, c0, c1, budget)?;
            let psi = profile.psi_stats();
            println!("profile {profile}");
            println!("energy {}", profile.bs_energy(c0, c1));
            println!("psi1 {}", psi.psi1);
            println!("psi2 {}", psi.psi2);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Infeasible(_) => ExitCode::from(3),
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
