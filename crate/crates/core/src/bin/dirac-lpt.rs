use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dirac_lpt::cli::{self, CliError, Format, RunConfig, VerifyOptions};

#[derive(Parser)]
#[command(name = "dirac-lpt", version, about = "Energy series for a Dirac particle in a screened Coulomb field")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Corrections E_k and binding sums for one configuration
    Series {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// The six-column table at z = 74 with shooting energies
    Table1 {
        #[arg(long, default_value_t = 15)]
        order: usize,
        /// Write the JSON artifact here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shooting solution of the radial equations
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the invariant suites
    Verify {
        #[arg(long, default_value_t = 15)]
        order: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Series { config, order, format } => {
            let mut c = RunConfig::load(&config)?;
            if let Some(k) = order {
                c.order = k;
            }
            if let Some(f) = format {
                c.format = f.into();
            }
            cli::run_series(&c)
        }
        Command::Table1 { order, out } => {
            let table = cli::run_table1(order)?;
            if let Some(path) = out {
                std::fs::write(&path, table.to_json())?;
            }
            Ok(table.render())
        }
        Command::Oracle { config, tol } => cli::run_oracle(&RunConfig::load(&config)?, tol),
        Command::Verify {
            order,
            seed,
            inject_fault,
        } => {
            if order > cli::MAX_ORDER {
                return Err(CliError::Config(format!("at `order`: at most {}, got {order}", cli::MAX_ORDER)));
            }
            let opts = VerifyOptions {
                order,
                seed,
                inject_fault,
                ..VerifyOptions::default()
            };
            let reports = cli::run_verify(&opts);
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                Err(CliError::VerifyFailed { failed })
            } else {
                Ok(String::new())
            }
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
