use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use osinv_cli::descriptor::load_descriptor;
use osinv_cli::error::CliResult;
use osinv_cli::fit::{fit_column, read_column, write_fit};
use osinv_cli::table::{write_pi1, write_table, Format};
use osinv_cli::verify::{write_verify, Suite};
use osinv_cli::{parse_grid, CliError};

const DEFAULT_GRID: &str = "geometric:16:1048576:9";

#[derive(Parser)]
#[command(name = "osinv", version, about = "Invariants of homogeneous Hilbertian operator spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental functions, exactness, projection and pi1 constants of one space.
    Table {
        /// Inline JSON descriptor or path to a JSON file.
        #[arg(long)]
        space: String,
        /// `geometric:a:b:count` or a comma-separated list of dimensions.
        #[arg(long = "n", default_value = DEFAULT_GRID)]
        n_grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Completely 1-summing norm of the identity between two spaces.
    Pi1 {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        codomain: String,
        #[arg(long = "n", default_value = DEFAULT_GRID)]
        n_grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log slope of one column of a CSV table against n.
    Fit {
        /// CSV table, or `-` for standard input.
        #[arg(long)]
        input: String,
        #[arg(long)]
        column: String,
        /// Fit every row instead of the upper half of the grid.
        #[arg(long)]
        all_points: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the property and oracle checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

fn open_out(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Table { space, n_grid, format, out } => {
            let space = load_descriptor(&space)?;
            let grid = parse_grid(&n_grid)?;
            let mut w = open_out(&out)?;
            write_table(&mut w, &space, &n_grid, &grid, format)?;
            w.flush()?;
        }
        Command::Pi1 { domain, codomain, n_grid, format, out } => {
            let domain = load_descriptor(&domain)?;
            let codomain = load_descriptor(&codomain)?;
            let grid = parse_grid(&n_grid)?;
            let mut w = open_out(&out)?;
            write_pi1(&mut w, &domain, &codomain, &n_grid, &grid, format)?;
            w.flush()?;
        }
        Command::Fit { input, column, all_points, out } => {
            let mut text = String::new();
            if input == "-" {
                io::stdin().read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(&input)
                    .map_err(|e| CliError::Parse(format!("cannot read {input}: {e}")))?;
            }
            let points = read_column(text.as_bytes(), &column)?;
            let fit = fit_column(&points, &column, !all_points)?;
            let mut w = open_out(&out)?;
            write_fit(&mut w, &fit)?;
            w.flush()?;
        }
        Command::Verify { suite } => {
            let mut w = BufWriter::new(io::stdout().lock());
            let result = write_verify(&mut w, suite);
            w.flush()?;
            result?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("osinv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
