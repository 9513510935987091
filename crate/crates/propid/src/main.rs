use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use propid::commands::{self, Output};
use propid::report::Format;
use propid::Failure;

#[derive(Parser)]
#[command(name = "propid", version, about = "Minimum excitation design and data-driven property identification")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Include intermediate matrices in reports.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum input section for a property.
    Design {
        #[arg(long)]
        property: PathBuf,
        /// Write the section as an input file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether an input section is sufficiently rich for a property.
    Check {
        #[arg(long)]
        property: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide the property directly from input/feedback data.
    Identify {
        #[arg(long)]
        property: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Recover (A, B) from data with full-rank stacked input.
    Recover {
        #[arg(long)]
        data: PathBuf,
    },
    /// State-feedback gain from data with k = n.
    Gain {
        #[arg(long)]
        data: PathBuf,
    },
    /// Two systems that share the data but disagree on the property.
    Counterexample {
        #[arg(long)]
        property: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write both systems and the shared data as a TOML file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run scenario files end to end.
    Simulate {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
    /// Compare dim(L_P) with n + m for scenario files.
    Bench {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Design { property, out } => commands::design(property, out.as_deref()),
        Command::Check { property, input } => commands::check(property, input),
        Command::Identify { property, data } => commands::identify(property, data, cli.verbose),
        Command::Recover { data } => commands::recover(data),
        Command::Gain { data } => commands::gain(data),
        Command::Counterexample { property, input, seed, out } => {
            commands::counterexample(property, input, *seed, out.as_deref())
        }
        Command::Simulate { scenarios } => {
            let paths: Vec<_> = scenarios.iter().map(PathBuf::as_path).collect();
            commands::simulate(&paths, cli.verbose)
        }
        Command::Bench { scenarios } => {
            let paths: Vec<_> = scenarios.iter().map(PathBuf::as_path).collect();
            commands::bench(&paths)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Csv => Format::Csv,
    };
    match dispatch(&cli).and_then(|out| Ok((out.table.render(format)?, out.code))) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("propid: {e}");
            e.exit_code()
        }
    }
}
