mod commands;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sumsq::qseries::Convolution;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "sumsq",
    version,
    about = "Exact r_k(m) and the asymptotic r_n(an+b) ~ B A^n / sqrt(n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of representations of m as a sum of k squares.
    Exact(ExactArgs),
    /// Saddle point y and the constants A, B for (a, b).
    Constants(ConstantsArgs),
    /// Saddle point y only.
    Saddle(SaddleArgs),
    /// Exact r_n(an+b) against B A^n / sqrt(n).
    Table(TableArgs),
    /// Run the oracle and/or quadrature verification suites.
    Verify(VerifyArgs),
    /// Compare r_k(m) from the series against the independent oracles.
    OracleCheck(OracleCheckArgs),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ConvolutionArg {
    #[default]
    Schoolbook,
    Kronecker,
}

impl From<ConvolutionArg> for Convolution {
    fn from(c: ConvolutionArg) -> Self {
        match c {
            ConvolutionArg::Schoolbook => Convolution::Schoolbook,
            ConvolutionArg::Kronecker => Convolution::Kronecker,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Quadrature,
    All,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub m: i64,
    /// Also print the decimal mantissa and exponent.
    #[arg(long)]
    pub logscale: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t)]
    pub convolution: ConvolutionArg,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    pub b: i64,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(64..))]
    pub precision_bits: u64,
    /// Significant digits to print.
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SaddleArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: u64,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(64..))]
    pub precision_bits: u64,
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    pub b: i64,
    /// Comma-separated list of n.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(64..))]
    pub precision_bits: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Emit only `n,ratio` pairs as CSV.
    #[arg(long)]
    pub plot_data: bool,
    #[arg(long, value_enum, default_value_t)]
    pub convolution: ConvolutionArg,
    /// Largest n for which the exact count is computed; larger rows show the estimate only.
    #[arg(long, default_value_t = 2000)]
    pub exact_max: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(64..))]
    pub precision_bits: u64,
}

#[derive(Args, Debug)]
pub struct OracleCheckArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(..=64))]
    pub k: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(..=5000))]
    pub m: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Exact(args) => commands::exact(&args),
        Command::Constants(args) => commands::constants(&args),
        Command::Saddle(args) => commands::saddle(&args),
        Command::Table(args) => commands::table(&args),
        Command::Verify(args) => verify::run(args.suite, args.precision_bits as usize),
        Command::OracleCheck(args) => commands::oracle_check(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
