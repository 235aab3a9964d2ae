//! `csc`: command-line front end for the convolutional sparse coding toolkit.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/format error, 4 solver
//! failure.

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use commands::*;
use csc_core::CscError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Command failure classified for the exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Solver(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// Wrap an error raised while solving; everything at that stage exits 4.
    pub fn solver(e: CscError) -> Self {
        CliError::Solver(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<CscError> for CliError {
    fn from(e: CscError) -> Self {
        match e {
            CscError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            CscError::IllConditioned(_) => CliError::Solver(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

fn parse_block(s: &str) -> Result<(usize, usize), String> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected HxW, got {s:?}"))?;
    let parse = |t: &str| {
        t.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| format!("bad block dimension {t:?}"))
    };
    Ok((parse(h)?, parse(w)?))
}

#[derive(Parser)]
#[command(
    name = "csc",
    version,
    about = "Convolutional sparse coding: denoising, benchmarks, diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add seeded Gaussian white noise to an image
    Addnoise {
        /// Input image (CIMG1 or PGM)
        input: PathBuf,
        /// Output noisy image (CIMG1 unless the extension is .pgm)
        output: PathBuf,
        /// Noise standard deviation
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        /// PRNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 8-bit preview path (default: output with .pgm extension)
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Denoise an image by convolutional sparse coding or patch OMP
    Denoise {
        /// Noisy input image
        input: PathBuf,
        /// CDICT1 dictionary file
        #[arg(long)]
        dict: PathBuf,
        /// Denoised output image
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Penalty parameter (scientific notation accepted)
        #[arg(long)]
        lambda: Option<f64>,
        /// Search lambda over a log-spaced grid (requires --reference)
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 16)]
        grid_count: usize,
        /// Grid lower bound at sigma = 0.05; scaled by sigma/0.05
        #[arg(long, default_value_t = 1e-2)]
        grid_lo: f64,
        /// Grid upper bound at sigma = 0.05; scaled by sigma/0.05
        #[arg(long, default_value_t = 1.0)]
        grid_hi: f64,
        /// Clean reference image for PSNR scoring
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Noise level (grid scaling and the OMP stopping rule)
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = WeightingArg::None)]
        weighting: WeightingArg,
        /// Activity measure behind group weights
        #[arg(long, value_enum, default_value_t = ActivityArg::Analysis)]
        activity: ActivityArg,
        /// Mixed-norm algorithm
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Nonneg)]
        algorithm: AlgorithmArg,
        /// Tikhonov lowpass regularization
        #[arg(long, default_value_t = 2.0)]
        lowpass_lambda: f64,
        /// Override the solver iteration cap
        #[arg(long)]
        max_iter: Option<usize>,
        /// Override the ADMM penalty parameter rho
        #[arg(long)]
        rho: Option<f64>,
        /// Override the splitting scale alpha0 (alpha1 defaults to 1/alpha0)
        #[arg(long)]
        alpha0: Option<f64>,
        /// Override the splitting scale alpha1
        #[arg(long)]
        alpha1: Option<f64>,
        /// Metrics CSV path (default: output with .metrics.csv extension)
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Run a methods-by-images denoising benchmark
    Benchmark {
        /// Clean reference images
        #[arg(long, required = true, num_args = 1..)]
        images: Vec<PathBuf>,
        #[arg(long)]
        dict: PathBuf,
        /// Method tokens: l1, l1w, l1inf, l1infw, l12, l12w, omp
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        methods: Vec<String>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        grid_count: usize,
        #[arg(long, default_value_t = 1e-2)]
        grid_lo: f64,
        #[arg(long, default_value_t = 1.0)]
        grid_hi: f64,
        /// Block size for the error diagnostics, as HxW
        #[arg(long, default_value = "8x8", value_parser = parse_block)]
        block: (usize, usize),
        #[arg(long, default_value_t = 2.0)]
        lowpass_lambda: f64,
    },
    /// Block-error scatter between a reference and a test image
    Blockerr {
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Output CSV
        #[arg(short, long)]
        output: PathBuf,
        /// Optional SVG scatter plot
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value = "8x8", value_parser = parse_block)]
        block: (usize, usize),
        /// Label recorded in the method column
        #[arg(long, default_value = "test")]
        method: String,
        #[arg(long, default_value_t = 2.0)]
        lowpass_lambda: f64,
    },
    /// Print dictionary metadata
    Dictinfo { dict: PathBuf },
    /// Print the PSNR between two images
    Psnr { reference: PathBuf, test: PathBuf },
    /// Convert between CIMG1 and PGM (by output extension)
    Convert { input: PathBuf, output: PathBuf },
}

fn run(cli: Cli, argv: &[String]) -> CliResult<()> {
    match cli.command {
        Command::Addnoise {
            input,
            output,
            sigma,
            seed,
            preview,
        } => cmd_addnoise(
            &AddNoiseArgs {
                input,
                output,
                preview,
                sigma,
                seed,
            },
            argv,
        ),
        Command::Denoise {
            input,
            dict,
            output,
            method,
            lambda,
            grid,
            grid_count,
            grid_lo,
            grid_hi,
            reference,
            sigma,
            weighting,
            activity,
            algorithm,
            lowpass_lambda,
            max_iter,
            rho,
            alpha0,
            alpha1,
            metrics,
        } => cmd_denoise(
            &DenoiseArgs {
                input,
                dict,
                output,
                method,
                lambda,
                grid,
                grid_count,
                grid_lo,
                grid_hi,
                reference,
                sigma,
                weighting,
                activity,
                algorithm,
                lowpass_lambda,
                max_iter,
                rho,
                alpha0,
                alpha1,
                metrics,
            },
            argv,
        ),
        Command::Benchmark {
            images,
            dict,
            methods,
            out_dir,
            sigma,
            seed,
            grid_count,
            grid_lo,
            grid_hi,
            block,
            lowpass_lambda,
        } => cmd_benchmark(
            &BenchmarkArgs {
                images,
                dict,
                methods,
                out_dir,
                sigma,
                seed,
                grid_count,
                grid_lo,
                grid_hi,
                block,
                lowpass_lambda,
            },
            argv,
        ),
        Command::Blockerr {
            reference,
            test,
            output,
            svg,
            block,
            method,
            lowpass_lambda,
        } => cmd_blockerr(
            &BlockErrArgs {
                reference,
                test,
                output,
                svg,
                block,
                method,
                lowpass_lambda,
            },
            argv,
        ),
        Command::Dictinfo { dict } => cmd_dictinfo(&dict),
        Command::Psnr { reference, test } => cmd_psnr(&reference, &test),
        Command::Convert { input, output } => cmd_convert(&input, &output, argv),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (tag, msg) = match &e {
                CliError::Usage(m) => ("usage", m),
                CliError::Data(m) => ("data", m),
                CliError::Solver(m) => ("solver", m),
            };
            eprintln!("csc: {tag} error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
