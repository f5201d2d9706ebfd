//! `resonances`: spectra, diagnostics, and figure reproduction for the
//! Anosov torus maps driven by Blaschke factors.
//!
//! Exit codes: 0 on success, 1 when the computed spectrum mismatches the
//! closed form beyond tolerance, 2 on validation failures, 3 on eigensolver
//! non-convergence.

mod commands;
mod emit;
mod parse;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "resonances", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute block spectra, match them against the closed-form spectrum,
    /// and emit JSON/CSV/SVG reports.
    Spectrum(SpectrumArgs),
    /// Hilbert-Schmidt norm estimate over a lattice square, with the
    /// per-column decay bound where one is available.
    Hsnorm(HsnormArgs),
    /// Non-compactness diagnostic: column ratios of C_{T_lambda} along n.
    Compactness(CompactnessArgs),
    /// Correlation-decay experiment with seeded generic observables.
    Correlate(CorrelateArgs),
    /// Taylor coefficients of a Blaschke power.
    Coeffs(CoeffsArgs),
    /// Degree level sets D_k as CSV.
    Lattice(LatticeArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Map family: b, t, bk, tk, or tt (composition T_lambda then T_mu).
    #[arg(long, default_value = "b")]
    map: String,
    /// Blaschke parameter lambda: RE, RE+IMi, r@xpi, or r@trad.
    #[arg(long)]
    lambda: String,
    /// Second parameter mu (tt only).
    #[arg(long)]
    mu: Option<String>,
    /// Map order K (bk/tk only).
    #[arg(long, default_value_t = 1)]
    bigk: u32,
}

#[derive(Args)]
struct SpaceArgs {
    /// Weight exponent a > 0.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Anisotropy ratio phi >= 1 (degphi weights).
    #[arg(long, default_value_t = 1.0)]
    phi: f64,
    /// Weight family: deg1, degphi, or symmetric.
    #[arg(long, default_value = "deg1")]
    weights: String,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    space: SpaceArgs,
    /// Lowest block level (defaults to -kmax).
    #[arg(long)]
    kmin: Option<i64>,
    /// Highest block level.
    #[arg(long, default_value_t = 12)]
    kmax: i64,
    /// Modulus floor below which eigenvalues are omitted from reports.
    #[arg(long, default_value_t = 1e-6)]
    floor: f64,
    /// Matching tolerance against the closed-form spectrum.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the spectrum report as JSON.
    #[arg(long)]
    json: Option<std::path::PathBuf>,
    /// Write the spectrum report as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
    /// Write an SVG scatter of computed vs theoretical eigenvalues.
    #[arg(long)]
    svg: Option<std::path::PathBuf>,
    /// Dump the windowed operator matrix in the dense binary layout.
    #[arg(long)]
    dump_matrix: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct HsnormArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    space: SpaceArgs,
    /// Lattice radius: columns with |m|, |n| <= radius.
    #[arg(long, default_value_t = 20)]
    radius: i64,
    /// Ray terms retained per column (0 = choose from the geometric tail).
    #[arg(long, default_value_t = 0)]
    order: usize,
    /// Write per-column ratios as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct CompactnessArgs {
    /// Blaschke parameter lambda (nonzero).
    #[arg(long)]
    lambda: String,
    /// First exponent m >= 1 of the probed columns e_{m,n}.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Probe n = 1..=nmax.
    #[arg(long, default_value_t = 100)]
    nmax: i64,
    #[command(flatten)]
    space: SpaceArgs,
    /// Write (n, ratio) rows as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Number of operator iterations.
    #[arg(long, default_value_t = 20)]
    mmax: usize,
    /// Truncation radius on |m| + |n|.
    #[arg(long, default_value_t = 40)]
    radius: i64,
    /// Ray terms retained per column.
    #[arg(long, default_value_t = 60)]
    order: usize,
    /// Weighted magnitude below which entries are dropped.
    #[arg(long, default_value_t = 1e-16)]
    droptol: f64,
    /// Seed for the generic observable pair.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fit window lower end (defaults to mmax/4).
    #[arg(long)]
    wlo: Option<usize>,
    /// Fit window upper end (defaults to mmax).
    #[arg(long)]
    whi: Option<usize>,
    /// Write per-step correlation rows as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    /// Blaschke parameter lambda.
    #[arg(long)]
    lambda: String,
    /// Power p >= 0 of the Blaschke factor.
    #[arg(long)]
    power: u32,
    /// Truncation order K.
    #[arg(long, default_value_t = 50)]
    order: usize,
    /// Write (k, re, im) rows as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long, default_value_t = -6)]
    kmin: i64,
    #[arg(long, default_value_t = 6)]
    kmax: i64,
    /// Write (k, m, n) rows as CSV.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Spectrum(args) => commands::spectrum(args),
        Command::Hsnorm(args) => commands::hsnorm(args),
        Command::Compactness(args) => commands::compactness(args),
        Command::Correlate(args) => commands::correlate(args),
        Command::Coeffs(args) => commands::coeffs(args),
        Command::Lattice(args) => commands::lattice(args),
    };
    match status {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
