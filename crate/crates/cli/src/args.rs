//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "salpeter",
    version,
    about = "Upper limits on the number of bound states of the spinless Salpeter equation"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed of every Monte Carlo estimate.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to SALPETER_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `key = value` file with optional `[command]` sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tables of the constants c(l), C(nu, q) and B(n, p, p').
    Constants(ConstantsArgs),
    /// Critical strengths for the appearance of a first bound state.
    Critical(CriticalArgs),
    /// Upper limits on the number of bound states.
    Bound(BoundArgs),
    /// Caps on the largest angular momentum carrying a bound state.
    Lmax(LmaxArgs),
    /// Upper limits on the number of states below an energy.
    BelowEnergy(BelowEnergyArgs),
    /// Recompute a reference table and compare cell by cell.
    Table(TableArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Critical(_) => "critical",
            Command::Bound(_) => "bound",
            Command::Lmax(_) => "lmax",
            Command::BelowEnergy(_) => "below-energy",
            Command::Table(_) => "table",
        }
    }
}

pub const COMMANDS: [&str; 6] = ["constants", "critical", "bound", "lmax", "below-energy", "table"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    /// -(g/R) exp(-r/R)
    Exp,
    /// -(g/R) / cosh^2(r/R)
    Pt,
    /// -V0 on [R1, R2]
    Sqw,
    /// k^3 r^2
    Osc,
    /// Two-column file `r V(r)`, multiplied by g.
    Tab,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum)]
    pub potential: PotentialKind,
    /// Strength list: g for exp and pt, V0 for sqw, k for osc, a multiplier for tab.
    #[arg(long, visible_aliases = ["v0", "k"], default_value = "1")]
    pub g: String,
    #[arg(long, default_value_t = 0.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r2: f64,
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// 1 for one-body, 2 for two equal masses; defaults to 1 for osc, else 2.
    #[arg(long)]
    pub alpha: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantKind {
    #[value(name = "c_ell")]
    CEll,
    #[value(name = "c_nu_q")]
    CNuQ,
    #[value(name = "b_npp")]
    BNpp,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(value_enum)]
    pub which: ConstantKind,
    /// c(l) for l = 1..=lmax.
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Explicit list of l for c(l), e.g. `1..20,30,40`.
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long, default_value = "0..10")]
    pub nu: String,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 2)]
    pub alpha: u8,
    #[arg(long, default_value_t = 5)]
    pub n: u32,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// `inf` selects the supremum norm.
    #[arg(long, default_value = "3")]
    pub pp: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriticalMethod {
    Trace,
    ExistenceP,
    ExistenceMax,
    Daubechies,
    Exact,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[arg(long, value_enum)]
    pub method: CriticalMethod,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value = "0")]
    pub l: String,
    /// beta = m R; `--m` is accepted since R = 1.
    #[arg(long, visible_alias = "m", default_value = "0")]
    pub beta: String,
    /// Target relative accuracy; 1e-3 for exact, 1e-8 for trace quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundMethodArg {
    TraceLwave,
    TraceTotal,
    HolderLwave,
    HolderTotal,
    CentralUr,
    Daubechies,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub method: BoundMethodArg,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value = "0")]
    pub l: String,
    #[arg(long, visible_alias = "m", default_value = "0")]
    pub beta: String,
    /// Chain length; defaults to 2, 4, 2 and 5 for the trace and Holder methods.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value = "3")]
    pub pp: String,
    #[arg(long, default_value_t = 12)]
    pub nu_max: u32,
    #[arg(long, default_value_t = 1 << 20)]
    pub samples: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LmaxMethod {
    Bound,
    Exact,
}

#[derive(Debug, Clone, Args)]
pub struct LmaxArgs {
    #[arg(long, value_enum, default_value_t = LmaxMethod::Bound)]
    pub method: LmaxMethod,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, visible_alias = "m", default_value_t = 0.0)]
    pub beta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BelowEnergyArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value = "0")]
    pub l: String,
    #[arg(long, visible_alias = "m", default_value = "0")]
    pub beta: String,
    /// List of kappa^2, or `auto-airy:N` for the first N oscillator levels.
    #[arg(long)]
    pub kappa2: String,
    /// Add the exact count from the variational solver.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "s5")]
    S5,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub which: TableKind,
}
