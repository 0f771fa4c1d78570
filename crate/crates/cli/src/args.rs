use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "vcgroups",
    version,
    about = "Exact VC-dimension of translate families over finite groups",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Base seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Trials per group order
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,

    /// Write results here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// VC-dimension of one family over one group
    Vcdim(VcdimArgs),
    /// Monte Carlo VC-dimension of random subsets across group orders
    Sample(SampleArgs),
    /// Estimate the probability that K is not cut out of U by a random set
    Cutout(CutoutArgs),
    /// VC-dimension or adjacency list of the Paley digraph on Z/nZ
    Paley(PaleyArgs),
    /// VC-dimension of r-th power residue Cayley digraphs over primes
    Residue(ResidueArgs),
    /// Greedy pairwise disjoint left translates of U
    Tile(TileArgs),
    /// Greedy cover of the group by right translates of S
    Cover(CoverArgs),
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// Group descriptor such as C12, D5 or C3xC4
    #[arg(long, value_name = "DESC", required_unless_present = "table", conflicts_with = "table")]
    pub group: Option<String>,

    /// Cayley table file: the order, then one row of products per line
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Abort a VC search after this many nodes
    #[arg(long, value_name = "NODES", default_value_t = 100_000_000)]
    pub node_budget: u64,

    /// Wall-clock limit in seconds for the whole run; trials past it fail
    #[arg(long, value_name = "SECS")]
    pub time_limit: Option<f64>,

    /// Wall-clock limit in seconds for each VC search
    #[arg(long, value_name = "SECS")]
    pub trial_time_limit: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Left translates tA
    Translates,
    /// tA ∩ A for t in A·A⁻¹
    Sisask,
    /// Neighborhoods of the Cayley sum graph (abelian groups)
    SumGraph,
    /// Closed neighborhoods of the Cayley digraph
    Closed,
}

#[derive(Args, Debug)]
pub struct VcdimArgs {
    #[command(flatten)]
    pub group: GroupArgs,

    /// Generating set as hex bits, element 0 lowest
    #[arg(long, value_name = "HEX", conflicts_with = "p")]
    pub set: Option<String>,

    /// Sample the set with this inclusion probability instead
    #[arg(long, value_parser = open_probability)]
    pub p: Option<f64>,

    /// Set system to measure
    #[arg(long, value_enum, default_value_t = FamilyArg::Translates)]
    pub family: FamilyArg,

    /// Cross-check against exhaustive enumeration (N <= 24)
    #[arg(long)]
    pub naive: bool,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupFamilyArg {
    /// Cyclic group of order N
    #[value(name = "C", alias = "c")]
    C,
    /// Dihedral group of order N
    #[value(name = "D", alias = "d")]
    D,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Each element independently with probability p
    Bernoulli,
    /// Uniform subset of size round(pN)
    FixedSize,
    /// Uniform subset of size round(pN) joined with its inverses
    FixedSizeSymmetric,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Group family indexed by order
    #[arg(long, value_enum)]
    pub group: GroupFamilyArg,

    /// Comma-separated group orders
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub sizes: Vec<usize>,

    /// Inclusion probability
    #[arg(long, value_parser = open_probability)]
    pub p: f64,

    /// Random subset model
    #[arg(long, value_enum, default_value_t = ModelArg::Bernoulli)]
    pub model: ModelArg,

    /// Also write per-order summaries to this path
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct CutoutArgs {
    #[command(flatten)]
    pub group: GroupArgs,

    /// Probe set U as hex bits
    #[arg(long, value_name = "HEX")]
    pub u: String,

    /// Target K ⊆ U as hex bits
    #[arg(long, value_name = "HEX")]
    pub k: String,

    /// Inclusion probability
    #[arg(long, value_parser = open_probability)]
    pub p: f64,
}

#[derive(Args, Debug)]
pub struct PaleyArgs {
    /// Prime modulus
    #[arg(long)]
    pub n: u64,

    /// Print the adjacency list instead of the VC-dimension record
    #[arg(long)]
    pub adjacency: bool,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    /// Power r >= 2
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub r: u64,

    /// Primes as a list (5,7,11) or a range of which primes are taken (a..b, a..=b)
    #[arg(long, value_name = "LIST|RANGE")]
    pub primes: String,

    /// Reject primes not congruent to 1 mod r
    #[arg(long)]
    pub congruent: bool,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct TileArgs {
    #[command(flatten)]
    pub group: GroupArgs,

    /// Probe set U as hex bits
    #[arg(long, value_name = "HEX")]
    pub u: String,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    pub group: GroupArgs,

    /// Set S to translate, as hex bits
    #[arg(long, value_name = "HEX", required_unless_present = "shortcut")]
    pub s: Option<String>,

    /// Cover with the packing of U and T = (UU⁻¹)⁻¹ instead (abelian groups)
    #[arg(long, value_name = "HEX", conflicts_with = "s")]
    pub shortcut: Option<String>,
}

fn open_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(format!("{p} is outside (0, 1)"))
    }
}
