use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "drg", version, about = "Feasibility checks and enumeration for distance-regular graph intersection arrays")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Eigenvalue interval width, e.g. 1/1000000000000 or 1e-12.
    #[arg(long, global = true, value_name = "RATIONAL")]
    pub precision: Option<String>,
    /// Worker threads for enumeration.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Catalog file to use instead of the embedded one.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the feasibility pipeline on one array.
    Check(CheckArgs),
    /// Enumerate arrays under constraints.
    Enumerate(EnumerateArgs),
    /// Reproduce a named classification search and compare with its golden file.
    Reproduce(ReproduceArgs),
    /// Evaluate a closed-form bound.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Query the catalog of known graphs.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Array literal such as "3,2;1,1".
    pub array: String,
    /// full, basic or fast.
    #[arg(long, default_value = "full")]
    pub profile: String,
    /// Skip the catalog lookup.
    #[arg(long)]
    pub no_catalog: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StructuralArg {
    None,
    A1Structure,
    NearPolygon,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub diameter: usize,
    #[arg(long, default_value_t = 2)]
    pub k_min: u64,
    #[arg(long)]
    pub k_max: u64,
    #[arg(long)]
    pub a1: Option<u64>,
    #[arg(long)]
    pub c2_max: Option<u64>,
    /// Keep arrays with theta_min <= -RATIO * k.
    #[arg(long, value_name = "RATIO")]
    pub theta_ratio: Option<String>,
    #[arg(long)]
    pub nonbipartite: bool,
    #[arg(long)]
    pub cd_equals_k: bool,
    #[arg(long, value_enum, default_value = "none")]
    pub structural: StructuralArg,
    /// Require m(theta_min) >= k when a_1 = 0.
    #[arg(long)]
    pub triangle_free_multiplicity: bool,
    /// Comma-separated check ids, or "all".
    #[arg(long, default_value = "ki-integrality,multiplicity-integrality")]
    pub checks: String,
    /// Ceiling on generated candidates.
    #[arg(long, default_value_t = 50_000_000)]
    pub max_candidates: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// thm-7.2, thm-6.4, prop-4.1 or thm-1.2.
    pub preset: String,
    /// Largest t kept from the K_{t,t,t} family.
    #[arg(long)]
    pub t_cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// f(D, alpha) and kappa(D, alpha) for theta_min <= -alpha k.
    Valency {
        #[arg(long)]
        diameter: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Valency cap for a_1 = 1 and theta_min = -k/2.
    A1Cap {
        #[arg(long)]
        diameter: usize,
        #[arg(long)]
        cd_equals_k: bool,
    },
    /// Clique bound 1 + k / (-theta_min).
    Delsarte {
        #[arg(long)]
        array: String,
    },
    /// Independence bound n / (1 + k / (-theta_min)).
    Hoffman {
        #[arg(long)]
        array: String,
    },
    /// Spectral necessary condition for a 3-colouring.
    Chromatic {
        #[arg(long)]
        array: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// List records, instantiating families up to the t-cap.
    List {
        #[arg(long)]
        diameter: Option<usize>,
        #[arg(long)]
        status: Option<String>,
        #[arg(long, default_value_t = 5)]
        t_cap: i64,
    },
    /// Look up one array.
    Lookup { array: String },
    /// Print the catalog file.
    Dump,
}
