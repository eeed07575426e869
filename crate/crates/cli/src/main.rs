use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Output};

#[derive(Parser, Debug)]
#[command(name = "qlattice", version, about = "Exact checks and meet/join recovery on Grassmann graphs")]
pub struct Cli {
    /// Field size [default: 2]
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Ambient dimension [default: 7]
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Subspace dimension [default: 3]
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Random samples per sampled check.
    #[arg(long, default_value_t = 20, global = true)]
    pub sample: usize,
    /// Largest vertex count for which whole-graph operations are allowed.
    #[arg(long, default_value_t = qlattice::grassmann::DEFAULT_VERTEX_CAP, global = true)]
    pub cap: u128,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn qnk(&self) -> (u32, usize, usize) {
        (self.q.unwrap_or(2), self.n.unwrap_or(7), self.k.unwrap_or(3))
    }

    pub fn params_given(&self) -> bool {
        self.q.is_some() || self.n.is_some() || self.k.is_some()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Geometric,
    Mixed,
    Combinatorial,
    MInverse,
    Transition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Full,
    Bar,
    Check,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    GeoToComb,
    CombToGeo,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the identity suite; exit 1 if any check fails.
    Verify,
    /// Emit a Gram table, M_i^-1 or a transition matrix.
    Gram {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 2)]
        i: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Full)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = DirectionArg::GeoToComb)]
        direction: DirectionArg,
    },
    /// Recover hat(x∩y) and hat(x+y) for a witness pair with every variant.
    Recover {
        #[arg(long, default_value_t = 2)]
        i: usize,
    },
    /// Write the Grassmann graph in the adjacency-list text format.
    ExportGraph,
    /// Run the meet-vector diagnostics on a graph file.
    Explore {
        graph: PathBuf,
        /// Vertex pair `X,Y`.
        #[arg(long, conflicts_with = "i")]
        pair: Option<String>,
        /// Use vertex 0 and the first vertex at this distance.
        #[arg(long)]
        i: Option<usize>,
        /// BFS roots for the sampled b_i/c_i validation.
        #[arg(long, default_value_t = 4)]
        roots: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = match Output::open(cli.out.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let res = commands::run(&cli, &mut out).and_then(|pass| {
        out.finish()?;
        Ok(pass)
    });
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError { code, msg }) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
