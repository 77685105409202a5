use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forestcalc::{parse_rational, Error, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "forestcalc",
    version,
    about = "Spanning-forest calculus of weighted digraphs",
    long_about = "Reads a weighted digraph from an edge list (`tail head weight` per line, \
                  optional `vertex NAME` declarations, `#` comments) and computes forest \
                  matrices, generalized inverses of the Kirchhoff matrix, Markov observation \
                  matrices and forest accessibility measures."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,

    /// Scalar arithmetic.
    #[arg(long, global = true, value_enum, env = "FORESTCALC_MODE", default_value_t = Mode::Rational)]
    pub mode: Mode,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex/arc counts, strong components, knots and forest dimensions.
    Info(Input),
    /// Forest weights sigma_k, forest matrices Q_k, J̄ and the characteristic polynomial.
    Forests(Input),
    /// Q(tau) = (I + tau L)^-1 and the out-forest accessibility P1 = Q(tau)^T.
    Qtau {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        tau: Rational,
        /// Computation route (forest-sum, inverse, polynomial); all routes are cross-checked if omitted.
        #[arg(long)]
        route: Option<String>,
    },
    /// tau (Q(tau) - J̄) along a growing tau schedule, against the group inverse.
    Limit {
        #[command(flatten)]
        input: Input,
        /// Comma-separated increasing tau values.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg,
              default_value = "1,10,100,1000,10000,100000,1000000,10000000,100000000")]
        schedule: Vec<Rational>,
    },
    /// Group inverse of the Kirchhoff matrix.
    Ginv {
        #[command(flatten)]
        input: Input,
        /// Shift used by the shifted-inverse route (any nonzero value).
        #[arg(long, value_parser = rational_arg, default_value = "1")]
        alpha: Rational,
        /// Route (shifted-inverse, dense-forest); all routes are cross-checked if omitted.
        #[arg(long)]
        route: Option<String>,
    },
    /// Moore–Penrose inverse of the Kirchhoff matrix.
    Pinv(Input),
    /// Related Markov chain P = I - alpha L observed after a geometric number of steps.
    Markov {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg)]
        q: Rational,
        /// Monte-Carlo trials (0 skips the simulation).
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        partitions: usize,
        /// Start vertex of the simulation (defaults to the first vertex).
        #[arg(long)]
        start: Option<String>,
        /// Also report the Cesàro average of the first K powers of P.
        #[arg(long)]
        cesaro: Option<u64>,
    },
    /// Accessibility matrices P1, P2, P3.
    Access(MeasureArgs),
    /// Axiom report for an accessibility measure.
    Axioms {
        #[command(flatten)]
        measure: MeasureArgs,
        /// Use strict inequalities.
        #[arg(long)]
        strict: bool,
        /// Also sweep monotonicity over every arc with weight increases 1 and 1/2.
        #[arg(long)]
        monotonicity: bool,
    },
    /// Increments of P1(tau), P2(tau) when one arc weight grows.
    Delta {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        tau: Rational,
        /// Arc as `TAIL,HEAD` (vertex labels).
        #[arg(long)]
        arc: String,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[arg(long)]
        strict: bool,
    },
    /// Print a digraph with prescribed out/in forest dimensions as an edge list.
    Fixture {
        #[arg(long)]
        n: usize,
        /// Out-forest dimension.
        #[arg(long)]
        k: usize,
        /// In-forest dimension.
        #[arg(long = "k-in")]
        k_in: usize,
    },
    /// Compare the recurrence against brute-force forest enumeration.
    OracleVerify(Input),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Edge-list file.
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub input: Input,
    /// Measure name (forest, dense).
    #[arg(long, default_value = "forest")]
    pub measure: String,
    /// Parameter of the forest measure.
    #[arg(long, value_parser = rational_arg)]
    pub tau: Option<Rational>,
    /// Parameter of the dense measure.
    #[arg(long, value_parser = rational_arg)]
    pub alpha: Option<Rational>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| match e {
        Error::Parse { msg, .. } => msg,
        other => other.to_string(),
    })
}
