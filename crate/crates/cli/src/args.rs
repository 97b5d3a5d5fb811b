use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::format::{MatrixSource, ObservablesSource, RepSource, VectorSource};
use crate::job::{JobSpec, SolverConfig};

#[derive(Debug, Parser)]
#[command(name = "coherence-forge", version, about = "Robustness of asymmetry and coherence via semidefinite programming")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Relative duality-gap tolerance.
    #[arg(long)]
    pub gap_tol: Option<f64>,
    /// Primal and dual feasibility tolerance.
    #[arg(long)]
    pub feas_tol: Option<f64>,
    /// Interior-point iteration cap (exit 2 when reached).
    #[arg(long)]
    pub max_iters: Option<usize>,
}

impl From<&SolverArgs> for SolverConfig {
    fn from(a: &SolverArgs) -> Self {
        Self { gap_tol: a.gap_tol, feas_tol: a.feas_tol, max_iters: a.max_iters }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// `cyclic:d`, `trivial:d`, or a JSON file of unitaries.
    #[arg(long)]
    pub rep: String,
    /// JSON array of matrices, or `pauli`.
    #[arg(long)]
    pub observables: String,
    /// Comma-separated expectation values, or a JSON array file.
    #[arg(long)]
    pub values: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robustness of asymmetry with its full certificate.
    Roa {
        /// `cyclic:d`, `trivial:d`, or a JSON file of unitaries.
        #[arg(long)]
        rep: String,
        /// Matrix JSON file, or `psi_plus:d`, `mixed:d`, `rho_p:d:p`, `random:d:seed`.
        #[arg(long)]
        state: String,
        /// `x-form` or `witness`.
        #[arg(long, default_value = "x-form")]
        dual_form: String,
        #[command(flatten)]
        common: Common,
    },
    /// Robustness of coherence (closed forms where they apply).
    Roc {
        /// Matrix JSON file or a built-in state name.
        #[arg(long)]
        state: String,
        /// Also solve the SDP for closed-form states and cross-check.
        #[arg(long)]
        verify_sdp: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Every coherence bound for one state.
    Bounds {
        /// Matrix JSON file or a built-in state name.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        common: Common,
    },
    /// Best witness built from measured observables.
    WitnessFromData(DataArgs),
    /// Least robustness compatible with measured data (exit 3 if unphysical).
    EstimateFromData(DataArgs),
    /// Channel discrimination game: optimal success and advantage ratio.
    Discriminate {
        /// `cyclic:d`, `trivial:d`, or a JSON file of unitaries.
        #[arg(long)]
        rep: String,
        /// Probe state: matrix JSON file or a built-in state name.
        #[arg(long, alias = "state")]
        probe: String,
        /// `uniform`, a comma-separated list, or a JSON array file.
        #[arg(long, default_value = "uniform")]
        priors: String,
        /// JSON list of Kraus lists; must contain every group conjugation.
        #[arg(long)]
        channels: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// CSV of ℓ1 coherence against robustness of coherence for random states.
    Scatter {
        /// Dimension.
        #[arg(long)]
        d: usize,
        /// Number of states.
        #[arg(long)]
        n: u64,
        /// Master seed; row i uses an independent stream split from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank of the sampled states (defaults to d).
        #[arg(long)]
        rank: Option<usize>,
        /// Also solve the SDP for closed-form states and cross-check.
        #[arg(long)]
        verify_sdp: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON job file.
    Job { path: PathBuf },
}

fn named<T>(f: impl Fn(String) -> T, s: &str) -> Option<T> {
    Some(f(s.to_owned()))
}

impl Command {
    /// The equivalent job, or `None` for `job` itself.
    pub fn to_job(&self) -> Option<JobSpec> {
        let base = |command: &str, c: &Common| JobSpec {
            command: command.into(),
            solver: (&c.solver).into(),
            out: c.out.clone(),
            ..JobSpec::default()
        };
        let data = |command: &str, a: &DataArgs| JobSpec {
            rep: named(RepSource::Named, &a.rep),
            observables: named(ObservablesSource::Named, &a.observables),
            values: named(VectorSource::Named, &a.values),
            ..base(command, &a.common)
        };
        Some(match self {
            Self::Roa { rep, state, dual_form, common } => JobSpec {
                rep: named(RepSource::Named, rep),
                state: named(MatrixSource::Named, state),
                dual_form: Some(dual_form.clone()),
                ..base("roa", common)
            },
            Self::Roc { state, verify_sdp, common } => JobSpec {
                state: named(MatrixSource::Named, state),
                verify_sdp: *verify_sdp,
                ..base("roc", common)
            },
            Self::Bounds { state, common } => {
                JobSpec { state: named(MatrixSource::Named, state), ..base("bounds", common) }
            }
            Self::WitnessFromData(a) => data("witness-from-data", a),
            Self::EstimateFromData(a) => data("estimate-from-data", a),
            Self::Discriminate { rep, probe, priors, channels, common } => JobSpec {
                rep: named(RepSource::Named, rep),
                probe: named(MatrixSource::Named, probe),
                priors: named(VectorSource::Named, priors),
                channels: channels.clone(),
                ..base("discriminate", common)
            },
            Self::Scatter { d, n, seed, rank, verify_sdp, common } => JobSpec {
                d: Some(*d),
                n: Some(*n),
                seed: Some(*seed),
                rank: *rank,
                verify_sdp: *verify_sdp,
                ..base("scatter", common)
            },
            Self::Job { .. } => return None,
        })
    }
}
