//! Job files and their execution. Every subcommand is turned into a
//! [`JobSpec`] first, so a job file and the equivalent flags behave the same.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use coherence_forge_core::robustness::{CoherenceOptions, DualForm};
use coherence_forge_core::{SdpOptions, SdpStatus};
use serde::Deserialize;
use serde_json::json;

use crate::commands::{self, status_str, Outcome};
use crate::error::{status_exit_code, CliError, EXIT_NUMERICAL, EXIT_OK};
use crate::format::{
    load_channels, load_priors, read_json, MatrixSource, ObservablesSource, RepSource, VectorSource,
};
use crate::scatter::{self, ScatterSpec, ROW_TOL};

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub gap_tol: Option<f64>,
    pub feas_tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolverConfig {
    pub fn options(&self) -> Result<SdpOptions, CliError> {
        let mut o = SdpOptions::default();
        if let Some(t) = self.gap_tol {
            o.gap_tol = t;
        }
        if let Some(t) = self.feas_tol {
            o.feas_tol = t;
        }
        if let Some(n) = self.max_iters {
            o.max_iters = n;
        }
        if !(o.gap_tol > 0.0 && o.feas_tol > 0.0 && o.max_iters > 0) {
            return Err(CliError::Input("solver tolerances and max_iters must be positive".into()));
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    pub rep: Option<RepSource>,
    pub state: Option<MatrixSource>,
    pub probe: Option<MatrixSource>,
    pub priors: Option<VectorSource>,
    pub channels: Option<String>,
    pub observables: Option<ObservablesSource>,
    pub values: Option<VectorSource>,
    pub dual_form: Option<String>,
    pub d: Option<usize>,
    pub n: Option<u64>,
    pub rank: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub verify_sdp: bool,
    #[serde(default)]
    pub solver: SolverConfig,
    pub out: Option<String>,
}

fn need<'a, T>(x: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    x.as_ref().ok_or_else(|| CliError::Input(format!("missing --{name}")))
}

impl JobSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    fn out_path(&self, base: Option<&Path>) -> Option<PathBuf> {
        self.out.as_ref().map(|o| match base {
            Some(b) if Path::new(o).is_relative() => b.join(o),
            _ => PathBuf::from(o),
        })
    }

    /// Runs the job, writes its output and returns the exit code. `base`
    /// resolves relative paths (the job file's directory).
    pub fn execute(&self, base: Option<&Path>) -> Result<i32, CliError> {
        let opts = self.solver.options()?;
        if self.command == "scatter" {
            return self.scatter(base, opts);
        }
        let outcome = self.evaluate(base, opts)?;
        let text = serde_json::to_string_pretty(&outcome.record).expect("JSON value serializes");
        match self.out_path(base) {
            Some(p) => std::fs::write(&p, text + "\n").map_err(|e| CliError::io(&p, e))?,
            None => to_stdout(|w| writeln!(w, "{text}"))?,
        }
        Ok(status_exit_code(outcome.status))
    }

    pub fn evaluate(&self, base: Option<&Path>, opts: SdpOptions) -> Result<Outcome, CliError> {
        let rep = || need(&self.rep, "rep")?.load(base);
        let state = || need(&self.state, "state")?.load_state(base);
        let data = || -> Result<_, CliError> {
            let obs = need(&self.observables, "observables")?.load(base)?;
            let vals = need(&self.values, "values")?.load(base)?;
            Ok((obs, vals))
        };
        match self.command.as_str() {
            "roa" => {
                let form = match self.dual_form.as_deref() {
                    None | Some("x-form") => DualForm::XForm,
                    Some("witness") => DualForm::Witness,
                    Some(f) => return Err(CliError::Input(format!("unknown dual form \"{f}\""))),
                };
                commands::roa(&rep()?, &state()?, &opts, form)
            }
            "roc" => commands::roc(&state()?, &CoherenceOptions { sdp: opts, verify_sdp: self.verify_sdp }),
            "bounds" => commands::bounds(&state()?),
            "witness-from-data" => {
                let (obs, vals) = data()?;
                commands::witness(&obs, &vals, &rep()?, &opts)
            }
            "estimate-from-data" => {
                let (obs, vals) = data()?;
                commands::estimate(&obs, &vals, &rep()?, &opts)
            }
            "discriminate" => {
                let rep = rep()?;
                let probe = self.probe.as_ref().or(self.state.as_ref());
                let probe = need(&probe, "probe")?.load_state(base)?;
                let channels = match &self.channels {
                    Some(c) => Some(load_channels(&base.map_or_else(|| PathBuf::from(c), |b| b.join(c)))?),
                    None => None,
                };
                let n = channels.as_ref().map_or(rep.order(), Vec::len);
                let default_priors = VectorSource::Named("uniform".into());
                let priors = load_priors(self.priors.as_ref().unwrap_or(&default_priors), n, base)?;
                commands::discriminate(&rep, &probe, priors, channels, &opts)
            }
            other => Err(CliError::Input(format!("unknown command \"{other}\""))),
        }
    }

    fn scatter(&self, base: Option<&Path>, opts: SdpOptions) -> Result<i32, CliError> {
        let d = *need(&self.d, "d")?;
        let spec = ScatterSpec {
            d,
            n: *need(&self.n, "n")?,
            seed: self.seed.unwrap_or(0),
            rank: self.rank.unwrap_or(d),
            opts: CoherenceOptions { sdp: opts, verify_sdp: self.verify_sdp },
        };
        let rows = scatter::run(&spec)?;
        let failures = rows.iter().filter(|(_, s)| *s != SdpStatus::Optimal).count();
        let violations = rows.iter().filter(|(r, _)| !r.within_bounds(ROW_TOL)).count();
        let status = if failures > 0 { SdpStatus::NumericalFailure } else { SdpStatus::Optimal };
        let summary = json!({
            "status": status_str(status),
            "rows": rows.len(),
            "solver_failures": failures,
            "bound_violations": violations,
        });
        match self.out_path(base) {
            Some(p) => {
                let f = File::create(&p).map_err(|e| CliError::io(&p, e))?;
                let mut w = BufWriter::new(f);
                scatter::write_csv(&mut w, &spec, &rows).and_then(|_| w.flush()).map_err(|e| CliError::io(&p, e))?;
                to_stdout(|w| writeln!(w, "{summary}"))?;
            }
            None => {
                to_stdout(|w| scatter::write_csv(w, &spec, &rows))?;
                eprintln!("{summary}");
            }
        }
        if violations > 0 {
            log::error!("{violations} rows fall outside the ℓ1 sandwich");
        }
        Ok(if failures > 0 || violations > 0 { EXIT_NUMERICAL } else { EXIT_OK })
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn to_stdout(f: impl FnOnce(&mut io::StdoutLock<'static>) -> io::Result<()>) -> Result<(), CliError> {
    let mut w = io::stdout().lock();
    match f(&mut w).and_then(|_| w.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::io(Path::new("<stdout>"), e)),
        _ => Ok(()),
    }
}
