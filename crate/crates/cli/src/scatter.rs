//! ℓ1 coherence against robustness of coherence for random states.

use std::io::Write;

use coherence_forge_core::randgen::{random_density_matrix, SeededSource, STATE_MEASURE};
use coherence_forge_core::robustness::{
    bound_chain_purity, f_lower_bound, l1_coherence, robustness_of_coherence, CoherenceOptions,
};
use coherence_forge_core::{GroupRep, SdpStatus};
use rayon::prelude::*;

use crate::error::CliError;

pub const HEADER: &str = "seed_index,d,c_l1,c_r,lower_l1,upper_l1,f_bound,purity_chain_1";
/// Rows whose c_r leaves [lower, upper] by more than this are counted.
pub const ROW_TOL: f64 = 1e-7;
pub const THREADS_ENV: &str = "COHERENCE_FORGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    pub seed_index: u64,
    pub d: usize,
    pub c_l1: f64,
    pub c_r: f64,
    pub lower_l1: f64,
    pub upper_l1: f64,
    pub f_bound: f64,
    pub purity_chain_1: f64,
}

/// The bound columns as functions of (c_l1, d) alone.
pub fn bound_columns(c_l1: f64, d: usize) -> Result<(f64, f64, f64), CliError> {
    let lower = c_l1 / (d - 1) as f64;
    let f = f_lower_bound(c_l1.min((d - 1) as f64), d)?;
    Ok((lower, c_l1, f))
}

impl ScatterRow {
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.lower_l1 - tol <= self.c_r && self.c_r <= self.upper_l1 + tol
    }

    /// 17 significant digits so every double survives a text round trip.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.seed_index,
            self.d,
            self.c_l1,
            self.c_r,
            self.lower_l1,
            self.upper_l1,
            self.f_bound,
            self.purity_chain_1
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self, CliError> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 8 {
            return Err(CliError::Input(format!("expected 8 columns, got {}", f.len())));
        }
        let bad = |s: &str| CliError::Input(format!("bad CSV field \"{s}\""));
        let x = |i: usize| f[i].parse::<f64>().map_err(|_| bad(f[i]));
        Ok(Self {
            seed_index: f[0].parse().map_err(|_| bad(f[0]))?,
            d: f[1].parse().map_err(|_| bad(f[1]))?,
            c_l1: x(2)?,
            c_r: x(3)?,
            lower_l1: x(4)?,
            upper_l1: x(5)?,
            f_bound: x(6)?,
            purity_chain_1: x(7)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSpec {
    pub d: usize,
    pub n: u64,
    pub seed: u64,
    /// Rank of the sampled states; `d` gives full-rank mixed states.
    pub rank: usize,
    pub opts: CoherenceOptions,
}

pub fn sample_row(spec: &ScatterSpec, index: u64) -> Result<(ScatterRow, SdpStatus), CliError> {
    let d = spec.d;
    let mut src = SeededSource::split(spec.seed, index);
    let rho = random_density_matrix(d, spec.rank, &mut src)?;
    let cert = robustness_of_coherence(&rho, &spec.opts)?;
    let c_l1 = l1_coherence(&rho);
    let (lower_l1, upper_l1, f_bound) = bound_columns(c_l1, d)?;
    let chain = bound_chain_purity(&GroupRep::cyclic(d)?, &rho)?;
    let row = ScatterRow {
        seed_index: index,
        d,
        c_l1,
        c_r: cert.value,
        lower_l1,
        upper_l1,
        f_bound,
        purity_chain_1: chain.values[0],
    };
    Ok((row, cert.status))
}

/// Worker count from the environment, if set and positive.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Rows in seed-index order regardless of which worker finished first.
pub fn run(spec: &ScatterSpec) -> Result<Vec<(ScatterRow, SdpStatus)>, CliError> {
    if spec.d < 2 {
        return Err(CliError::Input("scatter needs d ≥ 2".into()));
    }
    if spec.rank == 0 || spec.rank > spec.d {
        return Err(CliError::Input(format!("rank {} outside 1..={}", spec.rank, spec.d)));
    }
    let work = || (0..spec.n).into_par_iter().map(|i| sample_row(spec, i)).collect::<Result<Vec<_>, _>>();
    match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

pub fn write_csv<W: Write>(out: &mut W, spec: &ScatterSpec, rows: &[(ScatterRow, SdpStatus)]) -> std::io::Result<()> {
    writeln!(out, "# seed={} n={} d={} rank={} measure={}", spec.seed, spec.n, spec.d, spec.rank, STATE_MEASURE)?;
    writeln!(out, "{HEADER}")?;
    for (row, _) in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let row = ScatterRow {
            seed_index: 3,
            d: 3,
            c_l1: 0.1 + 0.2,
            c_r: 1.0 / 3.0,
            lower_l1: f64::MIN_POSITIVE,
            upper_l1: 2.0f64.sqrt(),
            f_bound: 1e-300,
            purity_chain_1: 0.0,
        };
        assert_eq!(ScatterRow::parse_csv(&row.to_csv()).unwrap(), row);
    }

    #[test]
    fn rows_are_deterministic() {
        let spec = ScatterSpec { d: 3, n: 4, seed: 7, rank: 3, opts: CoherenceOptions::default() };
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, (r, _))| r.seed_index == i as u64 && r.within_bounds(ROW_TOL)));
    }
}
