//! JSON matrix format and the small specification strings the CLI accepts.
//!
//! A matrix is `{"d": n, "re": [[..]], "im": [[..]]}`, row-major. `im` may be
//! omitted for real matrices. serde_json round-trips f64 exactly.

use std::fs;
use std::path::{Path, PathBuf};

use coherence_forge_core::randgen::{maximally_coherent_state, random_density_matrix, rho_p_family, SeededSource};
use coherence_forge_core::{CMatrix, Complex64, DensityMatrix, GroupRep, HermitianMatrix, QuantumChannel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        let d = self.d;
        let check = |rows: &Vec<Vec<f64>>, part: &str| -> Result<(), CliError> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(CliError::Input(format!("\"{part}\" is not a {d}x{d} array")));
            }
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return Err(CliError::Input(format!("\"{part}\" has a non-finite entry")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            Complex64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.rows();
        let re = (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect();
        Self { d, re, im: Some(im) }
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.as_matrix())
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve(base: Option<&Path>, p: &str) -> PathBuf {
    match base {
        Some(b) if Path::new(p).is_relative() => b.join(p),
        _ => PathBuf::from(p),
    }
}

/// A matrix given inline, by file, or by a built-in name.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MatrixSource {
    Inline(MatrixJson),
    Named(String),
}

impl MatrixSource {
    /// Built-ins: `psi_plus:d`, `mixed:d`, `rho_p:d:p`, and `random:d:seed`
    /// (a full-rank induced-Ginibre state). Anything else is a path, resolved
    /// against `base` when relative.
    pub fn load_state(&self, base: Option<&Path>) -> Result<DensityMatrix, CliError> {
        match self {
            Self::Inline(m) => Ok(DensityMatrix::from_matrix(m.to_matrix()?)?),
            Self::Named(s) => {
                if let Some(state) = builtin_state(s)? {
                    return Ok(state);
                }
                let m: MatrixJson = read_json(&resolve(base, s))?;
                Ok(DensityMatrix::from_matrix(m.to_matrix()?)?)
            }
        }
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::Input(format!("bad {what} \"{s}\"")))
}

fn builtin_state(s: &str) -> Result<Option<DensityMatrix>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let state = match parts.as_slice() {
        ["psi_plus", d] => maximally_coherent_state(parse_usize(d, "dimension")?)?,
        ["mixed", d] => DensityMatrix::maximally_mixed(parse_usize(d, "dimension")?),
        ["rho_p", d, p] => {
            let p: f64 = p.parse().map_err(|_| CliError::Input(format!("bad p \"{p}\"")))?;
            rho_p_family(parse_usize(d, "dimension")?, p)?
        }
        ["random", d, seed] => {
            let d = parse_usize(d, "dimension")?;
            let seed: u64 = seed.parse().map_err(|_| CliError::Input(format!("bad seed \"{seed}\"")))?;
            random_density_matrix(d, d, &mut SeededSource::new(seed))?
        }
        _ => return Ok(None),
    };
    Ok(Some(state))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RepSource {
    Cyclic { cyclic: usize },
    Unitaries { unitaries: Vec<MatrixJson>, labels: Option<Vec<String>> },
    List(Vec<MatrixJson>),
    Named(String),
}

impl RepSource {
    /// `cyclic:d`, `trivial:d`, or a JSON file holding any of the other forms.
    pub fn load(&self, base: Option<&Path>) -> Result<GroupRep, CliError> {
        match self {
            Self::Cyclic { cyclic } => Ok(GroupRep::cyclic(*cyclic)?),
            Self::Unitaries { unitaries, labels } => build_rep(unitaries, labels.clone()),
            Self::List(us) => build_rep(us, None),
            Self::Named(s) => {
                if let Some(d) = s.strip_prefix("cyclic:") {
                    return Ok(GroupRep::cyclic(parse_usize(d, "dimension")?)?);
                }
                if let Some(d) = s.strip_prefix("trivial:") {
                    return Ok(GroupRep::trivial(parse_usize(d, "dimension")?)?);
                }
                let inner: RepSource = read_json(&resolve(base, s))?;
                if matches!(inner, Self::Named(_)) {
                    return Err(CliError::Input(format!("{s}: rep file must hold matrices")));
                }
                inner.load(None)
            }
        }
    }
}

fn build_rep(us: &[MatrixJson], labels: Option<Vec<String>>) -> Result<GroupRep, CliError> {
    let mats = us.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
    Ok(GroupRep::new(mats, labels)?)
}

/// A list of floats given inline or by file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum VectorSource {
    Inline(Vec<f64>),
    Named(String),
}

impl VectorSource {
    /// A comma-separated list, or a path to a JSON array.
    pub fn load(&self, base: Option<&Path>) -> Result<Vec<f64>, CliError> {
        match self {
            Self::Inline(v) => Ok(v.clone()),
            Self::Named(s) => match parse_float_list(s) {
                Some(v) => Ok(v),
                None => read_json(&resolve(base, s)),
            },
        }
    }
}

fn parse_float_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().ok()).collect()
}

/// `uniform` or an explicit distribution.
pub fn load_priors(src: &VectorSource, n: usize, base: Option<&Path>) -> Result<Vec<f64>, CliError> {
    if matches!(src, VectorSource::Named(s) if s == "uniform") {
        return Ok(vec![1.0 / n as f64; n]);
    }
    src.load(base)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ObservablesSource {
    Inline(Vec<MatrixJson>),
    Named(String),
}

impl ObservablesSource {
    /// `pauli` (the qubit basis 1, X, Y, Z) or a JSON array of matrices.
    pub fn load(&self, base: Option<&Path>) -> Result<Vec<HermitianMatrix>, CliError> {
        let list = match self {
            Self::Inline(v) => v.clone(),
            Self::Named(s) if s == "pauli" => return Ok(pauli_basis()),
            Self::Named(s) => read_json::<Vec<MatrixJson>>(&resolve(base, s))?,
        };
        list.iter().map(|m| Ok(HermitianMatrix::new(m.to_matrix()?)?)).collect()
    }
}

pub fn pauli_basis() -> Vec<HermitianMatrix> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    [
        [c(1.0, 0.0), z, z, c(1.0, 0.0)],
        [z, c(1.0, 0.0), c(1.0, 0.0), z],
        [z, c(0.0, -1.0), c(0.0, 1.0), z],
        [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
    ]
    .iter()
    .map(|e| HermitianMatrix::new(CMatrix::from_vec(2, 2, e.to_vec()).expect("2x2")).expect("Hermitian"))
    .collect()
}

/// A channel list: each entry is a list of Kraus operators.
pub fn load_channels(path: &Path) -> Result<Vec<QuantumChannel>, CliError> {
    let raw: Vec<Vec<MatrixJson>> = read_json(path)?;
    raw.iter()
        .map(|ks| {
            let kraus = ks.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
            Ok(QuantumChannel::new(kraus)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_sources() {
        let rep = RepSource::Named("cyclic:4".into()).load(None).unwrap();
        assert_eq!((rep.dim(), rep.order()), (4, 4));
        let s = MatrixSource::Named("psi_plus:3".into()).load_state(None).unwrap();
        assert!((s[(0, 2)].re - 1.0 / 3.0).abs() < 1e-15);
        let p = load_priors(&VectorSource::Named("uniform".into()), 4, None).unwrap();
        assert_eq!(p, vec![0.25; 4]);
        assert_eq!(VectorSource::Named("0.5, 1e-3".into()).load(None).unwrap(), vec![0.5, 1e-3]);
    }

    #[test]
    fn cyclic_object_form() {
        let r: RepSource = serde_json::from_str(r#"{"cyclic": 3}"#).unwrap();
        assert_eq!(r.load(None).unwrap().order(), 3);
    }

    #[test]
    fn rejects_ragged_matrix() {
        let m: MatrixJson = serde_json::from_str(r#"{"d": 2, "re": [[1, 0], [0]]}"#).unwrap();
        assert!(m.to_matrix().is_err());
    }

    #[test]
    fn pauli_basis_is_orthogonal() {
        let b = pauli_basis();
        for (i, a) in b.iter().enumerate() {
            for (j, c) in b.iter().enumerate() {
                assert_eq!(a.inner(c), if i == j { 2.0 } else { 0.0 });
            }
        }
    }
}
