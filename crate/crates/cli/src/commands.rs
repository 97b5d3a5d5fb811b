//! One function per subcommand. Each returns a JSON record and the status
//! that decides the exit code.

use coherence_forge_core::discrimination::{
    advantage_ratio, certificate_povm, success_bounds, success_probability, DiscriminationGame,
};
use coherence_forge_core::robustness::{
    bound_report, estimate_from_data, robustness_of_asymmetry_with, robustness_of_coherence, witness_from_data,
    CoherenceOptions, DualForm, Method,
};
use coherence_forge_core::{DensityMatrix, GroupRep, HermitianMatrix, QuantumChannel, RobustnessCertificate};
use coherence_forge_core::{SdpOptions, SdpStatus};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::MatrixJson;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub record: Value,
    pub status: SdpStatus,
}

pub fn status_str(s: SdpStatus) -> &'static str {
    match s {
        SdpStatus::Optimal => "optimal",
        SdpStatus::Infeasible => "infeasible",
        SdpStatus::Unbounded => "unbounded",
        SdpStatus::NumericalFailure => "numerical-failure",
    }
}

fn mat(h: &HermitianMatrix) -> Value {
    serde_json::to_value(MatrixJson::from(h)).expect("matrix serializes")
}

/// NaN and infinities have no JSON form; they become null.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn certificate_json(c: &RobustnessCertificate) -> Value {
    let method = match c.method {
        Method::Sdp(f) => json!({"kind": "sdp", "dual_form": f.as_str()}),
        Method::ClosedForm(class) => json!({"kind": "closed-form", "class": class.as_str()}),
    };
    let r = &c.residuals;
    json!({
        "status": status_str(c.status),
        "value": c.value,
        "primal_value": c.primal_value,
        "dual_value": c.dual_value,
        "method": method,
        "iterations": [c.iterations.0, c.iterations.1],
        "sigma": mat(&c.sigma),
        "sigma_tilde": mat(&c.sigma_tilde()),
        "witness": mat(&c.witness),
        "x_operator": mat(&c.x_operator),
        "tau": c.tau.as_ref().map(|t| mat(t)),
        "residuals": {
            "dominance": r.dominance,
            "witness_upper": r.witness_upper,
            "witness_twirl": r.witness_twirl,
            "witness_twirl_norm": r.witness_twirl_norm,
            "sigma_symmetry": r.sigma_symmetry,
            "gap": r.gap,
            "pseudomixture": r.pseudomixture,
            "support_leak": r.support_leak,
        },
    })
}

pub fn roa(rep: &GroupRep, rho: &DensityMatrix, opts: &SdpOptions, form: DualForm) -> Result<Outcome, CliError> {
    let c = robustness_of_asymmetry_with(rep, rho, opts, form)?;
    Ok(Outcome { record: certificate_json(&c), status: c.status })
}

pub fn roc(rho: &DensityMatrix, opts: &CoherenceOptions) -> Result<Outcome, CliError> {
    let c = robustness_of_coherence(rho, opts)?;
    Ok(Outcome { record: certificate_json(&c), status: c.status })
}

pub fn bounds(rho: &DensityMatrix) -> Result<Outcome, CliError> {
    let b = bound_report(rho)?;
    let record = json!({
        "status": "optimal",
        "d": b.dim,
        "l1": b.l1_value,
        "lower": b.l1_lower,
        "upper": b.l1_upper,
        "f_bound": b.f_bound,
        "purity_chain": b.purity_chain,
        "diag_entry_bound": b.diag_entry_bound,
        "exact": b.exact.map(|(v, _)| v),
        "exact_class": b.exact.map(|(_, c)| c.as_str()),
    });
    Ok(Outcome { record, status: SdpStatus::Optimal })
}

pub fn witness(
    obs: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
    opts: &SdpOptions,
) -> Result<Outcome, CliError> {
    let w = witness_from_data(obs, values, rep, opts)?;
    let record = json!({
        "status": status_str(w.status),
        "value": w.value,
        "coefficients": w.coefficients,
        "identity_weight": w.identity_weight,
        "witness": mat(&w.witness),
        "gap": num(w.gap),
    });
    Ok(Outcome { record, status: w.status })
}

pub fn estimate(
    obs: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
    opts: &SdpOptions,
) -> Result<Outcome, CliError> {
    let e = estimate_from_data(obs, values, rep, opts)?;
    let record = json!({
        "status": status_str(e.status),
        "value": e.value,
        "state": e.state.as_ref().map(|s| mat(s)),
        "sigma_tilde": e.sigma_tilde.as_ref().map(mat),
        "gap": num(e.gap),
    });
    Ok(Outcome { record, status: e.status })
}

pub fn discriminate(
    rep: &GroupRep,
    probe: &DensityMatrix,
    priors: Vec<f64>,
    channels: Option<Vec<QuantumChannel>>,
    opts: &SdpOptions,
) -> Result<Outcome, CliError> {
    let game = match channels {
        Some(ch) => DiscriminationGame::with_channels(rep, ch, priors, probe.clone())?,
        None => DiscriminationGame::group(rep, priors, probe.clone())?,
    };
    let adv = advantage_ratio(&game, opts)?;
    let cert = robustness_of_asymmetry_with(rep, probe, opts, DualForm::XForm)?;
    let mut record = json!({
        "status": status_str(adv.status),
        "p_succ": adv.p_succ,
        "baseline": adv.baseline,
        "ratio": adv.ratio,
        "roa": cert.value,
        "ratio_upper": 1.0 + cert.value,
        "group_game": game.is_pure_group(),
        "restarts": adv.restarts,
        "gap": adv.gap,
    });
    if game.is_pure_group() {
        let (lo, hi) = success_bounds(cert.value, rep.order(), game.max_prior());
        record["success_lower"] = json!(lo);
        record["success_upper"] = json!(hi);
        let povm = certificate_povm(rep, &cert.x_operator)?;
        record["certificate_success"] = json!(success_probability(&game, &povm)?);
    }
    let status = if cert.status != SdpStatus::Optimal { cert.status } else { adv.status };
    Ok(Outcome { record, status })
}
