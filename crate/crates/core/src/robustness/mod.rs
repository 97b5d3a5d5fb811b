//! Robustness of asymmetry and of coherence.
//!
//! The robustness of ρ is the least s ≥ 0 with ρ ⪯ (1+s)σ for a symmetric
//! state σ. [`robustness_of_asymmetry`] solves the primal program and one of
//! the two dual programs independently, so every value comes with a feasible
//! σ* from above and a witness W* from below.

mod bounds;
mod data;
mod exact;
mod properties;

use alloc::vec::Vec;

pub use bounds::{
    bound_chain_purity, bound_report, f_lower_bound, l1_bound_from_diag_entry, l1_coherence, l1_sandwich,
    max_diag_entry_bound, BoundReport, PurityChain,
};
pub use data::{estimate_from_data, witness_from_data, DataEstimate, DataWitness};
pub use exact::{alignment_phases, alignment_unitary, detect_exact_class, ExactClass};
pub use properties::{check_convexity, check_monotonicity, ConvexityReport, MonotonicityReport};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_basis, CMatrix, DensityMatrix, HermitianMatrix};
use crate::sdp::{compile_roa_dual, compile_roa_primal, compile_roa_witness_dual, solve, SdpOptions, SdpStatus};
use crate::symmetry::GroupRep;

/// Pseudomixture remainder τ* is only formed above this value.
pub const TAU_THRESHOLD: f64 = 1e-8;

/// Which dual program produced the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualForm {
    /// max Tr[Xρ] − 1 s.t. X ⪰ 0, E(X) = 1.
    XForm,
    /// max −Tr[Wρ] s.t. W ⪯ 1, E(W) ⪰ 0.
    Witness,
}

impl DualForm {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::XForm => "x-form",
            Self::Witness => "witness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sdp(DualForm),
    ClosedForm(ExactClass),
}

/// Feasibility and optimality residuals of a certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateResiduals {
    /// λ_min((1+s)σ* − ρ); nonnegative up to solver accuracy.
    pub dominance: f64,
    /// λ_min(1 − W*).
    pub witness_upper: f64,
    /// λ_min(E(W*)).
    pub witness_twirl: f64,
    /// ‖E(W*)‖₂; zero for the X-form and for closed forms.
    pub witness_twirl_norm: f64,
    /// ‖E(σ*) − σ*‖₂.
    pub sigma_symmetry: f64,
    /// |primal value − (−Tr[W*ρ])|.
    pub gap: f64,
    /// ‖ρ − ((1+s)σ* − sτ*)‖₂ when τ* exists.
    pub pseudomixture: Option<f64>,
    /// Largest ‖ρ v‖ over (near) null vectors v of σ*.
    pub support_leak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCertificate {
    /// s*, clamped at zero.
    pub value: f64,
    /// Tr σ̃ − 1 from the primal program, before clamping.
    pub primal_value: f64,
    /// −Tr[W*ρ].
    pub dual_value: f64,
    /// Optimal symmetric state σ* = σ̃/Tr σ̃.
    pub sigma: DensityMatrix,
    pub witness: HermitianMatrix,
    /// X* = 1 − W*.
    pub x_operator: HermitianMatrix,
    /// τ* = ((1+s)σ* − ρ)/s, present when s* > [`TAU_THRESHOLD`].
    pub tau: Option<DensityMatrix>,
    pub residuals: CertificateResiduals,
    pub method: Method,
    /// Combined solver status (the worse of the two solves).
    pub status: SdpStatus,
    /// Interior-point iterations of the primal and dual solves.
    pub iterations: (usize, usize),
}

impl RobustnessCertificate {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// σ̃ = (1+s)σ*.
    pub fn sigma_tilde(&self) -> HermitianMatrix {
        self.sigma.scale(1.0 + self.value)
    }
}

/// Robustness of asymmetry with the X-form dual.
pub fn robustness_of_asymmetry(rep: &GroupRep, rho: &DensityMatrix, opts: &SdpOptions) -> Result<RobustnessCertificate> {
    robustness_of_asymmetry_with(rep, rho, opts, DualForm::XForm)
}

pub fn robustness_of_asymmetry_with(
    rep: &GroupRep,
    rho: &DensityMatrix,
    opts: &SdpOptions,
    form: DualForm,
) -> Result<RobustnessCertificate> {
    let d = rho.dim();
    let primal = solve(&compile_roa_primal(rep, rho)?, opts)?;
    let sigma_tilde = rep.fixed_point_basis().combine(&primal.x);

    let (x_op, dual) = match form {
        DualForm::XForm => {
            let sol = solve(&compile_roa_dual(rep, rho)?, opts)?;
            let mut x = HermitianMatrix::identity(d);
            x.axpy(1.0, &rep.complement_basis().combine(&sol.x));
            (x, sol)
        }
        DualForm::Witness => {
            let sol = solve(&compile_roa_witness_dual(rep, rho)?, opts)?;
            let mut w = HermitianMatrix::zeros(d);
            for (b, &c) in hermitian_basis(d).iter().zip(&sol.x) {
                w.axpy(c, b);
            }
            (HermitianMatrix::identity(d).sub(&w), sol)
        }
    };
    let status = if primal.status != SdpStatus::Optimal { primal.status } else { dual.status };
    if status != SdpStatus::Optimal {
        log::warn!("robustness solve ended with status {status:?}");
    }
    assemble(
        rep,
        rho,
        sigma_tilde,
        x_op,
        primal.primal_value,
        Method::Sdp(form),
        status,
        (primal.iterations, dual.iterations),
        opts.gap_tol,
    )
}

/// Value of the primal program only (no dual solve, no certificate).
pub fn robustness_value(rep: &GroupRep, rho: &DensityMatrix, opts: &SdpOptions) -> Result<f64> {
    let sol = solve(&compile_roa_primal(rep, rho)?, opts)?;
    if !sol.is_optimal() {
        return Err(Error::Solver(alloc::format!("primal solve ended with status {:?}", sol.status)));
    }
    Ok(clamp_value(sol.primal_value, opts.gap_tol))
}

fn clamp_value(v: f64, gap_tol: f64) -> f64 {
    if v < -10.0 * gap_tol {
        log::warn!("robustness value {v:e} is negative beyond solver tolerance; clamping to 0");
    }
    v.max(0.0)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    rep: &GroupRep,
    rho: &DensityMatrix,
    sigma_tilde: HermitianMatrix,
    x_op: HermitianMatrix,
    primal_value: f64,
    method: Method,
    status: SdpStatus,
    iterations: (usize, usize),
    gap_tol: f64,
) -> Result<RobustnessCertificate> {
    let d = rho.dim();
    let value = clamp_value(primal_value, gap_tol);
    let id = HermitianMatrix::identity(d);
    let witness = id.sub(&x_op);
    let dual_value = -witness.inner(rho);

    let tr = sigma_tilde.trace_re();
    if !(tr > 0.0) {
        return Err(Error::Solver(alloc::format!("optimal σ̃ has trace {tr}")));
    }
    let sigma = DensityMatrix::from_trusted(sigma_tilde.scale(1.0 / tr));
    let scaled = sigma.scale(1.0 + value);
    let excess = scaled.sub(rho);
    let tau = (value > TAU_THRESHOLD).then(|| DensityMatrix::from_trusted(excess.scale(1.0 / value)));

    let e_w = rep.twirl(&witness)?;
    let pseudomixture = tau.as_ref().map(|t| {
        let mut recon = scaled.clone();
        recon.axpy(-value, t);
        recon.sub(rho).frobenius_norm()
    });
    let residuals = CertificateResiduals {
        dominance: excess.min_eigenvalue(),
        witness_upper: x_op.min_eigenvalue(),
        witness_twirl: e_w.min_eigenvalue(),
        witness_twirl_norm: e_w.frobenius_norm(),
        sigma_symmetry: rep.twirl(&sigma)?.sub(&sigma).frobenius_norm(),
        gap: (primal_value - dual_value).abs(),
        pseudomixture,
        support_leak: support_leak(&sigma, rho),
    };
    Ok(RobustnessCertificate {
        value,
        primal_value,
        dual_value,
        sigma,
        witness,
        x_operator: x_op,
        tau,
        residuals,
        method,
        status,
        iterations,
    })
}

/// max ‖ρ v‖ over unit eigenvectors v of σ with eigenvalue ≤ 1e−10·λ_max.
fn support_leak(sigma: &HermitianMatrix, rho: &HermitianMatrix) -> f64 {
    let eig = sigma.eig();
    let cutoff = 1e-10 * eig.max().abs().max(1e-300);
    let mut worst: f64 = 0.0;
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cutoff {
            let v = eig.vector(k);
            let rv = rho.mul_vec(&v);
            worst = worst.max(libm::sqrt(rv.iter().map(|z| z.norm_sqr()).sum()));
        }
    }
    worst
}

/// Options for [`robustness_of_coherence`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoherenceOptions {
    pub sdp: SdpOptions,
    /// Also solve the SDP when a closed form applies, and cross-check.
    pub verify_sdp: bool,
}

/// Robustness of coherence: asymmetry under the cyclic representation.
///
/// States in a closed-form class get an analytic certificate; with
/// `verify_sdp` the SDP is solved too, and a disagreement beyond 1e−6 is an
/// error.
pub fn robustness_of_coherence(rho: &DensityMatrix, opts: &CoherenceOptions) -> Result<RobustnessCertificate> {
    let rep = GroupRep::cyclic(rho.dim())?;
    let class = detect_exact_class(rho);
    if class == ExactClass::None {
        return robustness_of_asymmetry(&rep, rho, &opts.sdp);
    }
    let closed = closed_form_certificate(&rep, rho, class)?;
    if opts.verify_sdp {
        let sdp = robustness_of_asymmetry(&rep, rho, &opts.sdp)?;
        if sdp.is_optimal() && (sdp.value - closed.value).abs() > 1e-6 * (1.0 + closed.value) {
            return Err(Error::Solver(alloc::format!(
                "closed form {} disagrees with SDP value {}",
                closed.value,
                sdp.value
            )));
        }
        if !sdp.is_optimal() {
            log::warn!("verification SDP ended with status {:?}", sdp.status);
        }
    }
    Ok(closed)
}

/// Analytic certificate for a phase-alignable state (pure and X states
/// included): σ̃ = diag of absolute row sums, X* = d·U†|ψ⁺⟩⟨ψ⁺|U.
fn closed_form_certificate(rep: &GroupRep, rho: &DensityMatrix, class: ExactClass) -> Result<RobustnessCertificate> {
    let d = rho.dim();
    let phases = alignment_phases(rho.as_matrix())
        .ok_or_else(|| Error::Precondition("state is not phase-alignable".into()))?;
    let rows: Vec<f64> = (0..d).map(|i| (0..d).map(|j| rho[(i, j)].norm()).sum()).collect();
    let sigma_tilde = HermitianMatrix::from_real_diag(&rows);
    let u = alignment_unitary(&phases);
    let ones = CMatrix::from_fn(d, d, |_, _| num_complex::Complex64::new(1.0, 0.0));
    let x_op = HermitianMatrix::from_hermitian_part(&u.adjoint().matmul(&ones).matmul(&u));
    let value = l1_coherence(rho);
    assemble(rep, rho, sigma_tilde, x_op, value, Method::ClosedForm(class), SdpStatus::Optimal, (0, 0), 0.0)
}
