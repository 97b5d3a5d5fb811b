//! Channel discrimination with a probe state.
//!
//! A referee applies channel Λ_i with prior p_i to the probe ρ; the player
//! measures a POVM {M_i} and guesses i. For the group game Λ_g = U_g·U_g†,
//! and the optimal success probability of an asymmetric probe exceeds the
//! best symmetric one by a factor of at most 1 + RoA(ρ), with equality at the
//! uniform prior.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_basis, tol, DensityMatrix, HermitianMatrix};
use crate::randgen::{random_pure_state, SeededSource};
use crate::sdp::{compile_discrimination_povm, solve, SdpOptions, SdpStatus};
use crate::symmetry::{GroupRep, QuantumChannel};

/// Allowed deviation of the priors' sum from 1.
pub const PRIOR_SUM_TOL: f64 = 1e-12;
/// Completeness tolerance ‖Σ M_g − 1‖₂ for POVMs.
pub const POVM_TOL: f64 = 1e-8;
/// Alternating maximisation stops when successive values differ by less.
pub const ALTERNATING_TOL: f64 = 1e-9;
pub const ALTERNATING_MAX_ROUNDS: usize = 500;
pub const DEFAULT_RESTARTS: usize = 10;
const RESTART_SEED: u64 = 0x5E_ED0F_BA5E;

fn check_priors(priors: &[f64]) -> Result<()> {
    if priors.is_empty() {
        return Err(Error::InvalidArgument("empty prior".into()));
    }
    if let Some(p) = priors.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("prior {p} is negative or not finite")));
    }
    let s: f64 = priors.iter().sum();
    if (s - 1.0).abs() > PRIOR_SUM_TOL.max(priors.len() as f64 * f64::EPSILON) {
        return Err(Error::InvalidArgument(format!("priors sum to {s}, not 1")));
    }
    Ok(())
}

/// Two trace-preserving channels agree on a Hermitian operator basis.
fn same_channel(a: &QuantumChannel, b: &QuantumChannel, tol: f64) -> bool {
    a.dim() == b.dim() && hermitian_basis(a.dim()).iter().all(|h| a.apply(h).sub(&b.apply(h)).frobenius_norm() <= tol)
}

#[derive(Debug, Clone)]
pub struct DiscriminationGame {
    rep: GroupRep,
    channels: Vec<QuantumChannel>,
    priors: Vec<f64>,
    probe: DensityMatrix,
    /// The channels are exactly the group conjugations, in group order.
    pure_group: bool,
}

impl DiscriminationGame {
    /// The group game: channel g is conjugation by U_g.
    pub fn group(rep: &GroupRep, priors: Vec<f64>, probe: DensityMatrix) -> Result<Self> {
        rep.check_dim(probe.dim())?;
        if priors.len() != rep.order() {
            return Err(Error::DimensionMismatch { expected: rep.order(), found: priors.len() });
        }
        check_priors(&priors)?;
        let channels =
            rep.unitaries().iter().map(|u| QuantumChannel::unitary(u.clone())).collect::<Result<Vec<_>>>()?;
        Ok(Self { rep: rep.clone(), channels, priors, probe, pure_group: true })
    }

    pub fn uniform(rep: &GroupRep, probe: DensityMatrix) -> Result<Self> {
        let n = rep.order();
        Self::group(rep, vec![1.0 / n as f64; n], probe)
    }

    /// A channel list that must contain every group conjugation.
    pub fn with_channels(
        rep: &GroupRep,
        channels: Vec<QuantumChannel>,
        priors: Vec<f64>,
        probe: DensityMatrix,
    ) -> Result<Self> {
        rep.check_dim(probe.dim())?;
        if priors.len() != channels.len() {
            return Err(Error::DimensionMismatch { expected: channels.len(), found: priors.len() });
        }
        check_priors(&priors)?;
        for ch in &channels {
            rep.check_dim(ch.dim())?;
            if !ch.is_trace_preserving() {
                return Err(Error::InvalidChannel("game channels must be trace preserving".into()));
            }
        }
        for (g, u) in rep.unitaries().iter().enumerate() {
            let conj = QuantumChannel::unitary(u.clone())?;
            if !channels.iter().any(|c| same_channel(c, &conj, 1e-9)) {
                return Err(Error::Precondition(format!("channel list lacks the conjugation by group element {g}")));
            }
        }
        let pure_group = channels.len() == rep.order()
            && channels.iter().zip(rep.unitaries()).all(|(c, u)| {
                QuantumChannel::unitary(u.clone()).map(|cu| same_channel(c, &cu, 1e-9)).unwrap_or(false)
            });
        Ok(Self { rep: rep.clone(), channels, priors, probe, pure_group })
    }

    pub fn rep(&self) -> &GroupRep {
        &self.rep
    }

    pub fn channels(&self) -> &[QuantumChannel] {
        &self.channels
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn probe(&self) -> &DensityMatrix {
        &self.probe
    }

    pub fn is_pure_group(&self) -> bool {
        self.pure_group
    }

    pub fn max_prior(&self) -> f64 {
        self.priors.iter().copied().fold(0.0, f64::max)
    }

    /// Same channels and priors with another probe.
    pub fn with_probe(&self, probe: DensityMatrix) -> Result<Self> {
        self.rep.check_dim(probe.dim())?;
        Ok(Self { probe, ..self.clone() })
    }

    /// Λ_i(ρ) for every channel.
    pub fn outputs(&self, rho: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
        self.channels.iter().map(|c| c.apply_state(rho)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    pub elements: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianMatrix>) -> Result<Self> {
        let p = Self { elements };
        p.validate()?;
        Ok(p)
    }

    /// {1 at `index`, 0 elsewhere}.
    pub fn deterministic(n: usize, d: usize, index: usize) -> Self {
        let elements =
            (0..n).map(|g| if g == index { HermitianMatrix::identity(d) } else { HermitianMatrix::zeros(d) }).collect();
        Self { elements }
    }

    pub fn completeness_error(&self) -> f64 {
        let d = self.elements.first().map_or(0, |e| e.dim());
        let mut sum = HermitianMatrix::zeros(d);
        for e in &self.elements {
            sum = sum.add(e);
        }
        sum.sub(&HermitianMatrix::identity(d)).frobenius_norm()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.elements.first().map(|e| e.dim()).ok_or_else(|| Error::InvalidArgument("empty POVM".into()))?;
        for (g, e) in self.elements.iter().enumerate() {
            if e.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: e.dim() });
            }
            let m = e.min_eigenvalue();
            if m < -tol::PSD {
                return Err(Error::InvalidArgument(format!("POVM element {g} has eigenvalue {m:e}")));
            }
        }
        let err = self.completeness_error();
        if err > POVM_TOL {
            return Err(Error::InvalidArgument(format!("POVM elements do not sum to 1 (error {err:e})")));
        }
        Ok(())
    }
}

/// Σ_i p_i Tr[Λ_i(ρ) M_i].
pub fn success_probability(game: &DiscriminationGame, povm: &Povm) -> Result<f64> {
    if povm.elements.len() != game.channels.len() {
        return Err(Error::DimensionMismatch { expected: game.channels.len(), found: povm.elements.len() });
    }
    povm.validate()?;
    let d = game.probe.dim();
    let mut total = 0.0;
    for ((ch, &p), m) in game.channels.iter().zip(&game.priors).zip(&povm.elements) {
        if m.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
        }
        total += p * ch.apply(&game.probe).inner(m);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalMeasurement {
    pub value: f64,
    pub povm: Povm,
    pub status: SdpStatus,
    pub gap: f64,
}

fn optimal_for_states(states: &[DensityMatrix], priors: &[f64], opts: &SdpOptions) -> Result<OptimalMeasurement> {
    let d = states[0].dim();
    if states.len() == 1 {
        return Ok(OptimalMeasurement {
            value: priors[0],
            povm: Povm::deterministic(1, d, 0),
            status: SdpStatus::Optimal,
            gap: 0.0,
        });
    }
    let (problem, layout) = compile_discrimination_povm(states, priors)?;
    let sol = solve(&problem, opts)?;
    if sol.status != SdpStatus::Optimal {
        log::warn!("POVM solve ended with status {:?}", sol.status);
    }
    Ok(OptimalMeasurement {
        value: sol.primal_value,
        povm: Povm { elements: layout.elements(&sol.x) },
        status: sol.status,
        gap: sol.gap(),
    })
}

/// max over POVMs of Σ_i p_i Tr[Λ_i(ρ) M_i].
pub fn optimal_success_probability(game: &DiscriminationGame, opts: &SdpOptions) -> Result<OptimalMeasurement> {
    optimal_for_states(&game.outputs(&game.probe)?, &game.priors, opts)
}

/// M_g = U_g X* U_g† / |G|, a POVM whenever X* ⪰ 0 and E(X*) = 1.
pub fn certificate_povm(rep: &GroupRep, x_star: &HermitianMatrix) -> Result<Povm> {
    rep.check_dim(x_star.dim())?;
    let d = rep.dim();
    let scale = x_star.max_abs().max(1.0);
    let lmin = x_star.min_eigenvalue();
    if lmin < -1e-7 * scale {
        return Err(Error::Precondition(format!("X* has negative eigenvalue {lmin:e}")));
    }
    let dev = rep.twirl(x_star)?.sub(&HermitianMatrix::identity(d)).frobenius_norm();
    if dev > 1e-7 * scale {
        return Err(Error::Precondition(format!("E(X*) differs from 1 by {dev:e}")));
    }
    let n = rep.order() as f64;
    Ok(Povm { elements: rep.unitaries().iter().map(|u| x_star.conjugate_by(u).scale(1.0 / n)).collect() })
}

/// Bounds on the optimal success of a group game from the probe's robustness:
/// (max{(1+s)/|G|, p_max}, (1+s)·p_max).
pub fn success_bounds(roa: f64, order: usize, max_prior: f64) -> (f64, f64) {
    let lower = ((1.0 + roa) / order as f64).max(max_prior);
    (lower, (1.0 + roa) * max_prior)
}

/// Best success probability with a symmetric probe.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBaseline {
    pub value: f64,
    /// Best symmetric probe found.
    pub probe: DensityMatrix,
    /// Restarts used (0 for the closed-form group case).
    pub restarts: usize,
    /// Whether the best run met the stopping criterion.
    pub converged: bool,
}

/// Group games: max_g p_g exactly. Channel lists: alternating maximisation
/// over (symmetric probe, POVM) from `restarts` seeded starts.
pub fn symmetric_baseline(game: &DiscriminationGame, restarts: usize, opts: &SdpOptions) -> Result<SymmetricBaseline> {
    let d = game.probe.dim();
    if game.pure_group {
        return Ok(SymmetricBaseline {
            value: game.max_prior(),
            probe: DensityMatrix::maximally_mixed(d),
            restarts: 0,
            converged: true,
        });
    }
    let mut src = SeededSource::new(RESTART_SEED);
    let mut best: Option<SymmetricBaseline> = None;
    for r in 0..restarts.max(1) {
        let start = if r == 0 {
            DensityMatrix::maximally_mixed(d)
        } else {
            let psi = random_pure_state(d, &mut src)?;
            DensityMatrix::from_trusted(game.rep.twirl(&psi)?)
        };
        let run = alternate(game, start, opts)?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(SymmetricBaseline { restarts: restarts.max(1), ..run });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn alternate(game: &DiscriminationGame, start: DensityMatrix, opts: &SdpOptions) -> Result<SymmetricBaseline> {
    let mut sigma = start;
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..ALTERNATING_MAX_ROUNDS {
        let meas = optimal_for_states(&game.outputs(&sigma)?, &game.priors, opts)?;
        // Best symmetric probe for this POVM: top eigenvector of
        // E(Σ p_i Λ_i†(M_i)), twirled.
        let d = sigma.dim();
        let mut a = HermitianMatrix::zeros(d);
        for ((ch, &p), m) in game.channels.iter().zip(&game.priors).zip(&meas.povm.elements) {
            a.axpy(p, &ch.apply_adjoint(m));
        }
        let ea = game.rep.twirl(&a)?;
        let eig = ea.eig();
        let top = eig.vector(eig.values.len() - 1);
        let value = eig.max();
        sigma = DensityMatrix::from_trusted(game.rep.twirl(&HermitianMatrix::projector(&top))?);
        if (value - prev).abs() < ALTERNATING_TOL {
            return Ok(SymmetricBaseline { value, probe: sigma, restarts: 1, converged: true });
        }
        prev = value;
    }
    log::warn!("alternating maximisation did not converge");
    Ok(SymmetricBaseline { value: prev, probe: sigma, restarts: 1, converged: false })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageReport {
    pub p_succ: f64,
    pub baseline: f64,
    pub ratio: f64,
    pub status: SdpStatus,
    pub gap: f64,
    pub restarts: usize,
}

/// Optimal success with the probe divided by the symmetric baseline.
pub fn advantage_ratio(game: &DiscriminationGame, opts: &SdpOptions) -> Result<AdvantageReport> {
    let opt = optimal_success_probability(game, opts)?;
    let base = symmetric_baseline(game, DEFAULT_RESTARTS, opts)?;
    Ok(AdvantageReport {
        p_succ: opt.value,
        baseline: base.value,
        ratio: opt.value / base.value,
        status: opt.status,
        gap: opt.gap,
        restarts: base.restarts,
    })
}

/// Largest advantage ratio of the group game over a grid of priors.
/// Returns (ratio, index of the maximising prior).
pub fn max_advantage_over_priors(
    rep: &GroupRep,
    probe: &DensityMatrix,
    prior_grid: &[Vec<f64>],
    opts: &SdpOptions,
) -> Result<(f64, usize)> {
    if prior_grid.is_empty() {
        return Err(Error::InvalidArgument("empty prior grid".into()));
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, p) in prior_grid.iter().enumerate() {
        let game = DiscriminationGame::group(rep, p.clone(), probe.clone())?;
        let r = advantage_ratio(&game, opts)?.ratio;
        if r > best.0 {
            best = (r, i);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::maximally_coherent_state;

    #[test]
    fn guessing_the_likeliest() {
        let rep = GroupRep::cyclic(2).unwrap();
        let game = DiscriminationGame::group(&rep, vec![0.7, 0.3], DensityMatrix::maximally_mixed(2)).unwrap();
        let p = success_probability(&game, &Povm::deterministic(2, 2, 0)).unwrap();
        assert!((p - 0.7).abs() < 1e-15);
        let opt = optimal_success_probability(&game, &SdpOptions::default()).unwrap();
        assert!((opt.value - 0.7).abs() < 1e-7);
    }

    #[test]
    fn plus_probe_is_perfect() {
        let rep = GroupRep::cyclic(2).unwrap();
        let plus = maximally_coherent_state(2).unwrap();
        let game = DiscriminationGame::uniform(&rep, plus.clone()).unwrap();
        let minus = HermitianMatrix::identity(2).sub(&plus);
        let povm = Povm::new(vec![plus.as_hermitian().clone(), minus]).unwrap();
        assert!((success_probability(&game, &povm).unwrap() - 1.0).abs() < 1e-14);
        let r = advantage_ratio(&game, &SdpOptions::default()).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn identity_certificate_is_uniform() {
        let rep = GroupRep::cyclic(3).unwrap();
        let povm = certificate_povm(&rep, &HermitianMatrix::identity(3)).unwrap();
        for e in &povm.elements {
            assert!(e.sub(&HermitianMatrix::identity(3).scale(1.0 / 3.0)).max_abs() < 1e-15);
        }
        assert!(certificate_povm(&rep, &HermitianMatrix::identity(3).scale(2.0)).is_err());
    }

    #[test]
    fn channel_list_must_contain_group() {
        let rep = GroupRep::cyclic(2).unwrap();
        let probe = DensityMatrix::maximally_mixed(2);
        let only_id = vec![QuantumChannel::identity(2), QuantumChannel::dephasing(2)];
        assert!(DiscriminationGame::with_channels(&rep, only_id, vec![0.5, 0.5], probe.clone()).is_err());
        let mut chans: Vec<QuantumChannel> =
            rep.unitaries().iter().map(|u| QuantumChannel::unitary(u.clone()).unwrap()).collect();
        let g = DiscriminationGame::with_channels(&rep, chans.clone(), vec![0.5, 0.5], probe.clone()).unwrap();
        assert!(g.is_pure_group());
        chans.push(QuantumChannel::dephasing(2));
        let g = DiscriminationGame::with_channels(&rep, chans, vec![0.4, 0.4, 0.2], probe).unwrap();
        assert!(!g.is_pure_group());
    }

    #[test]
    fn rejects_bad_priors() {
        let rep = GroupRep::cyclic(2).unwrap();
        let probe = DensityMatrix::maximally_mixed(2);
        assert!(DiscriminationGame::group(&rep, vec![0.5, 0.6], probe.clone()).is_err());
        assert!(DiscriminationGame::group(&rep, vec![1.0], probe).is_err());
    }
}
