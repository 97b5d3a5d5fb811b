//! Reproducible sampling of states, channels and prior grids.
//!
//! [`SeededSource`] is a counter-based stream: the n-th output is a pure
//! function of (seed, stream, n), so substreams can be split off per worker
//! and results do not depend on scheduling or platform.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tol, CMatrix, DensityMatrix, HermitianMatrix};
use crate::symmetry::{GroupRep, QuantumChannel, REP_TOL};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based splitmix64 stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededSource {
    key: u64,
    counter: u64,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        Self { key: mix64(seed), counter: 0 }
    }

    /// Independent substream `index` of `seed`.
    pub fn split(seed: u64, index: u64) -> Self {
        Self { key: mix64(mix64(seed) ^ mix64(index.wrapping_add(GOLDEN))), counter: 0 }
    }

    /// Child stream derived from this one's key, independent of its counter.
    pub fn substream(&self, index: u64) -> Self {
        Self { key: mix64(self.key ^ mix64(index.wrapping_mul(GOLDEN).wrapping_add(1))), counter: 0 }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller (one output per pair of uniforms).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }

    /// Complex Gaussian with E|z|² = 1.
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.next_gaussian(), s * self.next_gaussian())
    }

    /// Exponential(1) variate.
    pub fn next_exponential(&mut self) -> f64 {
        -libm::log(1.0 - self.next_f64())
    }
}

/// Tag recorded alongside generated datasets.
pub const STATE_MEASURE: &str = "induced-ginibre";

const FULL_RANK_RETRIES: usize = 16;

/// GG†/Tr[GG†] with G a d×rank complex Ginibre matrix.
pub fn random_density_matrix(d: usize, rank: usize, src: &mut SeededSource) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} outside 1..={d}")));
    }
    for _ in 0..FULL_RANK_RETRIES {
        let g = CMatrix::from_fn(d, rank, |_, _| src.next_complex_gaussian());
        let h = HermitianMatrix::from_hermitian_part(&g.matmul_adj(&g));
        let rho = DensityMatrix::from_trusted(h.scale(1.0 / h.trace_re()));
        if rank < d || rho.min_eigenvalue() > 1e-10 {
            return Ok(rho);
        }
    }
    Err(Error::InvalidState("could not draw a full-rank sample".into()))
}

/// Haar-random unit vector.
pub fn random_state_vector(d: usize, src: &mut SeededSource) -> Result<Vec<Complex64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| src.next_complex_gaussian()).collect();
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if n2 > 1e-300 {
            let s = 1.0 / libm::sqrt(n2);
            return Ok(v.into_iter().map(|z| z * s).collect());
        }
    }
}

pub fn random_pure_state(d: usize, src: &mut SeededSource) -> Result<DensityMatrix> {
    DensityMatrix::pure(&random_state_vector(d, src)?)
}

/// |ψ⁺⟩⟨ψ⁺| with ψ⁺ = Σ_j |j⟩/√d; every entry is exactly 1/d.
pub fn maximally_coherent_state(d: usize) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let v = Complex64::new(1.0 / d as f64, 0.0);
    Ok(DensityMatrix::from_trusted(HermitianMatrix::from_hermitian_part(&CMatrix::from_fn(d, d, |_, _| v))))
}

/// ρ_p = (1+p)·1/d − p|ψ⁺⟩⟨ψ⁺| for 0 ≤ p ≤ 1/(d−1).
pub fn rho_p_family(d: usize, p: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument("ρ_p needs d ≥ 2".into()));
    }
    let pmax = 1.0 / (d - 1) as f64;
    if !(p >= 0.0 && p <= pmax * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, {pmax}]")));
    }
    let df = d as f64;
    let diag = Complex64::new((1.0 + p) / df - p / df, 0.0);
    let off = Complex64::new(-p / df, 0.0);
    let m = CMatrix::from_fn(d, d, |i, j| if i == j { diag } else { off });
    DensityMatrix::new(HermitianMatrix::from_hermitian_part(&m))
}

/// Random state supported on the diagonal and anti-diagonal.
///
/// Each pair (j, d−1−j) carries an independent random PSD 2×2 block; for odd
/// d the centre entry is an independent nonnegative weight.
pub fn random_generalized_x_state(d: usize, src: &mut SeededSource) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument("X states need d ≥ 2".into()));
    }
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d / 2 {
        let k = d - 1 - j;
        let g = CMatrix::from_fn(2, 2, |_, _| src.next_complex_gaussian());
        let b = g.matmul_adj(&g);
        let idx = [j, k];
        for (a, &ia) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                m[(ia, ic)] = b[(a, c)];
            }
        }
    }
    if d % 2 == 1 {
        let c = d / 2;
        m[(c, c)] = Complex64::new(src.next_exponential(), 0.0);
    }
    let h = HermitianMatrix::from_hermitian_part(&m);
    let tr = h.trace_re();
    Ok(DensityMatrix::from_trusted(h.scale(1.0 / tr)))
}

/// Normalised i.i.d. exponentials: a flat-Dirichlet point on the simplex.
pub fn random_distribution(n: usize, src: &mut SeededSource) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| src.next_exponential()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// ξ ↦ Σ_g q_g U_g ξ U_g† with random q; `twirl_weight` moves that much mass
/// toward the uniform distribution (the twirl itself).
pub fn random_covariant_channel(
    rep: &GroupRep,
    twirl_weight: f64,
    src: &mut SeededSource,
) -> Result<QuantumChannel> {
    if !rep.is_abelian(10.0 * REP_TOL) {
        return Err(Error::InvalidRep("covariant channel sampler needs an abelian representation".into()));
    }
    if !(0.0..=1.0).contains(&twirl_weight) {
        return Err(Error::InvalidArgument(format!("twirl weight {twirl_weight} outside [0,1]")));
    }
    let n = rep.order();
    let q: Vec<f64> = random_distribution(n, src)
        .into_iter()
        .map(|v| (1.0 - twirl_weight) * v + twirl_weight / n as f64)
        .collect();
    QuantumChannel::random_unitary(&q, rep.unitaries())
}

/// The uniform prior followed by `samples` stratified random priors.
///
/// Sample i draws its first coordinate from the i-th of `samples` equal
/// strata before the remaining mass is split at random, which spreads the
/// grid over the simplex.
pub fn prior_grid(n: usize, samples: usize, src: &mut SeededSource) -> Vec<Vec<f64>> {
    let mut grid = Vec::with_capacity(samples + 1);
    grid.push(alloc::vec![1.0 / n as f64; n]);
    for i in 0..samples {
        if n == 1 {
            grid.push(alloc::vec![1.0]);
            continue;
        }
        let first = (i as f64 + src.next_f64()) / samples as f64;
        let mut p = Vec::with_capacity(n);
        p.push(first);
        p.extend(random_distribution(n - 1, src).into_iter().map(|v| v * (1.0 - first)));
        // rotate so the stratified coordinate is not always the first
        p.rotate_right(i % n);
        grid.push(p);
    }
    grid
}

/// Checks the generated-state margin promised to callers.
pub fn passes_state_margin(rho: &DensityMatrix) -> bool {
    rho.min_eigenvalue() >= -1e-12 && (rho.trace_re() - 1.0).abs() <= tol::TRACE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_deterministic_and_split() {
        let mut a = SeededSource::new(42);
        let mut b = SeededSource::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut s0 = SeededSource::split(42, 0);
        let mut s1 = SeededSource::split(42, 1);
        assert_ne!(s0.next_u64(), s1.next_u64());
    }

    #[test]
    fn uniform_moments() {
        let mut s = SeededSource::new(1);
        let n = 20000;
        let mean: f64 = (0..n).map(|_| s.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01);
        let var: f64 = (0..n).map(|_| s.next_gaussian().powi(2)).sum::<f64>() / n as f64;
        assert!((var - 1.0).abs() < 0.05);
    }

    #[test]
    fn ginibre_states_are_valid() {
        let mut s = SeededSource::new(3);
        for rank in 1..=3 {
            let rho = random_density_matrix(3, rank, &mut s).unwrap();
            assert!(passes_state_margin(&rho));
        }
        let pure = random_density_matrix(4, 1, &mut s).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        assert!(random_density_matrix(3, 4, &mut s).is_err());
    }

    #[test]
    fn rho_p_range() {
        let r = rho_p_family(3, 0.0).unwrap();
        assert!((r.purity() - 1.0 / 3.0).abs() < 1e-15);
        assert!(rho_p_family(4, 1.0 / 3.0).is_ok());
        assert!(rho_p_family(4, 0.4).is_err());
    }

    #[test]
    fn x_state_support() {
        let mut s = SeededSource::new(9);
        let rho = random_generalized_x_state(5, &mut s).unwrap();
        assert!(passes_state_margin(&rho));
        for i in 0..5 {
            for j in 0..5 {
                if i != j && i + j != 4 {
                    assert_eq!(rho[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn prior_grid_shape() {
        let mut s = SeededSource::new(5);
        let g = prior_grid(3, 10, &mut s);
        assert_eq!(g.len(), 11);
        for p in &g {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|v| *v >= 0.0));
        }
    }
}
