use alloc::vec;
use alloc::vec::Vec;

use super::dense::{cholesky_regularized, cholesky_solve, dot, norm, range_split};
use super::{SdpOptions, SdpProblem, SdpSolution, SdpStatus, Sense};
use crate::error::Result;
use crate::linalg::{cholesky, eigh, svd, CMatrix, HermitianMatrix};

/// Relative singular-value threshold for equality and dependency elimination.
const RANK_TOL: f64 = 1e-11;
/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.99;

fn sq(x: f64) -> f64 {
    x * x
}

/// Solves `problem`; see the module docs for the formulation.
///
/// Never panics on numerical trouble: a diagnosed status is returned with
/// the last iterate attached.
pub fn solve(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let n = problem.num_vars();
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let c: Vec<f64> = problem.objective.iter().map(|v| sign * v).collect();

    // Equalities: x = x0 + N y.
    let (x0, null) = match &problem.equalities {
        Some(eq) if !eq.rows.is_empty() => {
            let split = range_split(&eq.rows, n, RANK_TOL);
            let mut x0 = vec![0.0; n];
            for ((v, u), s) in split.range.iter().zip(&split.left).zip(&split.singular) {
                let coef = dot(u, &eq.rhs) / s;
                for (xi, vi) in x0.iter_mut().zip(v) {
                    *xi += coef * vi;
                }
            }
            let resid: f64 = eq.rows.iter().zip(&eq.rhs).map(|(r, b)| sq(dot(r, &x0) - b)).sum();
            if libm::sqrt(resid) > 1e-9 * (1.0 + norm(&eq.rhs)) {
                log::debug!("equality constraints are inconsistent (residual {:e})", libm::sqrt(resid));
                return Ok(trivial_solution(problem, SdpStatus::Infeasible, x0));
            }
            (x0, split.null)
        }
        _ => (vec![0.0; n], identity_columns(n)),
    };

    // Drop directions that no block depends on.
    let block_maps: Vec<Vec<CMatrix>> = problem
        .blocks
        .iter()
        .map(|b| null.iter().map(|v| combine(v, &b.coeffs, b.dim())).collect())
        .collect();
    let q = null.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for maps in &block_maps {
        let d = maps.first().map_or(0, |m| m.rows());
        for i in 0..d {
            for j in i..d {
                rows.push(maps.iter().map(|m| m[(i, j)].re).collect());
                if j > i {
                    rows.push(maps.iter().map(|m| m[(i, j)].im).collect());
                }
            }
        }
    }
    let dep = range_split(&rows, q, RANK_TOL);
    let c_null: Vec<f64> = null.iter().map(|v| dot(v, &c)).collect();
    for v in &dep.null {
        if dot(v, &c_null).abs() > 1e-9 * (1.0 + norm(&c)) {
            log::debug!("objective varies along a direction no constraint sees");
            return Ok(trivial_solution(problem, SdpStatus::Unbounded, x0));
        }
    }
    // T = N · P, orthonormal columns in x-space.
    let transform: Vec<Vec<f64>> = dep
        .range
        .iter()
        .map(|p| {
            let mut col = vec![0.0; n];
            for (pa, va) in p.iter().zip(&null) {
                for (ci, vi) in col.iter_mut().zip(va) {
                    *ci += pa * vi;
                }
            }
            col
        })
        .collect();

    let blocks: Vec<Block> = problem
        .blocks
        .iter()
        .map(|b| {
            let d = b.dim();
            let mut h = b.constant.as_matrix().clone();
            for (f, &x) in b.coeffs.iter().zip(&x0) {
                if x != 0.0 {
                    h.axpy(x, f.as_matrix());
                }
            }
            let f = transform.iter().map(|t| combine(t, &b.coeffs, d)).collect();
            Block { dim: d, h, f }
        })
        .collect();
    let c_red: Vec<f64> = transform.iter().map(|t| dot(t, &c)).collect();
    let offset_min = sign * problem.offset + dot(&c, &x0);

    let start = problem.initial_x.as_ref().map(|xi| {
        let diff: Vec<f64> = xi.iter().zip(&x0).map(|(a, b)| a - b).collect();
        transform.iter().map(|t| dot(t, &diff)).collect::<Vec<f64>>()
    });

    let ipm = Ipm { blocks: &blocks, c: &c_red, opts };
    let out = ipm.run(start);

    let mut x = x0.clone();
    for (t, &w) in transform.iter().zip(&out.w) {
        for (xi, ti) in x.iter_mut().zip(t) {
            *xi += w * ti;
        }
    }
    let pobj = dot(&c_red, &out.w) + offset_min;
    let dobj = -out.z.iter().zip(&blocks).map(|(z, b)| z.inner_re(&b.h)).sum::<f64>() + offset_min;
    Ok(SdpSolution {
        status: out.status,
        primal_value: sign * pobj,
        dual_value: sign * dobj,
        dual_blocks: out.z.iter().map(HermitianMatrix::from_hermitian_part).collect(),
        slack_blocks: problem.blocks.iter().map(|b| b.evaluate(&x)).collect(),
        x,
        complementarity: out.complementarity,
        primal_residual: out.pres,
        dual_residual: out.dres,
        iterations: out.iterations,
    })
}

fn identity_columns(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn combine(weights: &[f64], mats: &[HermitianMatrix], d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d, d);
    for (w, m) in weights.iter().zip(mats) {
        if *w != 0.0 {
            out.axpy(*w, m.as_matrix());
        }
    }
    out
}

fn trivial_solution(problem: &SdpProblem, status: SdpStatus, x: Vec<f64>) -> SdpSolution {
    let value = problem.objective_value(&x);
    SdpSolution {
        status,
        primal_value: value,
        dual_value: value,
        dual_blocks: problem.blocks.iter().map(|b| HermitianMatrix::zeros(b.dim())).collect(),
        slack_blocks: problem.blocks.iter().map(|b| b.evaluate(&x)).collect(),
        x,
        complementarity: 0.0,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: 0,
    }
}

struct Block {
    dim: usize,
    /// Constant term (h in `G x + s = h`, with G x = −Σ x_k F_k).
    h: CMatrix,
    f: Vec<CMatrix>,
}

struct IpmOutput {
    status: SdpStatus,
    w: Vec<f64>,
    z: Vec<CMatrix>,
    complementarity: f64,
    pres: f64,
    dres: f64,
    iterations: usize,
}

struct Ipm<'a> {
    blocks: &'a [Block],
    c: &'a [f64],
    opts: &'a SdpOptions,
}

/// Nesterov–Todd scaling of one block: R† z R = R⁻¹ s R⁻† = diag(λ).
struct Scaling {
    r: CMatrix,
    rinv: CMatrix,
    lambda: Vec<f64>,
}

fn nt_scaling(s: &CMatrix, z: &CMatrix) -> Option<Scaling> {
    let ls = cholesky(s).ok()?;
    let lz = cholesky(z).ok()?;
    let m = lz.adjoint().matmul(&ls);
    let dec = svd(&m);
    let d = s.rows();
    if dec.s.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return None;
    }
    let isq: Vec<f64> = dec.s.iter().map(|&v| 1.0 / libm::sqrt(v)).collect();
    let mut vs = dec.v.clone();
    for j in 0..d {
        for i in 0..d {
            vs[(i, j)] *= isq[j];
        }
    }
    let r = ls.matmul(&vs);
    let mut uh = dec.u.adjoint();
    for i in 0..d {
        for j in 0..d {
            uh[(i, j)] *= isq[i];
        }
    }
    let rinv = uh.matmul(&lz.adjoint());
    Some(Scaling { r, rinv, lambda: dec.s })
}

/// a ⋄ b: solves (ΛX + XΛ)/2 = B for X.
fn lyap_inverse(lambda: &[f64], b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(b.rows(), b.cols(), |i, j| b[(i, j)] * (2.0 / (lambda[i] + lambda[j])))
}

fn sym_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let ab = a.matmul(b);
    let ba = b.matmul(a);
    (&ab + &ba).scale(0.5)
}

/// Largest α with Λ + α D ⪰ 0 (infinite when D ⪰ 0).
fn max_step(lambda: &[f64], dir: &CMatrix) -> f64 {
    let isq: Vec<f64> = lambda.iter().map(|&l| 1.0 / libm::sqrt(l)).collect();
    let m = CMatrix::from_fn(dir.rows(), dir.cols(), |i, j| dir[(i, j)] * (isq[i] * isq[j]));
    let lmin = eigh(&m.hermitian_part()).min();
    if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY }
}

fn diag(lambda: &[f64]) -> CMatrix {
    CMatrix::from_real_diag(lambda)
}

struct Direction {
    dx: Vec<f64>,
    ds: Vec<CMatrix>,
    dz: Vec<CMatrix>,
    dtau: f64,
    dkappa: f64,
}

impl<'a> Ipm<'a> {
    fn n(&self) -> usize {
        self.c.len()
    }

    /// −Σ_k x_k F_k for block j.
    fn g_apply(&self, mats: &[CMatrix], x: &[f64], d: usize) -> CMatrix {
        let mut out = CMatrix::zeros(d, d);
        for (f, &xk) in mats.iter().zip(x) {
            if xk != 0.0 {
                out.axpy(-xk, f);
            }
        }
        out
    }

    fn run(&self, start: Option<Vec<f64>>) -> IpmOutput {
        let n = self.n();
        let nb = self.blocks.len();
        let degree: usize = self.blocks.iter().map(|b| b.dim).sum();
        let hnorm = libm::sqrt(self.blocks.iter().map(|b| sq(b.h.frobenius_norm())).sum::<f64>());
        let cnorm = norm(self.c);

        // Starting point: the supplied x when its slack is positive definite,
        // otherwise x = 0 with identity slack.
        let mut x = vec![0.0; n];
        let mut s: Vec<CMatrix> = self.blocks.iter().map(|b| CMatrix::identity(b.dim)).collect();
        if let Some(w0) = start {
            let slack: Vec<CMatrix> =
                self.blocks.iter().map(|b| &b.h - &self.g_apply(&b.f, &w0, b.dim)).collect();
            if slack.iter().all(|m| cholesky(&m.hermitian_part()).is_ok()) {
                x = w0;
                s = slack.iter().map(|m| m.hermitian_part()).collect();
            }
        }
        let mut z: Vec<CMatrix> = self.blocks.iter().map(|b| CMatrix::identity(b.dim)).collect();
        let mut tau = 1.0;
        let mut kappa = 1.0;

        let mut status = SdpStatus::NumericalFailure;
        let mut iterations = 0;
        let mut pres: f64;
        let mut dres: f64;
        let mut small_steps = 0;

        loop {
            // Residuals.
            let rx: Vec<f64> = (0..n)
                .map(|k| {
                    -self.blocks.iter().zip(&z).map(|(b, zj)| b.f[k].inner_re(zj)).sum::<f64>() + self.c[k] * tau
                })
                .collect();
            let rz: Vec<CMatrix> = self
                .blocks
                .iter()
                .zip(&s)
                .map(|(b, sj)| {
                    let mut r = &self.g_apply(&b.f, &x, b.dim) + sj;
                    r.axpy(-tau, &b.h);
                    r
                })
                .collect();
            let cx = dot(self.c, &x);
            let hz: f64 = self.blocks.iter().zip(&z).map(|(b, zj)| b.h.inner_re(zj)).sum();
            let rtau = kappa + cx + hz;
            let sz: f64 = s.iter().zip(&z).map(|(a, b)| a.inner_re(b)).sum();
            let mu = (sz + tau * kappa) / (degree as f64 + 1.0);

            let rz_norm = libm::sqrt(rz.iter().map(|m| sq(m.frobenius_norm())).sum::<f64>());
            pres = rz_norm / tau / (1.0 + hnorm);
            dres = norm(&rx) / tau / (1.0 + cnorm);
            let pobj = cx / tau;
            let dobj = -hz / tau;
            let gap = (pobj - dobj).abs();
            log::trace!(
                "it {iterations:3} pobj {pobj:+.10e} dobj {dobj:+.10e} pres {pres:.2e} dres {dres:.2e} tau {tau:.2e} kappa {kappa:.2e}"
            );

            if pres <= self.opts.feas_tol
                && dres <= self.opts.feas_tol
                && gap <= self.opts.gap_tol * (1.0 + pobj.abs())
                && sz / (tau * tau) <= self.opts.gap_tol * (1.0 + pobj.abs())
            {
                status = SdpStatus::Optimal;
                break;
            }
            // Infeasibility certificates.
            if hz < 0.0 {
                let gz: f64 = libm::sqrt(
                    (0..n)
                        .map(|k| sq(self.blocks.iter().zip(&z).map(|(b, zj)| b.f[k].inner_re(zj)).sum::<f64>()))
                        .sum(),
                );
                if gz / -hz <= self.opts.feas_tol || tau / kappa < self.opts.infeasibility_ratio {
                    status = SdpStatus::Infeasible;
                    break;
                }
            }
            if cx < 0.0 {
                let gxs = libm::sqrt(
                    self.blocks
                        .iter()
                        .zip(&s)
                        .map(|(b, sj)| sq((&self.g_apply(&b.f, &x, b.dim) + sj).frobenius_norm()))
                        .sum::<f64>(),
                );
                if gxs / -cx <= self.opts.feas_tol || (tau / kappa < self.opts.infeasibility_ratio && hz >= 0.0) {
                    status = SdpStatus::Unbounded;
                    break;
                }
            }
            if iterations >= self.opts.max_iters {
                break;
            }
            iterations += 1;

            // Scaling and scaled data.
            let mut scalings = Vec::with_capacity(nb);
            for (sj, zj) in s.iter().zip(&z) {
                match nt_scaling(sj, zj) {
                    Some(sc) => scalings.push(sc),
                    None => {
                        log::debug!("lost positive definiteness at iteration {iterations}");
                        return self.output(status, x, z, tau, sz, pres, dres, iterations);
                    }
                }
            }
            let ft: Vec<Vec<CMatrix>> = self
                .blocks
                .iter()
                .zip(&scalings)
                .map(|(b, sc)| b.f.iter().map(|f| sc.rinv.matmul(f).matmul_adj(&sc.rinv)).collect())
                .collect();
            let ht: Vec<CMatrix> =
                self.blocks.iter().zip(&scalings).map(|(b, sc)| sc.rinv.matmul(&b.h).matmul_adj(&sc.rinv)).collect();
            let rzt: Vec<CMatrix> =
                rz.iter().zip(&scalings).map(|(r, sc)| sc.rinv.matmul(r).matmul_adj(&sc.rinv)).collect();

            let mut hmat = vec![0.0; n * n];
            for k in 0..n {
                for l in k..n {
                    let v: f64 = ft.iter().map(|fj| fj[k].inner_re(&fj[l])).sum();
                    hmat[k * n + l] = v;
                    hmat[l * n + k] = v;
                }
            }
            let chol = if n > 0 {
                match cholesky_regularized(&hmat, n) {
                    Some(l) => l,
                    None => {
                        log::debug!("Schur complement factorisation failed at iteration {iterations}");
                        return self.output(status, x, z, tau, sz, pres, dres, iterations);
                    }
                }
            } else {
                Vec::new()
            };
            let solve_h = |rhs: &[f64]| if n > 0 { cholesky_solve(&chol, n, rhs) } else { Vec::new() };
            let gt_apply = |mats: &[CMatrix]| -> Vec<f64> {
                (0..n).map(|k| -ft.iter().zip(mats).map(|(fj, m)| fj[k].inner_re(m)).sum::<f64>()).collect()
            };
            let a_vec = gt_apply(&ht);
            let u2 = solve_h(&a_vec.iter().zip(self.c).map(|(a, c)| a - c).collect::<Vec<_>>());
            let dz2: Vec<CMatrix> = self
                .blocks
                .iter()
                .enumerate()
                .map(|(j, b)| &self.g_apply(&ft[j], &u2, b.dim) - &ht[j])
                .collect();
            let denom = dot(self.c, &u2) + dz2.iter().zip(&ht).map(|(a, b)| a.inner_re(b)).sum::<f64>() - kappa / tau;

            let newton = |eta: f64, q: &[CMatrix], rtk: f64| -> Direction {
                let bz: Vec<CMatrix> = q
                    .iter()
                    .zip(&rzt)
                    .map(|(qj, rj)| {
                        let mut m = qj.clone();
                        m.axpy(eta, rj);
                        m
                    })
                    .collect();
                let gtb = gt_apply(&bz);
                let rhs1: Vec<f64> = rx.iter().zip(&gtb).map(|(r, g)| -eta * r - g).collect();
                let u1 = solve_h(&rhs1);
                let dz1: Vec<CMatrix> = self
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(j, b)| &self.g_apply(&ft[j], &u1, b.dim) + &bz[j])
                    .collect();
                let num = -eta * rtau - dot(self.c, &u1) - dz1.iter().zip(&ht).map(|(a, b)| a.inner_re(b)).sum::<f64>()
                    - rtk / tau;
                let dtau = num / denom;
                let dx: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| a + b * dtau).collect();
                let dz: Vec<CMatrix> = dz1
                    .iter()
                    .zip(&dz2)
                    .map(|(a, b)| {
                        let mut m = a.clone();
                        m.axpy(dtau, b);
                        m.hermitian_part()
                    })
                    .collect();
                let ds: Vec<CMatrix> = q.iter().zip(&dz).map(|(qj, dzj)| (qj - dzj).hermitian_part()).collect();
                let dkappa = (rtk - kappa * dtau) / tau;
                Direction { dx, ds, dz, dtau, dkappa }
            };

            let step_len = |dir: &Direction| -> f64 {
                let mut alpha = f64::INFINITY;
                for (sc, (ds, dz)) in scalings.iter().zip(dir.ds.iter().zip(&dir.dz)) {
                    alpha = alpha.min(max_step(&sc.lambda, ds)).min(max_step(&sc.lambda, dz));
                }
                if dir.dtau < 0.0 {
                    alpha = alpha.min(-tau / dir.dtau);
                }
                if dir.dkappa < 0.0 {
                    alpha = alpha.min(-kappa / dir.dkappa);
                }
                alpha
            };

            // Predictor.
            let q_aff: Vec<CMatrix> = scalings.iter().map(|sc| diag(&sc.lambda).scale(-1.0)).collect();
            let aff = newton(1.0, &q_aff, -tau * kappa);
            let alpha_aff = step_len(&aff).min(1.0);
            let mut mu_aff = (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa);
            for (sc, (ds, dz)) in scalings.iter().zip(aff.ds.iter().zip(&aff.dz)) {
                let mut a = diag(&sc.lambda);
                a.axpy(alpha_aff, ds);
                let mut b = diag(&sc.lambda);
                b.axpy(alpha_aff, dz);
                mu_aff += a.inner_re(&b);
            }
            mu_aff /= degree as f64 + 1.0;
            let ratio = (mu_aff / mu).clamp(0.0, 1.0);
            let sigma = ratio * ratio * ratio;

            // Corrector.
            let q_cc: Vec<CMatrix> = scalings
                .iter()
                .zip(aff.ds.iter().zip(&aff.dz))
                .map(|(sc, (ds, dz))| {
                    let mut rc = CMatrix::from_real_diag(&sc.lambda.iter().map(|l| -l * l + sigma * mu).collect::<Vec<_>>());
                    rc = &rc - &sym_product(ds, dz);
                    lyap_inverse(&sc.lambda, &rc)
                })
                .collect();
            let rtk = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
            let dir = newton(1.0 - sigma, &q_cc, rtk);
            let alpha = (STEP_FRACTION * step_len(&dir)).min(1.0);
            if !(alpha > 0.0) || !alpha.is_finite() {
                log::debug!("non-positive step length at iteration {iterations}");
                return self.output(status, x, z, tau, sz, pres, dres, iterations);
            }
            if alpha < 1e-8 {
                small_steps += 1;
                if small_steps > 3 {
                    log::debug!("stalled at iteration {iterations}");
                    return self.output(status, x, z, tau, sz, pres, dres, iterations);
                }
            }

            for (xi, dxi) in x.iter_mut().zip(&dir.dx) {
                *xi += alpha * dxi;
            }
            for j in 0..nb {
                let sc = &scalings[j];
                let mut st = diag(&sc.lambda);
                st.axpy(alpha, &dir.ds[j]);
                s[j] = sc.r.matmul(&st).matmul_adj(&sc.r).hermitian_part();
                let mut zt = diag(&sc.lambda);
                zt.axpy(alpha, &dir.dz[j]);
                z[j] = sc.rinv.adjoint().matmul(&zt).matmul(&sc.rinv).hermitian_part();
            }
            tau += alpha * dir.dtau;
            kappa += alpha * dir.dkappa;
        }
        let sz: f64 = s.iter().zip(&z).map(|(a, b)| a.inner_re(b)).sum();
        self.output(status, x, z, tau, sz, pres, dres, iterations)
    }

    #[allow(clippy::too_many_arguments)]
    fn output(
        &self,
        status: SdpStatus,
        x: Vec<f64>,
        z: Vec<CMatrix>,
        tau: f64,
        sz: f64,
        pres: f64,
        dres: f64,
        iterations: usize,
    ) -> IpmOutput {
        match status {
            SdpStatus::Infeasible => {
                // Report the normalised Farkas certificate rather than z/τ.
                let hz: f64 = self.blocks.iter().zip(&z).map(|(b, zj)| b.h.inner_re(zj)).sum();
                let scale = if hz < 0.0 { -1.0 / hz } else { 1.0 };
                IpmOutput {
                    status,
                    w: x.iter().map(|v| v / tau).collect(),
                    z: z.iter().map(|m| m.scale(scale)).collect(),
                    complementarity: sz / (tau * tau),
                    pres,
                    dres,
                    iterations,
                }
            }
            _ => IpmOutput {
                status,
                w: x.iter().map(|v| v / tau).collect(),
                z: z.iter().map(|m| m.scale(1.0 / tau)).collect(),
                complementarity: sz / (tau * tau),
                pres,
                dres,
                iterations,
            },
        }
    }
}
