//! Reference computations that avoid the library's own eigensolver and SDP
//! solver.
#![allow(dead_code)]

use coherence_forge_core::{CMatrix, Complex64, DensityMatrix, HermitianMatrix};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficients of det(λ − A) by Faddeev–LeVerrier, highest degree first.
pub fn char_poly(a: &CMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -Tr(A M_k)/k
        let mut next = a.matmul(&m);
        let prev = *coeffs.last().unwrap();
        for i in 0..n {
            next[(i, i)] += prev;
        }
        m = next;
        let am = a.matmul(&m);
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().fold(c(0.0, 0.0), |acc, &k| acc * z + k)
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let bound = 1.0 + p.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(p, z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Eigenvalues of a small Hermitian matrix from its characteristic polynomial,
/// ascending.
pub fn charpoly_eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = poly_roots(&char_poly(h.as_matrix())).iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Smallest eigenvalue of a 2×2 or 3×3 Hermitian matrix in closed form.
pub fn lambda_min_small(m: &CMatrix) -> f64 {
    match m.rows() {
        2 => {
            let (a, b, off) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)].norm());
            0.5 * (a + b) - (0.25 * (a - b).powi(2) + off * off).sqrt()
        }
        3 => {
            // trigonometric solution of the depressed cubic
            let q = (m[(0, 0)].re + m[(1, 1)].re + m[(2, 2)].re) / 3.0;
            let mut b = m.clone();
            for i in 0..3 {
                b[(i, i)] -= c(q, 0.0);
            }
            let p2 = b.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 6.0;
            let p = p2.sqrt();
            if p < 1e-300 {
                return q;
            }
            let det = {
                let g = |i: usize, j: usize| b[(i, j)];
                (g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0)))
                .re
            };
            let r = (det / (2.0 * p * p2)).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
        }
        _ => panic!("closed form only for d = 2, 3"),
    }
}

/// Maximum of a concave function on [lo, hi] by golden-section search.
fn golden_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    f1.max(f2).max(f(lo)).max(f(hi))
}

/// max over diagonal states δ of λ_min((1+s)δ − ρ).
fn best_margin(rho: &DensityMatrix, s: f64) -> f64 {
    let d = rho.dim();
    let m = |diag: &[f64]| {
        let mut a = rho.as_matrix().scale(-1.0);
        for (i, &x) in diag.iter().enumerate() {
            a[(i, i)] += c((1.0 + s) * x, 0.0);
        }
        lambda_min_small(&a)
    };
    match d {
        2 => golden_max(0.0, 1.0, |t| m(&[t, 1.0 - t])),
        3 => golden_max(0.0, 1.0, |a| golden_max(0.0, 1.0 - a, |b| m(&[a, b, 1.0 - a - b]))),
        _ => panic!("oracle supports d = 2, 3"),
    }
}

/// Robustness of coherence by bisection on s: the smallest s for which some
/// incoherent δ has (1+s)δ ⪰ ρ.
pub fn roc_bisection(rho: &DensityMatrix) -> f64 {
    let (mut lo, mut hi) = (0.0, (rho.dim() - 1) as f64 + 1e-9);
    if best_margin(rho, 0.0) >= 0.0 {
        return 0.0;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if best_margin(rho, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// f(C, d) = C² / (d(d−1) p*), where p* ≥ 1/d is the largest diagonal entry
/// allowed by (√p + √((1−p)(d−1)))² − 1 ≥ C, found by bisection.
pub fn f_by_inversion(cl1: f64, d: usize) -> f64 {
    let df = d as f64;
    let bound = |p: f64| (p.sqrt() + ((1.0 - p) * (df - 1.0)).sqrt()).powi(2) - 1.0;
    let (mut lo, mut hi) = (1.0 / df, 1.0);
    if bound(hi) >= cl1 {
        lo = hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) >= cl1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cl1 * cl1 / (df * (df - 1.0) * lo)
}

/// ½(1 + ‖p₀ρ₀ − p₁ρ₁‖₁) for qubits.
pub fn helstrom_qubit(p0: f64, r0: &DensityMatrix, r1: &DensityMatrix) -> f64 {
    let diff = r0.scale(p0).sub(&r1.scale(1.0 - p0));
    let m = diff.as_matrix();
    let (a, b, off) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)].norm());
    let rad = (0.25 * (a - b).powi(2) + off * off).sqrt();
    let mid = 0.5 * (a + b);
    0.5 * (1.0 + (mid + rad).abs() + (mid - rad).abs())
}

/// Gram matrix ⟨v_i|v_j⟩.
pub fn gram(vs: &[Vec<Complex64>]) -> CMatrix {
    CMatrix::from_fn(vs.len(), vs.len(), |i, j| vs[i].iter().zip(&vs[j]).map(|(a, b)| a.conj() * b).sum())
}

pub fn abs_sum_squared_minus_one(psi: &[Complex64]) -> f64 {
    psi.iter().map(|z| z.norm()).sum::<f64>().powi(2) - 1.0
}
