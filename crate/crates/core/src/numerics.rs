//! Dense numerical kernels: Hermitian eigensolver, principal-value quadrature,
//! closed-form 2×2 propagator and a spectral peak search.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::HermitianMatrix;
use crate::model::SpectralDensity;

const JACOBI_MAX_SWEEPS: usize = 60;
/// Converged when the off-diagonal Frobenius norm is below this times ‖H‖.
pub const DEFAULT_JACOBI_TOL: f64 = 1e-14;

/// Full eigendecomposition of a Hermitian matrix.
///
/// `values` ascend; column `i` of `vectors` is the unit eigenvector of
/// `values[i]`, with its largest-magnitude component made real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> nalgebra::DVector<Complex64> {
        self.vectors.column(i).into_owned()
    }

    /// Lowest `n` values shifted so the ground value is zero.
    pub fn lowest_shifted(&self, n: usize) -> Vec<f64> {
        let e0 = self.values[0];
        self.values.iter().take(n).map(|e| e - e0).collect()
    }

    /// `V† op V`.
    pub fn to_eigenbasis(&self, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.vectors.adjoint() * op * &self.vectors
    }
}

/// Cyclic complex Jacobi diagonalisation.
pub fn eigh(h: &HermitianMatrix) -> Result<Spectrum> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let off_norm = |a: &DMatrix<Complex64>| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = scale == 0.0;
    let mut last_off = 0.0;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag <= 1e-300 || mag <= 1e-18 * scale {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = b / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U restricted to (p, q) is [[c, s·e^{iφ}], [-s·e^{-iφ}, c]].
                let u_pq = phase * s;
                let u_qp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * u_qp.conj();
                    a[(q, k)] = apk * u_pq.conj() + aqk * c;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
        last_off = off_norm(&a);
        converged = last_off <= DEFAULT_JACOBI_TOL * scale;
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Jacobi eigensolver",
            iterations: JACOBI_MAX_SWEEPS,
            residual: last_off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));

    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut best = 0;
        let mut best_mag = -1.0;
        for k in 0..n {
            let m = v[(k, i)].norm();
            if m > best_mag * (1.0 + 1e-12) {
                best = k;
                best_mag = m;
            }
        }
        let fix = v[(best, i)].conj() / best_mag;
        for k in 0..n {
            vectors[(k, col)] = v[(k, i)] * fix;
        }
    }
    Ok(Spectrum { values, vectors })
}

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature on `[a, b]` to absolute `tol`.
///
/// Returns `(estimate, error_bound)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = gauss_kronrod_15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > tol {
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                estimate: total,
                error_bound: err,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, v0, e0) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::Quadrature {
                estimate: total,
                error_bound: err,
            });
        }
        let (v1, e1) = gauss_kronrod_15(&f, lo, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, hi);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
        // Re-sum occasionally so cancellation in the running totals cannot drift.
        if parts.len() % 64 == 0 {
            total = parts.iter().map(|p| p.2).sum();
            err = parts.iter().map(|p| p.3).sum();
        }
    }
    let total = parts.iter().map(|p| p.2).sum();
    Ok((total, err))
}

/// Half-width of the symmetric window cut out around the pole at `|ω_ref|`.
pub fn excision_half_width(omega_ref: f64) -> f64 {
    let a = omega_ref.abs();
    (1e-3 * a).max(1e-6).min(0.5 * a)
}

/// Principal value
/// `P∫₀^{ω_cut} dω J(ω) / (ω² - ω_ref²) · (ω - ω_ref coth(βω/2))`.
///
/// The pole at `ω = |ω_ref|` is handled by pairing `ω = |ω_ref| ± u` inside a
/// window of half-width [`excision_half_width`], which cancels the odd part of
/// the integrand analytically; the rest is integrated adaptively. `beta` may be
/// `f64::INFINITY` (T = 0).
pub fn principal_value(
    j: &SpectralDensity,
    omega_ref: f64,
    beta: f64,
    omega_cut: f64,
    tol: f64,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
    }
    if !(omega_cut > 0.0) || !(tol > 0.0) || !omega_ref.is_finite() {
        return Err(Error::Domain(format!(
            "need omega_cut > 0, tol > 0 and finite omega_ref (got {omega_cut}, {tol}, {omega_ref})"
        )));
    }
    let a = omega_ref.abs();
    if a == 0.0 {
        // Integrand reduces to J(ω)/ω, regular at the origin.
        return integrate(|w| j.j_over_omega(w), 0.0, omega_cut, tol).map(|r| r.0);
    }
    // Regular factor: integrand = numerator(ω) / (ω - a).
    let numerator = |w: f64| {
        (j.eval_unchecked(w) * w - omega_ref * j.j_coth(w, beta)) / (w + a)
    };
    let eps = excision_half_width(a);
    if a - eps >= omega_cut {
        return integrate(|w| numerator(w) / (w - a), 0.0, omega_cut, tol).map(|r| r.0);
    }
    let cut = omega_cut.max(a + 2.0 * eps);
    let third = tol / 3.0;
    let (below, _) = integrate(|w| numerator(w) / (w - a), 0.0, a - eps, third)?;
    let (window, _) = integrate(
        |u| (numerator(a + u) - numerator(a - u)) / u,
        0.0,
        eps,
        third,
    )?;
    let (above, _) = integrate(|w| numerator(w) / (w - a), a + eps, cut, third)?;
    Ok(below + window + above)
}

/// `exp(m t) v0` in closed form.
///
/// Uses `exp(mt) = e^{μt}[cosh(δt) I + sinh(δt)/δ (m - μI)]` with `μ = tr m / 2`
/// and `δ² = ((m₀₀ - m₁₁)/2)² + m₀₁m₁₀`. The expression is even in `δ`; near a
/// defective point (`δt → 0`) the series of `sinh(δt)/δ` is used.
pub fn propagate_2x2(m: &Matrix2<Complex64>, v0: &Vector2<Complex64>, t: f64) -> Vector2<Complex64> {
    debug_assert!(t >= 0.0, "propagation time must be nonnegative");
    exp_2x2(m, t) * v0
}

/// `exp(m t)` for a complex 2×2 matrix.
pub fn exp_2x2(m: &Matrix2<Complex64>, t: f64) -> Matrix2<Complex64> {
    let mu = (m[(0, 0)] + m[(1, 1)]) * 0.5;
    let half_diff = (m[(0, 0)] - m[(1, 1)]) * 0.5;
    let delta = (half_diff * half_diff + m[(0, 1)] * m[(1, 0)]).sqrt();
    let dt = delta * t;
    let (cosh_part, sinh_over_delta) = if dt.norm() < 1e-5 {
        let d2 = dt * dt;
        (
            (mu * t).exp() * (1.0 + d2 * 0.5 + d2 * d2 / 24.0),
            (mu * t).exp() * t * (1.0 + d2 / 6.0 + d2 * d2 / 120.0),
        )
    } else {
        let up = ((mu + delta) * t).exp();
        let down = ((mu - delta) * t).exp();
        ((up + down) * 0.5, (up - down) / (delta * 2.0))
    };
    let shifted = m - Matrix2::identity() * mu;
    Matrix2::identity() * cosh_part + shifted * sinh_over_delta
}

/// Local maxima of the Hann-windowed amplitude spectrum
/// `|∫ w(t) x(t) e^{-iωt} dt|` on a uniform grid of `n_grid` frequencies in
/// `[omega_min, omega_max]`, sorted by decreasing amplitude.
///
/// `times` must be uniformly spaced.
pub fn spectral_peaks(
    times: &[f64],
    samples: &[f64],
    omega_min: f64,
    omega_max: f64,
    n_grid: usize,
) -> Vec<(f64, f64)> {
    assert_eq!(times.len(), samples.len());
    assert!(n_grid >= 3 && times.len() >= 2);
    let n = times.len();
    let span = times[n - 1] - times[0];
    let dt = span / (n - 1) as f64;
    let mean = samples.iter().sum::<f64>() / n as f64;
    let windowed: Vec<f64> = samples
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let w = 0.5 - 0.5 * (std::f64::consts::TAU * k as f64 / (n - 1) as f64).cos();
            w * (x - mean)
        })
        .collect();
    let step = (omega_max - omega_min) / (n_grid - 1) as f64;
    let amplitude: Vec<f64> = (0..n_grid)
        .map(|i| {
            let w = omega_min + step * i as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, x) in windowed.iter().enumerate() {
                acc += Complex64::from_polar(*x, -w * (times[k] - times[0]));
            }
            acc.norm() * dt
        })
        .collect();
    let mut peaks: Vec<(f64, f64)> = (1..n_grid - 1)
        .filter(|&i| amplitude[i] > amplitude[i - 1] && amplitude[i] >= amplitude[i + 1])
        .map(|i| {
            // Parabolic refinement of the grid maximum.
            let (l, c, r) = (amplitude[i - 1], amplitude[i], amplitude[i + 1]);
            let denom = l - 2.0 * c + r;
            let shift = if denom.abs() > 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
            (omega_min + step * (i as f64 + shift), c)
        })
        .collect();
    peaks.sort_by(|x, y| y.1.total_cmp(&x.1));
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-2.0..2.0), 0.0);
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianMatrix::new(m).unwrap()
    }

    fn check_spectrum(h: &HermitianMatrix, sp: &Spectrum) {
        let n = h.dim();
        let norm = h.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        for i in 0..n {
            let v = sp.vector(i);
            let r = h.matrix() * &v - &v * c(sp.values[i], 0.0);
            assert!(r.norm() <= 1e-10 * norm, "residual {} for pair {i}", r.norm());
        }
        let gram = sp.vectors.adjoint() * &sp.vectors;
        let id = DMatrix::<Complex64>::identity(n, n);
        assert!((gram - id).norm() <= 1e-10);
        assert!(sp.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let h = HermitianMatrix::new(DMatrix::identity(4, 4)).unwrap();
        let sp = eigh(&h).unwrap();
        assert_eq!(sp.values, vec![1.0; 4]);
        check_spectrum(&h, &sp);
    }

    #[test]
    fn diagonal_is_sorted() {
        let d = [1.5, 0.5, -0.5, 0.5];
        let h = HermitianMatrix::new(DMatrix::from_fn(4, 4, |i, j| {
            if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) }
        }))
        .unwrap();
        let sp = eigh(&h).unwrap();
        assert_eq!(sp.values, vec![-0.5, 0.5, 0.5, 1.5]);
        // Tie broken by original index: 0.5 at index 1 comes before index 3.
        assert_eq!(sp.vectors[(1, 1)], c(1.0, 0.0));
        assert_eq!(sp.vectors[(3, 2)], c(1.0, 0.0));
    }

    #[test]
    fn random_dim_18_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..5 {
            let h = random_hermitian(18, &mut rng);
            let sp = eigh(&h).unwrap();
            check_spectrum(&h, &sp);
            let lambda = DMatrix::from_fn(18, 18, |i, j| {
                if i == j { c(sp.values[i], 0.0) } else { c(0.0, 0.0) }
            });
            let rebuilt = &sp.vectors * lambda * sp.vectors.adjoint();
            assert!((rebuilt - h.matrix()).norm() <= 1e-10);
        }
    }

    #[test]
    fn matches_reference_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 5, 12, 36] {
            let h = random_hermitian(n, &mut rng);
            let ours = eigh(&h).unwrap();
            let theirs = h.matrix().clone().symmetric_eigen();
            let mut reference: Vec<f64> = theirs.eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (a, b) in ours.values.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-11, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn output_is_deterministic_with_phase_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(10, &mut rng);
        let a = eigh(&h).unwrap();
        let b = eigh(&h).unwrap();
        assert_eq!(a, b);
        for i in 0..10 {
            let col = a.vector(i);
            let (k, _) = col
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .unwrap();
            assert!(col[k].im.abs() < 1e-15 && col[k].re > 0.0);
        }
    }

    #[test]
    fn zero_matrix() {
        let h = HermitianMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        let sp = eigh(&h).unwrap();
        assert_eq!(sp.values, vec![0.0; 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn eigenvalues_invariant_under_unitary_conjugation(seed in 0u64..10_000, n in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(n, &mut rng);
            // A random unitary from the eigenvectors of another random matrix.
            let u = eigh(&random_hermitian(n, &mut rng)).unwrap().vectors;
            let turned = h.unitary_transform(&u).unwrap();
            let a = eigh(&h).unwrap().values;
            let b = eigh(&turned).unwrap().values;
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    fn ohmic() -> SpectralDensity {
        SpectralDensity::ohmic(0.02, 10.0).unwrap()
    }

    /// Symmetric midpoint rule around the pole on [0, 2a] (node pairs cancel
    /// the singular part) plus composite Simpson on [2a, cut].
    fn pv_oracle(j: &SpectralDensity, omega_ref: f64, beta: f64, cut: f64) -> f64 {
        let a = omega_ref.abs();
        let coth = |w: f64| if beta.is_infinite() { 1.0 } else { 1.0 / (0.5 * beta * w).tanh() };
        let f = |w: f64| {
            let jw = j.eval(w).unwrap();
            jw / (w * w - omega_ref * omega_ref) * (w - omega_ref * coth(w))
        };
        let n_mid = 400_000usize;
        let h = 2.0 * a / n_mid as f64;
        let mut near = 0.0;
        for k in 0..n_mid {
            near += f((k as f64 + 0.5) * h);
        }
        near *= h;
        let n_s = 2 * 400_000usize;
        let hs = (cut - 2.0 * a) / n_s as f64;
        let mut far = f(2.0 * a) + f(cut);
        for k in 1..n_s {
            let w = 2.0 * a + k as f64 * hs;
            far += if k % 2 == 1 { 4.0 } else { 2.0 } * f(w);
        }
        far *= hs / 3.0;
        near + far
    }

    #[test]
    fn principal_value_matches_brute_force() {
        let j = ohmic();
        let cut = 500.0;
        for omega_ref in [1.0, -1.0, 0.37, -2.5] {
            let fast = principal_value(&j, omega_ref, 10.0, cut, 1e-11).unwrap();
            let slow = pv_oracle(&j, omega_ref, 10.0, cut);
            assert!((fast - slow).abs() < 1e-6, "ω={omega_ref}: {fast} vs {slow}");
        }
    }

    #[test]
    fn principal_value_reference_point() {
        // κ = 0.02, ωc = 10, ω_ref = 1, β = 10: 40-digit Gauss-Legendre on the
        // symmetrically paired integrand.
        let oracle = 0.160_387_956_693_209_70;
        let v = principal_value(&ohmic(), 1.0, 10.0, 500.0, 1e-12).unwrap();
        assert!((v - oracle).abs() < 1e-10, "{v}");
    }

    #[test]
    fn principal_value_of_zero_density_is_zero() {
        let j = SpectralDensity::ohmic(0.0, 10.0).unwrap();
        assert_eq!(principal_value(&j, 1.3, 5.0, 500.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn principal_value_decays_far_above_support() {
        let j = SpectralDensity::ohmic(0.02, 1.0).unwrap();
        let vals: Vec<f64> = [20.0, 40.0, 80.0, 160.0]
            .iter()
            .map(|&w| principal_value(&j, w, 10.0, 50.0, 1e-12).unwrap().abs())
            .collect();
        assert!(vals.windows(2).all(|p| p[1] < p[0]), "{vals:?}");
    }

    #[test]
    fn principal_value_zero_temperature_and_zero_frequency() {
        let j = ohmic();
        let cold = principal_value(&j, 0.8, f64::INFINITY, 500.0, 1e-11).unwrap();
        let oracle = pv_oracle(&j, 0.8, f64::INFINITY, 500.0);
        assert!((cold - oracle).abs() < 1e-6);
        // ω_ref = 0: ∫ J/ω = κ ωc (1 - e^{-50}).
        let zero = principal_value(&j, 0.0, 10.0, 500.0, 1e-12).unwrap();
        assert!((zero - 0.2).abs() < 1e-10);
    }

    #[test]
    fn principal_value_is_linear_in_density() {
        let a = principal_value(&ohmic(), 0.7, 8.0, 500.0, 1e-12).unwrap();
        let doubled = SpectralDensity::ohmic(0.04, 10.0).unwrap();
        let b = principal_value(&doubled, 0.7, 8.0, 500.0, 1e-12).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-10);
    }

    #[test]
    fn principal_value_rejects_bad_beta() {
        assert!(principal_value(&ohmic(), 1.0, 0.0, 500.0, 1e-10).is_err());
        assert!(principal_value(&ohmic(), 1.0, -1.0, 500.0, 1e-10).is_err());
    }

    #[test]
    fn propagate_zero_generator() {
        let v0 = Vector2::new(c(0.3, -0.1), c(0.5, 0.2));
        let out = propagate_2x2(&Matrix2::zeros(), &v0, 7.0);
        assert!((out - v0).norm() < 1e-15);
    }

    #[test]
    fn propagate_diagonal_decouples() {
        let (w1, w2, g1, g4) = (0.7, 1.3, 0.02, 0.05);
        let m = Matrix2::new(c(-g1, w1), c(0.0, 0.0), c(0.0, 0.0), c(-g4, w2));
        let v0 = Vector2::new(c(0.5, 0.0), c(-0.2, 0.0));
        let t = 13.0;
        let out = propagate_2x2(&m, &v0, t);
        assert!((out[0] - v0[0] * c(-g1 * t, w1 * t).exp()).norm() < 1e-13);
        assert!((out[1] - v0[1] * c(-g4 * t, w2 * t).exp()).norm() < 1e-13);
    }

    #[test]
    fn propagate_defective_matrix() {
        // Jordan block λ I + N: exp = e^{λt}(I + N t).
        let lambda = c(-0.1, 0.4);
        let m = Matrix2::new(lambda, c(1.0, 0.0), c(0.0, 0.0), lambda);
        let v0 = Vector2::new(c(0.0, 0.0), c(1.0, 0.0));
        let t = 2.5;
        let out = propagate_2x2(&m, &v0, t);
        let e = (lambda * t).exp();
        assert!((out[0] - e * t).norm() < 1e-12);
        assert!((out[1] - e).norm() < 1e-12);
    }

    fn rk4_oracle(m: &Matrix2<Complex64>, v0: &Vector2<Complex64>, t: f64, dt: f64) -> Vector2<Complex64> {
        let steps = (t / dt).round() as usize;
        let h = t / steps as f64;
        let mut v = *v0;
        for _ in 0..steps {
            let k1 = m * v;
            let k2 = m * (v + k1 * c(0.5 * h, 0.0));
            let k3 = m * (v + k2 * c(0.5 * h, 0.0));
            let k4 = m * (v + k3 * c(h, 0.0));
            v += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0);
        }
        v
    }

    #[test]
    fn propagate_matches_rk4() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..4 {
            let mut draw = || c(rng.gen_range(-0.3..0.1), rng.gen_range(-1.5..1.5));
            let m = Matrix2::new(draw(), draw(), draw(), draw());
            let v0 = Vector2::new(draw(), draw());
            let exact = propagate_2x2(&m, &v0, 10.0);
            let stepped = rk4_oracle(&m, &v0, 10.0, 1e-4);
            assert!((exact - stepped).norm() < 1e-8, "{}", (exact - stepped).norm());
        }
    }

    proptest! {
        #[test]
        fn propagator_semigroup(
            entries in proptest::collection::vec(-1.0f64..1.0, 8),
            t1 in 0.0f64..5.0,
            t2 in 0.0f64..5.0,
        ) {
            let m = Matrix2::new(
                c(entries[0] * 0.3 - 0.1, entries[1]),
                c(entries[2] * 0.2, entries[3] * 0.2),
                c(entries[4] * 0.2, entries[5] * 0.2),
                c(entries[6] * 0.3 - 0.1, entries[7]),
            );
            let v0 = Vector2::new(c(1.0, 0.0), c(0.0, 1.0));
            let two_steps = propagate_2x2(&m, &propagate_2x2(&m, &v0, t2), t1);
            let one_step = propagate_2x2(&m, &v0, t1 + t2);
            prop_assert!((two_steps - one_step).norm() < 1e-9);
        }
    }

    #[test]
    fn finds_two_tones() {
        let times: Vec<f64> = (0..4000).map(|k| k as f64 * 0.05).collect();
        let x: Vec<f64> = times
            .iter()
            .map(|t| (0.6 * t).cos() * (-0.01 * t).exp() + 0.5 * (1.35 * t).cos() * (-0.02 * t).exp())
            .collect();
        let peaks = spectral_peaks(&times, &x, 0.05, 3.0, 3000);
        assert!((peaks[0].0 - 0.6).abs() < 2e-3, "{peaks:?}");
        assert!((peaks[1].0 - 1.35).abs() < 2e-3, "{peaks:?}");
        assert!(peaks[2].1 < 0.05 * peaks[1].1);
    }
}
