//! Bath rates, Redfield tensors and dissipative dynamics.
//!
//! The bath couples to the oscillator coordinate. In the DSR frame this is
//! `h̃ = c + c† − [2Re g/(ω0+|Δ̃|)]σz`; in a bare truncation it is `a + a†`.
//! With `G(ω) = ∫₀^∞ e^{−iωt} C(t) dt` for the bath correlation function
//! `C(t)`, the rates are
//!
//! * `Γ⁺_lmnk = h_lm h_nk G(ω_nk)`
//! * `Γ⁻_lmnk = h_lm h_nk G(ω_ml)*`
//!
//! and the Redfield equation reads
//! `ρ̇_nm = −iω_nm ρ_nm − Σ_kl R_nmkl ρ_kl`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{
    bare_position_operator, bare_sigma_z, build_dsr_jc, build_exact, displacement_element,
    dsr_coupling_operator, dsr_eigensystem, dsr_sigma_z, DsrEigensystem, Scheme,
};
use crate::model::{DsrParams, ModelParams, SpectralDensity};
use crate::numerics::{eigh, principal_value, propagate_2x2};

fn cz(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which coupling elements multiply `G(ω_nk)` in `Γ⁺_lmnk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatePrefactor {
    /// `h_lm h_nk`, the product that follows from the rate definition.
    #[default]
    Consistent,
    /// `h_lm h_mk`.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    /// Keep the imaginary (principal-value) parts of the rates.
    pub lamb_shift: bool,
    pub prefactor: RatePrefactor,
    /// Absolute tolerance of each principal-value integral.
    pub pv_tol: f64,
    /// Upper integration limit; `None` uses the density's default.
    pub omega_cut: Option<f64>,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            lamb_shift: true,
            prefactor: RatePrefactor::Consistent,
            pv_tol: 1e-10,
            omega_cut: None,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "beta must be > 0 (use infinity for zero temperature), got {beta}"
        )))
    }
}

/// `Re G(ω) = J(|ω|) e^{−βω/2} / sinh(β|ω|/2)`, with the `ω = 0` limit
/// `2J'(0)/β`.
pub fn bath_response_real(sd: &SpectralDensity, omega: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let a = omega.abs();
    if a == 0.0 {
        return Ok(if beta.is_infinite() {
            0.0
        } else {
            2.0 * sd.low_frequency_slope() / beta
        });
    }
    let j = sd.eval(a)?;
    // 2J·n(|ω|) for ω > 0 and 2J·(n(|ω|) + 1) for ω < 0.
    let occupation = if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * a).exp_m1()
    };
    Ok(if omega > 0.0 {
        2.0 * j * occupation
    } else {
        2.0 * j * (occupation + 1.0)
    })
}

/// `Im G(ω) = −(2/π) P∫₀^∞ dω' J(ω')/(ω'² − ω²) · (ω' − ω coth(βω'/2))`.
pub fn bath_response_imag(
    sd: &SpectralDensity,
    omega: f64,
    beta: f64,
    opts: &RateOptions,
) -> Result<f64> {
    check_beta(beta)?;
    let cut = opts.omega_cut.unwrap_or_else(|| sd.default_upper_limit());
    Ok(-2.0 / PI * principal_value(sd, omega, beta, cut, opts.pv_tol)?)
}

/// `G(ω)`; the imaginary part is zero when `opts.lamb_shift` is off.
pub fn bath_response(
    sd: &SpectralDensity,
    omega: f64,
    beta: f64,
    opts: &RateOptions,
) -> Result<Complex64> {
    let re = bath_response_real(sd, omega, beta)?;
    let im = if opts.lamb_shift {
        bath_response_imag(sd, omega, beta, opts)?
    } else {
        0.0
    };
    Ok(Complex64::new(re, im))
}

/// Coupling operator in the DSR eigenbasis, split into its oscillator and σz
/// parts: `h_tilde = position_part − sigma_z_part`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingElements {
    pub h_tilde: DMatrix<Complex64>,
    /// `⟨l|(c + c†)|m⟩`.
    pub position_part: DMatrix<Complex64>,
    /// `⟨l|[2Re g/(ω0+|Δ̃|)]σz|m⟩`.
    pub sigma_z_part: DMatrix<Complex64>,
}

impl CouplingElements {
    /// Frobenius norm of the σz correction relative to the `c + c†` part.
    pub fn correction_ratio(&self) -> f64 {
        self.sigma_z_part.norm() / self.position_part.norm()
    }
}

/// Closed-form `h̃_lm` between the analytic DSR eigenstates.
///
/// Nonzero elements (and their Hermitian images):
/// `h01 = B − κA`, `h02 = A + κB*`, `h13 = A − κB*`, `h23 = −B − κA`,
/// with `κ = 2Re g/(ω0+|Δ̃|)`.
pub fn coupling_elements(
    eigensystem: &DsrEigensystem,
    params: &ModelParams,
    dsr: &DsrParams,
) -> CouplingElements {
    let a = cz(eigensystem.a_coef);
    let b = eigensystem.b_coef;
    let kz = dsr.sigma_z_bath_weight(params);
    let mut pos = DMatrix::<Complex64>::zeros(4, 4);
    let mut sz = DMatrix::<Complex64>::zeros(4, 4);
    let set = |m: &mut DMatrix<Complex64>, i: usize, j: usize, v: Complex64| {
        m[(i, j)] = v;
        m[(j, i)] = v.conj();
    };
    set(&mut pos, 0, 1, b);
    set(&mut pos, 0, 2, a);
    set(&mut pos, 1, 3, a);
    set(&mut pos, 2, 3, -b);
    set(&mut sz, 0, 1, a * kz);
    set(&mut sz, 0, 2, -b.conj() * kz);
    set(&mut sz, 1, 3, b.conj() * kz);
    set(&mut sz, 2, 3, a * kz);
    CouplingElements {
        h_tilde: &pos - &sz,
        position_part: pos,
        sigma_z_part: sz,
    }
}

/// `Γ⁺` and `Γ⁻` over all index quadruples of an `n`-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTensor {
    n: usize,
    pub gamma_plus: Vec<Complex64>,
    pub gamma_minus: Vec<Complex64>,
}

fn quad_index(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

fn prefactor(h: &DMatrix<Complex64>, kind: RatePrefactor, l: usize, m: usize, n: usize, k: usize) -> Complex64 {
    match kind {
        RatePrefactor::Consistent => h[(l, m)] * h[(n, k)],
        RatePrefactor::Printed => h[(l, m)] * h[(m, k)],
    }
}

impl GammaTensor {
    /// Rates for coupling matrix `h` (in the eigenbasis of `energies`).
    pub fn new(
        h: &DMatrix<Complex64>,
        energies: &[f64],
        sd: &SpectralDensity,
        beta: f64,
        opts: &RateOptions,
    ) -> Result<Self> {
        let n = energies.len();
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::Domain(format!(
                "coupling matrix is {}x{}, expected {n}x{n}",
                h.nrows(),
                h.ncols()
            )));
        }
        check_beta(beta)?;
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                g[(a, b)] = bath_response(sd, energies[a] - energies[b], beta, opts)?;
            }
        }
        let mut gamma_plus = vec![cz(0.0); n.pow(4)];
        let mut gamma_minus = vec![cz(0.0); n.pow(4)];
        for l in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    for k in 0..n {
                        let idx = quad_index(n, l, m, nn, k);
                        gamma_plus[idx] = prefactor(h, opts.prefactor, l, m, nn, k) * g[(nn, k)];
                        // Γ⁻_lmnk = (Γ⁺_knml)*.
                        gamma_minus[idx] =
                            prefactor(h, opts.prefactor, k, nn, m, l).conj() * g[(m, l)].conj();
                    }
                }
            }
        }
        Ok(Self {
            n,
            gamma_plus,
            gamma_minus,
        })
    }

    pub fn levels(&self) -> usize {
        self.n
    }

    pub fn plus(&self, l: usize, m: usize, n: usize, k: usize) -> Complex64 {
        self.gamma_plus[quad_index(self.n, l, m, n, k)]
    }

    pub fn minus(&self, l: usize, m: usize, n: usize, k: usize) -> Complex64 {
        self.gamma_minus[quad_index(self.n, l, m, n, k)]
    }
}

/// `R_nmkl = δ_lm Σ_r Γ⁺_nrrk + δ_nk Σ_r Γ⁻_lrrm − Γ⁺_lmnk − Γ⁻_lmnk`.
pub fn redfield_tensor(gammas: &GammaTensor, n: usize, m: usize, k: usize, l: usize) -> Complex64 {
    let levels = gammas.levels();
    let mut r = -gammas.plus(l, m, n, k) - gammas.minus(l, m, n, k);
    if l == m {
        r += (0..levels).map(|q| gammas.plus(n, q, q, k)).sum::<Complex64>();
    }
    if n == k {
        r += (0..levels).map(|q| gammas.minus(l, q, q, m)).sum::<Complex64>();
    }
    r
}

/// Dense `R_nmkl` for all indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RedfieldTensor {
    n: usize,
    data: Vec<Complex64>,
}

impl RedfieldTensor {
    pub fn from_gammas(gammas: &GammaTensor) -> Self {
        let n = gammas.levels();
        let mut data = vec![cz(0.0); n.pow(4)];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        data[quad_index(n, a, b, c, d)] = redfield_tensor(gammas, a, b, c, d);
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn levels(&self) -> usize {
        self.n
    }

    pub fn get(&self, n: usize, m: usize, k: usize, l: usize) -> Complex64 {
        self.data[quad_index(self.n, n, m, k, l)]
    }
}

/// Initial state of the secular dynamics, given by its two relevant coherences.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum InitialState {
    /// `|↑z⟩ ⊗ |0̃⟩`: `ρ01 = A/2`, `ρ02 = −B*/2`.
    #[default]
    SpinUpDisplacedGround,
    Coherences { rho01: Complex64, rho02: Complex64 },
}

impl InitialState {
    pub fn coherences(&self, eigensystem: &DsrEigensystem) -> (Complex64, Complex64) {
        match *self {
            InitialState::SpinUpDisplacedGround => (
                cz(0.5 * eigensystem.a_coef),
                -eigensystem.b_coef.conj() * 0.5,
            ),
            InitialState::Coherences { rho01, rho02 } => (rho01, rho02),
        }
    }
}

/// Secular three-level dynamics of the coherences `ρ01`, `ρ02`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularDynamics {
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub gamma3: Complex64,
    pub gamma4: Complex64,
    pub omega01: f64,
    pub omega02: f64,
    /// Frequency with the larger real part.
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    pub rho01_0: Complex64,
    pub rho02_0: Complex64,
    pub a_coef: f64,
    pub b_coef: Complex64,
}

impl SecularDynamics {
    /// Build from rates and Bohr frequencies; `ω±` are `−iλ` for the
    /// eigenvalues `λ` of the generator.
    pub fn from_rates(
        gammas: [Complex64; 4],
        omega01: f64,
        omega02: f64,
        rho0: (Complex64, Complex64),
        a_coef: f64,
        b_coef: Complex64,
    ) -> Self {
        let mut dynamics = Self {
            gamma1: gammas[0],
            gamma2: gammas[1],
            gamma3: gammas[2],
            gamma4: gammas[3],
            omega01,
            omega02,
            omega_plus: cz(0.0),
            omega_minus: cz(0.0),
            rho01_0: rho0.0,
            rho02_0: rho0.1,
            a_coef,
            b_coef,
        };
        let (w1, w2) = dynamics.generator_frequencies();
        if w1.re >= w2.re {
            dynamics.omega_plus = w1;
            dynamics.omega_minus = w2;
        } else {
            dynamics.omega_plus = w2;
            dynamics.omega_minus = w1;
        }
        dynamics
    }

    /// `M = [[iω01 − γ1, −γ2], [−γ3, iω02 − γ4]]`.
    pub fn generator(&self) -> Matrix2<Complex64> {
        let i = Complex64::i();
        Matrix2::new(
            i * self.omega01 - self.gamma1,
            -self.gamma2,
            -self.gamma3,
            i * self.omega02 - self.gamma4,
        )
    }

    fn generator_frequencies(&self) -> (Complex64, Complex64) {
        let m = self.generator();
        let mu = (m[(0, 0)] + m[(1, 1)]) * 0.5;
        let hd = (m[(0, 0)] - m[(1, 1)]) * 0.5;
        let delta = (hd * hd + m[(0, 1)] * m[(1, 0)]).sqrt();
        let minus_i = -Complex64::i();
        (minus_i * (mu + delta), minus_i * (mu - delta))
    }

    pub fn initial(&self) -> Vector2<Complex64> {
        Vector2::new(self.rho01_0, self.rho02_0)
    }

    pub fn coherences_at(&self, t: f64) -> Vector2<Complex64> {
        propagate_2x2(&self.generator(), &self.initial(), t)
    }

    /// `σz(t) = 2Re(A ρ01(t) − B ρ02(t))`.
    pub fn sigma_z(&self, t: f64) -> f64 {
        let rho = self.coherences_at(t);
        2.0 * (rho[0] * self.a_coef - self.b_coef * rho[1]).re
    }

    /// `C` with `|σz(t)| ≤ C e^{−min(Im ω±) t}`, from the modal expansion of
    /// the initial coherences. `None` when the generator is (nearly) defective.
    pub fn envelope_constant(&self) -> Option<f64> {
        let m = self.generator();
        let i = Complex64::i();
        let lambdas = [i * self.omega_plus, i * self.omega_minus];
        if (lambdas[0] - lambdas[1]).norm() < 1e-12 * (1.0 + lambdas[0].norm()) {
            return None;
        }
        // Right eigenvectors of M.
        let vecs: Vec<Vector2<Complex64>> = lambdas
            .iter()
            .map(|&lam| {
                let (a, b) = (m[(0, 0)] - lam, m[(0, 1)]);
                if b.norm() > a.norm() {
                    Vector2::new(b, -a)
                } else {
                    let (c, d) = (m[(1, 0)], m[(1, 1)] - lam);
                    if c.norm() > 0.0 || d.norm() > 0.0 {
                        Vector2::new(-d, c)
                    } else {
                        Vector2::new(cz(1.0), cz(0.0))
                    }
                }
            })
            .collect();
        let basis = Matrix2::from_columns(&[vecs[0], vecs[1]]);
        let coeffs = basis.try_inverse()? * self.initial();
        let mut c = 0.0;
        for j in 0..2 {
            let v = vecs[j];
            c += 2.0 * (coeffs[j] * (v[0] * self.a_coef - self.b_coef * v[1])).norm();
        }
        Some(c)
    }
}

/// Secular reduction of the Redfield equations for the DSR eigensystem.
pub fn secular_dynamics(
    eigensystem: &DsrEigensystem,
    h: &CouplingElements,
    sd: &SpectralDensity,
    beta: f64,
    opts: &RateOptions,
    initial: InitialState,
) -> Result<SecularDynamics> {
    let gammas = GammaTensor::new(&h.h_tilde, &eigensystem.energies(), sd, beta, opts)?;
    let r = |n, m, k, l| redfield_tensor(&gammas, n, m, k, l);
    Ok(SecularDynamics::from_rates(
        [r(0, 1, 0, 1), r(0, 1, 0, 2), r(0, 2, 0, 1), r(0, 2, 0, 2)],
        eigensystem.omega01,
        eigensystem.omega02,
        initial.coherences(eigensystem),
        eigensystem.a_coef,
        eigensystem.b_coef,
    ))
}

/// Secular dynamics of the DSR model at `params` with an Ohmic bath.
pub fn dsr_secular_dynamics(
    params: &ModelParams,
    opts: &RateOptions,
    initial: InitialState,
) -> Result<SecularDynamics> {
    let dsr = DsrParams::solve(params)?;
    let es = dsr_eigensystem(params, &dsr);
    let h = coupling_elements(&es, params, &dsr);
    secular_dynamics(&es, &h, &params.ohmic(), params.beta(), opts, initial)
}

/// `σz(t)` sampled at `times`.
pub fn sigma_z_series(dynamics: &SecularDynamics, times: &[f64]) -> Vec<f64> {
    times.iter().map(|&t| dynamics.sigma_z(t)).collect()
}

/// Full (non-secular) Redfield equation for an `n`-level system.
#[derive(Debug, Clone)]
pub struct FullRedfield {
    energies: Vec<f64>,
    tensor: RedfieldTensor,
}

impl FullRedfield {
    pub fn new(
        energies: Vec<f64>,
        h: &DMatrix<Complex64>,
        sd: &SpectralDensity,
        beta: f64,
        opts: &RateOptions,
    ) -> Result<Self> {
        let gammas = GammaTensor::new(h, &energies, sd, beta, opts)?;
        Ok(Self {
            energies,
            tensor: RedfieldTensor::from_gammas(&gammas),
        })
    }

    pub fn tensor(&self) -> &RedfieldTensor {
        &self.tensor
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `ρ̇_nm = −iω_nm ρ_nm − Σ_kl R_nmkl ρ_kl`.
    pub fn derivative(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.energies.len();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = Complex64::new(0.0, -(self.energies[a] - self.energies[b])) * rho[(a, b)];
                for k in 0..n {
                    for l in 0..n {
                        acc -= self.tensor.get(a, b, k, l) * rho[(k, l)];
                    }
                }
                out[(a, b)] = acc;
            }
        }
        out
    }

    /// Classical fourth-order Runge-Kutta; returns `ρ` at each of `times`
    /// (ascending, starting at or after 0) with steps no longer than `max_dt`.
    pub fn evolve(
        &self,
        rho0: &DMatrix<Complex64>,
        times: &[f64],
        max_dt: f64,
    ) -> Result<Vec<DMatrix<Complex64>>> {
        if !(max_dt > 0.0) {
            return Err(Error::Domain(format!("max_dt must be > 0, got {max_dt}")));
        }
        let mut out = Vec::with_capacity(times.len());
        let mut rho = rho0.clone();
        let mut now = 0.0;
        for &t in times {
            if t < now {
                return Err(Error::Domain("times must be nonnegative and ascending".into()));
            }
            let steps = ((t - now) / max_dt).ceil() as usize;
            if steps > 0 {
                let h = (t - now) / steps as f64;
                for _ in 0..steps {
                    let k1 = self.derivative(&rho);
                    let k2 = self.derivative(&(&rho + &k1 * cz(0.5 * h)));
                    let k3 = self.derivative(&(&rho + &k2 * cz(0.5 * h)));
                    let k4 = self.derivative(&(&rho + &k3 * cz(h)));
                    rho += (k1 + k2 * cz(2.0) + k3 * cz(2.0) + k4) * cz(h / 6.0);
                }
            }
            now = t;
            out.push(rho.clone());
        }
        Ok(out)
    }
}

/// Full Redfield dynamics on four levels together with the initial state and
/// the σz operator, all in the eigenbasis of the four levels.
#[derive(Debug, Clone)]
pub struct FourLevelModel {
    pub redfield: FullRedfield,
    pub rho0: DMatrix<Complex64>,
    pub sigma_z: DMatrix<Complex64>,
}

impl FourLevelModel {
    /// * `Dsr`: numerically diagonalised DSR Hamiltonian, coupling `h̃`,
    ///   initial state `|↑z⟩ ⊗ |0̃⟩`.
    /// * bare schemes: the lowest four eigenstates of the truncated
    ///   Hamiltonian, coupling `a + a†`, initial state `|↑z⟩ ⊗ D(s)|0⟩`
    ///   projected on those states without renormalisation.
    pub fn for_scheme(params: &ModelParams, scheme: Scheme, opts: &RateOptions) -> Result<Self> {
        let dsr = DsrParams::solve(params)?;
        let (energies, coupling, psi, sigma_z) = match scheme.n_fock() {
            None => {
                let sp = eigh(&build_dsr_jc(params, &dsr)?)?;
                let v = &sp.vectors;
                let r = std::f64::consts::FRAC_1_SQRT_2;
                let up = nalgebra::DVector::from_vec(vec![cz(r), cz(r), cz(0.0), cz(0.0)]);
                (
                    sp.values.clone(),
                    v.adjoint() * dsr_coupling_operator(params, &dsr).matrix() * v,
                    v.adjoint() * up,
                    v.adjoint() * dsr_sigma_z() * v,
                )
            }
            Some(n_fock) => {
                let sp = eigh(&build_exact(params, n_fock)?)?;
                let v = sp.vectors.columns(0, 4).into_owned();
                let mut up = nalgebra::DVector::<Complex64>::zeros(2 * n_fock);
                for k in 0..n_fock {
                    up[2 * k] = displacement_element(dsr.s, k, 0);
                }
                (
                    sp.values[..4].to_vec(),
                    v.adjoint() * bare_position_operator(n_fock).matrix() * &v,
                    v.adjoint() * up,
                    v.adjoint() * bare_sigma_z(n_fock) * &v,
                )
            }
        };
        let redfield = FullRedfield::new(energies, &coupling, &params.ohmic(), params.beta(), opts)?;
        Ok(Self {
            redfield,
            rho0: &psi * psi.adjoint(),
            sigma_z,
        })
    }

    /// `Tr(ρ(t) σz)` at each of `times`.
    pub fn sigma_z_series(&self, times: &[f64], max_dt: f64) -> Result<Vec<f64>> {
        let states = self.redfield.evolve(&self.rho0, times, max_dt)?;
        Ok(states
            .iter()
            .map(|rho| (rho * &self.sigma_z).trace().re)
            .collect())
    }
}
