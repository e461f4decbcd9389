//! Physical parameters, bath spectral densities and the self-consistent
//! conditional-displacement parameters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default convergence tolerance for [`solve_displacement`].
pub const DEFAULT_DISPLACEMENT_TOL: f64 = 1e-12;
/// Default iteration cap for [`solve_displacement`].
pub const DEFAULT_DISPLACEMENT_MAX_ITER: usize = 200;

/// Physical inputs of the TSS-HO-bath problem.
///
/// `g` is complex: its real part is a σz-coordinate coupling and its
/// imaginary part a σz-momentum coupling. `temperature == 0` means β = ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub omega0: f64,
    pub g: Complex64,
    pub kappa: f64,
    pub omega_c: f64,
    pub temperature: f64,
}

impl ModelParams {
    pub fn new(
        delta: f64,
        omega0: f64,
        g: Complex64,
        kappa: f64,
        omega_c: f64,
        temperature: f64,
    ) -> Result<Self> {
        let p = Self {
            delta,
            omega0,
            g,
            kappa,
            omega_c,
            temperature,
        };
        p.validate()?;
        Ok(p)
    }

    /// Closed system (κ = 0) at zero temperature; bath cutoff is irrelevant.
    pub fn closed(delta: f64, omega0: f64, g: Complex64) -> Result<Self> {
        Self::new(delta, omega0, g, 0.0, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.delta,
            self.omega0,
            self.g.re,
            self.g.im,
            self.kappa,
            self.omega_c,
            self.temperature,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega0 must be > 0, got {}",
                self.omega0
            )));
        }
        if self.omega_c <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must be >= 0, got {}",
                self.kappa
            )));
        }
        if self.temperature < 0.0 {
            return Err(Error::InvalidParams(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    /// Inverse temperature; `f64::INFINITY` at T = 0.
    pub fn beta(&self) -> f64 {
        if self.temperature == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.temperature
        }
    }

    /// The Ohmic density felt by the oscillator.
    pub fn ohmic(&self) -> SpectralDensity {
        SpectralDensity::Ohmic {
            kappa: self.kappa,
            omega_c: self.omega_c,
        }
    }

    /// Same physics with every frequency multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            delta: self.delta * factor,
            omega0: self.omega0 * factor,
            g: self.g * factor,
            kappa: self.kappa,
            omega_c: self.omega_c * factor,
            temperature: self.temperature * factor,
        }
    }

    pub fn with_g(&self, g: Complex64) -> Self {
        Self { g, ..*self }
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        Self { delta, ..*self }
    }
}

/// Displacement parameter `s` and renormalised tunnelling `delta_tilde`,
/// jointly self-consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsrParams {
    pub s: Complex64,
    pub delta_tilde: f64,
    /// `|s + g / (ω0 + |Δ̃|)|` at the returned pair.
    pub residual: f64,
    pub iterations: usize,
}

impl DsrParams {
    /// Solve with the default tolerance and iteration cap.
    pub fn solve(params: &ModelParams) -> Result<Self> {
        solve_displacement(params, DEFAULT_DISPLACEMENT_TOL, DEFAULT_DISPLACEMENT_MAX_ITER)
    }

    /// `2|Δ̃| / (ω0 + |Δ̃|)`, the prefactor of the Jaynes-Cummings exchange term.
    pub fn exchange_factor(&self, params: &ModelParams) -> f64 {
        let ad = self.delta_tilde.abs();
        2.0 * ad / (params.omega0 + ad)
    }

    /// `2 Re(g) / (ω0 + |Δ̃|)`, weight of the σz part of the bath coupling.
    pub fn sigma_z_bath_weight(&self, params: &ModelParams) -> f64 {
        2.0 * params.g.re / (params.omega0 + self.delta_tilde.abs())
    }
}

/// Solve `s = -g / (ω0 + |Δ̃|)` together with `Δ̃ = Δ exp(-2|s|²)` by
/// fixed-point iteration started from `s₀ = -g / (ω0 + |Δ|)`.
///
/// Stops once successive iterates differ by at most `tol`. Running out of
/// iterations is reported as [`Error::NonConvergence`] with the last step size.
pub fn solve_displacement(params: &ModelParams, tol: f64, max_iter: usize) -> Result<DsrParams> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if max_iter < 1 {
        return Err(Error::Domain("max_iter must be >= 1".into()));
    }
    let g = params.g;
    let renormalised = |s: Complex64| params.delta * (-2.0 * s.norm_sqr()).exp();
    let next = |s: Complex64| -g / (params.omega0 + renormalised(s).abs());

    let mut s = -g / (params.omega0 + params.delta.abs());
    let mut step = f64::INFINITY;
    for iteration in 1..=max_iter {
        let s_next = next(s);
        step = (s_next - s).norm();
        s = s_next;
        if step <= tol {
            let delta_tilde = renormalised(s);
            let residual = (s + g / (params.omega0 + delta_tilde.abs())).norm();
            return Ok(DsrParams {
                s,
                delta_tilde,
                residual,
                iterations: iteration,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "displacement fixed point",
        iterations: max_iter,
        residual: step,
    })
}

/// Spectral density of a bosonic bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralDensity {
    /// `κ ω exp(-ω/ωc)`: the bath coupled to the oscillator.
    Ohmic { kappa: f64, omega_c: f64 },
    /// `2αωΩ⁴ / [(Ω² - ω²)² + (2πκωΩ)²]`: the structured bath seen by the bare
    /// TSS. Diagnostic only.
    LorentzianEffective {
        alpha: f64,
        omega_peak: f64,
        kappa: f64,
    },
}

impl SpectralDensity {
    pub fn ohmic(kappa: f64, omega_c: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !(omega_c > 0.0) {
            return Err(Error::InvalidParams(format!(
                "ohmic density needs kappa >= 0 and omega_c > 0 (got {kappa}, {omega_c})"
            )));
        }
        Ok(Self::Ohmic { kappa, omega_c })
    }

    pub fn lorentzian_effective(alpha: f64, omega_peak: f64, kappa: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !(omega_peak > 0.0) || !(kappa > 0.0) {
            return Err(Error::InvalidParams(format!(
                "effective density needs alpha >= 0, omega_peak > 0, kappa > 0 \
                 (got {alpha}, {omega_peak}, {kappa})"
            )));
        }
        Ok(Self::LorentzianEffective {
            alpha,
            omega_peak,
            kappa,
        })
    }

    pub fn eval(&self, omega: f64) -> Result<f64> {
        match *self {
            Self::Ohmic { kappa, omega_c } => ohmic_j(kappa, omega_c, omega),
            Self::LorentzianEffective {
                alpha,
                omega_peak,
                kappa,
            } => lorentzian_j_eff(alpha, omega_peak, kappa, omega),
        }
    }

    /// `J(ω)` for `ω >= 0` without the domain check.
    pub(crate) fn eval_unchecked(&self, omega: f64) -> f64 {
        match *self {
            Self::Ohmic { kappa, omega_c } => kappa * omega * (-omega / omega_c).exp(),
            Self::LorentzianEffective {
                alpha,
                omega_peak,
                kappa,
            } => {
                let w2 = omega_peak * omega_peak;
                let detune = w2 - omega * omega;
                let width = 2.0 * std::f64::consts::PI * kappa * omega * omega_peak;
                2.0 * alpha * omega * w2 * w2 / (detune * detune + width * width)
            }
        }
    }

    /// `dJ/dω` at `ω = 0`.
    pub fn low_frequency_slope(&self) -> f64 {
        match *self {
            Self::Ohmic { kappa, .. } => kappa,
            Self::LorentzianEffective { alpha, .. } => 2.0 * alpha,
        }
    }

    /// `J(ω) / ω` for `ω >= 0`, continuous at zero.
    pub(crate) fn j_over_omega(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            self.low_frequency_slope()
        } else {
            self.eval_unchecked(omega) / omega
        }
    }

    /// `J(ω) coth(βω/2)` for `ω >= 0`, continuous at zero (`2J'(0)/β`).
    /// `β = ∞` replaces coth by 1.
    pub(crate) fn j_coth(&self, omega: f64, beta: f64) -> f64 {
        if beta.is_infinite() {
            return self.eval_unchecked(omega);
        }
        let x = 0.5 * beta * omega;
        if x < 1e-6 {
            // J(ω)coth(x) = (J/ω)·(2/β)·x coth(x), with x coth x = 1 + x²/3 + …
            self.j_over_omega(omega) * (2.0 / beta) * (1.0 + x * x / 3.0)
        } else {
            self.eval_unchecked(omega) / x.tanh()
        }
    }

    /// A frequency beyond which the density is negligible for quadrature.
    pub fn default_upper_limit(&self) -> f64 {
        match *self {
            Self::Ohmic { omega_c, .. } => 50.0 * omega_c,
            Self::LorentzianEffective { omega_peak, .. } => 1e4 * omega_peak,
        }
    }
}

/// Ohmic density `κ ω exp(-ω/ωc)`.
pub fn ohmic_j(kappa: f64, omega_c: f64, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    Ok(SpectralDensity::Ohmic { kappa, omega_c }.eval_unchecked(omega))
}

/// Lorentzian effective density `2αωΩ⁴ / [(Ω² - ω²)² + (2πκωΩ)²]`.
pub fn lorentzian_j_eff(alpha: f64, omega_peak: f64, kappa: f64, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    Ok(SpectralDensity::LorentzianEffective {
        alpha,
        omega_peak,
        kappa,
    }
    .eval_unchecked(omega))
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega >= 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "spectral density needs a finite omega >= 0, got {omega}"
        )))
    }
}
