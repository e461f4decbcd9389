//! Hamiltonian builders for the TSS-HO system and the analytic eigensystem of
//! the displaced-state (DSR) effective Hamiltonian.
//!
//! Every matrix uses the product ordering `index = 2·fock + spin_index`.
//! In the bare representation spin 0 is `|↑z⟩` and spin 1 is `|↓z⟩`; in the DSR
//! representation spin 0 is `|+x⟩` and spin 1 is `|−x⟩`, and the Fock label
//! counts quanta of the displaced oscillator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DsrParams, ModelParams};
use crate::numerics::{eigh, Spectrum};

/// Fock levels of the exact reference (total dimension 18).
pub const REFERENCE_N_FOCK: usize = 9;

const HERMITIAN_TOL: f64 = 1e-14;

fn cz(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A square complex matrix equal to its adjoint to within 1e-14.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Checks squareness, `dim >= 2` and Hermiticity, then stores the exactly
    /// symmetrised matrix `(M + M†)/2`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Domain(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() < 2 {
            return Err(Error::Domain("matrix dimension must be >= 2".into()));
        }
        let deviation = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(deviation <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrised(m))
    }

    fn symmetrised(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        Self {
            entries: (m + adj) * cz(0.5),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// `U† H U` for a unitary `u` of matching dimension.
    pub fn unitary_transform(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() {
            return Err(Error::Domain(format!(
                "transform has {} rows, matrix has dimension {}",
                u.nrows(),
                self.dim()
            )));
        }
        Ok(Self::symmetrised(u.adjoint() * &self.entries * u))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    Bare,
    Dsr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    UpZ,
    DownZ,
    PlusX,
    MinusX,
}

impl Spin {
    /// 0 for `UpZ`/`PlusX`, 1 for `DownZ`/`MinusX`.
    pub fn index(self) -> usize {
        match self {
            Spin::UpZ | Spin::PlusX => 0,
            Spin::DownZ | Spin::MinusX => 1,
        }
    }

    pub fn representation(self) -> Representation {
        match self {
            Spin::UpZ | Spin::DownZ => Representation::Bare,
            Spin::PlusX | Spin::MinusX => Representation::Dsr,
        }
    }
}

/// A product basis state `|spin⟩ ⊗ |fock⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub spin: Spin,
    pub fock: usize,
}

impl BasisLabel {
    pub fn representation(&self) -> Representation {
        self.spin.representation()
    }

    pub fn index(&self) -> usize {
        2 * self.fock + self.spin.index()
    }

    pub fn from_index(index: usize, representation: Representation) -> Self {
        let spin = match (representation, index % 2) {
            (Representation::Bare, 0) => Spin::UpZ,
            (Representation::Bare, _) => Spin::DownZ,
            (Representation::Dsr, 0) => Spin::PlusX,
            (Representation::Dsr, _) => Spin::MinusX,
        };
        Self {
            spin,
            fock: index / 2,
        }
    }
}

/// `−(Δ/2)σx + ω0 a†a + σz(g a† + g* a)` on Fock levels `0..n_fock`.
pub fn build_exact(params: &ModelParams, n_fock: usize) -> Result<HermitianMatrix> {
    params.validate()?;
    if n_fock < 2 {
        return Err(Error::Domain(format!("n_fock must be >= 2, got {n_fock}")));
    }
    let dim = 2 * n_fock;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..n_fock {
        let up = 2 * n;
        let down = up + 1;
        h[(up, up)] = cz(params.omega0 * n as f64);
        h[(down, down)] = cz(params.omega0 * n as f64);
        h[(up, down)] = cz(-0.5 * params.delta);
        h[(down, up)] = cz(-0.5 * params.delta);
        if n + 1 < n_fock {
            let amp = params.g * ((n + 1) as f64).sqrt();
            for (spin, sign) in [(0, 1.0), (1, -1.0)] {
                let from = up + spin;
                let to = 2 * (n + 1) + spin;
                h[(to, from)] = amp * sign;
                h[(from, to)] = amp.conj() * sign;
            }
        }
    }
    Ok(HermitianMatrix::symmetrised(h))
}

/// The exact Hamiltonian restricted to Fock levels {0, 1}.
pub fn build_simple_truncation(params: &ModelParams) -> Result<HermitianMatrix> {
    build_exact(params, 2)
}

/// Spin operators in the `{|+x⟩, |−x⟩}` basis.
fn x_basis_sigma_x() -> [[Complex64; 2]; 2] {
    [[cz(1.0), cz(0.0)], [cz(0.0), cz(-1.0)]]
}

fn x_basis_sigma_z() -> [[Complex64; 2]; 2] {
    [[cz(0.0), cz(1.0)], [cz(1.0), cz(0.0)]]
}

fn x_basis_i_sigma_y() -> [[Complex64; 2]; 2] {
    [[cz(0.0), cz(-1.0)], [cz(1.0), cz(0.0)]]
}

/// Assemble `diag(n) ⊗ spin terms + c†X + X†c` on two displaced Fock levels.
fn dsr_from_parts(
    diag_spin: [[f64; 2]; 2],
    ladder: [[Complex64; 2]; 2],
) -> HermitianMatrix {
    let mut h = DMatrix::<Complex64>::zeros(4, 4);
    for n in 0..2 {
        for a in 0..2 {
            h[(2 * n + a, 2 * n + a)] = cz(diag_spin[n][a]);
        }
    }
    // ⟨1,a| c†X |0,b⟩ = X_ab.
    for a in 0..2 {
        for b in 0..2 {
            h[(2 + a, b)] = ladder[a][b];
            h[(b, 2 + a)] = ladder[a][b].conj();
        }
    }
    HermitianMatrix::symmetrised(h)
}

/// Conditionally displaced Hamiltonian for an arbitrary displacement `s`,
/// projected on two displaced Fock levels:
///
/// `−(Δ̃/2)σx(1 − 4|s|²c†c) + ω0 c†c + c†[σz(g + ω0 s) + iσy s Δ̃] + h.c.`
///
/// with `Δ̃ = Δ exp(−2|s|²)`, in the x-spin basis. The constant
/// `ω0|s|² + 2Re(g s*)` is dropped.
pub fn build_dsr_general(params: &ModelParams, s: Complex64) -> Result<HermitianMatrix> {
    params.validate()?;
    let s2 = s.norm_sqr();
    let dt = params.delta * (-2.0 * s2).exp();
    let sx = x_basis_sigma_x();
    let mut diag = [[0.0; 2]; 2];
    for n in 0..2 {
        for a in 0..2 {
            diag[n][a] =
                -0.5 * dt * sx[a][a].re * (1.0 - 4.0 * s2 * n as f64) + params.omega0 * n as f64;
        }
    }
    let sz = x_basis_sigma_z();
    let isy = x_basis_i_sigma_y();
    let zc = params.g + s * params.omega0;
    let yc = s * dt;
    let mut ladder = [[cz(0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            ladder[a][b] = sz[a][b] * zc + isy[a][b] * yc;
        }
    }
    Ok(dsr_from_parts(diag, ladder))
}

/// Jaynes-Cummings form of the DSR Hamiltonian:
///
/// `−(Δ̃/2)σx(1 − 4|g|²/(ω0+|Δ̃|)² c†c) + ω0 c†c + K(g c†σ∓ˣ + g* c σ±ˣ)`
///
/// with `K = 2|Δ̃|/(ω0+|Δ̃|)`. For `Δ <= 0` the exchange term lowers the x-spin
/// (`σ−ˣ = |−x⟩⟨+x|`); for `Δ > 0` it raises it.
pub fn build_dsr_jc(params: &ModelParams, dsr: &DsrParams) -> Result<HermitianMatrix> {
    params.validate()?;
    let dt = dsr.delta_tilde;
    let w = params.omega0 + dt.abs();
    let c4 = 4.0 * params.g.norm_sqr() / (w * w);
    let sx = x_basis_sigma_x();
    let mut diag = [[0.0; 2]; 2];
    for n in 0..2 {
        for a in 0..2 {
            diag[n][a] = -0.5 * dt * sx[a][a].re * (1.0 - c4 * n as f64) + params.omega0 * n as f64;
        }
    }
    let mut ladder = [[cz(0.0); 2]; 2];
    let amp = params.g * dsr.exchange_factor(params);
    if params.delta > 0.0 {
        // c†σ+ˣ: |0̃,−x⟩ → |1̃,+x⟩.
        ladder[0][1] = amp;
    } else {
        // c†σ−ˣ: |0̃,+x⟩ → |1̃,−x⟩.
        ladder[1][0] = amp;
    }
    Ok(dsr_from_parts(diag, ladder))
}

/// Bath coupling operator `c + c† − [2Re g/(ω0+|Δ̃|)]σz` in the DSR basis.
pub fn dsr_coupling_operator(params: &ModelParams, dsr: &DsrParams) -> HermitianMatrix {
    let kz = dsr.sigma_z_bath_weight(params);
    let sz = x_basis_sigma_z();
    let mut h = DMatrix::<Complex64>::zeros(4, 4);
    for a in 0..2 {
        h[(a, 2 + a)] = cz(1.0);
        h[(2 + a, a)] = cz(1.0);
        for b in 0..2 {
            for n in 0..2 {
                h[(2 * n + a, 2 * n + b)] -= sz[a][b] * kz;
            }
        }
    }
    HermitianMatrix::symmetrised(h)
}

/// `σz` in the DSR basis.
pub fn dsr_sigma_z() -> DMatrix<Complex64> {
    let sz = x_basis_sigma_z();
    DMatrix::from_fn(4, 4, |i, j| if i / 2 == j / 2 { sz[i % 2][j % 2] } else { cz(0.0) })
}

/// `a + a†` on Fock levels `0..n_fock` in the bare basis.
pub fn bare_position_operator(n_fock: usize) -> HermitianMatrix {
    let dim = 2 * n_fock;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..n_fock.saturating_sub(1) {
        let amp = cz(((n + 1) as f64).sqrt());
        for spin in 0..2 {
            h[(2 * n + spin, 2 * (n + 1) + spin)] = amp;
            h[(2 * (n + 1) + spin, 2 * n + spin)] = amp;
        }
    }
    HermitianMatrix::symmetrised(h)
}

/// `σz` on Fock levels `0..n_fock` in the bare basis.
pub fn bare_sigma_z(n_fock: usize) -> DMatrix<Complex64> {
    let dim = 2 * n_fock;
    DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            cz(0.0)
        } else if i % 2 == 0 {
            cz(1.0)
        } else {
            cz(-1.0)
        }
    })
}

/// Analytic eigensystem of [`build_dsr_jc`].
///
/// With `L` the lower x-spin (`|−x⟩` for `Δ <= 0`, `|+x⟩` for `Δ > 0`) and `U`
/// the other one, the eigenstates are
/// `e0 = |L,0̃⟩`, `e1 = A|U,0̃⟩ + B|L,1̃⟩`, `e2 = −B*|U,0̃⟩ + A|L,1̃⟩`,
/// `e3 = |U,1̃⟩`. `A` is real and nonnegative; `B` carries the phase of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsrEigensystem {
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub a_coef: f64,
    pub b_coef: Complex64,
    pub omega01: f64,
    pub omega02: f64,
    pub lower_spin: Spin,
}

impl DsrEigensystem {
    pub fn energies(&self) -> [f64; 4] {
        [self.e0, self.e1, self.e2, self.e3]
    }

    pub fn upper_spin(&self) -> Spin {
        match self.lower_spin {
            Spin::PlusX => Spin::MinusX,
            _ => Spin::PlusX,
        }
    }

    pub fn bohr(&self) -> BohrFrequencies {
        BohrFrequencies {
            omega01: self.omega01,
            omega02: self.omega02,
        }
    }

    /// Columns are `e0..e3` in the DSR product basis.
    pub fn eigenvectors(&self) -> DMatrix<Complex64> {
        let l = self.lower_spin.index();
        let u = self.upper_spin().index();
        let a = cz(self.a_coef);
        let b = self.b_coef;
        let mut v = DMatrix::<Complex64>::zeros(4, 4);
        v[(l, 0)] = cz(1.0);
        v[(u, 1)] = a;
        v[(2 + l, 1)] = b;
        v[(u, 2)] = -b.conj();
        v[(2 + l, 2)] = a;
        v[(2 + u, 3)] = cz(1.0);
        v
    }
}

/// Closed-form eigenenergies and eigenstates of the DSR Hamiltonian.
pub fn dsr_eigensystem(params: &ModelParams, dsr: &DsrParams) -> DsrEigensystem {
    let d = dsr.delta_tilde.abs();
    let w = params.omega0 + d;
    let c4 = 4.0 * params.g.norm_sqr() / (w * w);
    let e0 = -0.5 * d;
    let e3 = 0.5 * d * (1.0 - c4) + params.omega0;
    // Mixed block on {|U,0̃⟩, |L,1̃⟩}.
    let h_uu = 0.5 * d;
    let h_ll = params.omega0 - 0.5 * d * (1.0 - c4);
    let coupling = params.g.conj() * dsr.exchange_factor(params);
    let split = h_ll - h_uu;
    let root = (split * split + 4.0 * coupling.norm_sqr()).sqrt();
    let e1 = 0.5 * (h_uu + h_ll - root);
    let e2 = 0.5 * (h_uu + h_ll + root);
    // E0 + E2 = E2 − h_uu, evaluated without cancellation.
    let e0_plus_e2 = if split >= 0.0 {
        0.5 * (split + root)
    } else {
        2.0 * coupling.norm_sqr() / (root - split)
    };
    let norm = (e0_plus_e2 * e0_plus_e2 + coupling.norm_sqr()).sqrt();
    let (a_coef, b_coef) = if norm > 0.0 {
        (e0_plus_e2 / norm, -coupling.conj() / norm)
    } else if split >= 0.0 {
        (1.0, cz(0.0))
    } else {
        // Uncoupled with |L,1̃⟩ below |U,0̃⟩: the g → 0 limit of the mixing.
        (0.0, cz(-1.0))
    };
    let lower_spin = if params.delta > 0.0 {
        Spin::PlusX
    } else {
        Spin::MinusX
    };
    DsrEigensystem {
        e0,
        e1,
        e2,
        e3,
        a_coef,
        b_coef,
        omega01: e1 - e0,
        omega02: e2 - e0,
        lower_spin,
    }
}

/// The two lowest Bohr frequencies `ω01 = E1 − E0`, `ω02 = E2 − E0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohrFrequencies {
    pub omega01: f64,
    pub omega02: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeviationMode {
    Absolute,
    /// `100 · (scheme − reference) / reference`.
    Percent,
}

/// Signed deviations `scheme − reference` of `(ω01, ω02)`.
pub fn bohr_deviations(
    scheme: BohrFrequencies,
    reference: BohrFrequencies,
    mode: DeviationMode,
) -> (f64, f64) {
    let d1 = scheme.omega01 - reference.omega01;
    let d2 = scheme.omega02 - reference.omega02;
    match mode {
        DeviationMode::Absolute => (d1, d2),
        DeviationMode::Percent => (
            100.0 * d1 / reference.omega01,
            100.0 * d2 / reference.omega02,
        ),
    }
}

/// Level schemes compared against the 18-dimensional exact reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Exact18,
    /// Fock levels {0, 1} (dimension 4).
    Simple,
    /// Fock levels {0, 1, 2} (dimension 6).
    Simple6,
    /// Fock levels {0, 1, 2, 3} (dimension 8).
    Simple8,
    Dsr,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Exact18,
        Scheme::Simple,
        Scheme::Simple6,
        Scheme::Simple8,
        Scheme::Dsr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Exact18 => "exact18",
            Scheme::Simple => "simple",
            Scheme::Simple6 => "simple6",
            Scheme::Simple8 => "simple8",
            Scheme::Dsr => "dsr",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Fock levels of the bare truncation, `None` for DSR.
    pub fn n_fock(self) -> Option<usize> {
        match self {
            Scheme::Exact18 => Some(REFERENCE_N_FOCK),
            Scheme::Simple => Some(2),
            Scheme::Simple6 => Some(3),
            Scheme::Simple8 => Some(4),
            Scheme::Dsr => None,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The four lowest levels of a scheme, with eigenstates expressed in the bare
/// basis of the reference truncation.
#[derive(Debug, Clone)]
pub struct SchemeLevels {
    pub energies: [f64; 4],
    /// `2·REFERENCE_N_FOCK × 4`, column `i` belongs to `energies[i]`.
    pub states: DMatrix<Complex64>,
}

impl SchemeLevels {
    /// Energies relative to the ground level.
    pub fn shifted(&self) -> [f64; 4] {
        let e0 = self.energies[0];
        self.energies.map(|e| e - e0)
    }
}

/// `⟨m|D(α)|n⟩` for the displacement `D(α) = exp(α a† − α* a)`.
pub fn displacement_element(alpha: Complex64, m: usize, n: usize) -> Complex64 {
    let x = alpha.norm_sqr();
    let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
    let k = hi - lo;
    // sqrt(lo!/hi!)
    let mut ratio = 1.0;
    for j in (lo + 1)..=hi {
        ratio /= (j as f64).sqrt();
    }
    let lag = generalized_laguerre(lo, k as f64, x);
    let base = if m >= n { alpha } else { -alpha.conj() };
    base.powu(k as u32) * (ratio * (-0.5 * x).exp() * lag)
}

fn generalized_laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Maps DSR product states into the bare basis on `n_fock` levels:
/// `D(sσz)|±x, ñ⟩ = (|↑⟩D(s)|n⟩ ± |↓⟩D(−s)|n⟩)/√2`.
pub fn dsr_embedding(s: Complex64, n_fock: usize) -> DMatrix<Complex64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<Complex64>::zeros(2 * n_fock, 4);
    for n in 0..2 {
        for (spin, sign) in [(0, 1.0), (1, -1.0)] {
            let col = 2 * n + spin;
            for k in 0..n_fock {
                m[(2 * k, col)] = displacement_element(s, k, n) * inv_sqrt2;
                m[(2 * k + 1, col)] = displacement_element(-s, k, n) * (sign * inv_sqrt2);
            }
        }
    }
    m
}

fn embed_bare(vectors: &DMatrix<Complex64>, n_fock: usize) -> DMatrix<Complex64> {
    let dim = 2 * REFERENCE_N_FOCK;
    let mut m = DMatrix::<Complex64>::zeros(dim, 4);
    let rows = (2 * n_fock).min(dim);
    for c in 0..4 {
        for r in 0..rows {
            m[(r, c)] = vectors[(r, c)];
        }
    }
    m
}

/// The exact 18-dimensional reference spectrum.
pub fn reference_spectrum(params: &ModelParams) -> Result<Spectrum> {
    eigh(&build_exact(params, REFERENCE_N_FOCK)?)
}

/// Four lowest levels of `scheme` with eigenstates in the reference basis.
pub fn scheme_levels(params: &ModelParams, scheme: Scheme) -> Result<SchemeLevels> {
    match scheme.n_fock() {
        Some(n_fock) => {
            let sp = eigh(&build_exact(params, n_fock)?)?;
            Ok(SchemeLevels {
                energies: [sp.values[0], sp.values[1], sp.values[2], sp.values[3]],
                states: embed_bare(&sp.vectors, n_fock),
            })
        }
        None => {
            let dsr = DsrParams::solve(params)?;
            let es = dsr_eigensystem(params, &dsr);
            let states = dsr_embedding(dsr.s, REFERENCE_N_FOCK) * es.eigenvectors();
            Ok(SchemeLevels {
                energies: es.energies(),
                states,
            })
        }
    }
}

/// Index of the reference eigenstate with the largest overlap with `state`.
fn best_match(reference: &Spectrum, state: &DVector<Complex64>) -> usize {
    let overlaps = reference.vectors.adjoint() * state;
    overlaps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Bohr frequencies of `levels` and of the reference levels they correspond
/// to, matched by maximum state overlap rather than by energy rank (higher
/// oscillator levels of the reference may fall inside the four-level window).
pub fn matched_bohr(levels: &SchemeLevels, reference: &Spectrum) -> (BohrFrequencies, BohrFrequencies) {
    let idx: Vec<usize> = (0..3)
        .map(|i| best_match(reference, &levels.states.column(i).into_owned()))
        .collect();
    let scheme = BohrFrequencies {
        omega01: levels.energies[1] - levels.energies[0],
        omega02: levels.energies[2] - levels.energies[0],
    };
    let r = &reference.values;
    let matched = BohrFrequencies {
        omega01: r[idx[1]] - r[idx[0]],
        omega02: r[idx[2]] - r[idx[0]],
    };
    (scheme, matched)
}

/// Deviations of `scheme` from the 18-dimensional reference at `params`.
pub fn scheme_deviations(
    params: &ModelParams,
    scheme: Scheme,
    mode: DeviationMode,
) -> Result<(f64, f64)> {
    let reference = reference_spectrum(params)?;
    let levels = scheme_levels(params, scheme)?;
    let (s, r) = matched_bohr(&levels, &reference);
    Ok(bohr_deviations(s, r, mode))
}
