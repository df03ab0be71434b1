//! Single-photon scattering off emitters side-coupled to a 1D waveguide.
//!
//! Lengths are measured in the same unit as the resonant wavelength λ
//! (normally λ = 1). Rates and detunings share one reference rate declared
//! on the [`EmitterArray`]. A probe detuning δω enters the phases through
//! k = k_a + δω / v_g.
//!
//! For N emitters the amplitudes follow from the symmetric matrix
//!
//! ```text
//! M_jj = (1 + γ_j/Γ_j) + 2i(Δω_j − δω)/Γ_j
//! M_jl = 2 V_jl e^{ik|z_j − z_l|} / sqrt(Γ_j Γ_l)
//! r    = −Σ_jl e^{ik(z_j + z_l)} [M⁻¹]_jl
//! t    = 1 − Σ_jl e^{ik(z_j − z_l)} [M⁻¹]_jl
//! ```
//!
//! Two emitters are evaluated with the explicit 2×2 closed form; the matrix
//! route is kept public so the two can be checked against each other.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition number above which M is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Default group velocity in units of λ × (reference rate).
///
/// An optical carrier is ~10⁷ natural linewidths, so δk·d stays below 1e−5
/// over any scan window used here.
pub const DEFAULT_GROUP_VELOCITY: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams {
    wavelength: f64,
    group_velocity: f64,
}

impl WaveguideParams {
    pub fn new(wavelength: f64, group_velocity: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::invalid("wavelength", format!("must be finite and > 0, got {wavelength}")));
        }
        if !(group_velocity > 0.0) || group_velocity.is_nan() {
            return Err(Error::invalid(
                "group_velocity",
                format!("must be > 0, got {group_velocity}"),
            ));
        }
        Ok(Self { wavelength, group_velocity })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn group_velocity(&self) -> f64 {
        self.group_velocity
    }

    /// Resonant wavenumber k_a = 2π/λ.
    pub fn k_a(&self) -> f64 {
        TAU / self.wavelength
    }

    /// Probe wavenumber k = k_a + δω/v_g.
    pub fn wavenumber(&self, detuning: f64) -> f64 {
        self.k_a() + detuning / self.group_velocity
    }
}

impl Default for WaveguideParams {
    fn default() -> Self {
        Self { wavelength: 1.0, group_velocity: DEFAULT_GROUP_VELOCITY }
    }
}

/// Label for the reference rate all rates are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateUnit {
    /// γ0, a reference non-guided decay rate.
    #[default]
    FreeSpace,
    /// Γ0, a reference guided decay rate.
    Guided,
}

impl RateUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            RateUnit::FreeSpace => "gamma0",
            RateUnit::Guided => "Gamma0",
        }
    }
}

impl fmt::Display for RateUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emitter {
    /// Position along the waveguide.
    pub position: f64,
    /// Γ, decay into the guided modes.
    pub gamma_wg: f64,
    /// γ, decay into non-guided modes.
    pub gamma_free: f64,
    /// Transition-frequency offset from the probe reference.
    pub detuning: f64,
}

impl Emitter {
    pub fn new(position: f64, gamma_wg: f64, gamma_free: f64) -> Self {
        Self { position, gamma_wg, gamma_free, detuning: 0.0 }
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.position, self.gamma_wg, self.gamma_free, self.detuning]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("emitter", "all fields must be finite"));
        }
        if self.gamma_wg <= 0.0 {
            return Err(Error::invalid("gamma_wg", format!("must be > 0, got {}", self.gamma_wg)));
        }
        if self.gamma_free < 0.0 {
            return Err(Error::invalid("gamma_free", format!("must be >= 0, got {}", self.gamma_free)));
        }
        Ok(())
    }
}

/// Emitters ordered by strictly increasing position.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterArray {
    emitters: Vec<Emitter>,
    rate_unit: RateUnit,
}

impl EmitterArray {
    pub fn new(emitters: Vec<Emitter>, rate_unit: RateUnit) -> Result<Self> {
        if emitters.is_empty() {
            return Err(Error::invalid("emitters", "at least one emitter is required"));
        }
        for e in &emitters {
            e.validate()?;
        }
        if let Some(w) = emitters.windows(2).find(|w| w[1].position <= w[0].position) {
            return Err(Error::invalid(
                "position",
                format!("positions must increase strictly ({} then {})", w[0].position, w[1].position),
            ));
        }
        Ok(Self { emitters, rate_unit })
    }

    /// `count` identical emitters starting at z = 0 with uniform spacing.
    pub fn chain(
        count: usize,
        spacing: f64,
        gamma_wg: f64,
        gamma_free: f64,
        rate_unit: RateUnit,
    ) -> Result<Self> {
        let emitters = (0..count)
            .map(|j| Emitter::new(j as f64 * spacing, gamma_wg, gamma_free))
            .collect();
        Self::new(emitters, rate_unit)
    }

    /// Two identical emitters at z = 0 and z = `separation`.
    pub fn pair(separation: f64, gamma_wg: f64, gamma_free: f64, rate_unit: RateUnit) -> Result<Self> {
        Self::chain(2, separation, gamma_wg, gamma_free, rate_unit)
    }

    pub fn emitters(&self) -> &[Emitter] {
        &self.emitters
    }

    pub fn len(&self) -> usize {
        self.emitters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitters.is_empty()
    }

    pub fn rate_unit(&self) -> RateUnit {
        self.rate_unit
    }

    /// Separations between consecutive emitters.
    pub fn separations(&self) -> Vec<f64> {
        self.emitters.windows(2).map(|w| w[1].position - w[0].position).collect()
    }

    pub fn is_lossless(&self) -> bool {
        self.emitters.iter().all(|e| e.gamma_free == 0.0)
    }

    /// Same emitters with every detuning shifted by `G·z_j`.
    pub fn apply_gradient_field(&self, gradient: f64) -> EmitterArray {
        apply_gradient_field(self, gradient)
    }
}

/// Dipole-dipole coupling V12 between two emitters at reduced separation
/// x = k_a·d:
///
/// ```text
/// V12 = sqrt(Γ1Γ2)/2 + (3 sqrt(γ1γ2)/4)·[−i/x + 1/x² + i/x³]
/// ```
pub fn dipole_coupling(
    k_a_d: f64,
    gamma_wg_1: f64,
    gamma_wg_2: f64,
    gamma_free_1: f64,
    gamma_free_2: f64,
) -> Result<Complex64> {
    if !(k_a_d > 0.0) {
        return Err(Error::NonPositiveSeparation(k_a_d));
    }
    let guided = 0.5 * (gamma_wg_1 * gamma_wg_2).sqrt();
    let free = 0.75 * (gamma_free_1 * gamma_free_2).sqrt();
    let x = k_a_d;
    let x2 = x * x;
    let near_field = Complex64::new(1.0 / x2, 1.0 / (x2 * x) - 1.0 / x);
    Ok(Complex64::new(guided, 0.0) + free * near_field)
}

/// V12·e^{i k_a d} for two identical emitters a distance `separation` apart.
///
/// Its real part is the collective decay correction and its imaginary part
/// the collective frequency shift.
pub fn phased_coupling(
    separation: f64,
    gamma_wg: f64,
    gamma_free: f64,
    waveguide: &WaveguideParams,
) -> Result<Complex64> {
    let x = waveguide.k_a() * separation;
    let v = dipole_coupling(x, gamma_wg, gamma_wg, gamma_free, gamma_free)?;
    Ok(v * Complex64::from_polar(1.0, x))
}

fn diagonal_element(e: &Emitter, detuning: f64) -> Complex64 {
    Complex64::new(
        1.0 + e.gamma_free / e.gamma_wg,
        2.0 * (e.detuning - detuning) / e.gamma_wg,
    )
}

/// 2·V_jl·e^{ikd}/sqrt(Γ_jΓ_l), except that the non-guided part of V_jl
/// carries the resonant phase e^{i k_a d}. Letting the detuning-dependent
/// phase rotate the large near-field term breaks passivity close to
/// narrow subradiant lines.
fn off_diagonal_element(a: &Emitter, b: &Emitter, k: f64, waveguide: &WaveguideParams) -> Result<Complex64> {
    let d = (b.position - a.position).abs();
    let x = waveguide.k_a() * d;
    let v = dipole_coupling(x, a.gamma_wg, b.gamma_wg, a.gamma_free, b.gamma_free)?;
    let guided = 0.5 * (a.gamma_wg * b.gamma_wg).sqrt();
    let coupling = guided * Complex64::from_polar(1.0, k * d) + (v - guided) * Complex64::from_polar(1.0, x);
    Ok(2.0 * coupling / (a.gamma_wg * b.gamma_wg).sqrt())
}

/// The N×N scattering matrix M at probe detuning `detuning`.
pub fn m_matrix(
    emitters: &EmitterArray,
    detuning: f64,
    waveguide: &WaveguideParams,
) -> Result<DMatrix<Complex64>> {
    let es = emitters.emitters();
    let n = es.len();
    let k = waveguide.wavenumber(detuning);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = diagonal_element(&es[j], detuning);
        for l in (j + 1)..n {
            let c = off_diagonal_element(&es[j], &es[l], k, waveguide)?;
            m[(j, l)] = c;
            m[(l, j)] = c;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub r: Complex64,
    pub t: Complex64,
}

impl Amplitudes {
    pub fn reflectivity(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmissivity(&self) -> f64 {
        self.t.norm_sqr()
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Amplitudes through the general N-emitter linear system; valid for any N.
pub fn matrix_amplitudes(
    emitters: &EmitterArray,
    detuning: f64,
    waveguide: &WaveguideParams,
) -> Result<Amplitudes> {
    let m = m_matrix(emitters, detuning, waveguide)?;
    let inv = m.clone().try_inverse().ok_or(Error::SingularMatrix {
        detuning,
        condition: f64::INFINITY,
    })?;
    let condition = one_norm(&m) * one_norm(&inv);
    if !(condition < SINGULAR_CONDITION) {
        return Err(Error::SingularMatrix { detuning, condition });
    }
    let k = waveguide.wavenumber(detuning);
    let phases = DVector::from_iterator(
        emitters.len(),
        emitters.emitters().iter().map(|e| Complex64::from_polar(1.0, k * e.position)),
    );
    let lu = m.clone().lu();
    // one step of iterative refinement keeps R + T = 1 near Bragg spacings
    let solve = |rhs: &DVector<Complex64>| -> Result<DVector<Complex64>> {
        let singular = Error::SingularMatrix { detuning, condition };
        let mut x = lu.solve(rhs).ok_or_else(|| singular.clone())?;
        let residual = rhs - &m * &x;
        x += lu.solve(&residual).ok_or(singular)?;
        Ok(x)
    };
    let forward = solve(&phases)?;
    let backward = solve(&phases.map(|p| p.conj()))?;
    let r = -phases.dot(&forward);
    let through = phases.dot(&backward);
    Ok(Amplitudes { r, t: Complex64::new(1.0, 0.0) - through })
}

/// Explicit two-emitter amplitudes:
///
/// ```text
/// r = e^{2ikz1} (2 M12 e^{ikd} − M11 e^{2ikd} − M22) / (M11 M22 − M12²)
/// t = 1 − (M11 + M22 − 2 M12 cos kd) / (M11 M22 − M12²)
/// ```
pub fn two_emitter_amplitudes(
    emitters: &EmitterArray,
    detuning: f64,
    waveguide: &WaveguideParams,
) -> Result<Amplitudes> {
    let [a, b] = emitters.emitters() else {
        return Err(Error::invalid("emitters", format!("expected 2 emitters, got {}", emitters.len())));
    };
    let k = waveguide.wavenumber(detuning);
    let d = b.position - a.position;
    let m11 = diagonal_element(a, detuning);
    let m22 = diagonal_element(b, detuning);
    let m12 = off_diagonal_element(a, b, k, waveguide)?;
    let det = m11 * m22 - m12 * m12;
    // ||M||_1 ||M⁻¹||_1 for the 2×2 case; the inverse is adj(M)/det.
    let col1 = m11.norm() + m12.norm();
    let col2 = m22.norm() + m12.norm();
    let norm = col1.max(col2);
    let condition = norm * norm / det.norm();
    if !(condition < SINGULAR_CONDITION) {
        return Err(Error::SingularMatrix { detuning, condition });
    }
    let e_kd = Complex64::from_polar(1.0, k * d);
    let e_2kd = e_kd * e_kd;
    let e_2kz1 = Complex64::from_polar(1.0, 2.0 * k * a.position);
    let r = e_2kz1 * (2.0 * m12 * e_kd - m11 * e_2kd - m22) / det;
    let t = Complex64::new(1.0, 0.0) - (m11 + m22 - 2.0 * m12 * (k * d).cos()) / det;
    Ok(Amplitudes { r, t })
}

/// Reflection and transmission amplitudes at one probe detuning.
pub fn scattering_amplitudes(
    emitters: &EmitterArray,
    detuning: f64,
    waveguide: &WaveguideParams,
) -> Result<Amplitudes> {
    if !detuning.is_finite() {
        return Err(Error::invalid("detuning", format!("must be finite, got {detuning}")));
    }
    match emitters.emitters() {
        [e] => {
            let k = waveguide.wavenumber(detuning);
            let m = diagonal_element(e, detuning);
            let r = -Complex64::from_polar(1.0, 2.0 * k * e.position) / m;
            Ok(Amplitudes { r, t: Complex64::new(1.0, 0.0) - m.inv() })
        }
        [_, _] => two_emitter_amplitudes(emitters, detuning, waveguide),
        _ => matrix_amplitudes(emitters, detuning, waveguide),
    }
}

/// Sampled reflection/transmission spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Vec<f64>,
    r: Vec<Complex64>,
    t: Vec<Complex64>,
    reflectivity: Vec<f64>,
    transmissivity: Vec<f64>,
}

impl Spectrum {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn r(&self) -> &[Complex64] {
        &self.r
    }
    pub fn t(&self) -> &[Complex64] {
        &self.t
    }
    pub fn reflectivity(&self) -> &[f64] {
        &self.reflectivity
    }
    pub fn transmissivity(&self) -> &[f64] {
        &self.transmissivity
    }
    pub fn len(&self) -> usize {
        self.grid.len()
    }
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest 1 − R − T over the grid (probability lost to non-guided modes).
    pub fn max_loss(&self) -> f64 {
        self.reflectivity
            .iter()
            .zip(&self.transmissivity)
            .map(|(r, t)| 1.0 - r - t)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must not be empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("grid", "all detunings must be finite"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("grid", "detunings must increase strictly"));
    }
    Ok(())
}

/// Evaluates the amplitudes at every grid point.
///
/// With the `parallel` feature the points are evaluated on the rayon pool;
/// each point is independent so the result is identical to the sequential
/// evaluation.
pub fn compute_spectrum(
    emitters: &EmitterArray,
    grid: &[f64],
    waveguide: &WaveguideParams,
) -> Result<Spectrum> {
    validate_grid(grid)?;
    let eval = |(i, &dw): (usize, &f64)| {
        scattering_amplitudes(emitters, dw, waveguide).map_err(|e| e.at_index(i))
    };
    #[cfg(feature = "parallel")]
    let amps: Result<Vec<Amplitudes>> = {
        use rayon::prelude::*;
        grid.par_iter().enumerate().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let amps: Result<Vec<Amplitudes>> = grid.iter().enumerate().map(eval).collect();
    let amps = amps?;
    Ok(Spectrum {
        grid: grid.to_vec(),
        r: amps.iter().map(|a| a.r).collect(),
        t: amps.iter().map(|a| a.t).collect(),
        reflectivity: amps.iter().map(Amplitudes::reflectivity).collect(),
        transmissivity: amps.iter().map(Amplitudes::transmissivity).collect(),
    })
}

/// Shifts each transition frequency linearly along the waveguide,
/// Δω_j ← Δω_j + G·z_j.
pub fn apply_gradient_field(emitters: &EmitterArray, gradient: f64) -> EmitterArray {
    let shifted = emitters
        .emitters()
        .iter()
        .map(|e| e.with_detuning(e.detuning + gradient * e.position))
        .collect();
    EmitterArray { emitters: shifted, rate_unit: emitters.rate_unit }
}

/// Super- and subradiant resonances of two identical emitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveModes {
    /// V12·e^{i k_a d}.
    pub coupling: Complex64,
    /// ω+ = Im[V12 e^{i k_a d}].
    pub omega_plus: f64,
    /// ω− = −Im[V12 e^{i k_a d}].
    pub omega_minus: f64,
    /// Γ+ = (Γ+γ)/2 + Re[V12 e^{i k_a d}].
    pub gamma_plus: f64,
    /// Γ− = (Γ+γ)/2 − Re[V12 e^{i k_a d}].
    pub gamma_minus: f64,
}

impl CollectiveModes {
    pub fn new(separation: f64, gamma_wg: f64, gamma_free: f64, waveguide: &WaveguideParams) -> Result<Self> {
        let coupling = phased_coupling(separation, gamma_wg, gamma_free, waveguide)?;
        let half = 0.5 * (gamma_wg + gamma_free);
        Ok(Self {
            coupling,
            omega_plus: coupling.im,
            omega_minus: -coupling.im,
            gamma_plus: half + coupling.re,
            gamma_minus: half - coupling.re,
        })
    }

    /// (center, FWHM) of the broader resonance.
    pub fn superradiant(&self) -> (f64, f64) {
        if self.gamma_plus >= self.gamma_minus {
            (self.omega_plus, 2.0 * self.gamma_plus)
        } else {
            (self.omega_minus, 2.0 * self.gamma_minus)
        }
    }

    /// (center, FWHM) of the narrower resonance.
    pub fn subradiant(&self) -> (f64, f64) {
        if self.gamma_plus >= self.gamma_minus {
            (self.omega_minus, 2.0 * self.gamma_minus)
        } else {
            (self.omega_plus, 2.0 * self.gamma_plus)
        }
    }
}

/// Two-emitter reflection written as a sum over the symmetric and
/// antisymmetric collective channels:
///
/// ```text
/// r = A/(M11 + M12) + B/(M11 − M12)
/// A = −e^{2ikz1}(1 + e^{ikd})²/2,  B = −e^{2ikz1}(1 − e^{ikd})²/2
/// ```
///
/// Requires identical emitters.
pub fn collective_reflection(
    emitters: &EmitterArray,
    detuning: f64,
    waveguide: &WaveguideParams,
) -> Result<Complex64> {
    let [a, b] = emitters.emitters() else {
        return Err(Error::invalid("emitters", format!("expected 2 emitters, got {}", emitters.len())));
    };
    if a.gamma_wg != b.gamma_wg || a.gamma_free != b.gamma_free || a.detuning != b.detuning {
        return Err(Error::invalid("emitters", "collective decomposition needs identical emitters"));
    }
    let k = waveguide.wavenumber(detuning);
    let d = b.position - a.position;
    let m11 = diagonal_element(a, detuning);
    let m12 = off_diagonal_element(a, b, k, waveguide)?;
    let e_kd = Complex64::from_polar(1.0, k * d);
    let lead = -0.5 * Complex64::from_polar(1.0, 2.0 * k * a.position);
    let one = Complex64::new(1.0, 0.0);
    let sym = lead * (one + e_kd) * (one + e_kd);
    let anti = lead * (one - e_kd) * (one - e_kd);
    Ok(sym / (m11 + m12) + anti / (m11 - m12))
}

/// Continuous reflectivity model backing a computed spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardModel {
    pub emitters: EmitterArray,
    pub waveguide: WaveguideParams,
}

impl ForwardModel {
    pub fn new(emitters: EmitterArray, waveguide: WaveguideParams) -> Self {
        Self { emitters, waveguide }
    }

    pub fn amplitudes(&self, detuning: f64) -> Result<Amplitudes> {
        scattering_amplitudes(&self.emitters, detuning, &self.waveguide)
    }

    pub fn spectrum(&self, grid: &[f64]) -> Result<Spectrum> {
        compute_spectrum(&self.emitters, grid, &self.waveguide)
    }
}
