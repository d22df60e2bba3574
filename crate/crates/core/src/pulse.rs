//! Gaussian wave-packet model of the pulse in k-space.
//!
//! Coordinates are `(k⊥x, k⊥y, ω)` with `k = k⊥ + ω n̂`, `n̂` along the
//! central wave vector. The region Δ of highly populated modes is the box
//! whose Gaussian-weighted integrals give the erf factors Φ(δ): half-widths
//! Δ₁ = δσ₁ω₀ transverse and Δ₂ = δσ₂ω₀ in ω. Its nominal mode volume
//! Δ₁²Δ₂ = δ³σ₁²σ₂ω₀³ sets the mode count N = VΔ/(8π³).

use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{positive, Result};
use crate::specfun::{find_root, phi, phi_complement, RootResult, DEFAULT_ROOT_TOL};
use crate::units::PulseParams;

/// Bracket that isolates the mode-volume root.
pub const DELTA_BRACKET: (f64, f64) = (3.0, 4.0);

/// Dimensionless spreads and the mode box derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadParams {
    /// Angular spread σ₁.
    pub sigma1: f64,
    /// Frequency spread σ₂.
    pub sigma2: f64,
    /// Box parameter δ.
    pub delta: f64,
    /// Central frequency ω₀, cm⁻¹.
    pub omega0: f64,
    /// Transverse box scale Δ₁ = δσ₁ω₀, cm⁻¹.
    pub delta1: f64,
    /// Longitudinal box scale Δ₂ = δσ₂ω₀, cm⁻¹.
    pub delta2: f64,
    /// Δ = Δ₁²Δ₂, cm⁻³.
    pub mode_volume: f64,
    /// Normalization volume V, cm³.
    pub volume: f64,
    /// N = VΔ/(8π³).
    pub n_modes: f64,
}

impl SpreadParams {
    pub fn new(sigma1: f64, sigma2: f64, delta: f64, omega0: f64, volume: f64) -> Result<Self> {
        let sigma1 = positive("sigma1", sigma1)?;
        let sigma2 = positive("sigma2", sigma2)?;
        let delta = positive("delta", delta)?;
        let omega0 = positive("omega0", omega0)?;
        let volume = positive("volume", volume)?;
        let delta1 = delta * sigma1 * omega0;
        let delta2 = delta * sigma2 * omega0;
        let mode_volume = delta1 * delta1 * delta2;
        Ok(Self {
            sigma1,
            sigma2,
            delta,
            omega0,
            delta1,
            delta2,
            mode_volume,
            volume,
            n_modes: volume * mode_volume / (8.0 * PI.powi(3)),
        })
    }

    /// Spreads of `p` with the optimal δ and normalization volume `volume`.
    pub fn from_pulse(p: &PulseParams, volume: f64) -> Result<Self> {
        let (sigma1, sigma2) = spreads_from_pulse(p);
        Self::new(sigma1, sigma2, solve_delta()?, p.omega0, volume)
    }

    /// True when both spreads are below one.
    pub fn is_quasi_monochromatic(&self) -> bool {
        self.sigma1 < 1.0 && self.sigma2 < 1.0
    }

    /// Wave-packet amplitude at a k-space point.
    pub fn amplitude(&self, k_perp_x: f64, k_perp_y: f64, omega: f64) -> ModeAmplitude {
        ModeAmplitude::new(k_perp_x, k_perp_y, omega, self)
    }
}

/// Gaussian amplitude u_k of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitude {
    pub k_perp_x: f64,
    pub k_perp_y: f64,
    pub omega: f64,
    pub u: f64,
}

impl ModeAmplitude {
    pub fn new(k_perp_x: f64, k_perp_y: f64, omega: f64, s: &SpreadParams) -> Self {
        Self {
            k_perp_x,
            k_perp_y,
            omega,
            u: gaussian_amplitude(k_perp_x * k_perp_x + k_perp_y * k_perp_y, omega, s),
        }
    }
}

/// u = exp(−k⊥²/(2σ₁²ω₀²)) · exp(−(ω−ω₀)²/(2σ₂²ω₀²)).
pub(crate) fn gaussian_amplitude(k_perp_sq: f64, omega: f64, s: &SpreadParams) -> f64 {
    let wt = s.sigma1 * s.omega0;
    let wl = s.sigma2 * s.omega0;
    let dw = omega - s.omega0;
    (-k_perp_sq / (2.0 * wt * wt) - dw * dw / (2.0 * wl * wl)).exp()
}

/// Angular and frequency spreads (σ₁, σ₂) = (1/(ω₀√S), 1/(ω₀cτ)).
pub fn spreads_from_pulse(p: &PulseParams) -> (f64, f64) {
    let sigma1 = 1.0 / (p.omega0 * p.spot_area_lab.sqrt());
    let sigma2 = 1.0 / (p.omega0 * p.tau_nat);
    (sigma1, sigma2)
}

/// 1 − (8π^{3/2}/δ³) Φ⁶(δ/√2)/Φ³(δ). Vanishes at the δ that nulls the
/// fluctuation-mode occupancy.
pub fn delta_residual(delta: f64) -> f64 {
    let half = phi(delta / SQRT_2);
    let full = phi(delta);
    1.0 - 8.0 * PI.powf(1.5) / delta.powi(3) * half.powi(6) / full.powi(3)
}

/// Root of [`delta_residual`] on [`DELTA_BRACKET`], with solver diagnostics.
pub fn solve_delta_detailed() -> Result<RootResult> {
    find_root(delta_residual, DELTA_BRACKET.0, DELTA_BRACKET.1, DEFAULT_ROOT_TOL)
}

/// Optimal box parameter δ* ≈ 3.54.
pub fn solve_delta() -> Result<f64> {
    solve_delta_detailed().map(|r| r.root)
}

/// Fraction of the pulse energy in the collective mode, Φ³(δ), and the ratio
/// of energy outside the box to energy inside, (1 − Φ³)/Φ³.
pub fn energy_fractions(delta: f64) -> (f64, f64) {
    let collective = phi(delta).powi(3);
    // 1 − Φ³ = erfc·(1 + Φ + Φ²), without cancellation
    let p = phi(delta);
    let outside = phi_complement(delta) * (1.0 + p + p * p);
    (collective, outside / collective)
}

/// Closed-form fluctuation occupancy ⟨f⟩ = W Φ³(δ) · delta_residual(δ), cm⁻¹.
pub fn fluctuation_occupancy(delta: f64, pulse_energy_nat: f64) -> f64 {
    if delta.is_infinite() {
        return pulse_energy_nat;
    }
    pulse_energy_nat * phi(delta).powi(3) * delta_residual(delta)
}

/// Coherent-state amplitude normalization C = √(8π^{3/2} W / (V σ₁²σ₂ω₀⁴)).
pub fn coherent_normalization(p: &PulseParams, s: &SpreadParams, volume: f64) -> Result<f64> {
    let volume = positive("volume", volume)?;
    Ok((8.0 * PI.powf(1.5) * p.pulse_energy_nat
        / (volume * s.sigma1 * s.sigma1 * s.sigma2 * s.omega0.powi(4)))
    .sqrt())
}
