//! Resonant part of the second-order correction by direct quadrature.
//!
//! The integral (1/(2π)³)∫ d³q v⊥²q_x²/(q_z + q⊥²/(2ω₀)) is taken over the
//! box |q_x|, |q_y| ≤ Δ₁/2, |q_z| ≤ Δ₂/2 (volume Δ₁²Δ₂). The q_z integral
//! is a principal value with the closed antiderivative
//! ln|(a + H)/(a − H)|, a = q⊥²/(2ω₀), H = Δ₂/2; the remaining transverse
//! integral has a logarithmic singularity on the circle q⊥² = ω₀Δ₂ and is
//! done by clustered Gauss–Legendre with the circle as a breakpoint. The
//! imaginary part is π times the pole-shell weight, q⊥² < ω₀Δ₂.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::corrections::ElectronKinematics;
use crate::error::{positive, Error, Result};
use crate::oracle::quadrature::{CompensatedSum, GaussLegendre, QuadratureResult};
use crate::pulse::SpreadParams;

const START_POINTS: usize = 64;
const MAX_REFINEMENTS: usize = 4;
const REL_TOL: f64 = 1e-4;

/// PV real part plus iπ·shell imaginary part of the resonant integral, cm⁻⁴·cm³ per unit V.
pub fn resonant_pv_integral(
    s: &SpreadParams,
    e: &ElectronKinematics,
    omega0: f64,
) -> Result<QuadratureResult<Complex64>> {
    let omega0 = positive("omega0", omega0)?;
    if e.v_perp < 0.0 {
        return Err(Error::Domain { field: "v_perp", value: e.v_perp, reason: "must be >= 0" });
    }
    let pre = e.v_perp * e.v_perp / (2.0 * PI).powi(3);
    if pre == 0.0 {
        return Ok(QuadratureResult { value: Complex64::new(0.0, 0.0), estimated_error: 0.0, evaluations: 0, converged: true });
    }
    let geom = Geometry::new(s, omega0);

    let mut n = START_POINTS;
    let mut evaluations = 0;
    let mut prev = geom.real_part(&GaussLegendre::new(n));
    evaluations += geom.evaluations(n);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        n *= 2;
        let next = geom.real_part(&GaussLegendre::new(n));
        evaluations += geom.evaluations(n);
        change = (next - prev).abs();
        prev = next;
        if next.is_finite() && change <= REL_TOL * next.abs() {
            break;
        }
    }
    let value = Complex64::new(pre * prev, pre * PI * geom.shell_weight());
    let estimated_error = pre * change;
    if !prev.is_finite() || change.is_nan() || change > REL_TOL * prev.abs() {
        return Err(Error::Quadrature { value: value.re, estimated_error });
    }
    Ok(QuadratureResult { value, estimated_error, evaluations, converged: true })
}

/// ln|num/den|, zero for a node that rounds onto the pole. Clustered nodes
/// reach the pole circle only where their weight has already underflowed,
/// and the singularity is logarithmic, so the dropped term is negligible.
fn log_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 || den == 0.0 {
        return 0.0;
    }
    (num / den).abs().ln()
}

struct Geometry {
    omega0: f64,
    /// Δ₁/2
    b: f64,
    /// Δ₂/2
    h: f64,
    /// Radius of the pole circle at q_z = −H: √(ω₀Δ₂).
    r: f64,
}

impl Geometry {
    fn new(s: &SpreadParams, omega0: f64) -> Self {
        let h = 0.5 * s.delta2;
        Self { omega0, b: 0.5 * s.delta1, h, r: (2.0 * omega0 * h).sqrt() }
    }

    fn evaluations(&self, n: usize) -> usize {
        // ≤ two outer and two inner panels
        4 * n * n
    }

    /// ∫ q_x² · PV∫dq_z 1/(q_z + a) over the square, by quadrant symmetry.
    fn real_part(&self, rule: &GaussLegendre) -> f64 {
        let (b, h, r, w0) = (self.b, self.h, self.r, self.omega0);
        let inner = |qx: f64| {
            let cut = (r * r - qx * qx).max(0.0).sqrt();
            let breaks = if qx < r { vec![cut] } else { vec![] };
            qx * qx
                * rule.integrate_split(0.0, b, &breaks, |qy| {
                    let a = (qx * qx + qy * qy) / (2.0 * w0);
                    log_ratio(a + h, a - h)
                })
        };
        let outer_breaks = [r];
        4.0 * outer_parallel(rule, 0.0, b, &outer_breaks, inner)
    }

    /// ∫ q_x² θ(ω₀Δ₂ − q⊥²) over the square.
    fn shell_weight(&self) -> f64 {
        let (b, r) = (self.b, self.r);
        let rule = GaussLegendre::new(START_POINTS);
        let mut breaks = vec![r];
        if r > b {
            breaks.push((r * r - b * b).sqrt());
        }
        4.0 * rule.integrate_split(0.0, b.min(r), &breaks, |qx| {
            qx * qx * b.min((r * r - qx * qx).max(0.0).sqrt())
        })
    }
}

/// Clustered outer integral with nodes evaluated in parallel and summed in order.
fn outer_parallel<F>(rule: &GaussLegendre, a: f64, b: f64, breaks: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![a];
    edges.extend(cuts);
    edges.push(b);

    let mut total = CompensatedSum::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let len = hi - lo;
        let terms: Vec<f64> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(x, wt)| {
                let u = 0.5 * (x + 1.0);
                let s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
                let jac = 30.0 * u * u * (1.0 - u) * (1.0 - u);
                0.5 * wt * jac * len * f(lo + len * s)
            })
            .collect();
        for t in terms {
            total.add(t);
        }
    }
    total.value()
}

/// Closed form of the resonant integral per unit V.
pub fn resonant_closed_form(s: &SpreadParams, e: &ElectronKinematics) -> Complex64 {
    resonant_closed_form_signed(s, e, 1.0)
}

/// [`resonant_closed_form`] with its overall sign multiplied by `sign`;
/// `sign = −1` is a deliberate mutation for exercising the comparison.
pub fn resonant_closed_form_signed(s: &SpreadParams, e: &ElectronKinematics, sign: f64) -> Complex64 {
    let (s1, s2, d, w0) = (s.sigma1, s.sigma2, s.delta, s.omega0);
    let cube = (2.0 * PI).powi(3);
    let vp2 = e.v_perp * e.v_perp;
    let re = PI * vp2 * w0.powi(4) * d * d / cube
        * (d * s1 * s1 * s2 / 8.0 - s2 * s2 / 2.0 * (4.0 * s2 / (d * s1 * s1)).atan());
    let branch = if (s2 / d).sqrt() < s1 { d * d * s2 * s2 } else { d.powi(4) * s1.powi(4) };
    let im = PI * PI * vp2 / cube * w0.powi(4) / 4.0 * branch;
    sign * Complex64::new(re, im)
}

/// Real part with the v_z²q_z² numerator and the exact quadratic
/// denominator q_z² + 2ω₀q_z + q⊥² kept, scaled to compare with the real
/// part of [`resonant_pv_integral`]: (2ω₀/(2π)³) PV∫ (v⊥²q_x² + v_z²q_z²)/(q_z² + 2ω₀q_z + q⊥²).
pub fn unneglected_resonant_real(s: &SpreadParams, e: &ElectronKinematics, omega0: f64) -> Result<f64> {
    let omega0 = positive("omega0", omega0)?;
    let geom = Geometry::new(s, omega0);
    let (b, h) = (geom.b, geom.h);
    let (vp2, vz2) = (e.v_perp * e.v_perp, e.v_z * e.v_z);
    let rule = GaussLegendre::new(256);
    // pole circle of the exact denominator at q_z = −H
    let rc = (2.0 * omega0 * h - h * h).sqrt();
    let ray = |qx: f64, qy: f64| {
        let t = qx * qx + qy * qy;
        let root = (omega0 * omega0 - t).sqrt();
        let r2 = -t / (omega0 + root);
        let r1 = -omega0 - root;
        // N/D = v_z² + L(q)/((q − r₁)(q − r₂)), L(q) = A + v_z²((r₁ + r₂)q − r₁r₂)
        let a = vp2 * qx * qx;
        let l = |q: f64| a + vz2 * ((r1 + r2) * q - r1 * r2);
        let pv = |r: f64| log_ratio(h - r, h + r);
        vz2 * 2.0 * h + l(r1) / (r1 - r2) * pv(r1) + l(r2) / (r2 - r1) * pv(r2)
    };
    let value = 4.0
        * outer_parallel(&rule, 0.0, b, &[rc], |qx| {
            let cut = (rc * rc - qx * qx).max(0.0).sqrt();
            let breaks = if qx < rc { vec![cut] } else { vec![] };
            rule.integrate_split(0.0, b, &breaks, |qy| ray(qx, qy))
        });
    Ok(2.0 * omega0 * value / (2.0 * PI).powi(3))
}

/// The terms of the resonant sum that vanish for an ω-symmetric box.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OddTerms {
    /// (1/(2π)³)∫(ω₀ − ω_k) with ω_k the box's longitudinal coordinate.
    pub box_frequency: f64,
    /// (1/(2π)³)∫(ω₀ − |k₀ + q|) with the vacuum dispersion.
    pub dispersive_frequency: f64,
    /// (2/(2π)³)∫(k − k₀)·v.
    pub linear_velocity: f64,
}

/// Evaluates the odd terms over the same box as [`resonant_pv_integral`].
pub fn dispersion_odd_terms(s: &SpreadParams, e: &ElectronKinematics, omega0: f64) -> Result<OddTerms> {
    let omega0 = positive("omega0", omega0)?;
    let (b, h) = (0.5 * s.delta1, 0.5 * s.delta2);
    let rule = GaussLegendre::new(32);
    let cube = (2.0 * PI).powi(3);
    let triple = |f: &dyn Fn(f64, f64, f64) -> f64| {
        rule.integrate(-b, b, |x| rule.integrate(-b, b, |y| rule.integrate(-h, h, |z| f(x, y, z))))
    };
    let box_frequency = triple(&|_, _, z| -z) / cube;
    let dispersive_frequency =
        triple(&|x, y, z| omega0 - ((omega0 + z).powi(2) + x * x + y * y).sqrt()) / cube;
    let linear_velocity = 2.0 * triple(&|x, _, z| x * e.v_perp + z * e.v_z) / cube;
    Ok(OddTerms { box_frequency, dispersive_frequency, linear_velocity })
}
