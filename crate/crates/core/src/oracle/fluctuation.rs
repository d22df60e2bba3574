//! Fluctuation part of the second-order correction by direct quadrature.
//!
//! The integrand is taken in its first-order-in-q form,
//! |(−v/(2ω₀^{5/2}) + 5(k₀·v)²/(2vω₀^{9/2}))(k₀·q) − (2(k₀·v)/(vω₀^{5/2}))(v·q)|²,
//! over the box |q_x|, |q_y| ≤ Δ₁/2, |q_z| ≤ Δ₂/2 with k₀ = ω₀ẑ.
//! It is a quadratic polynomial, so tensor Gauss–Legendre is exact up to
//! rounding; the error estimate compares two rule sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::corrections::{ElectronKinematics, E_SQUARED};
use crate::error::{positive, Error, Result};
use crate::oracle::quadrature::{CompensatedSum, GaussLegendre, QuadratureResult};
use crate::pulse::SpreadParams;

const COARSE_POINTS: usize = 6;
const FINE_POINTS: usize = 12;

fn speed(v: [f64; 3]) -> Result<f64> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(norm > 0.0 && norm < 1.0) {
        return Err(Error::Domain { field: "v", value: norm, reason: "speed must be in (0, 1)" });
    }
    Ok(norm)
}

fn half_widths(s: &SpreadParams) -> [f64; 3] {
    [0.5 * s.delta1, 0.5 * s.delta1, 0.5 * s.delta2]
}

fn prefactor(omega0: f64) -> f64 {
    E_SQUARED / (2.0 * (2.0 * PI).powi(3) * omega0)
}

/// First-order integrand at q for velocity v.
fn expanded_integrand(v: [f64; 3], vn: f64, omega0: f64, q: [f64; 3]) -> f64 {
    let kv = omega0 * v[2];
    let kq = omega0 * q[2];
    let vq = v[0] * q[0] + v[1] * q[1] + v[2] * q[2];
    let c1 = -vn / (2.0 * omega0.powf(2.5)) + 5.0 * kv * kv / (2.0 * vn * omega0.powf(4.5));
    let c2 = 2.0 * kv / (vn * omega0.powf(2.5));
    let t = c1 * kq - c2 * vq;
    t * t
}

fn tensor_rule<F: Fn([f64; 3]) -> f64>(rule: &GaussLegendre, half: [f64; 3], f: F) -> f64 {
    let mut sum = CompensatedSum::new();
    for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
        for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
            for (z, wz) in rule.nodes.iter().zip(&rule.weights) {
                sum.add(wx * wy * wz * f([x * half[0], y * half[1], z * half[2]]));
            }
        }
    }
    sum.value() * half[0] * half[1] * half[2]
}

/// Fluctuation integral for a general velocity vector (x, y transverse, z along k₀), cm⁻¹.
pub fn fluctuation_integral_vector(s: &SpreadParams, v: [f64; 3], omega0: f64) -> Result<QuadratureResult<f64>> {
    let omega0 = positive("omega0", omega0)?;
    let vn = speed(v)?;
    let half = half_widths(s);
    let pre = prefactor(omega0);
    let f = |q: [f64; 3]| expanded_integrand(v, vn, omega0, q);
    let coarse = pre * tensor_rule(&GaussLegendre::new(COARSE_POINTS), half, f);
    let fine = pre * tensor_rule(&GaussLegendre::new(FINE_POINTS), half, f);
    let estimated_error = (fine - coarse).abs();
    Ok(QuadratureResult {
        value: fine,
        estimated_error,
        evaluations: COARSE_POINTS.pow(3) + FINE_POINTS.pow(3),
        converged: estimated_error <= 1e-10 * fine.abs() + f64::MIN_POSITIVE,
    })
}

/// Fluctuation integral with v⊥ along x.
pub fn fluctuation_integral(s: &SpreadParams, e: &ElectronKinematics, omega0: f64) -> Result<QuadratureResult<f64>> {
    fluctuation_integral_vector(s, [e.v_perp, 0.0, e.v_z], omega0)
}

/// Same integral before the first-order expansion in q:
/// |v(ω_k^{−1/2} − ω₀^{−1/2}) − ((k·v)²ω_k^{−5/2} − (k₀·v)²ω₀^{−5/2})/v|², ω_k = |k₀ + q|.
pub fn unexpanded_fluctuation_integral(s: &SpreadParams, e: &ElectronKinematics, omega0: f64) -> Result<f64> {
    let omega0 = positive("omega0", omega0)?;
    let v = [e.v_perp, 0.0, e.v_z];
    let vn = speed(v)?;
    let kv0 = omega0 * v[2];
    let f = |q: [f64; 3]| {
        let k = [q[0], q[1], omega0 + q[2]];
        let wk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let t = vn * (wk.powf(-0.5) - omega0.powf(-0.5))
            - (kv * kv * wk.powf(-2.5) - kv0 * kv0 * omega0.powf(-2.5)) / vn;
        t * t
    };
    Ok(prefactor(omega0) * tensor_rule(&GaussLegendre::new(24), half_widths(s), f))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Plain Monte Carlo estimate of [`fluctuation_integral`] with an explicit seed.
pub fn fluctuation_integral_mc(
    s: &SpreadParams,
    e: &ElectronKinematics,
    omega0: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let omega0 = positive("omega0", omega0)?;
    if samples < 2 {
        return Err(Error::Domain { field: "samples", value: samples as f64, reason: "need at least 2" });
    }
    let v = [e.v_perp, 0.0, e.v_z];
    let vn = speed(v)?;
    let half = half_widths(s);
    let volume = 8.0 * half[0] * half[1] * half[2];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (CompensatedSum::new(), CompensatedSum::new());
    for _ in 0..samples {
        let q = [
            rng.gen_range(-half[0]..half[0]),
            rng.gen_range(-half[1]..half[1]),
            rng.gen_range(-half[2]..half[2]),
        ];
        let x = expanded_integrand(v, vn, omega0, q);
        sum.add(x);
        sum_sq.add(x * x);
    }
    let n = samples as f64;
    let mean = sum.value() / n;
    let var = ((sum_sq.value() / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let pre = prefactor(omega0) * volume;
    Ok(MonteCarloEstimate { value: pre * mean, std_error: pre * (var / n).sqrt(), samples, seed })
}
