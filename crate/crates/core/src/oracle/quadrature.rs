//! One-dimensional quadrature building blocks.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule; nodes from Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫ₐᵇ f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum.add(w * f(mid + half * x));
        }
        half * sum.value()
    }

    /// ∫ₐᵇ f after the substitution x = a + (b−a)·s(u), s(u) = 10u³ − 15u⁴ + 6u⁵.
    ///
    /// The Jacobian 30u²(1−u)² vanishes to second order at both ends, which
    /// tames integrable endpoint singularities (logarithms, square roots).
    pub fn integrate_clustered<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        if len == 0.0 {
            return 0.0;
        }
        let mut sum = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let u = 0.5 * (x + 1.0);
            let s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
            let jac = 30.0 * u * u * (1.0 - u) * (1.0 - u);
            sum.add(0.5 * w * jac * f(a + len * s));
        }
        len * sum.value()
    }

    /// Clustered integration over [a, b] split at every breakpoint strictly inside.
    pub fn integrate_split<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, breaks: &[f64], mut f: F) -> f64 {
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
        cuts.sort_by(f64::total_cmp);
        let mut lo = a;
        let mut total = CompensatedSum::new();
        for hi in cuts.into_iter().chain(std::iter::once(b)) {
            total.add(self.integrate_clustered(lo, hi, &mut f));
            lo = hi;
        }
        total.value()
    }
}

/// Returns (P_n(x), P_n'(x)).
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub estimated_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const PV_RULE_POINTS: usize = 48;

/// Principal value of ∫ₐᵇ f where f has a simple pole at `pole`.
///
/// The interval symmetric about the pole is folded, ∫₀ʳ [f(p+t) + f(p−t)] dt,
/// so the odd singular part cancels pairwise; the remainder on the longer
/// side is integrated on geometrically growing panels. A pole outside
/// [a, b] is integrated directly.
pub fn pv_regularize<F: Fn(f64) -> f64>(f: F, pole: f64, a: f64, b: f64) -> Result<f64> {
    let (a, b) = if a <= b { (a, b) } else { return pv_regularize(f, pole, b, a).map(|v| -v) };
    if pole == a || pole == b {
        return Err(Error::Domain {
            field: "pole",
            value: pole,
            reason: "pole on the integration boundary",
        });
    }
    let rule = GaussLegendre::new(PV_RULE_POINTS);
    if pole < a || pole > b {
        return Ok(panels(&rule, a, b, pole, &f));
    }

    let r = (pole - a).min(b - pole);
    let mut total = CompensatedSum::new();
    total.add(rule.integrate(0.0, r, |t| f(pole + t) + f(pole - t)));
    if b - pole > r {
        total.add(panels(&rule, pole + r, b, pole, &f));
    } else if pole - a > r {
        total.add(panels(&rule, a, pole - r, pole, &f));
    }
    Ok(total.value())
}

/// Integrates over [a, b] with panels whose length doubles away from `pole`.
fn panels<F: Fn(f64) -> f64>(rule: &GaussLegendre, a: f64, b: f64, pole: f64, f: &F) -> f64 {
    let mut total = CompensatedSum::new();
    if pole <= a {
        let mut lo = a;
        let mut step = (a - pole).max((b - a) * 1e-3);
        while lo < b {
            let hi = (lo + step).min(b);
            total.add(rule.integrate(lo, hi, f));
            lo = hi;
            step *= 2.0;
        }
    } else {
        let mut hi = b;
        let mut step = (pole - b).max((b - a) * 1e-3);
        while hi > a {
            let lo = (hi - step).max(a);
            total.add(rule.integrate(lo, hi, f));
            hi = lo;
            step *= 2.0;
        }
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is exact for 5 points
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(9) + 3.0 * x * x);
        let want = (2f64.powi(10) - 1.0) / 10.0 + (8.0 + 1.0);
        assert!((v - want).abs() < 1e-12);
        let sum: f64 = GaussLegendre::new(64).weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-13);
    }

    #[test]
    fn large_rule_nodes_are_sorted_and_inside() {
        let rule = GaussLegendre::new(1024);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes[0] > -1.0 && rule.nodes[1023] < 1.0);
        let v = rule.integrate(0.0, PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn clustered_handles_log_endpoint() {
        let rule = GaussLegendre::new(64);
        // ∫₀¹ ln x dx = −1
        let v = rule.integrate_clustered(0.0, 1.0, f64::ln);
        assert!((v + 1.0).abs() < 1e-9, "{v}");
        let v = rule.integrate_split(-1.0, 1.0, &[0.0], |x| x.abs().ln());
        assert!((v + 2.0).abs() < 1e-9);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn principal_values() {
        let v = pv_regularize(|x| 1.0 / x, 0.0, -1.0, 1.0).unwrap();
        assert!(v.abs() < 1e-15);
        let v = pv_regularize(|x| 1.0 / (x - 1.0), 1.0, 0.0, 2.0).unwrap();
        assert!(v.abs() < 1e-12);
        let v = pv_regularize(|x| 1.0 / x, 0.0, -1.0, 2.0).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-13);
        let v = pv_regularize(|x| 1.0 / x, 0.0, -1e-3, 5.0).unwrap();
        assert!((v - 5000f64.ln()).abs() < 1e-11);
        // pole outside
        let v = pv_regularize(|x| 1.0 / x, 0.0, 1.0, 3.0).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-13);
        // smooth numerator: PV∫₋₁² eˣ/x dx = Ei(2) − Ei(−1)... checked via split form
        let v = pv_regularize(|x| x.exp() / x, 0.0, -1.0, 2.0).unwrap();
        let want = 4.954_234_356_001_89 - (-0.219_383_934_395_520_3);
        assert!((v - want).abs() < 1e-12, "{v}");
        assert!(pv_regularize(|x| 1.0 / x, 0.0, 0.0, 1.0).is_err());
    }
}
