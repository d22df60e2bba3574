//! Error function and a bracketing root solver.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default absolute tolerance for [`find_root`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ROOT_ITERATIONS: usize = 300;

/// Switch point between the series and the continued fraction.
const SERIES_LIMIT: f64 = 3.0;

/// Error function Φ(z) = 2/√π ∫₀ᶻ e^{−t²} dt.
///
/// For |z| ≤ 3 uses the all-positive series
/// `erf z = 2/√π e^{−z²} Σ 2ⁿ z^{2n+1} / (2n+1)!!`, which has no cancellation;
/// beyond that, 1 − erfc(z) with erfc from its continued fraction.
/// Only `exp` is taken from the platform.
pub fn phi(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let x = z.abs();
    let value = if x <= SERIES_LIMIT {
        erf_series(x)
    } else {
        1.0 - erfc_continued_fraction(x)
    };
    value.copysign(z)
}

/// Complementary error function 1 − Φ(z), accurate in the tail.
pub fn phi_complement(z: f64) -> f64 {
    if z > SERIES_LIMIT {
        erfc_continued_fraction(z)
    } else {
        1.0 - phi(z)
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > sum * 1e-17 {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    if x > 27.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` on `[lo, hi]` by bisection followed by a Newton polish.
///
/// On success `|f(root)| ≤ tol` and the final bracket is no wider than `tol`.
/// The bisection path depends only on the sign of `f`, so the result is
/// unchanged when `f` is replaced by `−f`.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain {
            field: "tol",
            value: tol,
            reason: "must be finite and > 0",
        });
    }
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x, value: v })
        }
    };

    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = eval(a)?;
    let fb = eval(b)?;
    if fa == 0.0 {
        return Ok(RootResult { root: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, residual: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let mut iterations = 0;
    let (mut mid, mut fmid);
    loop {
        iterations += 1;
        mid = 0.5 * (a + b);
        fmid = eval(mid)?;
        if fmid == 0.0 {
            return Ok(RootResult { root: mid, residual: 0.0, iterations });
        }
        if fmid.signum() == fa.signum() {
            a = mid;
            fa = fmid;
        } else {
            b = mid;
        }
        if b - a <= tol {
            break;
        }
        if iterations >= MAX_ROOT_ITERATIONS {
            return Err(Error::RootNotConverged { iterations, width: b - a });
        }
    }

    // Newton polish inside the final bracket, derivative by central difference.
    let mut x = 0.5 * (a + b);
    let mut fx = eval(x)?;
    for _ in 0..4 {
        let h = (b - a).max(x.abs() * 1e-8);
        let slope = (eval(x + h)? - eval(x - h)?) / (2.0 * h);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let candidate = x - fx / slope;
        if !(candidate >= a && candidate <= b) {
            break;
        }
        let fc = eval(candidate)?;
        iterations += 1;
        if fc.abs() >= fx.abs() {
            break;
        }
        x = candidate;
        fx = fc;
    }

    if fx.abs() > tol {
        return Err(Error::RootNotConverged { iterations, width: b - a });
    }
    Ok(RootResult { root: x, residual: fx, iterations })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // 40-digit reference values (mpmath).
    const ERF_TABLE: [(f64, f64); 12] = [
        (0.001, 0.0011283787909692363799),
        (0.1, 0.1124629160182848922),
        (0.5, 0.52049987781304653768),
        (1.0, 0.84270079294971486934),
        (1.5, 0.96610514647531072707),
        (2.0, 0.99532226501895273416),
        (2.503, 0.99959953404860640619),
        (2.9, 0.99995890212190054116),
        (3.0, 0.99997790950300141456),
        (3.1, 0.9999883513426328004),
        (4.0, 0.99999998458274209972),
        (5.0, 0.99999999999846254021),
    ];

    #[test]
    fn matches_reference_table() {
        for (z, want) in ERF_TABLE {
            assert!((phi(z) - want).abs() <= 1e-15, "erf({z}) = {} vs {want}", phi(z));
            assert!((phi(-z) + want).abs() <= 1e-15);
        }
    }

    #[test]
    fn tail_complement() {
        let want = [(3.5, 7.4309837234141274552e-7), (4.0, 1.5417257900280018852e-8), (6.0, 2.1519736712498913117e-17)];
        for (z, w) in want {
            assert!((phi_complement(z) / w - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn special_points() {
        assert_eq!(phi(0.0), 0.0);
        assert!((phi(6.0) - 1.0).abs() <= 1e-15);
        assert!((phi(2.503) - 0.99960).abs() < 5e-6);
        assert_eq!(phi(40.0), 1.0);
    }

    #[test]
    fn monotone_over_switch_point() {
        let mut prev = phi(-6.0);
        for i in 1..=12_000 {
            let z = -6.0 + i as f64 * 1e-3;
            let v = phi(z);
            assert!(v >= prev, "erf not monotone at {z}");
            prev = v;
        }
    }

    #[test]
    fn linear_and_quadratic_roots() {
        let r = find_root(|x| x - 1.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((r.root - 1.0).abs() <= 1e-10);
        let r = find_root(|x| x * x - 2.0, 1.0, 2.0, 1e-10).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() <= 1e-10);
        assert!(r.residual.abs() <= 1e-10);
    }

    #[test]
    fn bracket_and_evaluation_errors() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(Error::Bracket { .. })));
        assert!(matches!(
            find_root(|x| if x > 0.7 { f64::NAN } else { x - 0.9 }, 0.0, 1.0, 1e-10),
            Err(Error::Evaluation { .. })
        ));
        assert!(matches!(find_root(|x| x, -1.0, 1.0, 0.0), Err(Error::Domain { .. })));
    }

    proptest::proptest! {
        #[test]
        fn odd_symmetry(z in -8.0f64..8.0) {
            proptest::prop_assert_eq!(phi(-z), -phi(z));
        }

        #[test]
        fn root_invariant_under_sign_flip(c in 0.1f64..1.9, k in 0.2f64..5.0) {
            let f = |x: f64| k * (x - c) + 0.3 * (x - c).powi(3);
            let a = find_root(f, 0.0, 2.0, 1e-10).unwrap();
            let b = find_root(|x| -f(x), 0.0, 2.0, 1e-10).unwrap();
            proptest::prop_assert_eq!(a.root, b.root);
            proptest::prop_assert!((a.root - c).abs() < 1e-9);
        }
    }
}
