//! Truncated number-basis checks of the collective-mode operator algebra.
//!
//! With real α and η the generators α(A† − A) and −(η/2)(A² − A†²) are real
//! antisymmetric matrices, so every operator here is a real matrix and S is
//! orthogonal.

use nalgebra::DMatrix;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Displacement α, rapidity η, squeeze factor κ = e^{2η}, occupation n₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    pub alpha: f64,
    pub eta: f64,
    pub kappa: f64,
    pub n0: usize,
}

impl SqueezeParams {
    pub fn new(alpha: f64, eta: f64, n0: usize) -> Result<Self> {
        for (field, value) in [("alpha", alpha), ("eta", eta)] {
            if !value.is_finite() {
                return Err(Error::Domain { field, value, reason: "must be finite" });
            }
        }
        let kappa = (2.0 * eta).exp();
        let sk = kappa.sqrt();
        let cosh_form = 0.5 * (sk + 1.0 / sk);
        if (cosh_form - eta.cosh()).abs() > 1e-12 * eta.cosh() {
            return Err(Error::Domain { field: "kappa", value: kappa, reason: "inconsistent with cosh(eta)" });
        }
        Ok(Self { alpha, eta, kappa, n0 })
    }

    /// β = α² + (√κ − 1/√κ)²/4.
    pub fn beta(&self) -> f64 {
        let nu = self.nu();
        self.alpha * self.alpha + nu * nu
    }

    /// (√κ + 1/√κ)/2 = cosh η.
    pub fn mu(&self) -> f64 {
        let sk = self.kappa.sqrt();
        0.5 * (sk + 1.0 / sk)
    }

    /// (√κ − 1/√κ)/2 = sinh η.
    pub fn nu(&self) -> f64 {
        let sk = self.kappa.sqrt();
        0.5 * (sk - 1.0 / sk)
    }
}

/// Operator on span{|0⟩, …, |D−1⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub matrix: DMatrix<f64>,
}

impl TruncatedOperator {
    /// A with A[n−1, n] = √n.
    pub fn annihilation(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = (n as f64).sqrt();
        }
        Self { dim, matrix: m }
    }

    pub fn creation(dim: usize) -> Self {
        Self::annihilation(dim).adjoint()
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, matrix: self.matrix.transpose() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { dim: self.dim, matrix: &self.matrix * &other.matrix }
    }

    /// ⟨n|X|n⟩.
    pub fn diagonal(&self, n: usize) -> f64 {
        self.matrix[(n, n)]
    }

    /// Largest |entry| of the leading `block`×`block` submatrix.
    pub fn block_max_abs(&self, block: usize) -> f64 {
        self.matrix.view((0, 0), (block, block)).iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Checks D ≥ 16, |α| ≤ √D/4, |η| ≤ ln(D)/8.
fn check_truncation(sp: &SqueezeParams, dim: usize) -> Result<()> {
    if dim < 16 {
        return Err(Error::Truncation(format!("dimension {dim} < 16")));
    }
    let d = dim as f64;
    if sp.alpha.abs() > d.sqrt() / 4.0 {
        return Err(Error::Truncation(format!("|alpha| = {} exceeds sqrt(D)/4 = {}", sp.alpha.abs(), d.sqrt() / 4.0)));
    }
    if sp.eta.abs() > d.ln() / 8.0 {
        return Err(Error::Truncation(format!("|eta| = {} exceeds ln(D)/8 = {}", sp.eta.abs(), d.ln() / 8.0)));
    }
    Ok(())
}

/// S = e^{α(A†−A)} e^{−(η/2)(A²−A†²)} in dimension `dim`.
pub fn build_s(sp: &SqueezeParams, dim: usize) -> Result<TruncatedOperator> {
    check_truncation(sp, dim)?;
    let a = TruncatedOperator::annihilation(dim).matrix;
    let ad = a.transpose();
    let displace = (&ad - &a) * sp.alpha;
    let a2 = &a * &a;
    let ad2 = &ad * &ad;
    let squeeze = (a2 - ad2) * (-0.5 * sp.eta);
    Ok(TruncatedOperator { dim, matrix: expm(&displace)? * expm(&squeeze)? })
}

// Padé(13) coefficients for scaling and squaring.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Matrix exponential by Padé(13) scaling and squaring.
pub fn expm(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let norm1 = m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil() as i32 } else { 0 };
    let a = m / 2f64.powi(squarings);
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * inner_u;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let lu = (&v - &u).lu();
    let mut r = lu
        .solve(&(&v + &u))
        .ok_or_else(|| Error::Truncation("singular Pade denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// max|S†AS − (μA + νA† + α)| over the leading `block`×`block` entries.
pub fn transformation_deviation(sp: &SqueezeParams, dim: usize, block: usize) -> Result<f64> {
    let s = build_s(sp, dim)?;
    let a = TruncatedOperator::annihilation(dim);
    let lhs = s.adjoint().mul(&a).mul(&s).matrix;
    let rhs = &a.matrix * sp.mu() + a.matrix.transpose() * sp.nu() + DMatrix::identity(dim, dim) * sp.alpha;
    let diff = TruncatedOperator { dim, matrix: lhs - rhs };
    Ok(diff.block_max_abs(block.min(dim)))
}

/// Transformation-law deviation on the n < D/8 block.
pub fn verify_transformation_law(sp: &SqueezeParams, dim: usize) -> Result<f64> {
    transformation_deviation(sp, dim, dim / 8)
}

/// max|S†S − I| on the n < D/2 block.
pub fn unitarity_deviation(sp: &SqueezeParams, dim: usize) -> Result<f64> {
    let s = build_s(sp, dim)?;
    let diff = s.adjoint().mul(&s).matrix - DMatrix::identity(dim, dim);
    Ok(TruncatedOperator { dim, matrix: diff }.block_max_abs(dim / 2))
}

/// ⟨n₀|S†XS|n₀⟩ for the six operator products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    /// X = A + A†
    pub m1: f64,
    /// X²
    pub m2: f64,
    /// X³
    pub m3: f64,
    /// A†A
    pub n_op: f64,
    /// X A†A
    pub mixed1: f64,
    /// X A†A X
    pub mixed2: f64,
}

pub fn moments(sp: &SqueezeParams, dim: usize) -> Result<Moments> {
    if 4 * sp.n0 >= dim {
        return Err(Error::Truncation(format!("n0 = {} must be < D/4 = {}", sp.n0, dim / 4)));
    }
    let s = build_s(sp, dim)?;
    let a = TruncatedOperator::annihilation(dim);
    let ad = a.adjoint();
    let x = TruncatedOperator { dim, matrix: &a.matrix + &ad.matrix };
    let number = ad.mul(&a);
    let sd = s.adjoint();
    let avg = |op: &TruncatedOperator| sd.mul(op).mul(&s).diagonal(sp.n0);
    let x2 = x.mul(&x);
    Ok(Moments {
        m1: avg(&x),
        m2: avg(&x2),
        m3: avg(&x2.mul(&x)),
        n_op: avg(&number),
        mixed1: avg(&x.mul(&number)),
        mixed2: avg(&x.mul(&number).mul(&x)),
    })
}

/// Closed-form moments. `mixed2` carries 4α²κ(2n₀+1); the alternative
/// reading with 4ακ(2n₀+1) is [`mixed2_alpha_linear`].
pub fn expected_moments(sp: &SqueezeParams) -> Moments {
    let (a, k, b) = (sp.alpha, sp.kappa, sp.beta());
    let n = sp.n0 as f64;
    let odd = 2.0 * n + 1.0;
    let plus = k + 1.0 / k;
    Moments {
        m1: 2.0 * a,
        m2: k * odd + 4.0 * a * a,
        m3: 6.0 * a * k * odd + 8.0 * a.powi(3),
        n_op: n / 2.0 * plus + b,
        mixed1: a * k * odd + a * plus * n + 2.0 * a * b,
        mixed2: mixed2_common(sp) + 4.0 * a * a * k * odd,
    }
}

/// X A†A X moment with the 4ακ(2n₀+1) term.
pub fn mixed2_alpha_linear(sp: &SqueezeParams) -> f64 {
    mixed2_common(sp) + 4.0 * sp.alpha * sp.kappa * (2.0 * sp.n0 as f64 + 1.0)
}

fn mixed2_common(sp: &SqueezeParams) -> f64 {
    let (a, k, b) = (sp.alpha, sp.kappa, sp.beta());
    let n = sp.n0 as f64;
    k / 2.0 * (k + 1.0 / k) * (2.0 * n * n + n + 1.0)
        + k / 4.0 * (k - 1.0 / k) * (2.0 * n * n + 2.0 * n)
        + b * k * (2.0 * n + 1.0)
        + 2.0 * a * a * (k + 1.0 / k) * n
        + 4.0 * a * a * b
}

/// [c̃_k, c̃_{k₁}†] for c̃_k = a_k − (1/N)Σ_l a_l, evaluated exactly from
/// the coefficient vectors: Σ_l (δ_{kl} − 1/N)(δ_{k₁l} − 1/N) = δ_{kk₁} − 1/N.
pub fn fluctuation_commutator(n: usize, k: usize, k1: usize) -> Result<Ratio<i128>> {
    if n < 2 {
        return Err(Error::Domain { field: "N", value: n as f64, reason: "need at least 2 modes" });
    }
    for (field, idx) in [("k", k), ("k1", k1)] {
        if idx >= n {
            return Err(Error::Domain { field, value: idx as f64, reason: "mode index must be < N" });
        }
    }
    let inv = Ratio::new(1i128, n as i128);
    let coeff = |mode: usize, l: usize| if mode == l { Ratio::from_integer(1) - inv } else { -inv };
    Ok((0..n).map(|l| coeff(k, l) * coeff(k1, l)).sum())
}
