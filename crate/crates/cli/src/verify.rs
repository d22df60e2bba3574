//! Verification suite: closed forms against lattice sums, quadrature and
//! truncated Fock-space matrices, for the reference pulse.

use clap::Args;
use num_rational::Ratio;
use serde::Serialize;

use singlemode::corrections::{fluctuation_energy, ElectronKinematics};
use singlemode::fock::{
    expected_moments, fluctuation_commutator, mixed2_alpha_linear, moments, verify_transformation_law,
    SqueezeParams,
};
use singlemode::oracle::{
    dispersion_odd_terms, fluctuation_integral, fluctuation_integral_mc, lattice_sums, resonant_closed_form_signed,
    resonant_pv_integral, unexpanded_fluctuation_integral, unneglected_resonant_real, ModeBox, ModeLattice,
};
use singlemode::pulse::{energy_fractions, solve_delta_detailed, SpreadParams};
use singlemode::units::to_natural;

use crate::config::{DEFAULT_DURATION, DEFAULT_INTENSITY, DEFAULT_SPOT, DEFAULT_V_PERP, DEFAULT_V_Z, DEFAULT_WAVELENGTH};
use crate::format::rounded;
use crate::{CliError, VOLUME};

/// Lattice counts per axis for the h, h/2, h/4 sequence.
pub const LATTICE_COUNTS: [usize; 3] = [32, 64, 128];
pub const FOCK_ALPHAS: [f64; 3] = [0.0, 0.3, 1.0];
pub const FOCK_ETAS: [f64; 3] = [0.0, 0.2, 0.5];
pub const FOCK_N0S: [usize; 3] = [0, 1, 5];

pub const COMMUTATOR_NOTE: &str = "fluctuation-mode commutator: expanding the definition gives \
delta_kk1 - 1/N; the +1/N form has the wrong sign";
pub const MIXED2_NOTE: &str = "(A+A^dag)A^dag A(A+A^dag) moment: the matrices satisfy the \
4 alpha^2 kappa (2n0+1) term; a 4 alpha kappa (2n0+1) term fails for alpha != 0";

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Relative tolerance for the resonant integral
    #[arg(long, default_value_t = 0.01)]
    pub pv_tol: f64,
    /// Relative tolerance for the fluctuation integral
    #[arg(long, default_value_t = 0.005)]
    pub fluct_tol: f64,
    /// Absolute tolerance for Fock-space identities
    #[arg(long, default_value_t = 1e-8)]
    pub fock_tol: f64,
    /// Fluctuation occupancy bound as a fraction of the pulse energy
    #[arg(long, default_value_t = 1e-3)]
    pub occupancy_tol: f64,
    /// Allowed |Richardson ratio - 4|
    #[arg(long, default_value_t = 0.5)]
    pub order_tol: f64,
    /// Fock-space dimension
    #[arg(long, default_value_t = 128)]
    pub fock_dim: usize,
    /// Flip the sign of the resonant closed form (mutation test)
    #[arg(long, hide = true)]
    pub inject_sign_error: bool,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        Self {
            pv_tol: 0.01,
            fluct_tol: 0.005,
            fock_tol: 1e-8,
            occupancy_tol: 1e-3,
            order_tol: 0.5,
            fock_dim: 128,
            inject_sign_error: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Deviation compared with `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self { name, passed: measured <= tolerance, measured, tolerance, detail }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    /// Resonant real part with the v_z² terms and exact denominator, over the linearized one.
    pub resonant_unneglected_ratio: f64,
    /// Odd frequency term with vacuum dispersion, over |resonant real part|.
    pub odd_term_dispersive_ratio: f64,
    /// Odd frequency term in box coordinates, over |resonant real part|.
    pub odd_term_box_ratio: f64,
    /// Fluctuation integral before expansion in q, over the expanded one.
    pub fluctuation_unexpanded_ratio: f64,
    /// Seeded Monte Carlo fluctuation estimate: relative deviation and standard error.
    pub fluctuation_mc_rel_deviation: f64,
    pub fluctuation_mc_rel_std_error: f64,
    pub fluctuation_mc_seed: u64,
    /// Largest |matrix − linear-in-α form| for the (A+A†)A†A(A+A†) moment over the grid.
    pub mixed2_linear_alpha_max_deviation: f64,
    pub lattice_energy_rel_errors: Vec<f64>,
    pub resonant_quadrature_real: f64,
    pub resonant_closed_real: f64,
    pub resonant_quadrature_imag: f64,
    pub resonant_closed_imag: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub all_passed: bool,
    pub checks: Vec<Check>,
    pub diagnostics: Diagnostics,
    pub notes: Vec<String>,
}

impl Suite {
    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Text rendering from the rounded JSON value so both forms agree.
    pub fn render_text(&self) -> String {
        let v = match rounded(self) {
            Ok(v) => v,
            Err(e) => return format!("error: {e}\n"),
        };
        let mut out = String::new();
        for c in v["checks"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "{:<5} {:<22} measured {} tolerance {}  {}\n",
                if c["passed"] == true { "PASS" } else { "FAIL" },
                c["name"].as_str().unwrap_or_default(),
                c["measured"],
                c["tolerance"],
                c["detail"].as_str().unwrap_or_default()
            ));
        }
        out.push_str("diagnostics:\n");
        if let Some(map) = v["diagnostics"].as_object() {
            for (k, x) in map {
                out.push_str(&format!("  {k} = {x}\n"));
            }
        }
        out.push_str("notes:\n");
        for n in v["notes"].as_array().into_iter().flatten() {
            out.push_str(&format!("  - {}\n", n.as_str().unwrap_or_default()));
        }
        out.push_str(&format!("result: {}\n", if self.all_passed { "all checks passed" } else { "FAILED" }));
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Richardson ratio (E_h − E_{h/2})/(E_{h/2} − E_{h/4}).
pub fn richardson_ratio(e: [f64; 3]) -> f64 {
    (e[0] - e[1]) / (e[1] - e[2])
}

/// Largest deviation of the six moments from their closed forms over the grid,
/// and of the linear-in-α mixed2 form.
pub fn fock_grid_deviation(dim: usize) -> Result<(f64, f64), CliError> {
    let mut worst = 0.0f64;
    let mut linear = 0.0f64;
    for &alpha in &FOCK_ALPHAS {
        for &eta in &FOCK_ETAS {
            for &n0 in &FOCK_N0S {
                let sp = SqueezeParams::new(alpha, eta, n0)?;
                let got = moments(&sp, dim)?;
                let want = expected_moments(&sp);
                for (g, w) in [
                    (got.m1, want.m1),
                    (got.m2, want.m2),
                    (got.m3, want.m3),
                    (got.n_op, want.n_op),
                    (got.mixed1, want.mixed1),
                    (got.mixed2, want.mixed2),
                ] {
                    let d = (g - w).abs();
                    worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
                }
                linear = linear.max((got.mixed2 - mixed2_alpha_linear(&sp)).abs());
            }
        }
    }
    Ok((worst, linear))
}

/// Commutator cases (N, k, k1) checked against δ_{kk₁} − 1/N.
pub const COMMUTATOR_CASES: [(usize, usize, usize); 6] =
    [(2, 0, 0), (2, 0, 1), (3, 2, 2), (10, 3, 7), (1000, 5, 5), (1_000_000, 0, 999_999)];

pub fn commutator_mismatches() -> Result<usize, CliError> {
    let mut bad = 0;
    for (n, k, k1) in COMMUTATOR_CASES {
        let got = fluctuation_commutator(n, k, k1)?;
        let delta = if k == k1 { 1 } else { 0 };
        if got != Ratio::from_integer(delta) - Ratio::new(1, n as i128) {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Suite, CliError> {
    let p = to_natural(DEFAULT_INTENSITY, DEFAULT_WAVELENGTH, DEFAULT_DURATION, DEFAULT_SPOT)?;
    let s = SpreadParams::from_pulse(&p, VOLUME)?;
    let e = ElectronKinematics::new(DEFAULT_V_PERP, DEFAULT_V_Z)?;
    let mut checks = Vec::new();
    let mut diag = Diagnostics::default();

    let root = solve_delta_detailed()?;
    checks.push(Check::new(
        "delta_root",
        root.residual.abs(),
        1e-10,
        format!("delta = {:.10}, {} iterations", root.root, root.iterations),
    ));

    let want = p.pulse_energy_nat * energy_fractions(s.delta).0;
    let mut energies = [0.0; 3];
    let mut occupancy = 0.0;
    for (i, n) in LATTICE_COUNTS.iter().enumerate() {
        let lat = ModeLattice::new(ModeBox::erf_window(&s), [*n; 3], &s)?;
        let sums = lattice_sums(&lat, &p, &s, VOLUME)?;
        energies[i] = sums.energy;
        occupancy = sums.f_occupancy;
    }
    diag.lattice_energy_rel_errors = energies.iter().map(|&x| x / want - 1.0).collect();
    let ratio = richardson_ratio(energies);
    checks.push(Check::new(
        "lattice_energy_order",
        (ratio - 4.0).abs(),
        args.order_tol,
        format!("Richardson ratio {ratio:.4} over {LATTICE_COUNTS:?} nodes per axis"),
    ));
    checks.push(Check::new(
        "lattice_occupancy",
        occupancy.abs() / p.pulse_energy_nat,
        args.occupancy_tol,
        format!("f/W at {} nodes per axis", LATTICE_COUNTS[2]),
    ));

    let quad = resonant_pv_integral(&s, &e, s.omega0)?;
    let sign = if args.inject_sign_error { -1.0 } else { 1.0 };
    let closed = resonant_closed_form_signed(&s, &e, sign);
    diag.resonant_quadrature_real = quad.value.re;
    diag.resonant_closed_real = closed.re;
    diag.resonant_quadrature_imag = quad.value.im;
    diag.resonant_closed_imag = closed.im;
    checks.push(Check::new(
        "pv_imag",
        rel(quad.value.im, closed.im),
        args.pv_tol,
        "pole-shell weight against the closed form".into(),
    ));
    checks.push(Check::new(
        "pv_real",
        rel(quad.value.re, closed.re),
        args.pv_tol,
        format!("principal value {:.6e} against closed form {:.6e}", quad.value.re, closed.re),
    ));
    diag.resonant_unneglected_ratio = unneglected_resonant_real(&s, &e, s.omega0)? / quad.value.re;
    let odd = dispersion_odd_terms(&s, &e, s.omega0)?;
    diag.odd_term_dispersive_ratio = odd.dispersive_frequency / quad.value.re.abs();
    diag.odd_term_box_ratio = odd.box_frequency / quad.value.re.abs();

    let fq = fluctuation_integral(&s, &e, s.omega0)?;
    let fc = fluctuation_energy(&s, &e)?;
    checks.push(Check::new(
        "fluctuation_integral",
        rel(fq.value, fc),
        args.fluct_tol,
        "tensor Gauss-Legendre against the closed form".into(),
    ));
    let longitudinal = ElectronKinematics::new(0.0, DEFAULT_V_Z)?;
    let zero_q = fluctuation_integral(&s, &longitudinal, s.omega0)?.value;
    let zero_c = fluctuation_energy(&s, &longitudinal)?;
    checks.push(Check::new(
        "fluctuation_zero",
        (zero_q - zero_c).abs(),
        1e-12,
        "v_perp = 0, v_z = v: both vanish".into(),
    ));
    diag.fluctuation_unexpanded_ratio = unexpanded_fluctuation_integral(&s, &e, s.omega0)? / fq.value;
    let mc = fluctuation_integral_mc(&s, &e, s.omega0, 100_000, 2024)?;
    diag.fluctuation_mc_rel_deviation = rel(mc.value, fq.value);
    diag.fluctuation_mc_rel_std_error = mc.std_error / fq.value;
    diag.fluctuation_mc_seed = mc.seed;

    let (worst, linear) = fock_grid_deviation(args.fock_dim)?;
    diag.mixed2_linear_alpha_max_deviation = linear;
    checks.push(Check::new(
        "fock_moments",
        worst,
        args.fock_tol,
        format!("six moments, {} parameter sets, D = {}", 27, args.fock_dim),
    ));
    let law = verify_transformation_law(&SqueezeParams::new(0.5, 0.3, 0)?, args.fock_dim)?;
    checks.push(Check::new(
        "fock_transformation",
        law,
        args.fock_tol,
        format!("alpha = 0.5, eta = 0.3, block n < {}", args.fock_dim / 8),
    ));
    let bad = commutator_mismatches()?;
    checks.push(Check::new(
        "commutator",
        bad as f64,
        0.0,
        format!("exact rationals, {} cases: delta_kk1 - 1/N", COMMUTATOR_CASES.len()),
    ));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(Suite {
        all_passed,
        checks,
        diagnostics: diag,
        notes: vec![COMMUTATOR_NOTE.to_string(), MIXED2_NOTE.to_string()],
    })
}
