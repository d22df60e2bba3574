//! Validity analysis for treating a finite, quasi-monochromatic laser pulse
//! as a single quantized field mode interacting with a relativistic electron.
//!
//! The pipeline runs laboratory pulse parameters through natural-unit
//! conversion ([`units`]), the Gaussian wave-packet model and the optimal
//! mode-volume parameter ([`pulse`]), and the closed-form second-order
//! corrections that yield the three validity parameters ([`corrections`]).
//! Every closed form is paired with an independent brute-force check in
//! [`oracle`] (k-space lattice sums, principal-value quadrature) and
//! [`fock`] (truncated number-basis matrices).

pub mod corrections;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod pulse;
pub mod specfun;
pub mod units;

pub use corrections::{
    build_report, lambda_param, mu_param, second_order_energy, ElectronKinematics,
    SecondOrderEnergy, Thresholds, ValidityReport,
};
pub use error::{Error, Result};
pub use pulse::{solve_delta, spreads_from_pulse, SpreadParams};
pub use units::{to_natural, PulseParams};
