//! Brute-force cross-checks of the closed forms: k-lattice mode sums and
//! direct quadrature of the second-order correction integrals.

pub mod fluctuation;
pub mod lattice;
pub mod quadrature;
pub mod resonant;

pub use fluctuation::{
    fluctuation_integral, fluctuation_integral_mc, fluctuation_integral_vector, unexpanded_fluctuation_integral,
    MonteCarloEstimate,
};
pub use lattice::{average_wavevector, lattice_sums, LatticeSums, ModeBox, ModeLattice};
pub use quadrature::{pv_regularize, CompensatedSum, GaussLegendre, QuadratureResult};
pub use resonant::{
    dispersion_odd_terms, resonant_closed_form, resonant_closed_form_signed, resonant_pv_integral,
    unneglected_resonant_real, OddTerms,
};
