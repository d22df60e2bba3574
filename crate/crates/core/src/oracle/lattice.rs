//! Discrete k-space lattice over a rectangular mode box.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{positive, Error, Result};
use crate::oracle::quadrature::CompensatedSum;
use crate::pulse::{coherent_normalization, ModeAmplitude, SpreadParams};
use crate::units::PulseParams;

const CHUNK: usize = 1 << 14;

/// Axis-aligned box in (k⊥x, k⊥y, ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBox {
    pub center: [f64; 3],
    pub half: [f64; 3],
}

impl ModeBox {
    /// Box on which Gaussian-weighted integrals produce Φ(δ) factors:
    /// half-widths (Δ₁, Δ₁, Δ₂) around (0, 0, ω₀).
    pub fn erf_window(s: &SpreadParams) -> Self {
        Self { center: [0.0, 0.0, s.omega0], half: [s.delta1, s.delta1, s.delta2] }
    }

    /// Box of volume Δ₁²Δ₂: full widths (Δ₁, Δ₁, Δ₂) around (0, 0, ω₀).
    pub fn mode_volume(s: &SpreadParams) -> Self {
        Self { center: [0.0, 0.0, s.omega0], half: [0.5 * s.delta1, 0.5 * s.delta1, 0.5 * s.delta2] }
    }

    pub fn volume(&self) -> f64 {
        8.0 * self.half[0] * self.half[1] * self.half[2]
    }
}

/// Cell-centred lattice tiling a [`ModeBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLattice {
    pub extents: ModeBox,
    pub counts: [usize; 3],
    pub spacing: [f64; 3],
    pub cell_volume: f64,
    pub nodes: Vec<ModeAmplitude>,
}

impl ModeLattice {
    /// Lattice carrying the Gaussian amplitudes of `s`.
    pub fn new(extents: ModeBox, counts: [usize; 3], s: &SpreadParams) -> Result<Self> {
        Self::with_amplitude(extents, counts, |x, y, w| s.amplitude(x, y, w).u)
    }

    /// Lattice with an arbitrary amplitude u(k⊥x, k⊥y, ω).
    pub fn with_amplitude<F>(extents: ModeBox, counts: [usize; 3], u: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> f64 + Sync,
    {
        if counts.contains(&0) {
            return Err(Error::EmptyLattice);
        }
        for h in extents.half {
            positive("half_width", h)?;
        }
        let spacing: [f64; 3] = std::array::from_fn(|i| 2.0 * extents.half[i] / counts[i] as f64);
        let coord = |axis: usize, i: usize| {
            extents.center[axis] - extents.half[axis] + (i as f64 + 0.5) * spacing[axis]
        };
        let [nx, ny, nz] = counts;
        let nodes = (0..nx * ny * nz)
            .into_par_iter()
            .map(|idx| {
                let (i, rest) = (idx / (ny * nz), idx % (ny * nz));
                let (j, k) = (rest / nz, rest % nz);
                let (x, y, w) = (coord(0, i), coord(1, j), coord(2, k));
                ModeAmplitude { k_perp_x: x, k_perp_y: y, omega: w, u: u(x, y, w) }
            })
            .collect();
        Ok(Self {
            extents,
            counts,
            spacing,
            cell_volume: spacing.iter().product(),
            nodes,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same box with every axis refined by `factor`.
    pub fn refined(&self, factor: usize, s: &SpreadParams) -> Result<Self> {
        Self::new(self.extents, self.counts.map(|c| c * factor), s)
    }
}

/// Ordered, chunked compensated sum of `f` over the nodes; deterministic
/// regardless of the thread count.
fn node_sum<F>(nodes: &[ModeAmplitude], f: F) -> f64
where
    F: Fn(&ModeAmplitude) -> f64 + Sync,
{
    let partials: Vec<CompensatedSum> =
        nodes.par_chunks(CHUNK).map(|c| c.iter().map(&f).collect()).collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSums {
    /// Collective-mode energy, cm⁻¹.
    pub energy: f64,
    /// V·(lattice volume)/(8π³).
    pub n_modes: f64,
    /// Fluctuation-mode occupancy energy, cm⁻¹.
    pub f_occupancy: f64,
    /// Pulse energy outside the box, W − energy, cm⁻¹.
    pub external_energy: f64,
}

/// Discrete mode sums with normalization C²V/(2π)³.
///
/// `f_occupancy` is the difference of the two sums
/// ω₀[Σ|u|²ΔV − (Σu ΔV)²/Δ₁²Δ₂], which vanishes for flat u on a box of
/// volume Δ₁²Δ₂ and, on the erf window, at the optimal δ.
pub fn lattice_sums(lat: &ModeLattice, p: &PulseParams, s: &SpreadParams, volume: f64) -> Result<LatticeSums> {
    if lat.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let c = coherent_normalization(p, s, volume)?;
    let scale = c * c * volume / (2.0 * PI).powi(3);
    let cv = lat.cell_volume;

    let sum_u2 = node_sum(&lat.nodes, |n| n.u * n.u) * cv;
    let sum_u = node_sum(&lat.nodes, |n| n.u) * cv;
    let energy = scale * s.omega0 * sum_u2;
    let f_occupancy = scale * s.omega0 * (sum_u2 - sum_u * sum_u / s.mode_volume);

    Ok(LatticeSums {
        energy,
        n_modes: volume * cv * lat.len() as f64 / (8.0 * PI.powi(3)),
        f_occupancy,
        external_energy: p.pulse_energy_nat - energy,
    })
}

/// Unweighted node means: (mean ω, mean k) with k = (k⊥x, k⊥y, ω).
pub fn average_wavevector(lat: &ModeLattice) -> Result<(f64, [f64; 3])> {
    if lat.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let n = lat.len() as f64;
    let kx = node_sum(&lat.nodes, |m| m.k_perp_x) / n;
    let ky = node_sum(&lat.nodes, |m| m.k_perp_y) / n;
    let w = node_sum(&lat.nodes, |m| m.omega) / n;
    Ok((w, [kx, ky, w]))
}
