//! Gibbs equilibrium states, partition functions, and free energies.

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, EigenSystem};
use crate::tol;

/// Thermal equilibrium state exp(-beta H)/Z with its bookkeeping.
///
/// The log partition function is the primary carrier; `z` is derived and can
/// overflow to infinity for extreme beta while `ln_z` and the free energy
/// stay finite.
#[derive(Debug, Clone)]
pub struct GibbsState {
    hamiltonian: ComplexMatrix,
    beta: f64,
    ln_z: f64,
    rho: ComplexMatrix,
    /// Eigenbasis populations aligned with `eigen().values()`.
    populations: Vec<f64>,
    eigen: EigenSystem,
}

impl GibbsState {
    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Partition function Z = Tr exp(-beta H).
    pub fn z(&self) -> f64 {
        self.ln_z.exp()
    }

    pub fn ln_z(&self) -> f64 {
        self.ln_z
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    /// Free energy -ln(Z)/beta; absent at beta = 0 where it is undefined.
    pub fn free_energy(&self) -> Option<f64> {
        (self.beta > 0.0).then(|| -self.ln_z / self.beta)
    }
}

/// Builds the Gibbs state exp(-beta H)/Z.
///
/// Works in the eigenbasis with the ground-energy shift trick: the smallest
/// eigenvalue is subtracted before exponentiating and reinserted into ln Z,
/// so no intermediate overflows for beta within [`tol::BETA_MAX`].
pub fn gibbs(h: &ComplexMatrix, beta: f64) -> Result<GibbsState> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be finite and nonnegative, got {beta}"
        )));
    }
    if beta > tol::BETA_MAX {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature {beta} exceeds the supported maximum {}; excited-state \
             populations would underflow double precision",
            tol::BETA_MAX
        )));
    }
    let n = h.require_square()?;
    let eigen = eigh(h)?;

    if beta == 0.0 {
        // infinite temperature is the maximally mixed state, exactly
        return Ok(GibbsState {
            hamiltonian: h.clone(),
            beta,
            ln_z: (n as f64).ln(),
            rho: ComplexMatrix::identity(n).scale_re(1.0 / n as f64),
            populations: vec![1.0 / n as f64; n],
            eigen,
        });
    }

    let (populations, ln_z) = boltzmann_weights(eigen.values(), beta);
    let v = eigen.vectors();
    let rho = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * populations[k] * v[(j, k)].conj())
            .sum()
    });
    Ok(GibbsState {
        hamiltonian: h.clone(),
        beta,
        ln_z,
        rho,
        populations,
        eigen,
    })
}

/// Boltzmann populations exp(-beta e_k)/Z and ln Z for a given spectrum.
///
/// Unlike [`gibbs`] this accepts any real `beta`: the exponents are shifted
/// by the extremal eigenvalue on the appropriate side so nothing overflows.
pub fn boltzmann_weights(values: &[f64], beta: f64) -> (Vec<f64>, f64) {
    if values.is_empty() {
        return (Vec::new(), f64::NEG_INFINITY);
    }
    let shift = if beta >= 0.0 {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    let weights: Vec<f64> = values.iter().map(|&e| (-beta * (e - shift)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let ln_z = total.ln() - beta * shift;
    (weights.iter().map(|w| w / total).collect(), ln_z)
}

/// Free-energy difference F_1 - F_0 = -ln(Z_1/Z_0)/beta at a common inverse
/// temperature. Undefined at beta = 0.
pub fn free_energy_difference(h0: &ComplexMatrix, h1: &ComplexMatrix, beta: f64) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::Undefined(
            "free energy difference needs beta > 0".into(),
        ));
    }
    let g0 = gibbs(h0, beta)?;
    let g1 = gibbs(h1, beta)?;
    Ok(-(g1.ln_z() - g0.ln_z()) / beta)
}
