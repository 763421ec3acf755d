//! Centralized numerical tolerances.
//!
//! Every validating constructor and structural check in this crate pulls its
//! threshold from one [`Tolerances`] record so tests can tighten or loosen
//! them uniformly instead of scattering magic numbers.

/// Tolerance configuration shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural validation: trace preservation, Hermiticity, unitarity,
    /// positivity of states.
    pub validation: f64,
    /// Reconstruction residuals: eigendecomposition round trips, duality
    /// identities, Choi round trips.
    pub reconstruction: f64,
    /// Equality of two quantities computed along independent paths.
    pub equality: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        validation: 1e-10,
        reconstruction: 1e-11,
        equality: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Structural validation threshold (trace preservation, Hermiticity).
pub const VALIDATION: f64 = Tolerances::DEFAULT.validation;
/// Reconstruction/duality residual threshold.
pub const RECONSTRUCTION: f64 = Tolerances::DEFAULT.reconstruction;
/// Two-path equality threshold.
pub const EQUALITY: f64 = Tolerances::DEFAULT.equality;

/// Relative off-diagonal mass at which the Jacobi eigensolver stops.
pub const JACOBI_CONVERGENCE: f64 = 1e-14;
/// Hard cap on Jacobi sweeps before reporting failure.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative gap below which eigenvalues are treated as a degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;
/// Largest inverse temperature accepted by the Gibbs constructor; beyond this
/// excited-state populations underflow f64 silently.
pub const BETA_MAX: f64 = 1e3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_ordered() {
        let t = Tolerances::default();
        assert!(t.equality < t.reconstruction);
        assert!(t.reconstruction < t.validation);
    }
}
