//! The nonunitality operator G = Phi(rho_*) - rho_* and bounds on its size.
//!
//! For a trace-preserving channel, G is traceless and Hermitian, its
//! Hilbert-Schmidt norm is bounded through the map norm and through the
//! dimension alone, and complete contractions saturate the dimensional
//! bound. All bounds are exposed as report fields so their slack can be
//! inspected per channel.

use serde::Serialize;

use crate::bloch::{to_bloch, BlochVector};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::io::MatrixLiteral;
use crate::linalg::{hs_inner, ComplexMatrix};

/// G = Phi(rho_*A) - rho_*B, the image defect of the maximally mixed state.
pub fn nonunitality_operator(phi: &QuantumChannel) -> Result<ComplexMatrix> {
    let mixed_in = ComplexMatrix::identity(phi.dim_in()).scale_re(1.0 / phi.dim_in() as f64);
    let mixed_out = ComplexMatrix::identity(phi.dim_out()).scale_re(1.0 / phi.dim_out() as f64);
    Ok(&phi.apply(&mixed_in)? - &mixed_out)
}

/// All nonunitality quantities and bounds for one square channel.
#[derive(Debug, Clone)]
pub struct NonunitalityReport {
    pub g: ComplexMatrix,
    pub tau: BlochVector,
    /// ||G||_2.
    pub hs_norm: f64,
    /// ||Phi(I) - I||_2, computed directly from the identity image.
    pub defect_identity: f64,
    /// ||Phi|| = ||Phi(I)||_inf.
    pub map_norm: f64,
    /// sqrt(N (||Phi|| - 1)), bounding the identity defect.
    pub bound_prop2: f64,
    /// sqrt(N (N - 1)), the dimension-only bound on the identity defect.
    pub bound_dim: f64,
    /// (||Phi(rho_*)||_inf - 1/N)^(1/2), bounding ||G||_2.
    pub bound_rscmn: f64,
    /// sqrt(2) * bound_rscmn, bounding |tau|.
    pub bound_tau: f64,
}

impl NonunitalityReport {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// Slack of each bound, nonnegative when the bound holds:
    /// (prop2, dim, rscmn, tau).
    pub fn slacks(&self) -> (f64, f64, f64, f64) {
        (
            self.bound_prop2 - self.defect_identity,
            self.bound_dim - self.defect_identity,
            self.bound_rscmn - self.hs_norm,
            self.bound_tau - self.tau.norm(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Json<'a> {
            dim: usize,
            g: MatrixLiteral,
            tau: &'a [f64],
            hs_norm: f64,
            defect_identity: f64,
            map_norm: f64,
            bound_prop2: f64,
            bound_dim: f64,
            bound_rscmn: f64,
            bound_tau: f64,
        }
        serde_json::to_value(Json {
            dim: self.dim(),
            g: MatrixLiteral::from_matrix(&self.g),
            tau: self.tau.components(),
            hs_norm: self.hs_norm,
            defect_identity: self.defect_identity,
            map_norm: self.map_norm,
            bound_prop2: self.bound_prop2,
            bound_dim: self.bound_dim,
            bound_rscmn: self.bound_rscmn,
            bound_tau: self.bound_tau,
        })
        .expect("report serialization cannot fail")
    }
}

/// Computes the full bound report for a square trace-preserving channel.
pub fn bounds_report(phi: &QuantumChannel) -> Result<NonunitalityReport> {
    if phi.dim_in() != phi.dim_out() {
        return Err(Error::Unsupported(
            "bounds report needs a square channel".into(),
        ));
    }
    let n = phi.dim_in() as f64;
    let g = nonunitality_operator(phi)?;
    let tau = to_bloch(&g)?;
    let hs_norm = g.frobenius_norm();
    let identity_image = phi.identity_image();
    let defect_identity =
        (&identity_image - &ComplexMatrix::identity(phi.dim_out())).frobenius_norm();
    let map_norm = phi.map_norm()?;
    // ||Phi|| - 1 can round to a tiny negative for unital channels
    let bound_prop2 = (n * (map_norm - 1.0).max(0.0)).sqrt();
    let bound_dim = (n * (n - 1.0)).sqrt();
    let bound_rscmn = (map_norm / n - 1.0 / n).max(0.0).sqrt();
    let bound_tau = 2.0f64.sqrt() * bound_rscmn;
    Ok(NonunitalityReport {
        g,
        tau,
        hs_norm,
        defect_identity,
        map_norm,
        bound_prop2,
        bound_dim,
        bound_rscmn,
        bound_tau,
    })
}

/// Deviation of the Choi reference marginal from the maximally mixed state,
/// against its map-norm bound.
///
/// Returns `(lhs, rhs)` with `lhs = ||Tr_R(eta) - rho_*||_2` and
/// `rhs = N^{-1/2} sqrt(||Phi|| - 1)`; lhs also equals ||G||_2, which tests
/// exploit as a second computation path.
pub fn choi_marginal_bound_check(phi: &QuantumChannel) -> Result<(f64, f64)> {
    let n = phi.dim_in();
    let marginal = phi.choi()?.reference_marginal()?;
    let mixed = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
    let lhs = (&marginal - &mixed).frobenius_norm();
    let rhs = (phi.map_norm()? - 1.0).max(0.0).sqrt() / (n as f64).sqrt();
    Ok((lhs, rhs))
}

/// Hilbert-Schmidt overlap <H, G>_hs between a Hamiltonian and a
/// nonunitality operator. Real for Hermitian inputs.
pub fn hs_angle_with_hamiltonian(g: &ComplexMatrix, h: &ComplexMatrix) -> Result<f64> {
    for (name, m) in [("G", g), ("H", h)] {
        let defect = m.hermiticity_defect();
        if defect > crate::tol::VALIDATION * m.frobenius_norm().max(1.0) {
            return Err(Error::Validation(format!("{name} is not Hermitian")));
        }
    }
    Ok(hs_inner(h, g)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel;
    use crate::linalg::basis_state;
    use crate::zoo;

    #[test]
    fn unital_channel_has_zero_operator() {
        let ch = random_channel(3, 1, 42).unwrap();
        let g = nonunitality_operator(&ch).unwrap();
        assert!(g.frobenius_norm() < 1e-12);
        let report = bounds_report(&ch).unwrap();
        assert!(report.hs_norm < 1e-12);
        assert!(report.defect_identity < 1e-11);
        assert!(report.bound_prop2 >= 0.0);
        assert!(report.bound_rscmn >= 0.0);
    }

    #[test]
    fn amplitude_damping_matches_bloch_form() {
        let p = 0.45;
        let ch = zoo::amplitude_damping_2(p).unwrap();
        let g = nonunitality_operator(&ch).unwrap();
        assert!(g.approx_eq(&ComplexMatrix::diag(&[-p / 2.0, p / 2.0]), 1e-14));
        let report = bounds_report(&ch).unwrap();
        assert!((report.tau.components()[2] + p).abs() < 1e-13);
        assert!((report.tau.norm() - p).abs() < 1e-13);
    }

    #[test]
    fn three_level_damping_operator() {
        let (p, q) = (0.3, 0.6);
        let ch = zoo::gad_3(p, q).unwrap();
        let g = nonunitality_operator(&ch).unwrap();
        let expected = ComplexMatrix::diag(&[-p / 3.0, -q / 3.0, (p + q) / 3.0]);
        assert!(g.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn g_is_traceless_hermitian_for_tp_channels() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 4) as usize;
            let ch = random_channel(n, 1 + (seed % 3) as usize, 900 + seed).unwrap();
            let g = nonunitality_operator(&ch).unwrap();
            assert!(g.trace().norm() < 1e-11);
            assert!(g.is_hermitian(1e-12));
        }
    }

    #[test]
    fn complete_contraction_saturates_rscmn() {
        let n = 3;
        let ch = zoo::complete_contraction(&basis_state(n, 0)).unwrap();
        let report = bounds_report(&ch).unwrap();
        let expected = (1.0 - 1.0 / n as f64).sqrt();
        assert!((report.hs_norm - expected).abs() < 1e-12);
        assert!((report.bound_rscmn - expected).abs() < 1e-12);
    }

    #[test]
    fn bounds_hold_on_random_sweep() {
        for n in 2..=4 {
            for seed in 0..100u64 {
                let ch = random_channel(n, 1 + (seed % 4) as usize, seed * 13 + n as u64).unwrap();
                let report = bounds_report(&ch).unwrap();
                let (s1, s2, s3, s4) = report.slacks();
                assert!(s1 >= -1e-10, "prop2 violated at n={n} seed={seed}");
                assert!(s2 >= -1e-10, "dim bound violated at n={n} seed={seed}");
                assert!(s3 >= -1e-10, "rscmn violated at n={n} seed={seed}");
                assert!(s4 >= -1e-10, "tau bound violated at n={n} seed={seed}");
                assert!(report.bound_rscmn <= (1.0 - 1.0 / n as f64).sqrt() + 1e-10);
                assert!(report.bound_tau <= (2.0 - 2.0 / n as f64).sqrt() + 1e-10);
            }
        }
    }

    #[test]
    fn marginal_check_is_consistent_with_g_norm() {
        for seed in 0..20u64 {
            let ch = random_channel(3, 2, 700 + seed).unwrap();
            let (lhs, rhs) = choi_marginal_bound_check(&ch).unwrap();
            assert!(lhs <= rhs + 1e-10);
            let g_norm = nonunitality_operator(&ch).unwrap().frobenius_norm();
            assert!((lhs - g_norm).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_check_saturates_at_full_damping() {
        let ch = zoo::amplitude_damping_2(1.0).unwrap();
        let (lhs, rhs) = choi_marginal_bound_check(&ch).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((lhs - inv_sqrt2).abs() < 1e-12);
        assert!((rhs - inv_sqrt2).abs() < 1e-12);
    }

    #[test]
    fn unital_marginal_check_is_zero() {
        let ch = random_channel(2, 1, 606).unwrap();
        let (lhs, rhs) = choi_marginal_bound_check(&ch).unwrap();
        assert!(lhs < 1e-12);
        assert!(rhs < 1e-5);
    }

    #[test]
    fn hs_angle_examples() {
        let n2 = ComplexMatrix::zeros(2, 2);
        let h = zoo::qubit_hamiltonian([0.0, 0.0, 1.0]);
        assert!(hs_angle_with_hamiltonian(&n2, &h).unwrap().abs() < 1e-15);

        // field aligned with tau (theta = 0): overlap is -p B
        let (p, b) = (0.8, 1.3);
        let g = ComplexMatrix::diag(&[-p / 2.0, p / 2.0]);
        let h0 = zoo::qubit_hamiltonian_at_angle(b, 0.0);
        assert!((hs_angle_with_hamiltonian(&g, &h0).unwrap() + p * b).abs() < 1e-13);

        // perpendicular field: overlap vanishes
        let h90 = zoo::qubit_hamiltonian_at_angle(b, std::f64::consts::FRAC_PI_2);
        assert!(hs_angle_with_hamiltonian(&g, &h90).unwrap().abs() < 1e-13);
    }

    #[test]
    fn unitality_equivalence() {
        for seed in 0..20u64 {
            let ch = random_channel(3, 2, 800 + seed).unwrap();
            let (_, defect) = ch.is_unital();
            let g_norm = nonunitality_operator(&ch).unwrap().frobenius_norm();
            // Phi(I) - I = N G exactly
            assert!((defect - 3.0 * g_norm).abs() < 1e-12);
            assert_eq!(defect < 1e-12, g_norm < 1e-12 * 3.0);
        }
    }
}
