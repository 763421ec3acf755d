//! Hermitian eigendecomposition by cyclic Jacobi rotations, plus the matrix
//! functions built on top of it.
//!
//! The solver favors robustness and determinism over speed: dimensions here
//! stay small, and reproducible eigenbases matter more than FLOPs. A complex
//! plane rotation annihilates one off-diagonal pair per step; sweeps repeat
//! until the off-diagonal Frobenius mass drops below
//! [`crate::tol::JACOBI_CONVERGENCE`] relative to the input norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tol::{self, Tolerances};

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// operator. Column `j` of `vectors` pairs with `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl EigenSystem {
    /// Assembles an eigensystem from parts, checking orthonormality.
    ///
    /// Intended for tests that remix eigenbases inside degenerate clusters;
    /// `eigh` is the normal entry point.
    pub fn from_parts(values: Vec<f64>, vectors: ComplexMatrix) -> Result<Self> {
        let n = vectors.require_square()?;
        if values.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for a {}x{} eigenvector matrix",
                values.len(),
                n,
                n
            )));
        }
        let gram = &vectors.dagger() * &vectors;
        if !gram.approx_eq(&ComplexMatrix::identity(n), Tolerances::DEFAULT.equality) {
            return Err(Error::Validation(
                "eigenvector matrix is not unitary".into(),
            ));
        }
        Ok(Self { values, vectors })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvector for `values()[j]`, as a column.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    /// V diag(values) V^dag.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| x)
    }

    /// V diag(f(values)) V^dag.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * f(self.values[k]) * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix with default tolerances.
pub fn eigh(h: &ComplexMatrix) -> Result<EigenSystem> {
    eigh_with(h, &Tolerances::DEFAULT)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Eigenvector phases are fixed
/// deterministically: the largest-modulus component of each column (first
/// such index on ties) is made real positive, so repeated runs and
/// degenerate clusters always yield the same basis for the same input.
pub fn eigh_with(h: &ComplexMatrix, tols: &Tolerances) -> Result<EigenSystem> {
    let n = h.require_square()?;
    let h_norm = h.frobenius_norm();
    let defect = h.hermiticity_defect();
    if defect > tols.validation * h_norm.max(1.0) {
        return Err(Error::NotHermitian(defect));
    }

    // Work on the Hermitian part so roundoff asymmetry cannot drift.
    let mut a = h.hermitize();
    let mut v = ComplexMatrix::identity(n);

    let threshold = tol::JACOBI_CONVERGENCE * h_norm;
    // Entries already this small cannot push the off-mass back over the
    // convergence threshold, so rotating on them is wasted work.
    let skip = threshold / (10.0 * (n * n).max(1) as f64);

    let mut converged = false;
    for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off_sq.sqrt() <= threshold {
            converged = true;
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)].norm();
                if g <= skip {
                    continue;
                }
                let phase = a[(p, q)] / g;

                // Real 2x2 rotation after factoring out the phase of a_pq.
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let s_fwd = phase * s; // multiplies the q-column contribution
                let s_bwd = phase.conj() * s;

                let app = a[(p, p)].re - t * g;
                let aqq = a[(q, q)].re + t * g;
                a[(p, p)] = Complex64::new(app, 0.0);
                a[(q, q)] = Complex64::new(aqq, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;

                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a[(j, p)];
                    let ajq = a[(j, q)];
                    let new_jp = ajp * c - ajq * s_bwd;
                    let new_jq = ajp * s_fwd + ajq * c;
                    a[(j, p)] = new_jp;
                    a[(j, q)] = new_jq;
                    a[(p, j)] = new_jp.conj();
                    a[(q, j)] = new_jq.conj();
                }
                for j in 0..n {
                    let vjp = v[(j, p)];
                    let vjq = v[(j, q)];
                    v[(j, p)] = vjp * c - vjq * s_bwd;
                    v[(j, q)] = vjp * s_fwd + vjq * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(tol::JACOBI_MAX_SWEEPS));
    }

    // Sort ascending, carrying columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    // Deterministic phase: largest-modulus component real positive.
    for j in 0..n {
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for i in 0..n {
            let m = vectors[(i, j)].norm();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod > 0.0 {
            let rot = vectors[(best, j)].conj() / best_mod;
            for i in 0..n {
                vectors[(i, j)] *= rot;
            }
        }
    }

    Ok(EigenSystem { values, vectors })
}

/// V f(diag) V^dag for Hermitian input; the workhorse behind exp(-beta H)
/// and operator square roots.
pub fn func_hermitian(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(eigh(h)?.apply_fn(f))
}

/// Unique positive square root of a positive semidefinite matrix.
///
/// Eigenvalues negative within tolerance are clipped to zero; substantially
/// negative spectra are rejected.
pub fn positive_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(a)?;
    let scale = a.frobenius_norm().max(1.0);
    let floor = -Tolerances::DEFAULT.validation * scale;
    if let Some(&min) = eig.values().first() {
        if min < floor {
            return Err(Error::NotPositive(min));
        }
    }
    Ok(eig.apply_fn(|x| x.max(0.0).sqrt()))
}

/// Schatten p-norm of a square matrix; `p` may be `f64::INFINITY`.
///
/// Singular values come from the spectrum of A^dag A, which is Hermitian by
/// construction regardless of A.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    a.require_square()?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Schatten norm order must be >= 1, got {p}"
        )));
    }
    let gram = &a.dagger() * a;
    let singular: Vec<f64> = eigh(&gram)?
        .values()
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    let s_max = singular.last().copied().unwrap_or(0.0);
    if p.is_infinite() || s_max == 0.0 {
        return Ok(s_max);
    }
    // Scale by the largest singular value so big p cannot overflow.
    let sum: f64 = singular.iter().map(|s| (s / s_max).powf(p)).sum();
    Ok(s_max * sum.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.standard_normal(), rng.standard_normal())
        })
    }

    fn random_hermitian(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitize()
    }

    #[test]
    fn eigh_pauli_z() {
        let eig = eigh(&ComplexMatrix::pauli_z()).unwrap();
        assert!((eig.values()[0] + 1.0).abs() < 1e-14);
        assert!((eig.values()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_diagonal_permutation() {
        let eig = eigh(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values(), &[1.0, 2.0, 3.0]);
        // eigenvectors are permuted identity columns
        let v = eig.vectors();
        assert!((v[(1, 0)] - Complex64::ONE).norm() < 1e-14);
        assert!((v[(2, 1)] - Complex64::ONE).norm() < 1e-14);
        assert!((v[(0, 2)] - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let mut rng = SplitMix64::new(9);
        for n in [2, 3, 5, 8] {
            for _ in 0..10 {
                let h = random_hermitian(&mut rng, n);
                let eig = eigh(&h).unwrap();
                let resid = eig.reconstruct().distance(&h).unwrap();
                assert!(
                    resid <= 1e-11 * h.frobenius_norm().max(1.0),
                    "reconstruction residual {resid} for n={n}"
                );
                let gram = &eig.vectors().dagger() * eig.vectors();
                assert!(gram.approx_eq(&ComplexMatrix::identity(n), 1e-12));
            }
        }
    }

    #[test]
    fn eigh_is_deterministic_under_degeneracy() {
        // doubly degenerate spectrum; phases and basis must be reproducible
        let mut h = ComplexMatrix::diag(&[1.0, 1.0, 2.0]);
        h[(0, 1)] = Complex64::new(0.0, 0.3);
        h[(1, 0)] = Complex64::new(0.0, -0.3);
        let a = eigh(&h).unwrap();
        let b = eigh(&h).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.vectors().approx_eq(b.vectors(), 0.0));
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(5.0, 0.0);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn func_hermitian_exponential() {
        // beta = 0 gives the identity
        let mut rng = SplitMix64::new(13);
        let h = random_hermitian(&mut rng, 4);
        let e0 = func_hermitian(&h, |x| (-0.0 * x).exp()).unwrap();
        assert!(e0.approx_eq(&ComplexMatrix::identity(4), 1e-13));

        // sigma_z exponentiates in its own eigenbasis
        let ez = func_hermitian(&ComplexMatrix::pauli_z(), |x| (-x).exp()).unwrap();
        let expected = ComplexMatrix::diag(&[(-1.0f64).exp(), 1.0f64.exp()]);
        assert!(ez.approx_eq(&expected, 1e-13));
    }

    #[test]
    fn func_hermitian_matches_taylor_series() {
        let mut rng = SplitMix64::new(14);
        let h = random_hermitian(&mut rng, 4).scale_re(0.5);
        let via_eigh = func_hermitian(&h, f64::exp).unwrap();
        // plain truncated series as an independent oracle
        let mut term = ComplexMatrix::identity(4);
        let mut series = ComplexMatrix::identity(4);
        for k in 1..=40 {
            term = (&term * &h).scale_re(1.0 / k as f64);
            series = &series + &term;
        }
        assert!(via_eigh.distance(&series).unwrap() < 1e-10);
    }

    #[test]
    fn positive_sqrt_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert!(positive_sqrt(&i3).unwrap().approx_eq(&i3, 1e-14));

        let d = positive_sqrt(&ComplexMatrix::diag(&[4.0, 9.0])).unwrap();
        assert!(d.approx_eq(&ComplexMatrix::diag(&[2.0, 3.0]), 1e-13));
    }

    #[test]
    fn positive_sqrt_squares_back() {
        let mut rng = SplitMix64::new(15);
        for _ in 0..10 {
            let b = random_matrix(&mut rng, 4);
            let a = &b.dagger() * &b;
            let p = positive_sqrt(&a).unwrap();
            assert!((&p * &p).distance(&a).unwrap() < 1e-10 * a.frobenius_norm().max(1.0));
            assert!(p.is_hermitian(1e-12));
        }
    }

    #[test]
    fn positive_sqrt_rejects_negative_spectrum() {
        let m = ComplexMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(positive_sqrt(&m), Err(Error::NotPositive(_))));
    }

    #[test]
    fn schatten_norm_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!((schatten_norm(&i4, 1.0).unwrap() - 4.0).abs() < 1e-13);
        assert!((schatten_norm(&ComplexMatrix::pauli_z(), f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
        assert!(schatten_norm(&i4, 0.5).is_err());
    }

    #[test]
    fn schatten_norm_monotone_in_p() {
        let mut rng = SplitMix64::new(16);
        let orders = [1.0, 2.0, 4.0, f64::INFINITY];
        for n in [2, 3, 4, 5] {
            for _ in 0..100 {
                let a = random_hermitian(&mut rng, n);
                let norms: Vec<f64> = orders
                    .iter()
                    .map(|&p| schatten_norm(&a, p).unwrap())
                    .collect();
                for w in norms.windows(2) {
                    assert!(
                        w[1] <= w[0] + 1e-12 * w[0].max(1.0),
                        "monotonicity broken: {norms:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn from_parts_rejects_non_unitary() {
        let bad = ComplexMatrix::diag(&[2.0, 1.0]);
        assert!(EigenSystem::from_parts(vec![0.0, 1.0], bad).is_err());
    }
}
