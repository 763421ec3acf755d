//! SU(N) generators and the Bloch-vector representation of traceless
//! Hermitian operators.
//!
//! Generators follow the generalized Gell-Mann construction and the
//! normalization Tr(g_i g_j) = 2 delta_ij. The ordering is frozen so Bloch
//! components are reproducible across runs: all symmetric pairs
//! (lexicographic j < k), then all antisymmetric pairs, then the diagonal
//! generators. An operator X decomposes as X = (1/2) sum_j tau_j g_j with
//! tau_j = Tr(X g_j).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, ComplexMatrix};
use crate::tol::Tolerances;

/// The N^2 - 1 generalized Gell-Mann matrices for a fixed dimension.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Real coefficient vector of a traceless Hermitian operator in the
/// generator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch vector for dimension {} needs {} components, got {}",
                dim,
                dim * dim - 1,
                components.len()
            )));
        }
        Ok(Self { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Euclidean length |tau|.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|t| t * t).sum::<f64>().sqrt()
    }

    /// Dot product with a real 3-vector; only meaningful for qubits, where
    /// the generators are the Pauli matrices.
    pub fn dot3(&self, v: [f64; 3]) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::Unsupported(
                "3-vector dot product needs a qubit Bloch vector".into(),
            ));
        }
        Ok(self.components[0] * v[0] + self.components[1] * v[1] + self.components[2] * v[2])
    }
}

/// Generalized Gell-Mann generators of SU(N).
///
/// For N = 2 these are exactly the Pauli matrices in the order x, y, z.
pub fn su_generators(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "SU(N) generators need N >= 2, got {n}"
        )));
    }
    let mut gens = Vec::with_capacity(n * n - 1);
    // symmetric pairs E_jk + E_kj
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(j, k)] = Complex64::ONE;
            m[(k, j)] = Complex64::ONE;
            gens.push(m);
        }
    }
    // antisymmetric pairs -i E_jk + i E_kj
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(j, k)] = Complex64::new(0.0, -1.0);
            m[(k, j)] = Complex64::new(0.0, 1.0);
            gens.push(m);
        }
    }
    // diagonal generators, l = 1..N-1
    for l in 1..n {
        let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..l {
            m[(i, i)] = Complex64::new(scale, 0.0);
        }
        m[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        gens.push(m);
    }
    Ok(GeneratorBasis {
        dim: n,
        generators: gens,
    })
}

/// Bloch components tau_j = Tr(X g_j) of a traceless Hermitian operator.
pub fn to_bloch(x: &ComplexMatrix) -> Result<BlochVector> {
    let n = x.require_square()?;
    let tols = Tolerances::DEFAULT;
    let defect = x.hermiticity_defect();
    if defect > tols.validation * x.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let tr = x.trace();
    if tr.norm() > tols.validation {
        return Err(Error::Validation(format!(
            "operator is not traceless: |Tr| = {:.3e}",
            tr.norm()
        )));
    }
    let basis = su_generators(n)?;
    let components = basis
        .generators()
        .iter()
        .map(|g| hs_inner(g, x).map(|z| z.re))
        .collect::<Result<Vec<f64>>>()?;
    BlochVector::new(n, components)
}

/// Reassembles X = (1/2) sum_j tau_j g_j.
pub fn from_bloch(tau: &BlochVector) -> Result<ComplexMatrix> {
    let basis = su_generators(tau.dim())?;
    let mut x = ComplexMatrix::zeros(tau.dim(), tau.dim());
    for (t, g) in tau.components().iter().zip(basis.generators()) {
        x = &x + &g.scale_re(0.5 * t);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn qubit_generators_are_pauli() {
        let basis = su_generators(2).unwrap();
        assert_eq!(basis.len(), 3);
        assert!(basis.generators()[0].approx_eq(&ComplexMatrix::pauli_x(), 1e-15));
        assert!(basis.generators()[1].approx_eq(&ComplexMatrix::pauli_y(), 1e-15));
        assert!(basis.generators()[2].approx_eq(&ComplexMatrix::pauli_z(), 1e-15));
    }

    #[test]
    fn generator_count_and_orthogonality() {
        for n in 2..=6 {
            let basis = su_generators(n).unwrap();
            assert_eq!(basis.len(), n * n - 1);
            for (i, gi) in basis.generators().iter().enumerate() {
                assert!(gi.trace().norm() < 1e-12, "generator {i} not traceless");
                assert!(gi.is_hermitian(1e-15));
                for (j, gj) in basis.generators().iter().enumerate() {
                    let dot = hs_inner(gi, gj).unwrap();
                    let expected = if i == j { 2.0 } else { 0.0 };
                    assert!(
                        (dot - Complex64::new(expected, 0.0)).norm() < 1e-12,
                        "Tr(g_{i} g_{j}) = {dot} for N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_n_below_two() {
        assert!(su_generators(1).is_err());
    }

    #[test]
    fn sigma_z_half_maps_to_unit_z() {
        let x = ComplexMatrix::pauli_z().scale_re(0.5);
        let tau = to_bloch(&x).unwrap();
        assert!((tau.components()[0]).abs() < 1e-14);
        assert!((tau.components()[1]).abs() < 1e-14);
        assert!((tau.components()[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_operator_roundtrip() {
        let tau = to_bloch(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(tau.norm() < 1e-15);
        let x = from_bloch(&tau).unwrap();
        assert!(x.approx_eq(&ComplexMatrix::zeros(3, 3), 1e-15));
    }

    #[test]
    fn amplitude_damping_bloch_vector_reassembles() {
        let p = 0.7;
        let tau = BlochVector::new(2, vec![0.0, 0.0, -p]).unwrap();
        let g = from_bloch(&tau).unwrap();
        let expected = ComplexMatrix::diag(&[-p / 2.0, p / 2.0]);
        assert!(g.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn roundtrip_on_random_traceless_hermitian() {
        let mut rng = SplitMix64::new(77);
        for n in 2..=5 {
            for _ in 0..20 {
                let raw = ComplexMatrix::from_fn(n, n, |_, _| {
                    Complex64::new(rng.standard_normal(), rng.standard_normal())
                })
                .hermitize();
                let shift = raw.trace().re / n as f64;
                let x = &raw - &ComplexMatrix::identity(n).scale_re(shift);
                let tau = to_bloch(&x).unwrap();
                let back = from_bloch(&tau).unwrap();
                assert!(back.distance(&x).unwrap() < 1e-12);
                // norm identity from the generator normalization
                let hs = hs_inner(&x, &x).unwrap().re;
                assert!((hs - 0.5 * tau.norm().powi(2)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn to_bloch_rejects_traceful_input() {
        assert!(to_bloch(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn from_bloch_rejects_wrong_length() {
        assert!(BlochVector::new(2, vec![1.0, 2.0]).is_err());
    }
}
