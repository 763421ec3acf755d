//! Quantum channels in Kraus form, structural checks, and the
//! Choi/Jamiolkowski representation.
//!
//! The Kraus list is the source of truth; the Choi matrix is derived on
//! first use and cached. Trace preservation is enforced at construction
//! unless the channel is explicitly built as a raw map for counterexample
//! tests.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, func_hermitian, schatten_norm, ComplexMatrix, Keep};
use crate::rng::SplitMix64;
use crate::tol::Tolerances;

/// Completely positive map given by Kraus operators, each `dim_out x dim_in`.
#[derive(Debug)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
    /// Skips the trace-preservation check; only for test counterexamples.
    raw: bool,
    choi_cache: OnceLock<ChoiMatrix>,
}

impl Clone for QuantumChannel {
    fn clone(&self) -> Self {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.clone(),
            raw: self.raw,
            choi_cache: OnceLock::new(),
        }
    }
}

impl QuantumChannel {
    /// Builds a trace-preserving channel, validating sum K^dag K = I.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerances(kraus, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(kraus: Vec<ComplexMatrix>, tols: &Tolerances) -> Result<Self> {
        let ch = Self::new_raw(kraus)?;
        let defect = ch.trace_preservation_defect();
        if defect > tols.validation {
            return Err(Error::Validation(format!(
                "Kraus set is not trace preserving: ||sum K^dag K - I||_2 = {defect:.3e}"
            )));
        }
        Ok(Self { raw: false, ..ch })
    }

    /// Builds a channel without the trace-preservation check.
    ///
    /// The raw flag exists so tests can construct maps that violate the
    /// bounds; every physical constructor goes through [`Self::new`].
    pub fn new_raw(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidParameter("zero-dimensional channel".into()));
        }
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operators disagree on shape: {}x{} vs {}x{}",
                    k.rows(),
                    k.cols(),
                    dim_out,
                    dim_in
                )));
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
            raw: true,
            choi_cache: OnceLock::new(),
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_raw(&self) -> bool {
        self.raw
    }

    /// ||sum K^dag K - I||_2.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = &sum + &(&k.dagger() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    /// Operator-sum action sum_n K_n A K_n^dag.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim_in || a.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input must be {0}x{0}, got {1}x{2}",
                self.dim_in,
                a.rows(),
                a.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * a) * &k.dagger());
        }
        Ok(out)
    }

    /// Adjoint action sum_n K_n^dag B K_n.
    pub fn adjoint_apply(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.rows() != self.dim_out || b.cols() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "adjoint input must be {0}x{0}, got {1}x{2}",
                self.dim_out,
                b.rows(),
                b.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out = &out + &(&(&k.dagger() * b) * k);
        }
        Ok(out)
    }

    /// Image of the identity, Phi(I).
    pub fn identity_image(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(k * &k.dagger());
        }
        out
    }

    /// Unitality defect ||Phi(I) - I||_2 and whether it is negligible.
    pub fn is_unital(&self) -> (bool, f64) {
        let defect = (&self.identity_image() - &ComplexMatrix::identity(self.dim_out))
            .frobenius_norm();
        (defect < Tolerances::DEFAULT.validation, defect)
    }

    /// Choi representation, computed on first use and cached.
    ///
    /// Only defined for square channels. Concurrent first access is safe;
    /// the cache fills exactly once.
    pub fn choi(&self) -> Result<&ChoiMatrix> {
        if self.dim_in != self.dim_out {
            return Err(Error::Unsupported(format!(
                "Choi matrix needs a square channel, got {} -> {}",
                self.dim_in, self.dim_out
            )));
        }
        Ok(self.choi_cache.get_or_init(|| self.compute_choi()))
    }

    fn compute_choi(&self) -> ChoiMatrix {
        let n = self.dim_in;
        // maximally entangled projector |phi+><phi+| on principal (x) reference
        let mut phi = vec![Complex64::ZERO; n * n];
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        for k in 0..n {
            phi[k * n + k] = amp;
        }
        let projector = ComplexMatrix::outer(&phi, &phi);
        let id = ComplexMatrix::identity(n);
        let mut eta = ComplexMatrix::zeros(n * n, n * n);
        for k in &self.kraus {
            let lifted = linalg::kron(k, &id);
            eta = &eta + &(&(&lifted * &projector) * &lifted.dagger());
        }
        ChoiMatrix { dim: n, eta }
    }

    /// Map norm ||Phi|| = ||Phi(I)||_inf, valid for positive maps.
    ///
    /// Kraus-built channels are completely positive, so this always applies
    /// to channels constructed here. For a raw non-CP map the value is only
    /// the norm of Phi(I); whether that equals the map norm is the caller's
    /// concern.
    pub fn map_norm(&self) -> Result<f64> {
        schatten_norm(&self.identity_image(), f64::INFINITY)
    }

    /// Post-composition with a unitary: Kraus set {U K_n}.
    pub fn compose_unitary(&self, u: &ComplexMatrix) -> Result<QuantumChannel> {
        if u.rows() != self.dim_out || u.cols() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be {0}x{0}, got {1}x{2}",
                self.dim_out,
                u.rows(),
                u.cols()
            )));
        }
        let gram = &u.dagger() * u;
        let defect = (&gram - &ComplexMatrix::identity(self.dim_out)).frobenius_norm();
        if defect > Tolerances::DEFAULT.validation {
            return Err(Error::Validation(format!(
                "matrix is not unitary: ||U^dag U - I||_2 = {defect:.3e}"
            )));
        }
        let kraus = self.kraus.iter().map(|k| u * k).collect();
        if self.raw {
            QuantumChannel::new_raw(kraus)
        } else {
            QuantumChannel::new(kraus)
        }
    }
}

/// Rescaled dynamical matrix eta = (Phi (x) id)(|phi+><phi+|).
///
/// The dynamical (Choi) matrix is D = N eta.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim: usize,
    eta: ComplexMatrix,
}

impl ChoiMatrix {
    /// Wraps an explicit eta matrix; used to probe maps that have no Kraus
    /// form, like the transpose.
    pub fn from_eta(dim: usize, eta: ComplexMatrix) -> Result<Self> {
        if eta.rows() != dim * dim || eta.cols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "eta must be {0}x{0} for dimension {1}, got {2}x{3}",
                dim * dim,
                dim,
                eta.rows(),
                eta.cols()
            )));
        }
        Ok(Self { dim, eta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eta(&self) -> &ComplexMatrix {
        &self.eta
    }

    /// D = N eta.
    pub fn dynamical(&self) -> ComplexMatrix {
        self.eta.scale_re(self.dim as f64)
    }

    /// Recovers the map action, Phi(X) = Tr_R(D (I (x) X^T)).
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "input must be {0}x{0}, got {1}x{2}",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        let lifted = linalg::kron(&ComplexMatrix::identity(self.dim), &x.transpose());
        let product = &self.dynamical() * &lifted;
        linalg::partial_trace(&product, self.dim, self.dim, Keep::A)
    }

    /// Minimum eigenvalue of D; nonnegative (within tolerance) iff the map
    /// is completely positive.
    pub fn is_completely_positive(&self) -> Result<(bool, f64)> {
        let eig = eigh(&self.dynamical())?;
        let min = eig.values().first().copied().unwrap_or(0.0);
        Ok((min >= -Tolerances::DEFAULT.validation, min))
    }

    /// Tr_R(eta), the image of the maximally mixed state.
    pub fn reference_marginal(&self) -> Result<ComplexMatrix> {
        linalg::partial_trace(&self.eta, self.dim, self.dim, Keep::A)
    }

    /// Tr_A(D); equals the identity exactly when the map preserves trace.
    pub fn output_marginal_of_dynamical(&self) -> Result<ComplexMatrix> {
        linalg::partial_trace(&self.dynamical(), self.dim, self.dim, Keep::B)
    }
}

/// Deterministic random trace-preserving channel.
///
/// Complex Gaussian matrices G_n are normalized through S = sum G^dag G,
/// K_n = G_n S^{-1/2}, which satisfies the trace-preservation constraint by
/// construction. The same seed always yields the same Kraus list.
pub fn random_channel(n: usize, n_kraus: usize, seed: u64) -> Result<QuantumChannel> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if n_kraus == 0 {
        return Err(Error::InvalidParameter(
            "need at least one Kraus operator".into(),
        ));
    }
    let mut attempt_seed = seed;
    for _ in 0..5 {
        let mut rng = SplitMix64::new(attempt_seed);
        let gs: Vec<ComplexMatrix> = (0..n_kraus)
            .map(|_| {
                ComplexMatrix::from_fn(n, n, |_, _| {
                    Complex64::new(rng.standard_normal(), rng.standard_normal())
                })
            })
            .collect();
        let mut s = ComplexMatrix::zeros(n, n);
        for g in &gs {
            s = &s + &(&g.dagger() * g);
        }
        let eig = eigh(&s)?;
        let min = eig.values().first().copied().unwrap_or(0.0);
        if min <= 1e-12 * s.frobenius_norm() {
            // essentially a measure-zero event; perturb and retry
            attempt_seed = attempt_seed.wrapping_add(1);
            continue;
        }
        let inv_sqrt = func_hermitian(&s, |x| 1.0 / x.sqrt())?;
        let kraus = gs.iter().map(|g| g * &inv_sqrt).collect();
        return QuantumChannel::new(kraus);
    }
    Err(Error::InvalidParameter(format!(
        "could not build a nonsingular channel from seed {seed} after 5 attempts"
    )))
}
