//! Two-point-measurement statistics and the fluctuation identities built on
//! them: the exponential-average identity for Gibbs-weighted inputs, the
//! generalized Jarzynski equality with its nonunitality correction, the
//! Jensen work bound, high- and low-temperature limits of the correction
//! term, and the composite-system heat-transfer form.
//!
//! Work convention: W = (final energy) - (initial energy), fixed once and
//! used everywhere. Eigenvalues carry multiplicity; no de-duplication.

use num_complex::Complex64;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::linalg::{eigh, hs_inner, kron, ComplexMatrix, EigenSystem};
use crate::nonunitality::nonunitality_operator;
use crate::thermal::{self, gibbs};
use crate::tol::Tolerances;

/// Joint statistics of projective measurements before and after a channel.
///
/// `cond[i][j]` is the probability of final outcome `b_values[j]` given
/// initial eigenstate `i`; `joint[i][j] = p_a[i] * cond[i][j]`.
#[derive(Debug, Clone)]
pub struct TpmDistribution {
    a_values: Vec<f64>,
    b_values: Vec<f64>,
    p_a: Vec<f64>,
    cond: Vec<Vec<f64>>,
    joint: Vec<Vec<f64>>,
}

impl TpmDistribution {
    pub fn a_values(&self) -> &[f64] {
        &self.a_values
    }

    pub fn b_values(&self) -> &[f64] {
        &self.b_values
    }

    pub fn p_a(&self) -> &[f64] {
        &self.p_a
    }

    pub fn cond(&self) -> &[Vec<f64>] {
        &self.cond
    }

    pub fn joint(&self) -> &[Vec<f64>] {
        &self.joint
    }

    /// Builds the distribution from explicit eigensystems.
    ///
    /// This is the low-level entry point; it lets tests remix eigenbases
    /// inside degenerate clusters. `p_a` must align with the columns of
    /// `eig_a`.
    pub fn from_eigensystems(
        phi: &QuantumChannel,
        eig_a: &EigenSystem,
        p_a: &[f64],
        eig_b: &EigenSystem,
    ) -> Result<Self> {
        let tols = Tolerances::DEFAULT;
        let dim_a = eig_a.dim();
        let dim_b = eig_b.dim();
        if dim_a != phi.dim_in() || dim_b != phi.dim_out() {
            return Err(Error::DimensionMismatch(format!(
                "observables of dimension {dim_a} and {dim_b} against a {} -> {} channel",
                phi.dim_in(),
                phi.dim_out()
            )));
        }
        if p_a.len() != dim_a {
            return Err(Error::DimensionMismatch(format!(
                "input distribution has {} entries for dimension {dim_a}",
                p_a.len()
            )));
        }
        let total: f64 = p_a.iter().sum();
        if (total - 1.0).abs() > tols.validation || p_a.iter().any(|&p| p < -tols.equality) {
            return Err(Error::Validation(format!(
                "p_a is not a probability distribution (sum {total})"
            )));
        }

        let mut cond = Vec::with_capacity(dim_a);
        for i in 0..dim_a {
            let v = eig_a.eigenvector(i);
            let out = phi.apply(&ComplexMatrix::outer(&v, &v))?;
            let mut row = Vec::with_capacity(dim_b);
            for j in 0..dim_b {
                let w = eig_b.eigenvector(j);
                let mut val = Complex64::ZERO;
                for k in 0..dim_b {
                    for l in 0..dim_b {
                        val += w[k].conj() * out[(k, l)] * w[l];
                    }
                }
                row.push(val.re);
            }
            let row_sum: f64 = row.iter().sum();
            if (row_sum - 1.0).abs() > 1e-11 {
                return Err(Error::Validation(format!(
                    "conditional row {i} sums to {row_sum}; channel is not trace preserving"
                )));
            }
            if row.iter().any(|&p| p < -tols.equality) {
                return Err(Error::Validation(format!(
                    "conditional row {i} has a negative probability"
                )));
            }
            cond.push(row);
        }
        let joint = p_a
            .iter()
            .zip(&cond)
            .map(|(&p, row)| row.iter().map(|&c| p * c).collect())
            .collect();
        Ok(Self {
            a_values: eig_a.values().to_vec(),
            b_values: eig_b.values().to_vec(),
            p_a: p_a.to_vec(),
            cond,
            joint,
        })
    }
}

/// TPM distribution for Hermitian observables A (initial) and B (final).
///
/// `p_a` is given in the eigenbasis of A, ordered by ascending eigenvalue
/// with the solver's deterministic phase convention.
pub fn tpm_distribution(
    phi: &QuantumChannel,
    a: &ComplexMatrix,
    p_a: &[f64],
    b: &ComplexMatrix,
) -> Result<TpmDistribution> {
    let eig_a = eigh(a)?;
    let eig_b = eigh(b)?;
    TpmDistribution::from_eigensystems(phi, &eig_a, p_a, &eig_b)
}

/// Double-bracket average sum_ij p(a_i, b_j) f(a_i, b_j).
pub fn double_bracket(dist: &TpmDistribution, f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut total = 0.0;
    for (i, &a) in dist.a_values.iter().enumerate() {
        for (j, &b) in dist.b_values.iter().enumerate() {
            total += dist.joint[i][j] * f(a, b);
        }
    }
    total
}

/// Two-path check of the exponential-average identity.
#[derive(Debug, Clone, Copy)]
pub struct TwoPathCheck {
    /// Double-bracket average of exp(alpha a - beta b).
    pub lhs: f64,
    /// Closed form through partition functions and the nonunitality term.
    pub rhs: f64,
    /// |lhs - rhs| / max(1, |rhs|).
    pub residual: f64,
}

/// Verifies the Gibbs-weighted exponential-average identity for arbitrary
/// Hermitian observables and real parameters.
///
/// The input state is the Gibbs form exp(-alpha A)/Tr(...); the left side
/// enumerates the TPM distribution, the right side is
/// N_A Tr(e^{-beta B}) / (N_B Tr(e^{-alpha A})) (1 + N_B Tr(rho_B(beta) G)).
pub fn proposition1_check(
    phi: &QuantumChannel,
    a: &ComplexMatrix,
    alpha: f64,
    b: &ComplexMatrix,
    beta: f64,
) -> Result<TwoPathCheck> {
    let eig_a = eigh(a)?;
    let eig_b = eigh(b)?;
    let (pop_a, ln_z_a) = thermal::boltzmann_weights(eig_a.values(), alpha);
    let (pop_b, ln_z_b) = thermal::boltzmann_weights(eig_b.values(), beta);

    let dist = TpmDistribution::from_eigensystems(phi, &eig_a, &pop_a, &eig_b)?;
    let lhs = double_bracket(&dist, |x, y| (alpha * x - beta * y).exp());

    let n_a = phi.dim_in() as f64;
    let n_b = phi.dim_out() as f64;
    let g = nonunitality_operator(phi)?;
    let rho_b = density_from_populations(&eig_b, &pop_b);
    let correction = n_b * hs_inner(&rho_b, &g)?.re;
    let prefactor = (n_a / n_b) * (ln_z_b - ln_z_a).exp();
    let rhs = prefactor * (1.0 + correction);
    let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
    Ok(TwoPathCheck { lhs, rhs, residual })
}

/// Both sides of the generalized Jarzynski equality plus derived quantities.
#[derive(Debug, Clone)]
pub struct JarzynskiReport {
    pub dim: usize,
    pub beta0: f64,
    pub beta1: f64,
    /// Double-bracket average of exp(beta0 e0 - beta1 e1).
    pub lhs: f64,
    /// Z_1(beta1) / Z_0(beta0).
    pub z_ratio: f64,
    /// N Tr(omega_1(beta1) G).
    pub correction: f64,
    /// z_ratio * (1 + correction).
    pub rhs: f64,
    /// |lhs - rhs| / max(1, |rhs|).
    pub residual: f64,
    /// Average work <<e1 - e0>>.
    pub mean_work: f64,
    /// F_1 - F_0; only defined at equal positive temperatures.
    pub delta_f: Option<f64>,
    /// Jensen lower bound delta_f - ln(1 + correction)/beta, when defined.
    pub jensen_rhs: Option<f64>,
    /// Set when 1 + correction <= 0 so the Jensen logarithm is undefined.
    pub log_undefined: bool,
}

/// Fixed CSV column set for Jarzynski rows.
pub const JARZYNSKI_CSV_HEADER: &str =
    "channel_id,N,beta0,beta1,lhs,z_ratio,correction,rhs,residual,mean_work,delta_F,jensen_rhs,flags";

impl JarzynskiReport {
    pub fn csv_row(&self, channel_id: &str) -> String {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        let flags = if self.log_undefined { "log_undefined" } else { "" };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            channel_id,
            self.dim,
            fmt_f64(self.beta0),
            fmt_f64(self.beta1),
            fmt_f64(self.lhs),
            fmt_f64(self.z_ratio),
            fmt_f64(self.correction),
            fmt_f64(self.rhs),
            fmt_f64(self.residual),
            fmt_f64(self.mean_work),
            opt(self.delta_f),
            opt(self.jensen_rhs),
            flags
        )
    }
}

/// Runs the two-point-measurement protocol for Hamiltonians `h0` -> `h1`
/// under the channel `phi`, starting from equilibrium at `beta0`, and
/// checks the generalized Jarzynski identity.
pub fn generalized_jarzynski(
    phi: &QuantumChannel,
    h0: &ComplexMatrix,
    h1: &ComplexMatrix,
    beta0: f64,
    beta1: f64,
) -> Result<JarzynskiReport> {
    if phi.dim_in() != phi.dim_out() {
        return Err(Error::Unsupported(
            "the Jarzynski protocol needs a square channel".into(),
        ));
    }
    let n = phi.dim_in();
    if h0.rows() != n || h1.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonians of dimension {} and {} against an N = {} channel",
            h0.rows(),
            h1.rows(),
            n
        )));
    }
    let w0 = gibbs(h0, beta0)?;
    let w1 = gibbs(h1, beta1)?;

    let dist = TpmDistribution::from_eigensystems(phi, w0.eigen(), w0.populations(), w1.eigen())?;
    let lhs = double_bracket(&dist, |e0, e1| (beta0 * e0 - beta1 * e1).exp());
    let mean_work = double_bracket(&dist, |e0, e1| e1 - e0);

    let z_ratio = (w1.ln_z() - w0.ln_z()).exp();
    let g = nonunitality_operator(phi)?;
    let correction = n as f64 * hs_inner(w1.rho(), &g)?.re;
    let rhs = z_ratio * (1.0 + correction);
    let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);

    let mut delta_f = None;
    let mut jensen_rhs = None;
    let mut log_undefined = false;
    if beta0 == beta1 && beta0 > 0.0 {
        let beta = beta0;
        let df = -(w1.ln_z() - w0.ln_z()) / beta;
        delta_f = Some(df);
        if 1.0 + correction > 0.0 {
            jensen_rhs = Some(df - (1.0 + correction).ln() / beta);
        } else {
            log_undefined = true;
        }
    }

    Ok(JarzynskiReport {
        dim: n,
        beta0,
        beta1,
        lhs,
        z_ratio,
        correction,
        rhs,
        residual,
        mean_work,
        delta_f,
        jensen_rhs,
        log_undefined,
    })
}

/// First-order (in beta) term of the correction, -beta Tr(H1 G).
///
/// This is an O(beta^2)-accurate approximation of the exact correction
/// N Tr(omega_1(beta) G); it vanishes whenever the nonunitality operator is
/// orthogonal to the final Hamiltonian in the Hilbert-Schmidt sense.
pub fn high_temperature_correction(
    phi: &QuantumChannel,
    h1: &ComplexMatrix,
    beta: f64,
) -> Result<f64> {
    let g = nonunitality_operator(phi)?;
    Ok(-beta * hs_inner(h1, &g)?.re)
}

/// Low-temperature limit of the correction, N <e_0| G |e_0> for the ground
/// state of `h1`. Temperature independent; neglected terms decay like
/// exp(-beta * gap).
pub fn low_temperature_correction(phi: &QuantumChannel, h1: &ComplexMatrix) -> Result<f64> {
    let eig = eigh(h1)?;
    let n = eig.dim();
    if n >= 2 {
        let gap = eig.values()[1] - eig.values()[0];
        if gap <= 1e-8 * h1.frobenius_norm() {
            return Err(Error::DegenerateGroundState(gap));
        }
    }
    let g = nonunitality_operator(phi)?;
    let ground = eig.eigenvector(0);
    let mut val = Complex64::ZERO;
    for k in 0..n {
        for l in 0..n {
            val += ground[k].conj() * g[(k, l)] * ground[l];
        }
    }
    Ok(n as f64 * val.re)
}

/// Outcome of the composite-system heat-transfer identity.
#[derive(Debug, Clone, Copy)]
pub struct HeatTransferReport {
    /// Double-bracket average of exp(alpha(a - a') + beta(b - b')).
    pub lhs: f64,
    /// 1 + N_A N_B Tr(rho_AB G).
    pub rhs: f64,
    /// |lhs - rhs| / max(1, |rhs|).
    pub residual: f64,
    /// <<alpha(a' - a) + beta(b' - b)>>, the self-energy entropy estimate.
    pub delta_s: f64,
    /// -ln(rhs); absent when the logarithm is undefined.
    pub entropy_bound: Option<f64>,
}

/// Heat-transfer form of the identity for a channel on a bipartite system.
///
/// The composite starts in the product Gibbs state built from `a` at
/// inverse temperature `alpha` and `b` at `beta`; both subsystem energies
/// are measured jointly before and after the channel. Tensor indices follow
/// the crate convention `row = i * dim_b + j`.
pub fn heat_transfer_check(
    psi: &QuantumChannel,
    a: &ComplexMatrix,
    alpha: f64,
    b: &ComplexMatrix,
    beta: f64,
) -> Result<HeatTransferReport> {
    let dim_a = a.require_square()?;
    let dim_b = b.require_square()?;
    let n = dim_a * dim_b;
    if psi.dim_in() != n || psi.dim_out() != n {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on dimension {} -> {}, expected {}",
            psi.dim_in(),
            psi.dim_out(),
            n
        )));
    }
    let eig_a = eigh(a)?;
    let eig_b = eigh(b)?;
    let (pop_a, _) = thermal::boltzmann_weights(eig_a.values(), alpha);
    let (pop_b, _) = thermal::boltzmann_weights(eig_b.values(), beta);

    // product eigenbasis |a_i> (x) |b_j>, labels carried separately so the
    // subsystem energy balance stays accessible
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for i in 0..dim_a {
        let u = eig_a.eigenvector(i);
        for j in 0..dim_b {
            let w = eig_b.eigenvector(j);
            let mut prod = Vec::with_capacity(n);
            for uu in &u {
                for ww in &w {
                    prod.push(uu * ww);
                }
            }
            vectors.push(prod);
        }
    }
    let label = |idx: usize| (idx / dim_b, idx % dim_b);

    let mut lhs = 0.0;
    let mut delta_s = 0.0;
    for (row, vec_in) in vectors.iter().enumerate() {
        let (i, j) = label(row);
        let p_in = pop_a[i] * pop_b[j];
        if p_in == 0.0 {
            continue;
        }
        let out = psi.apply(&ComplexMatrix::outer(vec_in, vec_in))?;
        let mut row_sum = 0.0;
        for (col, vec_out) in vectors.iter().enumerate() {
            let (k, l) = label(col);
            let mut amp = Complex64::ZERO;
            for r in 0..n {
                for s in 0..n {
                    amp += vec_out[r].conj() * out[(r, s)] * vec_out[s];
                }
            }
            let cond = amp.re;
            row_sum += cond;
            let ea = eig_a.values()[i];
            let eb = eig_b.values()[j];
            let ea_f = eig_a.values()[k];
            let eb_f = eig_b.values()[l];
            lhs += p_in * cond * (alpha * (ea - ea_f) + beta * (eb - eb_f)).exp();
            delta_s += p_in * cond * (alpha * (ea_f - ea) + beta * (eb_f - eb));
        }
        if (row_sum - 1.0).abs() > 1e-11 {
            return Err(Error::Validation(format!(
                "conditional row {row} sums to {row_sum}; channel is not trace preserving"
            )));
        }
    }

    let rho_a = density_from_populations(&eig_a, &pop_a);
    let rho_b = density_from_populations(&eig_b, &pop_b);
    let rho_ab = kron(&rho_a, &rho_b);
    let g = nonunitality_operator(psi)?;
    let rhs = 1.0 + n as f64 * hs_inner(&rho_ab, &g)?.re;
    let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
    let entropy_bound = (rhs > 0.0).then(|| -rhs.ln());
    Ok(HeatTransferReport {
        lhs,
        rhs,
        residual,
        delta_s,
        entropy_bound,
    })
}

/// V diag(populations) V^dag with populations aligned by column index, not
/// by eigenvalue, so degenerate clusters keep their weights.
fn density_from_populations(eig: &EigenSystem, populations: &[f64]) -> ComplexMatrix {
    let n = eig.dim();
    let v = eig.vectors();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * populations[k] * v[(j, k)].conj())
            .sum()
    })
}
