//! Constructors for the damping-channel family and the spin Hamiltonians
//! used to exercise the fluctuation identities, plus their closed-form
//! correction terms for cross-validation against the numeric pipeline.
//!
//! Angle conventions, frozen here and verified by the analytic formulas:
//! for the qubit, `theta` is the angle between the damping translation
//! vector tau = (0, 0, -p) and the field, so the field direction is
//! (sin t, 0, -cos t); for the spin-1 system `theta` is the angle between
//! the z axis and the field, direction (sin t, 0, cos t). Natural units
//! throughout (mu_B = 1, e hbar / m c = 1).

use num_complex::Complex64;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, ComplexMatrix};
use crate::tol::Tolerances;

/// Two-level amplitude damping: K0 = diag(sqrt(1-p), 1), K1 = sqrt(p) E_10.
///
/// Damps level 1 into level 2; at p = 1 every state contracts onto the
/// second basis state. The translation vector is tau = (0, 0, -p).
pub fn amplitude_damping_2(p: f64) -> Result<QuantumChannel> {
    check_unit_interval("p", p)?;
    let k0 = ComplexMatrix::diag(&[(1.0 - p).sqrt(), 1.0]);
    let mut k1 = ComplexMatrix::zeros(2, 2);
    k1[(1, 0)] = Complex64::new(p.sqrt(), 0.0);
    QuantumChannel::new(vec![k0, k1])
}

/// Spin-1/2 Hamiltonian -B . sigma (mu_B = 1); eigenvalues -|B| and +|B|.
pub fn qubit_hamiltonian(b: [f64; 3]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(2, 2);
    h = &h + &ComplexMatrix::pauli_x().scale_re(-b[0]);
    h = &h + &ComplexMatrix::pauli_y().scale_re(-b[1]);
    h = &h + &ComplexMatrix::pauli_z().scale_re(-b[2]);
    h
}

/// Field of magnitude `b` at angle `theta` to the damping translation
/// vector, which points along -z.
pub fn qubit_field_at_angle(b: f64, theta: f64) -> [f64; 3] {
    [b * theta.sin(), 0.0, -b * theta.cos()]
}

/// Qubit Hamiltonian for a field at angle `theta` to the translation vector.
pub fn qubit_hamiltonian_at_angle(b: f64, theta: f64) -> ComplexMatrix {
    qubit_hamiltonian(qubit_field_at_angle(b, theta))
}

/// Closed-form correction term for amplitude damping against a field at
/// angle `theta`: p tanh(beta B) cos(theta).
pub fn qubit_correction_analytic(p: f64, theta: f64, beta: f64, b: f64) -> f64 {
    p * (beta * b).tanh() * theta.cos()
}

/// Coordinate-free form of the qubit correction term,
/// tanh(beta |B|) (tau . B) / |B|, for any qubit channel's translation
/// vector and any field.
pub fn qubit_correction_from_field(tau: &crate::bloch::BlochVector, b: [f64; 3], beta: f64) -> Result<f64> {
    let b_norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if b_norm == 0.0 {
        return Ok(0.0);
    }
    Ok((beta * b_norm).tanh() * tau.dot3(b)? / b_norm)
}

/// Three-level generalized amplitude damping with
/// K0 = diag(sqrt(1-p), sqrt(1-q), 1) and lowering operators into level 3.
pub fn gad_3(p: f64, q: f64) -> Result<QuantumChannel> {
    check_unit_interval("p", p)?;
    check_unit_interval("q", q)?;
    let k0 = ComplexMatrix::diag(&[(1.0 - p).sqrt(), (1.0 - q).sqrt(), 1.0]);
    let mut k1 = ComplexMatrix::zeros(3, 3);
    k1[(2, 0)] = Complex64::new(p.sqrt(), 0.0);
    let mut k2 = ComplexMatrix::zeros(3, 3);
    k2[(2, 1)] = Complex64::new(q.sqrt(), 0.0);
    QuantumChannel::new(vec![k0, k1, k2])
}

/// Spin-1 angular momentum component J_z = diag(1, 0, -1) (hbar = 1).
pub fn spin1_jz() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, 0.0, -1.0])
}

pub fn spin1_jx() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(3, 3);
    m[(0, 1)] = Complex64::new(s, 0.0);
    m[(1, 0)] = Complex64::new(s, 0.0);
    m[(1, 2)] = Complex64::new(s, 0.0);
    m[(2, 1)] = Complex64::new(s, 0.0);
    m
}

pub fn spin1_jy() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(3, 3);
    m[(0, 1)] = Complex64::new(0.0, -s);
    m[(1, 0)] = Complex64::new(0.0, s);
    m[(1, 2)] = Complex64::new(0.0, -s);
    m[(2, 1)] = Complex64::new(0.0, s);
    m
}

/// Spin-1 Hamiltonian B . J; eigenvalues {-|B|, 0, +|B|}.
pub fn spin1_hamiltonian(b: [f64; 3]) -> ComplexMatrix {
    let mut h = spin1_jx().scale_re(b[0]);
    h = &h + &spin1_jy().scale_re(b[1]);
    h = &h + &spin1_jz().scale_re(b[2]);
    h
}

/// Spin-1 Hamiltonian for a field of magnitude `b` at angle `theta` to the
/// z axis.
pub fn spin1_hamiltonian_at_angle(b: f64, theta: f64) -> ComplexMatrix {
    spin1_hamiltonian([b * theta.sin(), 0.0, b * theta.cos()])
}

/// Closed-form low-temperature correction for the three-level damping
/// channel: (p + q/2) cos(theta) + (q/8)(1 + 3 cos(2 theta)).
pub fn spin1_low_t_correction(p: f64, q: f64, theta: f64) -> f64 {
    (p + 0.5 * q) * theta.cos() + 0.125 * q * (1.0 + 3.0 * (2.0 * theta).cos())
}

/// Parameters of the generalized damping channel on N levels.
///
/// Levels in `damped` lose population with survival amplitudes `z`;
/// `amplitudes` holds entries `(m, n, a)` transferring population from the
/// damped level `n` into level `m`. Indices are zero-based. The
/// normalization constraint |z_n|^2 + sum_m |a_mn|^2 = 1 is enforced per
/// damped level.
#[derive(Debug, Clone)]
pub struct DampingSpec {
    dim: usize,
    damped: Vec<usize>,
    z: Vec<Complex64>,
    amplitudes: Vec<(usize, usize, Complex64)>,
}

impl DampingSpec {
    pub fn new(
        dim: usize,
        damped: Vec<usize>,
        z: Vec<Complex64>,
        amplitudes: Vec<(usize, usize, Complex64)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if z.len() != damped.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} damped levels but {} survival amplitudes",
                damped.len(),
                z.len()
            )));
        }
        let mut seen = vec![false; dim];
        for &n in &damped {
            if n >= dim {
                return Err(Error::InvalidParameter(format!(
                    "damped level {n} out of range for dimension {dim}"
                )));
            }
            if seen[n] {
                return Err(Error::InvalidParameter(format!("level {n} damped twice")));
            }
            seen[n] = true;
        }
        let mut pair_seen = std::collections::BTreeSet::new();
        for &(m, n, _) in &amplitudes {
            if m >= dim || n >= dim {
                return Err(Error::InvalidParameter(format!(
                    "transfer ({m}, {n}) out of range for dimension {dim}"
                )));
            }
            if m == n {
                return Err(Error::InvalidParameter(format!(
                    "transfer amplitude needs distinct levels, got ({m}, {n})"
                )));
            }
            if !seen[n] {
                return Err(Error::Constraint(format!(
                    "transfer out of level {n}, which is not damped"
                )));
            }
            if !pair_seen.insert((m, n)) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate transfer amplitude ({m}, {n})"
                )));
            }
        }
        let spec = Self {
            dim,
            damped,
            z,
            amplitudes,
        };
        for (idx, &n) in spec.damped.iter().enumerate() {
            let mut total = spec.z[idx].norm_sqr();
            for &(_, src, a) in &spec.amplitudes {
                if src == n {
                    total += a.norm_sqr();
                }
            }
            if (total - 1.0).abs() > Tolerances::DEFAULT.equality {
                return Err(Error::Constraint(format!(
                    "level {n} violates normalization: |z|^2 + sum |a|^2 = {total}"
                )));
            }
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn damped(&self) -> &[usize] {
        &self.damped
    }

    /// True when no level is damped, i.e. the spec encodes the identity map.
    pub fn is_identity(&self) -> bool {
        self.damped.is_empty()
    }

    /// Diagonal of the nonunitality operator in the channel eigenbasis:
    /// x_m = (|z_m|^2 + y_m - 1)/N on damped levels, x_m = y_m/N elsewhere,
    /// with y_m the inbound transfer weight.
    pub fn g_diagonal(&self) -> Vec<f64> {
        let n = self.dim as f64;
        let mut y = vec![0.0f64; self.dim];
        for &(m, _, a) in &self.amplitudes {
            y[m] += a.norm_sqr();
        }
        let mut x: Vec<f64> = y.iter().map(|&ym| ym / n).collect();
        for (idx, &lvl) in self.damped.iter().enumerate() {
            x[lvl] = (self.z[idx].norm_sqr() + y[lvl] - 1.0) / n;
        }
        x
    }
}

/// Builds the generalized damping channel from its spec.
///
/// Kraus ordering is deterministic: the diagonal K0 first, then one
/// transfer operator per amplitude sorted by (source, target), which
/// reproduces the two- and three-level constructors operator for operator.
pub fn generalized_damping(spec: &DampingSpec) -> Result<QuantumChannel> {
    let n = spec.dim;
    let mut k0 = ComplexMatrix::identity(n);
    for (idx, &lvl) in spec.damped.iter().enumerate() {
        k0[(lvl, lvl)] = spec.z[idx];
    }
    let mut ordered = spec.amplitudes.clone();
    ordered.sort_by_key(|&(m, src, _)| (src, m));
    let mut kraus = vec![k0];
    for (m, src, a) in ordered {
        let mut k = ComplexMatrix::zeros(n, n);
        k[(m, src)] = a;
        kraus.push(k);
    }
    QuantumChannel::new(kraus)
}

/// Exact correction term for a channel whose nonunitality operator is
/// diagonal in the eigenbasis of a final Hamiltonian with the given
/// spectrum: N Z^{-1} sum_n x_n exp(-beta e_n).
pub fn damping_correction_analytic(spec: &DampingSpec, energies: &[f64], beta: f64) -> Result<f64> {
    if energies.len() != spec.dim {
        return Err(Error::DimensionMismatch(format!(
            "{} energies for dimension {}",
            energies.len(),
            spec.dim
        )));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let x = spec.g_diagonal();
    let overlap: f64 = x.iter().zip(&weights).map(|(xi, wi)| xi * wi).sum();
    Ok(spec.dim as f64 * overlap / z)
}

/// Three-level damping that shifts population upward as well as down:
/// K0 = diag(sqrt(1-p), 1, 1) with transfers sqrt(q) into level 2 and
/// sqrt(p-q) into level 3. Requires q <= p for real amplitudes.
pub fn population_shift_3(p: f64, q: f64) -> Result<QuantumChannel> {
    check_unit_interval("p", p)?;
    check_unit_interval("q", q)?;
    if q > p {
        return Err(Error::InvalidParameter(format!(
            "population shift needs q <= p, got p = {p}, q = {q}"
        )));
    }
    let spec = DampingSpec::new(
        3,
        vec![0],
        vec![Complex64::new((1.0 - p).sqrt(), 0.0)],
        vec![
            (1, 0, Complex64::new(q.sqrt(), 0.0)),
            (2, 0, Complex64::new((p - q).sqrt(), 0.0)),
        ],
    )?;
    generalized_damping(&spec)
}

/// Complete contraction onto the pure state |psi>: Kraus set {|psi><n|}.
///
/// Every input state maps to |psi><psi|; the channel saturates the
/// dimensional bound on ||G||_2.
pub fn complete_contraction(psi: &[Complex64]) -> Result<QuantumChannel> {
    let n = psi.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty state vector".into()));
    }
    let norm = vec_norm(psi);
    if (norm - 1.0).abs() > Tolerances::DEFAULT.equality {
        return Err(Error::Validation(format!(
            "state vector norm is {norm}, expected 1"
        )));
    }
    let kraus = (0..n)
        .map(|k| ComplexMatrix::outer(psi, &crate::linalg::basis_state(n, k)))
        .collect();
    QuantumChannel::new(kraus)
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(())
}
