//! JSON wire formats for matrices, channels, and Bloch vectors.
//!
//! A matrix literal is `{"rows": r, "cols": c, "re": [...], "im": [...]}`
//! with both coefficient arrays row-major. A channel file is
//! `{"dim_in": n, "dim_out": m, "kraus": [literal, ...]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Matrix literal text format shared by the CLI and tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixLiteral {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixLiteral {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.entries().iter().map(|z| z.re).collect(),
            im: m.entries().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let count = self.rows * self.cols;
        if self.re.len() != count || self.im.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "matrix literal {}x{} needs {} coefficients, got re: {}, im: {}",
                self.rows,
                self.cols,
                count,
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

/// Channel file format: explicit Kraus operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelLiteral {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixLiteral>,
}

impl ChannelLiteral {
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(MatrixLiteral::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixLiteral::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        let ch = QuantumChannel::new(kraus)?;
        if ch.dim_in() != self.dim_in || ch.dim_out() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "declared dimensions {}->{} do not match Kraus shapes {}->{}",
                self.dim_in,
                self.dim_out,
                ch.dim_in(),
                ch.dim_out()
            )));
        }
        Ok(ch)
    }
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixLiteral::from_matrix(m)).expect("literal serializes")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let literal: MatrixLiteral =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("bad matrix JSON: {e}")))?;
    literal.to_matrix()
}

pub fn channel_to_json(ch: &QuantumChannel) -> String {
    serde_json::to_string_pretty(&ChannelLiteral::from_channel(ch)).expect("literal serializes")
}

pub fn channel_from_json(text: &str) -> Result<QuantumChannel> {
    let literal: ChannelLiteral = serde_json::from_str(text)
        .map_err(|e| Error::Validation(format!("bad channel JSON: {e}")))?;
    literal.to_channel()
}
