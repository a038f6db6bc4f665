//! Dense square gate matrices.

use num_complex::Complex64 as C64;
use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A dense `dim x dim` complex matrix stored row-major.
///
/// Two-qubit gates are 4x4 with the local index ordered as
/// `(bit of qubit q+1) << 1 | (bit of qubit q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl GateMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::arg(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                out[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { dim: d, entries: out }
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        Self { dim: d, entries: out }
    }

    /// Kronecker product `self ⊗ rhs`; `self` acts on the high index bits.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let d = a * b;
        let mut out = vec![ZERO; d * d];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.entries[r1 * a + c1];
                for r2 in 0..b {
                    for c2 in 0..b {
                        out[(r1 * b + r2) * d + c1 * b + c2] = x * rhs.entries[r2 * b + c2];
                    }
                }
            }
        }
        Self { dim: d, entries: out }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * factor).collect(),
        }
    }

    /// `max |(G†G − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Largest absolute imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// `max |G_{ij} − H_{ij}|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Row-major array view of a 4x4 gate, used by the statevector kernel.
    pub(crate) fn as_4x4(&self) -> Result<[C64; 16]> {
        if self.dim != 4 {
            return Err(Error::GateDimension {
                expected: 4,
                got: self.dim,
            });
        }
        let mut out = [ZERO; 16];
        out.copy_from_slice(&self.entries);
        Ok(out)
    }
}

/// Fixed gates used by tests, control ensembles and the Clifford generator set.
pub mod standard {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn hadamard() -> GateMatrix {
        GateMatrix::from_real(2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
            .unwrap()
    }

    pub fn phase_s() -> GateMatrix {
        GateMatrix::from_entries(2, vec![ONE, ZERO, ZERO, C64::new(0.0, 1.0)]).unwrap()
    }

    pub fn pauli_x() -> GateMatrix {
        GateMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> GateMatrix {
        GateMatrix::from_entries(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
            .unwrap()
    }

    pub fn pauli_z() -> GateMatrix {
        GateMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// CNOT with qubit q (low index bit) as control and q+1 as target.
    pub fn cnot() -> GateMatrix {
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ];
        GateMatrix::from_real(4, &m).unwrap()
    }

    pub fn cz() -> GateMatrix {
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
        ];
        GateMatrix::from_real(4, &m).unwrap()
    }

    pub fn swap() -> GateMatrix {
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ];
        GateMatrix::from_real(4, &m).unwrap()
    }
}
