//! Dense statevector simulation.
//!
//! Qubit `i` is bit `i` of the basis-state index (qubit 0 least significant).
//! A two-qubit gate on wires `(q, q+1)` sees the local index
//! `(bit q+1) << 1 | (bit q)`.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::circuit::CircuitInstance;
use crate::error::{Error, Result};
use crate::gate::GateMatrix;
use crate::sum::csum;

/// Default largest qubit count: 2^26 amplitudes, 1 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 26;

const AMPLITUDE_BYTES: u128 = 16;

/// The full 2^n complex amplitude vector of an n-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits, capped at [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_limit(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(n: usize, max_qubits: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("a statevector needs at least one qubit"));
        }
        if n > max_qubits || n >= usize::BITS as usize {
            return Err(Error::Capacity {
                n,
                max: max_qubits,
                bytes: (1u128 << n.min(127)) * AMPLITUDE_BYTES,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the norm is not checked.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::arg(format!("{len} amplitudes is not 2^n for n >= 1")));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        csum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    /// Applies `gate` to wires `(q, q+1)` in place.
    pub fn apply_two_qubit_gate(&mut self, gate: &GateMatrix, q: usize) -> Result<()> {
        let g = gate.as_4x4()?;
        if self.n < 2 || q > self.n - 2 {
            return Err(Error::QubitOutOfRange { q, n: self.n });
        }
        apply_4x4(&mut self.amps, &g, q);
        Ok(())
    }

    /// Measurement probabilities in the computational basis.
    pub fn distribution(&self) -> OutputDistribution {
        OutputDistribution {
            n: self.n,
            probs: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }
}

fn apply_4x4(amps: &mut [C64], g: &[C64; 16], q: usize) {
    let stride = 1usize << q;
    for chunk in amps.chunks_exact_mut(4 * stride) {
        let (lo, hi) = chunk.split_at_mut(2 * stride);
        let (c0, c1) = lo.split_at_mut(stride);
        let (c2, c3) = hi.split_at_mut(stride);
        for (((a0, a1), a2), a3) in c0.iter_mut().zip(c1).zip(c2).zip(c3) {
            let v = [*a0, *a1, *a2, *a3];
            *a0 = g[0] * v[0] + g[1] * v[1] + g[2] * v[2] + g[3] * v[3];
            *a1 = g[4] * v[0] + g[5] * v[1] + g[6] * v[2] + g[7] * v[3];
            *a2 = g[8] * v[0] + g[9] * v[1] + g[10] * v[2] + g[11] * v[3];
            *a3 = g[12] * v[0] + g[13] * v[1] + g[14] * v[2] + g[15] * v[3];
        }
    }
}

/// Simulates `circuit` from `|0…0⟩`.
pub fn run_circuit(circuit: &CircuitInstance) -> Result<Statevector> {
    run_circuit_with_limit(circuit, DEFAULT_MAX_QUBITS)
}

pub fn run_circuit_with_limit(circuit: &CircuitInstance, max_qubits: usize) -> Result<Statevector> {
    let mut state = Statevector::zero_with_limit(circuit.num_qubits(), max_qubits)?;
    for layer in circuit.layers() {
        for placed in layer {
            state.apply_two_qubit_gate(&placed.gate, placed.q)?;
        }
    }
    Ok(state)
}

/// Output probabilities `p(x) = |⟨x|ψ⟩|²` over all 2^n bit strings.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    /// Validates non-negativity, length 2^n and unit total within 1e-10.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let len = probs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::arg(format!("{len} probabilities is not 2^n for n >= 1")));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::arg(format!("invalid probability {p}")));
        }
        let total = csum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::arg(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            probs,
        })
    }

    pub fn uniform(n: usize) -> Self {
        let d = 1usize << n;
        Self {
            n,
            probs: vec![1.0 / d as f64; d],
        }
    }

    pub fn basis(n: usize, x: usize) -> Self {
        let mut probs = vec![0.0; 1 << n];
        probs[x] = 1.0;
        Self { n, probs }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// Draws `k` outcomes through an alias table built once for this call.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Vec<usize>> {
        if k == 0 {
            return Err(Error::arg("sample count must be at least 1"));
        }
        let table = AliasTable::new(&self.probs)?;
        Ok((0..k).map(|_| table.sample(rng)).collect())
    }
}

/// Walker/Vose alias table: O(m) construction, O(1) draws.
#[derive(Clone, Debug)]
pub struct AliasTable {
    accept: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let m = weights.len();
        if m == 0 {
            return Err(Error::arg("alias table needs at least one weight"));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::arg("alias weights must be finite and non-negative"));
        }
        let total = csum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::arg("alias weights sum to zero"));
        }
        let heaviest = weights
            .iter()
            .enumerate()
            .fold(0, |best, (i, &w)| if w > weights[best] { i } else { best });

        let mut scaled: Vec<f64> = weights.iter().map(|w| w * m as f64 / total).collect();
        let mut accept = vec![0.0; m];
        let mut alias: Vec<usize> = (0..m).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| scaled[i] < 1.0);

        while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
            accept[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for l in large {
            accept[l] = 1.0;
        }
        // Leftovers here are rounding residue; a zero-weight slot must never be drawn.
        for s in small {
            if weights[s] > 0.0 {
                accept[s] = 1.0;
            } else {
                accept[s] = 0.0;
                alias[s] = heaviest;
            }
        }
        Ok(Self { accept, alias })
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accept.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.random_range(0..self.accept.len());
        if rng.random::<f64>() < self.accept[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

/// Renders outcome `x` as an n-character bit string, qubit n-1 first.
pub fn format_bitstring(x: usize, n: usize) -> String {
    (0..n).rev().map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}
