//! Gate ensembles, circuit builders and design-depth calculators.

mod clifford;
mod depth;
mod haar;

pub use clifford::{
    as_signed_pauli, sample_clifford_two_qubit, two_qubit_cliffords, IDENTITY_INDEX,
    TWO_QUBIT_CLIFFORD_ORDER,
};
pub use depth::{
    required_depth_4design, required_depth_coarse, required_depth_tdesign,
    ILLUSTRATIVE_CONSTANT,
};
pub use haar::{
    sample_haar_orthogonal, sample_haar_orthogonal4, sample_haar_su4, sample_haar_unitary,
    MAX_HAAR_DIM,
};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitInstance, Layer, PlacedGate};
use crate::error::{Error, Result};
use crate::gate::{standard, GateMatrix};
use crate::seed::SeedPlan;

/// Distribution each two-qubit gate is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateEnsemble {
    /// Haar measure on U(4).
    HaarUnitary,
    /// Haar measure on O(4).
    HaarOrthogonal,
    /// Uniform two-qubit Clifford.
    Clifford,
    /// Every gate is the identity.
    Identity,
    /// Deterministic control: `H⊗H` on the first layer, `CZ` afterwards.
    /// Any depth ≥ 1 yields the exactly uniform output distribution.
    Hadamard,
}

impl GateEnsemble {
    /// Draws one gate; `layer` is the 0-based layer index within the circuit.
    pub fn sample<R: Rng + ?Sized>(self, layer: usize, rng: &mut R) -> GateMatrix {
        match self {
            Self::HaarUnitary => sample_haar_su4(rng),
            Self::HaarOrthogonal => sample_haar_orthogonal4(rng),
            Self::Clifford => sample_clifford_two_qubit(rng),
            Self::Identity => GateMatrix::identity(4),
            Self::Hadamard if layer == 0 => standard::hadamard().kron(&standard::hadamard()),
            Self::Hadamard => standard::cz(),
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Self::HaarUnitary | Self::HaarOrthogonal | Self::Clifford)
    }
}

impl fmt::Display for GateEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::HaarUnitary => "haar-unitary",
            Self::HaarOrthogonal => "haar-orthogonal",
            Self::Clifford => "clifford",
            Self::Identity => "identity",
            Self::Hadamard => "hadamard",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    #[default]
    Brickwork,
    CoarseGrained,
}

/// Descriptor of a circuit ensemble.
///
/// For the coarse-grained architecture `depth` is the total depth: each of the
/// two block stages runs `depth / 2` internal brickwork layers, and `t` and
/// `epsilon` fix the block size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub kind: GateEnsemble,
    #[serde(default)]
    pub architecture: Architecture,
    pub n: usize,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl EnsembleSpec {
    pub fn brickwork(kind: GateEnsemble, n: usize, depth: usize) -> Self {
        Self {
            kind,
            architecture: Architecture::Brickwork,
            n,
            depth,
            t: None,
            epsilon: None,
        }
    }

    pub fn coarse_grained(kind: GateEnsemble, n: usize, depth: usize, t: u32, epsilon: f64) -> Self {
        Self {
            kind,
            architecture: Architecture::CoarseGrained,
            n,
            depth,
            t: Some(t),
            epsilon: Some(epsilon),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.architecture {
            Architecture::Brickwork => {
                if self.n < 2 || self.n % 2 != 0 {
                    return Err(Error::arg(format!(
                        "brickwork circuits need an even qubit count >= 2, got {}",
                        self.n
                    )));
                }
            }
            Architecture::CoarseGrained => {
                let (t, eps) = self.coarse_params()?;
                coarse_block_size(self.n, t, eps)?;
            }
        }
        Ok(())
    }

    fn coarse_params(&self) -> Result<(u32, f64)> {
        match (self.t, self.epsilon) {
            (Some(t), Some(eps)) => Ok((t, eps)),
            _ => Err(Error::arg("coarse-grained ensembles need both t and epsilon")),
        }
    }

    /// Samples one circuit from this ensemble.
    pub fn build(&self, plan: &SeedPlan) -> Result<CircuitInstance> {
        match self.architecture {
            Architecture::Brickwork => build_brickwork(self, plan),
            Architecture::CoarseGrained => {
                let (t, eps) = self.coarse_params()?;
                build_coarse_grained(self.kind, self.n, t, eps, self.depth, plan)
            }
        }
    }
}

/// Alternating layers on pairs (0,1),(2,3),… then (1,2),(3,4),…, open boundaries.
///
/// Gate `g` (counted layer by layer, lowest wire first) is drawn from
/// `plan.gate_stream(g)`.
pub fn build_brickwork(spec: &EnsembleSpec, plan: &SeedPlan) -> Result<CircuitInstance> {
    if spec.architecture != Architecture::Brickwork {
        return Err(Error::arg("spec is not a brickwork ensemble"));
    }
    spec.validate()?;
    let mut counter = 0u64;
    let layers = (0..spec.depth)
        .map(|l| block_layer(spec.kind, 0, spec.n, l, l, plan, &mut counter))
        .collect();
    CircuitInstance::new(spec.n, layers)
}

/// Internal brickwork layer `internal` of a block `[start, end)`.
fn block_layer(
    kind: GateEnsemble,
    start: usize,
    end: usize,
    internal: usize,
    global: usize,
    plan: &SeedPlan,
    counter: &mut u64,
) -> Layer {
    let mut layer = Vec::new();
    let mut q = start + internal % 2;
    while q + 1 < end {
        let gate = kind.sample(global, &mut plan.gate_stream(*counter));
        *counter += 1;
        layer.push(PlacedGate { q, gate });
        q += 2;
    }
    layer
}

/// Block size `ξ = 2·log₂(n·t/ε)`, rounded up to an even integer and clamped to `[2, n]`.
pub fn coarse_block_size(n: usize, t: u32, epsilon: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::arg("coarse-grained circuits need at least 2 qubits"));
    }
    if t < 1 {
        return Err(Error::arg("design order t must be at least 1"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::arg(format!("epsilon {epsilon} not in (0, 1)")));
    }
    let raw = 2.0 * ((n as f64).log2() + f64::from(t).log2() - epsilon.log2());
    // Exact powers of two land on integers; keep them there.
    let mut xi = (raw - 1e-9).ceil().max(2.0) as usize;
    if xi % 2 == 1 {
        xi += 1;
    }
    Ok(xi.min(n))
}

/// Contiguous blocks of one coarse-grained stage. Stage 1 starts at 0; stage 2
/// is shifted by ξ/2, so its first block is the ξ/2-qubit edge. The last block
/// takes whatever remainder is left.
pub fn coarse_blocks(n: usize, xi: usize, shifted: bool) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut start = 0;
    if shifted && xi / 2 > 0 && xi < n {
        blocks.push((0, xi / 2));
        start = xi / 2;
    }
    while start < n {
        let end = (start + xi).min(n);
        blocks.push((start, end));
        start = end;
    }
    blocks
}

/// Two stages of independent brickwork blocks, the second shifted by half a block.
///
/// Each stage runs `block_depth / 2` layers; gates that would cross a block
/// boundary are omitted (they are the identity).
pub fn build_coarse_grained(
    kind: GateEnsemble,
    n: usize,
    t: u32,
    epsilon: f64,
    block_depth: usize,
    plan: &SeedPlan,
) -> Result<CircuitInstance> {
    let xi = coarse_block_size(n, t, epsilon)?;
    let stage_depth = block_depth / 2;
    let mut counter = 0u64;
    let mut layers = Vec::with_capacity(2 * stage_depth);
    for shifted in [false, true] {
        let blocks = coarse_blocks(n, xi, shifted);
        for internal in 0..stage_depth {
            let global = layers.len();
            let layer: Layer = blocks
                .iter()
                .flat_map(|&(s, e)| block_layer(kind, s, e, internal, global, plan, &mut counter))
                .collect();
            layers.push(layer);
        }
    }
    CircuitInstance::new(n, layers)
}
