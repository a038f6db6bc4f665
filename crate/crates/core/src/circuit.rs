use crate::error::{Error, Result};
use crate::gate::GateMatrix;

/// A gate acting on wires `(q, q+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedGate {
    pub q: usize,
    pub gate: GateMatrix,
}

/// One layer: gates on pairwise disjoint neighbouring pairs.
pub type Layer = Vec<PlacedGate>;

/// A sampled circuit of nearest-neighbour two-qubit gates.
///
/// Depth counts layers, including layers that happen to contain no gates.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitInstance {
    n: usize,
    layers: Vec<Layer>,
}

impl CircuitInstance {
    pub fn new(n: usize, layers: Vec<Layer>) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("circuit needs at least one qubit"));
        }
        let mut used = vec![usize::MAX; n];
        for (li, layer) in layers.iter().enumerate() {
            for g in layer {
                if g.q + 1 >= n {
                    return Err(Error::QubitOutOfRange { q: g.q, n });
                }
                if g.gate.dim() != 4 {
                    return Err(Error::GateDimension {
                        expected: 4,
                        got: g.gate.dim(),
                    });
                }
                for w in [g.q, g.q + 1] {
                    if used[w] == li {
                        return Err(Error::arg(format!("qubit {w} used twice in layer {li}")));
                    }
                    used[w] = li;
                }
            }
        }
        Ok(Self { n, layers })
    }

    /// A circuit with no layers.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Lower-wire indices of each layer, in placement order.
    pub fn layout(&self) -> Vec<Vec<usize>> {
        self.layers
            .iter()
            .map(|l| l.iter().map(|g| g.q).collect())
            .collect()
    }
}
