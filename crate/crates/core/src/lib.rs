//! Random circuit sampling workbench.
//!
//! * [`state`], [`circuit`], [`gate`]: dense statevector simulation of
//!   nearest-neighbour two-qubit circuits.
//! * [`ensembles`]: Haar unitary/orthogonal and Clifford gate samplers,
//!   brickwork and coarse-grained circuit builders, design-depth formulas.
//! * [`moments`]: exact rational Haar moments of output probabilities.
//! * [`estimators`]: LXEB, collision probability and related statistics.
//! * [`bounds`]: concentration tails and LXEB guarantee formulas.
//! * [`experiments`]: seeded Monte Carlo runs with JSON/CSV reports.

pub mod bounds;
pub mod circuit;
pub mod ensembles;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod gate;
pub mod moments;
pub mod seed;
pub mod state;
pub mod sum;

pub use circuit::{CircuitInstance, PlacedGate};
pub use ensembles::{Architecture, EnsembleSpec, GateEnsemble};
pub use error::{Error, Result};
pub use gate::GateMatrix;
pub use moments::{ExactRational, Group, IntegerPartition};
pub use seed::SeedPlan;
pub use state::{run_circuit, OutputDistribution, Statevector};
