//! Uniform sampling from the two-qubit Clifford group.
//!
//! The group (11520 elements modulo global phase) is enumerated once by a
//! breadth-first closure over `{H⊗I, I⊗H, S⊗I, I⊗S, CNOT}`. Each element is
//! stored in a canonical phase, with entries snapped to their exact values,
//! and a draw is a uniform index into that table.

use std::collections::{HashSet, VecDeque};

use num_complex::Complex64 as C64;
use once_cell::sync::Lazy;
use rand::Rng;

use crate::gate::{standard, GateMatrix};

/// |C₂ / U(1)|.
pub const TWO_QUBIT_CLIFFORD_ORDER: usize = 11520;

static TABLE: Lazy<Vec<GateMatrix>> = Lazy::new(enumerate_two_qubit_cliffords);

/// The enumerated group, identity first.
pub fn two_qubit_cliffords() -> &'static [GateMatrix] {
    &TABLE
}

/// Uniformly random two-qubit Clifford (one `u32` range draw per sample).
pub fn sample_clifford_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> GateMatrix {
    let table = two_qubit_cliffords();
    table[rng.random_range(0..table.len())].clone()
}

/// Index of the identity in [`two_qubit_cliffords`].
pub const IDENTITY_INDEX: usize = 0;

fn enumerate_two_qubit_cliffords() -> Vec<GateMatrix> {
    let id2 = GateMatrix::identity(2);
    let generators = [
        standard::hadamard().kron(&id2),
        id2.kron(&standard::hadamard()),
        standard::phase_s().kron(&id2),
        id2.kron(&standard::phase_s()),
        standard::cnot(),
    ];

    let start = canonicalize(&GateMatrix::identity(4));
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    seen.insert(key(&start));
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        for h in &generators {
            let next = canonicalize(&h.matmul(&g));
            if seen.insert(key(&next)) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Exact real/imaginary parts that occur in canonically phased 2-qubit Cliffords.
const SNAP: [f64; 9] = [
    0.0,
    0.353_553_390_593_273_8, // 1/(2√2)
    -0.353_553_390_593_273_8,
    0.5,
    -0.5,
    std::f64::consts::FRAC_1_SQRT_2,
    -std::f64::consts::FRAC_1_SQRT_2,
    1.0,
    -1.0,
];

fn snap(x: f64) -> f64 {
    for s in SNAP {
        if (x - s).abs() < 1e-9 {
            return s;
        }
    }
    panic!("unexpected Clifford matrix entry {x}");
}

/// Fixes the global phase so the first non-zero entry is real and positive.
fn canonicalize(g: &GateMatrix) -> GateMatrix {
    let pivot = g
        .entries()
        .iter()
        .find(|z| z.norm() > 1e-9)
        .copied()
        .expect("zero matrix");
    let phased = g.scale(pivot.conj() / pivot.norm());
    let entries = phased
        .entries()
        .iter()
        .map(|z| C64::new(snap(z.re), snap(z.im)))
        .collect();
    GateMatrix::from_entries(g.dim(), entries).unwrap()
}

fn key(g: &GateMatrix) -> Vec<(i64, i64)> {
    g.entries()
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// If `m` equals `c · P₁ ⊗ P₂` for a Pauli string and `c ∈ {±1, ±i}`, returns `(c, P₁, P₂)`
/// with Paulis indexed I, X, Y, Z = 0..4.
pub fn as_signed_pauli(m: &GateMatrix, tol: f64) -> Option<(C64, usize, usize)> {
    let paulis = [
        GateMatrix::identity(2),
        standard::pauli_x(),
        standard::pauli_y(),
        standard::pauli_z(),
    ];
    let phases = [
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
    ];
    for (a, pa) in paulis.iter().enumerate() {
        for (b, pb) in paulis.iter().enumerate() {
            let p = pa.kron(pb);
            for c in phases {
                if m.max_abs_diff(&p.scale(c)) <= tol {
                    return Some((c, a, b));
                }
            }
        }
    }
    None
}
