//! Haar-random unitary and orthogonal matrices.
//!
//! A matrix of i.i.d. Gaussians is QR-factorised with Householder reflections
//! and each column of Q is multiplied by the phase of the matching diagonal
//! entry of R (Mezzadri's correction), which makes the result exactly
//! Haar-distributed rather than biased by the factorisation's sign convention.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gate::GateMatrix;

/// Largest dimension accepted by [`sample_haar_unitary`] and [`sample_haar_orthogonal`].
pub const MAX_HAAR_DIM: usize = 64;

/// Haar-random element of U(4).
///
/// The global phase is left free; output probabilities do not depend on it, so
/// this is equivalent to sampling SU(4) for every quantity computed here.
pub fn sample_haar_su4<R: Rng + ?Sized>(rng: &mut R) -> GateMatrix {
    haar_qr(4, rng, true)
}

/// Haar-random element of O(4), stored with zero imaginary parts.
pub fn sample_haar_orthogonal4<R: Rng + ?Sized>(rng: &mut R) -> GateMatrix {
    haar_qr(4, rng, false)
}

/// Haar-random `d x d` unitary for `2 <= d <= 64`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<GateMatrix> {
    check_dim(d)?;
    Ok(haar_qr(d, rng, true))
}

/// Haar-random `d x d` real orthogonal matrix for `2 <= d <= 64`.
pub fn sample_haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<GateMatrix> {
    check_dim(d)?;
    Ok(haar_qr(d, rng, false))
}

fn check_dim(d: usize) -> Result<()> {
    if !(2..=MAX_HAAR_DIM).contains(&d) {
        return Err(Error::arg(format!(
            "Haar dimension {d} outside [2, {MAX_HAAR_DIM}]"
        )));
    }
    Ok(())
}

fn haar_qr<R: Rng + ?Sized>(d: usize, rng: &mut R, complex: bool) -> GateMatrix {
    // Column-major working copy: a[c * d + r].
    let mut a: Vec<C64> = (0..d * d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
            C64::new(re, im)
        })
        .collect();
    let (reflectors, diag) = householder(&mut a, d);

    // Q = H_0 H_1 … H_{d-1}, accumulated right to left onto the identity.
    let mut q = GateMatrix::identity(d);
    for (k, v) in reflectors.iter().enumerate().rev() {
        let Some(v) = v else { continue };
        for c in 0..d {
            let mut dot = C64::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * q.get(k + i, c);
            }
            if dot == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, vi) in v.iter().enumerate() {
                let r = k + i;
                q.set(r, c, q.get(r, c) - *vi * dot * 2.0);
            }
        }
    }

    for (c, r) in diag.iter().enumerate() {
        let norm = r.norm();
        let phase = if norm > 0.0 { r / norm } else { C64::new(1.0, 0.0) };
        for row in 0..d {
            q.set(row, c, q.get(row, c) * phase);
        }
    }
    q
}

/// In-place Householder QR of a column-major `d x d` matrix.
///
/// Returns the unit reflector vectors (None when the column needs no
/// reflection) and the diagonal of R.
fn householder(a: &mut [C64], d: usize) -> (Vec<Option<Vec<C64>>>, Vec<C64>) {
    let mut reflectors = Vec::with_capacity(d);
    let mut diag = Vec::with_capacity(d);
    for k in 0..d {
        let x: Vec<C64> = (k..d).map(|r| a[k * d + r]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let x0 = x[0];
        let x0abs = x0.norm();
        let phase = if x0abs > 0.0 { x0 / x0abs } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;

        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            diag.push(x0);
            reflectors.push(None);
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        for c in k..d {
            let mut dot = C64::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[c * d + k + i];
            }
            for (i, vi) in v.iter().enumerate() {
                a[c * d + k + i] -= *vi * dot * 2.0;
            }
        }
        diag.push(a[k * d + k]);
        reflectors.push(Some(v));
    }
    (reflectors, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_to_machine_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            assert!(sample_haar_su4(&mut rng).unitarity_defect() <= 1e-12);
        }
        for d in [2, 3, 7, 16, 64] {
            let u = sample_haar_unitary(d, &mut rng).unwrap();
            assert!(u.unitarity_defect() <= 1e-12, "d={d}");
        }
    }

    #[test]
    fn orthogonal_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let o = sample_haar_orthogonal4(&mut rng);
            assert!(o.unitarity_defect() <= 1e-12);
            assert!(o.max_imag() <= 1e-12);
        }
    }

    #[test]
    fn dimension_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_haar_unitary(1, &mut rng).is_err());
        assert!(sample_haar_unitary(65, &mut rng).is_err());
        assert!(sample_haar_orthogonal(1, &mut rng).is_err());
    }

    #[test]
    fn r_diagonal_matches_factorisation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = 5;
        let g: Vec<C64> = (0..d * d)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut a = g.clone();
        let (_, diag) = householder(&mut a, d);
        // Product of |R_kk| equals |det A|.
        let det_abs: f64 = diag.iter().map(|z| z.norm()).product();
        // Same quantity via Gram-Schmidt on the columns of the input.
        let mut prod = 1.0;
        let mut basis: Vec<Vec<C64>> = Vec::new();
        for c in 0..d {
            let mut col: Vec<C64> = g[c * d..(c + 1) * d].to_vec();
            for b in &basis {
                let dot: C64 = b.iter().zip(&col).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in col.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
            let nrm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prod *= nrm;
            basis.push(col.iter().map(|z| z / nrm).collect());
        }
        assert!((det_abs - prod).abs() < 1e-9 * prod);
    }
}
