//! Circuit depths sufficient for approximate unitary designs.
//!
//! Only the 4-design bound has explicit constants. The t-design and
//! coarse-grained bounds are asymptotic, so their leading constant is a
//! caller-supplied parameter and any value used is illustrative only.

use crate::error::{Error, Result};

/// Placeholder multiplier for the asymptotic depth bounds. Illustrative only.
pub const ILLUSTRATIVE_CONSTANT: f64 = 1.0;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::arg(format!("epsilon {epsilon} not in (0, 1)")));
    }
    Ok(())
}

fn check_common(t: u32, constant: f64) -> Result<()> {
    if t < 2 {
        return Err(Error::arg(format!("design order t = {t} must be at least 2")));
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::arg(format!("constant {constant} must be positive")));
    }
    Ok(())
}

fn ceil_layers(x: f64) -> u64 {
    x.ceil() as u64
}

/// `⌈16(4n + log₂(1/ε))⌉` layers give an ε-approximate 4-design.
pub fn required_depth_4design(n: usize, epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    Ok(ceil_layers(16.0 * (4.0 * n as f64 - epsilon.log2())))
}

/// `⌈c · log₂⁷(t) · (2nt + log₂(1/ε))⌉`.
pub fn required_depth_tdesign(n: usize, t: u32, epsilon: f64, constant: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_common(t, constant)?;
    let polylog = f64::from(t).log2().powi(7);
    let linear = 2.0 * n as f64 * f64::from(t) - epsilon.log2();
    Ok(ceil_layers(constant * polylog * linear))
}

/// `⌈c · log₂⁷(t) · t · log₂(nt/ε)⌉` for the coarse-grained ensemble (relative error).
pub fn required_depth_coarse(n: usize, t: u32, epsilon: f64, constant: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_common(t, constant)?;
    if n == 0 {
        return Err(Error::arg("n must be positive"));
    }
    let polylog = f64::from(t).log2().powi(7);
    let log_term = (n as f64).log2() + f64::from(t).log2() - epsilon.log2();
    Ok(ceil_layers(constant * polylog * f64::from(t) * log_term))
}
