//! Shannon entropy, relative entropy with an infinity sentinel, and the
//! doubled Jensen–Shannon divergence used by the tradeoff bound.
//!
//! Everything is in nats. Support violations (some pᵢ > 0 where the reference
//! is 0) yield `f64::INFINITY`, which orders above all reals and propagates
//! through sums — infinitely bad is the intended meaning, not an error.

use crate::error::{Error, Result};
use crate::quantum::ProbDist;

/// H(P) = −Σ pᵢ ln pᵢ with 0·ln 0 = 0.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    entropy_slice(p.values())
}

pub(crate) fn entropy_slice(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
}

/// D(P‖R) = Σ<sub>pᵢ>0</sub> pᵢ ln(pᵢ/rᵢ); +∞ when R misses support of P.
/// The first argument is the ideal distribution, the second the realized one.
pub fn relative_entropy(p: &ProbDist, r: &ProbDist) -> Result<f64> {
    relative_entropy_slices(p.values(), r.values())
}

pub fn relative_entropy_slices(p: &[f64], r: &[f64]) -> Result<f64> {
    if p.len() != r.len() {
        return Err(Error::Dimension {
            context: "relative entropy",
            expected: p.len(),
            got: r.len(),
        });
    }
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(r) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return Ok(f64::INFINITY);
        }
        sum += a * (a / b).ln();
    }
    // Nonnegative analytically (Gibbs); roundoff may leave -1e-16 noise.
    Ok(sum.max(0.0))
}

/// Doubled Jensen–Shannon divergence 2H((P₁+P₂)/2) − H(P₁) − H(P₂);
/// symmetric, zero iff equal, and at most 2·ln 2.
pub fn js_divergence(p1: &ProbDist, p2: &ProbDist) -> Result<f64> {
    js_divergence_slices(p1.values(), p2.values())
}

pub fn js_divergence_slices(p1: &[f64], p2: &[f64]) -> Result<f64> {
    if p1.len() != p2.len() {
        return Err(Error::Dimension {
            context: "Jensen-Shannon divergence",
            expected: p1.len(),
            got: p2.len(),
        });
    }
    let mid: Vec<f64> = p1.iter().zip(p2).map(|(a, b)| 0.5 * (a + b)).collect();
    Ok((2.0 * entropy_slice(&mid) - entropy_slice(p1) - entropy_slice(p2)).max(0.0))
}

/// D(P‖P′) + D(Q‖Q̃): total error plus disturbance of one apparatus.
pub fn err_dis_sum(p: &ProbDist, q: &ProbDist, pp: &ProbDist, qt: &ProbDist) -> Result<f64> {
    Ok(relative_entropy(p, pp)? + relative_entropy(q, qt)?)
}
