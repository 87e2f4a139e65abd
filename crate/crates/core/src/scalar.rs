//! Functionals of the probability mass function alone: Rényi and Tsallis
//! entropies, extropy, perplexity, disequilibrium, and the LMRP complexity.
//!
//! The disequilibrium reference measure is uniform over the full product
//! alphabet (size N), not over the support; that choice is what reproduces
//! the published 0.761 / 0.381 values.

use num::ToPrimitive;

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::shannon::entropy;

fn pmf(d: &JointDistribution) -> Vec<f64> {
    d.outcomes().map(|(_, p)| p.to_f64().unwrap()).collect()
}

/// Rényi entropy of order α ≥ 0, in bits. α = 1 is the Shannon limit and
/// α = 0 gives log₂ of the support size.
pub fn renyi_entropy(d: &JointDistribution, alpha: f64) -> Result<f64> {
    if alpha < 0.0 {
        return Err(Error::NegativeOrder(alpha));
    }
    if (alpha - 1.0).abs() < 1e-12 {
        return entropy(d, &d.variable_set());
    }
    if alpha == 0.0 {
        return Ok((d.support_size() as f64).log2());
    }
    let sum: f64 = pmf(d).iter().map(|p| p.powf(alpha)).sum();
    Ok(sum.log2() / (1.0 - alpha))
}

/// Tsallis entropy of order q. q = 1 is the Shannon limit.
pub fn tsallis_entropy(d: &JointDistribution, q: f64) -> Result<f64> {
    if (q - 1.0).abs() < 1e-12 {
        return entropy(d, &d.variable_set());
    }
    let sum: f64 = pmf(d).iter().map(|p| p.powf(q)).sum();
    Ok((1.0 - sum) / (q - 1.0))
}

/// Extropy: −Σ (1−p) log₂(1−p) over the support.
pub fn extropy(d: &JointDistribution) -> f64 {
    pmf(d)
        .iter()
        .map(|p| {
            let q = 1.0 - p;
            if q > 0.0 {
                -q * q.log2()
            } else {
                0.0
            }
        })
        .sum()
}

/// Perplexity 2^H (dimensionless).
pub fn perplexity(d: &JointDistribution) -> Result<f64> {
    Ok(entropy(d, &d.variable_set())?.exp2())
}

fn jsd_to_uniform(d: &JointDistribution) -> (f64, usize) {
    let n_cells = d.product_alphabet_size();
    let u = 1.0 / n_cells as f64;
    let probs = pmf(d);
    let h_p: f64 = probs.iter().map(|p| -p * p.log2()).sum();
    let h_u = (n_cells as f64).log2();
    // mixture: support cells get (p + u)/2, the rest u/2
    let mut h_m = 0.0;
    for p in &probs {
        let m = (p + u) / 2.0;
        h_m -= m * m.log2();
    }
    let empty = n_cells - d.support_size();
    if empty > 0 {
        let m = u / 2.0;
        h_m -= empty as f64 * m * m.log2();
    }
    (h_m - (h_p + h_u) / 2.0, n_cells)
}

/// Disequilibrium: Q₀ · JSD(p, uniform over the N-cell product alphabet),
/// with Q₀ the normalization that makes the maximum over distributions 1.
pub fn disequilibrium(d: &JointDistribution) -> f64 {
    let (jsd, n_cells) = jsd_to_uniform(d);
    let n = n_cells as f64;
    let q0 = -2.0 / ((n + 1.0) / n * (n + 1.0).log2() - 2.0 * (2.0 * n).log2() + n.log2());
    q0 * jsd
}

/// LMRP statistical complexity: disequilibrium times normalized entropy.
pub fn lmrp_complexity(d: &JointDistribution) -> Result<f64> {
    let h = entropy(d, &d.variable_set())?;
    let n = d.product_alphabet_size() as f64;
    if n <= 1.0 {
        return Ok(0.0);
    }
    Ok(disequilibrium(d) * h / n.log2())
}
