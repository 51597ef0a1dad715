//! Standalone differentiable functions used outside the layer stack:
//! stable softmax and diagonal-Gaussian log-density.

use crate::error::{Error, Result};

/// Numerically stable softmax: inputs are max-shifted before exponentiation.
pub fn softmax(x: &[f64]) -> Vec<f64> {
    let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = x.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

/// Backward pass of softmax: given y = softmax(x) and dL/dy, returns dL/dx.
pub fn softmax_backward(y: &[f64], dy: &[f64]) -> Vec<f64> {
    let dot: f64 = y.iter().zip(dy).map(|(yi, gi)| yi * gi).sum();
    y.iter().zip(dy).map(|(yi, gi)| yi * (gi - dot)).collect()
}

/// Sum of per-component log-densities of independent normals N(mu_i, sigma).
pub fn gaussian_log_prob(x: &[f64], mu: &[f64], sigma: f64) -> Result<f64> {
    if x.len() != mu.len() {
        return Err(Error::ShapeMismatch(format!(
            "log-prob length mismatch: {} vs {}",
            x.len(),
            mu.len()
        )));
    }
    if sigma <= 0.0 {
        return Err(Error::Validation(
            "gaussian log-probability requires sigma > 0".into(),
        ));
    }
    let ln_norm = -0.5 * (2.0 * std::f64::consts::PI).ln() - sigma.ln();
    let mut total = 0.0;
    for (xi, mi) in x.iter().zip(mu) {
        let z = (xi - mi) / sigma;
        total += ln_norm - 0.5 * z * z;
    }
    Ok(total)
}

/// Gradient of `gaussian_log_prob` w.r.t. the mean vector: (x - mu) / sigma^2.
pub fn gaussian_log_prob_grad_mu(x: &[f64], mu: &[f64], sigma: f64) -> Vec<f64> {
    let inv_var = 1.0 / (sigma * sigma);
    x.iter().zip(mu).map(|(xi, mi)| (xi - mi) * inv_var).collect()
}
