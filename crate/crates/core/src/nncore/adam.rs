use super::graph::{Gradients, NetworkGraph};
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Adam optimizer state: first/second moment accumulators mirroring the
/// parameter shapes, plus a monotone step counter for bias correction.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub step: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub first_moment: Vec<Tensor>,
    pub second_moment: Vec<Tensor>,
}

impl AdamState {
    pub fn new(graph: &NetworkGraph, learning_rate: f64) -> Self {
        let zeros: Vec<Tensor> = graph
            .params()
            .iter()
            .map(|p| Tensor::zeros(p.shape().to_vec()))
            .collect();
        AdamState {
            step: 0,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            first_moment: zeros.clone(),
            second_moment: zeros,
        }
    }

    /// One Adam update with bias correction. Rejects non-finite gradients.
    pub fn apply(&mut self, graph: &mut NetworkGraph, grads: &Gradients) -> Result<()> {
        if !grads.all_finite() {
            return Err(Error::NonFinite("gradient passed to optimizer".into()));
        }
        let params = graph.params_mut();
        if params.len() != grads.0.len()
            || params.len() != self.first_moment.len()
            || params
                .iter()
                .zip(grads.0.iter())
                .any(|(p, g)| p.shape() != g.shape())
        {
            return Err(Error::ShapeMismatch(
                "optimizer state does not match parameters/gradients".into(),
            ));
        }
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        for ((param, grad), (m, v)) in params
            .into_iter()
            .zip(grads.0.iter())
            .zip(self.first_moment.iter_mut().zip(self.second_moment.iter_mut()))
        {
            let pd = param.data_mut();
            let gd = grad.data();
            let md = m.data_mut();
            let vd = v.data_mut();
            for i in 0..pd.len() {
                let g = gd[i];
                md[i] = self.beta1 * md[i] + (1.0 - self.beta1) * g;
                vd[i] = self.beta2 * vd[i] + (1.0 - self.beta2) * g * g;
                let m_hat = md[i] / bc1;
                let v_hat = vd[i] / bc2;
                pd[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
            }
        }
        Ok(())
    }
}
