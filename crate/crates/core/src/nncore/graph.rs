use super::layers::{Layer, LayerCache};
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Network input: a main tensor plus an optional auxiliary vector consumed
/// by a `ConcatAux` layer (heterogeneous features that join after the
/// convolutional trunk).
#[derive(Debug, Clone)]
pub struct NetInput {
    pub main: Tensor,
    pub aux: Option<Tensor>,
}

impl NetInput {
    pub fn plain(main: Tensor) -> Self {
        NetInput { main, aux: None }
    }

    pub fn with_aux(main: Tensor, aux: Tensor) -> Self {
        NetInput {
            main,
            aux: Some(aux),
        }
    }
}

/// Parameter gradients, aligned with `NetworkGraph::params()` order.
#[derive(Debug, Clone)]
pub struct Gradients(pub Vec<Tensor>);

impl Gradients {
    pub fn zeros_like(graph: &NetworkGraph) -> Self {
        Gradients(
            graph
                .params()
                .iter()
                .map(|p| Tensor::zeros(p.shape().to_vec()))
                .collect(),
        )
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        debug_assert_eq!(self.0.len(), other.0.len());
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            a.add_scaled(b, 1.0);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for g in self.0.iter_mut() {
            g.scale(factor);
        }
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|g| g.all_finite())
    }
}

/// Activations cached by a forward pass, consumed by `backward`.
#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub output: Tensor,
    caches: Vec<LayerCache>,
}

/// An ordered stack of layers with their parameters.
#[derive(Debug, Clone)]
pub struct NetworkGraph {
    pub layers: Vec<Layer>,
}

impl NetworkGraph {
    pub fn new(layers: Vec<Layer>) -> Self {
        NetworkGraph { layers }
    }

    /// Deterministic forward pass; caches per-layer activations.
    pub fn forward(&self, input: &NetInput) -> Result<ForwardPass> {
        if !input.main.all_finite() || input.aux.as_ref().is_some_and(|a| !a.all_finite()) {
            return Err(Error::NonFinite("network input".into()));
        }
        let mut x = input.main.clone();
        let mut caches = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            let (y, cache) = layer.forward(&x, input.aux.as_ref())?;
            if !y.all_finite() {
                return Err(Error::NonFinite(format!(
                    "output of layer {} ({})",
                    i,
                    layer.describe()
                )));
            }
            caches.push(cache);
            x = y;
        }
        Ok(ForwardPass { output: x, caches })
    }

    /// Reverse-mode gradients for every parameter given the gradient of the
    /// loss w.r.t. the network output. Also returns the input gradient.
    pub fn backward(&self, pass: &ForwardPass, out_grad: &Tensor) -> Result<(Gradients, Tensor)> {
        if pass.caches.len() != self.layers.len() {
            return Err(Error::ShapeMismatch(
                "forward cache does not match this graph".into(),
            ));
        }
        if out_grad.shape() != pass.output.shape() {
            return Err(Error::ShapeMismatch(format!(
                "output gradient shape {:?} does not match output {:?}",
                out_grad.shape(),
                pass.output.shape()
            )));
        }
        let mut g = out_grad.clone();
        let mut grads_rev: Vec<Vec<Tensor>> = Vec::with_capacity(self.layers.len());
        for (layer, cache) in self.layers.iter().zip(pass.caches.iter()).rev() {
            let (pg, dx) = layer.backward(cache, &g)?;
            grads_rev.push(pg);
            g = dx;
        }
        let grads: Vec<Tensor> = grads_rev.into_iter().rev().flatten().collect();
        Ok((Gradients(grads), g))
    }

    pub fn params(&self) -> Vec<&Tensor> {
        self.layers.iter().flat_map(|l| l.params()).collect()
    }

    pub fn params_mut(&mut self) -> Vec<&mut Tensor> {
        self.layers.iter_mut().flat_map(|l| l.params_mut()).collect()
    }

    /// Total scalar parameter count.
    pub fn param_count(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }

    /// Copies parameter values from another graph with identical topology.
    pub fn copy_params_from(&mut self, other: &NetworkGraph) -> Result<()> {
        if self.topology() != other.topology() {
            return Err(Error::ShapeMismatch(
                "cannot copy parameters between different topologies".into(),
            ));
        }
        let src: Vec<Tensor> = other.params().into_iter().cloned().collect();
        for (dst, s) in self.params_mut().into_iter().zip(src) {
            *dst = s;
        }
        Ok(())
    }

    /// Canonical topology string, hashed into checkpoint digests.
    pub fn topology(&self) -> String {
        self.layers
            .iter()
            .map(|l| l.describe())
            .collect::<Vec<_>>()
            .join("|")
    }
}
