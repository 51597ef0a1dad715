use rand::Rng;

use super::tensor::Tensor;
use crate::error::{Error, Result};

/// He-uniform weight initialization: U(-limit, limit) with limit = sqrt(6 / fan_in).
fn he_uniform(rng: &mut impl Rng, shape: Vec<usize>, fan_in: usize) -> Tensor {
    let limit = (6.0 / fan_in as f64).sqrt();
    let numel: usize = shape.iter().product();
    let data: Vec<f64> = (0..numel).map(|_| rng.random_range(-limit..limit)).collect();
    Tensor::new(shape, data).expect("init tensor")
}

/// 1-D convolution over a (channels, length) input.
#[derive(Debug, Clone)]
pub struct Conv1d {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    /// (out_channels, in_channels, kernel)
    pub weights: Tensor,
    /// (out_channels)
    pub bias: Tensor,
}

impl Conv1d {
    pub fn new(
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        stride: usize,
        padding: usize,
        rng: &mut impl Rng,
    ) -> Self {
        Conv1d {
            in_channels,
            out_channels,
            kernel,
            stride,
            padding,
            weights: he_uniform(
                rng,
                vec![out_channels, in_channels, kernel],
                in_channels * kernel,
            ),
            bias: Tensor::zeros(vec![out_channels]),
        }
    }

    pub fn output_len(&self, input_len: usize) -> Result<usize> {
        let padded = input_len + 2 * self.padding;
        if padded < self.kernel {
            return Err(Error::ShapeMismatch(format!(
                "conv1d kernel {} exceeds padded input length {}",
                self.kernel, padded
            )));
        }
        Ok((padded - self.kernel) / self.stride + 1)
    }

    fn padded_input(&self, input: &Tensor) -> Vec<f64> {
        let len = input.shape()[1];
        let padded_len = len + 2 * self.padding;
        let mut padded = vec![0.0; self.in_channels * padded_len];
        for c in 0..self.in_channels {
            let src = &input.data()[c * len..(c + 1) * len];
            padded[c * padded_len + self.padding..c * padded_len + self.padding + len]
                .copy_from_slice(src);
        }
        padded
    }

    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        if input.shape().len() != 2 || input.shape()[0] != self.in_channels {
            return Err(Error::ShapeMismatch(format!(
                "conv1d expects ({}, len) input, got {:?}",
                self.in_channels,
                input.shape()
            )));
        }
        let len = input.shape()[1];
        let out_len = self.output_len(len)?;
        let padded_len = len + 2 * self.padding;
        let padded = self.padded_input(input);
        let w = self.weights.data();
        let b = self.bias.data();
        let mut out = vec![0.0; self.out_channels * out_len];
        for o in 0..self.out_channels {
            for j in 0..out_len {
                let mut acc = b[o];
                let base = j * self.stride;
                for c in 0..self.in_channels {
                    let wrow = &w[(o * self.in_channels + c) * self.kernel..];
                    let xrow = &padded[c * padded_len + base..];
                    for k in 0..self.kernel {
                        acc += wrow[k] * xrow[k];
                    }
                }
                out[o * out_len + j] = acc;
            }
        }
        Tensor::new(vec![self.out_channels, out_len], out)
    }

    /// Returns (dW, dB, dInput).
    pub fn backward(&self, input: &Tensor, dout: &Tensor) -> Result<(Tensor, Tensor, Tensor)> {
        let len = input.shape()[1];
        let out_len = self.output_len(len)?;
        if dout.shape() != [self.out_channels, out_len] {
            return Err(Error::ShapeMismatch(format!(
                "conv1d backward expects ({}, {}) gradient, got {:?}",
                self.out_channels,
                out_len,
                dout.shape()
            )));
        }
        let padded_len = len + 2 * self.padding;
        let padded = self.padded_input(input);
        let w = self.weights.data();
        let g = dout.data();
        let mut dw = vec![0.0; self.weights.len()];
        let mut db = vec![0.0; self.out_channels];
        let mut dpad = vec![0.0; self.in_channels * padded_len];
        for o in 0..self.out_channels {
            for j in 0..out_len {
                let gij = g[o * out_len + j];
                db[o] += gij;
                let base = j * self.stride;
                for c in 0..self.in_channels {
                    let widx = (o * self.in_channels + c) * self.kernel;
                    let pidx = c * padded_len + base;
                    for k in 0..self.kernel {
                        dw[widx + k] += gij * padded[pidx + k];
                        dpad[pidx + k] += gij * w[widx + k];
                    }
                }
            }
        }
        let mut dx = vec![0.0; self.in_channels * len];
        for c in 0..self.in_channels {
            dx[c * len..(c + 1) * len].copy_from_slice(
                &dpad[c * padded_len + self.padding..c * padded_len + self.padding + len],
            );
        }
        Ok((
            Tensor::new(self.weights.shape().to_vec(), dw)?,
            Tensor::new(vec![self.out_channels], db)?,
            Tensor::new(vec![self.in_channels, len], dx)?,
        ))
    }

    pub fn describe(&self) -> String {
        format!(
            "conv1d({},{},k{},s{},p{})",
            self.in_channels, self.out_channels, self.kernel, self.stride, self.padding
        )
    }
}

/// Fully-connected layer over a flat input vector.
#[derive(Debug, Clone)]
pub struct Dense {
    pub in_dim: usize,
    pub out_dim: usize,
    /// (in_dim, out_dim)
    pub weights: Tensor,
    /// (out_dim)
    pub bias: Tensor,
}

impl Dense {
    pub fn new(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Self {
        Dense {
            in_dim,
            out_dim,
            weights: he_uniform(rng, vec![in_dim, out_dim], in_dim),
            bias: Tensor::zeros(vec![out_dim]),
        }
    }

    /// Identity-initialized square layer, used in tests.
    pub fn identity(dim: usize) -> Self {
        let mut w = vec![0.0; dim * dim];
        for i in 0..dim {
            w[i * dim + i] = 1.0;
        }
        Dense {
            in_dim: dim,
            out_dim: dim,
            weights: Tensor::new(vec![dim, dim], w).expect("identity weights"),
            bias: Tensor::zeros(vec![dim]),
        }
    }

    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        if input.len() != self.in_dim {
            return Err(Error::ShapeMismatch(format!(
                "dense expects {} inputs, got {:?}",
                self.in_dim,
                input.shape()
            )));
        }
        let x = input.data();
        let w = self.weights.data();
        let mut out = self.bias.data().to_vec();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let wrow = &w[i * self.out_dim..(i + 1) * self.out_dim];
            for (o, wo) in wrow.iter().enumerate() {
                out[o] += xi * wo;
            }
        }
        Tensor::new(vec![self.out_dim], out)
    }

    /// Returns (dW, dB, dInput).
    pub fn backward(&self, input: &Tensor, dout: &Tensor) -> Result<(Tensor, Tensor, Tensor)> {
        if dout.len() != self.out_dim {
            return Err(Error::ShapeMismatch(format!(
                "dense backward expects {} gradients, got {:?}",
                self.out_dim,
                dout.shape()
            )));
        }
        let x = input.data();
        let g = dout.data();
        let w = self.weights.data();
        let mut dw = vec![0.0; self.in_dim * self.out_dim];
        let mut dx = vec![0.0; self.in_dim];
        for i in 0..self.in_dim {
            let xi = x[i];
            let wrow = &w[i * self.out_dim..(i + 1) * self.out_dim];
            let dwrow = &mut dw[i * self.out_dim..(i + 1) * self.out_dim];
            let mut acc = 0.0;
            for o in 0..self.out_dim {
                dwrow[o] = xi * g[o];
                acc += wrow[o] * g[o];
            }
            dx[i] = acc;
        }
        Ok((
            Tensor::new(vec![self.in_dim, self.out_dim], dw)?,
            Tensor::new(vec![self.out_dim], g.to_vec())?,
            Tensor::new(vec![self.in_dim], dx)?,
        ))
    }

    pub fn describe(&self) -> String {
        format!("dense({},{})", self.in_dim, self.out_dim)
    }
}

/// State-value/advantage decomposition head: Q(s,a) = V(s) + A(s,a) - mean_a A(s,a).
#[derive(Debug, Clone)]
pub struct DuelingHead {
    pub value: Dense,
    pub advantage: Dense,
}

impl DuelingHead {
    pub fn new(hidden: usize, actions: usize, rng: &mut impl Rng) -> Self {
        DuelingHead {
            value: Dense::new(hidden, 1, rng),
            advantage: Dense::new(hidden, actions, rng),
        }
    }

    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        let v = self.value.forward(input)?;
        let a = self.advantage.forward(input)?;
        let mean_a = a.data().iter().sum::<f64>() / a.len() as f64;
        let q: Vec<f64> = a.data().iter().map(|ai| v.data()[0] + ai - mean_a).collect();
        Tensor::new(vec![a.len()], q)
    }

    /// Returns (param grads in [value w, value b, adv w, adv b] order, dInput).
    pub fn backward(&self, input: &Tensor, dout: &Tensor) -> Result<(Vec<Tensor>, Tensor)> {
        let actions = self.advantage.out_dim;
        if dout.len() != actions {
            return Err(Error::ShapeMismatch(format!(
                "dueling backward expects {} gradients, got {:?}",
                actions,
                dout.shape()
            )));
        }
        let g = dout.data();
        let gsum: f64 = g.iter().sum();
        let gmean = gsum / actions as f64;
        // dQ/dV = 1 for every action; dQ_i/dA_j = delta_ij - 1/|A|
        let dv = Tensor::from_vec(vec![gsum]);
        let da = Tensor::from_vec(g.iter().map(|gi| gi - gmean).collect());
        let (vw, vb, dx_v) = self.value.backward(input, &dv)?;
        let (aw, ab, dx_a) = self.advantage.backward(input, &da)?;
        let mut dx = dx_v;
        dx.add_scaled(&dx_a, 1.0);
        Ok((vec![vw, vb, aw, ab], dx))
    }

    pub fn describe(&self) -> String {
        format!("dueling({},{})", self.value.in_dim, self.advantage.out_dim)
    }
}

/// Per-asset scoring head for the allocator policy: a shared stack of 1-D
/// convolutions collapses each asset's (features, window) slice to a single
/// score. Weight sharing across the asset axis keeps the head agnostic to the
/// number of assets. ReLU follows every convolution except the last.
#[derive(Debug, Clone)]
pub struct AllocationHead {
    pub features: usize,
    pub window: usize,
    pub convs: Vec<Conv1d>,
}

impl AllocationHead {
    /// Standard three-stage stack: k3 conv to `channels`, a window-collapsing
    /// conv, then a 1x1 conv to the scalar score.
    pub fn new(features: usize, window: usize, channels: usize, rng: &mut impl Rng) -> Result<Self> {
        if window < 3 {
            return Err(Error::ShapeMismatch(format!(
                "allocation head needs window >= 3, got {window}"
            )));
        }
        let convs = vec![
            Conv1d::new(features, channels, 3, 1, 0, rng),
            Conv1d::new(channels, channels, window - 2, 1, 0, rng),
            Conv1d::new(channels, 1, 1, 1, 0, rng),
        ];
        Ok(AllocationHead {
            features,
            window,
            convs,
        })
    }

    fn check_input(&self, input: &Tensor) -> Result<(usize, usize, usize)> {
        let s = input.shape();
        if s.len() != 3 || s[0] != self.features || s[2] != self.window {
            return Err(Error::ShapeMismatch(format!(
                "allocation head expects ({}, assets, {}) input, got {:?}",
                self.features, self.window, s
            )));
        }
        Ok((s[0], s[1], s[2]))
    }

    fn asset_slice(&self, input: &Tensor, asset: usize, assets: usize) -> Tensor {
        let n = self.window;
        let mut slice = vec![0.0; self.features * n];
        for f in 0..self.features {
            let src = (f * assets + asset) * n;
            slice[f * n..(f + 1) * n].copy_from_slice(&input.data()[src..src + n]);
        }
        Tensor::new(vec![self.features, n], slice).expect("asset slice")
    }

    fn stack_forward(&self, slice: &Tensor) -> Result<(f64, Vec<Tensor>)> {
        // Saves each conv's input for the backward pass.
        let mut inputs = Vec::with_capacity(self.convs.len());
        let mut x = slice.clone();
        for (i, conv) in self.convs.iter().enumerate() {
            inputs.push(x.clone());
            let mut y = conv.forward(&x)?;
            if i + 1 < self.convs.len() {
                for v in y.data_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            x = y;
        }
        if x.len() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "allocation stack must end in a scalar, got {:?}",
                x.shape()
            )));
        }
        Ok((x.data()[0], inputs))
    }

    pub fn forward(&self, input: &Tensor) -> Result<(Tensor, Vec<Vec<Tensor>>)> {
        let (_, assets, _) = self.check_input(input)?;
        let mut scores = Vec::with_capacity(assets);
        let mut caches = Vec::with_capacity(assets);
        for m in 0..assets {
            let slice = self.asset_slice(input, m, assets);
            let (score, inputs) = self.stack_forward(&slice)?;
            scores.push(score);
            caches.push(inputs);
        }
        Ok((Tensor::from_vec(scores), caches))
    }

    /// Returns (param grads as [w, b] per conv, dInput). Shared weights
    /// accumulate gradient contributions across assets.
    pub fn backward(
        &self,
        input: &Tensor,
        caches: &[Vec<Tensor>],
        dout: &Tensor,
    ) -> Result<(Vec<Tensor>, Tensor)> {
        let (_, assets, _) = self.check_input(input)?;
        if dout.len() != assets {
            return Err(Error::ShapeMismatch(format!(
                "allocation backward expects {} gradients, got {:?}",
                assets,
                dout.shape()
            )));
        }
        let mut grads: Vec<Tensor> = self
            .convs
            .iter()
            .flat_map(|c| [Tensor::zeros(c.weights.shape().to_vec()), Tensor::zeros(c.bias.shape().to_vec())])
            .collect();
        let mut dinput = Tensor::zeros(input.shape().to_vec());
        let n = self.window;
        for m in 0..assets {
            let mut g = Tensor::new(vec![1, 1], vec![dout.data()[m]])?;
            for (i, conv) in self.convs.iter().enumerate().rev() {
                let conv_in = &caches[m][i];
                // ReLU sits after every conv except the last: its backward
                // masks the gradient flowing into that conv's output.
                if i + 1 < self.convs.len() {
                    let pre = conv.forward(conv_in)?;
                    let masked: Vec<f64> = pre
                        .data()
                        .iter()
                        .zip(g.data())
                        .map(|(p, gi)| if *p > 0.0 { *gi } else { 0.0 })
                        .collect();
                    g = Tensor::new(pre.shape().to_vec(), masked)?;
                }
                let (dw, db, dx) = conv.backward(conv_in, &g)?;
                grads[2 * i].add_scaled(&dw, 1.0);
                grads[2 * i + 1].add_scaled(&db, 1.0);
                g = dx;
            }
            // Scatter the per-asset input gradient back into the 3-D layout.
            for f in 0..self.features {
                let dst = (f * assets + m) * n;
                for j in 0..n {
                    dinput.data_mut()[dst + j] += g.data()[f * n + j];
                }
            }
        }
        Ok((grads, dinput))
    }

    pub fn describe(&self) -> String {
        let inner: Vec<String> = self.convs.iter().map(|c| c.describe()).collect();
        format!("alloc({},w{};{})", self.features, self.window, inner.join(";"))
    }
}

/// One layer of a sequential network.
#[derive(Debug, Clone)]
pub enum Layer {
    Conv1d(Conv1d),
    Dense(Dense),
    Relu,
    Flatten,
    /// Appends the auxiliary input vector to the (flattened) main path.
    ConcatAux,
    /// Shape-preserving inner stack with a skip connection: out = inner(x) + x.
    Residual(Vec<Layer>),
    Dueling(DuelingHead),
    Allocation(AllocationHead),
}

/// Per-layer state saved by the forward pass for the backward pass.
#[derive(Debug, Clone)]
pub enum LayerCache {
    Conv1d { input: Tensor },
    Dense { input: Tensor },
    Relu { input: Tensor },
    Flatten { in_shape: Vec<usize> },
    ConcatAux { main_len: usize },
    Residual { inner: Vec<LayerCache> },
    Dueling { input: Tensor },
    Allocation { input: Tensor, per_asset: Vec<Vec<Tensor>> },
}

impl Layer {
    pub fn forward(&self, input: &Tensor, aux: Option<&Tensor>) -> Result<(Tensor, LayerCache)> {
        match self {
            Layer::Conv1d(c) => Ok((
                c.forward(input)?,
                LayerCache::Conv1d {
                    input: input.clone(),
                },
            )),
            Layer::Dense(d) => Ok((
                d.forward(input)?,
                LayerCache::Dense {
                    input: input.clone(),
                },
            )),
            Layer::Relu => {
                let mut out = input.clone();
                for v in out.data_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                Ok((
                    out,
                    LayerCache::Relu {
                        input: input.clone(),
                    },
                ))
            }
            Layer::Flatten => Ok((
                input.reshape(vec![input.len()])?,
                LayerCache::Flatten {
                    in_shape: input.shape().to_vec(),
                },
            )),
            Layer::ConcatAux => {
                let aux = aux.ok_or_else(|| {
                    Error::ShapeMismatch("concat layer requires an auxiliary input".into())
                })?;
                let mut data = input.data().to_vec();
                data.extend_from_slice(aux.data());
                Ok((
                    Tensor::from_vec(data),
                    LayerCache::ConcatAux {
                        main_len: input.len(),
                    },
                ))
            }
            Layer::Residual(inner) => {
                let mut x = input.clone();
                let mut caches = Vec::with_capacity(inner.len());
                for layer in inner {
                    let (y, cache) = layer.forward(&x, aux)?;
                    caches.push(cache);
                    x = y;
                }
                if x.shape() != input.shape() {
                    return Err(Error::ShapeMismatch(format!(
                        "residual block must preserve shape: {:?} -> {:?}",
                        input.shape(),
                        x.shape()
                    )));
                }
                x.add_scaled(input, 1.0);
                Ok((x, LayerCache::Residual { inner: caches }))
            }
            Layer::Dueling(h) => Ok((
                h.forward(input)?,
                LayerCache::Dueling {
                    input: input.clone(),
                },
            )),
            Layer::Allocation(h) => {
                let (out, per_asset) = h.forward(input)?;
                Ok((
                    out,
                    LayerCache::Allocation {
                        input: input.clone(),
                        per_asset,
                    },
                ))
            }
        }
    }

    /// Returns (param grads for this layer, dInput).
    pub fn backward(&self, cache: &LayerCache, dout: &Tensor) -> Result<(Vec<Tensor>, Tensor)> {
        match (self, cache) {
            (Layer::Conv1d(c), LayerCache::Conv1d { input }) => {
                let (dw, db, dx) = c.backward(input, dout)?;
                Ok((vec![dw, db], dx))
            }
            (Layer::Dense(d), LayerCache::Dense { input }) => {
                let (dw, db, dx) = d.backward(input, dout)?;
                Ok((vec![dw, db], dx))
            }
            (Layer::Relu, LayerCache::Relu { input }) => {
                let dx: Vec<f64> = input
                    .data()
                    .iter()
                    .zip(dout.data())
                    .map(|(x, g)| if *x > 0.0 { *g } else { 0.0 })
                    .collect();
                Ok((vec![], Tensor::new(input.shape().to_vec(), dx)?))
            }
            (Layer::Flatten, LayerCache::Flatten { in_shape }) => {
                Ok((vec![], dout.reshape(in_shape.clone())?))
            }
            (Layer::ConcatAux, LayerCache::ConcatAux { main_len }) => {
                // Gradients w.r.t. the auxiliary input are not propagated:
                // the aux path carries raw features with no parameters.
                let dx = dout.data()[..*main_len].to_vec();
                Ok((vec![], Tensor::from_vec(dx)))
            }
            (Layer::Residual(inner), LayerCache::Residual { inner: caches }) => {
                let mut g = dout.clone();
                let mut grads_rev: Vec<Vec<Tensor>> = Vec::with_capacity(inner.len());
                for (layer, cache) in inner.iter().zip(caches.iter()).rev() {
                    let (pg, dx) = layer.backward(cache, &g)?;
                    grads_rev.push(pg);
                    g = dx;
                }
                // Skip connection adds the output gradient directly.
                g.add_scaled(dout, 1.0);
                let grads: Vec<Tensor> = grads_rev.into_iter().rev().flatten().collect();
                Ok((grads, g))
            }
            (Layer::Dueling(h), LayerCache::Dueling { input }) => h.backward(input, dout),
            (Layer::Allocation(h), LayerCache::Allocation { input, per_asset }) => {
                h.backward(input, per_asset, dout)
            }
            _ => Err(Error::ShapeMismatch(
                "layer/cache mismatch in backward pass".into(),
            )),
        }
    }

    pub fn params(&self) -> Vec<&Tensor> {
        match self {
            Layer::Conv1d(c) => vec![&c.weights, &c.bias],
            Layer::Dense(d) => vec![&d.weights, &d.bias],
            Layer::Relu | Layer::Flatten | Layer::ConcatAux => vec![],
            Layer::Residual(inner) => inner.iter().flat_map(|l| l.params()).collect(),
            Layer::Dueling(h) => vec![
                &h.value.weights,
                &h.value.bias,
                &h.advantage.weights,
                &h.advantage.bias,
            ],
            Layer::Allocation(h) => h
                .convs
                .iter()
                .flat_map(|c| [&c.weights, &c.bias])
                .collect(),
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut Tensor> {
        match self {
            Layer::Conv1d(c) => vec![&mut c.weights, &mut c.bias],
            Layer::Dense(d) => vec![&mut d.weights, &mut d.bias],
            Layer::Relu | Layer::Flatten | Layer::ConcatAux => vec![],
            Layer::Residual(inner) => inner.iter_mut().flat_map(|l| l.params_mut()).collect(),
            Layer::Dueling(h) => vec![
                &mut h.value.weights,
                &mut h.value.bias,
                &mut h.advantage.weights,
                &mut h.advantage.bias,
            ],
            Layer::Allocation(h) => h
                .convs
                .iter_mut()
                .flat_map(|c| [&mut c.weights, &mut c.bias])
                .collect(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Layer::Conv1d(c) => c.describe(),
            Layer::Dense(d) => d.describe(),
            Layer::Relu => "relu".into(),
            Layer::Flatten => "flatten".into(),
            Layer::ConcatAux => "concat_aux".into(),
            Layer::Residual(inner) => {
                let parts: Vec<String> = inner.iter().map(|l| l.describe()).collect();
                format!("res[{}]", parts.join(";"))
            }
            Layer::Dueling(h) => h.describe(),
            Layer::Allocation(h) => h.describe(),
        }
    }
}

/// Shape-preserving conv/relu/conv residual block with odd kernels.
pub fn residual_conv_block(channels: usize, kernel: usize, rng: &mut impl Rng) -> Result<Layer> {
    if kernel % 2 == 0 {
        return Err(Error::ShapeMismatch(format!(
            "residual conv block needs an odd kernel, got {kernel}"
        )));
    }
    let pad = (kernel - 1) / 2;
    Ok(Layer::Residual(vec![
        Layer::Conv1d(Conv1d::new(channels, channels, kernel, 1, pad, rng)),
        Layer::Relu,
        Layer::Conv1d(Conv1d::new(channels, channels, kernel, 1, pad, rng)),
    ]))
}
