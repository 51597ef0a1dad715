//! Minimal differentiable computation core: tensors, 1-D convolution,
//! residual blocks, dense layers, dueling and per-asset allocation heads,
//! reverse-mode gradients, Adam, and versioned checkpoints.
//!
//! Everything is 64-bit floats; the accounting tolerances elsewhere in the
//! crate depend on it and the models are small enough not to care.

pub mod adam;
pub mod checkpoint;
pub mod func;
pub mod graph;
pub mod layers;
pub mod tensor;

pub use adam::AdamState;
pub use checkpoint::{Checkpoint, CheckpointMeta};
pub use func::{gaussian_log_prob, gaussian_log_prob_grad_mu, softmax, softmax_backward};
pub use graph::{ForwardPass, Gradients, NetInput, NetworkGraph};
pub use layers::{residual_conv_block, AllocationHead, Conv1d, Dense, DuelingHead, Layer};
pub use tensor::Tensor;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tensor_rejects_shape_mismatch_and_nonfinite() {
        assert!(Tensor::new(vec![2, 2], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Tensor::new(vec![2], vec![1.0, f64::NAN]).is_err());
        assert!(Tensor::new(vec![2], vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn relu_matches_definition() {
        let (out, _) = Layer::Relu
            .forward(&Tensor::from_vec(vec![-1.0, 0.0, 2.0]), None)
            .unwrap();
        assert_eq!(out.data(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn identity_dense_is_identity() {
        let d = Dense::identity(4);
        let x = Tensor::from_vec(vec![0.5, -1.5, 2.0, 0.0]);
        let y = d.forward(&x).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn dense_weight_gradient_is_outer_product_for_sum_loss() {
        let d = Dense::identity(3);
        let x = Tensor::from_vec(vec![1.0, 2.0, 3.0]);
        let ones = Tensor::from_vec(vec![1.0; 3]);
        let (dw, db, _) = d.backward(&x, &ones).unwrap();
        // dW[i][o] = x[i] * 1
        assert_eq!(
            dw.data(),
            &[1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0]
        );
        assert_eq!(db.data(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn one_hot_conv_kernel_shifts_the_sequence() {
        // Direct-summation oracle: out[j] = sum_k w[k] * x[j + k], so a kernel
        // that is one-hot at position k copies x shifted left by k.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut conv = Conv1d::new(1, 1, 3, 1, 0, &mut rng);
        conv.weights = Tensor::new(vec![1, 1, 3], vec![0.0, 0.0, 1.0]).unwrap();
        conv.bias = Tensor::zeros(vec![1]);
        let x = Tensor::new(vec![1, 6], vec![5.0, 1.0, 4.0, 2.0, 9.0, 3.0]).unwrap();
        let y = conv.forward(&x).unwrap();
        assert_eq!(y.shape(), &[1, 4]);
        assert_eq!(y.data(), &[4.0, 2.0, 9.0, 3.0]);

        // Cross-check an arbitrary kernel against the direct summation.
        conv.weights = Tensor::new(vec![1, 1, 3], vec![0.25, -1.0, 0.5]).unwrap();
        let y = conv.forward(&x).unwrap();
        for j in 0..4 {
            let direct: f64 = (0..3).map(|k| conv.weights.data()[k] * x.data()[j + k]).sum();
            assert!((y.data()[j] - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn dueling_head_with_zero_advantage_returns_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut head = DuelingHead::new(4, 3, &mut rng);
        head.advantage.weights = Tensor::zeros(vec![4, 3]);
        head.advantage.bias = Tensor::zeros(vec![3]);
        let x = Tensor::from_vec(vec![0.3, -0.4, 1.2, 0.9]);
        let v = head.value.forward(&x).unwrap().data()[0];
        let q = head.forward(&x).unwrap();
        for qi in q.data() {
            assert!((qi - v).abs() < 1e-12);
        }
    }

    #[test]
    fn dueling_head_is_invariant_to_constant_advantage_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut head = DuelingHead::new(5, 3, &mut rng);
        let x = Tensor::from_vec(vec![0.1, 0.7, -0.2, 0.4, -0.9]);
        let q0 = head.forward(&x).unwrap();
        for b in head.advantage.bias.data_mut() {
            *b += 17.5;
        }
        let q1 = head.forward(&x).unwrap();
        for (a, b) in q0.data().iter().zip(q1.data()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn softmax_is_positive_normalized_and_shift_stable() {
        let x = vec![50.0, -50.0, 0.0, 12.5];
        let y = softmax(&x);
        assert!(y.iter().all(|v| *v > 0.0));
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let shifted: Vec<f64> = x.iter().map(|v| v + 30.0).collect();
        let y2 = softmax(&shifted);
        for (a, b) in y.iter().zip(&y2) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_logits_give_uniform_softmax() {
        let y = softmax(&[2.5, 2.5, 2.5, 2.5]);
        for v in &y {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_log_prob_matches_closed_form() {
        let x = [1.0, 2.0];
        let mu = [0.5, 2.5];
        let sigma = 0.3;
        let lp = gaussian_log_prob(&x, &mu, sigma).unwrap();
        let expected: f64 = x
            .iter()
            .zip(&mu)
            .map(|(xi, mi)| {
                let z: f64 = (xi - mi) / sigma;
                -0.5 * (2.0 * std::f64::consts::PI).ln() - sigma.ln() - 0.5 * z * z
            })
            .sum();
        assert!((lp - expected).abs() < 1e-12);
        assert!(gaussian_log_prob(&x, &mu, 0.0).is_err());
    }

    #[test]
    fn forward_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let graph = NetworkGraph::new(vec![
            Layer::Conv1d(Conv1d::new(2, 4, 3, 1, 1, &mut rng)),
            Layer::Relu,
            Layer::Flatten,
            Layer::Dense(Dense::new(24, 3, &mut rng)),
        ]);
        let input = NetInput::plain(
            Tensor::new(vec![2, 6], (0..12).map(|i| i as f64 * 0.1 - 0.5).collect()).unwrap(),
        );
        let a = graph.forward(&input).unwrap();
        let b = graph.forward(&input).unwrap();
        assert_eq!(a.output.data(), b.output.data());
    }

    #[test]
    fn zero_output_gradient_gives_zero_parameter_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let graph = NetworkGraph::new(vec![
            Layer::Flatten,
            Layer::Dense(Dense::new(6, 4, &mut rng)),
            Layer::Relu,
            Layer::Dense(Dense::new(4, 2, &mut rng)),
        ]);
        let input = NetInput::plain(Tensor::from_vec(vec![0.3; 6]));
        let pass = graph.forward(&input).unwrap();
        let (grads, _) = graph.backward(&pass, &Tensor::zeros(vec![2])).unwrap();
        for g in &grads.0 {
            assert!(g.data().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn adam_zero_gradient_leaves_parameters_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut graph = NetworkGraph::new(vec![Layer::Dense(Dense::new(3, 2, &mut rng))]);
        let before: Vec<f64> = graph.params()[0].data().to_vec();
        let mut adam = AdamState::new(&graph, 0.01);
        let grads = Gradients::zeros_like(&graph);
        adam.apply(&mut graph, &grads).unwrap();
        assert_eq!(adam.step, 1);
        assert_eq!(graph.params()[0].data(), &before[..]);
    }

    #[test]
    fn adam_first_step_approximates_signed_learning_rate() {
        // With constant gradient g and bias correction, the very first Adam
        // update is -lr * g / (|g| + eps) which is about -lr * sign(g).
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut graph = NetworkGraph::new(vec![Layer::Dense(Dense::new(2, 1, &mut rng))]);
        let before: Vec<f64> = graph.params()[0].data().to_vec();
        let mut adam = AdamState::new(&graph, 0.05);
        let grads = Gradients(vec![
            Tensor::new(vec![2, 1], vec![3.7, -0.004]).unwrap(),
            Tensor::zeros(vec![1]),
        ]);
        adam.apply(&mut graph, &grads).unwrap();
        let after = graph.params()[0].data();
        assert!((after[0] - (before[0] - 0.05)).abs() < 1e-6);
        assert!((after[1] - (before[1] + 0.05)).abs() < 1e-5);
    }

    #[test]
    fn adam_rejects_nonfinite_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut graph = NetworkGraph::new(vec![Layer::Dense(Dense::new(2, 1, &mut rng))]);
        let mut adam = AdamState::new(&graph, 0.05);
        let mut g = Tensor::zeros(vec![2, 1]);
        g.data_mut()[0] = f64::NAN;
        let grads = Gradients(vec![g, Tensor::zeros(vec![1])]);
        assert!(adam.apply(&mut graph, &grads).is_err());
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join(format!("ckpt_test_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.ckpt");

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let graph = NetworkGraph::new(vec![
            Layer::Conv1d(Conv1d::new(2, 3, 3, 1, 1, &mut rng)),
            Layer::Flatten,
            Layer::Dense(Dense::new(12, 2, &mut rng)),
        ]);
        let adam = AdamState::new(&graph, 0.001);
        let meta = CheckpointMeta { seed: 42, epoch: 7 };
        checkpoint::save(&graph, Some(&adam), meta, &path).unwrap();

        let mut restored = NetworkGraph::new(vec![
            Layer::Conv1d(Conv1d::new(2, 3, 3, 1, 1, &mut rng)),
            Layer::Flatten,
            Layer::Dense(Dense::new(12, 2, &mut rng)),
        ]);
        let (meta2, opt) = checkpoint::load_into(&path, &mut restored).unwrap();
        assert_eq!(meta, meta2);
        assert!(opt.is_some());
        for (a, b) in graph.params().iter().zip(restored.params()) {
            assert_eq!(a.data(), b.data());
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn checkpoint_rejects_different_topology() {
        let dir = std::env::temp_dir().join(format!("ckpt_test_topo_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("topo.ckpt");

        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let graph = NetworkGraph::new(vec![Layer::Dense(Dense::new(4, 2, &mut rng))]);
        checkpoint::save(&graph, None, CheckpointMeta::default(), &path).unwrap();

        let mut other = NetworkGraph::new(vec![Layer::Dense(Dense::new(4, 3, &mut rng))]);
        let err = checkpoint::load_into(&path, &mut other);
        assert!(matches!(err, Err(crate::error::Error::Checkpoint(_))));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn checkpoint_without_optimizer_restores_parameters_only() {
        let dir = std::env::temp_dir().join(format!("ckpt_test_noopt_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("noopt.ckpt");

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let graph = NetworkGraph::new(vec![Layer::Dense(Dense::new(3, 3, &mut rng))]);
        checkpoint::save(&graph, None, CheckpointMeta::default(), &path).unwrap();
        let mut restored = NetworkGraph::new(vec![Layer::Dense(Dense::new(3, 3, &mut rng))]);
        let (_, opt) = checkpoint::load_into(&path, &mut restored).unwrap();
        assert!(opt.is_none());
        for (a, b) in graph.params().iter().zip(restored.params()) {
            assert_eq!(a.data(), b.data());
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
