//! Two-layer GNN graph classifiers with hand-derived backpropagation.
//!
//! Four architectures share one skeleton: layer 1, ReLU, layer 2, mean
//! readout, linear head, softmax. Graph layers carry no bias terms; the
//! classifier head and the GIN per-layer MLPs do. Training is full batch:
//! per-graph cross-entropy gradients are summed over the training set and
//! applied with one Adam step per epoch, so a fixed seed reproduces the
//! trained weights bit for bit.

mod checkpoint;
pub mod layers;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointMeta};
pub use layers::{gat_layer, gcn_layer, gin_layer, readout_mean, sage_layer, GinMlp};

use crate::error::{Error, Result};
use crate::tensor::{AdamState, Matrix, Rng};
use crate::tud::Graph;
use layers::Neighborhood;
use serde::{Deserialize, Serialize};
use std::fmt;

/// LeakyReLU slope for GAT attention logits.
pub const GAT_SLOPE: f64 = 0.2;

/// Architecture tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arch {
    Gcn,
    Gat,
    Sage,
    Gin,
}

impl Arch {
    pub const ALL: [Arch; 4] = [Arch::Gcn, Arch::Gat, Arch::Sage, Arch::Gin];

    pub fn as_str(&self) -> &'static str {
        match self {
            Arch::Gcn => "gcn",
            Arch::Gat => "gat",
            Arch::Sage => "sage",
            Arch::Gin => "gin",
        }
    }

    pub fn parse(s: &str) -> Result<Arch> {
        match s.to_ascii_lowercase().as_str() {
            "gcn" => Ok(Arch::Gcn),
            "gat" => Ok(Arch::Gat),
            "sage" | "graphsage" => Ok(Arch::Sage),
            "gin" => Ok(Arch::Gin),
            other => Err(Error::Config(format!("unknown architecture: {other}"))),
        }
    }
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Training knobs. Defaults: 3500 epochs, lr 0.005, hidden 32 — enough
/// full-batch Adam steps to push these small models into the memorization
/// regime the attack exploits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
    pub hidden_dim: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 3500,
            lr: 0.005,
            seed: 0,
            hidden_dim: 32,
        }
    }
}

/// A classifier output. `label` is the argmax of `probs` with ties broken
/// toward the lowest class index. The probability vector exists for the
/// probability-based baselines; the label-only attack path never sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub probs: Vec<f64>,
}

/// Per-epoch training record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_acc: f64,
    pub loss: f64,
}

/// A 2-layer GNN classifier. Parameters live in `blocks`, in a fixed
/// per-architecture order (see [`GnnModel::param_blocks`]), which is the
/// order the optimizer, gradient checks, and checkpoints all use.
#[derive(Debug, Clone, PartialEq)]
pub struct GnnModel {
    arch: Arch,
    feature_dim: usize,
    hidden_dim: usize,
    class_count: usize,
    blocks: Vec<Matrix>,
}

fn block_names(arch: Arch) -> &'static [&'static str] {
    match arch {
        Arch::Gcn | Arch::Sage => &["layer1.w", "layer2.w", "head.w", "head.b"],
        Arch::Gat => &[
            "layer1.w", "layer1.a", "layer2.w", "layer2.a", "head.w", "head.b",
        ],
        Arch::Gin => &[
            "layer1.mlp.w1",
            "layer1.mlp.b1",
            "layer1.mlp.w2",
            "layer1.mlp.b2",
            "layer1.eps",
            "layer2.mlp.w1",
            "layer2.mlp.b1",
            "layer2.mlp.w2",
            "layer2.mlp.b2",
            "layer2.eps",
            "head.w",
            "head.b",
        ],
    }
}

fn glorot(rng: &mut Rng, fan_in: usize, fan_out: usize, rows: usize, cols: usize) -> Matrix {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    rng.uniform(-limit, limit, rows, cols)
        .expect("glorot limit is positive")
}

impl GnnModel {
    /// Fresh model with Glorot-initialized weights, zero biases, zero eps.
    pub fn init(
        arch: Arch,
        feature_dim: usize,
        class_count: usize,
        hidden_dim: usize,
        seed: u64,
    ) -> GnnModel {
        assert!(feature_dim > 0 && class_count > 0 && hidden_dim > 0);
        let mut rng = Rng::new(seed);
        let h = hidden_dim;
        let dims = [feature_dim, h]; // per-layer input width
        let mut blocks = Vec::new();
        for l in 0..2 {
            let d_in = dims[l];
            match arch {
                Arch::Gcn | Arch::Sage => {
                    blocks.push(glorot(&mut rng, d_in, h, d_in, h));
                }
                Arch::Gat => {
                    blocks.push(glorot(&mut rng, d_in, h, d_in, h));
                    blocks.push(glorot(&mut rng, 2 * h, 1, 1, 2 * h));
                }
                Arch::Gin => {
                    blocks.push(glorot(&mut rng, d_in, h, d_in, h));
                    blocks.push(Matrix::zeros(1, h));
                    blocks.push(glorot(&mut rng, h, h, h, h));
                    blocks.push(Matrix::zeros(1, h));
                    blocks.push(Matrix::zeros(1, 1)); // eps
                }
            }
        }
        blocks.push(glorot(&mut rng, h, class_count, h, class_count));
        blocks.push(Matrix::zeros(1, class_count));
        GnnModel {
            arch,
            feature_dim,
            hidden_dim,
            class_count,
            blocks,
        }
    }

    pub fn arch(&self) -> Arch {
        self.arch
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Named trainable parameter blocks in optimizer order.
    pub fn param_blocks(&self) -> Vec<(&'static str, &Matrix)> {
        block_names(self.arch)
            .iter()
            .zip(&self.blocks)
            .map(|(&n, m)| (n, m))
            .collect()
    }

    pub fn param_shapes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(Matrix::shape).collect()
    }

    /// Replace one parameter block (shape-checked). Used by gradient checks.
    pub fn set_param_block(&mut self, index: usize, value: Matrix) -> Result<()> {
        let current = self
            .blocks
            .get(index)
            .ok_or_else(|| Error::Config(format!("no parameter block {index}")))?;
        if current.shape() != value.shape() {
            return Err(Error::Shape {
                op: "set_param_block",
                lhs: current.shape(),
                rhs: value.shape(),
            });
        }
        self.blocks[index] = value;
        Ok(())
    }

    pub(crate) fn from_parts(
        arch: Arch,
        feature_dim: usize,
        hidden_dim: usize,
        class_count: usize,
        blocks: Vec<Matrix>,
    ) -> Result<GnnModel> {
        let expected = block_names(arch).len();
        if blocks.len() != expected {
            return Err(Error::Checkpoint(format!(
                "{arch} expects {expected} blocks, got {}",
                blocks.len()
            )));
        }
        Ok(GnnModel {
            arch,
            feature_dim,
            hidden_dim,
            class_count,
            blocks,
        })
    }

    fn gin_mlp(&self, layer: usize) -> GinMlp<'_> {
        let base = 5 * layer;
        GinMlp {
            w1: &self.blocks[base],
            b1: &self.blocks[base + 1],
            w2: &self.blocks[base + 2],
            b2: &self.blocks[base + 3],
        }
    }

    fn layer_forward(
        &self,
        layer: usize,
        h: &Matrix,
        nb: &Neighborhood,
    ) -> Result<(Matrix, ArchCache)> {
        match self.arch {
            Arch::Gcn => {
                let u = h.matmul(&self.blocks[layer])?;
                Ok((layers::propagate_gcn(nb, &u), ArchCache::None))
            }
            Arch::Sage => {
                let u = h.matmul(&self.blocks[layer])?;
                Ok((layers::propagate_sage(nb, &u), ArchCache::None))
            }
            Arch::Gat => {
                let w = &self.blocks[2 * layer];
                let a = &self.blocks[2 * layer + 1];
                let (out, cache) = layers::gat_forward_cached(h, nb, w, a, GAT_SLOPE)?;
                Ok((out, ArchCache::Gat(cache)))
            }
            Arch::Gin => {
                let eps = self.blocks[5 * layer + 4].get(0, 0);
                let (out, cache) = layers::gin_forward_cached(h, nb, eps, &self.gin_mlp(layer))?;
                Ok((out, ArchCache::Gin(cache)))
            }
        }
    }

    fn layer_backward(
        &self,
        layer: usize,
        h_in: &Matrix,
        nb: &Neighborhood,
        cache: &ArchCache,
        d_out: &Matrix,
        grads: &mut [Matrix],
    ) -> Result<Matrix> {
        match self.arch {
            Arch::Gcn => {
                let (dw, dh) = layers::gcn_backward(nb, h_in, &self.blocks[layer], d_out)?;
                grads[layer] = grads[layer].add(&dw)?;
                Ok(dh)
            }
            Arch::Sage => {
                let (dw, dh) = layers::sage_backward(nb, h_in, &self.blocks[layer], d_out)?;
                grads[layer] = grads[layer].add(&dw)?;
                Ok(dh)
            }
            Arch::Gat => {
                let ArchCache::Gat(c) = cache else {
                    unreachable!("gat cache")
                };
                let w = &self.blocks[2 * layer];
                let a = &self.blocks[2 * layer + 1];
                let (dw, da, dh) = layers::gat_backward(h_in, w, a, GAT_SLOPE, c, d_out)?;
                grads[2 * layer] = grads[2 * layer].add(&dw)?;
                grads[2 * layer + 1] = grads[2 * layer + 1].add(&da)?;
                Ok(dh)
            }
            Arch::Gin => {
                let ArchCache::Gin(c) = cache else {
                    unreachable!("gin cache")
                };
                let base = 5 * layer;
                let eps = self.blocks[base + 4].get(0, 0);
                let (dw1, db1, dw2, db2, deps, dh) =
                    layers::gin_backward(nb, h_in, eps, &self.gin_mlp(layer), c, d_out)?;
                grads[base] = grads[base].add(&dw1)?;
                grads[base + 1] = grads[base + 1].add(&db1)?;
                grads[base + 2] = grads[base + 2].add(&dw2)?;
                grads[base + 3] = grads[base + 3].add(&db2)?;
                grads[base + 4] = grads[base + 4].add(&deps)?;
                Ok(dh)
            }
        }
    }

    fn forward_traced(&self, graph: &Graph) -> Result<Trace> {
        if graph.node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        if graph.features.cols() != self.feature_dim {
            return Err(Error::Shape {
                op: "forward",
                lhs: graph.features.shape(),
                rhs: (graph.node_count, self.feature_dim),
            });
        }
        let nb = Neighborhood::of(graph);
        let (z1, cache1) = self.layer_forward(0, &graph.features, &nb)?;
        let h1 = z1.map(|v| v.max(0.0));
        let (z2, cache2) = self.layer_forward(1, &h1, &nb)?;
        let hg = readout_mean(&z2)?;
        let (head_w, head_b) = self.head();
        let logits = hg.matmul(head_w)?.add(head_b)?;
        let probs_m = logits.row_softmax();
        let probs = probs_m.row(0).to_vec();
        let label = argmax(&probs);
        Ok(Trace {
            nb,
            z1,
            h1,
            hg,
            logits,
            probs,
            label,
            cache1,
            cache2,
        })
    }

    fn head(&self) -> (&Matrix, &Matrix) {
        let n = self.blocks.len();
        (&self.blocks[n - 2], &self.blocks[n - 1])
    }

    /// Classify one graph.
    pub fn forward(&self, graph: &Graph) -> Result<Prediction> {
        let trace = self.forward_traced(graph)?;
        Ok(Prediction {
            label: trace.label,
            probs: trace.probs,
        })
    }

    /// Cross-entropy loss against the graph's own label, its gradient for
    /// every parameter block (in block order), and the predicted label.
    pub fn loss_and_gradients(&self, graph: &Graph) -> Result<(f64, Vec<Matrix>, usize)> {
        if graph.label >= self.class_count {
            return Err(Error::Config(format!(
                "label {} outside {} classes",
                graph.label, self.class_count
            )));
        }
        let trace = self.forward_traced(graph)?;
        let y = graph.label;

        // loss = logsumexp(logits) - logits[y]
        let row = trace.logits.row(0);
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        let loss = lse - row[y];

        let mut grads: Vec<Matrix> = self
            .blocks
            .iter()
            .map(|b| Matrix::zeros(b.shape().0, b.shape().1))
            .collect();

        let mut dlogits = Matrix::from_vec(1, self.class_count, trace.probs.clone())?;
        dlogits.set(0, y, dlogits.get(0, y) - 1.0);

        let n_blocks = self.blocks.len();
        let (head_w, _) = self.head();
        grads[n_blocks - 2] = trace.hg.transpose().matmul(&dlogits)?;
        grads[n_blocks - 1] = dlogits.clone();
        let d_hg = dlogits.matmul(&head_w.transpose())?;

        // readout mean: every node row receives d_hg / n
        let n = graph.node_count;
        let mut d_z2 = Matrix::zeros(n, self.hidden_dim);
        let scaled: Vec<f64> = d_hg.row(0).iter().map(|v| v / n as f64).collect();
        for r in 0..n {
            d_z2.row_mut(r).copy_from_slice(&scaled);
        }

        let d_h1 = self.layer_backward(1, &trace.h1, &trace.nb, &trace.cache2, &d_z2, &mut grads)?;
        let relu_mask = trace.z1.map(|v| if v > 0.0 { 1.0 } else { 0.0 });
        let d_z1 = d_h1.hadamard(&relu_mask)?;
        self.layer_backward(0, &graph.features, &trace.nb, &trace.cache1, &d_z1, &mut grads)?;

        Ok((loss, grads, trace.label))
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut Vec<Matrix> {
        &mut self.blocks
    }

    pub(crate) fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }
}

struct Trace {
    nb: Neighborhood,
    z1: Matrix,
    h1: Matrix,
    hg: Matrix,
    logits: Matrix,
    probs: Vec<f64>,
    label: usize,
    cache1: ArchCache,
    cache2: ArchCache,
}

enum ArchCache {
    None,
    Gat(layers::GatCache),
    Gin(layers::GinCache),
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Train a fresh model with full-batch Adam.
///
/// Gradients are summed over the training graphs each epoch (fixed order),
/// followed by one optimizer step. Returns the model and the per-epoch
/// (accuracy, mean loss) trace.
pub fn train(
    arch: Arch,
    class_count: usize,
    graphs: &[&Graph],
    cfg: &TrainConfig,
) -> Result<(GnnModel, Vec<EpochStats>)> {
    if graphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if cfg.epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".to_string()));
    }
    let feature_dim = graphs[0].features.cols();
    for g in graphs {
        if g.features.cols() != feature_dim {
            return Err(Error::Shape {
                op: "train",
                lhs: g.features.shape(),
                rhs: (g.node_count, feature_dim),
            });
        }
    }

    let mut model = GnnModel::init(arch, feature_dim, class_count, cfg.hidden_dim, cfg.seed);
    let mut adam = AdamState::new(cfg.lr, &model.param_shapes());
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let mut total: Vec<Matrix> = model
            .blocks()
            .iter()
            .map(|b| Matrix::zeros(b.shape().0, b.shape().1))
            .collect();
        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for g in graphs {
            let (loss, grads, label) = model.loss_and_gradients(g)?;
            loss_sum += loss;
            if label == g.label {
                correct += 1;
            }
            for (t, d) in total.iter_mut().zip(&grads) {
                *t = t.add(d)?;
            }
        }
        let mean_loss = loss_sum / graphs.len() as f64;
        if !mean_loss.is_finite() {
            return Err(Error::Diverged {
                epoch,
                loss: mean_loss,
            });
        }
        adam.step(model.blocks_mut(), &total)?;
        history.push(EpochStats {
            epoch,
            train_acc: correct as f64 / graphs.len() as f64,
            loss: mean_loss,
        });
    }
    Ok((model, history))
}

/// Fraction of graphs whose predicted label matches the ground truth.
pub fn accuracy(model: &GnnModel, graphs: &[&Graph]) -> Result<f64> {
    if graphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut correct = 0usize;
    for g in graphs {
        if model.forward(g)?.label == g.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / graphs.len() as f64)
}
