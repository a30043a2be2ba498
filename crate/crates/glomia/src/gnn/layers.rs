//! Message-passing layers: forward aggregation and hand-derived backward.
//!
//! Each public layer function computes the layer's aggregation and linear
//! projection; the caller applies the activation (ReLU after layer 1,
//! identity after layer 2). The cached variants keep what the backward pass
//! needs. Aggregation iterates nodes in ascending index order with sorted
//! neighbor lists, so results are bit-reproducible.

use crate::error::{Error, Result};
use crate::tensor::Matrix;
use crate::tud::Graph;

/// Neighbor lists plus degrees, built once per graph traversal.
pub(crate) struct Neighborhood {
    pub adj: Vec<Vec<usize>>,
}

impl Neighborhood {
    pub fn of(graph: &Graph) -> Self {
        Neighborhood {
            adj: graph.adjacency(),
        }
    }

    fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }
}

fn check_rows(op: &'static str, h: &Matrix, g: &Graph) -> Result<()> {
    if h.rows() != g.node_count {
        return Err(Error::Shape {
            op,
            lhs: h.shape(),
            rhs: (g.node_count, h.cols()),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// GCN: symmetric normalization with self-loops.
// out = D~^(-1/2) (A + I) D~^(-1/2) H W, computed as prop(H W).
// ---------------------------------------------------------------------------

fn gcn_coefficient(nb: &Neighborhood, i: usize, j: usize) -> f64 {
    1.0 / (((nb.degree(i) + 1) * (nb.degree(j) + 1)) as f64).sqrt()
}

/// Apply the normalized propagation to a node matrix: for every node i,
/// sum coef(i, j) * m_j over j in N(i) plus the self term.
fn propagate(nb: &Neighborhood, m: &Matrix, coef: impl Fn(&Neighborhood, usize, usize) -> f64) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let self_c = coef(nb, i, i);
        for (o, v) in out.row_mut(i).iter_mut().zip(m.row(i)) {
            *o += self_c * v;
        }
        for &j in &nb.adj[i] {
            let c = coef(nb, i, j);
            for (o, v) in out.row_mut(i).iter_mut().zip(m.row(j)) {
                *o += c * v;
            }
        }
    }
    out
}

/// Transposed propagation: scatter each row i into its neighbors (and self)
/// with the same coefficients. Equals propagate when the coefficient matrix
/// is symmetric.
fn propagate_transpose(
    nb: &Neighborhood,
    m: &Matrix,
    coef: impl Fn(&Neighborhood, usize, usize) -> f64,
) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let self_c = coef(nb, i, i);
        for (o, v) in out.row_mut(i).iter_mut().zip(m.row(i)) {
            *o += self_c * v;
        }
        for &j in &nb.adj[i] {
            let c = coef(nb, i, j);
            for (o, v) in out.row_mut(j).iter_mut().zip(m.row(i)) {
                *o += c * v;
            }
        }
    }
    out
}

/// Symmetric-normalized propagation (self-loops included).
pub(crate) fn propagate_gcn(nb: &Neighborhood, m: &Matrix) -> Matrix {
    propagate(nb, m, gcn_coefficient)
}

/// Row-stochastic mean propagation over the node and its neighbors.
pub(crate) fn propagate_sage(nb: &Neighborhood, m: &Matrix) -> Matrix {
    propagate(nb, m, sage_coefficient)
}

/// GCN layer: symmetric-normalized aggregation followed by projection.
pub fn gcn_layer(h: &Matrix, graph: &Graph, w: &Matrix) -> Result<Matrix> {
    check_rows("gcn_layer", h, graph)?;
    let nb = Neighborhood::of(graph);
    let u = h.matmul(w)?;
    Ok(propagate(&nb, &u, gcn_coefficient))
}

pub(crate) fn gcn_backward(
    nb: &Neighborhood,
    h_in: &Matrix,
    w: &Matrix,
    d_out: &Matrix,
) -> Result<(Matrix, Matrix)> {
    // z = P (h w); P symmetric, so du = P dz.
    let du = propagate(nb, d_out, gcn_coefficient);
    let dw = h_in.transpose().matmul(&du)?;
    let dh = du.matmul(&w.transpose())?;
    Ok((dw, dh))
}

// ---------------------------------------------------------------------------
// GraphSAGE, mean aggregator over the multiset {self} U neighbors.
// ---------------------------------------------------------------------------

fn sage_coefficient(nb: &Neighborhood, i: usize, _j: usize) -> f64 {
    1.0 / (nb.degree(i) + 1) as f64
}

/// GraphSAGE-mean layer: mean over the node and its full neighborhood, then
/// projection. No neighbor sampling.
pub fn sage_layer(h: &Matrix, graph: &Graph, w: &Matrix) -> Result<Matrix> {
    check_rows("sage_layer", h, graph)?;
    let nb = Neighborhood::of(graph);
    let u = h.matmul(w)?;
    Ok(propagate(&nb, &u, sage_coefficient))
}

pub(crate) fn sage_backward(
    nb: &Neighborhood,
    h_in: &Matrix,
    w: &Matrix,
    d_out: &Matrix,
) -> Result<(Matrix, Matrix)> {
    // Row-stochastic P is not symmetric: use the transposed scatter.
    let du = propagate_transpose(nb, d_out, sage_coefficient);
    let dw = h_in.transpose().matmul(&du)?;
    let dh = du.matmul(&w.transpose())?;
    Ok((dw, dh))
}

// ---------------------------------------------------------------------------
// GAT, single head.
// e_ij = LeakyReLU(a_src . u_i + a_dst . u_j), u = H W,
// alpha_i = softmax over j in N(i) U {i}, out_i = sum_j alpha_ij u_j.
// ---------------------------------------------------------------------------

pub(crate) struct GatCache {
    pub u: Matrix,
    /// CSR over each node's attention support N(i) U {i}.
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
    /// Pre-LeakyReLU logits, aligned with `targets`.
    pub raw_logits: Vec<f64>,
    pub alpha: Vec<f64>,
}

fn leaky_relu(x: f64, slope: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        slope * x
    }
}

pub(crate) fn gat_forward_cached(
    h: &Matrix,
    nb: &Neighborhood,
    w: &Matrix,
    attn: &Matrix,
    slope: f64,
) -> Result<(Matrix, GatCache)> {
    let u = h.matmul(w)?;
    let f_out = u.cols();
    if attn.shape() != (1, 2 * f_out) {
        return Err(Error::Shape {
            op: "gat_layer",
            lhs: attn.shape(),
            rhs: (1, 2 * f_out),
        });
    }
    let a_src = &attn.row(0)[..f_out];
    let a_dst = &attn.row(0)[f_out..];

    let n = u.rows();
    let dot = |row: &[f64], a: &[f64]| row.iter().zip(a).map(|(x, y)| x * y).sum::<f64>();
    let src_score: Vec<f64> = (0..n).map(|i| dot(u.row(i), a_src)).collect();
    let dst_score: Vec<f64> = (0..n).map(|i| dot(u.row(i), a_dst)).collect();

    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    let mut raw_logits = Vec::new();
    let mut alpha = Vec::new();
    offsets.push(0);
    let mut out = Matrix::zeros(n, f_out);
    for i in 0..n {
        // attention support: self plus neighbors, ascending node order
        let mut support: Vec<usize> = Vec::with_capacity(nb.adj[i].len() + 1);
        support.extend(nb.adj[i].iter().copied());
        let pos = support.partition_point(|&j| j < i);
        support.insert(pos, i);

        let start = targets.len();
        let mut max_e = f64::NEG_INFINITY;
        for &j in &support {
            let q = src_score[i] + dst_score[j];
            raw_logits.push(q);
            targets.push(j);
            max_e = max_e.max(leaky_relu(q, slope));
        }
        let mut sum = 0.0;
        for idx in start..targets.len() {
            let e = (leaky_relu(raw_logits[idx], slope) - max_e).exp();
            alpha.push(e);
            sum += e;
        }
        for idx in start..targets.len() {
            alpha[idx] /= sum;
            let j = targets[idx];
            let coeff = alpha[idx];
            for (o, v) in out.row_mut(i).iter_mut().zip(u.row(j)) {
                *o += coeff * v;
            }
        }
        offsets.push(targets.len());
    }
    Ok((
        out,
        GatCache {
            u,
            offsets,
            targets,
            raw_logits,
            alpha,
        },
    ))
}

/// GAT layer (single attention head).
pub fn gat_layer(h: &Matrix, graph: &Graph, w: &Matrix, attn: &Matrix, slope: f64) -> Result<Matrix> {
    check_rows("gat_layer", h, graph)?;
    let nb = Neighborhood::of(graph);
    gat_forward_cached(h, &nb, w, attn, slope).map(|(out, _)| out)
}

pub(crate) fn gat_backward(
    h_in: &Matrix,
    w: &Matrix,
    attn: &Matrix,
    slope: f64,
    cache: &GatCache,
    d_out: &Matrix,
) -> Result<(Matrix, Matrix, Matrix)> {
    let u = &cache.u;
    let n = u.rows();
    let f_out = u.cols();
    let a_src = &attn.row(0)[..f_out];
    let a_dst = &attn.row(0)[f_out..];

    let mut du = Matrix::zeros(n, f_out);
    let mut ds = vec![0.0; n];
    let mut dt = vec![0.0; n];
    let mut dalpha = vec![0.0; cache.targets.len()];

    for i in 0..n {
        let (start, end) = (cache.offsets[i], cache.offsets[i + 1]);
        // path 1: out_i depends on u_j directly through alpha_ij
        for idx in start..end {
            let j = cache.targets[idx];
            let coeff = cache.alpha[idx];
            for (o, v) in du.row_mut(j).iter_mut().zip(d_out.row(i)) {
                *o += coeff * v;
            }
            dalpha[idx] = d_out.row(i).iter().zip(u.row(j)).map(|(a, b)| a * b).sum();
        }
        // path 2: through the softmax and the logits
        let weighted: f64 = (start..end).map(|idx| cache.alpha[idx] * dalpha[idx]).sum();
        for idx in start..end {
            let de = cache.alpha[idx] * (dalpha[idx] - weighted);
            let dq = de * if cache.raw_logits[idx] > 0.0 { 1.0 } else { slope };
            ds[i] += dq;
            dt[cache.targets[idx]] += dq;
        }
    }

    let mut da = Matrix::zeros(1, 2 * f_out);
    for i in 0..n {
        {
            let du_row = du.row_mut(i);
            for k in 0..f_out {
                du_row[k] += ds[i] * a_src[k] + dt[i] * a_dst[k];
            }
        }
        let da_row = da.row_mut(0);
        for k in 0..f_out {
            da_row[k] += ds[i] * u.get(i, k);
            da_row[f_out + k] += dt[i] * u.get(i, k);
        }
    }

    let dw = h_in.transpose().matmul(&du)?;
    let dh = du.matmul(&w.transpose())?;
    Ok((dw, da, dh))
}

// ---------------------------------------------------------------------------
// GIN: (1 + eps) self plus neighbor sum, then a 2-layer MLP.
// ---------------------------------------------------------------------------

/// The GIN per-layer MLP: linear -> ReLU -> linear, with biases.
pub struct GinMlp<'a> {
    pub w1: &'a Matrix,
    pub b1: &'a Matrix,
    pub w2: &'a Matrix,
    pub b2: &'a Matrix,
}

pub(crate) struct GinCache {
    pub agg: Matrix,
    pub pre_relu: Matrix,
    pub hidden: Matrix,
}

fn add_row_broadcast(m: &Matrix, row: &Matrix) -> Result<Matrix> {
    if row.shape() != (1, m.cols()) {
        return Err(Error::Shape {
            op: "bias_broadcast",
            lhs: m.shape(),
            rhs: row.shape(),
        });
    }
    let mut out = m.clone();
    for r in 0..out.rows() {
        for (o, b) in out.row_mut(r).iter_mut().zip(row.row(0)) {
            *o += b;
        }
    }
    Ok(out)
}

/// Sum of neighbor rows (no self term).
fn neighbor_sums(nb: &Neighborhood, m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for &j in &nb.adj[i] {
            for (o, v) in out.row_mut(i).iter_mut().zip(m.row(j)) {
                *o += v;
            }
        }
    }
    out
}

pub(crate) fn gin_forward_cached(
    h: &Matrix,
    nb: &Neighborhood,
    eps: f64,
    mlp: &GinMlp<'_>,
) -> Result<(Matrix, GinCache)> {
    let agg = h.scale(1.0 + eps).add(&neighbor_sums(nb, h))?;
    let pre_relu = add_row_broadcast(&agg.matmul(mlp.w1)?, mlp.b1)?;
    let hidden = pre_relu.map(|v| v.max(0.0));
    let out = add_row_broadcast(&hidden.matmul(mlp.w2)?, mlp.b2)?;
    Ok((
        out,
        GinCache {
            agg,
            pre_relu,
            hidden,
        },
    ))
}

/// GIN layer: `MLP((1 + eps) * h_i + sum of neighbor rows)`.
pub fn gin_layer(h: &Matrix, graph: &Graph, eps: f64, mlp: &GinMlp<'_>) -> Result<Matrix> {
    check_rows("gin_layer", h, graph)?;
    let nb = Neighborhood::of(graph);
    gin_forward_cached(h, &nb, eps, mlp).map(|(out, _)| out)
}

/// Gradients for (w1, b1, w2, b2, eps, h_in).
pub(crate) fn gin_backward(
    nb: &Neighborhood,
    h_in: &Matrix,
    eps: f64,
    mlp: &GinMlp<'_>,
    cache: &GinCache,
    d_out: &Matrix,
) -> Result<(Matrix, Matrix, Matrix, Matrix, Matrix, Matrix)> {
    let dw2 = cache.hidden.transpose().matmul(d_out)?;
    let db2 = d_out.column_sums();
    let d_hidden = d_out.matmul(&mlp.w2.transpose())?;
    let d_pre = d_hidden.hadamard(&cache.pre_relu.map(|v| if v > 0.0 { 1.0 } else { 0.0 }))?;
    let dw1 = cache.agg.transpose().matmul(&d_pre)?;
    let db1 = d_pre.column_sums();
    let d_agg = d_pre.matmul(&mlp.w1.transpose())?;

    let d_eps = Matrix::from_vec(1, 1, vec![h_in.dot_all(&d_agg)?])?;
    // agg = (1 + eps) h + A h with symmetric A
    let dh = d_agg.scale(1.0 + eps).add(&neighbor_sums(nb, &d_agg))?;
    Ok((dw1, db1, dw2, db2, d_eps, dh))
}

// ---------------------------------------------------------------------------
// Readout
// ---------------------------------------------------------------------------

/// Column-wise mean of node embeddings, as a 1 x f row.
pub fn readout_mean(h: &Matrix) -> Result<Matrix> {
    if h.rows() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(h.column_sums().scale(1.0 / h.rows() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Rng;
    use crate::tud::Graph;

    fn graph_from_edges(n: usize, edges: &[(u32, u32)], features: Matrix) -> Graph {
        Graph {
            node_count: n,
            edges: edges.to_vec(),
            features,
            label: 0,
            source_id: 1,
        }
    }

    fn random_graph(rng: &mut Rng, n: usize, d: usize, edge_prob: f64) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.next_f64() < edge_prob {
                    edges.push((a as u32, b as u32));
                }
            }
        }
        let features = rng.uniform(-1.0, 1.0, n, d).unwrap();
        graph_from_edges(n, &edges, features)
    }

    /// Dense straight-line evaluation of the symmetric-normalized propagation.
    fn dense_gcn_oracle(g: &Graph, h: &Matrix, w: &Matrix) -> Matrix {
        let n = g.node_count;
        let a_tilde = g.dense_adjacency().add(&Matrix::identity(n)).unwrap();
        let mut d_inv_sqrt = Matrix::zeros(n, n);
        for i in 0..n {
            let deg: f64 = (0..n).map(|j| a_tilde.get(i, j)).sum();
            d_inv_sqrt.set(i, i, 1.0 / deg.sqrt());
        }
        d_inv_sqrt
            .matmul(&a_tilde)
            .unwrap()
            .matmul(&d_inv_sqrt)
            .unwrap()
            .matmul(h)
            .unwrap()
            .matmul(w)
            .unwrap()
    }

    fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn gcn_isolated_node_collapses_to_projection() {
        let features = Matrix::from_rows(&[vec![2.0, -1.0]]).unwrap();
        let g = graph_from_edges(1, &[], features.clone());
        let w = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let out = gcn_layer(&features, &g, &w).unwrap();
        assert_eq!(out, features);
    }

    #[test]
    fn gcn_symmetric_nodes_get_identical_rows() {
        let features = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let g = graph_from_edges(2, &[(0, 1)], features.clone());
        let mut rng = Rng::new(1);
        let w = rng.uniform(-1.0, 1.0, 2, 3).unwrap();
        let out = gcn_layer(&features, &g, &w).unwrap();
        assert_eq!(out.row(0), out.row(1));
    }

    #[test]
    fn gcn_matches_dense_oracle() {
        let mut rng = Rng::new(7);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 5, 3, 0.5);
            let w = rng.uniform(-1.0, 1.0, 3, 4).unwrap();
            let fast = gcn_layer(&g.features, &g, &w).unwrap();
            let oracle = dense_gcn_oracle(&g, &g.features, &w);
            assert!(max_abs_diff(&fast, &oracle) < 1e-10);
        }
    }

    #[test]
    fn sage_isolated_node_is_projection() {
        let features = Matrix::from_rows(&[vec![1.5, -0.5]]).unwrap();
        let g = graph_from_edges(1, &[], features.clone());
        let w = Matrix::identity(2);
        assert_eq!(sage_layer(&features, &g, &w).unwrap(), features);
    }

    #[test]
    fn sage_star_of_identical_rows_is_projection_of_center() {
        // center 0 with 3 leaves, all rows equal
        let row = vec![0.3, 0.7];
        let features = Matrix::from_rows(&[row.clone(), row.clone(), row.clone(), row]).unwrap();
        let g = graph_from_edges(4, &[(0, 1), (0, 2), (0, 3)], features.clone());
        let mut rng = Rng::new(2);
        let w = rng.uniform(-1.0, 1.0, 2, 2).unwrap();
        let out = sage_layer(&features, &g, &w).unwrap();
        let direct = features.matmul(&w).unwrap();
        assert!((out.get(0, 0) - direct.get(0, 0)).abs() < 1e-12);
        assert!((out.get(0, 1) - direct.get(0, 1)).abs() < 1e-12);
    }

    #[test]
    fn sage_matches_mean_then_project_oracle() {
        let mut rng = Rng::new(8);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 6, 3, 0.4);
            let w = rng.uniform(-1.0, 1.0, 3, 5).unwrap();
            let fast = sage_layer(&g.features, &g, &w).unwrap();
            // oracle: mean face rows first, then project
            let adj = g.adjacency();
            let mut mean_rows = Vec::new();
            for i in 0..g.node_count {
                let mut acc = g.features.row(i).to_vec();
                for &j in &adj[i] {
                    for (a, v) in acc.iter_mut().zip(g.features.row(j)) {
                        *a += v;
                    }
                }
                let k = (adj[i].len() + 1) as f64;
                mean_rows.push(acc.into_iter().map(|v| v / k).collect::<Vec<_>>());
            }
            let oracle = Matrix::from_rows(&mean_rows).unwrap().matmul(&w).unwrap();
            assert!(max_abs_diff(&fast, &oracle) < 1e-10);
        }
    }

    #[test]
    fn gat_isolated_node_attends_to_itself() {
        let features = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let g = graph_from_edges(1, &[], features.clone());
        let mut rng = Rng::new(3);
        let w = rng.uniform(-1.0, 1.0, 2, 3).unwrap();
        let a = rng.uniform(-1.0, 1.0, 1, 6).unwrap();
        let out = gat_layer(&features, &g, &w, &a, 0.2).unwrap();
        assert_eq!(out, features.matmul(&w).unwrap());
    }

    #[test]
    fn gat_zero_attention_equals_uniform_mean() {
        let mut rng = Rng::new(4);
        let g = random_graph(&mut rng, 6, 3, 0.5);
        let w = rng.uniform(-1.0, 1.0, 3, 4).unwrap();
        let a = Matrix::zeros(1, 8);
        let gat = gat_layer(&g.features, &g, &w, &a, 0.2).unwrap();
        let sage = sage_layer(&g.features, &g, &w).unwrap();
        assert!(max_abs_diff(&gat, &sage) <= 1e-12);
    }

    #[test]
    fn gat_matches_per_node_oracle() {
        let mut rng = Rng::new(5);
        // 4-node path graph plus random graphs
        let path = graph_from_edges(
            4,
            &[(0, 1), (1, 2), (2, 3)],
            rng.uniform(-1.0, 1.0, 4, 3).unwrap(),
        );
        let mut graphs = vec![path];
        for _ in 0..6 {
            graphs.push(random_graph(&mut rng, 5, 3, 0.5));
        }
        for g in &graphs {
            let w = rng.uniform(-1.0, 1.0, 3, 4).unwrap();
            let a = rng.uniform(-1.0, 1.0, 1, 8).unwrap();
            let slope = 0.2;
            let fast = gat_layer(&g.features, g, &w, &a, slope).unwrap();

            // straight-line oracle: explicit loop over the support of node i
            let u = g.features.matmul(&w).unwrap();
            let adj = g.adjacency();
            for i in 0..g.node_count {
                let mut support = adj[i].clone();
                support.push(i);
                support.sort_unstable();
                let logits: Vec<f64> = support
                    .iter()
                    .map(|&j| {
                        let src: f64 =
                            u.row(i).iter().zip(&a.row(0)[..4]).map(|(x, y)| x * y).sum();
                        let dst: f64 =
                            u.row(j).iter().zip(&a.row(0)[4..]).map(|(x, y)| x * y).sum();
                        let q = src + dst;
                        if q > 0.0 {
                            q
                        } else {
                            slope * q
                        }
                    })
                    .collect();
                let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let exp: Vec<f64> = logits.iter().map(|&e| (e - max).exp()).collect();
                let sum: f64 = exp.iter().sum();
                let mut expect = vec![0.0; 4];
                for (k, &j) in support.iter().enumerate() {
                    for (e, v) in expect.iter_mut().zip(u.row(j)) {
                        *e += exp[k] / sum * v;
                    }
                }
                for (c, e) in expect.iter().enumerate() {
                    assert!((fast.get(i, c) - e).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gin_isolated_node_zero_eps_is_mlp_of_features() {
        let features = Matrix::from_rows(&[vec![0.5, -0.5]]).unwrap();
        let g = graph_from_edges(1, &[], features.clone());
        let mut rng = Rng::new(6);
        let w1 = rng.uniform(-1.0, 1.0, 2, 3).unwrap();
        let b1 = rng.uniform(-1.0, 1.0, 1, 3).unwrap();
        let w2 = rng.uniform(-1.0, 1.0, 3, 2).unwrap();
        let b2 = rng.uniform(-1.0, 1.0, 1, 2).unwrap();
        let mlp = GinMlp {
            w1: &w1,
            b1: &b1,
            w2: &w2,
            b2: &b2,
        };
        let out = gin_layer(&features, &g, 0.0, &mlp).unwrap();
        let expect = add_row_broadcast(
            &add_row_broadcast(&features.matmul(&w1).unwrap(), &b1)
                .unwrap()
                .map(|v| v.max(0.0))
                .matmul(&w2)
                .unwrap(),
            &b2,
        )
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn gin_eps_minus_one_isolated_node_leaves_bias_path() {
        let features = Matrix::from_rows(&[vec![0.7, 0.1]]).unwrap();
        let g = graph_from_edges(1, &[], features.clone());
        let mut rng = Rng::new(7);
        let w1 = rng.uniform(-1.0, 1.0, 2, 3).unwrap();
        let b1 = rng.uniform(-1.0, 1.0, 1, 3).unwrap();
        let w2 = rng.uniform(-1.0, 1.0, 3, 2).unwrap();
        let b2 = rng.uniform(-1.0, 1.0, 1, 2).unwrap();
        let mlp = GinMlp {
            w1: &w1,
            b1: &b1,
            w2: &w2,
            b2: &b2,
        };
        let out = gin_layer(&features, &g, -1.0, &mlp).unwrap();
        // aggregated input is exactly zero: MLP(0) = relu(b1) w2 + b2
        let expect = add_row_broadcast(&b1.map(|v| v.max(0.0)).matmul(&w2).unwrap(), &b2).unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn gin_matches_dense_sum_oracle() {
        let mut rng = Rng::new(9);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 6, 3, 0.5);
            let w1 = rng.uniform(-1.0, 1.0, 3, 4).unwrap();
            let b1 = rng.uniform(-1.0, 1.0, 1, 4).unwrap();
            let w2 = rng.uniform(-1.0, 1.0, 4, 4).unwrap();
            let b2 = rng.uniform(-1.0, 1.0, 1, 4).unwrap();
            let eps = rng.uniform_scalar(-0.5, 0.5);
            let mlp = GinMlp {
                w1: &w1,
                b1: &b1,
                w2: &w2,
                b2: &b2,
            };
            let fast = gin_layer(&g.features, &g, eps, &mlp).unwrap();
            let agg = g
                .features
                .scale(1.0 + eps)
                .add(&g.dense_adjacency().matmul(&g.features).unwrap())
                .unwrap();
            let oracle = add_row_broadcast(
                &add_row_broadcast(&agg.matmul(&w1).unwrap(), &b1)
                    .unwrap()
                    .map(|v| v.max(0.0))
                    .matmul(&w2)
                    .unwrap(),
                &b2,
            )
            .unwrap();
            assert!(max_abs_diff(&fast, &oracle) < 1e-10);
        }
    }

    #[test]
    fn readout_of_identical_rows_is_that_row() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(readout_mean(&m).unwrap().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn readout_means_columns() {
        let m = Matrix::from_rows(&[vec![0.0, 0.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(readout_mean(&m).unwrap().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn readout_of_empty_matrix_errors() {
        let m = Matrix::zeros(0, 3);
        assert!(matches!(readout_mean(&m), Err(Error::EmptyGraph)));
    }
}
