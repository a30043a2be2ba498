//! Adam with bias correction, over lists of parameter matrices.

use crate::error::{Error, Result};
use crate::tensor::Matrix;

/// Optimizer state: one pair of moment accumulators per parameter block.
#[derive(Debug, Clone)]
pub struct AdamState {
    step_count: u64,
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    first_moment: Vec<Matrix>,
    second_moment: Vec<Matrix>,
}

impl AdamState {
    /// Standard defaults: beta1 0.9, beta2 0.999, epsilon 1e-8.
    pub fn new(lr: f64, shapes: &[(usize, usize)]) -> Self {
        AdamState {
            step_count: 0,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            first_moment: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
            second_moment: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One Adam update over all blocks. Params and grads must line up with
    /// the shapes this state was created for.
    pub fn step(&mut self, params: &mut [Matrix], grads: &[Matrix]) -> Result<()> {
        if params.len() != grads.len() || params.len() != self.first_moment.len() {
            return Err(Error::Shape {
                op: "adam_step",
                lhs: (params.len(), grads.len()),
                rhs: (self.first_moment.len(), 0),
            });
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);

        for (idx, (param, grad)) in params.iter_mut().zip(grads).enumerate() {
            if param.shape() != grad.shape() || param.shape() != self.first_moment[idx].shape() {
                return Err(Error::Shape {
                    op: "adam_step",
                    lhs: param.shape(),
                    rhs: grad.shape(),
                });
            }
            let m = self.first_moment[idx].data_mut();
            let v = self.second_moment[idx].data_mut();
            let p = param.data_mut();
            let g = grad.data();
            for i in 0..p.len() {
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g[i];
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g[i] * g[i];
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                p[i] -= self.lr * m_hat / (v_hat.sqrt() + self.epsilon);
            }
        }
        Ok(())
    }
}

/// Free-function form of [`AdamState::step`].
pub fn adam_step(params: &mut [Matrix], grads: &[Matrix], state: &mut AdamState) -> Result<()> {
    state.step(params, grads)
}
