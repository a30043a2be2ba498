//! Central-difference gradient verification.

use crate::error::{Error, Result};
use crate::tensor::Matrix;

/// Compare an analytic gradient against central differences of `f` at `x`.
///
/// Returns the maximum element-wise relative error
/// `|a - n| / max(1e-8, |a| + |n|)`. A deliberately doubled gradient lands
/// near 1/3; correct gradients of smooth functions land below 1e-6 for
/// h around 1e-5.
pub fn grad_check<F>(f: F, analytic: &Matrix, x: &Matrix, h: f64) -> Result<f64>
where
    F: FnMut(&Matrix) -> Result<f64>,
{
    grad_check_with_floor(f, analytic, x, h, 0.0)
}

/// [`grad_check`] that treats absolute disagreements below `noise_floor`
/// as zero error.
///
/// Central differences in f64 cannot resolve derivatives below roughly
/// one ulp of f over 2h (about 1e-11 for unit-scale losses and h = 1e-5).
/// A coordinate whose true derivative is exactly zero still picks up that
/// dust, which the 1e-8 denominator floor would report as a ~1e-3 relative
/// error. Passing a `noise_floor` of about 1e-9 ignores exactly those
/// unmeasurable coordinates; any real gradient bug disagrees at the scale
/// of the gradient itself and stays caught.
pub fn grad_check_with_floor<F>(
    mut f: F,
    analytic: &Matrix,
    x: &Matrix,
    h: f64,
    noise_floor: f64,
) -> Result<f64>
where
    F: FnMut(&Matrix) -> Result<f64>,
{
    if analytic.shape() != x.shape() {
        return Err(Error::Shape {
            op: "grad_check",
            lhs: analytic.shape(),
            rhs: x.shape(),
        });
    }
    let mut max_err: f64 = 0.0;
    let mut probe = x.clone();
    for i in 0..x.data().len() {
        let orig = probe.data()[i];

        probe.data_mut()[i] = orig + h;
        let plus = f(&probe)?;
        probe.data_mut()[i] = orig - h;
        let minus = f(&probe)?;
        probe.data_mut()[i] = orig;

        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::Numerical {
                context: format!("grad_check: f non-finite at coordinate {i}"),
            });
        }
        let numeric = (plus - minus) / (2.0 * h);
        let a = analytic.data()[i];
        if (a - numeric).abs() < noise_floor {
            continue;
        }
        let err = (a - numeric).abs() / (1e-8_f64).max(a.abs() + numeric.abs());
        max_err = max_err.max(err);
    }
    Ok(max_err)
}
