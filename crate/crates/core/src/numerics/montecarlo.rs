//! Randomised quasi-Monte Carlo integration over boxes in 3 to 8 dimensions.
//!
//! Points come from the additive recurrence `x_n = frac(s + n alpha)` with the
//! generalised golden-ratio vector `alpha`. The sample budget is split into
//! independent batches, each with its own random shift `s` drawn from a
//! ChaCha stream keyed by the seed and batch index. The spread of the batch
//! means gives the standard error. Batches run in parallel but are reduced in
//! index order, so results do not depend on the thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{NumericsError, Result, Upper};

const BATCHES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Integrate `f` over the box `bounds` (per-dimension lower limit and upper
/// limit, semi-infinite ranges mapped by `x = a + u / (1 - u)`).
pub fn integrate_nd<F>(f: F, bounds: &[(f64, Upper)], samples: u64, seed: u64) -> Result<MCEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut estimates = integrate_nd_vec(|x, out| out[0] = f(x), 1, bounds, samples, seed)?;
    Ok(estimates.remove(0))
}

/// As [`integrate_nd`] for a vector-valued integrand writing `outputs`
/// components into its second argument. All components share the same
/// points, so their estimates are correlated.
pub fn integrate_nd_vec<F>(
    f: F,
    outputs: usize,
    bounds: &[(f64, Upper)],
    samples: u64,
    seed: u64,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let dims = bounds.len();
    if !(3..=8).contains(&dims) {
        return Err(NumericsError::InvalidSpec(format!(
            "integrate_nd supports 3 to 8 dimensions, got {dims}"
        )));
    }
    if outputs == 0 {
        return Err(NumericsError::InvalidSpec("integrand has no components".into()));
    }
    for &(a, upper) in bounds {
        let ok = a.is_finite()
            && match upper {
                Upper::Finite(b) => b > a,
                Upper::Infinite => true,
            };
        if !ok {
            return Err(NumericsError::InvalidSpec(format!(
                "invalid integration range starting at {a}"
            )));
        }
    }
    let per_batch = samples / BATCHES as u64;
    if per_batch == 0 {
        return Err(NumericsError::InvalidSpec(format!(
            "need at least {BATCHES} samples, got {samples}"
        )));
    }
    let alpha = generator(dims);
    let batch_means: Vec<Vec<f64>> = (0..BATCHES)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch as u64);
            let shift: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
            let mut u = vec![0.0; dims];
            let mut x = vec![0.0; dims];
            let mut values = vec![0.0; outputs];
            let mut sums = vec![0.0; outputs];
            for n in 1..=per_batch {
                let mut jacobian = 1.0;
                for d in 0..dims {
                    u[d] = (shift[d] + n as f64 * alpha[d]).fract();
                    let (a, upper) = bounds[d];
                    match upper {
                        Upper::Finite(b) => {
                            x[d] = a + (b - a) * u[d];
                            jacobian *= b - a;
                        }
                        Upper::Infinite => {
                            let one_minus = 1.0 - u[d];
                            x[d] = a + u[d] / one_minus;
                            jacobian /= one_minus * one_minus;
                        }
                    }
                }
                values.iter_mut().for_each(|v| *v = 0.0);
                f(&x, &mut values);
                for (s, &v) in sums.iter_mut().zip(&values) {
                    if v != 0.0 {
                        *s += v * jacobian;
                    }
                }
            }
            sums.iter().map(|s| s / per_batch as f64).collect()
        })
        .collect();
    let batches = BATCHES as f64;
    Ok((0..outputs)
        .map(|k| {
            let mean = batch_means.iter().map(|b| b[k]).sum::<f64>() / batches;
            let variance = batch_means.iter().map(|b| (b[k] - mean).powi(2)).sum::<f64>()
                / (batches * (batches - 1.0));
            MCEstimate {
                value: mean,
                std_error: variance.sqrt(),
                samples: per_batch * BATCHES as u64,
                seed,
            }
        })
        .collect())
}

/// `alpha_i = phi_d^{-i}` with `phi_d` the positive root of `x^{d+1} = x + 1`.
fn generator(dims: usize) -> Vec<f64> {
    let mut phi: f64 = 2.0;
    for _ in 0..60 {
        phi = (1.0 + phi).powf(1.0 / (dims as f64 + 1.0));
    }
    (1..=dims).map(|i| phi.powi(-(i as i32)).fract()).collect()
}
