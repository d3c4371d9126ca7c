//! Strictly positive scalarization weights and their seeded sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distance kept from the simplex boundary by the sampler.
pub const BOUNDARY_MARGIN: f64 = 1e-3;

/// Minimum number of sampled weight vectors in a sweep.
pub const MIN_SWEEP_SAMPLES: usize = 10;

/// Positive weights `λ₁..λ_k` summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexWeights<T> {
    values: Vec<T>,
}

impl<T: Scalar> SimplexWeights<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if values.iter().any(|v| !(*v > T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidWeights(
                "every weight must be positive".into(),
            ));
        }
        let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if (sum - T::one()).abs() > tol {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self { values })
    }

    /// Equal weights `1/k`.
    pub fn barycenter(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        Self::new(vec![T::one() / T::lit(k as f64); k])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Sample count and seed of a weight sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub samples: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples < MIN_SWEEP_SAMPLES {
            return Err(Error::InvalidScenario(format!(
                "sweep needs at least {MIN_SWEEP_SAMPLES} samples, got {samples}"
            )));
        }
        Ok(Self { samples, seed })
    }
}

/// Per-sample seed, so sample `i` is independent of evaluation order.
pub(crate) fn sample_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `spec.samples` weight vectors of dimension `dim`.
///
/// Sample 0 is the barycenter. The rest are flat-Dirichlet draws whose first
/// exponential is stratified over `samples − 1` equal-probability strata,
/// then shrunk into the interior so every weight is at least
/// [`BOUNDARY_MARGIN`].
pub fn sample_simplex<T: Scalar>(dim: usize, spec: &SweepSpec) -> Result<Vec<SimplexWeights<T>>> {
    if dim < 2 {
        return Err(Error::InvalidWeights(
            "simplex dimension must be at least 2".into(),
        ));
    }
    let margin = BOUNDARY_MARGIN;
    let spread = 1.0 - dim as f64 * margin;
    let strata = spec.samples.saturating_sub(1).max(1) as f64;

    let mut out = Vec::with_capacity(spec.samples);
    out.push(SimplexWeights::barycenter(dim)?);
    for i in 1..spec.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(spec.seed, i as u64));
        let draws: Vec<f64> = (0..dim)
            .map(|c| {
                let u: f64 = rng.random();
                let u = if c == 0 {
                    ((i - 1) as f64 + u) / strata
                } else {
                    u
                };
                -(1.0 - u).max(f64::MIN_POSITIVE).ln()
            })
            .collect();
        let total: f64 = draws.iter().sum();
        let mut values: Vec<f64> = draws
            .iter()
            .map(|d| margin + spread * d / total.max(f64::MIN_POSITIVE))
            .collect();
        // absorb rounding so the sum is 1 to the last bit we can manage
        let sum: f64 = values.iter().sum();
        values.iter_mut().for_each(|v| *v /= sum);
        out.push(SimplexWeights::new(
            values.into_iter().map(T::lit).collect(),
        )?);
    }
    Ok(out)
}
