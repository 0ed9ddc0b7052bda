//! Offspring distributions for Galton-Watson sampling.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Tolerance used when checking that a pmf sums to one and is critical.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// Geometric(1/2) offspring probability on {0,1,2,...}: `2^{-(k+1)}`.
///
/// This is the unique mean-one geometric distribution; a Galton-Watson tree
/// with this offspring law conditioned on its vertex count is uniform over
/// plane trees of that size.
pub fn geometric_half_pmf(k: u32) -> f64 {
    0.5f64.powi(k as i32 + 1)
}

#[derive(Clone)]
enum Sampler {
    /// Inverse-CDF scan over the pmf.
    Scan,
    /// Bit trick for Geometric(1/2): trailing zeros of a uniform word.
    GeometricHalf,
}

/// An offspring distribution on {0,1,2,...}, given by its pmf evaluated up
/// to a cutoff. The pmf must sum to one within [`PMF_TOLERANCE`] over the
/// cutoff range and must have `pmf(1) < 1`.
#[derive(Clone)]
pub struct OffspringDistribution {
    label: String,
    pmf: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
    cutoff: u32,
    mean: f64,
    sampler: Sampler,
}

impl OffspringDistribution {
    pub fn new<F>(label: &str, cutoff: u32, pmf: F) -> Result<Self>
    where
        F: Fn(u32) -> f64 + Send + Sync + 'static,
    {
        let mut total = 0.0;
        let mut mean = 0.0;
        for k in 0..=cutoff {
            let p = pmf(k);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadDistribution("pmf value outside [0,1]"));
            }
            total += p;
            mean += k as f64 * p;
        }
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::BadDistribution("pmf does not sum to 1"));
        }
        if pmf(1) >= 1.0 {
            return Err(Error::BadDistribution("pmf(1) must be < 1"));
        }
        Ok(OffspringDistribution {
            label: label.to_string(),
            pmf: Arc::new(pmf),
            cutoff,
            mean,
            sampler: Sampler::Scan,
        })
    }

    /// The Geometric(1/2) distribution.
    pub fn geometric_half() -> Self {
        let mut d = Self::new("geometric(1/2)", 200, geometric_half_pmf)
            .expect("geometric(1/2) is a valid critical pmf");
        d.sampler = Sampler::GeometricHalf;
        d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pmf(&self, k: u32) -> f64 {
        (self.pmf)(k)
    }

    /// Mean evaluated up to the cutoff.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// True iff the mean is one within tolerance.
    pub fn is_critical(&self) -> bool {
        (self.mean - 1.0).abs() <= PMF_TOLERANCE
    }

    fn require_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::NotCritical { mean: self.mean })
        }
    }

    /// One draw from the offspring law.
    pub fn sample(&self, rng: &mut SeededRng) -> u32 {
        match self.sampler {
            Sampler::GeometricHalf => geometric_half_draw(rng),
            Sampler::Scan => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for k in 0..=self.cutoff {
                    acc += (self.pmf)(k);
                    if u < acc {
                        return k;
                    }
                }
                self.cutoff
            }
        }
    }

    /// One draw from the size-biased law `k * pmf(k)`; requires criticality.
    pub fn sample_size_biased(&self, rng: &mut SeededRng) -> Result<u32> {
        self.require_critical()?;
        match self.sampler {
            // k * 2^{-(k+1)} on {1,2,...} is 1 plus the sum of two
            // independent Geometric(1/2) draws.
            Sampler::GeometricHalf => {
                Ok(1 + geometric_half_draw(rng) + geometric_half_draw(rng))
            }
            Sampler::Scan => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for k in 1..=self.cutoff {
                    acc += k as f64 * (self.pmf)(k);
                    if u < acc {
                        return Ok(k);
                    }
                }
                Ok(self.cutoff)
            }
        }
    }
}

fn geometric_half_draw(rng: &mut SeededRng) -> u32 {
    // P(trailing_zeros = k) = 2^{-(k+1)} for a uniform word; the all-zero
    // word (probability 2^-64) is resampled.
    loop {
        let w: u64 = rng.random();
        if w != 0 {
            return w.trailing_zeros();
        }
    }
}

impl fmt::Debug for OffspringDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OffspringDistribution")
            .field("label", &self.label)
            .field("mean", &self.mean)
            .finish()
    }
}

/// The size-biased probability `k * pmf(k)`; errors unless the distribution
/// is critical.
pub fn size_biased_pmf(xi: &OffspringDistribution, k: u32) -> Result<f64> {
    xi.require_critical()?;
    Ok(k as f64 * xi.pmf(k))
}
