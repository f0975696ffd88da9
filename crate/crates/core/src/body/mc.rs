//! Rejection sampling in the bounding box.
//!
//! The sample budget is cut into fixed chunks; chunk `k` draws from stream
//! `k` of a ChaCha8 generator seeded with the run seed. Only integer counts
//! are combined, so results do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::section::{SectionKind, SectionProfile, Slices};
use super::{check_direction, dot, ConvexBody};
use crate::profile::SampledProfile;
use crate::{Error, Result};

const CHUNK: u64 = 1 << 15;
pub const MIN_SAMPLES: u64 = 10_000;
pub const MIN_BINS: usize = 16;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_BINS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSpec {
    pub samples: u64,
    pub bins: usize,
    pub seed: u64,
}

impl McSpec {
    pub fn new(samples: u64, bins: usize, seed: u64) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::param(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
        }
        if bins < MIN_BINS {
            return Err(Error::param(format!("need at least {MIN_BINS} bins, got {bins}")));
        }
        Ok(Self { samples, bins, seed })
    }

    /// Default budget (10⁶ samples, 256 bins) with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            bins: DEFAULT_BINS,
            seed,
        }
    }
}

/// Runs `visit` on every sample and sums the per-chunk tallies.
fn tally<F>(body: &ConvexBody, spec: &McSpec, width: usize, visit: F) -> Vec<u64>
where
    F: Fn(&[f64], &mut [u64]) + Sync,
{
    let (lo, hi) = body.bounding_box();
    let n = lo.len();
    let chunks = spec.samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(k);
            let count = CHUNK.min(spec.samples - k * CHUNK);
            let mut acc = vec![0u64; width];
            let mut x = vec![0.0; n];
            for _ in 0..count {
                for d in 0..n {
                    x[d] = lo[d] + (hi[d] - lo[d]) * rng.random::<f64>();
                }
                visit(&x, &mut acc);
            }
            acc
        })
        .reduce(
            || vec![0u64; width],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn box_volume(body: &ConvexBody) -> f64 {
    let (lo, hi) = body.bounding_box();
    lo.iter().zip(&hi).map(|(a, b)| b - a).product()
}

/// Direct point-count estimate of a halfspace fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    /// Binomial standard error `sqrt(p(1-p)/inside)`.
    pub sigma: f64,
    pub inside: u64,
    pub below: u64,
    pub samples: u64,
    pub seed: u64,
}

/// Fraction of the body's volume with `⟨x, u⟩ ≤ cut`.
pub fn mc_halfspace_fraction(body: &ConvexBody, u: &[f64], cut: f64, spec: &McSpec) -> Result<McEstimate> {
    check_direction(u, body.dim())?;
    let counts = tally(body, spec, 2, |x, acc| {
        if body.contains(x) {
            acc[0] += 1;
            if dot(x, u) <= cut {
                acc[1] += 1;
            }
        }
    });
    let (inside, below) = (counts[0], counts[1]);
    if inside == 0 {
        return Err(Error::Degenerate("no sample landed inside the body".into()));
    }
    let p = below as f64 / inside as f64;
    Ok(McEstimate {
        value: p,
        sigma: (p * (1.0 - p) / inside as f64).sqrt(),
        inside,
        below,
        samples: spec.samples,
        seed: spec.seed,
    })
}

/// Section profile estimated from slab counts.
///
/// Bin `j` of width `w` estimates the mean section volume over the slab as
/// `V · c_j / (N w)` with `V` the bounding-box volume; values sit at bin
/// centres and are held flat out to the support endpoints.
pub fn mc_section_profile(body: &ConvexBody, u: &[f64], spec: &McSpec) -> Result<SectionProfile> {
    let (a, b) = body.support_interval(u)?;
    let bins = spec.bins;
    let width = (b - a) / bins as f64;
    let counts = tally(body, spec, bins + 1, |x, acc| {
        if body.contains(x) {
            let j = (((dot(x, u) - a) / width) as usize).min(bins - 1);
            acc[j] += 1;
            acc[bins] += 1;
        }
    });
    let inside = counts[bins];
    if inside == 0 {
        return Err(Error::Degenerate("no sample landed inside the body".into()));
    }
    let n = spec.samples as f64;
    let scale = box_volume(body) / (n * width);
    let mut samples: Vec<(f64, f64, f64)> = counts[..bins]
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let c = c as f64;
            // an empty bin still carries about one count of uncertainty
            let sigma = scale * (c.max(1.0) * (1.0 - c / n)).sqrt();
            (a + (j as f64 + 0.5) * width, scale * c, sigma)
        })
        .collect();
    let (first, last) = (samples[0], samples[bins - 1]);
    samples.insert(0, (a, first.1, first.2));
    samples.push((b, last.1, last.2));
    Ok(SectionProfile::new(
        u.to_vec(),
        (a, b),
        SectionKind::MonteCarlo {
            seed: spec.seed,
            samples: spec.samples,
            bins,
            inside,
        },
        Slices::Sampled(SampledProfile::new(samples)?),
    ))
}
