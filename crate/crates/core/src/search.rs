//! Random concave profiles and a local search for small tail ratios.
//!
//! Everything here is seeded. Restarts and sweep cells run on rayon but each
//! one owns its generator, and results are combined by index, so a fixed seed
//! gives identical output on any thread count.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{functional_bound, verify_functional};
use crate::profile::{tail_mass_ratio, ConcaveProfile, PiecewiseLinear};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Slack below which a search or sweep result counts as a counterexample.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Mixes `index` into `seed` so nearby indices get unrelated streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_concave(rng: &mut impl Rng, m: usize, (a, b): (f64, f64)) -> (Vec<f64>, Vec<f64>) {
    let mut t: Vec<f64> = (0..m - 2).map(|_| rng.random_range(a..b)).collect();
    t.push(a);
    t.push(b);
    t.sort_by(f64::total_cmp);
    t.dedup();
    // a duplicate draw is astronomically unlikely; refill on a uniform grid
    if t.len() < m {
        t = (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect();
    }
    let mut slopes: Vec<f64> = (0..m - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
    slopes.sort_by(|x, y| y.total_cmp(x));
    let mut y = vec![0.0; m];
    for i in 1..m {
        y[i] = y[i - 1] + slopes[i - 1] * (t[i] - t[i - 1]) / (b - a);
    }
    // one draw in three touches zero at an endpoint
    let floor = if rng.random_bool(1.0 / 3.0) {
        0.0
    } else {
        rng.random_range(0.0..0.5)
    };
    let lo = y[0].min(y[m - 1]);
    y.iter_mut().for_each(|v| *v += floor - lo);
    (t, y)
}

/// Random concave profile with `m` breakpoints on `domain`, maximum 1.
///
/// Slopes are drawn uniformly and sorted decreasing, so concavity holds by
/// construction.
pub fn random_concave(seed: u64, m: usize, domain: (f64, f64)) -> Result<ConcaveProfile> {
    if m < 3 {
        return Err(Error::param(format!("need at least 3 breakpoints, got {m}")));
    }
    let (a, b) = domain;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::param(format!("bad domain [{a}, {b}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (t, y) = draw_concave(&mut rng, m, domain);
        let top = y.iter().copied().fold(0.0, f64::max);
        if top > 0.0 {
            if let Ok(h) = ConcaveProfile::new(t.into_iter().zip(y.into_iter().map(|v| v / top))) {
                return Ok(h);
            }
        }
    }
}

/// Step size per coordinate move, shrunk after a full pass with no
/// accepted move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub initial: f64,
    pub decay: f64,
    pub floor: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self {
            initial: 0.25,
            decay: 0.5,
            floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub breakpoints: usize,
    /// Proposals per restart.
    pub budget: usize,
    pub schedule: StepSchedule,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub restarts: usize,
}

impl SearchConfig {
    pub fn new(alpha: f64, beta: f64, seed: u64) -> Self {
        Self {
            breakpoints: 16,
            budget: 10_000,
            schedule: StepSchedule::default(),
            seed,
            alpha,
            beta,
            restarts: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.breakpoints < 3 {
            return Err(Error::param(format!("need at least 3 breakpoints, got {}", self.breakpoints)));
        }
        if self.budget < 1 || self.restarts < 1 {
            return Err(Error::param("budget and restarts must be at least 1"));
        }
        let s = &self.schedule;
        if !(s.initial > 0.0 && s.floor > 0.0 && s.decay > 0.0 && s.decay < 1.0) {
            return Err(Error::param(format!("bad step schedule {s:?}")));
        }
        functional_bound(self.alpha, self.beta).map(|_| ())
    }
}

/// One accepted move of the winning restart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub coordinate: usize,
    pub step: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_profile: ConcaveProfile,
    pub best_ratio: f64,
    pub bound: f64,
    pub gap: f64,
    /// Restart that produced the best profile.
    pub restart: usize,
    pub trace: Vec<TraceStep>,
}

impl SearchResult {
    pub fn violation(&self) -> bool {
        self.gap < -VIOLATION_TOL
    }
}

/// Re-sorts slopes into decreasing order, lifts the minimum to zero and
/// scales the maximum to one. `None` if the result is not a valid profile.
fn project(t: &[f64], y: &mut [f64]) -> Option<()> {
    let m = t.len();
    let mut slopes: Vec<f64> = (1..m).map(|i| (y[i] - y[i - 1]) / (t[i] - t[i - 1])).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    for i in 1..m {
        y[i] = y[i - 1] + slopes[i - 1] * (t[i] - t[i - 1]);
    }
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo > 0.0) {
        return None;
    }
    y.iter_mut().for_each(|v| *v = (*v - lo) / (hi - lo));
    y[1..m - 1].iter().all(|&v| v > 0.0).then_some(())
}

fn objective(t: &[f64], y: &[f64], alpha: f64, beta: f64, spec: &QuadratureSpec) -> Option<f64> {
    let h = PiecewiseLinear::new(t.iter().copied().zip(y.iter().copied())).ok()?;
    tail_mass_ratio(&h, alpha, beta, spec).ok()
}

struct Run {
    t: Vec<f64>,
    y: Vec<f64>,
    ratio: f64,
    trace: Vec<TraceStep>,
}

fn descend(cfg: &SearchConfig, restart: usize, spec: &QuadratureSpec) -> Result<Run> {
    let start = random_concave(derive_seed(cfg.seed, restart as u64), cfg.breakpoints, (0.0, 1.0))?;
    let (t, mut y): (Vec<f64>, Vec<f64>) = start.breakpoints().unzip();
    let mut ratio = objective(&t, &y, cfg.alpha, cfg.beta, spec)
        .ok_or_else(|| Error::Degenerate("objective undefined at start".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed ^ 0x5EA7C4, restart as u64));
    let m = t.len();
    let mut order: Vec<usize> = (0..m).collect();
    let mut step = cfg.schedule.initial;
    let mut trace = Vec::new();
    let mut iteration = 0;
    let mut trial = y.clone();
    'outer: while iteration < cfg.budget {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &i in &order {
            for dir in [1.0, -1.0] {
                if iteration == cfg.budget {
                    break 'outer;
                }
                iteration += 1;
                trial.copy_from_slice(&y);
                trial[i] += dir * step;
                if project(&t, &mut trial).is_none() {
                    continue;
                }
                if let Some(r) = objective(&t, &trial, cfg.alpha, cfg.beta, spec) {
                    if r < ratio {
                        ratio = r;
                        y.copy_from_slice(&trial);
                        improved = true;
                        trace.push(TraceStep {
                            iteration,
                            coordinate: i,
                            step: dir * step,
                            ratio,
                        });
                        break;
                    }
                }
            }
        }
        if !improved {
            step = (step * cfg.schedule.decay).max(cfg.schedule.floor);
        }
    }
    Ok(Run { t, y, ratio, trace })
}

/// Multi-restart coordinate descent on the upper tail ratio over concave
/// profiles on `[0, 1]` with maximum 1.
pub fn minimize_tail_ratio(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let spec = QuadratureSpec::default();
    let bound = functional_bound(cfg.alpha, cfg.beta)?.value;
    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| descend(cfg, k, &spec))
        .collect::<Result<Vec<_>>>()?;
    let (restart, best) = runs
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.ratio.total_cmp(&b.ratio).then(i.cmp(j)))
        .expect("at least one restart");
    let best_profile = ConcaveProfile::new(best.t.into_iter().zip(best.y))?;
    Ok(SearchResult {
        config: *cfg,
        best_profile,
        best_ratio: best.ratio,
        bound,
        gap: best.ratio - bound,
        restart,
        trace: best.trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub trials: usize,
    pub min_slack: f64,
    pub argmin_profile_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Trials whose report failed, over all cells.
    pub violations: usize,
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["alpha", "beta", "trials", "min_slack", "argmin_profile_hash", "seed"])
                .map_err(|e| Error::Validation(e.to_string()))?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Validation(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Validation(e.to_string()))
    }
}

/// First 16 hex digits of the SHA-256 of the profile's JSON form.
pub fn profile_hash(h: &ConcaveProfile) -> String {
    let json = serde_json::to_vec(h).expect("profile serializes");
    Sha256::digest(&json)[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Grid used by `sweep --grid default`.
pub const DEFAULT_GRID: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

/// Runs `verify_functional` on `trials` random profiles per `(α, β)` cell.
///
/// Profiles have between 3 and 8 breakpoints on `[0, 1]`. Cells are ordered
/// α-major.
pub fn sweep(alphas: &[f64], betas: &[f64], trials: usize, seed: u64) -> Result<SweepTable> {
    let cells: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let spec = QuadratureSpec::default();
    let results = cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(alpha, beta))| {
            functional_bound(alpha, beta)?;
            let cell_seed = derive_seed(seed, idx as u64);
            let mut worst: Option<(f64, ConcaveProfile)> = None;
            let mut violations = 0;
            for k in 0..trials {
                let s = derive_seed(cell_seed, k as u64);
                let m = 3 + (s % 6) as usize;
                let h = random_concave(s, m, (0.0, 1.0))?;
                let report = verify_functional(&h, alpha, beta, &spec)?;
                if !report.pass {
                    violations += 1;
                }
                if worst.as_ref().is_none_or(|(w, _)| report.slack < *w) {
                    worst = Some((report.slack, h));
                }
            }
            let (min_slack, hash) = match worst {
                Some((s, h)) => (s, profile_hash(&h)),
                None => (f64::NAN, String::new()),
            };
            Ok((
                SweepRow {
                    alpha,
                    beta,
                    trials,
                    min_slack,
                    argmin_profile_hash: hash,
                    seed: cell_seed,
                },
                violations,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = results.iter().map(|(_, v)| v).sum();
    Ok(SweepTable {
        rows: results.into_iter().map(|(r, _)| r).collect(),
        violations,
    })
}
