//! Monte Carlo estimation of perfection probabilities.
//!
//! Trial `t` of cell `(n, m)` draws its game from
//! [`derive_seed`]`(seed, n, m, t)`, so every trial is a pure function of
//! its coordinates. Trials run on the ambient rayon pool and are merged by
//! integer addition, which makes every count, and therefore every CSV byte,
//! independent of the number of workers.

mod csv;
mod stats;

pub use csv::{format_f64, write_csv, CSV_HEADER};
pub use stats::{fit_linear, wilson_half_width, wilson_interval, LinearFit, Z95};

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::decide;
use crate::game::{derive_seed, sample_random_game, Dedup, GameError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("empty clause window {m_min}..={m_max}")]
    EmptyWindow { m_min: usize, m_max: usize },
    #[error("invalid ratio grid: {0}")]
    BadGrid(String),
    #[error("p_{curve} never drops below 1/2 in the scanned window")]
    NoCrossing { curve: &'static str },
    #[error("linear fit needs at least two distinct n")]
    DegenerateFit,
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

/// Sampling parameters shared by every cell of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
    pub dedup: Dedup,
}

impl Sampling {
    pub fn new(samples: u64, seed: u64, dedup: Dedup) -> Self {
        Sampling {
            samples,
            seed,
            dedup,
        }
    }
}

/// Counts for one `(n, m)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbabilityEstimate {
    pub n: usize,
    pub m: usize,
    pub samples: u64,
    pub c_count: u64,
    pub q_count: u64,
    /// Q-perfect but not C-perfect.
    pub pseudo_count: u64,
}

impl ProbabilityEstimate {
    pub fn ratio(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn p_c_exact(&self) -> Ratio<u64> {
        Ratio::new(self.c_count, self.samples)
    }

    pub fn p_q_exact(&self) -> Ratio<u64> {
        Ratio::new(self.q_count, self.samples)
    }

    pub fn p_pseudo_exact(&self) -> Ratio<u64> {
        Ratio::new(self.pseudo_count, self.samples)
    }

    pub fn p_c(&self) -> f64 {
        self.c_count as f64 / self.samples as f64
    }

    pub fn p_q(&self) -> f64 {
        self.q_count as f64 / self.samples as f64
    }

    pub fn p_pseudo(&self) -> f64 {
        self.pseudo_count as f64 / self.samples as f64
    }

    pub fn ci_c(&self) -> f64 {
        wilson_half_width(self.c_count, self.samples)
    }

    pub fn ci_q(&self) -> f64 {
        wilson_half_width(self.q_count, self.samples)
    }

    pub fn ci_pseudo(&self) -> f64 {
        wilson_half_width(self.pseudo_count, self.samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionEstimate {
    pub n: usize,
    pub m_half_q: f64,
    pub m_half_c: f64,
    pub ratio_q: f64,
    pub ratio_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoMax {
    pub n: usize,
    pub m_star: usize,
    pub mu: f64,
    pub samples: u64,
}

/// Default sample count: 50K up to `n = 32`, 10K above, where games are slower.
pub fn default_samples(n: usize) -> u64 {
    if n <= 32 {
        50_000
    } else {
        10_000
    }
}

/// Runs `f` on a dedicated pool of `threads` workers; `0` lets rayon choose.
pub fn with_threads<R: Send>(
    threads: usize,
    f: impl FnOnce() -> R + Send,
) -> Result<R, ExperimentError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn estimate_probabilities(
    n: usize,
    m: usize,
    sampling: &Sampling,
) -> Result<ProbabilityEstimate, ExperimentError> {
    if sampling.samples == 0 {
        return Err(ExperimentError::NoSamples);
    }
    // sampler errors depend on (n, m, dedup) only, so one draw settles them
    sample_random_game(n, m, 0, sampling.dedup)?;
    let (c_count, q_count, pseudo_count) = (0..sampling.samples)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(sampling.seed, n, m, t);
            let game = sample_random_game(n, m, seed, sampling.dedup).expect("validated above");
            let v = decide(&game);
            debug_assert!(v.q_perfect || !v.c_perfect);
            (
                u64::from(v.c_perfect),
                u64::from(v.q_perfect),
                u64::from(v.pseudotelepathic()),
            )
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(ProbabilityEstimate {
        n,
        m,
        samples: sampling.samples,
        c_count,
        q_count,
        pseudo_count,
    })
}

/// Clause counts `round(ratio·n)` for `ratio = min, min + step, …, ≤ max`,
/// deduplicated in increasing order.
pub fn grid_clause_counts(
    n: usize,
    ratio_min: f64,
    ratio_max: f64,
    ratio_step: f64,
) -> Result<Vec<usize>, ExperimentError> {
    if !(ratio_min > 0.0 && ratio_min <= ratio_max && ratio_step > 0.0) {
        return Err(ExperimentError::BadGrid(format!(
            "need 0 < min <= max and step > 0, got {ratio_min}:{ratio_max}:{ratio_step}"
        )));
    }
    // steps are indexed rather than accumulated so that e.g. 1 + 16·0.25
    // lands on 5 exactly
    let steps = ((ratio_max - ratio_min) / ratio_step + 1e-9).floor() as usize;
    let mut ms: Vec<usize> = (0..=steps)
        .map(|k| ((ratio_min + k as f64 * ratio_step) * n as f64).round() as usize)
        .collect();
    ms.dedup();
    Ok(ms)
}

/// One estimate per `(n, round(ratio·n))`, ordered by `n` then `m`.
pub fn sweep_grid(
    n_list: &[usize],
    ratio_min: f64,
    ratio_max: f64,
    ratio_step: f64,
    sampling: &Sampling,
) -> Result<Vec<ProbabilityEstimate>, ExperimentError> {
    if n_list.is_empty() {
        return Err(ExperimentError::BadGrid("no question counts given".into()));
    }
    let mut out = Vec::new();
    for &n in n_list {
        for m in grid_clause_counts(n, ratio_min, ratio_max, ratio_step)? {
            out.push(estimate_probabilities(n, m, sampling)?);
        }
    }
    Ok(out)
}

/// One estimate for every integer `m` in `m_min..=m_max`.
pub fn cross_section(
    n: usize,
    m_min: usize,
    m_max: usize,
    sampling: &Sampling,
) -> Result<Vec<ProbabilityEstimate>, ExperimentError> {
    if m_min > m_max {
        return Err(ExperimentError::EmptyWindow { m_min, m_max });
    }
    (m_min..=m_max)
        .map(|m| estimate_probabilities(n, m, sampling))
        .collect()
}

/// Interpolated `m` where `p` first drops below `½`, scanning rows in order.
fn half_crossing(rows: &[ProbabilityEstimate], p: impl Fn(&ProbabilityEstimate) -> f64) -> Option<f64> {
    let k = rows.iter().position(|r| p(r) < 0.5)?;
    if k == 0 {
        return None;
    }
    let (a, b) = (&rows[k - 1], &rows[k]);
    let (pa, pb) = (p(a), p(b));
    let t = (pa - 0.5) / (pa - pb);
    Some(a.m as f64 + t * (b.m as f64 - a.m as f64))
}

/// ½-crossings of `p_q` and `p_c` along a cross-section sorted by `m`.
pub fn find_transition(rows: &[ProbabilityEstimate]) -> Result<TransitionEstimate, ExperimentError> {
    let m_half_q = half_crossing(rows, ProbabilityEstimate::p_q)
        .ok_or(ExperimentError::NoCrossing { curve: "q" })?;
    let m_half_c = half_crossing(rows, ProbabilityEstimate::p_c)
        .ok_or(ExperimentError::NoCrossing { curve: "c" })?;
    let n = rows[0].n;
    Ok(TransitionEstimate {
        n,
        m_half_q,
        m_half_c,
        ratio_q: m_half_q / n as f64,
        ratio_c: m_half_c / n as f64,
    })
}

impl PseudoMax {
    /// Row with the most pseudotelepathic games; ties go to the smaller `m`.
    pub fn from_rows(rows: &[ProbabilityEstimate]) -> Option<Self> {
        let best = rows
            .iter()
            .min_by_key(|r| (std::cmp::Reverse(r.pseudo_count), r.m))?;
        Some(PseudoMax {
            n: best.n,
            m_star: best.m,
            mu: best.p_pseudo(),
            samples: best.samples,
        })
    }
}

/// Scans `m_min..=m_max` and reports the pseudotelepathy peak together with
/// the scanned rows.
pub fn max_pseudotelepathy(
    n: usize,
    m_min: usize,
    m_max: usize,
    sampling: &Sampling,
) -> Result<(PseudoMax, Vec<ProbabilityEstimate>), ExperimentError> {
    let rows = cross_section(n, m_min, m_max, sampling)?;
    let best = PseudoMax::from_rows(&rows).expect("window is nonempty");
    Ok((best, rows))
}
