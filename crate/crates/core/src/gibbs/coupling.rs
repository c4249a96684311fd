//! Coupled Gibbs chains and total-variation upper bounds from meeting times.
//!
//! Each coupled sweep flips an `ω`-coin. Heads: both chains reuse the same
//! exponentials for every redraw (common random numbers), which contracts
//! them. Tails: each pair of redraws `Unif Δ_k(θ)`, `Unif Δ_k(θ′)` is
//! maximally coupled, which gives the chains a chance to meet exactly.

use rand::Rng;
use rayon::prelude::*;

use super::{draw_in_subsimplex, GibbsState};
use crate::error::{Error, Result};
use crate::graph::conditional_theta;
use crate::rng::RngStream;
use crate::simplex::{containment_margin, exponentials, subsimplex_coords, Dataset, SimplexPoint, TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConfig {
    /// Probability of a common-random-numbers sweep.
    pub omega: f64,
    /// Lag between the two chains.
    pub lag: usize,
    pub max_iterations: usize,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            omega: 0.9,
            lag: 1,
            max_iterations: 10_000,
        }
    }
}

impl CouplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "omega must lie in (0, 1), got {}",
                self.omega
            )));
        }
        if self.lag == 0 {
            return Err(Error::InvalidArgument("lag must be positive".into()));
        }
        if self.max_iterations <= self.lag {
            return Err(Error::InvalidArgument(
                "max_iterations must exceed the lag".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MeetingRecord {
    pub meeting_time: Option<usize>,
    pub lag: usize,
}

/// Advances both chains by one sweep each, coupled. Identical inputs give
/// identical outputs.
pub fn coupled_step<R: Rng + ?Sized>(
    first: &mut GibbsState,
    second: &mut GibbsState,
    cfg: &CouplingConfig,
    rng: &mut R,
) -> Result<()> {
    if first.dataset() != second.dataset() {
        return Err(Error::InvalidArgument(
            "coupled chains must share the dataset".into(),
        ));
    }
    let common = rng.random::<f64>() < cfg.omega;
    let dim = first.num_categories();
    for k in 0..dim {
        let n_k = first.dataset().count(k);
        if n_k == 0 {
            continue;
        }
        let theta1 = conditional_theta(first.eta(), k)?;
        let theta2 = conditional_theta(second.eta(), k)?;
        let mut new1 = Vec::with_capacity(n_k);
        let mut new2 = Vec::with_capacity(n_k);
        for _ in 0..n_k {
            let (u1, u2) = if common {
                let w = SimplexPoint::normalized(exponentials(dim, rng));
                (
                    SimplexPoint::normalized(subsimplex_coords(k, theta1.coords(), w.coords())),
                    SimplexPoint::normalized(subsimplex_coords(k, theta2.coords(), w.coords())),
                )
            } else {
                maximal_coupling(k, theta1.coords(), theta2.coords(), rng)
            };
            new1.push(u1);
            new2.push(u2);
        }
        first.set_points_unchecked(k, new1)?;
        second.set_points_unchecked(k, new2)?;
    }
    first.bump_iteration();
    second.bump_iteration();
    Ok(())
}

/// Maximal coupling of the uniforms on `Δ_k(θ)` and `Δ_k(θ′)`, whose densities
/// are `1/θ_k` and `1/θ′_k` on their supports.
fn maximal_coupling<R: Rng + ?Sized>(
    k: usize,
    theta1: &[f64],
    theta2: &[f64],
    rng: &mut R,
) -> (SimplexPoint, SimplexPoint) {
    let inside = |u: &SimplexPoint, theta: &[f64]| containment_margin(u.coords(), k, theta) >= -TOL;

    let x = draw_in_subsimplex(k, theta1, rng);
    // Accept X for the second chain with probability q(X) / p(X).
    let accept: f64 = rng.random();
    if inside(&x, theta2) && accept * theta2[k] <= theta1[k] {
        return (x.clone(), x);
    }
    loop {
        let y = draw_in_subsimplex(k, theta2, rng);
        let v: f64 = rng.random();
        // Keep Y when v · q(Y) > p(Y).
        if !inside(&y, theta1) || v * theta1[k] > theta2[k] {
            return (x, y);
        }
    }
}

/// Runs a lag-`L` coupled pair from independent random initializations and
/// returns the first `τ > L` with `X_τ = Y_{τ−L}`.
pub fn sample_meeting_time<R: Rng + ?Sized>(
    dataset: &Dataset,
    cfg: &CouplingConfig,
    rng: &mut R,
) -> Result<MeetingRecord> {
    cfg.validate()?;
    let mut x = GibbsState::init_random(dataset.clone(), rng)?;
    let mut y = GibbsState::init_random(dataset.clone(), rng)?;
    for _ in 0..cfg.lag {
        x.step(rng)?;
    }
    let mut t = cfg.lag;
    while t < cfg.max_iterations {
        t += 1;
        coupled_step(&mut x, &mut y, cfg, rng)?;
        if x.points() == y.points() {
            return Ok(MeetingRecord {
                meeting_time: Some(t),
                lag: cfg.lag,
            });
        }
    }
    Ok(MeetingRecord {
        meeting_time: None,
        lag: cfg.lag,
    })
}

/// Independent coupled replicates, each on its own stream drawn from `rng`.
pub fn meeting_times(
    dataset: &Dataset,
    cfg: &CouplingConfig,
    replicates: usize,
    rng: &mut RngStream,
) -> Result<Vec<MeetingRecord>> {
    let streams: Vec<RngStream> = (0..replicates).map(|i| rng.child(i as u64)).collect();
    streams
        .into_par_iter()
        .map(|mut r| sample_meeting_time(dataset, cfg, &mut r))
        .collect()
}

/// Estimated upper bound on the TV distance at iteration `t`:
/// the mean over replicates of `max(0, ⌈(τ − L − t) / L⌉)`.
pub fn tv_upper_bound(meetings: &[MeetingRecord], t: usize) -> Result<f64> {
    if meetings.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut total = 0.0;
    for m in meetings {
        let tau = met(meetings, m)?;
        let lag = m.lag as i64;
        let excess = tau as i64 - lag - t as i64;
        if excess > 0 {
            total += ((excess + lag - 1) / lag) as f64;
        }
    }
    Ok(total / meetings.len() as f64)
}

/// `(t, bound)` for `t = 0 ..= max τ − L`, ending at zero.
pub fn tv_upper_bound_curve(meetings: &[MeetingRecord]) -> Result<Vec<(usize, f64)>> {
    if meetings.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut end = 0usize;
    for m in meetings {
        end = end.max(met(meetings, m)?.saturating_sub(m.lag));
    }
    (0..=end).map(|t| Ok((t, tv_upper_bound(meetings, t)?))).collect()
}

fn met(meetings: &[MeetingRecord], m: &MeetingRecord) -> Result<usize> {
    m.meeting_time.ok_or_else(|| Error::UnmetChains {
        unmet: meetings.iter().filter(|m| m.meeting_time.is_none()).count(),
        total: meetings.len(),
        max_iterations: 0,
    })
}
