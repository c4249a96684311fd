//! Sequential assimilation of observations with a weighted particle ensemble.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Assertion, PqrTriple};
use crate::error::{Error, Result};
use crate::gibbs::GibbsState;
use crate::polytope::{AssertionRelation, FeasibleSet};
use crate::rng::RngStream;
use crate::simplex::{check_category, Dataset};

pub const DEFAULT_ESS_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct WeightedEnsemble {
    particles: Vec<GibbsState>,
    log_weights: Vec<f64>,
}

impl WeightedEnsemble {
    /// Equally weighted particles.
    pub fn new(particles: Vec<GibbsState>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::NoSamples);
        }
        let dim = particles[0].num_categories();
        if particles.iter().any(|p| p.num_categories() != dim) {
            return Err(Error::InvalidDimension("particles disagree on K".into()));
        }
        let log_weights = vec![0.0; particles.len()];
        Ok(Self { particles, log_weights })
    }

    /// `n` particles with no observations: every feasible set is the whole simplex.
    pub fn vacuous(dim: usize, n: usize) -> Result<Self> {
        let dataset = Dataset::new(dim, Vec::new())?;
        let state = GibbsState::from_points(dataset, vec![Vec::new(); dim])?;
        Self::new(vec![state; n])
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn particles(&self) -> &[GibbsState] {
        &self.particles
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn num_categories(&self) -> usize {
        self.particles[0].num_categories()
    }

    /// Weights normalized to sum to one.
    pub fn weights(&self) -> Vec<f64> {
        let max = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_weights.iter().map(|lw| (lw - max).exp()).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    /// Effective sample size `(Σw)² / Σw²`.
    pub fn ess(&self) -> f64 {
        let w = self.weights();
        1.0 / w.iter().map(|x| x * x).sum::<f64>()
    }

    /// Weighted `(p, q, r)` of the particles' feasible sets.
    pub fn pqr(&self, assertion: &Assertion, probes: usize) -> Result<PqrTriple> {
        assertion.check_dimension(self.num_categories())?;
        let relations: Vec<AssertionRelation> = self
            .particles
            .par_iter()
            .map(|p| FeasibleSet::new(p.eta().clone()).classify(assertion, probes))
            .collect::<Result<_>>()?;
        let mut mass = [0.0; 3];
        for (rel, w) in relations.into_iter().zip(self.weights()) {
            mass[rel as usize] += w;
        }
        Ok(PqrTriple::from_masses(mass[0], mass[1], mass[2]))
    }

    /// One JSON object per particle: `{"eta": [...], "weight": w}`.
    pub fn write_json<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            eta: &'a crate::graph::EtaMatrix,
            weight: f64,
        }
        for (p, weight) in self.particles.iter().zip(self.weights()) {
            serde_json::to_writer(&mut *out, &Line { eta: p.eta(), weight })?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Systematic resampling: indices `i` for the points `(j + u)/n`, `u ∈ [0, 1)`,
/// against the cumulative weights.
pub fn systematic_resample(weights: &[f64], u: f64) -> Vec<usize> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut cumulative = weights[0] / total;
    let mut i = 0;
    for j in 0..n {
        let point = (j as f64 + u) / n as f64;
        while point > cumulative && i + 1 < n {
            i += 1;
            cumulative += weights[i] / total;
        }
        out.push(i);
    }
    out
}

/// Assimilates one observation in category `k` into every particle, weighting
/// each by the volume `θ_k` of its proposal. When the effective sample size
/// drops below `ess_threshold · n` the ensemble is resampled and every particle
/// takes one Gibbs sweep.
pub fn sequential_assimilate(
    ensemble: WeightedEnsemble,
    k: usize,
    rng: &mut RngStream,
    ess_threshold: f64,
) -> Result<WeightedEnsemble> {
    check_category(k, ensemble.num_categories())?;
    if !(0.0..=1.0).contains(&ess_threshold) {
        return Err(Error::InvalidArgument(format!(
            "ESS threshold must lie in [0, 1], got {ess_threshold}"
        )));
    }
    let n = ensemble.len();
    let WeightedEnsemble {
        mut particles,
        mut log_weights,
    } = ensemble;

    let streams: Vec<RngStream> = (0..n).map(|i| rng.child(i as u64)).collect();
    let increments: Vec<f64> = particles
        .par_iter_mut()
        .zip(streams)
        .map(|(p, mut r)| p.assimilate(k, &mut r))
        .collect::<Result<_>>()?;
    for (lw, w) in log_weights.iter_mut().zip(increments) {
        *lw += w.ln();
    }
    if log_weights.iter().all(|lw| !lw.is_finite()) {
        return Err(Error::DegenerateWeights);
    }
    let mut ensemble = WeightedEnsemble { particles, log_weights };
    if ensemble.ess() < ess_threshold * n as f64 {
        let idx = systematic_resample(&ensemble.weights(), rng.random::<f64>());
        let streams: Vec<RngStream> = (0..n).map(|i| rng.child(i as u64)).collect();
        let particles: Vec<GibbsState> = idx
            .into_par_iter()
            .zip(streams)
            .map(|(i, mut r)| {
                let mut p = ensemble.particles[i].clone();
                p.step(&mut r)?;
                Ok(p)
            })
            .collect::<Result<_>>()?;
        ensemble = WeightedEnsemble::new(particles)?;
    }
    Ok(ensemble)
}

/// Assimilates `observations` one at a time from a vacuous ensemble and
/// returns the weighted `(p, q, r)` after each, starting with the vacuous
/// triple at `n = 0`.
pub fn sequential_pqr_path(
    observations: &[usize],
    dim: usize,
    particles: usize,
    ess_threshold: f64,
    assertion: &Assertion,
    probes: usize,
    rng: &mut RngStream,
) -> Result<Vec<(usize, PqrTriple)>> {
    if particles == 0 {
        return Err(Error::InvalidArgument("need at least one particle".into()));
    }
    let mut ensemble = WeightedEnsemble::vacuous(dim, particles)?;
    let mut path = vec![(0, ensemble.pqr(assertion, probes)?)];
    for (i, &k) in observations.iter().enumerate() {
        ensemble = sequential_assimilate(ensemble, k, rng, ess_threshold)?;
        path.push((i + 1, ensemble.pqr(assertion, probes)?));
    }
    Ok(path)
}
