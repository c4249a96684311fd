//! Combining the random feasible sets with a Dirichlet prior by rejection.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::Assertion;
use crate::error::{Error, Result};
use crate::graph::{theta_in_feasible, EtaMatrix};
use crate::rng::RngStream;
use crate::simplex::SimplexPoint;

/// One Dirichlet(`alpha`) draw from normalized gammas.
pub fn sample_dirichlet<R: Rng + ?Sized>(alpha: &[f64], rng: &mut R) -> Result<SimplexPoint> {
    if alpha.len() < 2 {
        return Err(Error::InvalidDimension(format!("K={}", alpha.len())));
    }
    let mut g = Vec::with_capacity(alpha.len());
    for &a in alpha {
        let dist = Gamma::new(a, 1.0)
            .map_err(|_| Error::InvalidArgument(format!("Dirichlet parameter {a} must be positive")))?;
        g.push(dist.sample(rng));
    }
    if g.iter().all(|&x| x == 0.0) {
        return sample_dirichlet(alpha, rng);
    }
    Ok(SimplexPoint::normalized(g))
}

#[derive(Debug, Clone)]
pub struct PriorCombination {
    /// Prior draws that landed in their feasible set.
    pub draws: Vec<SimplexPoint>,
    pub attempts: usize,
}

impl PriorCombination {
    pub fn retention_rate(&self) -> f64 {
        self.draws.len() as f64 / self.attempts as f64
    }
}

/// For each feasible set, draws `draws_per_element` points from the
/// Dirichlet(`alpha`) prior and keeps those inside the set. The retained
/// draws follow the Dirichlet(`alpha + counts`) posterior.
pub fn combine_with_dirichlet_prior(
    trace: &[EtaMatrix],
    alpha: &[f64],
    draws_per_element: usize,
    rng: &mut RngStream,
) -> Result<PriorCombination> {
    if trace.is_empty() {
        return Err(Error::NoSamples);
    }
    if trace[0].dim() != alpha.len() {
        return Err(Error::InvalidDimension(format!(
            "prior has {} parameters for K={}",
            alpha.len(),
            trace[0].dim()
        )));
    }
    let streams: Vec<RngStream> = (0..trace.len()).map(|i| rng.child(i as u64)).collect();
    let retained: Vec<Vec<SimplexPoint>> = trace
        .par_iter()
        .zip(streams)
        .map(|(eta, mut r)| {
            let mut kept = Vec::new();
            for _ in 0..draws_per_element {
                let theta = sample_dirichlet(alpha, &mut r)?;
                if theta_in_feasible(eta, &theta) {
                    kept.push(theta);
                }
            }
            Ok(kept)
        })
        .collect::<Result<_>>()?;
    let attempts = trace.len() * draws_per_element;
    let draws: Vec<SimplexPoint> = retained.into_iter().flatten().collect();
    if draws.is_empty() {
        return Err(Error::Starvation { retained: 0, attempts });
    }
    Ok(PriorCombination { draws, attempts })
}

/// `n` draws from the conjugate Dirichlet(`alpha + counts`) posterior.
pub fn conjugate_posterior<R: Rng + ?Sized>(
    counts: &[usize],
    alpha: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<Vec<SimplexPoint>> {
    if counts.len() != alpha.len() {
        return Err(Error::InvalidDimension(format!(
            "{} counts for {} prior parameters",
            counts.len(),
            alpha.len()
        )));
    }
    let post: Vec<f64> = counts.iter().zip(alpha).map(|(&c, &a)| c as f64 + a).collect();
    (0..n).map(|_| sample_dirichlet(&post, rng)).collect()
}

/// Fraction of `draws` satisfying the assertion.
pub fn fraction_holding(draws: &[SimplexPoint], assertion: &Assertion) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::NoSamples);
    }
    assertion.check_dimension(draws[0].dim())?;
    Ok(draws.iter().filter(|d| assertion.holds(d.coords())).count() as f64 / draws.len() as f64)
}
