//! Assertion-level summaries of random feasible sets and the ways of
//! combining them with other sources of information.
//!
//! For an assertion `Σ`, `p` is the probability that the feasible set lies
//! inside `Σ`, `q` that it misses `Σ`, and `r = 1 − p − q` that it straddles
//! the boundary.

mod assertion;
mod linkage;
mod prior;
mod sequential;
mod table;

pub use assertion::Assertion;
pub use linkage::{
    dirichlet_dsm_interval, dirichlet_dsm_phi, linkage_map, linkage_phi_pqr, phi_curve, LinkageSummary, PHI_RANGE,
};
pub use prior::{
    combine_with_dirichlet_prior, conjugate_posterior, fraction_holding, sample_dirichlet, PriorCombination,
};
pub use sequential::{
    sequential_assimilate, sequential_pqr_path, systematic_resample, WeightedEnsemble, DEFAULT_ESS_THRESHOLD,
};
pub use table::{table_stats, TableStats};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_feasible, EtaMatrix};
use crate::polytope::{AssertionRelation, FeasibleSet};

/// Probabilities "for", "against" and "don't know".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PqrTriple {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl PqrTriple {
    pub fn from_counts(contained: usize, disjoint: usize, straddles: usize) -> Result<Self> {
        let n = contained + disjoint + straddles;
        if n == 0 {
            return Err(Error::NoSamples);
        }
        Ok(Self::from_masses(contained as f64, disjoint as f64, straddles as f64))
    }

    /// Normalizes non-negative masses.
    pub(crate) fn from_masses(contained: f64, disjoint: f64, straddles: f64) -> Self {
        let total = contained + disjoint + straddles;
        let p = contained / total;
        let q = disjoint / total;
        Self { p, q, r: straddles / total }
    }

    /// Plausibility `1 − q`.
    pub fn upper(&self) -> f64 {
        1.0 - self.q
    }

    pub fn vacuous() -> Self {
        Self { p: 0.0, q: 0.0, r: 1.0 }
    }
}

/// Tally of relations into a triple.
fn tally<I: IntoIterator<Item = AssertionRelation>>(relations: I) -> Result<PqrTriple> {
    let mut counts = [0usize; 3];
    for rel in relations {
        counts[rel as usize] += 1;
    }
    PqrTriple::from_counts(counts[0], counts[1], counts[2])
}

/// `(p, q, r)` of one assertion over a trace of feasible sets.
pub fn pqr(trace: &[EtaMatrix], assertion: &Assertion, probes: usize) -> Result<PqrTriple> {
    Ok(pqr_many(trace, std::slice::from_ref(assertion), probes)?.remove(0))
}

/// `(p, q, r)` of several assertions, enumerating each set's vertices once.
pub fn pqr_many(trace: &[EtaMatrix], assertions: &[Assertion], probes: usize) -> Result<Vec<PqrTriple>> {
    if trace.is_empty() {
        return Err(Error::NoSamples);
    }
    for a in assertions {
        a.check_dimension(trace[0].dim())?;
    }
    let relations: Vec<Vec<AssertionRelation>> = trace
        .par_iter()
        .map(|eta| {
            let set = FeasibleSet::new(eta.clone());
            assertions.iter().map(|a| set.classify(a, probes)).collect()
        })
        .collect::<Result<_>>()?;
    (0..assertions.len())
        .map(|j| tally(relations.iter().map(|row| row[j])))
        .collect()
}

/// Dempster's rule for two feasible sets: the intersection, or `None` when it
/// is empty.
pub fn combine_eta(a: &EtaMatrix, b: &EtaMatrix) -> Result<Option<EtaMatrix>> {
    let combined = a.entrywise_min(b)?;
    Ok(is_feasible(&combined).then_some(combined))
}

/// Minimal extension of a point `(θ_1, θ_2)` known only on the first two
/// categories: `η_{1→2} = θ_2/θ_1`, `η_{2→1} = θ_1/θ_2`, every other entry
/// vacuous.
pub fn up_project(partial: (f64, f64), dim: usize) -> Result<EtaMatrix> {
    let (a, b) = partial;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidPoint(format!(
            "partial point ({a}, {b}) must be strictly positive"
        )));
    }
    if ((a + b) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPoint(format!(
            "partial point ({a}, {b}) must sum to one"
        )));
    }
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("K={dim}")));
    }
    let mut eta = EtaMatrix::vacuous(dim);
    eta.set(0, 1, b / a);
    eta.set(1, 0, a / b);
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_feasible_eta;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trivial_assertions() {
        let mut rng = RngStream::new(1, 0);
        let trace: Vec<EtaMatrix> = (0..20).map(|_| random_feasible_eta(3, &mut rng)).collect();
        let t = pqr(&trace, &Assertion::everything(), 0).unwrap();
        assert_eq!((t.p, t.q, t.r), (1.0, 0.0, 0.0));
        let t = pqr(&trace, &Assertion::nothing(), 0).unwrap();
        assert_eq!((t.p, t.q, t.r), (0.0, 1.0, 0.0));
        assert_eq!(pqr(&[], &Assertion::everything(), 0), Err(Error::NoSamples));
    }

    #[test]
    fn independence_needs_four_categories() {
        let trace = vec![EtaMatrix::vacuous(3)];
        assert!(matches!(
            pqr(&trace, &Assertion::positive_association(), 0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn triples_sum_to_one() {
        let mut rng = RngStream::new(2, 0);
        let trace: Vec<EtaMatrix> = (0..50).map(|_| random_feasible_eta(4, &mut rng)).collect();
        let assertions: Vec<Assertion> = (1..10)
            .map(|i| Assertion::coordinate_at_most(1, i as f64 / 10.0))
            .chain([Assertion::positive_association()])
            .collect();
        for t in pqr_many(&trace, &assertions, 64).unwrap() {
            assert!(t.p >= 0.0 && t.q >= 0.0 && t.r >= 0.0);
            assert_abs_diff_eq!(t.p + t.q + t.r, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn combination_examples() {
        let mut rng = RngStream::new(3, 0);
        let eta = random_feasible_eta(4, &mut rng);
        assert_eq!(combine_eta(&eta, &EtaMatrix::vacuous(4)).unwrap(), Some(eta.clone()));
        assert_eq!(combine_eta(&eta, &eta).unwrap(), Some(eta.clone()));

        let mut a = EtaMatrix::vacuous(2);
        a.set(0, 1, 2.0);
        let mut b = EtaMatrix::vacuous(2);
        b.set(1, 0, 0.4);
        assert_eq!(combine_eta(&a, &b).unwrap(), None);
        assert!(combine_eta(&a, &EtaMatrix::vacuous(3)).is_err());
    }

    #[test]
    fn combination_is_associative_and_commutative() {
        let mut rng = RngStream::new(4, 0);
        for _ in 0..50 {
            let a = random_feasible_eta(3, &mut rng);
            let b = random_feasible_eta(3, &mut rng);
            let c = random_feasible_eta(3, &mut rng);
            assert_eq!(a.entrywise_min(&b).unwrap(), b.entrywise_min(&a).unwrap());
            assert_eq!(
                a.entrywise_min(&b).unwrap().entrywise_min(&c).unwrap(),
                a.entrywise_min(&b.entrywise_min(&c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn up_projection() {
        let eta = up_project((2.0 / 3.0, 1.0 / 3.0), 3).unwrap();
        assert_abs_diff_eq!(eta.get(0, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eta.get(1, 0), 2.0, epsilon = 1e-15);
        for (k, l) in [(0, 2), (2, 0), (1, 2), (2, 1)] {
            assert_eq!(eta.get(k, l), f64::INFINITY);
        }
        assert_eq!(combine_eta(&eta, &EtaMatrix::vacuous(3)).unwrap(), Some(eta.clone()));

        // Inference on θ_3 is vacuous for any strict sub-range.
        let trace = vec![eta; 3];
        for c in [0.05, 0.3, 0.6, 0.95] {
            let t = pqr(&trace, &Assertion::coordinate_at_most(2, c), 0).unwrap();
            assert_eq!((t.p, t.q, t.r), (0.0, 0.0, 1.0));
        }
        assert!(up_project((1.0, 0.0), 3).is_err());
    }
}
