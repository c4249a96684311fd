//! Inference on a scalar parameter `φ ∈ (0, 1)` of a one-dimensional
//! sub-model `θ(φ) = A φ + b` of the four-category simplex, the genetic
//! linkage model.

use rand::Rng;
use rayon::prelude::*;

use super::{sample_dirichlet, PqrTriple};
use crate::error::{Error, Result};
use crate::graph::EtaMatrix;
use crate::polytope::{segment_phi_interval, Interval};

pub const PHI_RANGE: Interval = Interval {
    lower: 0.0,
    upper: 1.0,
};

/// `(A, b)` with `θ(φ) = (1/2 + φ/4, (1 − φ)/4, (1 − φ)/4, φ/4)`.
pub fn linkage_map() -> (Vec<f64>, Vec<f64>) {
    (vec![0.25, -0.25, -0.25, 0.25], vec![0.5, 0.25, 0.25, 0.0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageSummary {
    /// `(c, pqr of {φ ≤ c})` for each grid point.
    pub curve: Vec<(f64, PqrTriple)>,
    /// Fraction of feasible sets that meet the sub-model.
    pub retention_rate: f64,
    pub retained: usize,
}

/// `(p, q, r)` of `{φ ≤ c}` over the non-empty intervals.
pub fn phi_curve(intervals: &[Option<Interval>], grid: &[f64]) -> Result<Vec<(f64, PqrTriple)>> {
    let kept: Vec<Interval> = intervals.iter().flatten().copied().collect();
    if kept.is_empty() {
        return Err(Error::Starvation {
            retained: 0,
            attempts: intervals.len(),
        });
    }
    grid.iter()
        .map(|&c| {
            let below = kept.iter().filter(|iv| iv.upper <= c).count();
            let above = kept.iter().filter(|iv| iv.lower > c).count();
            Ok((c, PqrTriple::from_counts(below, above, kept.len() - below - above)?))
        })
        .collect()
}

/// Restricts each feasible set of the trace to the linkage segment and
/// summarizes the resulting random intervals of `φ`.
pub fn linkage_phi_pqr(trace: &[EtaMatrix], grid: &[f64]) -> Result<LinkageSummary> {
    if trace.is_empty() {
        return Err(Error::NoSamples);
    }
    if trace[0].dim() != 4 {
        return Err(Error::InvalidDimension(format!(
            "the linkage model needs K=4, got K={}",
            trace[0].dim()
        )));
    }
    let (a, b) = linkage_map();
    let intervals: Vec<Option<Interval>> = trace
        .par_iter()
        .map(|eta| segment_phi_interval(eta, &a, &b, PHI_RANGE))
        .collect();
    let retained = intervals.iter().flatten().count();
    Ok(LinkageSummary {
        curve: phi_curve(&intervals, grid)?,
        retention_rate: retained as f64 / trace.len() as f64,
        retained,
    })
}

/// Random `φ` interval of the Dirichlet-DSM for a draw
/// `z ~ Dirichlet(1, N_1, …, N_4)`; `None` on conflict.
pub fn dirichlet_dsm_interval(z: &[f64]) -> Option<Interval> {
    let lower = (4.0 * z[1] - 2.0).max(4.0 * z[4]);
    let upper = (1.0 - 4.0 * z[2]).min(1.0 - 4.0 * z[3]);
    (lower <= upper).then(|| Interval::new(lower, upper))
}

/// `draws` random intervals of the Dirichlet-DSM for the counts `N_1..N_4`.
pub fn dirichlet_dsm_phi<R: Rng + ?Sized>(
    counts: &[usize],
    draws: usize,
    rng: &mut R,
) -> Result<Vec<Option<Interval>>> {
    if counts.len() != 4 {
        return Err(Error::InvalidDimension(format!(
            "the linkage model needs 4 counts, got {}",
            counts.len()
        )));
    }
    let alpha: Vec<f64> = std::iter::once(1.0)
        .chain(counts.iter().map(|&c| c as f64))
        .collect();
    if alpha.iter().any(|&a| a <= 0.0) {
        return Err(Error::InvalidArgument(
            "every linkage count must be positive".into(),
        ));
    }
    (0..draws)
        .map(|_| Ok(dirichlet_dsm_interval(sample_dirichlet(&alpha, rng)?.coords())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn interval_examples() {
        let iv = dirichlet_dsm_interval(&[0.2, 0.5, 0.1, 0.05, 0.15]).unwrap();
        assert!((iv.lower - 0.6).abs() < 1e-12 && (iv.upper - 0.6).abs() < 1e-12);
        assert_eq!(dirichlet_dsm_interval(&[0.0, 0.3, 0.3, 0.1, 0.3]), None);
        let iv = dirichlet_dsm_interval(&[0.2, 0.55, 0.05, 0.05, 0.15]).unwrap();
        assert!((iv.lower - 0.6).abs() < 1e-12 && (iv.upper - 0.8).abs() < 1e-12);
    }

    #[test]
    fn curve_bookkeeping() {
        let ivs = [
            Some(Interval::new(0.1, 0.3)),
            None,
            Some(Interval::new(0.4, 0.6)),
        ];
        let curve = phi_curve(&ivs, &[0.0, 0.35, 0.5, 1.0]).unwrap();
        let t: Vec<(f64, f64, f64)> = curve.iter().map(|(_, t)| (t.p, t.q, t.r)).collect();
        assert_eq!(t, vec![(0.0, 1.0, 0.0), (0.5, 0.5, 0.0), (0.5, 0.0, 0.5), (1.0, 0.0, 0.0)]);
        assert!(matches!(phi_curve(&[None, None], &[0.5]), Err(Error::Starvation { .. })));
    }

    #[test]
    fn dirichlet_intervals_lie_in_range() {
        let mut rng = RngStream::new(1, 0);
        let ivs = dirichlet_dsm_phi(&[25, 3, 4, 7], 5000, &mut rng).unwrap();
        let kept: Vec<&Interval> = ivs.iter().flatten().collect();
        assert!(!kept.is_empty());
        for iv in kept {
            assert!(iv.lower >= 0.0 && iv.upper <= 1.0 && iv.lower <= iv.upper);
        }
        assert!(dirichlet_dsm_phi(&[25, 3, 4], 10, &mut rng).is_err());
    }

    #[test]
    fn vacuous_trace_gives_vacuous_curve() {
        let trace = vec![EtaMatrix::vacuous(4); 5];
        let s = linkage_phi_pqr(&trace, &[0.3, 0.7]).unwrap();
        assert_eq!(s.retention_rate, 1.0);
        for (_, t) in s.curve {
            assert_eq!((t.p, t.q, t.r), (0.0, 0.0, 1.0));
        }
        assert!(linkage_phi_pqr(&[EtaMatrix::vacuous(3)], &[0.5]).is_err());
    }
}
