//! Gibbs sampler over the auxiliary draws `u`, targeting the uniform
//! distribution on the configurations whose feasible set is non-empty.
//!
//! One sweep visits the categories in order `0..K`. For category `k` it
//! computes `θ = conditional_theta(η, k)`, redraws every `u_n` with `x_n = k`
//! uniformly in `Δ_k(θ)`, and refreshes row `k` of `η`. Empty categories keep
//! a vacuous row and are skipped.

mod coupling;
mod trace;

pub use coupling::{
    coupled_step, meeting_times, sample_meeting_time, tv_upper_bound, tv_upper_bound_curve,
    CouplingConfig, MeetingRecord,
};
pub use trace::{read_trace, write_trace, write_trace_record, TraceRecord};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};
use crate::graph::{conditional_theta, eta_from_points, find_negative_cycle, EtaMatrix};
use crate::simplex::{exponentials, sample_uniform_simplex, subsimplex_coords, Dataset, SimplexPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    dataset: Dataset,
    points: Vec<Vec<SimplexPoint>>,
    eta: EtaMatrix,
    iteration: usize,
}

impl GibbsState {
    /// Draws `u_n ~ Δ_{x_n}(θ₀)` independently, so `θ₀` lies in the feasible set.
    pub fn init<R: Rng + ?Sized>(dataset: Dataset, theta0: &SimplexPoint, rng: &mut R) -> Result<Self> {
        let dim = dataset.num_categories();
        if theta0.dim() != dim {
            return Err(Error::InvalidDimension(format!(
                "theta0 has {} coordinates for K={dim}",
                theta0.dim()
            )));
        }
        if let Some(k) = (0..dim).find(|&k| dataset.count(k) > 0 && theta0[k] <= 0.0) {
            return Err(Error::DegenerateInit(format!(
                "theta0[{k}] = 0 but category {k} has observations"
            )));
        }
        let points: Vec<Vec<SimplexPoint>> = (0..dim)
            .map(|k| {
                (0..dataset.count(k))
                    .map(|_| draw_in_subsimplex(k, theta0.coords(), rng))
                    .collect()
            })
            .collect();
        let eta = eta_from_points(&dataset, &points)?;
        Ok(Self {
            dataset,
            points,
            eta,
            iteration: 0,
        })
    }

    /// Initialization from `θ₀` drawn uniformly on the simplex.
    pub fn init_random<R: Rng + ?Sized>(dataset: Dataset, rng: &mut R) -> Result<Self> {
        let theta0 = sample_uniform_simplex(dataset.num_categories(), rng)?;
        Self::init(dataset, &theta0, rng)
    }

    /// A state from explicit draws, grouped by category.
    pub fn from_points(dataset: Dataset, points: Vec<Vec<SimplexPoint>>) -> Result<Self> {
        let eta = eta_from_points(&dataset, &points)?;
        if let Some((cycle, value)) = find_negative_cycle(&eta) {
            return Err(Error::NegativeCycle { cycle, value });
        }
        Ok(Self {
            dataset,
            points,
            eta,
            iteration: 0,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn eta(&self) -> &EtaMatrix {
        &self.eta
    }

    /// Draws grouped by category, in index-set order.
    pub fn points(&self) -> &[Vec<SimplexPoint>] {
        &self.points
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn num_categories(&self) -> usize {
        self.dataset.num_categories()
    }

    /// One full sweep over the categories.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        for k in 0..self.num_categories() {
            if self.dataset.count(k) == 0 {
                continue;
            }
            let theta = conditional_theta(&self.eta, k)?;
            for u in self.points[k].iter_mut() {
                *u = draw_in_subsimplex(k, theta.coords(), rng);
            }
            self.eta.refresh_row(k, &self.points[k])?;
        }
        self.iteration += 1;
        Ok(())
    }

    /// Appends a new observation in category `k`, drawing its `u` uniformly in
    /// `Δ_k(θ)` with `θ = conditional_theta(η, k)`. Returns `θ_k`, the volume of
    /// that subsimplex, which is the importance weight up to a constant.
    pub fn assimilate<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Result<f64> {
        let theta = conditional_theta(&self.eta, k)?;
        let u = draw_in_subsimplex(k, theta.coords(), rng);
        for l in 0..self.num_categories() {
            if l != k {
                let r = u[l] / u[k];
                if r < self.eta.get(k, l) {
                    self.eta.set(k, l, r);
                }
            }
        }
        self.dataset.push(k)?;
        self.points[k].push(u);
        Ok(theta[k])
    }

    /// Checks that `η` matches the draws and that the feasible set is non-empty.
    pub fn check_invariants(&self) -> Result<()> {
        let eta = eta_from_points(&self.dataset, &self.points)?;
        if eta != self.eta {
            return Err(Error::InvalidArgument("eta out of sync with the draws".into()));
        }
        match find_negative_cycle(&self.eta) {
            Some((cycle, value)) => Err(Error::NegativeCycle { cycle, value }),
            None => Ok(()),
        }
    }

    /// The state for the same observations with an extra empty category.
    pub fn with_empty_category<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GibbsState> {
        let points = add_empty_category(&self.points, rng)?;
        let mut state = GibbsState::from_points(self.dataset.with_empty_category(), points)?;
        state.iteration = self.iteration;
        Ok(state)
    }

    /// The state with empty category `j` dropped.
    pub fn without_category(&self, j: usize) -> Result<GibbsState> {
        let dataset = self.dataset.without_category(j)?;
        let points = remove_empty_category(&self.points, j)?;
        let mut state = GibbsState::from_points(dataset, points)?;
        state.iteration = self.iteration;
        Ok(state)
    }

    pub(crate) fn set_points_unchecked(&mut self, k: usize, points: Vec<SimplexPoint>) -> Result<()> {
        self.eta.refresh_row(k, &points)?;
        self.points[k] = points;
        Ok(())
    }

    pub(crate) fn bump_iteration(&mut self) {
        self.iteration += 1;
    }
}

pub(crate) fn draw_in_subsimplex<R: Rng + ?Sized>(k: usize, theta: &[f64], rng: &mut R) -> SimplexPoint {
    let w = SimplexPoint::normalized(exponentials(theta.len(), rng));
    SimplexPoint::normalized(subsimplex_coords(k, theta, w.coords()))
}

/// Runs `iterations` sweeps from `θ₀` and records `η` after each sweep past
/// `burn_in`.
pub fn run<R: Rng + ?Sized>(
    dataset: Dataset,
    theta0: &SimplexPoint,
    iterations: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<Vec<EtaMatrix>> {
    if iterations <= burn_in {
        return Err(Error::InvalidArgument(format!(
            "iterations ({iterations}) must exceed burn-in ({burn_in})"
        )));
    }
    let mut state = GibbsState::init(dataset, theta0, rng)?;
    let mut trace = Vec::with_capacity(iterations - burn_in);
    for t in 1..=iterations {
        state.step(rng)?;
        if t > burn_in {
            trace.push(state.eta.clone());
        }
    }
    Ok(trace)
}

/// Draws every `u_n` uniformly on the simplex and keeps the configurations
/// with a non-empty feasible set, until `accepted` are kept or `max_attempts`
/// configurations have been tried. Returns the kept `η` and the attempt count.
pub fn rejection_sample<R: Rng + ?Sized>(
    dataset: &Dataset,
    accepted: usize,
    max_attempts: usize,
    rng: &mut R,
) -> Result<(Vec<EtaMatrix>, usize)> {
    let dim = dataset.num_categories();
    let mut kept = Vec::with_capacity(accepted);
    let mut attempts = 0;
    while kept.len() < accepted && attempts < max_attempts {
        attempts += 1;
        let points = (0..dim)
            .map(|k| {
                (0..dataset.count(k))
                    .map(|_| sample_uniform_simplex(dim, rng))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let eta = eta_from_points(dataset, &points)?;
        if find_negative_cycle(&eta).is_none() {
            kept.push(eta);
        }
    }
    if kept.is_empty() {
        return Err(Error::Starvation { retained: 0, attempts });
    }
    Ok((kept, attempts))
}

/// Lifts every point of dimension `K` to dimension `K + 1`: `w = s · u` with
/// `s ~ Gamma(K, 1)`, `w_{K+1} ~ Exp(1)`, then normalize. Ratios among the
/// original coordinates are unchanged and a uniform input stays uniform.
/// An empty group is appended for the new category.
pub fn add_empty_category<R: Rng + ?Sized>(
    points: &[Vec<SimplexPoint>],
    rng: &mut R,
) -> Result<Vec<Vec<SimplexPoint>>> {
    let dim = points.len();
    let gamma = Gamma::new(dim as f64, 1.0)
        .map_err(|e| Error::InvalidDimension(format!("cannot lift K={dim}: {e}")))?;
    let mut out: Vec<Vec<SimplexPoint>> = points
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|u| {
                    let s = gamma.sample(rng);
                    let mut w: Vec<f64> = u.coords().iter().map(|c| s * c).collect();
                    w.push(Exp1.sample(rng));
                    SimplexPoint::normalized(w)
                })
                .collect()
        })
        .collect();
    out.push(Vec::new());
    Ok(out)
}

/// Drops coordinate `j` from every point and renormalizes; group `j` must be empty.
pub fn remove_empty_category(points: &[Vec<SimplexPoint>], j: usize) -> Result<Vec<Vec<SimplexPoint>>> {
    if j >= points.len() {
        return Err(Error::InvalidArgument(format!("no category {j}")));
    }
    if !points[j].is_empty() {
        return Err(Error::InvalidRemoval(j));
    }
    Ok(points
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .map(|(_, group)| {
            group
                .iter()
                .map(|u| {
                    let mut c = u.coords().to_vec();
                    c.remove(j);
                    SimplexPoint::normalized(c)
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_feasible, theta_in_feasible};
    use crate::rng::RngStream;
    use crate::simplex::multinomial_pmf;
    use approx::assert_abs_diff_eq;

    fn pt(v: &[f64]) -> SimplexPoint {
        SimplexPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn init_is_feasible() {
        let mut rng = RngStream::new(1, 0);
        let d = Dataset::from_counts(&[3, 2, 4]).unwrap();
        let s = GibbsState::init(d, &SimplexPoint::uniform(3), &mut rng).unwrap();
        s.check_invariants().unwrap();
        assert!(theta_in_feasible(s.eta(), &SimplexPoint::uniform(3)));

        let d = Dataset::from_counts(&[1, 1]).unwrap();
        let s = GibbsState::init(d, &pt(&[0.5, 0.5]), &mut rng).unwrap();
        assert!(s.eta().get(0, 1) * s.eta().get(1, 0) >= 1.0);

        let d = Dataset::from_counts(&[0, 0, 0]).unwrap();
        let s = GibbsState::init(d, &SimplexPoint::uniform(3), &mut rng).unwrap();
        assert_eq!(s.eta(), &EtaMatrix::vacuous(3));
    }

    #[test]
    fn init_rejects_zero_theta_on_observed_category() {
        let mut rng = RngStream::new(1, 0);
        let d = Dataset::from_counts(&[1, 1]).unwrap();
        assert!(matches!(
            GibbsState::init(d, &pt(&[1.0, 0.0]), &mut rng),
            Err(Error::DegenerateInit(_))
        ));
        let d = Dataset::from_counts(&[1, 0]).unwrap();
        assert!(GibbsState::init(d, &pt(&[1.0, 0.0]), &mut rng).is_ok());
    }

    #[test]
    fn sweeps_stay_feasible() {
        let mut rng = RngStream::new(2, 0);
        let d = Dataset::from_counts(&[1, 1, 1, 1]).unwrap();
        let mut s = GibbsState::init(d, &SimplexPoint::uniform(4), &mut rng).unwrap();
        for _ in 0..10_000 {
            s.step(&mut rng).unwrap();
            assert!(is_feasible(s.eta()));
        }
        s.check_invariants().unwrap();
        assert_eq!(s.iteration(), 10_000);
    }

    #[test]
    fn empty_category_row_stays_vacuous() {
        let mut rng = RngStream::new(3, 0);
        let d = Dataset::from_counts(&[2, 0, 3]).unwrap();
        let mut s = GibbsState::init(d, &SimplexPoint::uniform(3), &mut rng).unwrap();
        for _ in 0..200 {
            s.step(&mut rng).unwrap();
            assert!(s.eta().row(1).iter().enumerate().all(|(l, v)| l == 1 || v.is_infinite()));
        }
    }

    #[test]
    fn stationary_frequency_matches_multinomial_mass() {
        let mut rng = RngStream::new(4, 0);
        let d = Dataset::from_counts(&[4, 3]).unwrap();
        let target = pt(&[0.5, 0.5]);
        let trace = run(d, &SimplexPoint::uniform(2), 40_000, 1_000, &mut rng).unwrap();
        let freq = trace.iter().filter(|e| theta_in_feasible(e, &target)).count() as f64
            / trace.len() as f64;
        let expected = multinomial_pmf(&[4, 3], &target);
        assert_abs_diff_eq!(expected, 35.0 / 128.0, epsilon = 1e-12);
        assert!((freq - expected).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn run_records_after_burn_in() {
        let mut rng = RngStream::new(5, 0);
        let d = Dataset::from_counts(&[2, 1]).unwrap();
        let t = run(d.clone(), &SimplexPoint::uniform(2), 11, 10, &mut rng).unwrap();
        assert_eq!(t.len(), 1);
        assert!(run(d, &SimplexPoint::uniform(2), 10, 10, &mut rng).is_err());
    }

    #[test]
    fn lifting_preserves_ratios() {
        let mut rng = RngStream::new(6, 0);
        let lifted = add_empty_category(&[vec![pt(&[0.4, 0.6])], vec![]], &mut rng).unwrap();
        assert_eq!(lifted.len(), 3);
        let u = &lifted[0][0];
        assert_eq!(u.dim(), 3);
        assert_abs_diff_eq!(u[0] / u[1], 2.0 / 3.0, epsilon = 1e-14);

        let back = remove_empty_category(&lifted, 2).unwrap();
        assert_abs_diff_eq!(back[0][0].coords(), &[0.4, 0.6][..], epsilon = 1e-14);
        assert_eq!(remove_empty_category(&lifted, 0), Err(Error::InvalidRemoval(0)));
    }

    #[test]
    fn lifted_uniform_points_are_uniform() {
        // Lifting then dropping the new coordinate must give back the original
        // point, and the lifted point's new coordinate has the Beta(1, K)
        // marginal of a uniform point in K+1 dimensions.
        let mut rng = RngStream::new(7, 0);
        let n = 20_000;
        let mut last = Vec::with_capacity(n);
        for _ in 0..n {
            let u = sample_uniform_simplex(3, &mut rng).unwrap();
            let lifted = add_empty_category(&[vec![u.clone()], vec![], vec![]], &mut rng).unwrap();
            let v = &lifted[0][0];
            last.push(v[3]);
            let back = remove_empty_category(&lifted, 3).unwrap();
            assert_abs_diff_eq!(back[0][0].coords(), u.coords(), epsilon = 1e-12);
        }
        // Kolmogorov–Smirnov against Beta(1, 3): F(x) = 1 - (1 - x)^3.
        last.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = last
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let f = 1.0 - (1.0 - x).powi(3);
                ((i + 1) as f64 / n as f64 - f).abs().max((f - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        // 0.1% critical value ≈ 1.95 / sqrt(n)
        assert!(d < 1.95 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn state_surgery_round_trip() {
        let mut rng = RngStream::new(8, 0);
        let d = Dataset::from_counts(&[2, 1]).unwrap();
        let s = GibbsState::init(d, &SimplexPoint::uniform(2), &mut rng).unwrap();
        let lifted = s.with_empty_category(&mut rng).unwrap();
        lifted.check_invariants().unwrap();
        assert_eq!(lifted.dataset().counts(), vec![2, 1, 0]);
        let back = lifted.without_category(2).unwrap();
        assert_abs_diff_eq!(back.eta().get(0, 1), s.eta().get(0, 1), epsilon = 1e-12);
        assert_abs_diff_eq!(back.eta().get(1, 0), s.eta().get(1, 0), epsilon = 1e-12);
        assert!(lifted.without_category(0).is_err());
    }

    #[test]
    fn single_observation_plus_empty_category_spans_an_interval() {
        let mut rng = RngStream::new(9, 0);
        let d = Dataset::from_counts(&[1, 0]).unwrap();
        let s = GibbsState::init(d, &pt(&[0.5, 0.5]), &mut rng).unwrap();
        let lifted = s.with_empty_category(&mut rng).unwrap();
        let reduced = lifted.without_category(2).unwrap();
        let verts = crate::polytope::vertices(reduced.eta()).unwrap();
        assert_eq!(verts.len(), 2);
        let u = &s.points()[0][0];
        let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(lo, u[0], epsilon = 1e-12);
        assert!(verts.iter().any(|v| (v[0] - 1.0).abs() < 1e-12));
    }

    #[test]
    fn assimilate_from_all_ones() {
        let mut rng = RngStream::new(10, 0);
        let d = Dataset::from_counts(&[1, 1]).unwrap();
        let mut s = GibbsState::from_points(d, vec![vec![pt(&[0.5, 0.5])], vec![pt(&[0.5, 0.5])]]).unwrap();
        assert_eq!(s.eta(), &EtaMatrix::ones(2));
        let w = s.assimilate(0, &mut rng).unwrap();
        assert_abs_diff_eq!(w, 0.5, epsilon = 1e-15);
        assert_eq!(s.dataset().counts(), vec![2, 1]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn assimilate_from_nothing_draws_uniformly() {
        let mut rng = RngStream::new(11, 0);
        let mut s = GibbsState::init(
            Dataset::from_counts(&[0, 0]).unwrap(),
            &SimplexPoint::uniform(2),
            &mut rng,
        )
        .unwrap();
        assert_eq!(s.assimilate(0, &mut rng).unwrap(), 1.0);
        s.check_invariants().unwrap();
    }

    #[test]
    fn rejection_acceptance_rate() {
        // For counts (1, 1) the set is non-empty iff u_{1,2} ≥ u_{2,2}.
        let mut rng = RngStream::new(9, 0);
        let d = Dataset::from_counts(&[1, 1]).unwrap();
        let (kept, attempts) = rejection_sample(&d, 20_000, usize::MAX, &mut rng).unwrap();
        assert_eq!(kept.len(), 20_000);
        assert!((kept.len() as f64 / attempts as f64 - 0.5).abs() < 0.01);
        assert!(kept.iter().all(is_feasible));
        assert!(matches!(
            rejection_sample(&d, 5, 0, &mut rng),
            Err(Error::Starvation { retained: 0, attempts: 0 })
        ));
    }
}
