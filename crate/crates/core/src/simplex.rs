//! Barycentric geometry on the probability simplex.
//!
//! Categories are 0-based throughout the library. `Δ_k(θ)` denotes the
//! subsimplex obtained from the simplex by replacing its `k`-th corner with
//! `θ`; the cells `Δ_1(θ), …, Δ_K(θ)` partition the simplex and `Δ_k(θ)` has
//! volume `θ_k`, which is what makes the sampling mechanism generate
//! Categorical(θ) labels.

use std::ops::Index;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// Absolute tolerance for `≥` comparisons on barycentric quantities.
pub const TOL: f64 = 1e-12;

/// Maximum accepted deviation of `Σ coords` from one for user-supplied points.
const SUM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Validates and renormalizes barycentric coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "simplex points need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidPoint(format!(
                "coordinates must be finite and non-negative: {coords:?}"
            )));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_SLACK {
            return Err(Error::InvalidPoint(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(Self::normalized(coords))
    }

    /// Normalizes an arbitrary non-negative, non-zero weight vector.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "simplex points need at least 2 coordinates, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidPoint(format!(
                "weights must be finite and non-negative: {weights:?}"
            )));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::InvalidPoint("weights sum to zero".into()));
        }
        Ok(Self::normalized(weights))
    }

    /// Normalizes without validation. Callers guarantee non-negative, finite
    /// input with positive sum.
    pub(crate) fn normalized(mut coords: Vec<f64>) -> Self {
        let sum: f64 = coords.iter().sum();
        for c in coords.iter_mut() {
            *c /= sum;
        }
        SimplexPoint(coords)
    }

    pub fn uniform(k: usize) -> Self {
        SimplexPoint(vec![1.0 / k as f64; k])
    }

    /// The simplex corner `V_k`.
    pub fn vertex(dim: usize, k: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[k] = 1.0;
        SimplexPoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|c| *c > 0.0)
    }

    /// Euclidean distance between two points of equal dimension.
    pub fn distance(&self, other: &SimplexPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for SimplexPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for SimplexPoint {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        SimplexPoint::new(v)
    }
}

impl From<SimplexPoint> for Vec<f64> {
    fn from(p: SimplexPoint) -> Vec<f64> {
        p.0
    }
}

/// Observed labels together with their per-category index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    num_categories: usize,
    observations: Vec<usize>,
    index_sets: Vec<Vec<usize>>,
}

impl Dataset {
    pub fn new(num_categories: usize, observations: Vec<usize>) -> Result<Self> {
        if num_categories < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {num_categories}"
            )));
        }
        let mut index_sets = vec![Vec::new(); num_categories];
        for (n, &x) in observations.iter().enumerate() {
            if x >= num_categories {
                return Err(Error::InvalidArgument(format!(
                    "observation {n} has label {x} outside 0..{num_categories}"
                )));
            }
            index_sets[x].push(n);
        }
        Ok(Self {
            num_categories,
            observations,
            index_sets,
        })
    }

    /// Observations laid out in category order: `counts[0]` zeros, then ones, ...
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        let observations = counts
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat_n(k, c))
            .collect();
        Self::new(counts.len(), observations)
    }

    pub fn num_categories(&self) -> usize {
        self.num_categories
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[usize] {
        &self.observations
    }

    /// `I_k`: indices of the observations equal to `k`.
    pub fn index_set(&self, k: usize) -> &[usize] {
        &self.index_sets[k]
    }

    pub fn count(&self, k: usize) -> usize {
        self.index_sets[k].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.index_sets.iter().map(Vec::len).collect()
    }

    pub fn push(&mut self, k: usize) -> Result<()> {
        if k >= self.num_categories {
            return Err(Error::InvalidArgument(format!(
                "label {k} outside 0..{}",
                self.num_categories
            )));
        }
        self.index_sets[k].push(self.observations.len());
        self.observations.push(k);
        Ok(())
    }

    /// The same observations with an extra, empty category appended.
    pub fn with_empty_category(&self) -> Dataset {
        let mut index_sets = self.index_sets.clone();
        index_sets.push(Vec::new());
        Dataset {
            num_categories: self.num_categories + 1,
            observations: self.observations.clone(),
            index_sets,
        }
    }

    /// Drops an empty category and shifts the labels above it down by one.
    pub fn without_category(&self, j: usize) -> Result<Dataset> {
        if j >= self.num_categories {
            return Err(Error::InvalidArgument(format!("no category {j}")));
        }
        if self.count(j) > 0 {
            return Err(Error::InvalidRemoval(j));
        }
        let observations = self
            .observations
            .iter()
            .map(|&x| if x > j { x - 1 } else { x })
            .collect();
        Dataset::new(self.num_categories - 1, observations)
    }
}

/// Normalizes i.i.d. unit exponentials into a uniform point of the simplex.
pub fn uniform_from_exponentials(exponentials: &[f64]) -> Result<SimplexPoint> {
    SimplexPoint::from_weights(exponentials.to_vec())
}

pub fn sample_uniform_simplex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<SimplexPoint> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "simplex dimension must be at least 2, got {dim}"
        )));
    }
    Ok(SimplexPoint::normalized(exponentials(dim, rng)))
}

pub(crate) fn exponentials<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect()
}

/// Maps a uniform point `w` of the simplex to a uniform point of `Δ_k(θ)`:
/// `u_k = w_k θ_k` and `u_ℓ = w_k θ_ℓ + w_ℓ` for `ℓ ≠ k`.
pub fn subsimplex_point(k: usize, theta: &SimplexPoint, w: &SimplexPoint) -> SimplexPoint {
    SimplexPoint::normalized(subsimplex_coords(k, theta.coords(), w.coords()))
}

pub(crate) fn subsimplex_coords(k: usize, theta: &[f64], w: &[f64]) -> Vec<f64> {
    let wk = w[k];
    theta
        .iter()
        .zip(w)
        .enumerate()
        .map(|(l, (t, wl))| if l == k { wk * t } else { wk * t + wl })
        .collect()
}

pub fn sample_uniform_subsimplex<R: Rng + ?Sized>(
    k: usize,
    theta: &SimplexPoint,
    rng: &mut R,
) -> Result<SimplexPoint> {
    check_category(k, theta.dim())?;
    if theta[k] <= 0.0 {
        return Err(Error::DegenerateSubsimplex { category: k });
    }
    let w = SimplexPoint::normalized(exponentials(theta.dim(), rng));
    Ok(subsimplex_point(k, theta, &w))
}

/// Membership `u ∈ Δ_k(θ)` in the cross-multiplied form `u_ℓ θ_k ≥ θ_ℓ u_k`.
pub fn subsimplex_contains(u: &SimplexPoint, k: usize, theta: &SimplexPoint) -> bool {
    containment_margin(u.coords(), k, theta.coords()) >= -TOL
}

/// `min_ℓ (u_ℓ θ_k − θ_ℓ u_k)`; non-negative exactly when `u ∈ Δ_k(θ)`.
pub(crate) fn containment_margin(u: &[f64], k: usize, theta: &[f64]) -> f64 {
    let (uk, tk) = (u[k], theta[k]);
    u.iter()
        .zip(theta)
        .map(|(ul, tl)| ul * tk - tl * uk)
        .fold(f64::INFINITY, f64::min)
}

/// The label generated by `u` under `θ`. Points on cell boundaries go to the
/// smallest admissible category.
pub fn subsimplex_index(u: &SimplexPoint, theta: &SimplexPoint) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..theta.dim() {
        let margin = containment_margin(u.coords(), k, theta.coords());
        if margin >= -TOL {
            return k;
        }
        if margin > best.1 {
            best = (k, margin);
        }
    }
    best.0
}

pub fn multinomial_pmf(counts: &[usize], theta: &SimplexPoint) -> f64 {
    multinomial_log_pmf(counts, theta).exp()
}

pub fn multinomial_log_pmf(counts: &[usize], theta: &SimplexPoint) -> f64 {
    let n: usize = counts.iter().sum();
    let mut log_p = ln_factorial(n as u64);
    for (&c, &t) in counts.iter().zip(theta.coords()) {
        if c == 0 {
            continue;
        }
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        log_p += c as f64 * t.ln() - ln_factorial(c as u64);
    }
    log_p
}

pub(crate) fn check_category(k: usize, dim: usize) -> Result<()> {
    if k >= dim {
        Err(Error::InvalidArgument(format!(
            "category {k} outside 0..{dim}"
        )))
    } else {
        Ok(())
    }
}
