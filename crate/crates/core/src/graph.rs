//! Ratio constraints as a weighted complete digraph.
//!
//! A feasible set is `{θ ∈ Δ : θ_ℓ ≤ η_{k→ℓ} θ_k for all k, ℓ}`. Taking
//! `log η_{k→ℓ}` as the weight of edge `k → ℓ`, the set is non-empty exactly
//! when the graph has no negative cycle, and the vertex of the set with the
//! largest `k`-th coordinate is `θ_ℓ ∝ exp(−min(ℓ → k))`, computed with the
//! edges leaving `k` removed. All path arithmetic is done on log weights.
//! `+∞` entries are vacuous constraints; their edges are never relaxed.

use rand::Rng;

use crate::error::{Error, Result};
use crate::simplex::{Dataset, SimplexPoint, TOL};

/// Largest dimension accepted by the exhaustive path oracle.
pub const BRUTE_FORCE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct EtaMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl EtaMatrix {
    /// Builds a matrix from row-major entries. Diagonal entries must equal one
    /// and every entry must be positive (`+∞` allowed).
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(format!(
                "eta matrices need K >= 2, got {dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for k in 0..dim {
            for l in 0..dim {
                let v = entries[k * dim + l];
                if v.is_nan() || v <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "eta[{k}][{l}] = {v} must be positive"
                    )));
                }
                if k == l && v != 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "diagonal eta[{k}][{k}] = {v} must be 1"
                    )));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidDimension("eta rows must be square".into()));
        }
        Self::new(dim, rows.concat())
    }

    /// All off-diagonal entries `+∞`: the whole simplex.
    pub fn vacuous(dim: usize) -> Self {
        let mut entries = vec![f64::INFINITY; dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = 1.0;
        }
        Self { dim, entries }
    }

    /// All entries one: the single point `(1/K, …, 1/K)`.
    pub fn ones(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![1.0; dim * dim],
        }
    }

    /// The exact ratios `θ_ℓ / θ_k` of a strictly positive point; the feasible
    /// set collapses to `{θ}`.
    pub fn from_ratios(theta: &SimplexPoint) -> Result<Self> {
        if !theta.is_strictly_positive() {
            return Err(Error::InvalidPoint(
                "ratio matrix needs a strictly positive point".into(),
            ));
        }
        let dim = theta.dim();
        let mut eta = Self::ones(dim);
        for k in 0..dim {
            for l in 0..dim {
                if k != l {
                    eta.entries[k * dim + l] = theta[l] / theta[k];
                }
            }
        }
        Ok(eta)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `η_{k→ℓ}`.
    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.dim + l]
    }

    /// Sets an off-diagonal entry. Panics on the diagonal or a non-positive value.
    pub fn set(&mut self, k: usize, l: usize, value: f64) {
        assert!(k != l, "diagonal entries are fixed at 1");
        assert!(value > 0.0, "eta entries must be positive");
        self.entries[k * self.dim + l] = value;
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.dim..(k + 1) * self.dim]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// `w_{k→ℓ} = log η_{k→ℓ}`.
    #[inline]
    pub fn weight(&self, k: usize, l: usize) -> f64 {
        self.get(k, l).ln()
    }

    /// Sets row `k` to `+∞` off the diagonal.
    pub fn make_row_vacuous(&mut self, k: usize) {
        for l in 0..self.dim {
            if l != k {
                self.entries[k * self.dim + l] = f64::INFINITY;
            }
        }
    }

    /// Entrywise minimum: the intersection of the two sets of half-spaces.
    pub fn entrywise_min(&self, other: &EtaMatrix) -> Result<EtaMatrix> {
        if self.dim != other.dim {
            return Err(Error::InvalidDimension(format!(
                "cannot combine K={} with K={}",
                self.dim, other.dim
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.min(*b))
            .collect();
        Ok(EtaMatrix {
            dim: self.dim,
            entries,
        })
    }

    /// Replaces row `k` with `min_n u_{n,ℓ} / u_{n,k}` over the given points.
    /// An empty slice makes the row vacuous.
    pub(crate) fn refresh_row(&mut self, k: usize, points: &[SimplexPoint]) -> Result<()> {
        let dim = self.dim;
        self.make_row_vacuous(k);
        for (i, u) in points.iter().enumerate() {
            let uk = u[k];
            if uk <= 0.0 {
                return Err(Error::DegenerateRatio {
                    observation: i,
                    category: k,
                });
            }
            for l in 0..dim {
                if l != k {
                    let r = u[l] / uk;
                    let e = &mut self.entries[k * dim + l];
                    if r < *e {
                        *e = r;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `min(ℓ → k)` for every ordered pair, stored with the source as row index.
#[derive(Debug, Clone, PartialEq)]
pub struct MinPathMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl MinPathMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Minimal path value from `from` to `to`.
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.values[from * self.dim + to]
    }

    pub fn max_abs_diff(&self, other: &MinPathMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                if a == b {
                    0.0
                } else {
                    (a - b).abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `η_{k→ℓ} = min_{n ∈ I_k} u_{n,ℓ} / u_{n,k}`, with `points[k]` holding the
/// draws of the observations in `I_k` (in index-set order). Rows of empty
/// categories are vacuous.
pub fn eta_from_points(dataset: &Dataset, points: &[Vec<SimplexPoint>]) -> Result<EtaMatrix> {
    let dim = dataset.num_categories();
    if points.len() != dim {
        return Err(Error::InvalidDimension(format!(
            "expected {dim} groups of points, got {}",
            points.len()
        )));
    }
    let mut eta = EtaMatrix::vacuous(dim);
    for (k, group) in points.iter().enumerate() {
        if group.len() != dataset.count(k) {
            return Err(Error::InvalidArgument(format!(
                "category {k} has {} observations but {} points",
                dataset.count(k),
                group.len()
            )));
        }
        if let Some(u) = group.iter().find(|u| u.dim() != dim) {
            return Err(Error::InvalidDimension(format!(
                "point of dimension {} in a K={dim} problem",
                u.dim()
            )));
        }
        eta.refresh_row(k, group).map_err(|e| match e {
            Error::DegenerateRatio { observation, category } => Error::DegenerateRatio {
                observation: dataset.index_set(k)[observation],
                category,
            },
            other => other,
        })?;
    }
    Ok(eta)
}

/// Finite edges `(from, to, log weight)`, optionally without the edges leaving `skip`.
fn finite_edges(eta: &EtaMatrix, skip: Option<usize>) -> Vec<(usize, usize, f64)> {
    let dim = eta.dim();
    let mut edges = Vec::with_capacity(dim * (dim - 1));
    for a in 0..dim {
        if Some(a) == skip {
            continue;
        }
        for b in 0..dim {
            if a != b {
                let v = eta.get(a, b);
                if v.is_finite() {
                    edges.push((a, b, v.ln()));
                }
            }
        }
    }
    edges
}

/// Bellman–Ford from a virtual source joined to every vertex at zero cost.
/// Returns a negative cycle and its value if one exists.
pub fn find_negative_cycle(eta: &EtaMatrix) -> Option<(Vec<usize>, f64)> {
    negative_cycle_in(eta, &finite_edges(eta, None))
}

fn negative_cycle_in(eta: &EtaMatrix, edges: &[(usize, usize, f64)]) -> Option<(Vec<usize>, f64)> {
    let dim = eta.dim();
    let mut dist = vec![0.0f64; dim];
    let mut pred: Vec<Option<usize>> = vec![None; dim];
    // K rounds settle every shortest path; later relaxations expose a cycle,
    // which the predecessor graph eventually contains.
    for round in 0..4 * dim + 4 {
        let mut last = None;
        for &(a, b, w) in edges {
            let cand = dist[a] + w;
            if cand < dist[b] - TOL {
                dist[b] = cand;
                pred[b] = Some(a);
                last = Some(b);
            }
        }
        let Some(v) = last else {
            return None;
        };
        if round >= dim {
            if let Some(cycle) = predecessor_cycle(&pred, v, dim) {
                let value = cycle_value(eta, &cycle);
                if value < -TOL {
                    return Some((cycle, value));
                }
            }
        }
    }
    // Threshold relaxations ran out without a certifiable cycle.
    None
}

fn predecessor_cycle(pred: &[Option<usize>], start: usize, dim: usize) -> Option<Vec<usize>> {
    let mut v = start;
    for _ in 0..dim {
        v = pred[v]?;
    }
    let mut cycle = vec![v];
    let mut w = pred[v]?;
    while w != v {
        cycle.push(w);
        w = pred[w]?;
        if cycle.len() > dim {
            return None;
        }
    }
    cycle.reverse();
    Some(cycle)
}

/// Sum of log weights around the closed walk `c_0 → c_1 → … → c_0`.
pub fn cycle_value(eta: &EtaMatrix, cycle: &[usize]) -> f64 {
    (0..cycle.len())
        .map(|i| eta.weight(cycle[i], cycle[(i + 1) % cycle.len()]))
        .sum()
}

/// Non-emptiness of the feasible set: no cycle with value below `-1e-12`.
pub fn is_feasible(eta: &EtaMatrix) -> bool {
    find_negative_cycle(eta).is_none()
}

/// Single-target Bellman–Ford: `min(ℓ → target)` for every `ℓ`, ignoring the
/// edges out of `skip`.
fn min_paths_to(eta: &EtaMatrix, target: usize, skip: Option<usize>) -> Result<Vec<f64>> {
    let dim = eta.dim();
    let edges = finite_edges(eta, skip);
    let mut dist = vec![f64::INFINITY; dim];
    dist[target] = 0.0;
    for _ in 0..=dim {
        let mut changed = false;
        for &(a, b, w) in &edges {
            let cand = w + dist[b];
            if cand < dist[a] - TOL {
                dist[a] = cand;
                changed = true;
            }
        }
        if !changed {
            return Ok(dist);
        }
    }
    let (cycle, value) = negative_cycle_in(eta, &edges).unwrap_or((Vec::new(), f64::NEG_INFINITY));
    Err(Error::NegativeCycle { cycle, value })
}

/// All-pairs minimal path values.
pub fn min_path_matrix(eta: &EtaMatrix) -> Result<MinPathMatrix> {
    if let Some((cycle, value)) = find_negative_cycle(eta) {
        return Err(Error::NegativeCycle { cycle, value });
    }
    let dim = eta.dim();
    let mut values = vec![0.0; dim * dim];
    for k in 0..dim {
        let d = min_paths_to(eta, k, None)?;
        for (l, v) in d.into_iter().enumerate() {
            values[l * dim + k] = v;
        }
    }
    Ok(MinPathMatrix { dim, values })
}

/// The vertex of the feasible set with the largest `k`-th coordinate,
/// `θ_ℓ ∝ exp(−min(ℓ → k))`, computed without the edges leaving `k`.
pub fn conditional_theta(eta: &EtaMatrix, k: usize) -> Result<SimplexPoint> {
    crate::simplex::check_category(k, eta.dim())?;
    let dist = min_paths_to(eta, k, Some(k))?;
    // dist[k] = 0, so the largest exponent is at least 0.
    let shift = dist.iter().map(|d| -d).fold(f64::NEG_INFINITY, f64::max);
    let weights = dist.iter().map(|d| (-d - shift).exp()).collect();
    Ok(SimplexPoint::normalized(weights))
}

/// `θ ∈ F`: `θ_ℓ ≤ η_{k→ℓ} θ_k` for every pair, up to `1e-12`.
pub fn theta_in_feasible(eta: &EtaMatrix, theta: &SimplexPoint) -> bool {
    let dim = eta.dim();
    if theta.dim() != dim {
        return false;
    }
    for k in 0..dim {
        let tk = theta[k];
        for l in 0..dim {
            if l == k {
                continue;
            }
            let e = eta.get(k, l);
            if e.is_finite() && theta[l] - e * tk > TOL {
                return false;
            }
        }
    }
    true
}

/// Exhaustive minimum over simple paths. Test oracle for [`min_path_matrix`].
pub fn brute_force_min_paths(eta: &EtaMatrix) -> Result<MinPathMatrix> {
    let dim = eta.dim();
    if dim > BRUTE_FORCE_MAX_DIM {
        return Err(Error::TooLarge {
            size: dim,
            max: BRUTE_FORCE_MAX_DIM,
        });
    }
    let mut values = vec![f64::INFINITY; dim * dim];
    let mut visited = vec![false; dim];
    for from in 0..dim {
        visited[from] = true;
        let mut best = vec![f64::INFINITY; dim];
        best[from] = 0.0;
        explore(eta, from, 0.0, &mut visited, &mut best);
        visited[from] = false;
        for to in 0..dim {
            values[from * dim + to] = best[to];
        }
    }
    Ok(MinPathMatrix { dim, values })
}

fn explore(eta: &EtaMatrix, at: usize, value: f64, visited: &mut [bool], best: &mut [f64]) {
    for next in 0..eta.dim() {
        if visited[next] || !eta.get(at, next).is_finite() {
            continue;
        }
        let v = value + eta.weight(at, next);
        if v < best[next] {
            best[next] = v;
        }
        visited[next] = true;
        explore(eta, next, v, visited, best);
        visited[next] = false;
    }
}

/// A random feasible matrix: `η_{k→ℓ} = (θ_ℓ / θ_k) · exp(slack)` for a random
/// interior `θ` and non-negative slacks, about a quarter of them zero (tight)
/// and a few entries vacuous.
pub fn random_feasible_eta<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> EtaMatrix {
    let theta: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.0)).collect();
    let mut eta = EtaMatrix::ones(dim);
    for k in 0..dim {
        for l in 0..dim {
            if k == l {
                continue;
            }
            let u: f64 = rng.random();
            let value = if u < 0.25 {
                theta[l] / theta[k]
            } else if u < 0.3 {
                f64::INFINITY
            } else {
                theta[l] / theta[k] * rng.random_range(0.0..2.0f64).exp()
            };
            eta.set(k, l, value);
        }
    }
    eta
}
