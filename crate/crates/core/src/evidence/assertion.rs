use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A closed subset `Σ = {θ : g(θ) ≥ 0}` of the simplex.
///
/// The `linear` flag tells the classifier that `g` is affine in `θ`, so its
/// extremes over a polytope are attained at vertices.
#[derive(Clone)]
pub struct Assertion {
    name: String,
    g: ScalarFn,
    linear: bool,
    dimension: Option<usize>,
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assertion")
            .field("name", &self.name)
            .field("linear", &self.linear)
            .field("dimension", &self.dimension)
            .finish()
    }
}

impl Assertion {
    pub fn new<F>(name: impl Into<String>, linear: bool, dimension: Option<usize>, g: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            g: Arc::new(g),
            linear,
            dimension,
        }
    }

    /// `Σ = {θ : a · θ + b ≥ 0}`.
    pub fn affine(name: impl Into<String>, coefs: Vec<f64>, offset: f64) -> Self {
        let dim = coefs.len();
        Self::new(name, true, Some(dim), move |t| {
            coefs.iter().zip(t).map(|(a, x)| a * x).sum::<f64>() + offset
        })
    }

    /// The whole simplex.
    pub fn everything() -> Self {
        Self::new("everything", true, None, |_| 1.0)
    }

    /// The empty set.
    pub fn nothing() -> Self {
        Self::new("nothing", true, None, |_| -1.0)
    }

    /// `θ_k ≤ c`.
    pub fn coordinate_at_most(k: usize, c: f64) -> Self {
        Self::new(format!("theta{} <= {c}", k + 1), true, None, move |t| c - t[k])
    }

    /// `log(θ_k / θ_l) ≤ c`, written as the linear inequality `θ_k ≤ e^c θ_l`.
    pub fn log_ratio_at_most(k: usize, l: usize, c: f64) -> Self {
        let ec = c.exp();
        Self::new(
            format!("log(theta{}/theta{}) <= {c}", k + 1, l + 1),
            true,
            None,
            move |t| ec * t[l] - t[k],
        )
    }

    /// Positive association in a 2×2 table read row by row: `θ_1 θ_4 ≥ θ_2 θ_3`.
    pub fn positive_association() -> Self {
        Self::new("H+", false, Some(4), |t| t[0] * t[3] - t[1] * t[2])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// Required number of categories, if the assertion only makes sense for one.
    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        (self.g)(theta)
    }

    pub fn holds(&self, theta: &[f64]) -> bool {
        self.eval(theta) >= -crate::simplex::TOL
    }

    pub(crate) fn check_dimension(&self, dim: usize) -> Result<()> {
        match self.dimension {
            Some(d) if d != dim => Err(Error::InvalidDimension(format!(
                "assertion '{}' needs K={d}, got K={dim}",
                self.name
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::simplex::sample_uniform_simplex;

    // Secant test: an affine g satisfies g(λx + (1-λ)y) = λg(x) + (1-λ)g(y).
    fn secant_gap(a: &Assertion, rng: &mut RngStream, dim: usize) -> f64 {
        let x = sample_uniform_simplex(dim, rng).unwrap();
        let y = sample_uniform_simplex(dim, rng).unwrap();
        let mid: Vec<f64> = x.coords().iter().zip(y.coords()).map(|(p, q)| 0.3 * p + 0.7 * q).collect();
        (a.eval(&mid) - 0.3 * a.eval(x.coords()) - 0.7 * a.eval(y.coords())).abs()
    }

    #[test]
    fn linear_flags_are_truthful() {
        let mut rng = RngStream::new(1, 0);
        let linear = [
            Assertion::coordinate_at_most(0, 0.3),
            Assertion::log_ratio_at_most(0, 1, 0.5),
            Assertion::affine("a", vec![1.0, -2.0, 0.5, 0.0], 0.1),
            Assertion::everything(),
        ];
        for a in &linear {
            assert!(a.is_linear());
            for _ in 0..50 {
                assert!(secant_gap(a, &mut rng, 4) < 1e-12);
            }
        }
        let h = Assertion::positive_association();
        assert!(!h.is_linear());
        let max_gap = (0..50).map(|_| secant_gap(&h, &mut rng, 4)).fold(0.0, f64::max);
        assert!(max_gap > 1e-6);
    }

    #[test]
    fn log_ratio_matches_definition() {
        let a = Assertion::log_ratio_at_most(0, 1, 0.2);
        assert!(a.holds(&[0.5, 0.5]));
        assert!(!a.holds(&[0.6, 0.4]));
        assert_eq!(a.holds(&[0.6, 0.4]), (0.6f64 / 0.4).ln() <= 0.2);
    }
}
