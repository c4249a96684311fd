//! Feasible sets as polytopes: vertex enumeration from the ratio half-spaces,
//! segment intersection, and classification of assertions against a set.
//!
//! Vertex enumeration is the double-description method: start from the
//! simplex corners and cut by one ratio half-space `θ_ℓ − η_{k→ℓ} θ_k ≤ 0` at
//! a time. New vertices are created on every edge joining a violating vertex
//! to a satisfying one; adjacency is decided combinatorially (no other vertex
//! is active on every constraint the pair shares).

use std::sync::OnceLock;

use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::evidence::Assertion;
use crate::graph::{is_feasible, EtaMatrix};
use crate::rng::{streams, RngStream};
use crate::simplex::{SimplexPoint, TOL};

/// Largest dimension accepted by [`vertices`].
pub const MAX_VERTEX_DIM: usize = 8;

/// Default number of random interior probes for nonlinear assertions.
pub const DEFAULT_PROBES: usize = 256;

const SLACK_TOL: f64 = 1e-11;
const DEDUP_TOL: f64 = 1e-9;
const PROBE_SEED: u64 = 0x5eed_0f_9b0b;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssertionRelation {
    /// `F ⊂ Σ`: counts towards `p`.
    Contained,
    /// `F ∩ Σ = ∅`: counts towards `q`.
    Disjoint,
    /// Neither: counts towards `r`.
    Straddles,
}

/// A feasible set in half-space form with lazily cached vertices.
#[derive(Debug)]
pub struct FeasibleSet {
    eta: EtaMatrix,
    vertices: OnceLock<Result<Vec<SimplexPoint>>>,
}

impl FeasibleSet {
    pub fn new(eta: EtaMatrix) -> Self {
        Self {
            eta,
            vertices: OnceLock::new(),
        }
    }

    pub fn eta(&self) -> &EtaMatrix {
        &self.eta
    }

    pub fn is_empty(&self) -> bool {
        !is_feasible(&self.eta)
    }

    pub fn vertices(&self) -> Result<&[SimplexPoint]> {
        self.vertices
            .get_or_init(|| vertices(&self.eta))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn classify(&self, assertion: &Assertion, probes: usize) -> Result<AssertionRelation> {
        classify_vertices(self.vertices()?, assertion, probes)
    }
}

#[derive(Debug, Clone)]
struct Vertex {
    point: Vec<f64>,
    active: u128,
}

/// Homogeneous constraint `a · θ ≤ 0`, scaled so that `max |a_i| = 1`.
#[derive(Debug, Clone)]
struct HalfSpace {
    bit: u32,
    coefs: Vec<f64>,
}

impl HalfSpace {
    fn slack(&self, p: &[f64]) -> f64 {
        self.coefs.iter().zip(p).map(|(a, x)| a * x).sum()
    }
}

fn ratio_half_space(dim: usize, k: usize, l: usize, eta: f64) -> HalfSpace {
    let scale = eta.max(1.0);
    let mut coefs = vec![0.0; dim];
    coefs[l] = 1.0 / scale;
    coefs[k] = -eta / scale;
    HalfSpace {
        bit: (dim + k * dim + l) as u32,
        coefs,
    }
}

fn nonneg_half_space(dim: usize, i: usize) -> HalfSpace {
    let mut coefs = vec![0.0; dim];
    coefs[i] = -1.0;
    HalfSpace {
        bit: i as u32,
        coefs,
    }
}

/// All vertices of `{θ ∈ Δ : θ_ℓ ≤ η_{k→ℓ} θ_k}`.
pub fn vertices(eta: &EtaMatrix) -> Result<Vec<SimplexPoint>> {
    let dim = eta.dim();
    if dim > MAX_VERTEX_DIM {
        return Err(Error::TooLarge {
            size: dim,
            max: MAX_VERTEX_DIM,
        });
    }
    if !is_feasible(eta) {
        return Err(Error::EmptySet);
    }

    let mut processed: Vec<HalfSpace> = (0..dim).map(|i| nonneg_half_space(dim, i)).collect();
    let all_nonneg: u128 = (1u128 << dim) - 1;
    let mut current: Vec<Vertex> = (0..dim)
        .map(|i| Vertex {
            point: SimplexPoint::vertex(dim, i).into_inner(),
            active: all_nonneg & !(1u128 << i),
        })
        .collect();

    for k in 0..dim {
        for l in 0..dim {
            let e = eta.get(k, l);
            if k == l || !e.is_finite() {
                continue;
            }
            let h = ratio_half_space(dim, k, l, e);
            current = cut(current, &h, &processed, dim)?;
            processed.push(h);
        }
    }

    let mut out: Vec<SimplexPoint> = Vec::with_capacity(current.len());
    for v in current {
        let coords = v.point.into_iter().map(|c| c.max(0.0)).collect();
        let p = SimplexPoint::normalized(coords);
        if out.iter().all(|q| q.distance(&p) > DEDUP_TOL) {
            out.push(p);
        }
    }
    Ok(out)
}

fn cut(current: Vec<Vertex>, h: &HalfSpace, processed: &[HalfSpace], dim: usize) -> Result<Vec<Vertex>> {
    let bit = 1u128 << h.bit;
    let slacks: Vec<f64> = current.iter().map(|v| h.slack(&v.point)).collect();
    let plus: Vec<usize> = (0..current.len()).filter(|&i| slacks[i] > SLACK_TOL).collect();
    if plus.is_empty() {
        return Ok(current
            .into_iter()
            .zip(&slacks)
            .map(|(mut v, s)| {
                if s.abs() <= SLACK_TOL {
                    v.active |= bit;
                }
                v
            })
            .collect());
    }
    let minus: Vec<usize> = (0..current.len()).filter(|&i| slacks[i] < -SLACK_TOL).collect();

    let mut next: Vec<Vertex> = Vec::with_capacity(current.len());
    for (v, s) in current.iter().zip(&slacks) {
        if *s <= SLACK_TOL {
            let mut v = v.clone();
            if s.abs() <= SLACK_TOL {
                v.active |= bit;
            }
            next.push(v);
        }
    }
    if next.is_empty() {
        return Err(Error::EmptySet);
    }

    // Two vertices of a (dim-1)-dimensional polytope span an edge only if they
    // share at least dim-2 active constraints.
    let min_common = dim.saturating_sub(2) as u32;
    let kept = next.len();
    for &p in &plus {
        for &m in &minus {
            let common = current[p].active & current[m].active;
            if common.count_ones() < min_common {
                continue;
            }
            let blocked = current
                .iter()
                .enumerate()
                .any(|(r, v)| r != p && r != m && v.active & common == common);
            if blocked {
                continue;
            }
            let (sp, sm) = (slacks[p], slacks[m]);
            let denom = sp - sm;
            let point: Vec<f64> = current[p]
                .point
                .iter()
                .zip(&current[m].point)
                .map(|(xp, xm)| (sp * xm - sm * xp) / denom)
                .collect();
            let mut active = common | bit;
            for c in processed {
                if c.slack(&point).abs() <= SLACK_TOL {
                    active |= 1u128 << c.bit;
                }
            }
            match next[kept..].iter_mut().find(|v| dist(&v.point, &point) <= DEDUP_TOL) {
                Some(v) => v.active |= active,
                None => next.push(Vertex { point, active }),
            }
        }
    }
    Ok(next)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A closed range of the scalar parameter of a segment.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `{φ ∈ range : A φ + b ∈ F}`, or `None` when the segment misses `F`.
pub fn segment_phi_interval(eta: &EtaMatrix, a: &[f64], b: &[f64], range: Interval) -> Option<Interval> {
    let dim = eta.dim();
    let (mut lo, mut hi) = (range.lower, range.upper);
    for k in 0..dim {
        for l in 0..dim {
            let e = eta.get(k, l);
            if k == l || !e.is_finite() {
                continue;
            }
            // θ_ℓ(φ) − η θ_k(φ) = slope φ + offset ≤ 0
            let scale = e.max(1.0);
            let slope = (a[l] - e * a[k]) / scale;
            let offset = (b[l] - e * b[k]) / scale;
            if slope.abs() <= 1e-14 {
                if offset > TOL {
                    return None;
                }
            } else if slope > 0.0 {
                hi = hi.min(-offset / slope);
            } else {
                lo = lo.max(-offset / slope);
            }
        }
    }
    if lo > hi {
        if lo - hi <= 1e-10 {
            let mid = 0.5 * (lo + hi);
            return Some(Interval::new(mid, mid));
        }
        return None;
    }
    Some(Interval::new(lo, hi))
}

/// Position of the feasible set relative to `Σ = {θ : g(θ) ≥ 0}`.
///
/// Linear assertions are decided exactly from the vertices. Nonlinear ones are
/// checked at the vertices, the pairwise vertex midpoints and `probes` random
/// convex combinations of the vertices; a sign change anywhere means
/// `Straddles`, otherwise the vertex verdict stands. This is an approximation
/// for nonlinear `g`. Points with `|g| ≤ 1e-12` touch `Σ`, so a set touching
/// the boundary is never `Disjoint`.
pub fn classify(eta: &EtaMatrix, assertion: &Assertion, probes: usize) -> Result<AssertionRelation> {
    if let Some(d) = assertion.dimension() {
        if d != eta.dim() {
            return Err(Error::InvalidDimension(format!(
                "assertion '{}' needs K={d}, feasible set has K={}",
                assertion.name(),
                eta.dim()
            )));
        }
    }
    classify_vertices(&vertices(eta)?, assertion, probes)
}

fn classify_vertices(verts: &[SimplexPoint], assertion: &Assertion, probes: usize) -> Result<AssertionRelation> {
    let inside = |p: &[f64]| assertion.eval(p) >= -TOL;

    let first = inside(verts[0].coords());
    if verts.iter().any(|v| inside(v.coords()) != first) {
        return Ok(AssertionRelation::Straddles);
    }
    let verdict = if first {
        AssertionRelation::Contained
    } else {
        AssertionRelation::Disjoint
    };
    if assertion.is_linear() || verts.len() == 1 {
        return Ok(verdict);
    }

    let dim = verts[0].dim();
    let mut probe = vec![0.0; dim];
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            for (x, (a, b)) in probe.iter_mut().zip(verts[i].coords().iter().zip(verts[j].coords())) {
                *x = 0.5 * (a + b);
            }
            if inside(&probe) != first {
                return Ok(AssertionRelation::Straddles);
            }
        }
    }

    let mut rng = RngStream::new(PROBE_SEED, streams::PROBES);
    let mut weights = vec![0.0; verts.len()];
    for _ in 0..probes {
        let mut total = 0.0;
        for w in weights.iter_mut() {
            *w = Exp1.sample(&mut rng);
            total += *w;
        }
        probe.iter_mut().for_each(|x| *x = 0.0);
        for (w, v) in weights.iter().zip(verts) {
            for (x, c) in probe.iter_mut().zip(v.coords()) {
                *x += w / total * c;
            }
        }
        if inside(&probe) != first {
            return Ok(AssertionRelation::Straddles);
        }
    }
    Ok(verdict)
}

/// Vertex list as a JSON array of barycentric coordinate arrays.
pub fn vertices_to_json(vertices: &[SimplexPoint]) -> String {
    serde_json::to_string(vertices).expect("vertex coordinates are finite")
}

pub fn vertices_from_json(json: &str) -> Result<Vec<SimplexPoint>> {
    serde_json::from_str(json).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::linkage_map;
    use crate::graph::{conditional_theta, random_feasible_eta, theta_in_feasible};
    use approx::assert_abs_diff_eq;

    fn sorted(mut v: Vec<SimplexPoint>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.coords().partial_cmp(b.coords()).unwrap());
        v.into_iter().map(SimplexPoint::into_inner).collect()
    }

    #[test]
    fn vacuous_set_is_the_simplex() {
        let v = sorted(vertices(&EtaMatrix::vacuous(4)).unwrap());
        assert_eq!(v.len(), 4);
        for (i, p) in v.iter().rev().enumerate() {
            assert_eq!(p, SimplexPoint::vertex(4, i).coords());
        }
    }

    #[test]
    fn interval_in_two_categories() {
        let eta = EtaMatrix::from_rows(&[vec![1.0, 2.0], vec![0.75, 1.0]]).unwrap();
        let v = sorted(vertices(&eta).unwrap());
        assert_eq!(v.len(), 2);
        assert_abs_diff_eq!(&v[0][..], &[1.0 / 3.0, 2.0 / 3.0][..], epsilon = 1e-12);
        assert_abs_diff_eq!(&v[1][..], &[3.0 / 7.0, 4.0 / 7.0][..], epsilon = 1e-12);
    }

    #[test]
    fn exact_ratios_collapse_to_a_point() {
        let theta = SimplexPoint::new(vec![0.5, 0.25, 0.25]).unwrap();
        let v = vertices(&EtaMatrix::from_ratios(&theta).unwrap()).unwrap();
        assert_eq!(v.len(), 1);
        assert_abs_diff_eq!(v[0].coords(), theta.coords(), epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        let eta = EtaMatrix::from_rows(&[vec![1.0, 2.0], vec![0.4, 1.0]]).unwrap();
        assert_eq!(vertices(&eta), Err(Error::EmptySet));
        assert_eq!(
            vertices(&EtaMatrix::vacuous(9)),
            Err(Error::TooLarge { size: 9, max: 8 })
        );
    }

    #[test]
    fn vertices_are_feasible_and_contain_conditional_thetas() {
        let mut rng = RngStream::new(5, 0);
        for i in 0..60 {
            let dim = 2 + i % 5;
            let eta = random_feasible_eta(dim, &mut rng);
            let verts = vertices(&eta).unwrap();
            for v in &verts {
                assert!(theta_in_feasible(&eta, v));
            }
            for k in 0..dim {
                let t = conditional_theta(&eta, k).unwrap();
                let best = verts.iter().map(|v| v.distance(&t)).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9, "K={dim} k={k} distance {best}");
            }
        }
    }

    #[test]
    fn segment_examples() {
        let (a, b) = linkage_map();
        let open = Interval::new(0.0, 1.0);
        assert_eq!(
            segment_phi_interval(&EtaMatrix::vacuous(4), &a, &b, open),
            Some(open)
        );

        let point = SimplexPoint::new(vec![0.625, 0.125, 0.125, 0.125]).unwrap();
        let eta = EtaMatrix::from_ratios(&point).unwrap();
        let iv = segment_phi_interval(&eta, &a, &b, open).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(iv.upper, 0.5, epsilon = 1e-9);

        let off = SimplexPoint::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap();
        let eta = EtaMatrix::from_ratios(&off).unwrap();
        assert_eq!(segment_phi_interval(&eta, &a, &b, open), None);
    }

    #[test]
    fn segment_endpoints_are_feasible() {
        let (a, b) = linkage_map();
        let mut rng = RngStream::new(9, 0);
        let mut hits = 0;
        for _ in 0..300 {
            let eta = random_feasible_eta(4, &mut rng);
            if let Some(iv) = segment_phi_interval(&eta, &a, &b, Interval::new(0.0, 1.0)) {
                hits += 1;
                for phi in [iv.lower, iv.upper] {
                    let theta: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * phi + y).collect();
                    assert!(theta_in_feasible(&eta, &SimplexPoint::new(theta).unwrap()));
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn classify_trivial_assertions() {
        let eta = EtaMatrix::vacuous(3);
        assert_eq!(
            classify(&eta, &Assertion::everything(), 16).unwrap(),
            AssertionRelation::Contained
        );
        assert_eq!(
            classify(&eta, &Assertion::nothing(), 16).unwrap(),
            AssertionRelation::Disjoint
        );
    }

    #[test]
    fn bilinear_assertion_needs_interior_probes() {
        let h = Assertion::positive_association();
        let eta = EtaMatrix::vacuous(4);
        for v in vertices(&eta).unwrap() {
            assert_eq!(h.eval(v.coords()), 0.0);
        }
        assert_eq!(h.eval(&[0.5, 0.0, 0.0, 0.5]), 0.25);
        assert_eq!(h.eval(&[0.0, 0.5, 0.5, 0.0]), -0.25);
        assert_eq!(classify(&eta, &h, 0).unwrap(), AssertionRelation::Straddles);
        assert!(classify(&EtaMatrix::vacuous(3), &h, 0).is_err());
    }

    #[test]
    fn classify_is_monotone_in_the_assertion() {
        let mut rng = RngStream::new(21, 0);
        for _ in 0..100 {
            let eta = random_feasible_eta(3, &mut rng);
            for c in [0.1, 0.3, 0.5, 0.7] {
                let small = classify(&eta, &Assertion::coordinate_at_most(0, c), 0).unwrap();
                let large = classify(&eta, &Assertion::coordinate_at_most(0, c + 0.1), 0).unwrap();
                if small == AssertionRelation::Contained {
                    assert_eq!(large, AssertionRelation::Contained);
                }
                if large == AssertionRelation::Disjoint {
                    assert_eq!(small, AssertionRelation::Disjoint);
                }
            }
        }
    }

    #[test]
    fn feasible_set_caches_vertices() {
        let set = FeasibleSet::new(EtaMatrix::vacuous(3));
        assert!(!set.is_empty());
        let a = set.vertices().unwrap().as_ptr();
        let b = set.vertices().unwrap().as_ptr();
        assert_eq!(a, b);
        let json = vertices_to_json(set.vertices().unwrap());
        assert_eq!(json, "[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]");
        assert_eq!(vertices_from_json(&json).unwrap(), set.vertices().unwrap());
    }
}
