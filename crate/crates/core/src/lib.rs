//! Dempster–Shafer inference for Categorical distributions.
//!
//! Observations `x_1, …, x_N` in `K` categories are explained by auxiliary
//! draws `u_n`, uniform on the simplex. Given the draws, the set of
//! parameters `θ` compatible with the data is a convex polytope
//!
//! ```text
//! F = { θ ∈ Δ : θ_ℓ / θ_k ≤ η_{k→ℓ} for all k ≠ ℓ },
//! ```
//!
//! with `η_{k→ℓ} = min_{n : x_n = k} u_{n,ℓ} / u_{n,k}`. Inference reports, for
//! an assertion `Σ ⊆ Δ`, how often the random set `F` lies inside `Σ`, misses
//! it, or straddles it, with `F` drawn conditionally on being non-empty.
//!
//! * [`simplex`]: points, subsimplices and datasets.
//! * [`graph`]: the `η` matrix, feasibility and shortest-path quantities.
//! * [`polytope`]: vertices of `F` and classification of assertions.
//! * [`gibbs`]: the Gibbs sampler, coupled chains and trace I/O.
//! * [`evidence`]: `(p, q, r)` summaries and combination with other evidence.

pub mod error;
pub mod evidence;
pub mod gibbs;
pub mod graph;
pub mod polytope;
pub mod rng;
pub mod simplex;

pub use error::{Error, Result};
pub use evidence::{pqr, Assertion, PqrTriple};
pub use gibbs::GibbsState;
pub use graph::EtaMatrix;
pub use polytope::{AssertionRelation, FeasibleSet};
pub use rng::RngStream;
pub use simplex::{Dataset, SimplexPoint};
