//! Analytically optimal soft vector quantisers for circle and torus manifolds.
//!
//! A neuron ring of M cells encodes points on a circle (or a 2-torus, either
//! jointly or as two independent circles). Each neuron's posterior is a
//! piecewise-sinusoidal bump of half-width Δ/2 + s and its reference vector
//! has length r. The [`solver`] finds the optimal (s, r) and minimum D1+D2
//! from the stationarity equations; [`oracle`] checks them independently.

pub mod activation;
pub mod asymptotics;
pub mod codec;
pub mod comparator;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use codec::{Manifold, PosteriorProfile, ProblemSpec, Regime};
pub use error::{Error, Result};
pub use exec::Execution;
pub use solver::{solve, Solution};
