//! Gauss–Chebyshev (first kind) nodes and the finite-interval rule built on them.

use crate::error::{domain, Result};
use crate::scalar::{count, lit, Scalar};

/// Nodes `tₙ = cos((2n-1)π / (2M))`, `n = 1..M`, with common weight `π/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevNodes<T> {
    m2: usize,
    nodes: Vec<T>,
    weight_factor: T,
}

impl<T: Scalar> ChebyshevNodes<T> {
    pub fn new(m2: usize) -> Result<Self> {
        if m2 == 0 {
            return Err(domain("chebyshev_nodes", "node count must be at least 1"));
        }
        let m: T = count(m2 as u64);
        let nodes = (1..=m2)
            .map(|n| {
                let k: T = count(2 * n as u64 - 1);
                (k * T::PI() / (m + m)).cos()
            })
            .collect();
        Ok(Self {
            m2,
            nodes,
            weight_factor: T::PI() / m,
        })
    }

    pub fn len(&self) -> usize {
        self.m2
    }

    pub fn is_empty(&self) -> bool {
        self.m2 == 0
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// The common weight `π / M`.
    pub fn weight_factor(&self) -> T {
        self.weight_factor
    }

    /// Approximates `∫₀^upper f(z) dz` as
    /// `(upper/2) Σ (π/M) f((upper/2)(tₙ+1)) √(1-tₙ²)`.
    ///
    /// `f` is never evaluated at either endpoint.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, upper: T) -> T {
        if upper == T::zero() {
            return T::zero();
        }
        let half = upper * lit(0.5);
        let sum = self.nodes.iter().fold(T::zero(), |acc, &t| {
            acc + f(half * (t + T::one())) * (T::one() - t * t).sqrt()
        });
        half * self.weight_factor * sum
    }
}

/// Chebyshev node set of size `m2`.
pub fn chebyshev_nodes<T: Scalar>(m2: usize) -> Result<ChebyshevNodes<T>> {
    ChebyshevNodes::new(m2)
}
