use crate::error::{Error, Result};

/// Opinions of `N` agents in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfiguration {
    dim: usize,
    positions: Vec<f64>,
}

impl AgentConfiguration {
    /// Builds a configuration from a flat row-major buffer of `n * dim` coordinates.
    pub fn from_flat(dim: usize, positions: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if positions.is_empty() || !positions.len().is_multiple_of(dim) {
            return Err(Error::invalid(
                "positions",
                format!("length {} is not a positive multiple of dim {}", positions.len(), dim),
            ));
        }
        if let Some(k) = positions.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                agent: k / dim,
                time: 0.0,
            });
        }
        Ok(Self { dim, positions })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        let mut flat = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.as_ref().len() != dim {
                return Err(Error::invalid(
                    "positions",
                    format!("agent {i} has dimension {} instead of {dim}", p.as_ref().len()),
                ));
            }
            flat.extend_from_slice(p.as_ref());
        }
        Self::from_flat(dim, flat)
    }

    /// One-dimensional configuration from scalar opinions.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub(crate) fn from_flat_unchecked(dim: usize, positions: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && positions.len().is_multiple_of(dim));
        Self { dim, positions }
    }

    pub fn n_agents(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn agent(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn agent_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.positions
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.positions
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.agent(i), self.agent(j))
    }

    /// Index of the first non-finite coordinate's agent, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.positions
            .iter()
            .position(|x| !x.is_finite())
            .map(|k| k / self.dim)
    }

    /// Copy translated by `shift` (one entry per coordinate).
    pub fn translated(&self, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.dim);
        let positions = self
            .positions
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        Self::from_flat_unchecked(self.dim, positions)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    if let ([x], [y]) = (a, b) {
        return (x - y).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
