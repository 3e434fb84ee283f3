//! Sampled sequences on the unit grid.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A grid point `k`. Operators are evaluated on `k ∈ ℕ_a = {a, a+1, …}`.
pub type GridIndex = i64;

/// A scalar or vector sequence sampled at `a - h, …, a + len - 1`.
///
/// `a` is the base instant of every fractional operator applied to the
/// signal; the `h` history samples sit before it (one is enough for the
/// first-order Caputo and Riemann–Liouville differences). Values are stored
/// row-major, one row of `dimension` entries per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    base: GridIndex,
    history: usize,
    dimension: usize,
    data: Vec<f64>,
}

impl SampledSignal {
    /// Builds a signal from row-major data covering `base - history ..`.
    pub fn new(base: GridIndex, history: usize, dimension: usize, data: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("signal dimension must be positive"));
        }
        if data.is_empty() || !data.len().is_multiple_of(dimension) {
            return Err(Error::DimensionMismatch { expected: dimension, found: data.len() % dimension });
        }
        if data.len() / dimension < history {
            return Err(Error::InvalidParameter("history longer than the signal"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { base, history, dimension, data })
    }

    /// Scalar signal: `history` holds samples before `base`, `samples` the
    /// values at `base, base + 1, …`.
    pub fn scalar(base: GridIndex, history: &[f64], samples: &[f64]) -> Result<Self> {
        let mut data = Vec::with_capacity(history.len() + samples.len());
        data.extend_from_slice(history);
        data.extend_from_slice(samples);
        Self::new(base, history.len(), 1, data)
    }

    /// Vector signal from one row per grid point, starting at `base - history`.
    pub fn from_rows<R: AsRef<[f64]>>(base: GridIndex, history: usize, rows: &[R]) -> Result<Self> {
        let dimension = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dimension);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(base, history, dimension, data)
    }

    pub fn base(&self) -> GridIndex {
        self.base
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn history_len(&self) -> usize {
        self.history
    }

    /// Number of grid points, history included.
    pub fn point_count(&self) -> usize {
        self.data.len() / self.dimension
    }

    pub fn first_index(&self) -> GridIndex {
        self.base - self.history as GridIndex
    }

    pub fn last_index(&self) -> GridIndex {
        self.first_index() + self.point_count() as GridIndex - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Row at grid point `k`.
    pub fn at(&self, k: GridIndex) -> Result<&[f64]> {
        let first = self.first_index();
        if k < first || k > self.last_index() {
            return Err(Error::OutOfRange { k, first, last: self.last_index() });
        }
        let i = (k - first) as usize * self.dimension;
        Ok(&self.data[i..i + self.dimension])
    }

    /// First component at `k`; the natural accessor for scalar signals.
    pub fn scalar_at(&self, k: GridIndex) -> Result<f64> {
        self.at(k).map(|row| row[0])
    }

    /// Rows paired with their grid index.
    pub fn rows(&self) -> impl Iterator<Item = (GridIndex, &[f64])> + '_ {
        let first = self.first_index();
        self.data.chunks_exact(self.dimension).enumerate().map(move |(i, r)| (first + i as GridIndex, r))
    }

    /// Scalar signal obtained by applying `f` to every row.
    ///
    /// The result may contain non-finite values when `f` overflows; callers
    /// that need the finiteness invariant check it themselves.
    pub fn try_map<F>(&self, mut f: F) -> Result<SampledSignal>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let data = self.data.chunks_exact(self.dimension).map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(Self { base: self.base, history: self.history, dimension: 1, data })
    }

    /// Same-shaped signal with `f` applied to each row.
    pub fn map_rows<F>(&self, dimension: usize, mut f: F) -> Result<SampledSignal>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let mut data = Vec::with_capacity(self.point_count() * dimension);
        for row in self.data.chunks_exact(self.dimension) {
            let mapped = f(row)?;
            if mapped.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: mapped.len() });
            }
            data.extend(mapped);
        }
        Ok(Self { base: self.base, history: self.history, dimension, data })
    }

    pub fn component(&self, i: usize) -> Result<SampledSignal> {
        if i >= self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: i + 1 });
        }
        self.try_map(|row| Ok(row[i]))
    }

    /// Pointwise linear combination `λ·self + μ·other`.
    pub fn combine(&self, lambda: f64, other: &SampledSignal, mu: f64) -> Result<SampledSignal> {
        if self.first_index() != other.first_index() || self.point_count() != other.point_count() {
            return Err(Error::LengthMismatch);
        }
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: other.dimension });
        }
        let data = self.data.iter().zip(&other.data).map(|(x, y)| lambda * x + mu * y).collect();
        Ok(Self { data, ..self.clone() })
    }

    /// Largest absolute entry.
    pub fn sup_norm(&self) -> f64 {
        crate::math::max_abs(&self.data)
    }
}
