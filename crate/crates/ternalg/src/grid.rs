//! Rectangular grid sampling of a single coordinate patch, and the flat
//! per-node storage shared by every sampled field.
//!
//! Layout is C-row-major, point-major then tensor indices: the flat node
//! index varies slowest, the trailing tensor index fastest.

use rayon::prelude::*;

use crate::error::{Result, TernError};

/// Rectangular grid on an open patch: per-axis origin, spacing and point
/// count. All fields on a chart share its node enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl Chart {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        if origin.len() != spacing.len() || origin.len() != shape.len() || origin.is_empty() {
            return Err(TernError::ShapeMismatch(format!(
                "chart axes disagree: origin {}, spacing {}, shape {}",
                origin.len(),
                spacing.len(),
                shape.len()
            )));
        }
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(TernError::InvalidInput(
                "chart spacing must be positive on every axis".into(),
            ));
        }
        if shape.iter().any(|&s| s == 0) {
            return Err(TernError::InvalidInput(
                "chart shape must be positive on every axis".into(),
            ));
        }
        Ok(Self {
            origin,
            spacing,
            shape,
        })
    }

    /// 1-d convenience constructor.
    pub fn line(origin: f64, spacing: f64, points: usize) -> Self {
        Self::new(vec![origin], vec![spacing], vec![points]).unwrap()
    }

    pub fn base_dim(&self) -> usize {
        self.shape.len()
    }

    pub fn num_points(&self) -> usize {
        self.shape.iter().product()
    }

    /// Coordinate of a node, one axis.
    pub fn coord(&self, axis: usize, index: usize) -> f64 {
        self.origin[axis] + index as f64 * self.spacing[axis]
    }

    /// Full coordinate vector of a node.
    pub fn point(&self, index: &[usize]) -> Vec<f64> {
        index
            .iter()
            .enumerate()
            .map(|(a, &i)| self.coord(a, i))
            .collect()
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.base_dim() || index.iter().zip(&self.shape).any(|(&i, &s)| i >= s) {
            return Err(TernError::IndexOutOfRange {
                index: index.to_vec(),
                shape: self.shape.clone(),
            });
        }
        let mut flat = 0;
        for (a, &i) in index.iter().enumerate() {
            flat = flat * self.shape[a] + i;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let d = self.base_dim();
        let mut index = vec![0usize; d];
        for a in (0..d).rev() {
            index[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        index
    }

    /// Row-major stride of one step along `axis` in the flat enumeration.
    pub fn stride(&self, axis: usize) -> usize {
        self.shape[axis + 1..].iter().product()
    }

    pub fn max_coord(&self, axis: usize) -> f64 {
        self.coord(axis, self.shape[axis] - 1)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.base_dim() {
            return false;
        }
        x.iter().enumerate().all(|(a, &xi)| {
            let slack = 1e-9 * self.spacing[a];
            xi >= self.origin[a] - slack && xi <= self.max_coord(a) + slack
        })
    }
}

/// Values sampled at every chart node: `comps` numbers per node, stored
/// point-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub chart: Chart,
    pub comps: usize,
    pub data: Vec<f64>,
}

impl GridField {
    pub fn zeros(chart: Chart, comps: usize) -> Self {
        let data = vec![0.0; chart.num_points() * comps];
        Self { chart, comps, data }
    }

    pub fn from_data(chart: Chart, comps: usize, data: Vec<f64>) -> Result<Self> {
        let expected = chart.num_points() * comps;
        if data.len() != expected {
            return Err(TernError::ShapeMismatch(format!(
                "field needs {expected} values ({} nodes x {comps}), got {}",
                chart.num_points(),
                data.len()
            )));
        }
        Ok(Self { chart, comps, data })
    }

    /// Fill from a per-node function of the flat index and coordinates.
    pub fn from_fn(chart: Chart, comps: usize, f: impl Fn(usize, &[f64], &mut [f64])) -> Self {
        let mut field = Self::zeros(chart, comps);
        let n = field.chart.num_points();
        for p in 0..n {
            let multi = field.chart.multi_index(p);
            let x = field.chart.point(&multi);
            let slice = &mut field.data[p * comps..(p + 1) * comps];
            f(p, &x, slice);
        }
        field
    }

    #[inline]
    pub fn node(&self, flat: usize) -> &[f64] {
        &self.data[flat * self.comps..(flat + 1) * self.comps]
    }

    #[inline]
    pub fn node_mut(&mut self, flat: usize) -> &mut [f64] {
        &mut self.data[flat * self.comps..(flat + 1) * self.comps]
    }

    /// Multilinear interpolation of all components at a point. The point must
    /// lie inside the chart hull.
    pub fn sample(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d = self.chart.base_dim();
        if x.len() != d {
            return Err(TernError::DimensionMismatch {
                expected: d,
                got: x.len(),
                context: "field sample",
            });
        }
        if !self.chart.contains(x) {
            return Err(TernError::CurveExitsChart {
                sample: 0,
                point: x.to_vec(),
            });
        }
        let mut cell = vec![0usize; d];
        let mut weight = vec![0.0f64; d];
        for a in 0..d {
            let f = (x[a] - self.chart.origin[a]) / self.chart.spacing[a];
            let max_cell = self.chart.shape[a].saturating_sub(2);
            let i = (f.floor().max(0.0) as usize).min(max_cell);
            cell[a] = i;
            weight[a] = if self.chart.shape[a] == 1 {
                0.0
            } else {
                (f - i as f64).clamp(0.0, 1.0)
            };
        }
        let mut out = vec![0.0; self.comps];
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut index = vec![0usize; d];
            for a in 0..d {
                if corner >> a & 1 == 1 {
                    w *= weight[a];
                    index[a] = (cell[a] + 1).min(self.chart.shape[a] - 1);
                } else {
                    w *= 1.0 - weight[a];
                    index[a] = cell[a];
                }
            }
            if w == 0.0 {
                continue;
            }
            let node = self.node(self.chart.flat_index(&index)?);
            for (o, v) in out.iter_mut().zip(node) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Discrete `∂_a`: second-order central differences in the interior and
/// second-order one-sided stencils at the boundary. Exact on fields affine
/// in the axis coordinate. Needs at least 3 points along the axis.
pub fn partial_derivative(field: &GridField, axis: usize) -> Result<GridField> {
    let chart = &field.chart;
    let d = chart.base_dim();
    if axis >= d {
        return Err(TernError::InvalidInput(format!(
            "axis {axis} out of range for base dimension {d}"
        )));
    }
    let points = chart.shape[axis];
    if points < 3 {
        return Err(TernError::TooFewPoints {
            axis,
            points,
            needed: 3,
        });
    }
    let h = chart.spacing[axis];
    let stride = chart.stride(axis);
    let comps = field.comps;
    let mut out = GridField::zeros(chart.clone(), comps);
    out.data
        .par_chunks_mut(comps)
        .enumerate()
        .for_each(|(p, dest)| {
            let i = p / stride % points;
            if i == 0 {
                let f0 = field.node(p);
                let f1 = field.node(p + stride);
                let f2 = field.node(p + 2 * stride);
                for c in 0..comps {
                    // -3f0 + 4f1 - f2, arranged as differences so constants
                    // cancel exactly
                    dest[c] = (4.0 * (f1[c] - f0[c]) - (f2[c] - f0[c])) / (2.0 * h);
                }
            } else if i == points - 1 {
                let f0 = field.node(p);
                let f1 = field.node(p - stride);
                let f2 = field.node(p - 2 * stride);
                for c in 0..comps {
                    dest[c] = ((f2[c] - f0[c]) - 4.0 * (f1[c] - f0[c])) / (2.0 * h);
                }
            } else {
                let fp = field.node(p + stride);
                let fm = field.node(p - stride);
                for c in 0..comps {
                    dest[c] = (fp[c] - fm[c]) / (2.0 * h);
                }
            }
        });
    Ok(out)
}

/// Max value with its first attaining node, combined deterministically:
/// larger value wins, ties go to the smaller flat index.
pub(crate) fn max_with_argnode(iter: impl IndexedParallelIterator<Item = f64>) -> (f64, usize) {
    iter.enumerate().map(|(p, v)| (v, p)).reduce(
        || (f64::NEG_INFINITY, usize::MAX),
        |a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        },
    )
}
