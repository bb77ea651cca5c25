//! Algebroid-level structures on a sampled chart: structure-function fields,
//! metric fields and section fields, with pointwise fibre-algebra extraction.
//!
//! Fields store node values only; nothing here interpolates between nodes
//! (transport does, where it is needed).

use rayon::prelude::*;

use crate::algebra::{FibreVector, StructureTensor, TernaryAlgebra, Tolerance};
use crate::error::{Result, TernError};
use crate::grid::{max_with_argnode, Chart, GridField};

/// Per-node structure tensor `C^λ_{αβγ}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureField {
    pub grid: GridField,
    pub fibre_dim: usize,
}

impl StructureField {
    pub fn new(chart: Chart, fibre_dim: usize) -> Self {
        let comps = fibre_dim.pow(4);
        Self {
            grid: GridField::zeros(chart, comps),
            fibre_dim,
        }
    }

    pub fn from_fn(chart: Chart, fibre_dim: usize, f: impl Fn(&[f64]) -> StructureTensor) -> Self {
        let comps = fibre_dim.pow(4);
        let grid = GridField::from_fn(chart, comps, |_, x, out| {
            let c = f(x);
            assert_eq!(c.dim(), fibre_dim);
            out.copy_from_slice(c.entries());
        });
        Self { grid, fibre_dim }
    }

    pub fn chart(&self) -> &Chart {
        &self.grid.chart
    }

    /// Structure tensor at a node, by flat index.
    pub fn tensor_at_flat(&self, flat: usize) -> StructureTensor {
        StructureTensor::from_flat(self.fibre_dim, self.grid.node(flat).to_vec())
            .expect("node slice has the right length")
    }
}

/// Per-node symmetric matrix `g_{ab}(x)`. Symmetry is enforced exactly at
/// construction; degeneracy is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    pub grid: GridField,
}

impl MetricField {
    pub fn from_fn(chart: Chart, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let d = chart.base_dim();
        let grid = GridField::from_fn(chart, d * d, |_, x, out| {
            out.copy_from_slice(&f(x));
        });
        let field = Self { grid };
        field.check_symmetry()?;
        Ok(field)
    }

    pub fn from_grid(grid: GridField) -> Result<Self> {
        let d = grid.chart.base_dim();
        if grid.comps != d * d {
            return Err(TernError::ShapeMismatch(format!(
                "metric on a {d}-dimensional chart needs {} components per node, got {}",
                d * d,
                grid.comps
            )));
        }
        let field = Self { grid };
        field.check_symmetry()?;
        Ok(field)
    }

    fn check_symmetry(&self) -> Result<()> {
        let d = self.base_dim();
        for p in 0..self.grid.chart.num_points() {
            let g = self.grid.node(p);
            for a in 0..d {
                for b in 0..a {
                    if g[a * d + b] != g[b * d + a] {
                        return Err(TernError::InvalidInput(format!(
                            "metric is not symmetric at node {:?}",
                            self.grid.chart.multi_index(p)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chart(&self) -> &Chart {
        &self.grid.chart
    }

    pub fn base_dim(&self) -> usize {
        self.grid.chart.base_dim()
    }

    #[inline]
    pub fn at(&self, flat: usize, a: usize, b: usize) -> f64 {
        self.grid.node(flat)[a * self.base_dim() + b]
    }
}

/// Per-node fibre vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionField {
    pub grid: GridField,
    pub fibre_dim: usize,
}

impl SectionField {
    pub fn from_fn(chart: Chart, fibre_dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let grid = GridField::from_fn(chart, fibre_dim, |_, x, out| {
            out.copy_from_slice(&f(x));
        });
        Self { grid, fibre_dim }
    }

    pub fn constant(chart: Chart, value: &FibreVector) -> Self {
        let fibre_dim = value.dim();
        let grid = GridField::from_fn(chart, fibre_dim, |_, _, out| {
            out.copy_from_slice(value.as_slice());
        });
        Self { grid, fibre_dim }
    }

    pub fn chart(&self) -> &Chart {
        &self.grid.chart
    }
}

/// Tangent-bundle algebroid of a metric: `C^λ_{αβγ}(x) = g_{αβ}(x) δ^λ_γ`,
/// fibre dimension equal to the base dimension. Degenerate metrics are
/// accepted unchanged.
pub fn metric_algebroid(g: &MetricField) -> StructureField {
    let d = g.base_dim();
    let mut out = StructureField::new(g.chart().clone(), d);
    let comps = out.grid.comps;
    for p in 0..g.chart().num_points() {
        let node = g.grid.node(p).to_vec();
        let dest = &mut out.grid.data[p * comps..(p + 1) * comps];
        for alpha in 0..d {
            for beta in 0..d {
                let v = node[alpha * d + beta];
                if v == 0.0 {
                    continue;
                }
                for gamma in 0..d {
                    // flat [λ][α][β][γ] with λ = γ
                    dest[((gamma * d + alpha) * d + beta) * d + gamma] = v;
                }
            }
        }
    }
    out
}

/// One-parameter family `C(t) = t · (bilinear tensor of B)` over a 1-d chart.
pub fn scaled_line_algebroid(
    b: &crate::constructors::BilinearForm,
    chart: &Chart,
) -> Result<StructureField> {
    if chart.base_dim() != 1 {
        return Err(TernError::ChartMismatch(format!(
            "scaled line family needs a 1-dimensional chart, got base dimension {}",
            chart.base_dim()
        )));
    }
    let base = crate::constructors::bilinear_algebra(b);
    let n = base.dim();
    let mut out = StructureField::new(chart.clone(), n);
    let comps = out.grid.comps;
    for p in 0..chart.num_points() {
        let t = chart.coord(0, p);
        let dest = &mut out.grid.data[p * comps..(p + 1) * comps];
        for (d, s) in dest.iter_mut().zip(base.structure().entries()) {
            *d = t * s;
        }
    }
    Ok(out)
}

/// The ternary algebra carried by one fibre.
pub fn fibre_algebra(f: &StructureField, index: &[usize]) -> Result<TernaryAlgebra> {
    let flat = f.chart().flat_index(index)?;
    Ok(TernaryAlgebra::new(f.tensor_at_flat(flat), None))
}

/// Fibre algebra at an arbitrary chart point, with the structure tensor
/// interpolated multilinearly. Used by transport, where curve endpoints
/// need not be nodes.
pub fn fibre_algebra_at(f: &StructureField, x: &[f64]) -> Result<TernaryAlgebra> {
    let entries = f.grid.sample(x)?;
    Ok(TernaryAlgebra::new(
        StructureTensor::from_flat(f.fibre_dim, entries)?,
        None,
    ))
}

/// Outcome of a pointwise para-associativity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCheckReport {
    pub max_residual: f64,
    pub argmax_node: Vec<usize>,
    pub nodes: usize,
    pub failing_nodes: usize,
    pub eps: f64,
}

impl FieldCheckReport {
    pub fn pass(&self) -> bool {
        self.max_residual <= self.eps
    }
}

/// Runs the contracted para-associativity check at every node.
pub fn field_para_check(f: &StructureField, tol: Tolerance) -> FieldCheckReport {
    let nodes = f.chart().num_points();
    let residuals: Vec<f64> = (0..nodes)
        .into_par_iter()
        .map(|p| TernaryAlgebra::new(f.tensor_at_flat(p), None).para_assoc_max_residual())
        .collect();
    let (max_residual, argmax) = max_with_argnode(residuals.par_iter().copied());
    let failing = residuals.iter().filter(|&&r| r > tol.eps).count();
    FieldCheckReport {
        max_residual,
        argmax_node: f.chart().multi_index(argmax),
        nodes,
        failing_nodes: failing,
        eps: tol.eps,
    }
}

/// Pointwise ternary product of three sections.
pub fn evaluate_section_product(
    f: &StructureField,
    u: &SectionField,
    v: &SectionField,
    w: &SectionField,
) -> Result<SectionField> {
    for s in [u, v, w] {
        if s.chart() != f.chart() {
            return Err(TernError::ChartMismatch(
                "sections must live on the structure field's chart".into(),
            ));
        }
        if s.fibre_dim != f.fibre_dim {
            return Err(TernError::DimensionMismatch {
                expected: f.fibre_dim,
                got: s.fibre_dim,
                context: "section product",
            });
        }
    }
    let n = f.fibre_dim;
    let mut out = SectionField {
        grid: GridField::zeros(f.chart().clone(), n),
        fibre_dim: n,
    };
    for p in 0..f.chart().num_points() {
        let algebra = TernaryAlgebra::new(f.tensor_at_flat(p), None);
        let prod = algebra.product(
            &FibreVector::from_slice(u.grid.node(p)),
            &FibreVector::from_slice(v.grid.node(p)),
            &FibreVector::from_slice(w.grid.node(p)),
        )?;
        out.grid.node_mut(p).copy_from_slice(prod.as_slice());
    }
    Ok(out)
}

/// Pointwise inverse metric. Errors on the first node whose determinant
/// magnitude falls below `1e-12`, naming it.
pub fn inverse_metric(g: &MetricField) -> Result<MetricField> {
    let d = g.base_dim();
    let threshold = 1e-12;
    let mut out = GridField::zeros(g.chart().clone(), d * d);
    for p in 0..g.chart().num_points() {
        let node = g.grid.node(p);
        let det = crate::linalg::determinant(node, d);
        if det.abs() < threshold {
            return Err(TernError::DegenerateMetric {
                node: g.chart().multi_index(p),
                det: det.abs(),
                threshold,
            });
        }
        let inv = crate::linalg::invert(node, d, 0.0)
            .expect("determinant above threshold implies invertibility");
        // symmetrise exactly so the result satisfies the metric invariant
        let dest = out.node_mut(p);
        for a in 0..d {
            for b in 0..=a {
                let v = 0.5 * (inv[a * d + b] + inv[b * d + a]);
                dest[a * d + b] = v;
                dest[b * d + a] = v;
            }
        }
    }
    MetricField::from_grid(out)
}

/// Cotangent-side algebroid `[ω,η,σ] = g^{-1}(ω,η)σ`, available only for
/// invertible metrics.
pub fn cotangent_algebroid(g: &MetricField) -> Result<StructureField> {
    Ok(metric_algebroid(&inverse_metric(g)?))
}
