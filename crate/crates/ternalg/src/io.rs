//! JSON artifact formats. One artifact per file, discriminated by shape or
//! an explicit `kind` field. Floating-point values are serialised in the
//! shortest form that round-trips the underlying 64-bit value, so files are
//! diffable and bit-stable.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{FibreVector, StructureTensor, TernaryAlgebra};
use crate::connections::ConnectionField;
use crate::constructors::{BilinearForm, BinaryAlgebra, HeapTable};
use crate::error::{Result, TernError};
use crate::fields::{MetricField, SectionField, StructureField};
use crate::grid::{Chart, GridField};
use crate::transport::Curve;

pub const FIELD_ORDER: &str = "C-row-major, point-major then tensor indices";

/// `{"dim": n, "C": [[[[...]]]], "label": "..."}` with `C[lambda][alpha][beta][gamma]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Vec<Vec<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &TernaryAlgebra) -> Self {
        let n = a.dim();
        let c = (0..n)
            .map(|l| {
                (0..n)
                    .map(|al| {
                        (0..n)
                            .map(|be| (0..n).map(|ga| a.structure().get(l, al, be, ga)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            dim: n,
            c,
            label: a.label.clone(),
        }
    }

    pub fn into_algebra(self) -> Result<TernaryAlgebra> {
        if self.dim == 0 {
            return Err(TernError::InvalidInput(
                "algebra dimension must be positive".into(),
            ));
        }
        let n = self.dim;
        let mut flat = Vec::with_capacity(n * n * n * n);
        if self.c.len() != n {
            return Err(TernError::ShapeMismatch(format!(
                "C has {} lambda slices, expected {n}",
                self.c.len()
            )));
        }
        for l in self.c {
            if l.len() != n {
                return Err(TernError::ShapeMismatch("ragged C nesting".into()));
            }
            for al in l {
                if al.len() != n {
                    return Err(TernError::ShapeMismatch("ragged C nesting".into()));
                }
                for be in al {
                    if be.len() != n {
                        return Err(TernError::ShapeMismatch("ragged C nesting".into()));
                    }
                    for v in be {
                        if !v.is_finite() {
                            return Err(TernError::InvalidInput(
                                "structure constants must be finite".into(),
                            ));
                        }
                        flat.push(v);
                    }
                }
            }
        }
        Ok(TernaryAlgebra::new(
            StructureTensor::from_flat(n, flat)?,
            self.label,
        ))
    }
}

/// `{"order": k, "table": [[[...]]]}` with 1-based table values.
#[derive(Debug, Serialize, Deserialize)]
pub struct HeapDoc {
    pub order: usize,
    pub table: Vec<Vec<Vec<usize>>>,
}

impl HeapDoc {
    pub fn from_table(h: &HeapTable) -> Self {
        let k = h.order();
        Self {
            order: k,
            table: (1..=k)
                .map(|a| {
                    (1..=k)
                        .map(|b| (1..=k).map(|c| h.get(a, b, c)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_table(self) -> Result<HeapTable> {
        let k = self.order;
        let mut flat = Vec::with_capacity(k * k * k);
        if self.table.len() != k {
            return Err(TernError::ShapeMismatch("heap table outer length".into()));
        }
        for plane in self.table {
            if plane.len() != k {
                return Err(TernError::ShapeMismatch("ragged heap table".into()));
            }
            for row in plane {
                if row.len() != k {
                    return Err(TernError::ShapeMismatch("ragged heap table".into()));
                }
                flat.extend(row);
            }
        }
        HeapTable::new(k, flat)
    }
}

/// `{"dim": n, "B": [[...]]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct BilinearDoc {
    pub dim: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
}

impl BilinearDoc {
    pub fn from_form(b: &BilinearForm) -> Self {
        Self {
            dim: b.dim(),
            b: b.rows(),
        }
    }

    pub fn into_form(self) -> Result<BilinearForm> {
        if self.b.len() != self.dim || self.b.iter().any(|r| r.len() != self.dim) {
            return Err(TernError::ShapeMismatch("bilinear form shape".into()));
        }
        if self.b.iter().flatten().any(|v| !v.is_finite()) {
            return Err(TernError::InvalidInput(
                "form entries must be finite".into(),
            ));
        }
        Ok(BilinearForm::from_rows(&self.b))
    }
}

/// Binary-algebra artifact produced by the star reduction:
/// `{"dim": n, "M": [[[...]]], "unit": [...]}` with `M[lambda][alpha][beta]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct BinaryAlgebraDoc {
    pub dim: usize,
    #[serde(rename = "M")]
    pub m: Vec<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<f64>>,
}

impl BinaryAlgebraDoc {
    pub fn from_algebra(b: &BinaryAlgebra) -> Self {
        let n = b.dim();
        Self {
            dim: n,
            m: (0..n)
                .map(|l| {
                    (0..n)
                        .map(|al| (0..n).map(|be| b.get(l, al, be)).collect())
                        .collect()
                })
                .collect(),
            unit: b.unit.as_ref().map(|u| u.components.clone()),
        }
    }

    pub fn into_algebra(self) -> Result<BinaryAlgebra> {
        let n = self.dim;
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in &self.m {
            for row in plane {
                flat.extend_from_slice(row);
            }
        }
        BinaryAlgebra::from_flat(n, flat, self.unit.map(FibreVector::new))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChartDoc {
    pub base_dim: usize,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl ChartDoc {
    pub fn from_chart(c: &Chart) -> Self {
        Self {
            base_dim: c.base_dim(),
            origin: c.origin.clone(),
            spacing: c.spacing.clone(),
            shape: c.shape.clone(),
        }
    }

    pub fn into_chart(self) -> Result<Chart> {
        if self.origin.len() != self.base_dim {
            return Err(TernError::ShapeMismatch(
                "chart base_dim disagrees with origin length".into(),
            ));
        }
        Chart::new(self.origin, self.spacing, self.shape)
    }
}

/// Shared envelope for sampled fields:
/// `{"chart": {...}, "fibre_dim": n, "kind": "structure"|"metric"|"section"|"connection",
///   "values": [...], "order": "C-row-major, point-major then tensor indices"}`.
///
/// Connection values are shaped `[point][a][alpha][beta]`, structure values
/// `[point][lambda][alpha][beta][gamma]`, metric values `[point][a][b]` and
/// section values `[point][alpha]`, all flattened.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldDoc {
    pub chart: ChartDoc,
    pub fibre_dim: usize,
    pub kind: String,
    pub values: Vec<f64>,
    pub order: String,
}

impl FieldDoc {
    fn new(chart: &Chart, fibre_dim: usize, kind: &str, values: Vec<f64>) -> Self {
        Self {
            chart: ChartDoc::from_chart(chart),
            fibre_dim,
            kind: kind.to_string(),
            values,
            order: FIELD_ORDER.to_string(),
        }
    }

    pub fn from_structure(f: &StructureField) -> Self {
        Self::new(f.chart(), f.fibre_dim, "structure", f.grid.data.clone())
    }

    pub fn from_metric(g: &MetricField) -> Self {
        Self::new(g.chart(), g.base_dim(), "metric", g.grid.data.clone())
    }

    pub fn from_section(s: &SectionField) -> Self {
        Self::new(s.chart(), s.fibre_dim, "section", s.grid.data.clone())
    }

    pub fn from_connection(c: &ConnectionField) -> Self {
        Self::new(c.chart(), c.fibre_dim, "connection", c.grid.data.clone())
    }

    fn validate(&self) -> Result<()> {
        if self.order != FIELD_ORDER {
            return Err(TernError::InvalidInput(format!(
                "unsupported value order {:?}; expected {FIELD_ORDER:?}",
                self.order
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(TernError::InvalidInput(
                "field values must be finite".into(),
            ));
        }
        Ok(())
    }

    fn into_grid(
        self,
        kind: &str,
        comps_of: impl Fn(usize, usize) -> usize,
    ) -> Result<(GridField, usize)> {
        self.validate()?;
        self.expect_kind(kind)?;
        let fibre_dim = self.fibre_dim;
        let chart = self.chart.into_chart()?;
        let comps = comps_of(chart.base_dim(), fibre_dim);
        Ok((GridField::from_data(chart, comps, self.values)?, fibre_dim))
    }

    pub fn into_structure(self) -> Result<StructureField> {
        let (grid, fibre_dim) = self.into_grid("structure", |_, n| n.pow(4))?;
        Ok(StructureField { grid, fibre_dim })
    }

    pub fn into_metric(self) -> Result<MetricField> {
        let (grid, _) = self.into_grid("metric", |d, _| d * d)?;
        MetricField::from_grid(grid)
    }

    pub fn into_section(self) -> Result<SectionField> {
        let (grid, fibre_dim) = self.into_grid("section", |_, n| n)?;
        Ok(SectionField { grid, fibre_dim })
    }

    pub fn into_connection(self) -> Result<ConnectionField> {
        let (grid, fibre_dim) = self.into_grid("connection", |d, n| d * n * n)?;
        Ok(ConnectionField { grid, fibre_dim })
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(TernError::InvalidInput(format!(
                "expected a {kind:?} field, found kind {:?}",
                self.kind
            )));
        }
        Ok(())
    }
}

/// `{"closed": bool, "samples": [[t, x1, ..., xd], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CurveDoc {
    pub closed: bool,
    pub samples: Vec<Vec<f64>>,
}

impl CurveDoc {
    pub fn from_curve(c: &Curve) -> Self {
        Self {
            closed: c.closed,
            samples: c
                .params()
                .iter()
                .zip(c.points())
                .map(|(&t, x)| {
                    let mut row = vec![t];
                    row.extend_from_slice(x);
                    row
                })
                .collect(),
        }
    }

    pub fn into_curve(self) -> Result<Curve> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for (k, row) in self.samples.into_iter().enumerate() {
            if row.len() < 2 {
                return Err(TernError::ShapeMismatch(format!(
                    "curve sample {k} needs [t, x...], got {} numbers",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(TernError::InvalidInput(
                    "curve samples must be finite".into(),
                ));
            }
            samples.push((row[0], row[1..].to_vec()));
        }
        Curve::new(samples, self.closed)
    }
}

/// I/O wrapper errors carry the file path and, for JSON syntax errors, the
/// byte offset of the failure.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Invalid { path: String, source: TernError },
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    // serde_json reports 1-based line and column
    let mut offset = 0;
    for (k, l) in text.split_inclusive('\n').enumerate() {
        if k + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    offset
}

pub fn load_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.display().to_string(),
        offset: byte_offset(&text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn save_doc<T: Serialize>(path: &Path, doc: &T) -> std::result::Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialise");
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_algebra(path: &Path) -> std::result::Result<TernaryAlgebra, IoError> {
    let doc: AlgebraDoc = load_doc(path)?;
    doc.into_algebra().map_err(|source| IoError::Invalid {
        path: path.display().to_string(),
        source,
    })
}
