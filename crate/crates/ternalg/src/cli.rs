//! Command implementations behind the `ternalg` binary. Each command loads
//! JSON artifacts, runs the corresponding checks and returns a [`RunReport`];
//! the binary decides rendering and exit codes.
//!
//! Exit convention: 0 when every verdict passes, 1 when some verdict fails,
//! 2 for input errors (unreadable files, parse errors, shape mismatches).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use crate::algebra::{FibreVector, TernaryAlgebra, Tolerance};
use crate::connections::{
    curvature_derivation_residual, differential_residual, levi_civita, metric_compat_residual,
};
use crate::constructors::{self, binary_assoc_residual, canonical_biunit_iso, star_reduce};
use crate::error::TernError;
use crate::fields::{field_para_check, metric_algebroid, scaled_line_algebroid};
use crate::grid::Chart;
use crate::io::{
    load_doc, save_doc, AlgebraDoc, BilinearDoc, BinaryAlgebraDoc, CurveDoc, FieldDoc, HeapDoc,
    IoError,
};
use crate::report::{RunReport, Verdict};
use crate::transport::transport_iso_residual;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Domain(#[from] TernError),
}

pub type CliResult = Result<RunReport, CliError>;

fn read_input(report: &mut RunReport, path: &Path) -> Result<Vec<u8>, CliError> {
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    report.record_input(path, &bytes);
    Ok(bytes)
}

fn parse_input<T: for<'de> serde::Deserialize<'de>>(
    report: &mut RunReport,
    path: &Path,
) -> Result<T, CliError> {
    let bytes = read_input(report, path)?;
    let text = String::from_utf8_lossy(&bytes);
    serde_json::from_str(&text).map_err(|e| {
        IoError::Parse {
            path: path.display().to_string(),
            offset: byte_offset(&text, e.line(), e.column()),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
        .into()
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (k, l) in text.split_inclusive('\n').enumerate() {
        if k + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    offset
}

fn finish(mut report: RunReport, started: Instant) -> RunReport {
    report.timing_seconds = started.elapsed().as_secs_f64();
    report
}

/// Discretisation note attached to field-level reports: second-order
/// stencils leave residuals at the h² scale even for exact continuum data.
fn h2_note(report: &mut RunReport, chart: &Chart) {
    let h_max = chart.spacing.iter().cloned().fold(0.0f64, f64::max);
    report.detail(
        "h2_scale",
        json!({
            "note": "second-order stencils: discretisation-limited residuals scale like h^2",
            "value": h_max * h_max,
        }),
    );
}

/// `algebra check`: para-associativity, A-associativity, commutativity and a
/// biunit sweep over the basis vectors.
pub fn cmd_algebra_check(path: &Path, eps: f64) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("algebra check");
    let doc: AlgebraDoc = parse_input(&mut report, path)?;
    let algebra = doc.into_algebra().map_err(|source| IoError::Invalid {
        path: path.display().to_string(),
        source,
    })?;

    report.verdict(
        "para_associative",
        Verdict::from_residual(algebra.para_assoc_max_residual(), eps),
    );
    report.verdict(
        "a_associative",
        Verdict::from_residual(algebra.a_assoc_max_residual(), eps),
    );
    report.verdict(
        "commutative",
        Verdict::from_residual(algebra.commutativity_residual(), eps),
    );

    let n = algebra.dim();
    let tol = Tolerance::new(eps);
    let mut biunits = Vec::new();
    for i in 0..n {
        if algebra.is_biunit(&FibreVector::basis(n, i), tol)? {
            biunits.push(format!("e{}", i + 1));
        }
    }
    report.detail("dim", json!(n));
    report.detail("biunit_basis_vectors", json!(biunits));
    if let Some(label) = &algebra.label {
        report.detail("label", json!(label));
    }
    Ok(finish(report, started))
}

/// What `algebra construct` should build.
#[derive(Debug, Clone)]
pub enum ConstructKind {
    CyclicHeap {
        k: usize,
    },
    Heap {
        table: PathBuf,
    },
    Bilinear {
        form: PathBuf,
    },
    DirectSum {
        left: PathBuf,
        right: PathBuf,
    },
    Tensor {
        first: PathBuf,
        second: PathBuf,
        third: PathBuf,
    },
    MetricAlgebroid {
        metric: PathBuf,
    },
    ScaledLine {
        form: PathBuf,
        chart: Chart,
    },
    LeviCivita {
        metric: PathBuf,
    },
}

fn load_algebra_input(report: &mut RunReport, path: &Path) -> Result<TernaryAlgebra, CliError> {
    let doc: AlgebraDoc = parse_input(report, path)?;
    doc.into_algebra().map_err(|source| {
        IoError::Invalid {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

fn load_metric_input(
    report: &mut RunReport,
    path: &Path,
) -> Result<crate::fields::MetricField, CliError> {
    let doc: FieldDoc = parse_input(report, path)?;
    doc.into_metric().map_err(|source| {
        IoError::Invalid {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

/// `algebra construct`: builds an artifact, writes it to `out`, and reports
/// the construction's own consistency checks.
pub fn cmd_construct(kind: &ConstructKind, out: &Path, eps: f64) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("algebra construct");
    let tol = Tolerance::new(eps);

    match kind {
        ConstructKind::CyclicHeap { k } => {
            if *k == 0 {
                return Err(
                    TernError::InvalidInput("cyclic heap order must be positive".into()).into(),
                );
            }
            let algebra = constructors::heap_algebra(&constructors::cyclic_heap_table(*k))?;
            report.verdict(
                "para_associative",
                Verdict::from_residual(algebra.para_assoc_max_residual(), eps),
            );
            let biunits = (0..*k)
                .filter(|&i| {
                    algebra
                        .is_biunit(&FibreVector::basis(*k, i), tol)
                        .unwrap_or(false)
                })
                .count();
            report.verdict(
                "all_generators_biunital",
                Verdict::from_bool(biunits == *k, eps),
            );
            save_doc(out, &AlgebraDoc::from_algebra(&algebra))?;
        }
        ConstructKind::Heap { table } => {
            let doc: HeapDoc = parse_input(&mut report, table)?;
            let algebra = constructors::heap_algebra(&doc.into_table()?)?;
            report.verdict(
                "para_associative",
                Verdict::from_residual(algebra.para_assoc_max_residual(), eps),
            );
            save_doc(out, &AlgebraDoc::from_algebra(&algebra))?;
        }
        ConstructKind::Bilinear { form } => {
            let doc: BilinearDoc = parse_input(&mut report, form)?;
            let algebra = constructors::bilinear_algebra(&doc.into_form()?);
            report.verdict(
                "para_associative",
                Verdict::from_residual(algebra.para_assoc_max_residual(), eps),
            );
            save_doc(out, &AlgebraDoc::from_algebra(&algebra))?;
        }
        ConstructKind::DirectSum { left, right } => {
            let a = load_algebra_input(&mut report, left)?;
            let b = load_algebra_input(&mut report, right)?;
            let sum = constructors::direct_sum(&a, &b);
            report.verdict(
                "para_associative",
                Verdict::from_residual(sum.para_assoc_max_residual(), eps),
            );
            report.detail("dim", json!(sum.dim()));
            save_doc(out, &AlgebraDoc::from_algebra(&sum))?;
        }
        ConstructKind::Tensor {
            first,
            second,
            third,
        } => {
            let a = load_algebra_input(&mut report, first)?;
            let b = load_algebra_input(&mut report, second)?;
            let c = load_algebra_input(&mut report, third)?;
            let product = constructors::tensor_product(&a, &b, &c);
            report.verdict(
                "para_associative",
                Verdict::from_residual(product.para_assoc_max_residual(), eps),
            );
            report.detail("dim", json!(product.dim()));
            save_doc(out, &AlgebraDoc::from_algebra(&product))?;
        }
        ConstructKind::MetricAlgebroid { metric } => {
            let g = load_metric_input(&mut report, metric)?;
            let field = metric_algebroid(&g);
            let check = field_para_check(&field, tol);
            report.verdict(
                "para_associative_pointwise",
                Verdict::from_residual(check.max_residual, eps),
            );
            h2_note(&mut report, field.chart());
            save_doc(out, &FieldDoc::from_structure(&field))?;
        }
        ConstructKind::ScaledLine { form, chart } => {
            let doc: BilinearDoc = parse_input(&mut report, form)?;
            let field = scaled_line_algebroid(&doc.into_form()?, chart)?;
            let check = field_para_check(&field, tol);
            report.verdict(
                "para_associative_pointwise",
                Verdict::from_residual(check.max_residual, eps),
            );
            save_doc(out, &FieldDoc::from_structure(&field))?;
        }
        ConstructKind::LeviCivita { metric } => {
            let g = load_metric_input(&mut report, metric)?;
            let conn = levi_civita(&g)?;
            let compat = metric_compat_residual(&g, &conn)?;
            report.verdict(
                "metric_compatibility",
                Verdict::from_residual(compat.max_residual, eps),
            );
            report.detail("compat_argmax_node", json!(compat.argmax_node));
            h2_note(&mut report, conn.chart());
            save_doc(out, &FieldDoc::from_connection(&conn))?;
        }
    }
    report.detail("output", json!(out.display().to_string()));
    Ok(finish(report, started))
}

/// `algebra reduce`: star reduction at a chosen element, with associativity
/// and unit verdicts, written as a binary-algebra artifact.
pub fn cmd_reduce(path: &Path, element: &[f64], out: &Path, eps: f64) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("algebra reduce");
    let algebra = load_algebra_input(&mut report, path)?;
    let e = FibreVector::from_slice(element);
    let reduced = star_reduce(&algebra, &e)?;
    report.verdict(
        "associative",
        Verdict::from_residual(binary_assoc_residual(&reduced), eps),
    );
    report.detail(
        "unit",
        json!(reduced.unit.as_ref().map(|u| u.components.clone())),
    );
    report.detail("element", json!(element));
    save_doc(out, &BinaryAlgebraDoc::from_algebra(&reduced))?;
    report.detail("output", json!(out.display().to_string()));
    Ok(finish(report, started))
}

/// `algebra iso`: the canonical map between the reductions at two biunits.
pub fn cmd_canonical_iso(path: &Path, e: &[f64], e_prime: &[f64], eps: f64) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("algebra iso");
    let algebra = load_algebra_input(&mut report, path)?;
    let ev = FibreVector::from_slice(e);
    let ev2 = FibreVector::from_slice(e_prime);
    let psi = canonical_biunit_iso(&algebra, &ev, &ev2)?;
    let m1 = star_reduce(&algebra, &ev)?;
    let m2 = star_reduce(&algebra, &ev2)?;
    let residual = constructors::binary_hom_residual(&m1, &m2, &psi)?;
    report.verdict("homomorphism", Verdict::from_residual(residual, eps));
    report.verdict(
        "invertible",
        Verdict::from_bool(psi.determinant().abs() > 1e-12, eps),
    );
    report.detail(
        "matrix",
        json!((0..psi.rows)
            .map(|r| (0..psi.cols).map(|c| psi.get(r, c)).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    Ok(finish(report, started))
}

/// `field check`: pointwise para-associativity sweep.
pub fn cmd_field_check(path: &Path, eps: f64) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("field check");
    let doc: FieldDoc = parse_input(&mut report, path)?;
    let field = doc.into_structure().map_err(|source| IoError::Invalid {
        path: path.display().to_string(),
        source,
    })?;
    let check = field_para_check(&field, Tolerance::new(eps));
    report.verdict(
        "para_associative_pointwise",
        Verdict::from_residual(check.max_residual, eps),
    );
    report.detail("argmax_node", json!(check.argmax_node));
    report.detail("nodes", json!(check.nodes));
    report.detail("failing_nodes", json!(check.failing_nodes));
    h2_note(&mut report, field.chart());
    Ok(finish(report, started))
}

/// `connection check`: ternary Leibniz residual, curvature derivation
/// residual, and metric compatibility when a metric file is supplied.
pub fn cmd_connection_check(
    field_path: &Path,
    connection_path: &Path,
    metric_path: Option<&Path>,
    eps: f64,
) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("connection check");
    let field_doc: FieldDoc = parse_input(&mut report, field_path)?;
    let field = field_doc
        .into_structure()
        .map_err(|source| IoError::Invalid {
            path: field_path.display().to_string(),
            source,
        })?;
    let conn_doc: FieldDoc = parse_input(&mut report, connection_path)?;
    let conn = conn_doc
        .into_connection()
        .map_err(|source| IoError::Invalid {
            path: connection_path.display().to_string(),
            source,
        })?;

    let diff = differential_residual(&field, &conn, Tolerance::new(eps))?;
    report.verdict(
        "differential",
        Verdict::from_residual(diff.max_residual, eps),
    );
    report.detail("differential_argmax_node", json!(diff.argmax_node));
    report.detail("differential_per_axis_max", json!(diff.per_axis_max));

    let derivation = curvature_derivation_residual(&field, &conn)?;
    report.verdict(
        "curvature_derivation",
        Verdict::from_residual(derivation.max_residual, eps),
    );

    if let Some(metric_path) = metric_path {
        let g = load_metric_input(&mut report, metric_path)?;
        let compat = metric_compat_residual(&g, &conn)?;
        report.verdict(
            "metric_compatibility",
            Verdict::from_residual(compat.max_residual, eps),
        );
    }
    h2_note(&mut report, field.chart());
    Ok(finish(report, started))
}

/// `transport run`: parallel transport along a curve plus the isomorphism
/// residual between the endpoint fibre algebras. A failing Leibniz residual
/// is surfaced as a warning, never a refusal.
pub fn cmd_transport(
    field_path: &Path,
    connection_path: &Path,
    curve_path: &Path,
    dt: f64,
    eps: f64,
) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("transport run");
    let field_doc: FieldDoc = parse_input(&mut report, field_path)?;
    let field = field_doc
        .into_structure()
        .map_err(|source| IoError::Invalid {
            path: field_path.display().to_string(),
            source,
        })?;
    let conn_doc: FieldDoc = parse_input(&mut report, connection_path)?;
    let conn = conn_doc
        .into_connection()
        .map_err(|source| IoError::Invalid {
            path: connection_path.display().to_string(),
            source,
        })?;
    let curve_doc: CurveDoc = parse_input(&mut report, curve_path)?;
    let curve = curve_doc.into_curve().map_err(|source| IoError::Invalid {
        path: curve_path.display().to_string(),
        source,
    })?;

    let diff = differential_residual(&field, &conn, Tolerance::new(eps))?;
    if !diff.pass() {
        report.detail(
            "warning",
            json!(format!(
                "connection is not differential for this field (residual {:.6e}); \
                 transport need not be an algebra isomorphism",
                diff.max_residual
            )),
        );
    }
    report.detail("differential_residual", json!(diff.max_residual));

    let result = transport_iso_residual(&field, &conn, &curve, dt)?;
    report.verdict(
        "transport_isomorphism",
        Verdict::from_residual(result.iso_residual, eps),
    );
    let n = result.map.rows;
    report.detail(
        "map",
        json!((0..n)
            .map(|r| (0..n).map(|c| result.map.get(r, c)).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    report.detail("map_determinant", json!(result.map.determinant()));
    report.detail("step_size", json!(result.step_size));
    report.detail(
        "steps",
        json!(((curve.params()[curve.sample_count() - 1] - curve.params()[0]) / result.step_size).round()),
    );
    Ok(finish(report, started))
}

/// `report diff`: compares two run reports, ignoring timing.
pub fn cmd_report_diff(left: &Path, right: &Path) -> CliResult {
    let started = Instant::now();
    let mut report = RunReport::new("report diff");
    let a: RunReport = load_doc(left)?;
    let b: RunReport = load_doc(right)?;
    // digests of the raw files still land in the inputs list
    let _ = read_input(&mut report, left)?;
    let _ = read_input(&mut report, right)?;
    report.verdict(
        "identical_modulo_timing",
        Verdict::from_bool(a.same_modulo_timing(&b), 0.0),
    );
    Ok(finish(report, started))
}
