//! The JSON artifact pipeline used by the `ternalg` binary, driven through
//! the library API: write an algebra, a metric field, a connection and a
//! curve to disk, then load them back and run the same checks the CLI runs.
//!
//! Run with: cargo run -p ternalg --example artifact_pipeline

use std::f64::consts::PI;

use ternalg::cli::{cmd_algebra_check, cmd_connection_check, cmd_transport};
use ternalg::io::{save_doc, AlgebraDoc, CurveDoc, FieldDoc};
use ternalg::{
    cyclic_heap_table, heap_algebra, levi_civita, metric_algebroid, Chart, Curve, MetricField,
};

fn main() {
    let dir = std::env::temp_dir().join("ternalg-pipeline-example");
    std::fs::create_dir_all(&dir).unwrap();

    // an algebra artifact
    let algebra_path = dir.join("c2.json");
    let algebra = heap_algebra(&cyclic_heap_table(2)).unwrap();
    save_doc(&algebra_path, &AlgebraDoc::from_algebra(&algebra)).unwrap();
    let report = cmd_algebra_check(&algebra_path, 1e-9).unwrap();
    println!("algebra check on {}:", algebra_path.display());
    print!("{}", report.to_text());

    // field, connection and curve artifacts for a sphere band
    let theta0 = PI / 3.0;
    let h = 1e-2;
    let chart = Chart::new(
        vec![theta0 - 10.0 * h, -0.1],
        vec![h, 0.05],
        vec![21, ((2.0 * PI + 0.2) / 0.05) as usize + 1],
    )
    .unwrap();
    let metric = MetricField::from_fn(chart.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap();

    let field_path = dir.join("sphere_field.json");
    save_doc(
        &field_path,
        &FieldDoc::from_structure(&metric_algebroid(&metric)),
    )
    .unwrap();
    let conn_path = dir.join("sphere_conn.json");
    save_doc(
        &conn_path,
        &FieldDoc::from_connection(&levi_civita(&metric).unwrap()),
    )
    .unwrap();
    let curve_path = dir.join("latitude.json");
    let curve = Curve::sampled(0.0, 2.0 * PI, 17, true, |t| vec![theta0, t]).unwrap();
    save_doc(&curve_path, &CurveDoc::from_curve(&curve)).unwrap();

    println!();
    let report = cmd_connection_check(&field_path, &conn_path, None, 1e-2).unwrap();
    println!("connection check:");
    print!("{}", report.to_text());

    println!();
    let report = cmd_transport(&field_path, &conn_path, &curve_path, 1e-3, 1e-5).unwrap();
    println!("transport run:");
    print!("{}", report.to_text());
    assert!(report.all_pass());
}
