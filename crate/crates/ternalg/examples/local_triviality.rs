//! Local triviality in two acts. The t·B bundle over (0,1) is a trivial
//! vector bundle whose fibre algebras are NOT all isomorphic: the zero fibre
//! at t = 0 breaks the family, and the zero connection fails the Leibniz
//! residual, so transport does not relate the fibres. The sphere bundle
//! carries a differential connection, and there transport really is a fibre
//! isomorphism.
//!
//! Run with: cargo run -p ternalg --example local_triviality

use std::f64::consts::PI;

use ternalg::{
    differential_residual, fibre_algebra, levi_civita, metric_algebroid, scaled_line_algebroid,
    scaling_iso_search, transport_iso_residual, BilinearForm, Chart, ConnectionField, Curve,
    MetricField, Tolerance,
};

fn main() {
    let tol = Tolerance::default();

    // ---- act one: the scaled family C(t) = t·B --------------------------
    let chart = Chart::line(0.0, 1.0 / 64.0, 65);
    let family = scaled_line_algebroid(&BilinearForm::identity(2), &chart).unwrap();

    // interior fibres are pairwise isomorphic by a scaling...
    let quarter = fibre_algebra(&family, &[16]).unwrap();
    let unit = fibre_algebra(&family, &[64]).unwrap();
    let lambda = scaling_iso_search(&quarter, &unit).unwrap().unwrap();
    println!("t = 1/4 fibre vs t = 1 fibre: lambda = {lambda} (sqrt(1/4) = 0.5)");

    // ...but the t = 0 fibre is the zero algebra, and no scaling reaches it
    let zero_fibre = fibre_algebra(&family, &[0]).unwrap();
    println!(
        "t = 0 fibre vs t = 1 fibre: {:?}",
        scaling_iso_search(&zero_fibre, &unit).unwrap()
    );

    // the zero connection is not differential here: ∂_t C = B survives
    let zero_conn = ConnectionField::zeros(chart, 2);
    let leibniz = differential_residual(&family, &zero_conn, tol).unwrap();
    println!(
        "Leibniz residual of the zero connection: {}",
        leibniz.max_residual
    );

    // and transport (the identity) fails to be an algebra isomorphism by
    // exactly the drift of the structure constants
    let control = Curve::sampled(0.25, 1.0, 7, false, |t| vec![t]).unwrap();
    let obstruction = transport_iso_residual(&family, &zero_conn, &control, 1e-2).unwrap();
    println!(
        "identity transport from t = 1/4 to t = 1: iso residual {} (= 0.75·max|B|)",
        obstruction.iso_residual
    );

    // ---- act two: the sphere bundle with its metric connection ----------
    let theta0 = PI / 3.0;
    let h = 4e-3;
    let band = Chart::new(
        vec![theta0 - 10.0 * h, -0.1],
        vec![h, 0.05],
        vec![21, ((2.0 * PI + 0.2) / 0.05) as usize + 1],
    )
    .unwrap();
    let sphere = MetricField::from_fn(band.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap();
    let field = metric_algebroid(&sphere);
    let lc = levi_civita(&sphere).unwrap();

    let leibniz = differential_residual(&field, &lc, tol).unwrap();
    println!();
    println!(
        "sphere + Levi-Civita: Leibniz residual {:e} (a differential connection)",
        leibniz.max_residual
    );

    let loop_curve = Curve::sampled(0.0, 2.0 * PI, 17, true, |t| vec![theta0, t]).unwrap();
    let result = transport_iso_residual(&field, &lc, &loop_curve, 1e-3).unwrap();
    println!(
        "latitude-loop transport: iso residual {:e} — the fibres are one algebra",
        result.iso_residual
    );
    assert!(result.iso_residual <= 1e-5);

    // a curve between two different latitudes: different-looking fibre
    // tensors, still isomorphic through transport
    let arc = Curve::sampled(0.0, 1.0, 33, false, |t| {
        vec![theta0 - 0.03 + 0.06 * t, 4.0 * t]
    })
    .unwrap();
    let across = transport_iso_residual(&field, &lc, &arc, 1e-3).unwrap();
    println!(
        "arc across latitudes: iso residual {:e}",
        across.iso_residual
    );
}
