//! Parallel transport once around a latitude of the round sphere: the
//! transport map rotates the fibre by 2π·cosθ0 in the orthonormal frame,
//! preserves the metric, and is an isomorphism of the fibre algebras.
//!
//! Run with: cargo run -p ternalg --example sphere_holonomy

use std::f64::consts::PI;

use ternalg::{
    curvature, levi_civita, metric_algebroid, transport_iso_residual, transport_map, Chart, Curve,
    LinearMap, MetricField,
};

fn main() {
    let theta0 = PI / 3.0;
    let h = 4e-3;
    let margin = 10;

    // narrow band with θ0 exactly on a node; φ wide enough for a full
    // unwrapped turn
    let chart = Chart::new(
        vec![theta0 - margin as f64 * h, -0.1],
        vec![h, 0.05],
        vec![2 * margin + 1, ((2.0 * PI + 0.2) / 0.05) as usize + 1],
    )
    .unwrap();
    let sphere = MetricField::from_fn(chart.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap();
    let conn = levi_civita(&sphere).unwrap();
    let field = metric_algebroid(&sphere);

    let loop_curve = Curve::sampled(0.0, 2.0 * PI, 17, true, |t| vec![theta0, t]).unwrap();
    let map = transport_map(&conn, &loop_curve, 1e-3).unwrap();

    println!("latitude θ0 = π/3, one full turn, dt = 1e-3");
    println!(
        "transport map (coordinate frame): [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        map.get(0, 0),
        map.get(0, 1),
        map.get(1, 0),
        map.get(1, 1)
    );

    // holonomy angle in the orthonormal frame (ê_θ, ê_φ): 2π cos θ0 = π
    let s = theta0.sin();
    let frame = LinearMap::from_rows(&[
        vec![map.get(0, 0), map.get(0, 1) / s],
        vec![map.get(1, 0) * s, map.get(1, 1)],
    ]);
    let angle = frame.get(1, 0).atan2(frame.get(0, 0));
    println!(
        "holonomy angle {:.6} rad, expected 2π·cos(π/3) = π = {:.6}",
        angle.abs(),
        PI
    );

    // the transport preserves g, hence the fibre product it induces
    let g0 = LinearMap::from_rows(&[vec![1.0, 0.0], vec![0.0, s * s]]);
    let pulled = map.transpose().matmul(&g0).unwrap().matmul(&map).unwrap();
    let drift = pulled
        .entries
        .iter()
        .zip(&g0.entries)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("|ΦᵀgΦ − g| = {drift:.3e}");

    let result = transport_iso_residual(&field, &conn, &loop_curve, 1e-3).unwrap();
    println!(
        "fibre-algebra isomorphism residual: {:.3e}",
        result.iso_residual
    );
    assert!(result.iso_residual <= 1e-5);

    // holonomy is what curvature integrates: the enclosed cap has area
    // 2π(1 − cosθ0), and R^θ_{θφφ} = sin²θ is its density in these
    // coordinates
    let r = curvature(&conn).unwrap();
    let mid = chart.flat_index(&[margin, 3]).unwrap();
    println!(
        "curvature sample R^θ_{{θφφ}}(θ0) = {:.6}, sin²θ0 = {:.6}",
        r.at(mid, 0, 1, 1, 0),
        s * s
    );

    // composition and reversal behave like a flow
    let half1 = Curve::sampled(0.0, PI, 9, false, |t| vec![theta0, t]).unwrap();
    let half2 = Curve::sampled(PI, 2.0 * PI, 9, false, |t| vec![theta0, t]).unwrap();
    let m1 = transport_map(&conn, &half1, 1e-3).unwrap();
    let m2 = transport_map(&conn, &half2, 1e-3).unwrap();
    let composed = m2.matmul(&m1).unwrap();
    let comp_err = composed
        .entries
        .iter()
        .zip(&map.entries)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("Φ(second half)·Φ(first half) vs Φ(loop): {comp_err:.3e}");

    let back = transport_map(&conn, &loop_curve.reversed(), 1e-3).unwrap();
    let round = back.matmul(&map).unwrap();
    let id_err = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .fold(0.0f64, |m, (i, j)| {
            let target = if i == j { 1.0 } else { 0.0 };
            m.max((round.get(i, j) - target).abs())
        });
    println!("Φ(reverse)·Φ(loop) vs identity: {id_err:.3e}");
}
