//! Differential connections: the ternary Leibniz residual
//! ∂C + CΓ − ΓC − ΓC − ΓC, which vanishes exactly when parallel transport
//! will respect the fibre products. Constant bundles pass with the trivial
//! connection, metric bundles pass with their Levi-Civita connection, and
//! the t·B family has no differential connection hiding in Γ = 0.
//!
//! Run with: cargo run -p ternalg --example differential_connections

use ternalg::{
    differential_residual, levi_civita, metric_algebroid, metric_compat_residual,
    scaled_line_algebroid, BilinearForm, Chart, ConnectionField, MetricField, Tolerance,
};

fn main() {
    let tol = Tolerance::default();

    // constant bundle + trivial connection: residual exactly zero
    let flat_chart = Chart::new(vec![0.0, 0.0], vec![0.25, 0.25], vec![9, 9]).unwrap();
    let flat = MetricField::from_fn(flat_chart.clone(), |_| vec![1.0, 0.0, 0.0, 1.0]).unwrap();
    let trivial = ConnectionField::zeros(flat_chart, 2);
    let report = differential_residual(&metric_algebroid(&flat), &trivial, tol).unwrap();
    println!(
        "constant bundle, zero connection: residual {:e}",
        report.max_residual
    );

    // sphere metric + discrete Levi-Civita: the synthesis shares its stencil
    // with the residual, so the pairing is compatible to rounding
    let h = 1e-2f64;
    let n_theta = (1.94 / h).round() as usize + 1;
    let chart = Chart::new(vec![0.6, 0.0], vec![h, h], vec![n_theta, 7]).unwrap();
    let sphere = MetricField::from_fn(chart.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap();
    let lc = levi_civita(&sphere).unwrap();
    let field = metric_algebroid(&sphere);
    let diff = differential_residual(&field, &lc, tol).unwrap();
    let compat = metric_compat_residual(&sphere, &lc).unwrap();
    println!();
    println!("sphere + discrete Levi-Civita (h = {h}):");
    println!("  differential residual  {:e}", diff.max_residual);
    println!("  metric compatibility   {:e}", compat.max_residual);

    // against the exactly sampled Christoffels the residual is honest
    // truncation error and decays at second order
    println!();
    println!("sphere + exact Christoffels, truncation decay:");
    let mut previous = None;
    for h in [4e-2f64, 2e-2, 1e-2] {
        let n_theta = (1.92 / h).round() as usize + 1;
        let chart = Chart::new(vec![0.6, 0.0], vec![h, h], vec![n_theta, 5]).unwrap();
        let g = MetricField::from_fn(chart.clone(), |x| {
            let s = x[0].sin();
            vec![1.0, 0.0, 0.0, s * s]
        })
        .unwrap();
        let exact = ConnectionField::from_fn(chart, 2, |x| {
            let (s, c) = x[0].sin_cos();
            // layout [a][α][β] for Γ^β_{aα}
            let at = |a: usize, alpha: usize, beta: usize| (a * 2 + alpha) * 2 + beta;
            let mut v = vec![0.0; 8];
            v[at(0, 1, 1)] = c / s;
            v[at(1, 0, 1)] = c / s;
            v[at(1, 1, 0)] = -s * c;
            v
        });
        let r = differential_residual(&metric_algebroid(&g), &exact, tol)
            .unwrap()
            .max_residual;
        match previous {
            None => println!("  h = {h}: {r:.3e}"),
            Some(p) => println!("  h = {h}: {r:.3e}  (ratio {:.2})", p / r),
        }
        previous = Some(r);
    }

    // the scaled line has no chance with the zero connection: ∂_t C = B
    println!();
    let line = Chart::line(0.0, 0.02, 51);
    let tb = scaled_line_algebroid(&BilinearForm::identity(2), &line).unwrap();
    let zero = ConnectionField::zeros(line, 2);
    let obstruction = differential_residual(&tb, &zero, tol).unwrap();
    println!(
        "t·B bundle, zero connection: residual {} at node {:?} (the form itself survives)",
        obstruction.max_residual, obstruction.argmax_node
    );
}
