//! Sampled bundles from metrics: [X,Y,Z] = g(X,Y)·Z on the tangent side,
//! g⁻¹ on the cotangent side, degenerate metrics included, and section
//! products evaluated pointwise over the chart.
//!
//! Run with: cargo run -p ternalg --example metric_algebroids

use ternalg::{
    cotangent_algebroid, evaluate_section_product, fibre_algebra, field_para_check,
    metric_algebroid, Chart, FibreVector, MetricField, SectionField, Tolerance,
};

fn main() {
    let tol = Tolerance::default();

    // a band on the round sphere, theta away from the poles
    let chart = Chart::new(vec![0.7, 0.0], vec![0.05, 0.05], vec![25, 9]).unwrap();
    let sphere = MetricField::from_fn(chart.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap();

    let field = metric_algebroid(&sphere);
    let report = field_para_check(&field, tol);
    println!(
        "sphere band: {} nodes, pointwise para-associativity max residual {:e}",
        report.nodes, report.max_residual
    );

    // each fibre is the bilinear-form algebra of g at that point
    let fibre = fibre_algebra(&field, &[12, 4]).unwrap();
    println!(
        "fibre at node [12,4]: C^1_{{2,2,1}} = {} (sin²θ there)",
        fibre.structure().get(0, 1, 1, 0)
    );

    // section products are pointwise and C∞-linear in every slot
    let u = SectionField::from_fn(chart.clone(), 2, |x| vec![x[0].cos(), 1.0]);
    let v = SectionField::constant(chart.clone(), &FibreVector::new(vec![0.0, 1.0]));
    let w = SectionField::constant(chart.clone(), &FibreVector::new(vec![1.0, 2.0]));
    let product = evaluate_section_product(&field, &u, &v, &w).unwrap();
    println!(
        "section product at node [12,4]: {:?}",
        product.grid.node(chart.flat_index(&[12, 4]).unwrap())
    );

    // cotangent version through the guarded inverse metric
    let cot = cotangent_algebroid(&sphere).unwrap();
    let cot_fibre = fibre_algebra(&cot, &[12, 4]).unwrap();
    println!(
        "cotangent fibre: C^1_{{2,2,1}} = {} (1/sin²θ there)",
        cot_fibre.structure().get(0, 1, 1, 0)
    );

    // a Carrollian-style degenerate metric still gives a para-associative
    // bundle, with the degenerate direction annihilating
    let flat = Chart::new(vec![0.0, 0.0], vec![0.25, 0.25], vec![5, 5]).unwrap();
    let carroll = MetricField::from_fn(flat.clone(), |_| vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let cfield = metric_algebroid(&carroll);
    let creport = field_para_check(&cfield, tol);
    println!();
    println!(
        "Carrollian diag(0,1): pointwise max residual {:e}",
        creport.max_residual
    );
    let cf = fibre_algebra(&cfield, &[2, 2]).unwrap();
    let e1 = FibreVector::basis(2, 0);
    let any = FibreVector::new(vec![0.3, -0.8]);
    println!(
        "[e1, v, w] = {:?} and [v, e1, w] = {:?} (e1 annihilates)",
        cf.product(&e1, &any, &any).unwrap().as_slice(),
        cf.product(&any, &e1, &any).unwrap().as_slice()
    );
    // ...but the cotangent construction rightly refuses a degenerate metric
    println!(
        "cotangent of the degenerate metric: {:?}",
        cotangent_algebroid(&carroll)
            .map(|_| ())
            .map_err(|e| e.to_string())
    );
}
