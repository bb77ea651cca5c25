//! From ternary to binary: star reductions u ⋆_e v = [u, e, v] of the C2
//! heap at its two biunits, and the canonical isomorphism between them.
//!
//! Run with: cargo run -p ternalg --example star_reduction

use ternalg::{
    binary_assoc_residual, binary_hom_residual, canonical_biunit_iso, cyclic_heap_table,
    heap_algebra, star_reduce, FibreVector,
};

fn main() {
    let algebra = heap_algebra(&cyclic_heap_table(2)).unwrap();
    let e1 = FibreVector::basis(2, 0);
    let e2 = FibreVector::basis(2, 1);

    let m1 = star_reduce(&algebra, &e1).unwrap();
    let m2 = star_reduce(&algebra, &e2).unwrap();

    println!("u *_e1 v = (u1 v1 + u2 v2) e1 + (u1 v2 + u2 v1) e2");
    print_table(&m1);
    println!("associativity residual: {:e}", binary_assoc_residual(&m1));
    println!(
        "unit: {:?}",
        m1.unit.as_ref().map(|u| u.as_slice().to_vec())
    );

    println!();
    println!("u *_e2 v = (u1 v2 + u2 v1) e1 + (u1 v1 + u2 v2) e2");
    print_table(&m2);
    println!("associativity residual: {:e}", binary_assoc_residual(&m2));

    // the two reductions are canonically isomorphic via psi(u) = [u, e1, e2]
    let psi = canonical_biunit_iso(&algebra, &e1, &e2).unwrap();
    println!();
    println!(
        "canonical isomorphism psi = [[{}, {}], [{}, {}]]",
        psi.get(0, 0),
        psi.get(0, 1),
        psi.get(1, 0),
        psi.get(1, 1)
    );
    let residual = binary_hom_residual(&m1, &m2, &psi).unwrap();
    println!("psi(u *_e1 v) vs psi(u) *_e2 psi(v) residual: {residual:e}");
    assert_eq!(residual, 0.0);

    // reduction at a non-biunit still gives an associative product, just an
    // unlabelled one
    let skew = FibreVector::new(vec![0.7, -0.4]);
    let m = star_reduce(&algebra, &skew).unwrap();
    println!();
    println!(
        "reduction at a generic element: associativity residual {:e}, unit {:?}",
        binary_assoc_residual(&m),
        m.unit
    );
}

fn print_table(m: &ternalg::BinaryAlgebra) {
    for alpha in 0..m.dim() {
        for beta in 0..m.dim() {
            let coeffs: Vec<f64> = (0..m.dim()).map(|l| m.get(l, alpha, beta)).collect();
            println!("  e{} * e{} -> {:?}", alpha + 1, beta + 1, coeffs);
        }
    }
}
