//! Products from bilinear forms, [u,v,w] = B(u,v)·w. Symmetric forms give
//! para-associative algebras; antisymmetric ones break the middle identity;
//! degenerate ones have annihilators; normalised vectors are left biunits
//! without being right biunits.
//!
//! Run with: cargo run -p ternalg --example bilinear_forms

use ternalg::{bilinear_algebra, BilinearForm, FibreVector, Tolerance};

fn main() {
    let tol = Tolerance::default();

    let euclid = bilinear_algebra(&BilinearForm::identity(2));
    let minkowski = bilinear_algebra(&BilinearForm::diagonal(&[1.0, -1.0]));
    let omega = bilinear_algebra(&BilinearForm::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]));

    println!(
        "dot form:        para-associative = {}",
        euclid.is_para_associative(tol)
    );
    println!(
        "Minkowski form:  para-associative = {}",
        minkowski.is_para_associative(tol)
    );
    println!(
        "antisymmetric:   para-associative = {} (residual {})",
        omega.is_para_associative(tol),
        omega.para_assoc_max_residual()
    );

    // the violating 5-tuple, spelled out
    let e1 = FibreVector::basis(2, 0);
    let e2 = FibreVector::basis(2, 1);
    let (r1, r2) = omega.para_residual(&e1, &e2, &e1, &e2, &e1).unwrap();
    println!(
        "middle-term violation at (e1,e2,e1,e2,e1): R1 = {:?}, R2 = {:?}",
        r1.as_slice(),
        r2.as_slice()
    );

    // kernel vectors of a degenerate form annihilate from the left and centre
    let degenerate = bilinear_algebra(&BilinearForm::diagonal(&[1.0, 0.0]));
    let killed = degenerate.product(&e2, &e1, &e1).unwrap();
    println!();
    println!(
        "degenerate diag(1,0): [e2, e1, e1] = {:?}",
        killed.as_slice()
    );
    assert_eq!(killed.max_abs(), 0.0);

    // left biunit without right: [e1,e1,x] = x but [x,e1,e1] projects onto e1
    println!();
    println!(
        "dot form at e1: left-biunit residual {}, right-biunit residual {}",
        euclid.left_biunit_residual(&e1).unwrap(),
        euclid.right_biunit_residual(&e1).unwrap()
    );

    // the ternary commutator of any metric-type product vanishes identically
    let u = FibreVector::new(vec![0.4, -1.1]);
    let v = FibreVector::new(vec![2.0, 0.3]);
    let w = FibreVector::new(vec![-0.7, 0.9]);
    let k = minkowski.commutator(&u, &v, &w).unwrap();
    println!();
    println!("ternary commutator under diag(1,-1): {:?}", k.as_slice());
    assert!(k.max_abs() <= 1e-12);
}
