//! The heap of the cyclic group C2 on R²: multiplication table, algebraic
//! predicates, and a biunit search over a candidate set.
//!
//! Run with: cargo run -p ternalg --example heap_c2

use ternalg::{cyclic_heap_table, heap_algebra, FibreVector, Tolerance};

fn main() {
    let table = cyclic_heap_table(2);
    let algebra = heap_algebra(&table).unwrap();
    let tol = Tolerance::default();

    println!("C2 heap on R^2, basis {{e1, e2}}");
    println!("table (1-based generator indices):");
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                println!("  [e{a}, e{b}, e{c}] = e{}", table.get(a, b, c));
            }
        }
    }

    println!();
    println!("para-associative: {}", algebra.is_para_associative(tol));
    println!(
        "A-associative:    {}",
        algebra.a_assoc_max_residual() <= tol.eps
    );
    println!("commutative:      {}", algebra.is_commutative(tol));

    // product of general vectors, trilinear in every slot
    let u = FibreVector::new(vec![1.0, 0.0]);
    let v = FibreVector::new(vec![0.0, 1.0]);
    let w = FibreVector::new(vec![1.0, 1.0]);
    let p = algebra.product(&u, &v, &w).unwrap();
    println!();
    println!("[e1, e2, e1 + e2] = {:?}", p.as_slice());

    // biunit sweep: products are quadratic in e, so -e passes whenever e does
    let candidates = vec![
        FibreVector::new(vec![1.0, 0.0]),
        FibreVector::new(vec![-1.0, 0.0]),
        FibreVector::new(vec![0.0, 1.0]),
        FibreVector::new(vec![0.0, -1.0]),
        FibreVector::new(vec![1.0, 1.0]),
    ];
    let biunits = algebra.biunit_search(&candidates, tol).unwrap();
    println!();
    println!("biunits among {{e1, -e1, e2, -e2, e1+e2}}:");
    for b in &biunits {
        println!("  {:?}", b.as_slice());
    }
    assert_eq!(biunits.len(), 4);
}
