//! New algebras from old: opposites, direct sums, triple tensor products,
//! and the one-parameter scaling isomorphism between proportional algebras.
//!
//! Run with: cargo run -p ternalg --example sums_and_tensors

use ternalg::{
    bilinear_algebra, cyclic_heap_table, direct_sum, heap_algebra, scaling_iso_search,
    tensor_product, BilinearForm, FibreVector, TernaryAlgebra, Tolerance,
};

fn main() {
    let tol = Tolerance::default();
    let heap = heap_algebra(&cyclic_heap_table(2)).unwrap();
    let dot = bilinear_algebra(&BilinearForm::identity(2));

    let sum = direct_sum(&heap, &dot);
    println!(
        "heap ⊕ dot: dim {}, para-associative = {}",
        sum.dim(),
        sum.is_para_associative(tol)
    );

    let cube = tensor_product(&heap, &heap, &heap);
    println!(
        "heap ⊗ heap ⊗ heap: dim {}, para-associative = {}",
        cube.dim(),
        cube.is_para_associative(tol)
    );
    let first = FibreVector::basis(8, 0);
    println!(
        "e1 ⊗ e1 ⊗ e1 is a biunit of the cube: {}",
        cube.is_biunit(&first, tol).unwrap()
    );

    // opposites reverse the outer slots; commutative algebras are fixed
    let heap_op = heap.opposite();
    println!(
        "heap equals its opposite: {}",
        heap_op.structure() == heap.structure()
    );

    // scaled copies of one algebra are isomorphic through λ·id with λ = √s
    println!();
    for s in [0.04, 0.25, 0.81] {
        let scaled = bilinear_algebra(&BilinearForm::diagonal(&[s, s]));
        let lambda = scaling_iso_search(&scaled, &dot).unwrap().unwrap();
        println!("C_s = {s}·C: lambda = {lambda} (sqrt(s) = {})", s.sqrt());
    }
    // the zero algebra is not isomorphic to anything nonzero
    let zero = TernaryAlgebra::zero(2);
    println!(
        "zero algebra vs dot algebra: {:?}",
        scaling_iso_search(&zero, &dot).unwrap()
    );
    // unrelated tensors are flagged as such
    println!(
        "heap vs dot: {:?}",
        scaling_iso_search(&heap, &dot).map_err(|e| e.to_string())
    );
}
