//! Ternary para-associative algebras and the bundles they live on.
//!
//! The crate has three layers:
//!
//! - [`algebra`] and [`constructors`]: finite-dimensional ternary algebras in
//!   structure-constant form, with para-associativity and biunit checks, star
//!   reductions to binary algebras, direct sums, tensor products and scaling
//!   isomorphisms.
//! - [`fields`] and [`connections`]: the same structures sampled over a
//!   rectangular chart, with metric-induced products, the ternary Leibniz
//!   residual that characterises differential connections, Levi-Civita
//!   synthesis and curvature.
//! - [`transport`]: parallel transport along chart curves, and the check that
//!   transport by a differential connection is an isomorphism of the fibre
//!   algebras. This is the numerical face of the local-triviality story: the
//!   fibres of a sampled bundle are all isomorphic exactly when a connection
//!   with vanishing Leibniz residual exists, and transport realises the
//!   isomorphisms.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! `ternalg` binary wraps the same operations for JSON artifacts on disk.

pub mod algebra;
pub mod cli;
pub mod connections;
pub mod constructors;
pub mod error;
pub mod fields;
pub mod grid;
pub mod io;
mod linalg;
pub mod report;
pub mod transport;

pub use algebra::{
    hom_residual, FibreVector, LinearMap, StructureTensor, TernaryAlgebra, Tolerance,
};
pub use connections::{
    curvature, curvature_derivation_residual, derivation_residual_field, differential_residual,
    levi_civita, metric_compat_residual, ConnectionField, CurvatureField,
};
pub use constructors::{
    bilinear_algebra, binary_assoc_residual, binary_hom_residual, canonical_biunit_iso,
    cyclic_heap_table, direct_sum, heap_algebra, scaling_iso_search, star_reduce, tensor_product,
    BilinearForm, BinaryAlgebra, HeapTable,
};
pub use error::{Result, TernError};
pub use fields::{
    cotangent_algebroid, evaluate_section_product, fibre_algebra, fibre_algebra_at,
    field_para_check, inverse_metric, metric_algebroid, scaled_line_algebroid, FieldCheckReport,
    MetricField, SectionField, StructureField,
};
pub use grid::{partial_derivative, Chart, GridField};
pub use transport::{
    transport_iso_residual, transport_map, transport_vector, Curve, TransportResult,
};

/// Configures the global worker pool from the `TERNALG_THREADS` environment
/// variable: unset or `0` keeps the automatic thread count. Safe to call more
/// than once; only the first call takes effect.
pub fn init_thread_pool_from_env() {
    if let Ok(value) = std::env::var("TERNALG_THREADS") {
        if let Ok(threads) = value.trim().parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}
