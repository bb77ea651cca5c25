//! Constructions of ternary algebras and reductions between ternary and
//! binary products: bilinear forms, cyclic heaps, star reductions, canonical
//! biunit isomorphisms, direct sums, triple tensor products and the
//! one-parameter scaling isomorphism search.

use crate::algebra::{FibreVector, LinearMap, StructureTensor, TernaryAlgebra, Tolerance};
use crate::error::{Result, TernError};

/// Real bilinear form on R^n. Symmetry is a property to test, not an
/// invariant: antisymmetric forms are deliberately constructible.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    dim: usize,
    entries: Vec<f64>,
}

impl BilinearForm {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "bilinear form must be square");
            entries.extend_from_slice(row);
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![0.0; dim * dim];
        for (i, d) in diag.iter().enumerate() {
            entries[i * dim + i] = *d;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.entries[alpha * self.dim + beta]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|r| self.entries[r * self.dim..(r + 1) * self.dim].to_vec())
            .collect()
    }
}

/// Ternary multiplication table on `k` generators: `table[a][b][c]` is the
/// 1-based index of the product of the a-th, b-th and c-th generators.
#[derive(Debug, Clone, PartialEq)]
pub struct HeapTable {
    order: usize,
    table: Vec<usize>,
}

impl HeapTable {
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != order * order * order {
            return Err(TernError::ShapeMismatch(format!(
                "heap table for order {order} needs {} entries, got {}",
                order * order * order,
                table.len()
            )));
        }
        for &v in &table {
            if v < 1 || v > order {
                return Err(TernError::HeapEntryOutOfRange { value: v, order });
            }
        }
        Ok(Self { order, table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// 1-based lookup.
    pub fn get(&self, a: usize, b: usize, c: usize) -> usize {
        self.table[((a - 1) * self.order + (b - 1)) * self.order + (c - 1)]
    }

    pub fn entries(&self) -> &[usize] {
        &self.table
    }
}

/// Binary algebra in structure-constant form: `M^λ_{αβ}` is the λ-coefficient
/// of the product of the α-th and β-th basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryAlgebra {
    dim: usize,
    m: Vec<f64>,
    pub unit: Option<FibreVector>,
}

impl BinaryAlgebra {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            m: vec![0.0; dim * dim * dim],
            unit: None,
        }
    }

    pub fn from_flat(dim: usize, m: Vec<f64>, unit: Option<FibreVector>) -> Result<Self> {
        if m.len() != dim * dim * dim {
            return Err(TernError::ShapeMismatch(format!(
                "binary algebra for dim {dim} needs {} entries, got {}",
                dim * dim * dim,
                m.len()
            )));
        }
        Ok(Self { dim, m, unit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, lambda: usize, alpha: usize, beta: usize) -> f64 {
        self.m[(lambda * self.dim + alpha) * self.dim + beta]
    }

    #[inline]
    fn set(&mut self, lambda: usize, alpha: usize, beta: usize, value: f64) {
        self.m[(lambda * self.dim + alpha) * self.dim + beta] = value;
    }

    pub fn entries(&self) -> &[f64] {
        &self.m
    }

    pub fn multiply(&self, u: &FibreVector, v: &FibreVector) -> Result<FibreVector> {
        if u.dim() != self.dim || v.dim() != self.dim {
            return Err(TernError::DimensionMismatch {
                expected: self.dim,
                got: u.dim().max(v.dim()),
                context: "binary product",
            });
        }
        let n = self.dim;
        let mut out = vec![0.0; n];
        for alpha in 0..n {
            for beta in 0..n {
                let coeff = u.components[alpha] * v.components[beta];
                if coeff == 0.0 {
                    continue;
                }
                for (lambda, o) in out.iter_mut().enumerate() {
                    *o += coeff * self.get(lambda, alpha, beta);
                }
            }
        }
        Ok(FibreVector::new(out))
    }
}

/// `[u,v,w] := B(u,v)w`, i.e. `C^λ_{αβγ} = B_{αβ} δ^λ_γ`.
pub fn bilinear_algebra(b: &BilinearForm) -> TernaryAlgebra {
    let n = b.dim();
    let mut c = StructureTensor::zeros(n);
    for alpha in 0..n {
        for beta in 0..n {
            let v = b.get(alpha, beta);
            if v == 0.0 {
                continue;
            }
            for gamma in 0..n {
                c.set(gamma, alpha, beta, gamma, v);
            }
        }
    }
    TernaryAlgebra::new(c, None)
}

/// Structure tensor of a multiplication table: `C^λ_{αβγ} = 1` exactly when
/// the table sends `(α,β,γ)` to `λ`.
pub fn heap_algebra(h: &HeapTable) -> Result<TernaryAlgebra> {
    let k = h.order();
    let mut c = StructureTensor::zeros(k);
    for a in 1..=k {
        for b in 1..=k {
            for d in 1..=k {
                let lambda = h.get(a, b, d);
                if lambda < 1 || lambda > k {
                    return Err(TernError::HeapEntryOutOfRange {
                        value: lambda,
                        order: k,
                    });
                }
                c.set(lambda - 1, a - 1, b - 1, d - 1, 1.0);
            }
        }
    }
    Ok(TernaryAlgebra::new(c, Some(format!("heap-{k}"))))
}

/// Heap of the cyclic group C_k: `table[a][b][c] = a - b + c (mod k)` in
/// 1-based encoding. Every generator is a biunit of the induced algebra.
pub fn cyclic_heap_table(k: usize) -> HeapTable {
    assert!(k >= 1);
    let mut table = vec![0usize; k * k * k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let v = (a + k - b + c) % k;
                table[(a * k + b) * k + c] = v + 1;
            }
        }
    }
    HeapTable::new(k, table).expect("cyclic table is in range by construction")
}

/// Binary reduction `u ⋆_e v := [u,e,v]`, so `M^λ_{αβ} = Σ_γ C^λ_{αγβ} e^γ`.
/// The unit is recorded when `e` is a biunit of `a`.
pub fn star_reduce(a: &TernaryAlgebra, e: &FibreVector) -> Result<BinaryAlgebra> {
    if e.dim() != a.dim() {
        return Err(TernError::DimensionMismatch {
            expected: a.dim(),
            got: e.dim(),
            context: "star reduction",
        });
    }
    let n = a.dim();
    let mut out = BinaryAlgebra::zeros(n);
    for lambda in 0..n {
        for alpha in 0..n {
            for beta in 0..n {
                let mut entry = 0.0;
                for gamma in 0..n {
                    entry += a.structure().get(lambda, alpha, gamma, beta) * e.components[gamma];
                }
                out.set(lambda, alpha, beta, entry);
            }
        }
    }
    if a.is_biunit(e, Tolerance::default())? {
        out.unit = Some(e.clone());
    }
    Ok(out)
}

/// Max-norm of `(σα⋆σβ)⋆σγ − σα⋆(σβ⋆σγ)` over all basis triples, via the
/// contraction `M^η_{αβ} M^λ_{ηγ} − M^η_{βγ} M^λ_{αη}`.
pub fn binary_assoc_residual(b: &BinaryAlgebra) -> f64 {
    let n = b.dim();
    let mut worst = 0.0f64;
    for alpha in 0..n {
        for beta in 0..n {
            for gamma in 0..n {
                for lambda in 0..n {
                    let mut left = 0.0;
                    let mut right = 0.0;
                    for eta in 0..n {
                        left += b.get(eta, alpha, beta) * b.get(lambda, eta, gamma);
                        right += b.get(eta, beta, gamma) * b.get(lambda, alpha, eta);
                    }
                    worst = worst.max((left - right).abs());
                }
            }
        }
    }
    worst
}

/// Deviation of `φ` from a homomorphism between two binary algebras, over
/// basis pairs.
pub fn binary_hom_residual(a: &BinaryAlgebra, b: &BinaryAlgebra, phi: &LinearMap) -> Result<f64> {
    if phi.cols != a.dim() || phi.rows != b.dim() {
        return Err(TernError::ShapeMismatch(format!(
            "map is {}x{}, expected {}x{}",
            phi.rows,
            phi.cols,
            b.dim(),
            a.dim()
        )));
    }
    let n = a.dim();
    let columns: Vec<FibreVector> = (0..n).map(|i| FibreVector::new(phi.column(i))).collect();
    let mut worst = 0.0f64;
    for alpha in 0..n {
        for beta in 0..n {
            let mut prod = vec![0.0; n];
            for (lambda, p) in prod.iter_mut().enumerate() {
                *p = a.get(lambda, alpha, beta);
            }
            let lhs = phi.apply(&prod)?;
            let rhs = b.multiply(&columns[alpha], &columns[beta])?;
            for (l, r) in lhs.iter().zip(rhs.as_slice()) {
                worst = worst.max((l - r).abs());
            }
        }
    }
    Ok(worst)
}

/// The canonical map `ψ(u) = [u, e, e']` between the star reductions at two
/// biunits, returned as a matrix. Errors unless both elements are biunits.
pub fn canonical_biunit_iso(
    a: &TernaryAlgebra,
    e: &FibreVector,
    e_prime: &FibreVector,
) -> Result<LinearMap> {
    let tol = Tolerance::default();
    for candidate in [e, e_prime] {
        let left = a.left_biunit_residual(candidate)?;
        let right = a.right_biunit_residual(candidate)?;
        if left > tol.eps || right > tol.eps {
            return Err(TernError::NotBiunit { left, right });
        }
    }
    let n = a.dim();
    let mut psi = LinearMap::zeros(n, n);
    for alpha in 0..n {
        let col = a.product(&FibreVector::basis(n, alpha), e, e_prime)?;
        for lambda in 0..n {
            psi.set(lambda, alpha, col.components[lambda]);
        }
    }
    Ok(psi)
}

/// Component-wise product on the direct sum, block-diagonal in the combined
/// basis. Preserves para-associativity.
pub fn direct_sum(a1: &TernaryAlgebra, a2: &TernaryAlgebra) -> TernaryAlgebra {
    let n1 = a1.dim();
    let n2 = a2.dim();
    let n = n1 + n2;
    let mut c = StructureTensor::zeros(n);
    for lambda in 0..n1 {
        for alpha in 0..n1 {
            for beta in 0..n1 {
                for gamma in 0..n1 {
                    c.set(
                        lambda,
                        alpha,
                        beta,
                        gamma,
                        a1.structure().get(lambda, alpha, beta, gamma),
                    );
                }
            }
        }
    }
    for lambda in 0..n2 {
        for alpha in 0..n2 {
            for beta in 0..n2 {
                for gamma in 0..n2 {
                    c.set(
                        n1 + lambda,
                        n1 + alpha,
                        n1 + beta,
                        n1 + gamma,
                        a2.structure().get(lambda, alpha, beta, gamma),
                    );
                }
            }
        }
    }
    TernaryAlgebra::new(c, None)
}

/// Factor-wise product on the triple tensor product
/// `[u1⊗u2⊗u3, v1⊗v2⊗v3, w1⊗w2⊗w3] = [u1,v1,w1]⊗[u2,v2,w2]⊗[u3,v3,w3]`.
///
/// Composite indices are flattened lexicographically:
/// `(i1,i2,i3) -> (i1*n2 + i2)*n3 + i3` with zero-based factors.
pub fn tensor_product(
    a1: &TernaryAlgebra,
    a2: &TernaryAlgebra,
    a3: &TernaryAlgebra,
) -> TernaryAlgebra {
    let (n1, n2, n3) = (a1.dim(), a2.dim(), a3.dim());
    let n = n1 * n2 * n3;
    let flat = |i1: usize, i2: usize, i3: usize| (i1 * n2 + i2) * n3 + i3;
    let mut c = StructureTensor::zeros(n);
    for l1 in 0..n1 {
        for a in 0..n1 {
            for b in 0..n1 {
                for g in 0..n1 {
                    let c1 = a1.structure().get(l1, a, b, g);
                    if c1 == 0.0 {
                        continue;
                    }
                    for l2 in 0..n2 {
                        for a2i in 0..n2 {
                            for b2 in 0..n2 {
                                for g2 in 0..n2 {
                                    let c2 = a2.structure().get(l2, a2i, b2, g2);
                                    if c2 == 0.0 {
                                        continue;
                                    }
                                    for l3 in 0..n3 {
                                        for a3i in 0..n3 {
                                            for b3 in 0..n3 {
                                                for g3 in 0..n3 {
                                                    let c3 = a3.structure().get(l3, a3i, b3, g3);
                                                    if c3 == 0.0 {
                                                        continue;
                                                    }
                                                    c.set(
                                                        flat(l1, l2, l3),
                                                        flat(a, a2i, a3i),
                                                        flat(b, b2, b3),
                                                        flat(g, g2, g3),
                                                        c1 * c2 * c3,
                                                    );
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    TernaryAlgebra::new(c, None)
}

/// Searches for `λ > 0` with `φ = λ·id` a homomorphism from `a1` to `a2`.
///
/// Such a map exists only for proportional structure tensors: `C1 = s·C2`
/// forces `λ² = s`. Returns `Ok(None)` when the tensors are proportional but
/// no positive solution exists (`s ≤ 0`, covering the zero algebra against a
/// nonzero one), and an error when they are not proportional at all.
pub fn scaling_iso_search(a1: &TernaryAlgebra, a2: &TernaryAlgebra) -> Result<Option<f64>> {
    if a1.dim() != a2.dim() {
        return Err(TernError::DimensionMismatch {
            expected: a1.dim(),
            got: a2.dim(),
            context: "scaling isomorphism search",
        });
    }
    let c1 = a1.structure().entries();
    let c2 = a2.structure().entries();
    let m1 = a1.structure().max_abs();
    let m2 = a2.structure().max_abs();
    let tiny = 1e-14;
    if m1 <= tiny && m2 <= tiny {
        return Ok(Some(1.0));
    }
    if m1 <= tiny || m2 <= tiny {
        // one side is the zero algebra; 0 = λ³·C or λ·C = 0 has no λ > 0
        return Ok(None);
    }
    // ratio from the largest entry of c2, then verified entrywise
    let (pivot, _) = c2
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap();
    let s = c1[pivot] / c2[pivot];
    let scale = m1.max(m2).max(1.0);
    let mut deviation = 0.0f64;
    for (x1, x2) in c1.iter().zip(c2) {
        deviation = deviation.max((x1 - s * x2).abs());
    }
    if deviation > 1e-9 * scale {
        return Err(TernError::NotScalingRelated {
            ratio: s,
            deviation,
        });
    }
    if s <= 0.0 {
        return Ok(None);
    }
    Ok(Some(s.sqrt()))
}
