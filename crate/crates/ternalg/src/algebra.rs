//! Finite-dimensional ternary algebras in structure-constant form.
//!
//! An algebra of dimension `n` is the rank-4 tensor `C^λ_{αβγ}`: the
//! λ-component of the product of the α-th, β-th and γ-th basis vectors.
//! The product of general vectors is the trilinear extension
//! `[u,v,w]^λ = u^α v^β w^γ C^λ_{αβγ}`.
//!
//! Para-associativity is the two-sided law
//! `[[x1,x2,x3],x4,x5] = [x1,[x4,x3,x2],x5] = [x1,x2,[x3,x4,x5]]`,
//! with the middle factor reversed. The A-type variant keeps the middle
//! factor in order. Both are available as residual checks.

use rayon::prelude::*;

use crate::error::{Result, TernError};

/// Element of a fibre, expressed in the algebra's fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreVector {
    pub components: Vec<f64>,
}

impl FibreVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self { components }
    }

    pub fn from_slice(components: &[f64]) -> Self {
        Self {
            components: components.to_vec(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            components: vec![0.0; dim],
        }
    }

    /// i-th standard basis vector (zero-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut components = vec![0.0; dim];
        components[i] = 1.0;
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            components: self.components.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Rank-4 array `C^λ_{αβγ}`, stored flat in row-major order `[λ][α][β][γ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    entries: Vec<f64>,
}

impl StructureTensor {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "algebra dimension must be at least 1");
        Self {
            dim,
            entries: vec![0.0; dim * dim * dim * dim],
        }
    }

    pub fn from_flat(dim: usize, entries: Vec<f64>) -> Result<Self> {
        let expected = dim * dim * dim * dim;
        if entries.len() != expected {
            return Err(TernError::ShapeMismatch(format!(
                "structure tensor for dim {dim} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    fn idx(&self, lambda: usize, alpha: usize, beta: usize, gamma: usize) -> usize {
        ((lambda * self.dim + alpha) * self.dim + beta) * self.dim + gamma
    }

    #[inline]
    pub fn get(&self, lambda: usize, alpha: usize, beta: usize, gamma: usize) -> f64 {
        self.entries[self.idx(lambda, alpha, beta, gamma)]
    }

    #[inline]
    pub fn set(&mut self, lambda: usize, alpha: usize, beta: usize, gamma: usize, value: f64) {
        let i = self.idx(lambda, alpha, beta, gamma);
        self.entries[i] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Absolute residual bound for the algebraic predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(eps >= 0.0, "tolerance must be nonnegative");
        Self { eps }
    }
}

impl Default for Tolerance {
    /// Desk-scale default for O(1) inputs.
    fn default() -> Self {
        Self { eps: 1e-9 }
    }
}

/// Dense real matrix, row-major. Carries homomorphisms and transport maps.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
}

impl LinearMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(TernError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
                context: "matrix-vector product",
            });
        }
        let mut out = vec![0.0; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    /// Column as a fibre vector.
    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(TernError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    /// Panics if the matrix is not square.
    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        crate::linalg::determinant(&self.entries, self.rows)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Ternary algebra: a dimension together with its structure tensor.
///
/// Construction does not require para-associativity; the predicates test it.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryAlgebra {
    dim: usize,
    c: StructureTensor,
    pub label: Option<String>,
}

impl TernaryAlgebra {
    pub fn new(c: StructureTensor, label: Option<String>) -> Self {
        Self {
            dim: c.dim(),
            c,
            label,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(StructureTensor::zeros(dim), None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &StructureTensor {
        &self.c
    }

    fn check_dim(&self, v: &FibreVector, context: &'static str) -> Result<()> {
        if v.dim() != self.dim {
            return Err(TernError::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
                context,
            });
        }
        Ok(())
    }

    /// Trilinear product `[u,v,w]^λ = Σ u^α v^β w^γ C^λ_{αβγ}`.
    pub fn product(
        &self,
        u: &FibreVector,
        v: &FibreVector,
        w: &FibreVector,
    ) -> Result<FibreVector> {
        self.check_dim(u, "ternary product")?;
        self.check_dim(v, "ternary product")?;
        self.check_dim(w, "ternary product")?;
        let n = self.dim;
        let mut out = vec![0.0; n];
        for alpha in 0..n {
            let ua = u.components[alpha];
            if ua == 0.0 {
                continue;
            }
            for beta in 0..n {
                let uv = ua * v.components[beta];
                if uv == 0.0 {
                    continue;
                }
                for gamma in 0..n {
                    let coeff = uv * w.components[gamma];
                    if coeff == 0.0 {
                        continue;
                    }
                    for (lambda, o) in out.iter_mut().enumerate() {
                        *o += coeff * self.c.get(lambda, alpha, beta, gamma);
                    }
                }
            }
        }
        Ok(FibreVector::new(out))
    }

    /// Residuals of the para-associative law on five vectors:
    /// `R1 = [[x1,x2,x3],x4,x5] - [x1,[x4,x3,x2],x5]` and
    /// `R2 = [x1,[x4,x3,x2],x5] - [x1,x2,[x3,x4,x5]]`.
    pub fn para_residual(
        &self,
        x1: &FibreVector,
        x2: &FibreVector,
        x3: &FibreVector,
        x4: &FibreVector,
        x5: &FibreVector,
    ) -> Result<(FibreVector, FibreVector)> {
        let left = self.product(&self.product(x1, x2, x3)?, x4, x5)?;
        let middle = self.product(x1, &self.product(x4, x3, x2)?, x5)?;
        let right = self.product(x1, x2, &self.product(x3, x4, x5)?)?;
        Ok((left.sub(&middle), middle.sub(&right)))
    }

    /// Residuals of the A-type law, with the middle factor unreversed:
    /// `R1 = [[x1,x2,x3],x4,x5] - [x1,[x2,x3,x4],x5]` and
    /// `R2 = [x1,[x2,x3,x4],x5] - [x1,x2,[x3,x4,x5]]`.
    pub fn a_assoc_residual(
        &self,
        x1: &FibreVector,
        x2: &FibreVector,
        x3: &FibreVector,
        x4: &FibreVector,
        x5: &FibreVector,
    ) -> Result<(FibreVector, FibreVector)> {
        let left = self.product(&self.product(x1, x2, x3)?, x4, x5)?;
        let middle = self.product(x1, &self.product(x2, x3, x4)?, x5)?;
        let right = self.product(x1, x2, &self.product(x3, x4, x5)?)?;
        Ok((left.sub(&middle), middle.sub(&right)))
    }

    /// Largest entrywise violation of the contracted para-associative
    /// identities
    /// `C^η_{αβγ} C^λ_{ηδε} = C^η_{δγβ} C^λ_{αηε} = C^η_{γδε} C^λ_{αβη}`.
    ///
    /// Exhaustive over all index tuples; equivalent to the vector residuals
    /// vanishing on every basis 5-tuple.
    pub fn para_assoc_max_residual(&self) -> f64 {
        contracted_assoc_residual(&self.c, MiddleConvention::Reversed)
    }

    /// Same as [`para_assoc_max_residual`](Self::para_assoc_max_residual)
    /// for the A-type law.
    pub fn a_assoc_max_residual(&self) -> f64 {
        contracted_assoc_residual(&self.c, MiddleConvention::InOrder)
    }

    pub fn is_para_associative(&self, tol: Tolerance) -> bool {
        self.para_assoc_max_residual() <= tol.eps
    }

    /// `[x,y,z] = [z,y,x]`, entrywise on the structure tensor.
    pub fn commutativity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for lambda in 0..n {
            for alpha in 0..n {
                for beta in 0..n {
                    for gamma in 0..n {
                        let d = self.c.get(lambda, alpha, beta, gamma)
                            - self.c.get(lambda, gamma, beta, alpha);
                        worst = worst.max(d.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn is_commutative(&self, tol: Tolerance) -> bool {
        self.commutativity_residual() <= tol.eps
    }

    /// Deviation of `x -> [e,e,x]` from the identity, over the basis.
    pub fn left_biunit_residual(&self, e: &FibreVector) -> Result<f64> {
        self.check_dim(e, "biunit check")?;
        let n = self.dim;
        let mut worst = 0.0f64;
        // matrix L^λ_γ = Σ_{αβ} e^α e^β C^λ_{αβγ}
        for lambda in 0..n {
            for gamma in 0..n {
                let mut entry = 0.0;
                for alpha in 0..n {
                    for beta in 0..n {
                        entry += e.components[alpha]
                            * e.components[beta]
                            * self.c.get(lambda, alpha, beta, gamma);
                    }
                }
                let target = if lambda == gamma { 1.0 } else { 0.0 };
                worst = worst.max((entry - target).abs());
            }
        }
        Ok(worst)
    }

    /// Deviation of `x -> [x,e,e]` from the identity, over the basis.
    pub fn right_biunit_residual(&self, e: &FibreVector) -> Result<f64> {
        self.check_dim(e, "biunit check")?;
        let n = self.dim;
        let mut worst = 0.0f64;
        // matrix R^λ_α = Σ_{βγ} C^λ_{αβγ} e^β e^γ
        for lambda in 0..n {
            for alpha in 0..n {
                let mut entry = 0.0;
                for beta in 0..n {
                    for gamma in 0..n {
                        entry += self.c.get(lambda, alpha, beta, gamma)
                            * e.components[beta]
                            * e.components[gamma];
                    }
                }
                let target = if lambda == alpha { 1.0 } else { 0.0 };
                worst = worst.max((entry - target).abs());
            }
        }
        Ok(worst)
    }

    /// `[e,e,x] = [x,e,e] = x` on all basis vectors, within `tol`.
    pub fn is_biunit(&self, e: &FibreVector, tol: Tolerance) -> Result<bool> {
        Ok(self.left_biunit_residual(e)? <= tol.eps && self.right_biunit_residual(e)? <= tol.eps)
    }

    /// Filters `candidates` by [`is_biunit`](Self::is_biunit). Makes no claim
    /// beyond the supplied set.
    pub fn biunit_search(
        &self,
        candidates: &[FibreVector],
        tol: Tolerance,
    ) -> Result<Vec<FibreVector>> {
        let mut found = Vec::new();
        for c in candidates {
            if self.is_biunit(c, tol)? {
                found.push(c.clone());
            }
        }
        Ok(found)
    }

    /// Algebra with `C'^λ_{αβγ} = C^λ_{γβα}`. Involutive.
    pub fn opposite(&self) -> TernaryAlgebra {
        let n = self.dim;
        let mut c = StructureTensor::zeros(n);
        for lambda in 0..n {
            for alpha in 0..n {
                for beta in 0..n {
                    for gamma in 0..n {
                        c.set(
                            lambda,
                            alpha,
                            beta,
                            gamma,
                            self.c.get(lambda, gamma, beta, alpha),
                        );
                    }
                }
            }
        }
        TernaryAlgebra::new(c, self.label.as_ref().map(|l| format!("{l}^op")))
    }

    /// Alternating sum over the six argument orderings.
    pub fn commutator(
        &self,
        u: &FibreVector,
        v: &FibreVector,
        w: &FibreVector,
    ) -> Result<FibreVector> {
        let mut out = self.product(u, v, w)?;
        out = out.sub(&self.product(v, u, w)?);
        out = out.add(&self.product(w, u, v)?);
        out = out.sub(&self.product(u, w, v)?);
        out = out.add(&self.product(v, w, u)?);
        out = out.sub(&self.product(w, v, u)?);
        Ok(out)
    }
}

/// Max over basis triples of `‖φ[σα,σβ,σγ]_A − [φσα,φσβ,φσγ]_B‖∞`.
/// Zero exactly when `φ` is a homomorphism on the basis, hence everywhere.
pub fn hom_residual(a: &TernaryAlgebra, b: &TernaryAlgebra, phi: &LinearMap) -> Result<f64> {
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
            for gamma in 0..n {
                // φ applied to the basis product, read off the structure tensor
                let mut lhs_in = vec![0.0; n];
                for (lambda, c) in lhs_in.iter_mut().enumerate() {
                    *c = a.structure().get(lambda, alpha, beta, gamma);
                }
                let lhs = phi.apply(&lhs_in)?;
                let rhs = b.product(&columns[alpha], &columns[beta], &columns[gamma])?;
                for (l, r) in lhs.iter().zip(rhs.as_slice()) {
                    worst = worst.max((l - r).abs());
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy)]
enum MiddleConvention {
    /// `[x1,[x4,x3,x2],x5]` (para-associative).
    Reversed,
    /// `[x1,[x2,x3,x4],x5]` (A-type).
    InOrder,
}

/// Shared kernel for the contracted associativity checks. For each fixed
/// `(δ,ε)` the three contractions are accumulated per `(α,β,γ)` row and the
/// pairwise deviations tracked. Cost is O(n^7); parallelised over `(δ,ε)`
/// when the algebra is large enough to pay for it.
fn contracted_assoc_residual(c: &StructureTensor, convention: MiddleConvention) -> f64 {
    let n = c.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|d| (0..n).map(move |e| (d, e))).collect();
    let body = |&(delta, epsilon): &(usize, usize)| -> f64 {
        let mut worst = 0.0f64;
        let mut t1 = vec![0.0f64; n];
        let mut t2 = vec![0.0f64; n];
        let mut t3 = vec![0.0f64; n];
        for alpha in 0..n {
            for beta in 0..n {
                for gamma in 0..n {
                    t1.iter_mut().for_each(|x| *x = 0.0);
                    t2.iter_mut().for_each(|x| *x = 0.0);
                    t3.iter_mut().for_each(|x| *x = 0.0);
                    for eta in 0..n {
                        // [[σα,σβ,σγ],σδ,σε]
                        let w1 = c.get(eta, alpha, beta, gamma);
                        if w1 != 0.0 {
                            for (lambda, t) in t1.iter_mut().enumerate() {
                                *t += w1 * c.get(lambda, eta, delta, epsilon);
                            }
                        }
                        // middle term, per convention
                        let w2 = match convention {
                            MiddleConvention::Reversed => c.get(eta, delta, gamma, beta),
                            MiddleConvention::InOrder => c.get(eta, beta, gamma, delta),
                        };
                        if w2 != 0.0 {
                            for (lambda, t) in t2.iter_mut().enumerate() {
                                *t += w2 * c.get(lambda, alpha, eta, epsilon);
                            }
                        }
                        // [σα,σβ,[σγ,σδ,σε]]
                        let w3 = c.get(eta, gamma, delta, epsilon);
                        if w3 != 0.0 {
                            for (lambda, t) in t3.iter_mut().enumerate() {
                                *t += w3 * c.get(lambda, alpha, beta, eta);
                            }
                        }
                    }
                    for lambda in 0..n {
                        worst = worst.max((t1[lambda] - t2[lambda]).abs());
                        worst = worst.max((t2[lambda] - t3[lambda]).abs());
                    }
                }
            }
        }
        worst
    };
    if n >= 8 {
        pairs.par_iter().map(body).reduce(|| 0.0, f64::max)
    } else {
        pairs.iter().map(body).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{bilinear_algebra, cyclic_heap_table, heap_algebra, BilinearForm};

    fn c2_heap() -> TernaryAlgebra {
        heap_algebra(&cyclic_heap_table(2)).unwrap()
    }

    fn dot_algebra(n: usize) -> TernaryAlgebra {
        bilinear_algebra(&BilinearForm::identity(n))
    }

    fn antisym_algebra() -> TernaryAlgebra {
        let omega = BilinearForm::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        bilinear_algebra(&omega)
    }

    fn vec2(a: f64, b: f64) -> FibreVector {
        FibreVector::new(vec![a, b])
    }

    /// Independent expansion used to pin down expected values: three bare
    /// loops over the structure tensor, no shortcuts shared with `product`.
    fn naive_product(a: &TernaryAlgebra, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = a.dim();
        let mut out = vec![0.0; n];
        for lambda in 0..n {
            for alpha in 0..n {
                for beta in 0..n {
                    for gamma in 0..n {
                        out[lambda] += u[alpha]
                            * v[beta]
                            * w[gamma]
                            * a.structure().get(lambda, alpha, beta, gamma);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn product_matches_heap_table_expansion() {
        let a = c2_heap();
        let got = a
            .product(&vec2(1.0, 0.0), &vec2(0.0, 1.0), &vec2(1.0, 1.0))
            .unwrap();
        assert_eq!(got.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn product_dot_algebra() {
        let a = dot_algebra(2);
        let got = a
            .product(&vec2(1.0, 2.0), &vec2(3.0, 4.0), &vec2(5.0, 6.0))
            .unwrap();
        assert_eq!(got.as_slice(), &[55.0, 66.0]);
    }

    #[test]
    fn product_zero_vector_absorbs() {
        let a = c2_heap();
        let got = a
            .product(&FibreVector::zero(2), &vec2(1.0, 2.0), &vec2(3.0, 4.0))
            .unwrap();
        assert_eq!(got.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn product_rejects_dimension_mismatch() {
        let a = c2_heap();
        let bad = FibreVector::new(vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            a.product(&bad, &vec2(0.0, 1.0), &vec2(1.0, 1.0)),
            Err(TernError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn para_residual_heap_biunit_tuple_is_zero() {
        let a = c2_heap();
        let e1 = FibreVector::basis(2, 0);
        let (r1, r2) = a.para_residual(&e1, &e1, &e1, &e1, &e1).unwrap();
        assert_eq!(r1.as_slice(), &[0.0, 0.0]);
        assert_eq!(r2.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn para_residual_antisymmetric_form() {
        let a = antisym_algebra();
        let e1 = FibreVector::basis(2, 0);
        let e2 = FibreVector::basis(2, 1);
        let (r1, r2) = a.para_residual(&e1, &e2, &e1, &e2, &e1).unwrap();
        assert_eq!(r1.as_slice(), &[2.0, 0.0]);
        assert_eq!(r2.as_slice(), &[-2.0, 0.0]);
    }

    #[test]
    fn para_residual_symmetric_form_vanishes() {
        let a = dot_algebra(2);
        // deterministic pseudo-random 5-tuples
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..16 {
            let xs: Vec<FibreVector> = (0..5).map(|_| vec2(next(), next())).collect();
            let (r1, r2) = a
                .para_residual(&xs[0], &xs[1], &xs[2], &xs[3], &xs[4])
                .unwrap();
            assert!(r1.max_abs() <= 1e-12 && r2.max_abs() <= 1e-12);
        }
    }

    #[test]
    fn para_associativity_predicate() {
        let tol = Tolerance::default();
        assert!(c2_heap().is_para_associative(tol));
        assert!(!antisym_algebra().is_para_associative(tol));
        assert!(TernaryAlgebra::zero(2).is_para_associative(tol));
        // the antisymmetric coexample misses by exactly 2
        assert_eq!(antisym_algebra().para_assoc_max_residual(), 2.0);
    }

    fn random_algebra(dim: usize, seed: u64) -> TernaryAlgebra {
        let mut state = seed | 1;
        let mut c = StructureTensor::zeros(dim);
        for lambda in 0..dim {
            for alpha in 0..dim {
                for beta in 0..dim {
                    for gamma in 0..dim {
                        state = state
                            .wrapping_mul(6364136223846793005)
                            .wrapping_add(1442695040888963407);
                        let v = ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
                        c.set(lambda, alpha, beta, gamma, v);
                    }
                }
            }
        }
        TernaryAlgebra::new(c, None)
    }

    #[test]
    fn contracted_check_agrees_with_basis_tuples() {
        // Exhaustive cross-validation up to dimension 4: the contracted
        // residual equals the worst vector residual over all basis 5-tuples.
        for a in [
            c2_heap(),
            antisym_algebra(),
            dot_algebra(2),
            random_algebra(3, 0xfeed),
            random_algebra(4, 0xbead),
            heap_algebra(&cyclic_heap_table(4)).unwrap(),
        ] {
            let n = a.dim();
            let basis: Vec<FibreVector> = (0..n).map(|i| FibreVector::basis(n, i)).collect();
            let mut worst = 0.0f64;
            for i1 in 0..n {
                for i2 in 0..n {
                    for i3 in 0..n {
                        for i4 in 0..n {
                            for i5 in 0..n {
                                let (r1, r2) = a
                                    .para_residual(
                                        &basis[i1], &basis[i2], &basis[i3], &basis[i4], &basis[i5],
                                    )
                                    .unwrap();
                                worst = worst.max(r1.max_abs()).max(r2.max_abs());
                            }
                        }
                    }
                }
            }
            assert!((worst - a.para_assoc_max_residual()).abs() <= 1e-12);
        }
    }

    #[test]
    fn a_assoc_residuals() {
        let heap = c2_heap();
        let n = 2;
        let basis: Vec<FibreVector> = (0..n).map(|i| FibreVector::basis(n, i)).collect();
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    for i4 in 0..n {
                        for i5 in 0..n {
                            let (r1, r2) = heap
                                .a_assoc_residual(
                                    &basis[i1], &basis[i2], &basis[i3], &basis[i4], &basis[i5],
                                )
                                .unwrap();
                            assert_eq!(r1.max_abs(), 0.0);
                            assert_eq!(r2.max_abs(), 0.0);
                        }
                    }
                }
            }
        }

        let dot = dot_algebra(2);
        let e1 = FibreVector::basis(2, 0);
        let e2 = FibreVector::basis(2, 1);
        let (r1, _) = dot.a_assoc_residual(&e1, &e2, &e1, &e2, &e1).unwrap();
        assert_eq!(r1.max_abs(), 0.0);

        let zero = TernaryAlgebra::zero(3);
        assert_eq!(zero.a_assoc_max_residual(), 0.0);
    }

    #[test]
    fn commutativity() {
        let tol = Tolerance::default();
        assert!(c2_heap().is_commutative(tol));
        assert!(!dot_algebra(2).is_commutative(tol));
        assert!(TernaryAlgebra::zero(2).is_commutative(tol));
    }

    #[test]
    fn biunits_of_the_heap() {
        let a = c2_heap();
        let tol = Tolerance::default();
        assert!(a.is_biunit(&FibreVector::basis(2, 0), tol).unwrap());
        assert!(a.is_biunit(&FibreVector::basis(2, 1), tol).unwrap());
        assert!(!dot_algebra(2)
            .is_biunit(&FibreVector::basis(2, 0), tol)
            .unwrap());
    }

    #[test]
    fn biunit_search_with_sign_pairs() {
        // The products are quadratic in e, so -e passes whenever e does.
        // Frozen from the brute-force expansion below.
        let a = c2_heap();
        let tol = Tolerance::default();
        let candidates = vec![
            vec2(1.0, 0.0),
            vec2(-1.0, 0.0),
            vec2(0.0, 1.0),
            vec2(0.0, -1.0),
            vec2(1.0, 1.0),
        ];
        // brute-force oracle: [c,c,x] and [x,c,c] on the basis via naive expansion
        let mut expected = Vec::new();
        for cand in &candidates {
            let mut ok = true;
            for i in 0..2 {
                let x: Vec<f64> = FibreVector::basis(2, i).components;
                let left = naive_product(&a, cand.as_slice(), cand.as_slice(), &x);
                let right = naive_product(&a, &x, cand.as_slice(), cand.as_slice());
                for j in 0..2 {
                    let target = if i == j { 1.0 } else { 0.0 };
                    ok &= (left[j] - target).abs() <= 1e-9 && (right[j] - target).abs() <= 1e-9;
                }
            }
            if ok {
                expected.push(cand.clone());
            }
        }
        let found = a.biunit_search(&candidates, tol).unwrap();
        assert_eq!(found, expected);
        assert_eq!(
            found,
            vec![
                vec2(1.0, 0.0),
                vec2(-1.0, 0.0),
                vec2(0.0, 1.0),
                vec2(0.0, -1.0)
            ]
        );

        assert!(TernaryAlgebra::zero(2)
            .biunit_search(&candidates, tol)
            .unwrap()
            .is_empty());
        let dot = dot_algebra(2);
        assert!(dot
            .biunit_search(&[vec2(1.0, 0.0), vec2(0.0, 1.0)], tol)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn opposite_is_an_involution() {
        let a = antisym_algebra();
        assert_eq!(a.opposite().opposite().structure(), a.structure());
        // the commutative heap is its own opposite
        let h = c2_heap();
        assert_eq!(h.opposite().structure(), h.structure());
        // index swap on the dot algebra: [e1,e2,e2]^op = [e2,e2,e1] = e1
        let dot = dot_algebra(2);
        let op = dot.opposite();
        let e1 = FibreVector::basis(2, 0);
        let e2 = FibreVector::basis(2, 1);
        assert_eq!(op.product(&e1, &e2, &e2).unwrap().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn commutator_vanishes_for_metric_type_and_heap() {
        let dot = dot_algebra(3);
        let heap = c2_heap();
        let u = FibreVector::new(vec![0.3, -1.2, 0.7]);
        let v = FibreVector::new(vec![1.1, 0.4, -0.5]);
        let w = FibreVector::new(vec![-0.2, 0.9, 2.0]);
        assert!(dot.commutator(&u, &v, &w).unwrap().max_abs() <= 1e-12);
        let u2 = vec2(0.3, -1.2);
        let v2 = vec2(1.1, 0.4);
        let w2 = vec2(-0.2, 0.9);
        assert!(heap.commutator(&u2, &v2, &w2).unwrap().max_abs() <= 1e-12);
        // equal arguments alternate to zero in any algebra
        let a = antisym_algebra();
        assert!(a.commutator(&u2, &u2, &u2).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn hom_residual_examples() {
        let heap = c2_heap();
        let swap = LinearMap::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(hom_residual(&heap, &heap, &swap).unwrap(), 0.0);
        assert_eq!(
            hom_residual(&heap, &heap, &LinearMap::identity(2)).unwrap(),
            0.0
        );

        let dot = dot_algebra(2);
        let mut twice = LinearMap::identity(2);
        twice.entries.iter_mut().for_each(|e| *e *= 2.0);
        // [e1,e1,e1]: φ(lhs) = 2e1 vs [2e1,2e1,2e1] = 8e1
        assert_eq!(hom_residual(&dot, &dot, &twice).unwrap(), 6.0);
    }

    #[test]
    fn hom_residual_rejects_bad_shape() {
        let heap = c2_heap();
        let tall = LinearMap::zeros(3, 2);
        assert!(matches!(
            hom_residual(&heap, &heap, &tall),
            Err(TernError::ShapeMismatch(_))
        ));
    }
}
