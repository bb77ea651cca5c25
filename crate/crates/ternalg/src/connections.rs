//! Linear connections on the sampled bundle.
//!
//! A connection stores `Γ^β_{aα}` per node with layout `[a][α][β]` (base
//! index, then fibre-in, then fibre-out). The central check is the ternary
//! Leibniz residual
//! `∂_a C^λ_{αβγ} + C^ε_{αβγ} Γ^λ_{aε} − Γ^ε_{aα} C^λ_{εβγ}
//!  − Γ^ε_{aβ} C^λ_{αεγ} − Γ^ε_{aγ} C^λ_{αβε}`,
//! which vanishes exactly when the connection differentiates the ternary
//! product. Derivatives use the one fixed second-order stencil from
//! [`crate::grid::partial_derivative`].

use rayon::prelude::*;

use crate::error::{Result, TernError};
use crate::fields::{MetricField, StructureField};
use crate::grid::{max_with_argnode, partial_derivative, Chart, GridField};

/// Per-node connection coefficients `Γ^β_{aα}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionField {
    pub grid: GridField,
    pub fibre_dim: usize,
}

impl ConnectionField {
    pub fn zeros(chart: Chart, fibre_dim: usize) -> Self {
        let comps = chart.base_dim() * fibre_dim * fibre_dim;
        Self {
            grid: GridField::zeros(chart, comps),
            fibre_dim,
        }
    }

    /// Fill from a function of the node coordinates returning the flat
    /// `[a][α][β]` coefficient block.
    pub fn from_fn(chart: Chart, fibre_dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let comps = chart.base_dim() * fibre_dim * fibre_dim;
        let grid = GridField::from_fn(chart, comps, |_, x, out| out.copy_from_slice(&f(x)));
        Self { grid, fibre_dim }
    }

    pub fn chart(&self) -> &Chart {
        &self.grid.chart
    }

    pub fn base_dim(&self) -> usize {
        self.grid.chart.base_dim()
    }

    #[inline]
    pub fn gamma(&self, flat: usize, a: usize, alpha: usize, beta: usize) -> f64 {
        let n = self.fibre_dim;
        self.grid.node(flat)[(a * n + alpha) * n + beta]
    }
}

/// Max-norm residual with the node where it is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxReport {
    pub max_residual: f64,
    pub argmax_node: Vec<usize>,
}

/// Residual report for the differential-connection condition.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialReport {
    pub max_residual: f64,
    pub argmax_node: Vec<usize>,
    /// Max residual attributable to each base axis.
    pub per_axis_max: Vec<f64>,
    pub eps: f64,
}

impl DifferentialReport {
    pub fn pass(&self) -> bool {
        self.max_residual <= self.eps
    }
}

fn check_bundle_shapes(f: &StructureField, conn: &ConnectionField) -> Result<()> {
    if f.chart() != conn.chart() {
        return Err(TernError::ChartMismatch(
            "structure field and connection live on different charts".into(),
        ));
    }
    if f.fibre_dim != conn.fibre_dim {
        return Err(TernError::DimensionMismatch {
            expected: f.fibre_dim,
            got: conn.fibre_dim,
            context: "connection fibre dimension",
        });
    }
    Ok(())
}

/// Evaluates the ternary Leibniz residual at every node and reports the
/// worst violation. The connection is a differential connection for the
/// sampled bundle exactly when the report passes.
pub fn differential_residual(
    f: &StructureField,
    conn: &ConnectionField,
    tol: crate::algebra::Tolerance,
) -> Result<DifferentialReport> {
    check_bundle_shapes(f, conn)?;
    let chart = f.chart().clone();
    let d = chart.base_dim();
    let n = f.fibre_dim;
    let derivs: Vec<GridField> = (0..d)
        .map(|a| partial_derivative(&f.grid, a))
        .collect::<Result<_>>()?;

    let nodes = chart.num_points();
    let per_node: Vec<(f64, Vec<f64>)> = (0..nodes)
        .into_par_iter()
        .map(|p| {
            let c = f.grid.node(p);
            let g = conn.grid.node(p);
            let cidx = |l: usize, a: usize, b: usize, gm: usize| ((l * n + a) * n + b) * n + gm;
            let gidx = |ax: usize, a: usize, b: usize| (ax * n + a) * n + b;
            let mut axis_max = vec![0.0f64; d];
            for (a, dc) in derivs.iter().enumerate() {
                let dcn = dc.node(p);
                for lambda in 0..n {
                    for alpha in 0..n {
                        for beta in 0..n {
                            for gamma in 0..n {
                                let mut r = dcn[cidx(lambda, alpha, beta, gamma)];
                                for eps_i in 0..n {
                                    r += c[cidx(eps_i, alpha, beta, gamma)]
                                        * g[gidx(a, eps_i, lambda)];
                                    r -= g[gidx(a, alpha, eps_i)]
                                        * c[cidx(lambda, eps_i, beta, gamma)];
                                    r -= g[gidx(a, beta, eps_i)]
                                        * c[cidx(lambda, alpha, eps_i, gamma)];
                                    r -= g[gidx(a, gamma, eps_i)]
                                        * c[cidx(lambda, alpha, beta, eps_i)];
                                }
                                axis_max[a] = axis_max[a].max(r.abs());
                            }
                        }
                    }
                }
            }
            let max = axis_max.iter().fold(0.0f64, |m, &v| m.max(v));
            (max, axis_max)
        })
        .collect();

    let (max_residual, argmax) = max_with_argnode(per_node.par_iter().map(|(m, _)| *m));
    let mut per_axis_max = vec![0.0f64; d];
    for (_, axis) in &per_node {
        for (pa, v) in per_axis_max.iter_mut().zip(axis) {
            *pa = pa.max(*v);
        }
    }
    Ok(DifferentialReport {
        max_residual,
        argmax_node: chart.multi_index(argmax),
        per_axis_max,
        eps: tol.eps,
    })
}

/// Canonical torsion-free metric connection
/// `Γ^c_{ab} = ½ g^{cd}(∂_a g_{bd} + ∂_b g_{ad} − ∂_d g_{ab})`
/// with the discrete `∂`. Errors on the first node where `|det g| < 1e-12`.
pub fn levi_civita(g: &MetricField) -> Result<ConnectionField> {
    let chart = g.chart().clone();
    let d = chart.base_dim();
    let threshold = 1e-12;
    let derivs: Vec<GridField> = (0..d)
        .map(|a| partial_derivative(&g.grid, a))
        .collect::<Result<_>>()?;

    let mut out = ConnectionField::zeros(chart.clone(), d);
    for p in 0..chart.num_points() {
        let node = g.grid.node(p);
        let det = crate::linalg::determinant(node, d);
        if det.abs() < threshold {
            return Err(TernError::DegenerateMetric {
                node: chart.multi_index(p),
                det: det.abs(),
                threshold,
            });
        }
        let ginv = crate::linalg::invert(node, d, 0.0)
            .expect("determinant above threshold implies invertibility");
        let dg = |a: usize, b: usize, c: usize| derivs[a].node(p)[b * d + c];
        let dest = out.grid.node_mut(p);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let mut sum = 0.0;
                    for e in 0..d {
                        sum += ginv[c * d + e] * (dg(a, b, e) + dg(b, a, e) - dg(e, a, b));
                    }
                    dest[(a * d + b) * d + c] = 0.5 * sum;
                }
            }
        }
    }
    Ok(out)
}

/// Max-norm of `∂_a g_{bc} − Γ^e_{ab} g_{ec} − Γ^e_{ac} g_{be}`.
pub fn metric_compat_residual(g: &MetricField, conn: &ConnectionField) -> Result<MaxReport> {
    let chart = g.chart().clone();
    let d = chart.base_dim();
    if conn.chart() != &chart || conn.fibre_dim != d {
        return Err(TernError::ChartMismatch(
            "metric and connection shapes disagree".into(),
        ));
    }
    let derivs: Vec<GridField> = (0..d)
        .map(|a| partial_derivative(&g.grid, a))
        .collect::<Result<_>>()?;

    let residuals: Vec<f64> = (0..chart.num_points())
        .into_par_iter()
        .map(|p| {
            let gn = g.grid.node(p);
            let mut worst = 0.0f64;
            for a in 0..d {
                let dgn = derivs[a].node(p);
                for b in 0..d {
                    for c in 0..d {
                        let mut r = dgn[b * d + c];
                        for e in 0..d {
                            r -= conn.gamma(p, a, b, e) * gn[e * d + c];
                            r -= conn.gamma(p, a, c, e) * gn[b * d + e];
                        }
                        worst = worst.max(r.abs());
                    }
                }
            }
            worst
        })
        .collect();
    let (max_residual, argmax) = max_with_argnode(residuals.par_iter().copied());
    Ok(MaxReport {
        max_residual,
        argmax_node: chart.multi_index(argmax),
    })
}

/// Per-node curvature `R^β_{abα}`, stored flat as `[a][b][α][β]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    pub grid: GridField,
    pub fibre_dim: usize,
}

impl CurvatureField {
    pub fn chart(&self) -> &Chart {
        &self.grid.chart
    }

    #[inline]
    pub fn at(&self, flat: usize, a: usize, b: usize, alpha: usize, beta: usize) -> f64 {
        let n = self.fibre_dim;
        let d = self.grid.chart.base_dim();
        self.grid.node(flat)[((a * d + b) * n + alpha) * n + beta]
    }
}

/// `R^β_{abα} = ∂_a Γ^β_{bα} − ∂_b Γ^β_{aα} + Γ^ε_{bα} Γ^β_{aε} − Γ^ε_{aα} Γ^β_{bε}`,
/// antisymmetric in `(a,b)`.
///
/// When the connection itself was synthesised by finite differences (as in
/// [`levi_civita`]), its truncation error switches stencils at the chart
/// edge; differentiating across that switch costs one order of accuracy on
/// the two nodes nearest each boundary. Quantities needing uniform
/// second-order accuracy should be read off away from that margin or built
/// on a chart with a two-node halo.
pub fn curvature(conn: &ConnectionField) -> Result<CurvatureField> {
    let chart = conn.chart().clone();
    let d = chart.base_dim();
    let n = conn.fibre_dim;
    let derivs: Vec<GridField> = (0..d)
        .map(|a| partial_derivative(&conn.grid, a))
        .collect::<Result<_>>()?;

    let comps = d * d * n * n;
    let mut out = GridField::zeros(chart.clone(), comps);
    let gidx = |ax: usize, al: usize, be: usize| (ax * n + al) * n + be;
    for p in 0..chart.num_points() {
        let gn = conn.grid.node(p).to_vec();
        let dest = out.node_mut(p);
        for a in 0..d {
            for b in 0..d {
                let da = derivs[a].node(p);
                let db = derivs[b].node(p);
                for alpha in 0..n {
                    for beta in 0..n {
                        let mut r = da[gidx(b, alpha, beta)] - db[gidx(a, alpha, beta)];
                        for e in 0..n {
                            r += gn[gidx(b, alpha, e)] * gn[gidx(a, e, beta)];
                            r -= gn[gidx(a, alpha, e)] * gn[gidx(b, e, beta)];
                        }
                        dest[((a * d + b) * n + alpha) * n + beta] = r;
                    }
                }
            }
        }
    }
    Ok(CurvatureField {
        grid: out,
        fibre_dim: n,
    })
}

/// Per-node max violation of the derivation identity of a given curvature
/// over the ternary product, `R[u,v,w] = [Ru,v,w] + [u,Rv,w] + [u,v,Rw]`
/// on basis triples. One scalar per node.
pub fn derivation_residual_field(f: &StructureField, r: &CurvatureField) -> Result<GridField> {
    if f.chart() != r.chart() || f.fibre_dim != r.fibre_dim {
        return Err(TernError::ChartMismatch(
            "structure field and curvature shapes disagree".into(),
        ));
    }
    let chart = f.chart().clone();
    let d = chart.base_dim();
    let n = f.fibre_dim;
    let cidx = |l: usize, a: usize, b: usize, g: usize| ((l * n + a) * n + b) * n + g;
    let ridx = |a: usize, b: usize, al: usize, be: usize| ((a * d + b) * n + al) * n + be;

    let mut out = GridField::zeros(chart.clone(), 1);
    out.data.par_iter_mut().enumerate().for_each(|(p, dest)| {
        let c = f.grid.node(p);
        let rn = r.grid.node(p);
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for lambda in 0..n {
                    for alpha in 0..n {
                        for beta in 0..n {
                            for gamma in 0..n {
                                let mut res = 0.0;
                                for e in 0..n {
                                    res +=
                                        c[cidx(e, alpha, beta, gamma)] * rn[ridx(a, b, e, lambda)];
                                    res -=
                                        rn[ridx(a, b, alpha, e)] * c[cidx(lambda, e, beta, gamma)];
                                    res -=
                                        rn[ridx(a, b, beta, e)] * c[cidx(lambda, alpha, e, gamma)];
                                    res -=
                                        rn[ridx(a, b, gamma, e)] * c[cidx(lambda, alpha, beta, e)];
                                }
                                worst = worst.max(res.abs());
                            }
                        }
                    }
                }
            }
        }
        *dest = worst;
    });
    Ok(out)
}

/// Max violation of the curvature derivation identity over the whole chart.
/// Meaningful when the connection is differential; reported regardless.
pub fn curvature_derivation_residual(
    f: &StructureField,
    conn: &ConnectionField,
) -> Result<MaxReport> {
    check_bundle_shapes(f, conn)?;
    let r = curvature(conn)?;
    let field = derivation_residual_field(f, &r)?;
    let (max_residual, argmax) = max_with_argnode(field.data.par_iter().copied());
    Ok(MaxReport {
        max_residual,
        argmax_node: f.chart().multi_index(argmax),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tolerance;
    use crate::constructors::BilinearForm;
    use crate::fields::{metric_algebroid, scaled_line_algebroid};
    use crate::linalg;

    fn sphere_chart(h: f64) -> Chart {
        // θ ∈ [0.6, 0.6 + 1.94], φ band wide enough for stencils
        let n_theta = (1.94 / h).round() as usize + 1;
        Chart::new(vec![0.6, 0.0], vec![h, h], vec![n_theta, 7]).unwrap()
    }

    fn sphere_metric(chart: &Chart) -> MetricField {
        MetricField::from_fn(chart.clone(), |x| {
            let s = x[0].sin();
            vec![1.0, 0.0, 0.0, s * s]
        })
        .unwrap()
    }

    /// Levi-Civita coefficients of the round sphere from the closed forms,
    /// sampled exactly at the nodes. Independent of the discrete synthesis.
    fn sphere_lc_exact(chart: &Chart) -> ConnectionField {
        ConnectionField::from_fn(chart.clone(), 2, |x| {
            let (s, c) = x[0].sin_cos();
            let cot = c / s;
            // layout [a][α][β]: Γ^θ_{φφ} = -sinθcosθ, Γ^φ_{θφ} = Γ^φ_{φθ} = cotθ
            let at = |a: usize, alpha: usize, beta: usize| (a * 2 + alpha) * 2 + beta;
            let mut v = vec![0.0; 8];
            v[at(0, 1, 1)] = cot; // Γ^φ_{θφ}
            v[at(1, 0, 1)] = cot; // Γ^φ_{φθ}
            v[at(1, 1, 0)] = -s * c; // Γ^θ_{φφ}
            v
        })
    }

    #[test]
    fn constant_bundle_with_zero_connection_is_differential() {
        let chart = Chart::new(vec![0.0, 0.0], vec![0.5, 0.5], vec![4, 4]).unwrap();
        let g = MetricField::from_fn(chart.clone(), |_| vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let f = metric_algebroid(&g);
        let zero = ConnectionField::zeros(chart, 2);
        let report = differential_residual(&f, &zero, Tolerance::default()).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert!(report.pass());
    }

    #[test]
    fn scaled_line_with_zero_connection_fails_by_the_form_norm() {
        let chart = Chart::line(0.0, 0.05, 21);
        let f = scaled_line_algebroid(&BilinearForm::identity(2), &chart).unwrap();
        let zero = ConnectionField::zeros(chart, 2);
        let report = differential_residual(&f, &zero, Tolerance::default()).unwrap();
        // ∂_t C = B survives untouched; the stencil is exact on linear data
        assert!((report.max_residual - 1.0).abs() <= 1e-12);
        assert!(!report.pass());
    }

    #[test]
    fn discrete_levi_civita_is_exactly_compatible_and_differential() {
        // The synthesis and the residuals share one derivative stencil, so
        // Γ^e_{ab} g_{ec} + Γ^e_{ac} g_{be} reassembles the same discrete
        // ∂_a g_{bc} identically; both residuals sit at rounding level, far
        // below the O(h²) one might expect.
        let chart = sphere_chart(2e-2);
        let g = sphere_metric(&chart);
        let lc = levi_civita(&g).unwrap();
        let compat = metric_compat_residual(&g, &lc).unwrap();
        assert!(
            compat.max_residual <= 1e-12,
            "compat {}",
            compat.max_residual
        );
        let report =
            differential_residual(&metric_algebroid(&g), &lc, Tolerance::default()).unwrap();
        assert!(report.max_residual <= 1e-12, "diff {}", report.max_residual);
    }

    #[test]
    fn residual_against_the_continuum_connection_converges_at_second_order() {
        // Against exactly sampled Christoffels the residual is the stencil
        // truncation error of ∂C and must quarter when h halves.
        let mut maxima = Vec::new();
        for h in [2e-2, 1e-2] {
            let chart = sphere_chart(h);
            let f = metric_algebroid(&sphere_metric(&chart));
            let exact = sphere_lc_exact(&chart);
            let report = differential_residual(&f, &exact, Tolerance::default()).unwrap();
            maxima.push(report.max_residual);
        }
        let ratio = maxima[0] / maxima[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "ratio {ratio}, maxima {maxima:?}"
        );
        assert!(maxima[1] <= 5e-3);

        let chart = sphere_chart(1e-2);
        let compat =
            metric_compat_residual(&sphere_metric(&chart), &sphere_lc_exact(&chart)).unwrap();
        assert!(compat.max_residual <= 5e-3);
    }

    #[test]
    fn gauge_transformed_constant_bundle_confirms_the_residual_signs() {
        // Push a constant algebra through a point-dependent frame Φ(t) and
        // pair it with the connection Γ = Φ ∂(Φ⁻¹) = -Φ' Φ⁻¹ whose parallel
        // frames are Φ·const. The continuum residual vanishes, so the
        // discrete residual must shrink at second order; any sign slip in
        // the Γ terms breaks the rate.
        let c2 =
            crate::constructors::heap_algebra(&crate::constructors::cyclic_heap_table(2)).unwrap();
        let phi = |t: f64| vec![1.0 + 0.3 * t, 0.2 * t, -0.1 * t, 1.0 - 0.2 * t];
        let phi_dot = [0.3, 0.2, -0.1, -0.2];

        let mut maxima = Vec::new();
        for h in [2e-2f64, 1e-2] {
            let points = (0.8 / h).round() as usize + 1;
            let chart = Chart::line(0.0, h, points);
            let f = crate::fields::StructureField::from_fn(chart.clone(), 2, |x| {
                let m = phi(x[0]);
                let minv = linalg::invert(&m, 2, 0.0).unwrap();
                let mut c = crate::algebra::StructureTensor::zeros(2);
                for lambda in 0..2 {
                    for alpha in 0..2 {
                        for beta in 0..2 {
                            for gamma in 0..2 {
                                let mut v = 0.0;
                                for e in 0..2 {
                                    for r in 0..2 {
                                        for s in 0..2 {
                                            for t in 0..2 {
                                                v += m[lambda * 2 + e]
                                                    * c2.structure().get(e, r, s, t)
                                                    * minv[r * 2 + alpha]
                                                    * minv[s * 2 + beta]
                                                    * minv[t * 2 + gamma];
                                            }
                                        }
                                    }
                                }
                                c.set(lambda, alpha, beta, gamma, v);
                            }
                        }
                    }
                }
                c
            });
            let conn = ConnectionField::from_fn(chart, 2, |x| {
                let minv = linalg::invert(&phi(x[0]), 2, 0.0).unwrap();
                // Γ^β_{0α} = -(Φ' Φ⁻¹)^β_α, layout [a][α][β]
                let mut v = vec![0.0; 4];
                for alpha in 0..2 {
                    for beta in 0..2 {
                        let mut s = 0.0;
                        for k in 0..2 {
                            s += phi_dot[beta * 2 + k] * minv[k * 2 + alpha];
                        }
                        v[alpha * 2 + beta] = -s;
                    }
                }
                v
            });
            let report = differential_residual(&f, &conn, Tolerance::default()).unwrap();
            maxima.push(report.max_residual);
        }
        assert!(
            maxima[1] > 1e-9,
            "residual should be discretisation-limited"
        );
        let ratio = maxima[0] / maxima[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "ratio {ratio}, maxima {maxima:?}"
        );
    }

    #[test]
    fn levi_civita_flat_metric_vanishes() {
        let chart = Chart::new(vec![0.0, 0.0], vec![0.25, 0.25], vec![5, 5]).unwrap();
        let g = MetricField::from_fn(chart, |_| vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let lc = levi_civita(&g).unwrap();
        assert_eq!(lc.grid.max_abs(), 0.0);
    }

    #[test]
    fn levi_civita_matches_sphere_closed_forms() {
        let chart = sphere_chart(1e-2);
        let lc = levi_civita(&sphere_metric(&chart)).unwrap();
        let exact = sphere_lc_exact(&chart);
        let mut worst = 0.0f64;
        for p in 0..chart.num_points() {
            for k in 0..8 {
                worst = worst.max((lc.grid.node(p)[k] - exact.grid.node(p)[k]).abs());
            }
        }
        assert!(worst <= 5e-4, "worst {worst}");
    }

    #[test]
    fn levi_civita_is_exactly_symmetric_in_the_lower_indices() {
        let chart = sphere_chart(2e-2);
        let lc = levi_civita(&sphere_metric(&chart)).unwrap();
        for p in 0..chart.num_points() {
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        assert_eq!(lc.gamma(p, a, b, c), lc.gamma(p, b, a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn levi_civita_rejects_signature_change() {
        // g = diag(x, 1) degenerates where the x-axis crosses zero
        let chart = Chart::new(vec![-0.1, 0.0], vec![0.01, 0.1], vec![21, 3]).unwrap();
        let g = MetricField::from_fn(chart.clone(), |x| vec![x[0], 0.0, 0.0, 1.0]).unwrap();
        match levi_civita(&g) {
            Err(TernError::DegenerateMetric { node, .. }) => {
                let x = chart.coord(0, node[0]);
                assert!(x.abs() <= 0.01, "named node sits at x = {x}");
            }
            other => panic!("expected a degenerate-metric error, got {other:?}"),
        }
    }

    #[test]
    fn compat_residual_of_the_bare_metric_is_its_gradient() {
        let chart = sphere_chart(1e-2);
        let g = sphere_metric(&chart);
        let zero = ConnectionField::zeros(chart, 2);
        let report = metric_compat_residual(&g, &zero).unwrap();
        // reduces to max |∂_θ sin²θ| = 1, attained near θ = π/4
        assert!((report.max_residual - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn compat_residual_is_bounded_by_the_differential_residual() {
        // For a flat metric bundle the Leibniz residual of any connection
        // contains the compatibility residual on the δ-diagonal, so the two
        // maxima coincide.
        let chart = Chart::new(vec![0.0, 0.0], vec![0.2, 0.2], vec![5, 5]).unwrap();
        let g = MetricField::from_fn(chart.clone(), |_| vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let f = metric_algebroid(&g);
        let conn = ConnectionField::from_fn(chart, 2, |x| {
            vec![
                0.3 * x[0],
                -0.2,
                0.1 * x[1],
                0.7,
                0.05,
                0.4 * x[0] * x[1],
                -0.6,
                0.2 * x[1],
            ]
        });
        let compat = metric_compat_residual(&g, &conn).unwrap();
        let diff = differential_residual(&f, &conn, Tolerance::default()).unwrap();
        assert!(compat.max_residual <= diff.max_residual + 1e-12);
    }

    #[test]
    fn curvature_of_zero_and_flat_connections_vanishes() {
        let chart = Chart::new(vec![0.0, 0.0], vec![0.25, 0.25], vec![5, 5]).unwrap();
        let zero = ConnectionField::zeros(chart.clone(), 2);
        assert_eq!(curvature(&zero).unwrap().grid.max_abs(), 0.0);
        let g = MetricField::from_fn(chart, |_| vec![2.0, 0.0, 0.0, 3.0]).unwrap();
        let r = curvature(&levi_civita(&g).unwrap()).unwrap();
        assert!(r.grid.max_abs() <= 1e-12);
    }

    #[test]
    fn sphere_curvature_matches_the_closed_form() {
        let h = 1e-2;
        let chart = sphere_chart(h);
        let lc = levi_civita(&sphere_metric(&chart)).unwrap();
        let r = curvature(&lc).unwrap();
        let n_theta = chart.shape[0];
        let mut worst = 0.0f64;
        let mut worst_edge = 0.0f64;
        for p in 0..chart.num_points() {
            let i = chart.multi_index(p)[0];
            let theta = chart.coord(0, i);
            // R^θ_{θφφ}: a = θ, b = φ, input α = φ, output β = θ
            let err = (r.at(p, 0, 1, 1, 0) - theta.sin().powi(2)).abs();
            if i >= 2 && i + 2 < n_theta {
                worst = worst.max(err);
            } else {
                worst_edge = worst_edge.max(err);
            }
        }
        // second order away from the two-node boundary margin
        assert!(worst <= 5e-3, "worst {worst}");
        // the margin differentiates the Γ stencil switch and is first order
        assert!(worst_edge <= 4.0 * h, "edge worst {worst_edge}");
    }

    #[test]
    fn curvature_is_exactly_antisymmetric_in_the_base_pair() {
        let chart = sphere_chart(2e-2);
        let lc = levi_civita(&sphere_metric(&chart)).unwrap();
        let r = curvature(&lc).unwrap();
        for p in 0..chart.num_points() {
            for alpha in 0..2 {
                for beta in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            assert_eq!(r.at(p, a, b, alpha, beta), -r.at(p, b, a, alpha, beta));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_derivation_identity() {
        // trivial bundle: exact zero
        let chart = Chart::new(vec![0.0, 0.0], vec![0.25, 0.25], vec![5, 5]).unwrap();
        let g = MetricField::from_fn(chart.clone(), |_| vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let f = metric_algebroid(&g);
        let zero = ConnectionField::zeros(chart, 2);
        assert_eq!(
            curvature_derivation_residual(&f, &zero)
                .unwrap()
                .max_residual,
            0.0
        );

        // sphere with its metric connection: discretisation error only,
        // second-order away from the two-node boundary margin
        let chart = sphere_chart(1e-2);
        let g = sphere_metric(&chart);
        let f = metric_algebroid(&g);
        let lc = levi_civita(&g).unwrap();
        let per_node = derivation_residual_field(&f, &curvature(&lc).unwrap()).unwrap();
        let n_theta = chart.shape[0];
        let mut worst = 0.0f64;
        for p in 0..chart.num_points() {
            let i = chart.multi_index(p)[0];
            if i >= 2 && i + 2 < n_theta {
                worst = worst.max(per_node.node(p)[0]);
            }
        }
        assert!(worst <= 5e-3, "residual {worst}");
        // the whole-chart report includes the first-order margin
        let report = curvature_derivation_residual(&f, &lc).unwrap();
        assert!(report.max_residual <= 0.1);

        // outside the differential hypothesis the number is only reported
        let line = Chart::line(0.0, 0.05, 21);
        let tb = scaled_line_algebroid(&BilinearForm::identity(2), &line).unwrap();
        let zero_line = ConnectionField::zeros(line, 2);
        let outside = curvature_derivation_residual(&tb, &zero_line).unwrap();
        assert!(outside.max_residual.is_finite());
    }
}
