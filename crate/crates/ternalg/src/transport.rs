//! Parallel transport along sampled chart curves and the induced fibre
//! isomorphism check.
//!
//! The transport equation `du^α/dt = −Γ^α_{aβ}(x(t)) ẋ^a(t) u^β` is solved
//! with classical fixed-step fourth-order integration. Connection values
//! along the curve come from multilinear interpolation on the grid; the
//! curve position is interpolated linearly between its samples and the
//! tangent from three-point difference quotients of the samples (one-sided
//! at the ends, centred inside for uniformly spaced parameters).

use crate::algebra::{hom_residual, FibreVector, LinearMap};
use crate::connections::ConnectionField;
use crate::error::{Result, TernError};
use crate::fields::{fibre_algebra_at, StructureField};

/// Sampled path in chart coordinates with strictly increasing parameters.
/// `closed` is metadata: loop endpoints may differ in coordinates when an
/// angular coordinate is unwrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    params: Vec<f64>,
    points: Vec<Vec<f64>>,
    pub closed: bool,
}

impl Curve {
    pub fn new(samples: Vec<(f64, Vec<f64>)>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(TernError::CurveTooShort(samples.len()));
        }
        let base_dim = samples[0].1.len();
        let mut params = Vec::with_capacity(samples.len());
        let mut points = Vec::with_capacity(samples.len());
        for (k, (t, x)) in samples.into_iter().enumerate() {
            if x.len() != base_dim {
                return Err(TernError::ShapeMismatch(format!(
                    "curve sample {k} has {} coordinates, expected {base_dim}",
                    x.len()
                )));
            }
            if k > 0 && t <= params[k - 1] {
                return Err(TernError::CurveNotIncreasing { sample: k });
            }
            params.push(t);
            points.push(x);
        }
        Ok(Self {
            params,
            points,
            closed,
        })
    }

    /// Uniformly parameterised curve through a coordinate function.
    pub fn sampled(
        t0: f64,
        t1: f64,
        samples: usize,
        closed: bool,
        f: impl Fn(f64) -> Vec<f64>,
    ) -> Result<Self> {
        let step = (t1 - t0) / (samples - 1) as f64;
        Self::new(
            (0..samples)
                .map(|k| {
                    let t = t0 + k as f64 * step;
                    (t, f(t))
                })
                .collect(),
            closed,
        )
    }

    pub fn base_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn sample_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn start(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn end(&self) -> &[f64] {
        &self.points[self.points.len() - 1]
    }

    /// Same trace walked backwards, reparameterised to increase.
    pub fn reversed(&self) -> Curve {
        let t0 = self.params[0];
        let t1 = self.params[self.params.len() - 1];
        let samples = self
            .params
            .iter()
            .rev()
            .zip(self.points.iter().rev())
            .map(|(&t, x)| (t0 + (t1 - t), x.clone()))
            .collect();
        Curve::new(samples, self.closed).expect("reversal preserves validity")
    }

    fn min_segment(&self) -> f64 {
        self.params
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Bracketing segment index for a parameter value.
    fn segment(&self, t: f64) -> usize {
        match self.params.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(self.params.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.params.len() - 2),
        }
    }

    /// Linear position interpolation.
    fn position(&self, t: f64) -> Vec<f64> {
        let k = self.segment(t);
        let (t0, t1) = (self.params[k], self.params[k + 1]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        self.points[k]
            .iter()
            .zip(&self.points[k + 1])
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }

    /// Tangents at the samples from a quadratic fit through three
    /// neighbouring samples; reduces to central differences on uniform
    /// parameters.
    fn sample_tangents(&self) -> Vec<Vec<f64>> {
        let n = self.params.len();
        let d = self.base_dim();
        let mut tangents = vec![vec![0.0; d]; n];
        for k in 0..n {
            let (i0, i1, i2) = if k == 0 {
                (0, 1, 2.min(n - 1))
            } else if k == n - 1 {
                (n - 3.min(n - 1), n - 2, n - 1)
            } else {
                (k - 1, k, k + 1)
            };
            if i0 == i2 || i1 == i2 || i0 == i1 {
                // only two samples total: single difference quotient
                let dt = self.params[1] - self.params[0];
                for a in 0..d {
                    tangents[k][a] = (self.points[1][a] - self.points[0][a]) / dt;
                }
                continue;
            }
            let t = self.params[k];
            let (t0, t1, t2) = (self.params[i0], self.params[i1], self.params[i2]);
            // derivative of the Lagrange interpolant at t
            let c0 = (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
            let c1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
            let c2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
            for a in 0..d {
                tangents[k][a] =
                    c0 * self.points[i0][a] + c1 * self.points[i1][a] + c2 * self.points[i2][a];
            }
        }
        tangents
    }
}

/// Result of one transport run.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    /// Fibre map from the start of the curve to its end.
    pub map: LinearMap,
    /// Step size actually used (the requested `dt` shrunk to land exactly).
    pub step_size: f64,
    /// Homomorphism residual between the endpoint fibre algebras under the
    /// map. Recorded, never assumed small.
    pub iso_residual: f64,
}

struct CurveGeometry {
    tangents: Vec<Vec<f64>>,
}

impl CurveGeometry {
    fn tangent(&self, curve: &Curve, t: f64) -> Vec<f64> {
        let k = curve.segment(t);
        let (t0, t1) = (curve.params[k], curve.params[k + 1]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        self.tangents[k]
            .iter()
            .zip(&self.tangents[k + 1])
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }
}

fn validate_transport_inputs(conn: &ConnectionField, curve: &Curve, dt: f64) -> Result<()> {
    if curve.base_dim() != conn.base_dim() {
        return Err(TernError::DimensionMismatch {
            expected: conn.base_dim(),
            got: curve.base_dim(),
            context: "curve coordinates",
        });
    }
    if !(dt > 0.0) {
        return Err(TernError::NonPositiveStep(dt));
    }
    let min_segment = curve.min_segment();
    if dt > min_segment {
        return Err(TernError::StepTooLarge { dt, min_segment });
    }
    for (k, x) in curve.points().iter().enumerate() {
        if !conn.chart().contains(x) {
            return Err(TernError::CurveExitsChart {
                sample: k,
                point: x.clone(),
            });
        }
    }
    Ok(())
}

/// `−Γ_a(x) ẋ^a` as an n×n matrix acting on fibre components.
fn transport_generator(
    conn: &ConnectionField,
    curve: &Curve,
    geometry: &CurveGeometry,
    t: f64,
) -> Result<Vec<f64>> {
    let n = conn.fibre_dim;
    let d = conn.base_dim();
    let x = curve.position(t);
    let gamma = conn.grid.sample(&x)?;
    let xdot = geometry.tangent(curve, t);
    let mut a = vec![0.0; n * n];
    for axis in 0..d {
        let v = xdot[axis];
        if v == 0.0 {
            continue;
        }
        for alpha in 0..n {
            for beta in 0..n {
                // du^β/dt gains −Γ^β_{aα} ẋ^a u^α
                a[beta * n + alpha] -= v * gamma[(axis * n + alpha) * n + beta];
            }
        }
    }
    Ok(a)
}

/// `out = a · u` with `a` n×n and `u` n×cols, all row-major.
fn mat_mul_into(a: &[f64], u: &[f64], out: &mut [f64], n: usize, cols: usize) {
    for r in 0..n {
        for c in 0..cols {
            let mut s = 0.0;
            for k in 0..n {
                s += a[r * n + k] * u[k * cols + c];
            }
            out[r * cols + c] = s;
        }
    }
}

/// Integrates the columns of `u0` (n×cols, row-major) through the transport
/// equation with classical fourth-order steps. The requested `dt` is shrunk
/// so that an integer number of steps lands exactly on the final parameter.
fn integrate(
    conn: &ConnectionField,
    curve: &Curve,
    dt: f64,
    u0: Vec<f64>,
    cols: usize,
) -> Result<(Vec<f64>, f64)> {
    validate_transport_inputs(conn, curve, dt)?;
    let geometry = CurveGeometry {
        tangents: curve.sample_tangents(),
    };
    let n = conn.fibre_dim;
    let t_start = curve.params()[0];
    let t_end = curve.params()[curve.sample_count() - 1];
    let span = t_end - t_start;
    let steps = (span / dt).ceil().max(1.0) as usize;
    let h = span / steps as f64;

    let mut u = u0;
    let size = n * cols;
    let mut k = vec![0.0; size];
    let mut stage = vec![0.0; size];
    let mut acc = vec![0.0; size];
    for step in 0..steps {
        let t = t_start + step as f64 * h;
        let a1 = transport_generator(conn, curve, &geometry, t)?;
        let a2 = transport_generator(conn, curve, &geometry, t + 0.5 * h)?;
        let a4 = transport_generator(conn, curve, &geometry, (t + h).min(t_end))?;

        mat_mul_into(&a1, &u, &mut k, n, cols);
        for i in 0..size {
            acc[i] = k[i];
            stage[i] = u[i] + 0.5 * h * k[i];
        }
        mat_mul_into(&a2, &stage, &mut k, n, cols);
        for i in 0..size {
            acc[i] += 2.0 * k[i];
            stage[i] = u[i] + 0.5 * h * k[i];
        }
        mat_mul_into(&a2, &stage, &mut k, n, cols);
        for i in 0..size {
            acc[i] += 2.0 * k[i];
            stage[i] = u[i] + h * k[i];
        }
        mat_mul_into(&a4, &stage, &mut k, n, cols);
        for i in 0..size {
            u[i] += h / 6.0 * (acc[i] + k[i]);
        }
    }
    Ok((u, h))
}

/// Transports a single fibre vector along the curve.
pub fn transport_vector(
    conn: &ConnectionField,
    curve: &Curve,
    v0: &FibreVector,
    dt: f64,
) -> Result<FibreVector> {
    if v0.dim() != conn.fibre_dim {
        return Err(TernError::DimensionMismatch {
            expected: conn.fibre_dim,
            got: v0.dim(),
            context: "transported vector",
        });
    }
    let (u, _) = integrate(conn, curve, dt, v0.components.clone(), 1)?;
    Ok(FibreVector::new(u))
}

/// Transport operator from the start fibre to the end fibre: columns are the
/// transports of the basis vectors. Errors when the result is numerically
/// singular.
pub fn transport_map(conn: &ConnectionField, curve: &Curve, dt: f64) -> Result<LinearMap> {
    let n = conn.fibre_dim;
    let identity = LinearMap::identity(n);
    let (u, _) = integrate(conn, curve, dt, identity.entries, n)?;
    let map = LinearMap {
        rows: n,
        cols: n,
        entries: u,
    };
    let det = map.determinant();
    if det.abs() <= 1e-8 {
        return Err(TernError::SingularTransport { det: det.abs() });
    }
    Ok(map)
}

/// Transports the whole fibre and measures how far the resulting map is from
/// an isomorphism of the endpoint fibre algebras. For a differential
/// connection the residual is integrator plus interpolation error; for
/// anything else it exposes the obstruction.
pub fn transport_iso_residual(
    field: &StructureField,
    conn: &ConnectionField,
    curve: &Curve,
    dt: f64,
) -> Result<TransportResult> {
    if field.chart() != conn.chart() || field.fibre_dim != conn.fibre_dim {
        return Err(TernError::ChartMismatch(
            "structure field and connection must share chart and fibre dimension".into(),
        ));
    }
    let n = conn.fibre_dim;
    let identity = LinearMap::identity(n);
    let (u, h) = integrate(conn, curve, dt, identity.entries, n)?;
    let map = LinearMap {
        rows: n,
        cols: n,
        entries: u,
    };
    let start = fibre_algebra_at(field, curve.start())?;
    let end = fibre_algebra_at(field, curve.end())?;
    let iso_residual = hom_residual(&start, &end, &map)?;
    Ok(TransportResult {
        map,
        step_size: h,
        iso_residual,
    })
}
