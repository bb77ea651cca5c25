//! Shared fixtures for the integration suites: deterministic random numbers,
//! round-sphere charts, and the scaled-line bundle.

#![allow(dead_code)]

use std::f64::consts::PI;

use ternalg::{BilinearForm, Chart, Curve, MetricField};

/// SplitMix64: tiny deterministic generator so frozen expectations never
/// depend on an external crate's stream.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    pub fn next_range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

pub const THETA0: f64 = PI / 3.0;

/// Wide sphere chart θ ∈ [0.6, 2.54], narrow φ band; `h` divides the θ
/// extent so the two standard resolutions cover the same window.
pub fn sphere_wide_chart(h: f64) -> Chart {
    let n_theta = (1.94 / h).round() as usize + 1;
    Chart::new(vec![0.6, 0.0], vec![h, h], vec![n_theta, 7]).unwrap()
}

/// Narrow band around the θ0 latitude with θ0 exactly on a grid node, wide
/// enough in φ for a full unwrapped loop.
pub fn sphere_band_chart(h: f64) -> Chart {
    let margin = 10;
    Chart::new(
        vec![THETA0 - margin as f64 * h, -0.1],
        vec![h, 0.05],
        vec![2 * margin + 1, ((2.0 * PI + 0.2) / 0.05) as usize + 1],
    )
    .unwrap()
}

pub fn sphere_metric(chart: &Chart) -> MetricField {
    MetricField::from_fn(chart.clone(), |x| {
        let s = x[0].sin();
        vec![1.0, 0.0, 0.0, s * s]
    })
    .unwrap()
}

/// Latitude circle at θ0, unwrapped in φ over one full turn. Coordinate
/// samples are affine in the parameter, so linear interpolation between
/// them is exact.
pub fn latitude_loop() -> Curve {
    Curve::sampled(0.0, 2.0 * PI, 17, true, |t| vec![THETA0, t]).unwrap()
}

/// Chart for the t·B family with binary-exact spacing: t = 0, 0.25 and 1
/// land exactly on nodes.
pub fn unit_interval_chart() -> Chart {
    Chart::line(0.0, 1.0 / 64.0, 65)
}

pub fn identity_form(dim: usize) -> BilinearForm {
    BilinearForm::identity(dim)
}
