//! Reproducible verification procedures. Each experiment is a pure function of
//! its configuration and returns an [`ExperimentReport`] whose metrics carry the
//! bound they were judged against.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{LabError, Result};
use crate::numerics::{apodize, central_window, Representation, WaveField, Window};

mod galilean;
mod limits;
mod overlap;
mod structure;
mod transport;

pub use galilean::{
    boost_covariance_residual, commutator_table, k_expectation_series, zassenhaus_check, BoostCovarianceConfig,
    CommutatorConfig, KExpectationConfig, ZassenhausConfig,
};
pub use limits::{epsilon_infinity_fidelity, epsilon_zero_limit, EpsInfinityConfig, EpsZeroConfig};
pub use overlap::{basis_orthonormality, overlap_scan, BasisConfig, OverlapConfig};
pub use structure::{
    eigenrelation_residual, representation_crosscheck, CrosscheckConfig, EigenrelationConfig,
};
pub use transport::{
    acceleration_fit, berry_balazs_trajectory, displacement_composition, evolution_equivalence, shape_distortion,
    AccelerationConfig, BerryBalazsConfig, DisplacementConfig, EvolutionConfig, ShapeConfig, ShapeProbe,
};

/// Acceptance rule attached to a metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value < limit`
    Below(f64),
    /// `value > limit`
    Above(f64),
    /// `|value − target| ≤ tol`
    Near { target: f64, tol: f64 },
    /// `|value − target| ≤ rel·|target|`
    NearRel { target: f64, rel: f64 },
    /// Reported only.
    Info,
}

impl Bound {
    pub fn accepts(&self, v: f64) -> bool {
        if !v.is_finite() {
            return matches!(self, Bound::Info);
        }
        match *self {
            Bound::Below(l) => v < l,
            Bound::Above(l) => v > l,
            Bound::Near { target, tol } => (v - target).abs() <= tol,
            Bound::NearRel { target, rel } => (v - target).abs() <= rel * target.abs(),
            Bound::Info => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
}

/// A labelled `(x, y)` sequence produced by an experiment (trajectories, scans).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub metrics: BTreeMap<String, Metric>,
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<Series>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(name: &str, config: &impl Serialize) -> Self {
        Self {
            name: name.to_string(),
            metrics: BTreeMap::new(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            series: Vec::new(),
            pass: true,
        }
    }

    pub fn check(&mut self, name: &str, value: f64, bound: Bound) -> bool {
        let pass = bound.accepts(value);
        self.pass &= pass;
        self.metrics.insert(name.to_string(), Metric { value, bound, pass });
        pass
    }

    pub fn info(&mut self, name: &str, value: f64) {
        self.check(name, value, Bound::Info);
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).map(|m| m.value)
    }

    pub fn push_series(&mut self, label: &str, x: Vec<f64>, y: Vec<f64>) {
        self.series.push(Series { label: label.to_string(), x, y });
    }
}

/// Location of the density maximum inside `[lo, hi]`, refined by a parabola
/// through the maximal sample and its neighbours. Fails when the maximum sits
/// on the edge of the search range or the global maximum lies outside it.
pub fn density_peak(field: &WaveField, lo: f64, hi: f64) -> Result<f64> {
    let f = field.to_rep(Representation::Position);
    let g = *f.grid();
    let rho = f.density();
    let mut best: Option<usize> = None;
    for (k, x) in g.x_values().into_iter().enumerate() {
        if x >= lo && x <= hi && best.is_none_or(|b| rho[k] > rho[b]) {
            best = Some(k);
        }
    }
    let k = best.ok_or_else(|| LabError::WindowEscape(format!("no samples in [{lo}, {hi}]")))?;
    let global = (0..rho.len()).max_by(|&i, &j| rho[i].total_cmp(&rho[j])).unwrap_or(k);
    if rho[global] > rho[k] {
        return Err(LabError::WindowEscape(format!(
            "density maximum at {} lies outside [{lo}, {hi}]",
            g.x(global)
        )));
    }
    let x = g.x(k);
    if k == 0 || k + 1 == rho.len() || x - g.dx() < lo || x + g.dx() > hi {
        return Err(LabError::WindowEscape(format!("density peak at {x} reached the edge of [{lo}, {hi}]")));
    }
    let (a, b, c) = (rho[k - 1], rho[k], rho[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    Ok(x + shift * g.dx())
}

/// Least-squares fit `y ≈ c0 + c1 t + c2 t²`; returns the coefficients and the
/// root-mean-square residual.
pub fn fit_quadratic(ts: &[f64], ys: &[f64]) -> Result<([f64; 3], f64)> {
    if ts.len() != ys.len() || ts.len() < 3 {
        return Err(LabError::Parameter("a quadratic fit needs at least three points".into()));
    }
    let mut a = [[0.0f64; 4]; 3];
    for (&t, &y) in ts.iter().zip(ys) {
        let basis = [1.0, t, t * t];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += basis[i] * basis[j];
            }
            a[i][3] += basis[i] * y;
        }
    }
    // Gauss-Jordan with partial pivoting
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return Err(LabError::Parameter("quadratic fit is singular (need three distinct times)".into()));
        }
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                let pivot = a[col];
                for (v, p) in a[row].iter_mut().zip(pivot).skip(col) {
                    *v -= f * p;
                }
            }
        }
    }
    let c = [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]];
    let rss: f64 = ts.iter().zip(ys).map(|(&t, &y)| (y - c[0] - c[1] * t - c[2] * t * t).powi(2)).sum();
    Ok((c, (rss / ts.len() as f64).sqrt()))
}

/// Apodized position build used as the starting point of dynamical experiments.
pub(crate) fn prepared(field: WaveField) -> Result<WaveField> {
    apodize(&field.to_rep(Representation::Position))
}

pub(crate) fn window_or_central(w: Option<Window>, field: &WaveField) -> Result<Window> {
    let w = w.unwrap_or_else(|| central_window(field));
    w.validate()?;
    Ok(w)
}

/// Phase of `z` folded into `(−π, π]`.
pub(crate) fn wrap_phase(z: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = z.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}
