//! Static properties of the coherent states: the eigenrelation and the
//! agreement of the two representations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{prepared, window_or_central, Bound, ExperimentReport};
use crate::error::Result;
use crate::numerics::{fourier, inner_product, windowed_norm, Grid, PhysParams, Representation, WaveField, Window};
use crate::operators::{apply_generator, GeneratorKind};
use crate::states::{perelomov_momentum_banded, perelomov_state, representation_ratio, CoherentParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenrelationConfig {
    pub state: CoherentParams,
    /// Eigenvalue tested against; `None` means the state's own ξ.
    pub eigenvalue: Option<f64>,
    pub window: Option<Window>,
    pub tol: f64,
}

impl Default for EigenrelationConfig {
    fn default() -> Self {
        Self { state: CoherentParams::new(1.0, 0.0, 0.0), eigenvalue: None, window: None, tol: 1e-6 }
    }
}

/// `r = ‖(K(t) + εH − λ)ψ‖_w / ‖ψ‖_w` for `ψ = |ε, ξ; t⟩`, with `λ = ξ` unless overridden.
///
/// For `ε = 0` the state is the ξ-eigenstate of `K(t)` (requires `t ≠ 0`).
pub fn eigenrelation_residual(cfg: &EigenrelationConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let c = cfg.state;
    let psi = prepared(perelomov_state(&c, Representation::Position, grid, phys)?)?;
    let w = window_or_central(cfg.window, &psi)?;
    let lambda = cfg.eigenvalue.unwrap_or(c.xi);
    let k = apply_generator(GeneratorKind::K { t: c.t }, &psi, phys)?;
    let h = apply_generator(GeneratorKind::H, &psi, phys)?;
    let lhs = k.axpy(Complex64::new(c.eps, 0.0), &h)?.axpy(Complex64::new(-lambda, 0.0), &psi)?;
    let r = windowed_norm(&lhs, &w)? / windowed_norm(&psi, &w)?;
    let mut rep = ExperimentReport::new("eigenrelation_residual", cfg);
    rep.check("residual", r, Bound::Below(cfg.tol));
    rep.info("eigenvalue", lambda);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrosscheckConfig {
    pub eps_list: Vec<f64>,
    pub xi: f64,
    pub t: f64,
    /// Region in which the two builds are compared.
    pub span: (f64, f64),
    pub tol: f64,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        Self { eps_list: vec![0.5, 1.0, 2.0], xi: 0.0, t: 0.0, span: (-32.0, 32.0), tol: 1e-6 }
    }
}

fn max_relative_gap(a: &WaveField, b: &WaveField, span: (f64, f64)) -> f64 {
    let (mut worst, mut peak) = (0.0f64, 0.0f64);
    for ((x, u), v) in a.grid().x_values().into_iter().zip(a.amplitudes()).zip(b.amplitudes()) {
        if x >= span.0 && x <= span.1 {
            worst = worst.max((u - v).norm());
            peak = peak.max(v.norm());
        }
    }
    worst / peak
}

/// Transforms the band-limited momentum build to position and compares it with
/// the Airy closed form sample by sample inside `span`, relative to the largest
/// closed-form amplitude there. Also fits the normalization constant relating
/// the two representations and reports it next to `√(2πħ)`.
pub fn representation_crosscheck(cfg: &CrosscheckConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("representation_crosscheck", cfg);
    let lam = representation_ratio(phys);
    rep.info("lambda_expected", lam);
    let w = Window::rect().on(cfg.span.0, cfg.span.1);
    for &eps in &cfg.eps_list {
        let c = CoherentParams::new(eps, cfg.xi, cfg.t);
        let band = perelomov_momentum_banded(&c, grid, phys)?;
        let from_p = fourier(&band, Representation::Position)?;
        let closed = perelomov_state(&c, Representation::Position, grid, phys)?;
        let fitted = inner_product(&from_p, &closed, &w)? / inner_product(&from_p, &from_p, &w)?;
        let err = max_relative_gap(&from_p.scale(Complex64::new(lam, 0.0)), &closed, cfg.span);
        rep.check(&format!("max_rel_error[eps={eps}]"), err, Bound::Below(cfg.tol));
        rep.info(&format!("lambda_fitted[eps={eps}]"), fitted.norm());
        rep.info(&format!("lambda_phase[eps={eps}]"), fitted.arg());
    }
    Ok(rep)
}
