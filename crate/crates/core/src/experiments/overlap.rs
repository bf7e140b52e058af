//! Overlaps between coherent states: the power law in `ε − ε′` and the
//! orthonormality and completeness of fixed-ε families labelled by ξ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Bound, ExperimentReport};
use crate::error::{LabError, Result};
use crate::numerics::quadrature::{choose_contour, contour_integral, cubic_phase_integral};
use crate::numerics::{cubic_phase_limit, fourier, Grid, PhysParams, Representation};
use crate::special::ai;
use crate::states::{gaussian_packet, momentum_prefactor, perelomov_state, representation_ratio, CoherentParams, GaussianParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OverlapConfig {
    pub eps_ref: f64,
    pub eps_list: Vec<f64>,
    pub xi: f64,
    pub t: f64,
    /// Other ξ values for which the overlaps are recomputed to show ξ-independence.
    pub xi_variants: Vec<f64>,
    pub exponent_tol: f64,
    pub xi_tol: f64,
    /// Bound on the relative disagreement between the extrapolated and the undamped overlaps.
    pub extrapolation_tol: f64,
}

impl Default for OverlapConfig {
    fn default() -> Self {
        Self {
            eps_ref: 1.0,
            eps_list: vec![1.5, 2.0, 3.0, 5.0, 9.0],
            xi: 0.0,
            t: 0.0,
            xi_variants: vec![1.7, -3.0],
            exponent_tol: 0.01,
            xi_tol: 1e-8,
            extrapolation_tol: 1e-6,
        }
    }
}

fn complex_phase(c: &CoherentParams, p: Complex64, phys: &PhysParams) -> Complex64 {
    let m = phys.mass;
    (p * c.xi / m - p * p * (c.t / (2.0 * m)) - p * p * p * (c.eps / (6.0 * m * m))) / phys.hbar
}

/// `⟨ε_ref, ξ; t | ε, ξ; t⟩` integrated along a complex contour with each state's
/// phase evaluated separately.
fn overlap_by_contour(reference: &CoherentParams, other: &CoherentParams, phys: &PhysParams) -> Result<Complex64> {
    let c3 = -(other.eps - reference.eps) / (6.0 * phys.mass * phys.mass * phys.hbar);
    let contour = choose_contour(c3, 0.0, 0.0, 0.0)?;
    let i = Complex64::i();
    let r = contour_integral(
        |p| (i * complex_phase(other, p, phys)).exp() * (-i * complex_phase(reference, p, phys)).exp(),
        &contour,
    )?;
    Ok(r.value * momentum_prefactor(phys).powi(2))
}

/// Fitted slope of `ln|overlap|` against `ln|ε − ε_ref|`, the measured constant in
/// front of `Ai(0)(2ħm²/|ε−ε′|)^(1/3)`, and ξ-independence of the overlaps.
pub fn overlap_scan(cfg: &OverlapConfig, phys: &PhysParams) -> Result<ExperimentReport> {
    phys.validate()?;
    if cfg.eps_list.len() < 2 {
        return Err(LabError::Parameter("overlap_scan needs at least two eps values".into()));
    }
    let (m, hbar) = (phys.mass, phys.hbar);
    let c2 = momentum_prefactor(phys).powi(2);
    let ai0 = ai(0.0)?;
    let reference = CoherentParams::new(cfg.eps_ref, cfg.xi, cfg.t);
    let mut rep = ExperimentReport::new("overlap_scan", cfg);
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    let (mut worst_extrap, mut worst_xi) = (0.0f64, 0.0f64);
    let mut prefactors = Vec::new();
    for &eps in &cfg.eps_list {
        let d = eps - cfg.eps_ref;
        if d == 0.0 {
            return Err(LabError::Parameter("eps values must differ from eps_ref".into()));
        }
        let c3 = -d / (6.0 * m * m * hbar);
        let limit = cubic_phase_limit(c3, 0.0, 0.0)?;
        let ov = limit.value * c2;
        let undamped = cubic_phase_integral(c3, 0.0, 0.0, 0.0)? * c2;
        worst_extrap = worst_extrap.max((ov - undamped).norm() / undamped.norm());
        lx.push(d.abs().ln());
        ly.push(ov.norm().ln());
        prefactors.push(ov.norm() / (ai0 * (2.0 * hbar * m * m / d.abs()).cbrt()));

        let base = overlap_by_contour(&reference, &CoherentParams::new(eps, cfg.xi, cfg.t), phys)?;
        for &xi in &cfg.xi_variants {
            let a = CoherentParams::new(cfg.eps_ref, xi, cfg.t);
            let b = CoherentParams::new(eps, xi, cfg.t);
            let v = overlap_by_contour(&a, &b, phys)?;
            worst_xi = worst_xi.max((v - base).norm() / base.norm());
        }
    }
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::Parameter("eps values must give at least two distinct separations".into()));
    }
    let slope = sxy / sxx;
    let mean_pref = prefactors.iter().sum::<f64>() / n;
    let pref_spread = prefactors.iter().map(|p| (p - mean_pref).abs()).fold(0.0, f64::max) / mean_pref;
    let expected_pref = 2.0 * std::f64::consts::PI * c2;
    rep.check("exponent", slope, Bound::Near { target: -1.0 / 3.0, tol: cfg.exponent_tol });
    rep.check("xi_dependence", worst_xi, Bound::Below(cfg.xi_tol));
    rep.check("extrapolation_error", worst_extrap, Bound::Below(cfg.extrapolation_tol));
    rep.info("measured_prefactor", mean_pref);
    rep.check("prefactor_spread", pref_spread, Bound::Below(1e-6));
    rep.info("prefactor_times_2pi_hbar2_m", mean_pref * 2.0 * std::f64::consts::PI * hbar * hbar * m);
    rep.check("prefactor_over_2pi_c_squared", mean_pref / expected_pref, Bound::NearRel { target: 1.0, rel: 1e-6 });
    rep.push_series("ln_abs_overlap", lx, ly);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BasisConfig {
    pub eps: f64,
    pub t: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    /// Lattice spacing in ξ; must be a whole multiple of `m dx` (the default).
    pub xi_step: Option<f64>,
    pub probe: GaussianParams,
    pub diagonal_tol: f64,
    pub min_suppression: f64,
    pub reconstruction_tol: f64,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            eps: 1.0,
            t: 0.0,
            xi_min: -20.0,
            xi_max: 20.0,
            xi_step: None,
            probe: GaussianParams { x0: 0.0, p0: 0.0, sigma: 1.0 },
            diagonal_tol: 0.02,
            min_suppression: 1e3,
            reconstruction_tol: 1e-3,
        }
    }
}

/// Gram matrix of a ξ-lattice of fixed-ε states, taken in the momentum
/// representation over the whole lattice, and reconstruction of a Gaussian
/// probe from its coefficients. Diagonal entries are calibrated by the
/// measured normalization `2πħ` before comparison with `1/Δξ`.
pub fn basis_orthonormality(cfg: &BasisConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let unit = phys.mass * grid.dx();
    let step = cfg.xi_step.unwrap_or(unit);
    let ratio = step / unit;
    if step.is_nan() || step <= 0.0 || (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
        return Err(LabError::Unresolved(format!("xi_step {step} is not a whole multiple of m dx = {unit}")));
    }
    if cfg.xi_max.is_nan() || cfg.xi_min.is_nan() || cfg.xi_max <= cfg.xi_min {
        return Err(LabError::Parameter("xi_max must exceed xi_min".into()));
    }
    let count = ((cfg.xi_max - cfg.xi_min) / step).floor() as usize + 1;
    let states: Vec<Vec<Complex64>> = (0..count)
        .map(|k| {
            let c = CoherentParams::new(cfg.eps, cfg.xi_min + k as f64 * step, cfg.t);
            perelomov_state(&c, Representation::Momentum, grid, phys).map(|f| f.into_amplitudes())
        })
        .collect::<Result<_>>()?;
    let dp = grid.dp();
    let calib = representation_ratio(phys).powi(2);
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() * dp;
    let (mut diag_err, mut diag_max, mut off_max) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..count {
        for j in i..count {
            let g = dot(&states[i], &states[j]);
            if i == j {
                diag_err = diag_err.max((g.re * step * calib - 1.0).abs());
                diag_max = diag_max.max(g.norm());
            } else {
                off_max = off_max.max(g.norm());
            }
        }
    }
    let probe = fourier(&gaussian_packet(&cfg.probe, grid, phys)?, Representation::Momentum)?;
    let target = probe.amplitudes();
    let mut rec = vec![Complex64::default(); grid.n_points()];
    for s in &states {
        let c = dot(s, target) * step * calib;
        for (r, a) in rec.iter_mut().zip(s) {
            *r += c * a;
        }
    }
    let num: f64 = rec.iter().zip(target).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = target.iter().map(|b| b.norm_sqr()).sum();
    let mut rep = ExperimentReport::new("basis_orthonormality", cfg);
    rep.info("lattice_size", count as f64);
    rep.info("xi_step", step);
    rep.check("diagonal_error", diag_err, Bound::Below(cfg.diagonal_tol));
    let suppression = if off_max == 0.0 { f64::MAX } else { diag_max / off_max };
    rep.check("offdiagonal_suppression", suppression, Bound::Above(cfg.min_suppression));
    rep.info("max_offdiagonal_times_step", off_max * step * calib);
    rep.check("reconstruction_error", (num / den).sqrt(), Bound::Below(cfg.reconstruction_tol));
    Ok(rep)
}
