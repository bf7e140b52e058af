//! Dynamics of the coherent states: uniform acceleration, rigid transport of
//! the density, the evolution identity, the Berry–Balazs trajectory, and the
//! action of the cubic displacement on the acceleration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{density_peak, fit_quadratic, prepared, window_or_central, wrap_phase, Bound, ExperimentReport};
use crate::error::{LabError, Result};
use crate::numerics::{
    fidelity, inner_product, taper_interior, Grid, PhysParams, Representation, WaveField, Window,
};
use crate::operators::{apply_displacement, boost, free_evolve, translate, BoostParams};
use crate::states::{
    berry_balazs_eps, berry_balazs_initial, gaussian_packet, perelomov_state, CoherentParams, GaussianParams,
};

fn position_build(c: &CoherentParams, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    prepared(perelomov_state(c, Representation::Position, grid, phys)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AccelerationConfig {
    pub state: CoherentParams,
    pub taus: Vec<f64>,
    /// Range searched for the density maximum; defaults to the untapered interior.
    pub search: Option<(f64, f64)>,
    /// Relative tolerance on `|a| = 1/|ε|`.
    pub rel_tol: f64,
}

impl Default for AccelerationConfig {
    fn default() -> Self {
        Self {
            state: CoherentParams::new(1.0, 0.0, 0.0),
            taus: (0..=6).map(|i| 0.5 * i as f64).collect(),
            search: None,
            rel_tol: 0.01,
        }
    }
}

/// Tracks the density maximum of `|ε, ξ; t⟩` under free evolution and fits
/// `x*(τ) = x0 + v τ + ½ a τ²`. The signed acceleration is compared with `−1/ε`.
pub fn acceleration_fit(cfg: &AccelerationConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let c = cfg.state;
    if c.eps == 0.0 {
        return Err(LabError::Parameter("acceleration needs eps != 0".into()));
    }
    let psi = position_build(&c, grid, phys)?;
    let (lo, hi) = cfg.search.unwrap_or_else(|| taper_interior(&psi));
    let mut peaks = Vec::with_capacity(cfg.taus.len());
    for &tau in &cfg.taus {
        let evolved = if tau == 0.0 { psi.clone() } else { free_evolve(&psi, tau, phys)? };
        peaks.push(density_peak(&evolved, lo, hi)?);
    }
    let (coef, rms) = fit_quadratic(&cfg.taus, &peaks)?;
    let a = 2.0 * coef[2];
    let expected = -1.0 / c.eps;
    let span = peaks.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - peaks.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut rep = ExperimentReport::new("acceleration_fit", cfg);
    rep.info("acceleration", a);
    rep.info("expected_acceleration", expected);
    rep.check("abs_acceleration", a.abs(), Bound::NearRel { target: expected.abs(), rel: cfg.rel_tol });
    rep.info("relative_error", (a - expected).abs() / expected.abs());
    rep.info("fit_rms", rms);
    rep.info("x0", coef[0]);
    rep.info("velocity", coef[1]);
    rep.check("span_over_dx", span / grid.dx(), Bound::Above(20.0));
    rep.push_series("x_peak", cfg.taus.clone(), peaks);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ShapeProbe {
    Coherent(CoherentParams),
    Gaussian(GaussianParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShapeConfig {
    pub probe: ShapeProbe,
    /// Inverse acceleration defining the reference shift `−τ²/2ε`; defaults to the probe's own ε.
    pub eps: Option<f64>,
    pub tau: f64,
    pub window: Option<Window>,
    pub tol: f64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        Self { probe: ShapeProbe::Coherent(CoherentParams::new(1.0, 0.0, 0.0)), eps: None, tau: 1.0, window: None, tol: 1e-8 }
    }
}

fn weighted_l1(a: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(w).map(|(x, y)| x.abs() * y).sum()
}

/// `D = ‖ρ(τ) − ρ_ref‖₁,w / ‖ρ(0)‖₁,w` with `ρ_ref` the initial density translated
/// spectrally by `−τ²/2ε`.
pub(crate) fn distortion(psi0: &WaveField, evolved: &WaveField, shift: f64, w: &Window) -> Result<f64> {
    let reference = if shift == 0.0 { psi0.clone() } else { translate(psi0, shift) };
    let weights = w.weights(psi0);
    let diff: Vec<f64> = evolved.density().iter().zip(reference.density()).map(|(a, b)| a - b).collect();
    Ok(weighted_l1(&diff, &weights) / weighted_l1(&psi0.density(), &weights))
}

pub fn shape_distortion(cfg: &ShapeConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let (psi, eps) = match cfg.probe {
        ShapeProbe::Coherent(c) => (position_build(&c, grid, phys)?, cfg.eps.unwrap_or(c.eps)),
        ShapeProbe::Gaussian(g) => {
            let eps = cfg.eps.ok_or_else(|| LabError::Parameter("a Gaussian probe needs an explicit eps".into()))?;
            (gaussian_packet(&g, grid, phys)?, eps)
        }
    };
    if eps == 0.0 {
        return Err(LabError::Parameter("shape distortion needs eps != 0".into()));
    }
    let w = window_or_central(cfg.window, &psi)?;
    let shift = -cfg.tau * cfg.tau / (2.0 * eps);
    let evolved = if cfg.tau == 0.0 { psi.clone() } else { free_evolve(&psi, cfg.tau, phys)? };
    let d = distortion(&psi, &evolved, shift, &w)?;
    let mut rep = ExperimentReport::new("shape_distortion", cfg);
    rep.check("distortion", d, Bound::Below(cfg.tol));
    rep.info("shift", shift);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionConfig {
    pub eps: f64,
    pub xi: f64,
    pub tau: f64,
    /// Omit the `e^(−imτ³/3ħε²)` factor (negative control).
    pub drop_cubic_phase: bool,
    pub window: Option<Window>,
    pub infidelity_tol: f64,
    pub phase_tol: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self { eps: 1.0, xi: 0.0, tau: 0.5, drop_cubic_phase: false, window: None, infidelity_tol: 1e-8, phase_tol: 1e-6 }
    }
}

/// Compares `e^(−iτH/ħ)|ε,ξ;0⟩` with
/// `e^(−iτξ/ħε) e^(−imτ³/3ħε²) e^(iτK(0)/ħε) e^(iτ²p/2ħε)|ε,ξ;0⟩`.
pub fn evolution_equivalence(cfg: &EvolutionConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    if cfg.eps == 0.0 {
        return Err(LabError::Parameter("the evolution identity needs eps != 0".into()));
    }
    let (m, hbar) = (phys.mass, phys.hbar);
    let (eps, tau) = (cfg.eps, cfg.tau);
    let psi = position_build(&CoherentParams::new(eps, cfg.xi, 0.0), grid, phys)?;
    let w = window_or_central(cfg.window, &psi)?;
    let cubic = m * tau.powi(3) / (3.0 * hbar * eps * eps);
    let (lhs, rhs) = if tau == 0.0 {
        (psi.clone(), psi.clone())
    } else {
        let lhs = free_evolve(&psi, tau, phys)?;
        let shifted = translate(&psi, -tau * tau / (2.0 * eps));
        let boosted = boost(&shifted, &BoostParams { v: tau / eps, t: 0.0 }, phys)?;
        let mut phase = -tau * cfg.xi / (hbar * eps);
        if !cfg.drop_cubic_phase {
            phase -= cubic;
        }
        (lhs, boosted.scale(Complex64::from_polar(1.0, phase)))
    };
    let (f, _) = fidelity(&lhs, &rhs, &w)?;
    let discrepancy = wrap_phase(inner_product(&lhs, &rhs, &w)?.arg());
    let mut rep = ExperimentReport::new("evolution_equivalence", cfg);
    rep.check("infidelity", 1.0 - f, Bound::Below(cfg.infidelity_tol));
    rep.check("phase_discrepancy", discrepancy.abs(), Bound::Below(cfg.phase_tol));
    rep.info("signed_phase_discrepancy", discrepancy);
    rep.info("cubic_phase", cubic);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BerryBalazsConfig {
    pub b: f64,
    pub times: Vec<f64>,
    /// Range searched for the density maximum; defaults to the untapered interior.
    pub search: Option<(f64, f64)>,
    /// Window for the distortion metric; defaults to a Tukey window around the main lobe.
    pub window: Option<Window>,
    pub rel_tol: f64,
    pub distortion_tol: f64,
}

impl Default for BerryBalazsConfig {
    fn default() -> Self {
        Self {
            b: 1.0,
            times: (0..=8).map(|i| 0.25 * i as f64).collect(),
            search: None,
            window: None,
            rel_tol: 0.01,
            distortion_tol: 1e-8,
        }
    }
}

/// Evolves `Ai(Bx/ħ^(2/3))`, fits the quadratic drift of its density maximum and
/// compares the coefficient with `B³/4m²`; also measures the rigid-shape
/// distortion at every time.
pub fn berry_balazs_trajectory(cfg: &BerryBalazsConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let psi = prepared(berry_balazs_initial(cfg.b, grid, phys)?)?;
    let (lo, hi) = cfg.search.unwrap_or_else(|| taper_interior(&psi));
    let coefficient = cfg.b.powi(3) / (4.0 * phys.mass * phys.mass);
    let x_start = density_peak(&psi, lo, hi)?;
    let w = match cfg.window {
        Some(w) => w,
        None => {
            let l = grid.length();
            let (ilo, ihi) = taper_interior(&psi);
            let s = cfg.b.signum();
            let (a, b) = (x_start - s * 0.2 * l, x_start + s * 0.1 * l);
            Window::default().on(a.min(b).max(ilo), a.max(b).min(ihi))
        }
    };
    w.validate()?;
    let mut peaks = Vec::new();
    let mut worst = 0.0f64;
    for &t in &cfg.times {
        let evolved = if t == 0.0 { psi.clone() } else { free_evolve(&psi, t, phys)? };
        peaks.push(density_peak(&evolved, lo, hi)?);
        worst = worst.max(distortion(&psi, &evolved, coefficient * t * t, &w)?);
    }
    let (coef, rms) = fit_quadratic(&cfg.times, &peaks)?;
    let eps = berry_balazs_eps(cfg.b, phys);
    let mut rep = ExperimentReport::new("berry_balazs_trajectory", cfg);
    rep.check("coefficient", coef[2], Bound::NearRel { target: coefficient, rel: cfg.rel_tol });
    rep.info("expected_coefficient", coefficient);
    rep.info("relative_error", (coef[2] - coefficient).abs() / coefficient.abs());
    rep.info("fit_rms", rms);
    rep.info("velocity", coef[1]);
    rep.check("max_distortion", worst, Bound::Below(cfg.distortion_tol));
    rep.info("equivalent_eps", eps);
    // the coherent state with ε = −2m²/B³ drifts by −t²/2ε
    rep.check("coherent_map_coefficient", -1.0 / (2.0 * eps), Bound::NearRel { target: coefficient, rel: 1e-12 });
    rep.push_series("x_peak", cfg.times.clone(), peaks);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisplacementConfig {
    pub kappa: f64,
    pub delta: f64,
    pub xi: f64,
    pub window: Option<Window>,
    pub tol: f64,
}

impl Default for DisplacementConfig {
    fn default() -> Self {
        Self { kappa: 1.0, delta: 0.5, xi: 0.0, window: None, tol: 1e-10 }
    }
}

/// Applies `U(δ, 0, 0)` to the `ε = κ` state and compares with the `ε = κ + δ` state.
pub fn displacement_composition(cfg: &DisplacementConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let start = position_build(&CoherentParams::new(cfg.kappa, cfg.xi, 0.0), grid, phys)?;
    let target = position_build(&CoherentParams::new(cfg.kappa + cfg.delta, cfg.xi, 0.0), grid, phys)?;
    let moved = apply_displacement(&start, &CoherentParams::new(cfg.delta, 0.0, 0.0), phys)?;
    let w = window_or_central(cfg.window, &start)?;
    let (f, phase) = fidelity(&moved, &target, &w)?;
    let mut rep = ExperimentReport::new("displacement_composition", cfg);
    rep.check("infidelity", 1.0 - f, Bound::Below(cfg.tol));
    rep.info("phase", phase);
    rep.info("new_acceleration", -1.0 / (cfg.kappa + cfg.delta));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;

    fn nat() -> PhysParams {
        PhysParams::default()
    }

    #[test]
    fn shape_is_rigid_and_gaussian_is_not() {
        let g = make_grid(4096, -64.0, 64.0).unwrap();
        let r = shape_distortion(&ShapeConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:?}", r.metrics);
        let zero = shape_distortion(&ShapeConfig { tau: 0.0, ..Default::default() }, &g, &nat()).unwrap();
        assert_eq!(zero.metric("distortion"), Some(0.0));
        let gauss = ShapeConfig {
            probe: ShapeProbe::Gaussian(GaussianParams { x0: 0.0, p0: 0.0, sigma: 0.5 }),
            eps: Some(1.0),
            ..Default::default()
        };
        let r = shape_distortion(&gauss, &g, &nat()).unwrap();
        assert!(!r.pass);
        assert!(r.metric("distortion").unwrap() > 0.1);
    }

    #[test]
    fn evolution_identity_and_dropped_phase() {
        let g = make_grid(4096, -64.0, 64.0).unwrap();
        let cfg = EvolutionConfig { eps: 2.0, tau: 0.5, xi: 0.7, ..Default::default() };
        let r = evolution_equivalence(&cfg, &g, &nat()).unwrap();
        assert!(r.pass, "{:?}", r.metrics);
        let dropped = evolution_equivalence(&EvolutionConfig { drop_cubic_phase: true, ..cfg }, &g, &nat()).unwrap();
        assert!(!dropped.pass);
        let expect = 0.5f64.powi(3) / (3.0 * 4.0);
        assert!((dropped.metric("signed_phase_discrepancy").unwrap() - expect).abs() < 1e-8);
        let still = evolution_equivalence(&EvolutionConfig { tau: 0.0, ..cfg }, &g, &nat()).unwrap();
        assert_eq!(still.metric("infidelity"), Some(0.0));
    }

    #[test]
    fn displacement_changes_acceleration_family() {
        let g = make_grid(8192, -128.0, 128.0).unwrap();
        let r = displacement_composition(&DisplacementConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:?}", r.metrics);
    }

    #[test]
    fn acceleration_rejects_escaping_peak() {
        let g = make_grid(2048, -16.0, 16.0).unwrap();
        let cfg = AccelerationConfig { taus: vec![0.0, 2.0, 4.0, 6.0], ..Default::default() };
        assert!(matches!(acceleration_fit(&cfg, &g, &nat()), Err(LabError::WindowEscape(_))));
    }
}
