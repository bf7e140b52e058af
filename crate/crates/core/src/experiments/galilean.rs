//! Galilean structure: conservation of the boost generator, covariance of free
//! evolution under boosts, the commutator algebra, and the disentangled boost.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{prepared, window_or_central, wrap_phase, Bound, ExperimentReport, ShapeProbe};
use crate::error::{LabError, Result};
use crate::numerics::{
    edge_leakage, fidelity, inner_product, relative_distance, windowed_norm, Grid, PhysParams, Representation, WaveField,
    Window,
};
use crate::operators::{apply_generator, boost, commutator, free_evolve, zassenhaus_rhs, BoostParams, GeneratorKind};
use crate::states::{gaussian_packet, perelomov_state, CoherentParams, GaussianParams};

fn probe_field(probe: &ShapeProbe, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    match probe {
        ShapeProbe::Gaussian(g) => gaussian_packet(g, grid, phys),
        ShapeProbe::Coherent(c) => prepared(perelomov_state(c, Representation::Position, grid, phys)?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KExpectationConfig {
    pub probe: GaussianParams,
    /// Optional boost applied to the probe before evolution.
    pub boost: Option<BoostParams>,
    pub taus: Vec<f64>,
    pub tol: f64,
}

impl Default for KExpectationConfig {
    fn default() -> Self {
        Self {
            probe: GaussianParams { x0: 1.5, p0: 0.8, sigma: 1.0 },
            boost: None,
            taus: (0..=8).map(|i| 0.5 * i as f64).collect(),
            tol: 1e-10,
        }
    }
}

fn k_expectation(field: &WaveField, phys: &PhysParams) -> Result<f64> {
    let w = Window::rect();
    let k = apply_generator(GeneratorKind::K { t: field.time() }, field, phys)?;
    Ok(inner_product(field, &k, &w)?.re / inner_product(field, field, &w)?.re)
}

/// `max_τ |⟨K(τ)⟩ − ⟨K(0)⟩|` along free evolution of a Gaussian probe,
/// with `K(t)` evaluated at the field's own time stamp.
pub fn k_expectation_series(cfg: &KExpectationConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let mut psi = gaussian_packet(&cfg.probe, grid, phys)?;
    if let Some(b) = &cfg.boost {
        psi = boost(&psi, b, phys)?;
    }
    let k0 = k_expectation(&psi, phys)?;
    let mut values = Vec::with_capacity(cfg.taus.len());
    let mut leak = 0.0f64;
    for &tau in &cfg.taus {
        let f = free_evolve(&psi, tau, phys)?;
        leak = leak.max(edge_leakage(&f));
        values.push(k_expectation(&f, phys)?);
    }
    if leak > 1e-10 {
        return Err(LabError::WindowEscape(format!("probe reaches the grid edge (leakage {leak:e})")));
    }
    let drift = values.iter().map(|k| (k - k0).abs()).fold(0.0, f64::max);
    let mut rep = ExperimentReport::new("k_expectation_series", cfg);
    rep.check("max_drift", drift, Bound::Below(cfg.tol));
    rep.info("k0", k0);
    if cfg.boost.is_none() {
        rep.check("k0_minus_closed_form", (k0 + phys.mass * cfg.probe.x0).abs(), Bound::Below(1e-8));
    }
    rep.push_series("k_expectation", cfg.taus.clone(), values);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoostCovarianceConfig {
    pub probe: ShapeProbe,
    pub v: f64,
    pub tau: f64,
    pub window: Option<Window>,
    pub tol: f64,
}

impl Default for BoostCovarianceConfig {
    fn default() -> Self {
        Self {
            probe: ShapeProbe::Gaussian(GaussianParams { x0: 0.0, p0: 0.0, sigma: 1.0 }),
            v: 1.0,
            tau: 1.0,
            window: None,
            tol: 1e-8,
        }
    }
}

/// Relative windowed distance between `boost_{t0+τ}(evolve_τ ψ)` and `evolve_τ(boost_{t0} ψ)`.
pub fn boost_covariance_residual(cfg: &BoostCovarianceConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let psi = probe_field(&cfg.probe, grid, phys)?;
    let w = match cfg.probe {
        ShapeProbe::Gaussian(_) => cfg.window.unwrap_or_else(Window::rect),
        ShapeProbe::Coherent(_) => window_or_central(cfg.window, &psi)?,
    };
    let t0 = psi.time();
    let a = boost(&free_evolve(&psi, cfg.tau, phys)?, &BoostParams { v: cfg.v, t: t0 + cfg.tau }, phys)?;
    let b = free_evolve(&boost(&psi, &BoostParams { v: cfg.v, t: t0 }, phys)?, cfg.tau, phys)?;
    let leak = edge_leakage(&a).max(edge_leakage(&b));
    if matches!(cfg.probe, ShapeProbe::Gaussian(_)) && leak > 1e-10 {
        return Err(LabError::WindowEscape(format!("boosted probe reaches the grid edge (leakage {leak:e})")));
    }
    let r = if a == b { 0.0 } else { relative_distance(&a, &b, &w)? };
    let mut rep = ExperimentReport::new("boost_covariance_residual", cfg);
    rep.check("residual", r, Bound::Below(cfg.tol));
    rep.info("edge_leakage", leak);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CommutatorConfig {
    pub probe: GaussianParams,
    /// Time parameter of the boost generator in the `[K(t), H]` row.
    pub k_time: f64,
    pub tol: f64,
}

impl Default for CommutatorConfig {
    fn default() -> Self {
        Self { probe: GaussianParams { x0: 0.3, p0: 0.5, sigma: 1.0 }, k_time: 0.7, tol: 1e-7 }
    }
}

fn generator_name(g: GeneratorKind) -> String {
    match g {
        GeneratorKind::X => "x".into(),
        GeneratorKind::P => "p".into(),
        GeneratorKind::H => "H".into(),
        GeneratorKind::K { .. } => "K".into(),
        GeneratorKind::PPower { n } => format!("p{n}/{n}!"),
    }
}

/// Brackets of `{x, p, p²/2, p³/6}` (both closed algebras) plus `[x, H]` and
/// `[K(t), H]`, applied to a Gaussian probe and compared with their closed forms.
pub fn commutator_table(cfg: &CommutatorConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    use GeneratorKind::*;
    let psi = gaussian_packet(&cfg.probe, grid, phys)?;
    let w = Window::rect();
    let ih = Complex64::new(0.0, phys.hbar);
    let p2 = PPower { n: 2 };
    let p3 = PPower { n: 3 };
    // (A, B, C, factor): [A, B]ψ = factor · Cψ, with C = None for vanishing brackets
    let rows: [(GeneratorKind, GeneratorKind, Option<GeneratorKind>, Complex64); 8] = [
        (X, P, None, ih),
        (X, p2, Some(P), ih),
        (X, p3, Some(p2), ih),
        (P, p2, None, Complex64::default()),
        (P, p3, None, Complex64::default()),
        (p2, p3, None, Complex64::default()),
        (X, H, Some(P), ih / phys.mass),
        (K { t: cfg.k_time }, H, Some(P), -ih),
    ];
    let mut rep = ExperimentReport::new("commutator_table", cfg);
    for (a, b, c, factor) in rows {
        let lhs = commutator(a, b, &psi, phys)?;
        let name = format!("[{},{}]", generator_name(a), generator_name(b));
        let err = if factor == Complex64::default() {
            let scale = windowed_norm(&apply_generator(a, &apply_generator(b, &psi, phys)?, phys)?, &w)?;
            windowed_norm(&lhs, &w)? / scale
        } else {
            let rhs = match c {
                Some(g) => apply_generator(g, &psi, phys)?,
                None => psi.clone(),
            }
            .scale(factor);
            relative_distance(&lhs, &rhs, &w)?
        };
        rep.check(&name, err, Bound::Below(cfg.tol));
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZassenhausConfig {
    pub state: CoherentParams,
    pub v: f64,
    pub window: Option<Window>,
    pub infidelity_tol: f64,
    pub phase_tol: f64,
}

impl Default for ZassenhausConfig {
    fn default() -> Self {
        Self { state: CoherentParams::new(1.0, 0.5, 0.3), v: 0.4, window: None, infidelity_tol: 1e-8, phase_tol: 1e-6 }
    }
}

/// On an eigenstate of `K(t) + εH`, the disentangled product must act as the
/// phase `e^(ivξ/ħ)`.
pub fn zassenhaus_check(cfg: &ZassenhausConfig, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
    let c = cfg.state;
    let psi = prepared(perelomov_state(&c, Representation::Position, grid, phys)?)?;
    let w = window_or_central(cfg.window, &psi)?;
    let out = zassenhaus_rhs(&psi, cfg.v, c.eps, c.t, phys)?;
    let expected = psi.scale(Complex64::from_polar(1.0, cfg.v * c.xi / phys.hbar));
    let (f, phase) = fidelity(&expected, &out, &w)?;
    let mut rep = ExperimentReport::new("zassenhaus_check", cfg);
    rep.check("infidelity", 1.0 - f, Bound::Below(cfg.infidelity_tol));
    rep.check("phase_discrepancy", wrap_phase(phase).abs(), Bound::Below(cfg.phase_tol));
    rep.info("relative_distance", relative_distance(&out, &expected, &w)?);
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
    fn k_is_conserved() {
        let g = make_grid(1024, -40.0, 40.0).unwrap();
        let r = k_expectation_series(&KExpectationConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:#?}", r.metrics);
        let centred = KExpectationConfig { probe: GaussianParams { x0: 0.0, p0: 0.8, sigma: 1.0 }, ..Default::default() };
        let r = k_expectation_series(&centred, &g, &nat()).unwrap();
        assert!(r.metric("k0").unwrap().abs() < 1e-12);
        let boosted = KExpectationConfig { boost: Some(BoostParams { v: 0.5, t: 0.0 }), ..Default::default() };
        assert!(k_expectation_series(&boosted, &g, &nat()).unwrap().pass);
    }

    #[test]
    fn boost_commutes_with_evolution() {
        let g = make_grid(1024, -40.0, 40.0).unwrap();
        let r = boost_covariance_residual(&BoostCovarianceConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:#?}", r.metrics);
        let still = BoostCovarianceConfig { v: 0.0, ..Default::default() };
        assert_eq!(boost_covariance_residual(&still, &g, &nat()).unwrap().metric("residual"), Some(0.0));
        let g = make_grid(4096, -64.0, 64.0).unwrap();
        let airy = BoostCovarianceConfig { probe: ShapeProbe::Coherent(CoherentParams::new(1.0, 0.0, 0.0)), ..Default::default() };
        let r = boost_covariance_residual(&airy, &g, &nat()).unwrap();
        assert!(r.pass, "{:#?}", r.metrics);
    }

    #[test]
    fn commutators() {
        let g = make_grid(1024, -20.0, 20.0).unwrap();
        let r = commutator_table(&CommutatorConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:#?}", r.metrics);
        assert_eq!(r.metrics.len(), 8);
    }

    #[test]
    fn disentangled_boost_on_eigenstate() {
        let g = make_grid(4096, -64.0, 64.0).unwrap();
        let r = zassenhaus_check(&ZassenhausConfig::default(), &g, &nat()).unwrap();
        assert!(r.pass, "{:#?}", r.metrics);
    }
}
