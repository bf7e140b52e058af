//! Generators and unitaries of the free-particle Galilean algebra acting on
//! [`WaveField`]s. Everything is diagonal in one representation, so each
//! operation costs at most a pair of FFTs and is exact on the lattice.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::numerics::{PhysParams, Representation, WaveField};
use crate::states::{momentum_phase, CoherentParams};

/// Hermitian generators: position, momentum, kinetic energy, the boost
/// generator `K(t) = t p − m x`, and the monomials `pⁿ/n!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    X,
    P,
    H,
    K { t: f64 },
    PPower { n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostParams {
    pub v: f64,
    pub t: f64,
}

fn in_rep(field: &WaveField, rep: Representation, f: impl Fn(f64, Complex64) -> Complex64) -> WaveField {
    field.to_rep(rep).map_pointwise(f).to_rep(field.rep())
}

fn momentum_multiply(field: &WaveField, f: impl Fn(f64) -> Complex64) -> WaveField {
    in_rep(field, Representation::Momentum, |p, a| a * f(p))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Applies a generator; the result is returned in the representation of `field`.
pub fn apply_generator(kind: GeneratorKind, field: &WaveField, phys: &PhysParams) -> Result<WaveField> {
    phys.validate()?;
    field.grid().check_hbar(phys)?;
    let m = phys.mass;
    Ok(match kind {
        GeneratorKind::X => in_rep(field, Representation::Position, |x, a| a * x),
        GeneratorKind::P => momentum_multiply(field, |p| Complex64::new(p, 0.0)),
        GeneratorKind::H => momentum_multiply(field, |p| Complex64::new(p * p / (2.0 * m), 0.0)),
        GeneratorKind::PPower { n } => {
            let nf = factorial(n);
            momentum_multiply(field, |p| Complex64::new(p.powi(n as i32) / nf, 0.0))
        }
        GeneratorKind::K { t } => {
            let xs = in_rep(field, Representation::Position, |x, a| a * x);
            let ps = momentum_multiply(field, |p| Complex64::new(p, 0.0));
            ps.scale(Complex64::new(t, 0.0)).axpy(Complex64::new(-m, 0.0), &xs)?
        }
    })
}

/// `(AB − BA)ψ`.
pub fn commutator(a: GeneratorKind, b: GeneratorKind, field: &WaveField, phys: &PhysParams) -> Result<WaveField> {
    let ab = apply_generator(a, &apply_generator(b, field, phys)?, phys)?;
    let ba = apply_generator(b, &apply_generator(a, field, phys)?, phys)?;
    ab.axpy(Complex64::new(-1.0, 0.0), &ba)
}

/// `ψ(x) ↦ ψ(x − a)` by the phase `e^(−ipa/ħ)` in momentum space; any real `a`.
pub fn translate(field: &WaveField, a: f64) -> WaveField {
    let hbar = field.grid().hbar();
    momentum_multiply(field, |p| Complex64::from_polar(1.0, -p * a / hbar))
}

/// `e^(ivK(t)/ħ)ψ = e^(−imv²t/2ħ) e^(−ivmx/ħ) ψ(x + vt)`.
pub fn boost(field: &WaveField, b: &BoostParams, phys: &PhysParams) -> Result<WaveField> {
    phys.validate()?;
    field.grid().check_hbar(phys)?;
    if !(b.v.is_finite() && b.t.is_finite()) {
        return Err(LabError::Parameter(format!("boost parameters must be finite: {b:?}")));
    }
    if b.v == 0.0 {
        return Ok(field.clone());
    }
    let (m, hbar) = (phys.mass, phys.hbar);
    let shifted = translate(&field.to_rep(Representation::Position), -b.v * b.t);
    let global = -m * b.v * b.v * b.t / (2.0 * hbar);
    let out = shifted.map_pointwise(|x, a| a * Complex64::from_polar(1.0, global - b.v * m * x / hbar));
    Ok(out.to_rep(field.rep()))
}

fn propagate(field: &WaveField, tau: f64, phys: &PhysParams) -> WaveField {
    let c = tau / (2.0 * phys.mass * phys.hbar);
    momentum_multiply(field, |p| Complex64::from_polar(1.0, -p * p * c))
}

/// Exact free propagation `e^(−iHτ/ħ)`; advances the time stamp by `τ`.
pub fn free_evolve(field: &WaveField, tau: f64, phys: &PhysParams) -> Result<WaveField> {
    phys.validate()?;
    field.grid().check_hbar(phys)?;
    if !tau.is_finite() {
        return Err(LabError::Parameter("evolution time must be finite".into()));
    }
    let t0 = field.time();
    Ok(propagate(field, tau, phys).with_time(t0 + tau))
}

/// `U(ε, t, ξ) = exp(−iεp³/6ħm² − itp²/2ħm + iξp/ħm)`; advances the time stamp by `t`.
pub fn apply_displacement(field: &WaveField, c: &CoherentParams, phys: &PhysParams) -> Result<WaveField> {
    phys.validate()?;
    field.grid().check_hbar(phys)?;
    c.validate()?;
    let t0 = field.time();
    Ok(momentum_multiply(field, |p| Complex64::from_polar(1.0, momentum_phase(c, p, phys))).with_time(t0 + c.t))
}

/// Right-hand side of the disentangled form of `e^(iv(K(t) + εH)/ħ)`:
/// `e^(−imεv³/3ħ) e^(ivεH/ħ) e^(ivK(t)/ħ) e^(iv²εp/2ħ)`, applied right to left.
pub fn zassenhaus_rhs(field: &WaveField, v: f64, eps: f64, t: f64, phys: &PhysParams) -> Result<WaveField> {
    if !(v.is_finite() && eps.is_finite() && t.is_finite()) {
        return Err(LabError::Parameter("Zassenhaus parameters must be finite".into()));
    }
    let (m, hbar) = (phys.mass, phys.hbar);
    let shifted = translate(field, -v * v * eps / 2.0);
    let boosted = boost(&shifted, &BoostParams { v, t }, phys)?;
    let evolved = propagate(&boosted, -v * eps, phys);
    Ok(evolved.scale(Complex64::from_polar(1.0, -m * eps * v.powi(3) / (3.0 * hbar))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_grid, relative_distance, Grid, Window};
    use crate::states::{gaussian_packet, GaussianParams};

    fn nat() -> PhysParams {
        PhysParams::default()
    }

    fn probe(grid: &Grid, x0: f64, p0: f64, sigma: f64) -> WaveField {
        gaussian_packet(&GaussianParams { x0, p0, sigma }, grid, &nat()).unwrap()
    }

    fn mean(f: &WaveField, rep: Representation) -> f64 {
        let g = f.to_rep(rep);
        let num: f64 = g.coordinates().iter().zip(g.amplitudes()).map(|(c, a)| c * a.norm_sqr()).sum();
        let den: f64 = g.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        num / den
    }

    fn dist(a: &WaveField, b: &WaveField) -> f64 {
        relative_distance(a, b, &Window::rect()).unwrap()
    }

    #[test]
    fn canonical_commutators() {
        let g = make_grid(1024, -20.0, 20.0).unwrap();
        let psi = probe(&g, 0.5, 0.7, 1.0);
        let c = commutator(GeneratorKind::X, GeneratorKind::P, &psi, &nat()).unwrap();
        assert!(dist(&c, &psi.scale(Complex64::i())) < 1e-8);
        let c = commutator(GeneratorKind::X, GeneratorKind::H, &psi, &nat()).unwrap();
        let p = apply_generator(GeneratorKind::P, &psi, &nat()).unwrap();
        assert!(dist(&c, &p.scale(Complex64::i())) < 1e-8);
    }

    #[test]
    fn momentum_of_lattice_plane_wave() {
        let g = make_grid(64, 0.0, 64.0).unwrap();
        let p0 = 5.0 * g.dp();
        let f = WaveField::from_fn(g, Representation::Position, 0.0, |x| Complex64::from_polar(1.0, p0 * x));
        let pf = apply_generator(GeneratorKind::P, &f, &nat()).unwrap();
        assert!(dist(&pf, &f.scale(Complex64::new(p0, 0.0))) < 1e-12);
    }

    #[test]
    fn translation_properties() {
        let g = make_grid(512, -20.0, 20.0).unwrap();
        let psi = probe(&g, 0.0, 0.0, 1.0);
        let moved = translate(&psi, 2.0);
        assert!((mean(&moved, Representation::Position) - 2.0).abs() < 1e-10);
        assert!(dist(&translate(&moved, -2.0), &psi) < 1e-12);
        let a = free_evolve(&translate(&psi, 1.3), 0.7, &nat()).unwrap();
        let b = translate(&free_evolve(&psi, 0.7, &nat()).unwrap(), 1.3);
        assert!(dist(&a, &b) < 1e-10);
        // e^(iaP/ħ) from the generator agrees with translate(−a)
        let a = 0.37;
        let viaphase = psi.to_rep(Representation::Momentum).map_pointwise(|p, z| z * Complex64::from_polar(1.0, a * p));
        assert!(dist(&translate(&psi, -a), &viaphase.to_rep(Representation::Position)) < 1e-12);
    }

    #[test]
    fn boost_properties() {
        let g = make_grid(1024, -30.0, 30.0).unwrap();
        let psi = probe(&g, 0.0, 0.0, 1.0);
        let b = boost(&psi, &BoostParams { v: 1.5, t: 0.0 }, &nat()).unwrap();
        assert!((mean(&b, Representation::Momentum) + 1.5).abs() < 1e-10);
        let b = BoostParams { v: 0.8, t: 1.2 };
        let there = boost(&psi, &b, &nat()).unwrap();
        let back = boost(&there, &BoostParams { v: -0.8, t: 1.2 }, &nat()).unwrap();
        assert!(dist(&back, &psi) < 1e-12);
        let n0: f64 = psi.density().iter().sum();
        let n1: f64 = there.density().iter().sum();
        assert!((n0 - n1).abs() < 1e-12 * n0);
    }

    #[test]
    fn gaussian_spreading_and_ehrenfest() {
        let g = make_grid(2048, -60.0, 60.0).unwrap();
        let (sigma, tau) = (1.0, 3.0);
        let psi = probe(&g, -5.0, 2.0, sigma);
        let out = free_evolve(&psi, tau, &nat()).unwrap();
        assert_eq!(out.time(), tau);
        let x1 = mean(&out, Representation::Position);
        assert!((x1 - (-5.0 + 2.0 * tau)).abs() < 1e-8);
        let var: f64 = {
            let d: f64 = out.density().iter().sum();
            out.coordinates().iter().zip(out.density()).map(|(x, r)| (x - x1).powi(2) * r).sum::<f64>() / d
        };
        assert!((var - (sigma * sigma + (tau / (2.0 * sigma)).powi(2))).abs() < 1e-9);
        // a plane wave only picks up a phase
        let g = make_grid(64, 0.0, 64.0).unwrap();
        let p0 = 3.0 * g.dp();
        let f = WaveField::from_fn(g, Representation::Position, 0.0, |x| Complex64::from_polar(1.0, p0 * x));
        let e = free_evolve(&f, 2.0, &nat()).unwrap();
        assert!(dist(&e, &f.scale(Complex64::from_polar(1.0, -p0 * p0))) < 1e-12);
    }

    #[test]
    fn displacement_reductions() {
        let g = make_grid(1024, -30.0, 30.0).unwrap();
        let psi = probe(&g, 0.0, 0.4, 1.2);
        let u = apply_displacement(&psi, &CoherentParams::new(0.0, 0.0, 1.7), &nat()).unwrap();
        assert!(dist(&u, &free_evolve(&psi, 1.7, &nat()).unwrap()) < 1e-13);
        let u = apply_displacement(&psi, &CoherentParams::new(0.0, 2.5, 0.0), &nat()).unwrap();
        assert!(dist(&u, &translate(&psi, -2.5)) < 1e-13);
    }

    #[test]
    fn zassenhaus_degenerate_cases() {
        let g = make_grid(1024, -30.0, 30.0).unwrap();
        let psi = probe(&g, 1.0, -0.3, 1.0);
        let z = zassenhaus_rhs(&psi, 0.0, 1.3, 0.4, &nat()).unwrap();
        assert!(dist(&z, &psi) < 1e-14);
        let z = zassenhaus_rhs(&psi, 0.6, 0.0, 0.4, &nat()).unwrap();
        let b = boost(&psi, &BoostParams { v: 0.6, t: 0.4 }, &nat()).unwrap();
        assert!(dist(&z, &b) < 1e-14);
    }

    #[test]
    fn hbar_mismatch_rejected() {
        let g = make_grid(64, -8.0, 8.0).unwrap();
        let f = WaveField::from_fn(g, Representation::Position, 0.0, |_| Complex64::new(1.0, 0.0));
        let phys = PhysParams::new(0.5, 1.0).unwrap();
        assert!(matches!(apply_generator(GeneratorKind::X, &f, &phys), Err(LabError::HbarMismatch { .. })));
    }
}
