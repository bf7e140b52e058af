//! Oscillatory integrals `∫ dp exp(i(c3 p³ + c2 p² + c1 p) − η p²)` over the real line.
//!
//! The integrand is entire, so the real line is deformed onto a straight
//! contour on which it decays like a Gaussian: a horizontal line `Im p = γ`
//! with `sign γ = sign c3` for cubic phases, or a ray through the origin
//! rotated onto the steepest-descent direction for pure quadratic phases.
//! The deformed integral is then evaluated by adaptive Gauss–Kronrod (7/15).

use num_complex::Complex64;

use crate::error::{LabError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Damping values used for the η → 0 extrapolation.
pub const DAMPING_SEQUENCE: [f64; 3] = [1e-2, 1e-3, 1e-4];

const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

fn kronrod15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    ((k * h), ((k - g) * h).norm())
}

/// Global adaptive Gauss–Kronrod quadrature of a complex integrand on `[a, b]`.
pub fn adaptive_kronrod(f: impl Fn(f64) -> Complex64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult> {
    let mut pieces: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    // seed with a modest uniform split so narrow features are not missed
    let seeds = 16;
    let step = (b - a) / seeds as f64;
    for i in 0..seeds {
        let lo = a + i as f64 * step;
        let hi = if i + 1 == seeds { b } else { lo + step };
        let (v, e) = kronrod15(&f, lo, hi);
        pieces.push((lo, hi, v, e));
    }
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(QuadResult { value: total, error: err });
        }
        if pieces.len() >= MAX_SUBDIVISIONS {
            return Err(LabError::Quadrature { value: format!("{total}"), error: err, subdivisions: pieces.len() });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// A straight integration contour `p(s) = origin + direction * s`, `s ∈ [s_lo, s_hi]`,
/// together with the size of the integrand's peak modulus on it.
#[derive(Debug, Clone, Copy)]
pub struct Contour {
    pub origin: Complex64,
    pub direction: Complex64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub peak_log_modulus: f64,
    pub decay_rate: f64,
}

/// Chooses the deformed contour for phase coefficients `(c3, c2, c1)` and damping `η`.
pub fn choose_contour(c3: f64, c2: f64, c1: f64, damping: f64) -> Result<Contour> {
    for (name, v) in [("c3", c3), ("c2", c2), ("c1", c1), ("damping", damping)] {
        if !v.is_finite() {
            return Err(LabError::Integral(format!("{name} must be finite")));
        }
    }
    if damping < 0.0 {
        return Err(LabError::Integral("damping must be non-negative".into()));
    }
    // beyond this many e-folds below the peak the integrand no longer matters
    const E_FOLDS: f64 = 48.0;
    if c3 != 0.0 {
        let gamma = c3.signum() * (3.0 * c3.abs()).powf(-1.0 / 3.0);
        let a2 = 3.0 * c3 * gamma + damping;
        let s0 = -c2 * gamma / a2;
        let e0 = c3 * gamma.powi(3) - c1 * gamma + damping * gamma * gamma;
        let peak = e0 + (c2 * gamma).powi(2) / a2;
        let r = (E_FOLDS / a2).sqrt();
        Ok(Contour {
            origin: Complex64::new(0.0, gamma),
            direction: Complex64::new(1.0, 0.0),
            s_lo: s0 - r,
            s_hi: s0 + r,
            peak_log_modulus: peak,
            decay_rate: a2,
        })
    } else {
        if damping == 0.0 {
            return Err(LabError::Integral("an undamped integral needs a non-zero cubic coefficient".into()));
        }
        let phi = c2.atan2(damping);
        let theta = 0.5 * phi;
        let rho = damping.hypot(c2);
        let lin = -c1 * theta.sin();
        let s0 = lin / (2.0 * rho);
        let peak = lin * lin / (4.0 * rho);
        let r = (E_FOLDS / rho).sqrt();
        Ok(Contour {
            origin: Complex64::new(0.0, 0.0),
            direction: Complex64::from_polar(1.0, theta),
            s_lo: s0 - r,
            s_hi: s0 + r,
            peak_log_modulus: peak,
            decay_rate: rho,
        })
    }
}

/// Integrates an entire function `f` along `contour`.
pub fn contour_integral(f: impl Fn(Complex64) -> Complex64, contour: &Contour) -> Result<QuadResult> {
    let scale = contour.peak_log_modulus.exp() * (std::f64::consts::PI / contour.decay_rate).sqrt();
    let g = |s: f64| f(contour.origin + contour.direction * s) * contour.direction;
    adaptive_kronrod(g, contour.s_lo, contour.s_hi, 1e-15 * scale, 1e-14)
}

/// `∫ dp exp(i(c3 p³ + c2 p² + c1 p)) exp(−η p²)` over the real line.
///
/// With `damping = 0` the cubic coefficient must be non-zero.
pub fn cubic_phase_integral(c3: f64, c2: f64, c1: f64, damping: f64) -> Result<Complex64> {
    Ok(cubic_phase_integral_with_error(c3, c2, c1, damping)?.value)
}

pub fn cubic_phase_integral_with_error(c3: f64, c2: f64, c1: f64, damping: f64) -> Result<QuadResult> {
    let contour = choose_contour(c3, c2, c1, damping)?;
    let i = Complex64::i();
    contour_integral(|p| (i * (((c3 * p + c2) * p + c1) * p) - damping * p * p).exp(), &contour)
}

/// Value extrapolated to zero damping together with the spread between the
/// linear and quadratic extrapolants, used as its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    pub spread: f64,
    pub samples: [Complex64; 3],
}

/// Polynomial (Neville) extrapolation to η = 0 of values sampled at `DAMPING_SEQUENCE`.
pub fn extrapolate_to_zero(samples: [Complex64; 3]) -> Extrapolated {
    let h = DAMPING_SEQUENCE;
    let mut t = samples;
    // Neville's tableau evaluated at 0
    let mut linear = Complex64::default();
    for level in 1..3 {
        for i in (level..3).rev() {
            let (hi, hj) = (h[i], h[i - level]);
            t[i] = (t[i] * hj - t[i - 1] * hi) / (hj - hi);
        }
        if level == 1 {
            linear = t[2];
        }
    }
    Extrapolated { value: t[2], spread: (t[2] - linear).norm(), samples }
}

/// Damped integrals on `DAMPING_SEQUENCE`, extrapolated to zero damping.
pub fn cubic_phase_limit(c3: f64, c2: f64, c1: f64) -> Result<Extrapolated> {
    let mut samples = [Complex64::default(); 3];
    for (s, &eta) in samples.iter_mut().zip(DAMPING_SEQUENCE.iter()) {
        *s = cubic_phase_integral(c3, c2, c1, eta)?;
    }
    Ok(extrapolate_to_zero(samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_integrates_polynomials_and_gaussians() {
        let r = adaptive_kronrod(|x| Complex64::new(x.powi(6), 0.0), -1.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((r.value.re - (128.0 + 1.0) / 7.0).abs() < 1e-12);
        let r = adaptive_kronrod(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, 1e-15, 1e-14).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn undamped_cubic_without_cubic_term_is_rejected() {
        assert!(cubic_phase_integral(0.0, 0.5, 0.0, 0.0).is_err());
        assert!(cubic_phase_integral(1.0, 0.0, 0.0, -1e-3).is_err());
        assert!(cubic_phase_integral(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn damped_gaussian_matches_closed_form() {
        // ∫ exp(i c2 p² + i c1 p − η p²) = sqrt(π/(η − i c2)) exp(−c1²/(4(η − i c2)))
        for &(c2, c1, eta) in &[(0.5, 0.0, 1e-2), (-0.7, 1.3, 0.2), (0.0, 2.0, 1.0), (3.0, -1.0, 1e-3)] {
            let a = Complex64::new(eta, -c2);
            let expected = (Complex64::new(PI, 0.0) / a).sqrt() * (-(c1 * c1) / (4.0 * a)).exp();
            let got = cubic_phase_integral(0.0, c2, c1, eta).unwrap();
            assert!((got - expected).norm() < 1e-12 * expected.norm().max(1.0), "{c2} {c1} {eta}: {got} vs {expected}");
        }
    }

    #[test]
    fn fresnel_limit() {
        // η → 0 of ∫ exp(i p²/2 − η p²) = sqrt(2π) e^(iπ/4)
        let lim = cubic_phase_limit(0.0, 0.5, 0.0).unwrap();
        let expected = Complex64::from_polar((2.0 * PI).sqrt(), PI / 4.0);
        assert!((lim.value - expected).norm() < 1e-7, "{:?}", lim);
    }

    #[test]
    fn extrapolation_is_exact_for_quadratics() {
        let f = |h: f64| Complex64::new(1.0 + 2.0 * h - 3.0 * h * h, -h);
        let s = DAMPING_SEQUENCE.map(f);
        let e = extrapolate_to_zero(s);
        assert!((e.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cubic_phase_conjugation_symmetry() {
        // flipping every phase coefficient conjugates the integral
        let a = cubic_phase_integral(0.4, 0.3, -1.1, 0.0).unwrap();
        let b = cubic_phase_integral(-0.4, -0.3, 1.1, 0.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }
}
