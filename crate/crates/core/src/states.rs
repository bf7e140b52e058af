//! Constructors for the wavefunctions studied here: Gaussian probes, ξ-eigenstates
//! of the boost generator, the Airy coherent states in both representations and
//! the Berry–Balazs initial profile.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::numerics::{Grid, PhysParams, Representation, WaveField};
use crate::special::{ai, AIRY_MIN_ARG};

/// Labels `(ε, ξ, t)` of a coherent state: inverse acceleration, boost eigenvalue and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentParams {
    pub eps: f64,
    pub xi: f64,
    pub t: f64,
}

impl CoherentParams {
    pub fn new(eps: f64, xi: f64, t: f64) -> Self {
        Self { eps, xi, t }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.is_finite() && self.xi.is_finite() && self.t.is_finite() {
            Ok(())
        } else {
            Err(LabError::Parameter(format!("coherent-state labels must be finite: {self:?}")))
        }
    }

    /// Position about which the density sits rigidly: the turning point of the
    /// Airy profile, `−ξ/m − t²/2ε`.
    pub fn turning_point(&self, phys: &PhysParams) -> f64 {
        -self.xi / phys.mass - self.t * self.t / (2.0 * self.eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianParams {
    pub x0: f64,
    pub p0: f64,
    pub sigma: f64,
}

fn check_setup(grid: &Grid, phys: &PhysParams) -> Result<()> {
    phys.validate()?;
    grid.check_hbar(phys)
}

/// Unit-normalized `(2πσ²)^(−1/4) e^(ip0x/ħ) e^(−(x−x0)²/4σ²)` in position representation.
///
/// `σ` is the position standard deviation. The packet must be resolved
/// (`σ ≥ 4 dx`), sit at least 8σ inside the domain, and have its momentum
/// content within 8 standard deviations inside the lattice.
pub fn gaussian_packet(g: &GaussianParams, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    check_setup(grid, phys)?;
    if !(g.sigma.is_finite() && g.sigma > 0.0 && g.x0.is_finite() && g.p0.is_finite()) {
        return Err(LabError::Parameter(format!("invalid Gaussian parameters {g:?}")));
    }
    if g.sigma < 4.0 * grid.dx() {
        return Err(LabError::Unresolved(format!("sigma = {} is below 4 dx = {}", g.sigma, 4.0 * grid.dx())));
    }
    if g.x0 - 8.0 * g.sigma < grid.x_min() || g.x0 + 8.0 * g.sigma > grid.x_max() {
        return Err(LabError::WindowEscape(format!("Gaussian at {} with sigma {} does not fit the domain", g.x0, g.sigma)));
    }
    let sigma_p = phys.hbar / (2.0 * g.sigma);
    if g.p0.abs() + 8.0 * sigma_p > grid.p_max() {
        return Err(LabError::Unresolved(format!("momentum content of {g:?} exceeds the lattice")));
    }
    let norm = (2.0 * PI * g.sigma * g.sigma).powf(-0.25);
    let hbar = phys.hbar;
    Ok(WaveField::from_fn(*grid, Representation::Position, 0.0, |x| {
        let d = x - g.x0;
        Complex64::from_polar(norm * (-d * d / (4.0 * g.sigma * g.sigma)).exp(), g.p0 * x / hbar)
    }))
}

/// Eigenstate of `K(t)` with eigenvalue `ξ`:
/// `(2πħ|t|)^(−1/2) exp((i/ħ)(m x²/2t + ξ x/t))`.
pub fn xi_eigenstate_x(xi: f64, t: f64, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    check_setup(grid, phys)?;
    if t == 0.0 || !t.is_finite() || !xi.is_finite() {
        return Err(LabError::Parameter(
            "xi-eigenstates at t = 0 are position eigenstates; use perelomov_state with eps = 0 in the momentum representation".into(),
        ));
    }
    let amp = (2.0 * PI * phys.hbar * t.abs()).powf(-0.5);
    let (m, hbar) = (phys.mass, phys.hbar);
    Ok(WaveField::from_fn(*grid, Representation::Position, t, |x| {
        Complex64::from_polar(amp, (m * x * x / (2.0 * t) + xi * x / t) / hbar)
    }))
}

/// Prefactor of the momentum representation, `1/(2πħ√m)`.
pub fn momentum_prefactor(phys: &PhysParams) -> f64 {
    1.0 / (2.0 * PI * phys.hbar * phys.mass.sqrt())
}

/// Ratio between the position closed form and the unitary transform of the
/// momentum build with [`momentum_prefactor`], measured as `√(2πħ)`.
pub fn representation_ratio(phys: &PhysParams) -> f64 {
    (2.0 * PI * phys.hbar).sqrt()
}

/// Phase `(pξ/m − tp²/2m − εp³/6m²)/ħ` of the momentum representation.
pub fn momentum_phase(c: &CoherentParams, p: f64, phys: &PhysParams) -> f64 {
    let m = phys.mass;
    (p * c.xi / m - c.t * p * p / (2.0 * m) - c.eps * p * p * p / (6.0 * m * m)) / phys.hbar
}

/// Real cube root of `2ħm²/ε`.
pub fn airy_scale(eps: f64, phys: &PhysParams) -> f64 {
    (2.0 * phys.hbar * phys.mass * phys.mass / eps).cbrt()
}

/// Closed-form position amplitude of `|ε, ξ; t⟩` for `ε ≠ 0`:
/// `(|α|/(√m ħ)) e^(−(i/ħ)[(ξ + m x)t/ε + m t³/3ε²]) Ai(−(α/ħ)(x + ξ/m + t²/2ε))`
/// with `α` the real cube root of `2ħm²/ε`.
pub fn perelomov_position_value(c: &CoherentParams, x: f64, phys: &PhysParams) -> Result<Complex64> {
    if c.eps == 0.0 {
        return Err(LabError::Parameter("the Airy closed form needs eps != 0".into()));
    }
    let (m, hbar) = (phys.mass, phys.hbar);
    let alpha = airy_scale(c.eps, phys);
    let z = -(alpha / hbar) * (x + c.xi / m + c.t * c.t / (2.0 * c.eps));
    let phase = -((c.xi + m * x) * c.t / c.eps + m * c.t.powi(3) / (3.0 * c.eps * c.eps)) / hbar;
    Ok(Complex64::from_polar(alpha.abs() / (m.sqrt() * hbar) * ai(z)?, phase))
}

/// `|ε, ξ; t⟩` sampled on the grid.
///
/// The momentum build is the pure cubic phase with [`momentum_prefactor`] and
/// accepts any ε. The position build is the Airy closed form; for `ε = 0` and
/// `t ≠ 0` it is the transform of the quadratic-phase momentum build (a
/// ξ-eigenstate times a constant phase), and `ε = 0, t = 0` is rejected.
pub fn perelomov_state(c: &CoherentParams, rep: Representation, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    check_setup(grid, phys)?;
    c.validate()?;
    match rep {
        Representation::Momentum => {
            let pre = momentum_prefactor(phys);
            Ok(WaveField::from_fn(*grid, rep, c.t, |p| Complex64::from_polar(pre, momentum_phase(c, p, phys))))
        }
        Representation::Position if c.eps == 0.0 => {
            if c.t == 0.0 {
                return Err(LabError::Parameter(
                    "eps = 0, t = 0 is a position eigenstate; build it in the momentum representation".into(),
                ));
            }
            let phase = Complex64::from_polar(
                1.0,
                -PI / 4.0 * c.t.signum() + c.xi * c.xi / (2.0 * phys.mass * phys.hbar * c.t),
            );
            Ok(xi_eigenstate_x(c.xi, c.t, grid, phys)?.scale(phase))
        }
        Representation::Position => {
            let mut amps = Vec::with_capacity(grid.n_points());
            for x in grid.x_values() {
                amps.push(perelomov_position_value(c, x, phys)?);
            }
            WaveField::new(*grid, rep, amps, c.t)
        }
    }
}

/// Momentum build of `|ε, ξ; t⟩` restricted to the band of momenta whose
/// stationary positions lie inside the grid.
///
/// Momentum `p = −tm/ε ± q` is carried by the position `x_turn + εq²/2m²`. The
/// amplitudes are multiplied by a smooth erfc cut in `q` that is 1 for components
/// landing within 40% of the way from the turning point to the open-side edge
/// and negligible for components landing within `L/32` of that edge, so the
/// transform is free of wrap-around. Requires `ε ≠ 0` and the turning point
/// inside the grid.
pub fn perelomov_momentum_banded(c: &CoherentParams, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    check_setup(grid, phys)?;
    c.validate()?;
    if c.eps == 0.0 {
        return Err(LabError::Parameter("band limiting needs eps != 0".into()));
    }
    let m = phys.mass;
    let x_turn = c.turning_point(phys);
    let open_edge = if c.eps > 0.0 { grid.x_max() - grid.length() / 32.0 } else { grid.x_min() + grid.length() / 32.0 };
    if (open_edge - x_turn) * c.eps <= 0.0 {
        return Err(LabError::WindowEscape(format!("turning point {x_turn} lies outside the grid")));
    }
    let x_in = x_turn + 0.4 * (open_edge - x_turn);
    let q_of = |x: f64| m * (2.0 * (x - x_turn) / c.eps).sqrt();
    let (q_in, q_out) = (q_of(x_in), q_of(open_edge));
    let centre = 0.5 * (q_in + q_out);
    let width = (q_out - q_in) / 12.0;
    let vertex = -c.t * m / c.eps;
    let mut field = perelomov_state(c, Representation::Momentum, grid, phys)?;
    field = field.map_pointwise(|p, a| a * (0.5 * erfc(((p - vertex).abs() - centre) / width)));
    Ok(field)
}

/// Berry–Balazs profile `Ai(Bx/ħ^(2/3))` at t = 0.
///
/// The oscillatory edge of the grid must be sampled at least four times per
/// local Airy wavelength.
pub fn berry_balazs_initial(b: f64, grid: &Grid, phys: &PhysParams) -> Result<WaveField> {
    check_setup(grid, phys)?;
    if b == 0.0 || !b.is_finite() {
        return Err(LabError::Parameter("B must be finite and non-zero".into()));
    }
    let scale = b / phys.hbar.powf(2.0 / 3.0);
    let edge = if b > 0.0 { grid.x_min() } else { grid.x_max() - grid.dx() };
    let z_edge = scale * edge;
    if z_edge < AIRY_MIN_ARG {
        return Err(LabError::Unresolved(format!("Airy argument {z_edge} at the grid edge is outside the supported domain")));
    }
    if z_edge < 0.0 {
        let k = scale.abs() * (-z_edge).sqrt();
        let wavelength = 2.0 * PI / k;
        if grid.dx() > wavelength / 4.0 {
            return Err(LabError::Unresolved(format!(
                "dx = {} exceeds a quarter of the local Airy wavelength {} at x = {edge}",
                grid.dx(),
                wavelength
            )));
        }
    }
    let mut amps = Vec::with_capacity(grid.n_points());
    for x in grid.x_values() {
        amps.push(Complex64::new(ai(scale * x)?, 0.0));
    }
    WaveField::new(*grid, Representation::Position, amps, 0.0)
}

/// Inverse acceleration of the coherent state that reproduces the Berry–Balazs profile: `−2m²/B³`.
pub fn berry_balazs_eps(b: f64, phys: &PhysParams) -> f64 {
    -2.0 * phys.mass * phys.mass / b.powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{apodize, fourier, inner_product, make_grid, Grid, Window};

    fn nat() -> PhysParams {
        PhysParams::default()
    }

    fn moments(f: &WaveField) -> (f64, f64, f64) {
        let (mut n, mut x1, mut x2) = (0.0, 0.0, 0.0);
        for (x, a) in f.coordinates().into_iter().zip(f.amplitudes()) {
            let d = a.norm_sqr() * f.measure();
            n += d;
            x1 += x * d;
            x2 += x * x * d;
        }
        (n, x1 / n, x2 / n)
    }

    #[test]
    fn gaussian_moments() {
        let g = make_grid(1024, -20.0, 20.0).unwrap();
        let f = gaussian_packet(&GaussianParams { x0: 0.0, p0: 0.0, sigma: 1.0 }, &g, &nat()).unwrap();
        let (n, m1, m2) = moments(&f);
        assert!((n - 1.0).abs() < 1e-10);
        assert!(m1.abs() < 1e-12);
        assert!((m2 - 1.0).abs() < 1e-10);

        let f = gaussian_packet(&GaussianParams { x0: 2.0, p0: 3.0, sigma: 1.0 }, &g, &nat()).unwrap();
        let (_, m1, _) = moments(&f);
        assert!((m1 - 2.0).abs() < 1e-8);
        let (_, p1, _) = moments(&fourier(&f, Representation::Momentum).unwrap());
        assert!((p1 - 3.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_rejects_unresolved_width() {
        let g = make_grid(512, -30.72, 30.72).unwrap(); // dx = 0.12
        let r = gaussian_packet(&GaussianParams { x0: 0.0, p0: 0.0, sigma: 0.1 }, &g, &nat());
        assert!(matches!(r, Err(LabError::Unresolved(_))));
        let r = gaussian_packet(&GaussianParams { x0: 28.0, p0: 0.0, sigma: 1.0 }, &g, &nat());
        assert!(matches!(r, Err(LabError::WindowEscape(_))));
    }

    #[test]
    fn xi_eigenstate_closed_form() {
        let g = make_grid(256, -8.0, 8.0).unwrap();
        let f = xi_eigenstate_x(0.0, 1.0, &g, &nat()).unwrap();
        for (x, a) in g.x_values().into_iter().zip(f.amplitudes()) {
            let want = Complex64::from_polar((2.0 * PI).powf(-0.5), x * x / 2.0);
            assert!((a - want).norm() < 1e-15);
        }
        let f = xi_eigenstate_x(1.5, -2.0, &g, &nat()).unwrap();
        for a in f.amplitudes() {
            assert!((a.norm_sqr() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        }
        assert!(xi_eigenstate_x(1.0, 0.0, &g, &nat()).is_err());
    }

    #[test]
    fn position_form_density_is_airy_squared() {
        let g = make_grid(1024, -16.0, 16.0).unwrap();
        let c = CoherentParams::new(1.0, 0.0, 0.0);
        let f = perelomov_state(&c, Representation::Position, &g, &nat()).unwrap();
        let s = 2f64.cbrt();
        for (x, a) in g.x_values().into_iter().zip(f.amplitudes()) {
            let want = s * ai(-s * x).unwrap();
            assert!((a.norm_sqr() - want * want).abs() < 1e-14);
        }
        // the largest sample sits next to the global maximum of Ai at -1.01879
        let d = f.density();
        let k = (0..d.len()).max_by(|&i, &j| d[i].total_cmp(&d[j])).unwrap();
        assert!((g.x(k) - 1.018_792_971_647_471 / s).abs() <= g.dx());
    }

    #[test]
    fn position_eps_zero_time_zero_rejected() {
        let g = make_grid(64, -8.0, 8.0).unwrap();
        let c = CoherentParams::new(0.0, 1.0, 0.0);
        assert!(perelomov_state(&c, Representation::Position, &g, &nat()).is_err());
        // while the momentum build is a plane wave
        let f = perelomov_state(&c, Representation::Momentum, &g, &nat()).unwrap();
        let pre = momentum_prefactor(&nat());
        for (p, a) in g.p_values().into_iter().zip(f.amplitudes()) {
            assert!((a - Complex64::from_polar(pre, p)).norm() < 1e-15);
        }
    }

    fn crosscheck(c: CoherentParams, phys: PhysParams, grid: Grid, span: (f64, f64)) -> f64 {
        let band = perelomov_momentum_banded(&c, &grid, &phys).unwrap();
        let lam = representation_ratio(&phys);
        let from_p = fourier(&band, Representation::Position).unwrap().scale(Complex64::new(lam, 0.0));
        let closed = perelomov_state(&c, Representation::Position, &grid, &phys).unwrap();
        let (mut worst, mut peak) = (0.0f64, 0.0f64);
        for ((x, a), b) in grid.x_values().into_iter().zip(from_p.amplitudes()).zip(closed.amplitudes()) {
            if x >= span.0 && x <= span.1 {
                worst = worst.max((a - b).norm());
                peak = peak.max(b.norm());
            }
        }
        worst / peak
    }

    #[test]
    fn momentum_and_position_builds_agree() {
        let grid = make_grid(8192, -128.0, 128.0).unwrap();
        for &c in &[CoherentParams::new(1.0, 0.0, 0.0), CoherentParams::new(-1.0, 0.5, 0.7), CoherentParams::new(2.0, -1.0, -1.0)] {
            let e = crosscheck(c, nat(), grid, (-32.0, 32.0));
            assert!(e < 1e-10, "{c:?}: {e:e}");
        }
        let phys = PhysParams::new(0.5, 2.0).unwrap();
        let grid = Grid::for_phys(8192, -128.0, 128.0, &phys).unwrap();
        let e = crosscheck(CoherentParams::new(1.5, 0.3, 0.4), phys, grid, (-32.0, 32.0));
        assert!(e < 1e-10, "{e:e}");
    }

    #[test]
    fn eps_zero_position_build_is_transform_of_chirp() {
        // the quadratic-phase momentum build is a chirp with Gaussian-free tails; damp it lightly
        // in momentum and compare with the damped closed form through a Tukey window
        let grid = make_grid(4096, -40.0, 40.0).unwrap();
        let c = CoherentParams::new(0.0, 0.8, 1.0);
        let closed = perelomov_state(&c, Representation::Position, &grid, &nat()).unwrap();
        let apo = apodize(&closed).unwrap();
        let back = fourier(&apo, Representation::Momentum).unwrap().scale(Complex64::new(1.0 / representation_ratio(&nat()), 0.0));
        let mom = perelomov_state(&c, Representation::Momentum, &grid, &nat()).unwrap();
        let w = Window::tukey(0.6).on(-10.0, 10.0);
        let ov = inner_product(&back, &mom, &w).unwrap();
        let n1 = inner_product(&back, &back, &w).unwrap().re.sqrt();
        let n2 = inner_product(&mom, &mom, &w).unwrap().re.sqrt();
        assert!((ov.norm() / (n1 * n2) - 1.0).abs() < 1e-6);
        assert!(ov.arg().abs() < 1e-6);
    }

    #[test]
    fn berry_balazs_profile() {
        let g = make_grid(8192, -256.0, 256.0).unwrap();
        let f = berry_balazs_initial(1.0, &g, &nat()).unwrap();
        let k = g.index_of(0.0).unwrap();
        assert!((f.amplitudes()[k].re - 0.355_028_053_887_817).abs() < 1e-14);
        assert!(f.amplitudes().iter().all(|a| a.im.abs() < 1e-14));
        let coarse = make_grid(1024, -256.0, 256.0).unwrap();
        assert!(matches!(berry_balazs_initial(1.0, &coarse, &nat()), Err(LabError::Unresolved(_))));
        assert!(berry_balazs_initial(0.0, &g, &nat()).is_err());
    }

    #[test]
    fn berry_balazs_is_a_coherent_state() {
        // Ai(Bx) ∝ |ε = −2/B³, ξ = 0, t = 0⟩
        let g = make_grid(1024, -20.0, 20.0).unwrap();
        let b = 1.3;
        let bb = berry_balazs_initial(b, &g, &nat()).unwrap();
        let c = CoherentParams::new(berry_balazs_eps(b, &nat()), 0.0, 0.0);
        let ps = perelomov_state(&c, Representation::Position, &g, &nat()).unwrap();
        let ratio = ps.amplitudes()[g.index_of(0.0).unwrap()] / bb.amplitudes()[g.index_of(0.0).unwrap()];
        for (a, b) in bb.amplitudes().iter().zip(ps.amplitudes()) {
            assert!((a * ratio - b).norm() < 1e-12);
        }
    }
}
