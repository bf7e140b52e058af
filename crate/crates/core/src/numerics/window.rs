use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::PI;

use super::{Representation, WaveField};
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Rect,
    Tukey,
}

/// Comparison weight for inner products of states that are not square integrable.
///
/// The weight is zero outside `span` (the whole lattice when `span` is `None`).
/// Inside the span a Tukey window is flat on the central `interior_fraction` and
/// falls to zero at both ends with a raised-cosine (C¹) profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub kind: WindowKind,
    #[serde(default = "default_interior")]
    pub interior_fraction: f64,
    #[serde(default)]
    pub span: Option<(f64, f64)>,
}

fn default_interior() -> f64 {
    DEFAULT_INTERIOR_FRACTION
}

pub const DEFAULT_INTERIOR_FRACTION: f64 = 0.6;

impl Default for Window {
    fn default() -> Self {
        Self::tukey(DEFAULT_INTERIOR_FRACTION)
    }
}

impl Window {
    pub fn rect() -> Self {
        Self { kind: WindowKind::Rect, interior_fraction: 1.0, span: None }
    }

    pub fn tukey(interior_fraction: f64) -> Self {
        Self { kind: WindowKind::Tukey, interior_fraction, span: None }
    }

    /// Restricts the window to `[lo, hi]` in the coordinate of the field it weights.
    pub fn on(self, lo: f64, hi: f64) -> Self {
        Self { span: Some((lo, hi)), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.interior_fraction > 0.0 && self.interior_fraction <= 1.0) {
            return Err(LabError::Window(format!(
                "interior_fraction must lie in (0, 1], got {}",
                self.interior_fraction
            )));
        }
        if let Some((lo, hi)) = self.span {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(LabError::Window(format!("span ({lo}, {hi}) is empty")));
            }
        }
        Ok(())
    }

    pub fn weight(&self, coord: f64, lo: f64, hi: f64) -> f64 {
        let (lo, hi) = self.span.unwrap_or((lo, hi));
        if coord < lo || coord > hi {
            return 0.0;
        }
        match self.kind {
            WindowKind::Rect => 1.0,
            WindowKind::Tukey => {
                let u = (coord - lo) / (hi - lo);
                let r = 0.5 * (1.0 - self.interior_fraction);
                if r <= 0.0 {
                    1.0
                } else if u < r {
                    0.5 * (1.0 - (PI * u / r).cos())
                } else if u > 1.0 - r {
                    0.5 * (1.0 - (PI * (1.0 - u) / r).cos())
                } else {
                    1.0
                }
            }
        }
    }

    /// Weights for every sample of `field`, in storage order.
    pub fn weights(&self, field: &WaveField) -> Vec<f64> {
        let g = field.grid();
        let (lo, hi) = match field.rep() {
            Representation::Position => (g.x_min(), g.x_max() - g.dx()),
            Representation::Momentum => (-g.p_max(), g.p_max() - g.dp()),
        };
        field.coordinates().into_iter().map(|c| self.weight(c, lo, hi)).collect()
    }
}

/// Windowed inner product `Σ conj(a) b w dstep`.
pub fn inner_product(a: &WaveField, b: &WaveField, w: &Window) -> Result<Complex64> {
    a.check_compatible(b)?;
    w.validate()?;
    let weights = w.weights(a);
    let s: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .zip(&weights)
        .map(|((x, y), &wt)| x.conj() * y * wt)
        .sum();
    Ok(s * a.measure())
}

pub fn windowed_norm(a: &WaveField, w: &Window) -> Result<f64> {
    Ok(inner_product(a, a, w)?.re.max(0.0).sqrt())
}

/// `‖a − b‖_w / ‖b‖_w`.
pub fn relative_distance(a: &WaveField, b: &WaveField, w: &Window) -> Result<f64> {
    let diff = a.axpy(Complex64::new(-1.0, 0.0), b)?;
    Ok(windowed_norm(&diff, w)? / windowed_norm(b, w)?)
}

/// `|⟨a|b⟩_w| / (‖a‖_w ‖b‖_w)` and the phase of `⟨a|b⟩_w`.
pub fn fidelity(a: &WaveField, b: &WaveField, w: &Window) -> Result<(f64, f64)> {
    let ov = inner_product(a, b, w)?;
    // Cauchy-Schwarz bounds f by 1; clamp the rounding excess
    let f = (ov.norm() / (windowed_norm(a, w)? * windowed_norm(b, w)?)).min(1.0);
    Ok((f, ov.arg()))
}

/// Fraction of each edge occupied by the boundary taper applied by [`apodize`].
pub const EDGE_TAPER_FRACTION: f64 = 0.125;

/// Smooth indicator of `[lo, hi]`: an erfc step centred half way into each
/// edge zone of width `zone`, with twelve step widths per zone so that the
/// weight at `lo` and `hi` themselves is below 1e-16.
pub fn smooth_indicator(coord: f64, lo: f64, hi: f64, zone: f64) -> f64 {
    let width = zone / 12.0;
    0.25 * erfc(-(coord - (lo + 0.5 * zone)) / width) * erfc((coord - (hi - 0.5 * zone)) / width)
}

/// Multiplies a position field by a smooth boundary taper occupying
/// `EDGE_TAPER_FRACTION` of the domain at each end, so that its periodic
/// extension is smooth and its spectrum stays inside the lattice.
pub fn apodize(field: &WaveField) -> Result<WaveField> {
    if field.rep() != Representation::Position {
        return Err(LabError::RepresentationMismatch);
    }
    let g = *field.grid();
    let zone = EDGE_TAPER_FRACTION * g.length();
    Ok(field.map_pointwise(|x, a| a * smooth_indicator(x, g.x_min(), g.x_max(), zone)))
}

/// Interior of the grid left untouched by [`apodize`].
pub fn taper_interior(field: &WaveField) -> (f64, f64) {
    let g = field.grid();
    let zone = EDGE_TAPER_FRACTION * g.length();
    (g.x_min() + zone, g.x_max() - zone)
}

/// Tukey window with the default interior fraction on the central half of the grid.
pub fn central_window(field: &WaveField) -> Window {
    let g = field.grid();
    let c = 0.5 * (g.x_min() + g.x_max());
    let h = 0.25 * g.length();
    Window::default().on(c - h, c + h)
}

/// Fraction of the windowed norm² that sits in the outer taper zones.
pub fn edge_leakage(field: &WaveField) -> f64 {
    let pos = field.to_rep(Representation::Position);
    let (lo, hi) = taper_interior(&pos);
    let (mut inner, mut outer) = (0.0, 0.0);
    for (x, a) in pos.grid().x_values().into_iter().zip(pos.amplitudes()) {
        if x < lo || x > hi {
            outer += a.norm_sqr();
        } else {
            inner += a.norm_sqr();
        }
    }
    if inner + outer == 0.0 {
        0.0
    } else {
        outer / (inner + outer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fourier, make_grid};

    fn bump(g: crate::numerics::Grid, center: f64) -> WaveField {
        WaveField::from_fn(g, Representation::Position, 0.0, move |x| {
            let s = (x - center) / 0.5;
            Complex64::new(if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn tukey_profile() {
        let w = Window::tukey(0.6).on(0.0, 10.0);
        assert_eq!(w.weight(-0.1, -100.0, 100.0), 0.0);
        assert_eq!(w.weight(0.0, -100.0, 100.0), 0.0);
        assert!((w.weight(1.0, -100.0, 100.0) - 0.5).abs() < 1e-15);
        assert_eq!(w.weight(2.0, -100.0, 100.0), 1.0);
        assert_eq!(w.weight(5.0, -100.0, 100.0), 1.0);
        assert_eq!(w.weight(8.0, -100.0, 100.0), 1.0);
        assert!(w.weight(9.999, -100.0, 100.0) < 1e-6);
        // C¹ at the junction with the flat part
        let h = 1e-6;
        let d = (w.weight(2.0, -1e3, 1e3) - w.weight(2.0 - h, -1e3, 1e3)) / h;
        assert!(d.abs() < 1e-5);
    }

    #[test]
    fn normalized_gaussian_has_unit_norm() {
        let g = make_grid(1024, -20.0, 20.0).unwrap();
        let s = 1.0f64;
        let norm = (2.0 * PI * s * s).powf(-0.25);
        let f = WaveField::from_fn(g, Representation::Position, 0.0, |x| {
            Complex64::new(norm * (-x * x / (4.0 * s * s)).exp(), 0.0)
        });
        let ip = inner_product(&f, &f, &Window::rect()).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-10 && ip.im.abs() < 1e-15);
    }

    #[test]
    fn disjoint_supports_are_orthogonal() {
        let g = make_grid(512, -10.0, 10.0).unwrap();
        let ip = inner_product(&bump(g, -3.0), &bump(g, 3.0), &Window::rect()).unwrap();
        assert_eq!(ip, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn distinct_lattice_plane_waves_are_orthogonal() {
        let g = make_grid(128, -5.0, 7.0).unwrap();
        let (p1, p2) = (g.p(3), g.p(120));
        let a = WaveField::from_fn(g, Representation::Position, 0.0, |x| Complex64::from_polar(1.0, p1 * x));
        let b = WaveField::from_fn(g, Representation::Position, 0.0, |x| Complex64::from_polar(1.0, p2 * x));
        assert!(inner_product(&a, &b, &Window::rect()).unwrap().norm() < 1e-12);
        assert!((inner_product(&a, &a, &Window::rect()).unwrap().re - 12.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = bump(make_grid(64, -10.0, 10.0).unwrap(), 0.0);
        let b = bump(make_grid(64, -10.0, 11.0).unwrap(), 0.0);
        assert_eq!(inner_product(&a, &b, &Window::rect()), Err(LabError::GridMismatch));
        let c = fourier(&a, Representation::Momentum).unwrap();
        assert_eq!(inner_product(&a, &c, &Window::rect()), Err(LabError::RepresentationMismatch));
    }

    #[test]
    fn invalid_windows_are_rejected() {
        assert!(Window::tukey(0.0).validate().is_err());
        assert!(Window::tukey(1.5).validate().is_err());
        assert!(Window::rect().on(2.0, 1.0).validate().is_err());
    }

    #[test]
    fn apodization_is_flat_inside_and_vanishes_at_edges() {
        let g = make_grid(1024, -64.0, 64.0).unwrap();
        let ones = WaveField::from_fn(g, Representation::Position, 0.0, |_| Complex64::new(1.0, 0.0));
        let t = apodize(&ones).unwrap();
        let (lo, hi) = taper_interior(&t);
        for (x, a) in g.x_values().into_iter().zip(t.amplitudes()) {
            if x >= lo && x <= hi {
                assert!((a.re - 1.0).abs() < 1e-15);
            }
        }
        assert!(t.amplitudes()[0].norm() < 1e-16);
    }
}
