use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{LabError, Result};

/// Physical constants of the free particle. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysParams {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let p = Self { hbar, mass };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.hbar) && ok(self.mass) {
            Ok(())
        } else {
            Err(LabError::PhysParams { hbar: self.hbar, mass: self.mass })
        }
    }
}

/// Uniform periodic position lattice together with its conjugate momentum lattice.
///
/// Position samples are `x_k = x_min + k dx` for `k = 0..n`, `dx = (x_max - x_min) / n`.
/// Momentum samples use the usual FFT ordering: index `j < n/2` maps to
/// `j dp` and `j >= n/2` to `(j - n) dp`, with `dp = 2πħ / (n dx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    x_min: f64,
    x_max: f64,
    hbar: f64,
}

/// Grid with ħ = 1.
pub fn make_grid(n_points: usize, x_min: f64, x_max: f64) -> Result<Grid> {
    Grid::new(n_points, x_min, x_max, 1.0)
}

impl Grid {
    pub fn new(n_points: usize, x_min: f64, x_max: f64, hbar: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(LabError::GridSize(n_points));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(LabError::GridBounds { x_min, x_max });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(LabError::PhysParams { hbar, mass: f64::NAN });
        }
        Ok(Self { n_points, x_min, x_max, hbar })
    }

    pub fn for_phys(n_points: usize, x_min: f64, x_max: f64, phys: &PhysParams) -> Result<Self> {
        phys.validate()?;
        Self::new(n_points, x_min, x_max, phys.hbar)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar / self.length()
    }

    /// Largest representable |p|, attained by the index `n/2`.
    pub fn p_max(&self) -> f64 {
        PI * self.hbar / self.dx()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }

    pub fn p(&self, j: usize) -> f64 {
        let n = self.n_points;
        let shifted = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
        shifted as f64 * self.dp()
    }

    pub fn x_values(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.x(k)).collect()
    }

    /// Momentum lattice in FFT order.
    pub fn p_values(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.p(j)).collect()
    }

    /// Index permutation that lists the momentum lattice in ascending order.
    pub fn p_sorted_indices(&self) -> Vec<usize> {
        let half = self.n_points / 2;
        (half..self.n_points).chain(0..half).collect()
    }

    pub fn check_hbar(&self, phys: &PhysParams) -> Result<()> {
        phys.validate()?;
        if (self.hbar - phys.hbar).abs() > 1e-15 * self.hbar.max(phys.hbar) {
            return Err(LabError::HbarMismatch { grid: self.hbar, phys: phys.hbar });
        }
        Ok(())
    }

    /// Index of the sample nearest to `x`, if `x` lies on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        if x < self.x_min || x > self.x_max {
            return None;
        }
        let k = ((x - self.x_min) / self.dx()).round() as usize;
        Some(k.min(self.n_points - 1))
    }
}
