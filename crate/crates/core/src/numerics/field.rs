use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use super::Grid;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Position,
    Momentum,
}

impl Representation {
    pub fn other(self) -> Self {
        match self {
            Representation::Position => Representation::Momentum,
            Representation::Momentum => Representation::Position,
        }
    }
}

/// Complex amplitudes on a [`Grid`] in one representation, stamped with a time.
///
/// Momentum amplitudes are stored in FFT order (see [`Grid::p`]).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid,
    rep: Representation,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl WaveField {
    pub fn new(grid: Grid, rep: Representation, amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(LabError::AmplitudeLength { expected: grid.n_points(), got: amplitudes.len() });
        }
        Ok(Self { grid, rep, amplitudes, time })
    }

    /// Samples `f` at every lattice point of `rep`.
    pub fn from_fn(grid: Grid, rep: Representation, time: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = (0..grid.n_points())
            .map(|i| match rep {
                Representation::Position => f(grid.x(i)),
                Representation::Momentum => f(grid.p(i)),
            })
            .collect();
        Self { grid, rep, amplitudes, time }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// Coordinates matching the amplitudes (x or p, in storage order).
    pub fn coordinates(&self) -> Vec<f64> {
        match self.rep {
            Representation::Position => self.grid.x_values(),
            Representation::Momentum => self.grid.p_values(),
        }
    }

    /// Lattice step used in sums: dx or dp.
    pub fn measure(&self) -> f64 {
        match self.rep {
            Representation::Position => self.grid.dx(),
            Representation::Momentum => self.grid.dp(),
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Pointwise multiplication by `f(coordinate)`.
    pub fn map_pointwise(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let coords = self.coordinates();
        let amplitudes = coords.iter().zip(&self.amplitudes).map(|(&c, &a)| f(c, a)).collect();
        Self { amplitudes, ..self.clone() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|a| a * s).collect(), ..self.clone() }
    }

    /// `self + s * other`, for fields on the same grid and representation.
    pub fn axpy(&self, s: Complex64, other: &WaveField) -> Result<Self> {
        self.check_compatible(other)?;
        let amplitudes = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a + s * b).collect();
        Ok(Self { amplitudes, ..self.clone() })
    }

    pub fn check_compatible(&self, other: &WaveField) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch);
        }
        if self.rep != other.rep {
            return Err(LabError::RepresentationMismatch);
        }
        Ok(())
    }

    /// Returns the field in `rep`, transforming only when needed.
    pub fn to_rep(&self, rep: Representation) -> Self {
        if self.rep == rep {
            self.clone()
        } else {
            transform(self)
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Unitary transform between representations,
/// `ψ̃(p) = (2πħ)^(-1/2) ∫ dx e^(-ipx/ħ) ψ(x)`, discretized on the grid.
pub fn fourier(field: &WaveField, target: Representation) -> Result<WaveField> {
    if field.rep == target {
        return Err(LabError::SameRepresentation(target));
    }
    Ok(transform(field))
}

fn transform(field: &WaveField) -> WaveField {
    let grid = field.grid;
    let n = grid.n_points();
    let hbar = grid.hbar();
    let x0 = grid.x_min();
    let mut buf = field.amplitudes.clone();
    let rep = match field.rep {
        Representation::Position => {
            plan(n, false).process(&mut buf);
            let c = grid.dx() / (2.0 * PI * hbar).sqrt();
            for (j, a) in buf.iter_mut().enumerate() {
                *a *= Complex64::from_polar(c, -grid.p(j) * x0 / hbar);
            }
            Representation::Momentum
        }
        Representation::Momentum => {
            let c = grid.dp() / (2.0 * PI * hbar).sqrt();
            for (j, a) in buf.iter_mut().enumerate() {
                *a *= Complex64::from_polar(c, grid.p(j) * x0 / hbar);
            }
            plan(n, true).process(&mut buf);
            Representation::Position
        }
    };
    WaveField { grid, rep, amplitudes: buf, time: field.time }
}
