use std::f64::consts::PI;

use super::dd::Dd;
use crate::error::{LabError, Result};

/// Value of Ai together with an a-priori bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryResult {
    pub value: f64,
    pub est_error: f64,
}

/// Most negative argument accepted by [`airy_ai`].
pub const AIRY_MIN_ARG: f64 = -1000.0;

const SERIES_MIN: f64 = -8.0;
const SERIES_MAX: f64 = 8.5;

const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
// −Ai′(0)
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const TWO_PI: Dd = Dd::new(std::f64::consts::TAU, 2.4492935982947064e-16);
const QUARTER_PI: Dd = Dd::new(std::f64::consts::FRAC_PI_4, 3.061616997868383e-17);

/// Airy function of the first kind for real `z ≥ AIRY_MIN_ARG`.
///
/// Uses the Maclaurin series in double-double arithmetic on `[-8, 8.5]` and the
/// standard asymptotic expansions outside it; the error estimate bounds the
/// truncation plus rounding error of whichever branch is taken.
pub fn airy_ai(z: f64) -> Result<AiryResult> {
    if !z.is_finite() || z < AIRY_MIN_ARG {
        return Err(LabError::AiryDomain(z));
    }
    Ok(if z < SERIES_MIN {
        oscillatory(z)
    } else if z > SERIES_MAX {
        decaying(z)
    } else {
        maclaurin(z)
    })
}

/// Convenience wrapper returning only the value.
pub fn ai(z: f64) -> Result<f64> {
    airy_ai(z).map(|r| r.value)
}

fn maclaurin(z: f64) -> AiryResult {
    let zd = Dd::from_f64(z);
    let z3 = zd * zd * zd;
    let mut f_term = Dd::from_f64(1.0);
    let mut g_term = zd;
    let mut f = f_term;
    let mut g = g_term;
    let mut magnitude = 1.0 + z.abs();
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        f_term = f_term * z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        g_term = g_term * z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f = f + f_term;
        g = g + g_term;
        let size = f_term.hi.abs() + g_term.hi.abs();
        magnitude += size;
        if size < 1e-34 * (f.hi.abs() + g.hi.abs()) || k > 200 {
            break;
        }
        k += 1;
    }
    let value = (AI0 * f - MINUS_AIP0 * g).to_f64();
    AiryResult { value, est_error: magnitude * 4e-32 + value.abs() * f64::EPSILON }
}

fn u_coefficients(n: usize) -> Vec<f64> {
    let mut u = vec![1.0f64; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

/// Sums `Σ c_k x^k` with `c_k = sign_k u_k`, stopping at the smallest term.
/// Returns the partial sums of even and odd k separately and the first omitted term.
fn truncated_terms(x: f64) -> (Vec<f64>, f64) {
    let u = u_coefficients(60);
    let mut terms = Vec::with_capacity(60);
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for &uk in &u {
        let t = uk * pow;
        if t > last || t < 1e-20 {
            return (terms, t.min(last));
        }
        terms.push(t);
        last = t;
        pow *= x;
    }
    (terms, last)
}

fn decaying(z: f64) -> AiryResult {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    if zeta > 745.0 {
        return AiryResult { value: 0.0, est_error: f64::MIN_POSITIVE };
    }
    let (terms, omitted) = truncated_terms(1.0 / zeta);
    let s: f64 = terms.iter().enumerate().map(|(k, t)| if k % 2 == 0 { *t } else { -*t }).sum();
    let pre = (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25));
    let value = pre * s;
    AiryResult { value, est_error: pre * omitted + 4.0 * value.abs() * f64::EPSILON * (1.0 + zeta.ln()) }
}

fn oscillatory(z: f64) -> AiryResult {
    let w = -z;
    let wd = Dd::from_f64(w);
    let zeta_dd = wd * wd.sqrt() * 2.0 / 3.0;
    let zeta = zeta_dd.to_f64();
    let theta = (zeta_dd + QUARTER_PI).rem_euclid(TWO_PI).to_f64();
    let (terms, omitted) = truncated_terms(1.0 / zeta);
    let (mut p, mut q) = (0.0, 0.0);
    for (k, t) in terms.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    let pre = 1.0 / (PI.sqrt() * w.powf(0.25));
    let value = pre * (theta.sin() * p - theta.cos() * q);
    AiryResult { value, est_error: pre * (omitted + 4.0 * f64::EPSILON) }
}
