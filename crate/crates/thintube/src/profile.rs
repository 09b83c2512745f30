//! Periodic scalar profiles on a circle of given period.
//!
//! Profiles describe everything that varies along the base curve: curvature
//! components, interval width and offset, fiber scale and rotation rate.
//! They can be given as Fourier coefficients (exact derivatives) or as sample
//! arrays (spectral differentiation through the DFT). Orientation angles are
//! a separate type since they may wind: theta(q) = winding * q / period + periodic part.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicProfile {
    /// Constant value.
    Constant(f64),
    /// a0 + sum a_m cos(2 pi m q / T) + sum b_m sin(2 pi m q / T).
    /// `cos` holds [a0, a1, ...], `sin` holds [b1, ...].
    Fourier { cos: Vec<f64>, sin: Vec<f64> },
    /// Uniform samples on [0, T); interpreted through the band-limited DFT.
    Samples(Vec<f64>),
}

impl PeriodicProfile {
    pub fn constant(v: f64) -> Self {
        PeriodicProfile::Constant(v)
    }

    /// Evaluate at a single point q.
    pub fn eval(&self, q: f64, period: f64) -> f64 {
        match self {
            PeriodicProfile::Constant(v) => *v,
            PeriodicProfile::Fourier { cos, sin } => {
                let w = 2.0 * PI / period;
                let mut v = *cos.first().unwrap_or(&0.0);
                for (m, a) in cos.iter().enumerate().skip(1) {
                    v += a * (w * m as f64 * q).cos();
                }
                for (m, b) in sin.iter().enumerate() {
                    v += b * (w * (m + 1) as f64 * q).sin();
                }
                v
            }
            PeriodicProfile::Samples(s) => dft_eval(s, q / period, 0),
        }
    }

    /// Derivative with respect to q at a single point.
    pub fn eval_derivative(&self, q: f64, period: f64) -> f64 {
        match self {
            PeriodicProfile::Constant(_) => 0.0,
            PeriodicProfile::Fourier { cos, sin } => {
                let w = 2.0 * PI / period;
                let mut v = 0.0;
                for (m, a) in cos.iter().enumerate().skip(1) {
                    let k = w * m as f64;
                    v -= a * k * (k * q).sin();
                }
                for (m, b) in sin.iter().enumerate() {
                    let k = w * (m + 1) as f64;
                    v += b * k * (k * q).cos();
                }
                v
            }
            PeriodicProfile::Samples(s) => dft_eval(s, q / period, 1) / period,
        }
    }

    /// Values on the uniform grid q_j = j T / n.
    pub fn values(&self, n: usize, period: f64) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval(j as f64 * period / n as f64, period))
            .collect()
    }

    /// Derivative values on the uniform grid.
    pub fn derivative_values(&self, n: usize, period: f64) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval_derivative(j as f64 * period / n as f64, period))
            .collect()
    }
}

/// Orientation of the cross-section along the curve. Not periodic in general:
/// theta(q) = winding * q / period + periodic(q), with `winding` the total
/// rotation accumulated over one loop.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AngleProfile {
    pub winding: f64,
    #[serde(default = "zero_profile")]
    pub periodic: PeriodicProfile,
}

fn zero_profile() -> PeriodicProfile {
    PeriodicProfile::Constant(0.0)
}

impl AngleProfile {
    pub fn uniform_rate(rate: f64, period: f64) -> Self {
        AngleProfile {
            winding: rate * period,
            periodic: PeriodicProfile::Constant(0.0),
        }
    }

    pub fn eval(&self, q: f64, period: f64) -> f64 {
        self.winding * q / period + self.periodic.eval(q, period)
    }

    pub fn eval_derivative(&self, q: f64, period: f64) -> f64 {
        self.winding / period + self.periodic.eval_derivative(q, period)
    }

    pub fn values(&self, n: usize, period: f64) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval(j as f64 * period / n as f64, period))
            .collect()
    }

    pub fn derivative_values(&self, n: usize, period: f64) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval_derivative(j as f64 * period / n as f64, period))
            .collect()
    }
}

/// Trigonometric interpolation of uniform samples, evaluated at fractional
/// position u in [0, 1). `deriv` 0 or 1 selects value or d/du.
///
/// Naive O(n) per point; profiles are short so this is never hot.
fn dft_eval(samples: &[f64], u: f64, deriv: usize) -> f64 {
    let n = samples.len();
    assert!(n > 0, "empty sample profile");
    if n == 1 {
        return if deriv == 0 { samples[0] } else { 0.0 };
    }
    // Real DFT coefficients up to the Nyquist mode.
    let half = n / 2;
    let mut acc = 0.0;
    for m in 0..=half {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &s) in samples.iter().enumerate() {
            let ang = 2.0 * PI * m as f64 * j as f64 / n as f64;
            re += s * ang.cos();
            im -= s * ang.sin();
        }
        re /= n as f64;
        im /= n as f64;
        // Mode weight: interior modes appear twice (m and n-m).
        let w = if m == 0 || (n % 2 == 0 && m == half) {
            1.0
        } else {
            2.0
        };
        let k = 2.0 * PI * m as f64;
        let phase = k * u;
        let (c, s) = (phase.cos(), phase.sin());
        match deriv {
            0 => acc += w * (re * c - im * s),
            _ => {
                // Nyquist mode of an even-length grid has no odd derivative content.
                if n % 2 == 0 && m == half {
                    continue;
                }
                acc += w * k * (-re * s - im * c);
            }
        }
    }
    acc
}

/// Spectral derivative of a smooth periodic sample array (period `period`).
/// Used on computed coefficient profiles, not just user input.
pub fn spectral_derivative(values: &[f64], period: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|j| dft_eval(values, j as f64 / n as f64, 1) / period)
        .collect()
}
