use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// Target absolute error per quadrature piece.
pub const QUADRATURE_TARGET: f64 = 1e-11;

/// Largest error estimate accepted from a quadrature piece.
const QUADRATURE_ACCEPT: f64 = 1e-9;

/// Threshold on the odd Fourier moments used to certify symmetry about the
/// Clifford angles.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// A probability distribution for a rotation angle on `(-π, π]`.
#[derive(Clone)]
pub enum AngleDistribution {
    /// Density proportional to `|sin θ|^{k-2}`.
    SinPower { k: usize },
    Uniform,
    /// Nonnegative density, normalized internally by quadrature.
    Density(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Point masses `(angle, weight)`; weights normalized internally.
    Discrete(Vec<(f64, f64)>),
}

impl fmt::Debug for AngleDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SinPower { k } => write!(f, "SinPower {{ k: {k} }}"),
            Self::Uniform => write!(f, "Uniform"),
            Self::Density(_) => write!(f, "Density(..)"),
            Self::Discrete(v) => write!(f, "Discrete({v:?})"),
        }
    }
}

impl AngleDistribution {
    pub fn density(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Density(Arc::new(f))
    }

    /// Uniform weights on the four Clifford angles.
    pub fn clifford_uniform() -> Self {
        Self::Discrete(vec![(0.0, 1.0), (PI, 1.0), (FRAC_PI_2, 1.0), (-FRAC_PI_2, 1.0)])
    }

    /// `E[f(θ)]`.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        match self {
            Self::Discrete(points) => {
                let total: f64 = points.iter().map(|p| p.1).sum();
                if points.is_empty() || !(total > 0.0) || points.iter().any(|p| p.1 < 0.0) {
                    return domain("discrete distribution needs nonnegative weights with positive sum");
                }
                Ok(points.iter().map(|&(t, w)| w * f(t)).sum::<f64>() / total)
            }
            Self::Uniform => Ok(integrate(|t| f(t), "uniform")? / (2.0 * PI)),
            Self::SinPower { k } => {
                if *k < 2 {
                    return domain(format!("k = {k} must be at least 2"));
                }
                let e = (*k - 2) as i32;
                let w = |t: f64| t.sin().abs().powi(e);
                Ok(integrate(|t| w(t) * f(t), "moment")? / integrate(w, "normalization")?)
            }
            Self::Density(rho) => {
                let z = integrate(|t| rho(t), "normalization")?;
                if !(z > 0.0) {
                    return domain("density has non-positive total mass");
                }
                Ok(integrate(|t| rho(t) * f(t), "moment")? / z)
            }
        }
    }

    /// `E[sin² θ]`.
    pub fn sin2_moment(&self) -> Result<f64> {
        self.expectation(|t| t.sin().powi(2))
    }

    /// Largest of `|E sin θ|, |E sin 2θ|, |E sin 3θ|, |E cos θ|, |E cos 3θ|`.
    /// All vanish when the distribution is symmetric about every Clifford
    /// angle; together they make the third-order moments agree with the
    /// four-point Clifford distribution of the same `E[sin² θ]`.
    pub fn asymmetry(&self) -> Result<f64> {
        let moments = [
            self.expectation(f64::sin)?,
            self.expectation(|t| (2.0 * t).sin())?,
            self.expectation(|t| (3.0 * t).sin())?,
            self.expectation(f64::cos)?,
            self.expectation(|t| (3.0 * t).cos())?,
        ];
        Ok(moments.iter().fold(0.0f64, |m, x| m.max(x.abs())))
    }

    pub fn check_symmetric(&self) -> Result<()> {
        let a = self.asymmetry()?;
        if a > SYMMETRY_TOL {
            return domain(format!(
                "angle distribution is not symmetric about the Clifford angles (odd moment {a:e})"
            ));
        }
        Ok(())
    }
}

/// `∫_{-π}^{π} f`, split at multiples of π/2 so that `|sin|`, `|cos|` kinks
/// fall on piece boundaries.
fn integrate(f: impl Fn(f64) -> f64, what: &str) -> Result<f64> {
    let cuts = [-PI, -FRAC_PI_2, 0.0, FRAC_PI_2, PI];
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let out = quadrature::double_exponential::integrate(&f, w[0], w[1], QUADRATURE_TARGET);
        if !out.integral.is_finite() || out.error_estimate > QUADRATURE_ACCEPT {
            return Err(Error::Numeric(format!(
                "quadrature for the {what} did not converge on [{:.4}, {:.4}] (error estimate {:e})",
                w[0], w[1], out.error_estimate
            )));
        }
        total += out.integral;
    }
    Ok(total)
}
