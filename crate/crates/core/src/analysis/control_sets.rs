//! Closed-form control sets of `ṡ = −λs + bω` and of the one-input system on
//! `ℝ × 𝕋`, together with the polynomials that govern the torus drift.

use std::fmt;

use crate::analysis::larc::{larc_predicate, LARC_ZERO};
use crate::control::ControlBox;
use crate::error::{Error, Result};
use crate::induced::Sigma11Params;

/// A real interval with marked endpoints, or the whole line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalSet {
    Interval { lo: f64, hi: f64, closed_lo: bool, closed_hi: bool },
    WholeLine,
}

impl IntervalSet {
    pub fn closed(lo: f64, hi: f64) -> Self {
        IntervalSet::Interval { lo, hi, closed_lo: true, closed_hi: true }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        IntervalSet::Interval { lo, hi, closed_lo: false, closed_hi: false }
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            IntervalSet::Interval { lo, hi, .. } => Some((lo, hi)),
            IntervalSet::WholeLine => None,
        }
    }

    /// Membership with `slack` added at closed endpoints.
    pub fn contains(&self, s: f64, slack: f64) -> bool {
        match *self {
            IntervalSet::WholeLine => true,
            IntervalSet::Interval { lo, hi, closed_lo, closed_hi } => {
                let above = if closed_lo { s >= lo - slack } else { s > lo };
                let below = if closed_hi { s <= hi + slack } else { s < hi };
                above && below
            }
        }
    }

    /// Membership in the closure, ignoring endpoint type.
    pub fn closure_contains(&self, s: f64) -> bool {
        match *self {
            IntervalSet::WholeLine => true,
            IntervalSet::Interval { lo, hi, .. } => lo <= s && s <= hi,
        }
    }

    pub fn midpoint(&self) -> f64 {
        self.bounds().map_or(0.0, |(lo, hi)| 0.5 * (lo + hi))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IntervalSet::WholeLine => write!(f, "R"),
            IntervalSet::Interval { lo, hi, closed_lo, closed_hi } => {
                write!(f, "{}{lo}, {hi}{}", if closed_lo { '[' } else { '(' }, if closed_hi { ']' } else { ')' })
            }
        }
    }
}

/// `base × 𝕋` when `times_torus` holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSetDescription {
    pub base: IntervalSet,
    pub times_torus: bool,
}

impl ControlSetDescription {
    pub fn is_whole_space(&self) -> bool {
        self.base == IntervalSet::WholeLine
    }
}

fn scalar_box(bounds: &ControlBox) -> Result<(f64, f64)> {
    if bounds.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: bounds.dim() });
    }
    Ok((bounds.lower()[0], bounds.upper()[0]))
}

/// The unique control set of `ṡ = −λs + bω`, `ω ∈ [ω_*, ω^*]`:
/// `(b/λ)Ω` for `λ > 0`, its interior for `λ < 0`, and `ℝ` for `λ = 0`.
pub fn control_set_sigma_r(lambda: f64, b: f64, bounds: &ControlBox) -> Result<IntervalSet> {
    let (lo, hi) = scalar_box(bounds)?;
    if b.abs() <= LARC_ZERO {
        return Err(Error::ZeroInputGain { b });
    }
    if lambda.abs() <= LARC_ZERO {
        return Ok(IntervalSet::WholeLine);
    }
    let k = b / lambda;
    let (e1, e2) = (k * lo, k * hi);
    let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    Ok(if lambda > 0.0 { IntervalSet::closed(lo, hi) } else { IntervalSet::open(lo, hi) })
}

/// `C_{Σ_ℝ} × 𝕋` under the rank condition.
pub fn control_set_sigma_11(params: &Sigma11Params, bounds: &ControlBox) -> Result<ControlSetDescription> {
    params.validate()?;
    let inp = params.single_input()?;
    if inp.b.abs() <= LARC_ZERO {
        return Err(Error::ZeroInputGain { b: inp.b });
    }
    if !larc_predicate(params)? {
        return Err(Error::LarcFailure);
    }
    Ok(ControlSetDescription { base: control_set_sigma_r(params.lambda, inp.b, bounds)?, times_torus: true })
}

/// Coefficients `(k₂, k₁)` of `p(ω) = k₂ω² + k₁ω`, the torus speed at the
/// fixed point `s = bω/λ`.
pub fn p_coefficients(params: &Sigma11Params) -> Result<(f64, f64)> {
    params.validate()?;
    let inp = params.single_input()?;
    let l = params.lambda;
    if l.abs() <= LARC_ZERO {
        return Err(Error::ZeroDriftRate);
    }
    let (a, b, c) = (inp.a, inp.b, inp.c);
    Ok((b / (2.0 * l * l) * (b * params.alpha + 2.0 * a * l), (b * params.gamma + c * l) / l))
}

pub fn p_polynomial(params: &Sigma11Params, omega: f64) -> Result<f64> {
    let (k2, k1) = p_coefficients(params)?;
    Ok(k2 * omega * omega + k1 * omega)
}

/// `q(s) = ½αs² + γs`, the torus speed under `ω = 0`.
pub fn q_polynomial(params: &Sigma11Params, s: f64) -> Result<f64> {
    params.validate()?;
    Ok(0.5 * params.alpha * s * s + params.gamma * s)
}
