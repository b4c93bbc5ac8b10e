//! Linear control systems on the Heisenberg group and the systems they induce
//! on the coset spaces of `ℤe₁ × ℤp` and `ℝe₁ × ℤp`.
//!
//! Coordinates downstairs are `(u, s, t)` on `(𝕋 × ℝ) × 𝕋ᵖ` and `(s, t)` on
//! `ℝ × 𝕋ᵖ`; `s` is the `y` coordinate upstairs and `t` is `z + ½xy`.

use crate::control::{integrate, ControlSignal, ControlSystem, Trajectory};
use crate::error::{Error, Result};
use crate::heisenberg::{AlgebraElement, GroupElement, LinearField, Mat2, Vec2, Vec3};
use crate::subgroups::{
    invariance_report, project_0p, project_1p, wrap_unit, QuotientPoint0p, QuotientPoint1p, SubgroupKind, DEFAULT_TOL,
};

/// Threshold under which a parameter counts as zero in the `α = 0 if γ ≠ 0`
/// hypothesis.
const ZERO: f64 = 1e-12;

fn check_alpha_gamma(alpha: f64, gamma: f64) -> Result<()> {
    if gamma.abs() > ZERO && alpha.abs() > ZERO {
        Err(Error::AlphaGammaConstraint { alpha, gamma })
    } else {
        Ok(())
    }
}

fn check_inputs(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("expected 1..=3 inputs, got {n}")))
    }
}

fn check_omega(omega: &[f64], n: usize) -> Result<()> {
    if omega.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, got: omega.len() })
    }
}

/// `Σ_ℍ`: `ġ = 𝒳(g) + Σ ωⱼ Bⱼ(g)`, each input with its own `ζⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaH {
    pub field: LinearField,
    pub inputs: Vec<AlgebraElement>,
}

impl SigmaH {
    pub fn new(field: LinearField, inputs: Vec<AlgebraElement>) -> Result<Self> {
        check_inputs(inputs.len())?;
        Ok(Self { field, inputs })
    }
}

pub fn sigma_h_rhs(x: &LinearField, inputs: &[AlgebraElement], omega: &[f64], g: &GroupElement) -> Result<Vec3> {
    check_omega(omega, inputs.len())?;
    Ok(inputs.iter().zip(omega).fold(x.eval(g), |acc, (b, w)| acc + b.left_invariant_eval(g) * *w))
}

impl ControlSystem<3> for SigmaH {
    fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    fn rhs(&self, omega: &[f64], x: &[f64; 3]) -> [f64; 3] {
        let g = GroupElement::new(x[0], x[1], x[2]);
        let v =
            self.inputs.iter().zip(omega).fold(self.field.eval(&g), |acc, (b, w)| acc + b.left_invariant_eval(&g) * *w);
        [v.x, v.y, v.z]
    }

    fn validate(&self) -> Result<()> {
        check_inputs(self.inputs.len())
    }
}

/// Coefficients `(a, b, c)` of an induced left-invariant field
/// `B̂(s, t) = (b, c + a s)` (plus `u̇ = a` on the three-dimensional quotient).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedInput {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl InducedInput {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `B = ((a, b), c)`.
    pub fn from_algebra(b: &AlgebraElement) -> Self {
        Self::new(b.zeta.x, b.zeta.y, b.alpha)
    }

    pub fn to_algebra(&self) -> AlgebraElement {
        AlgebraElement::new(self.a, self.b, self.c)
    }
}

pub fn induced_invariant_1p(b: &AlgebraElement) -> InducedInput {
    InducedInput::from_algebra(b)
}

/// Drift coefficients read off a linear field that leaves `ℝe₁ × ℤp`
/// invariant. `beta` is present only for `p = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedDrift {
    pub lambda: f64,
    pub beta: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
}

fn require_invariant(kind: SubgroupKind, x: &LinearField) -> Result<()> {
    let report = invariance_report(kind, x, DEFAULT_TOL)?;
    match report.violated() {
        None => Ok(()),
        Some(c) => Err(Error::NotInvariant { kind, violated: c.name.to_string() }),
    }
}

pub fn induced_drift_1p(p: u8, x: &LinearField) -> Result<InducedDrift> {
    require_invariant(SubgroupKind::LineTimesLattice { p }, x)?;
    Ok(InducedDrift { lambda: x.a[(0, 0)], beta: (p == 0).then_some(x.a[(1, 1)]), alpha: x.a[(0, 1)], gamma: x.eta.y })
}

/// `Σ₁,₁` on `ℝ × 𝕋`:
/// `ṡ = −λs + Σωᵢbᵢ`, `[ṫ] = ½αs² + γs + Σωᵢ(cᵢ + aᵢs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigma11Params {
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub inputs: Vec<InducedInput>,
}

impl Sigma11Params {
    pub fn one_input(lambda: f64, a: f64, b: f64, c: f64, alpha: f64, gamma: f64) -> Self {
        Self { lambda, alpha, gamma, inputs: vec![InducedInput::new(a, b, c)] }
    }

    pub fn validate(&self) -> Result<()> {
        check_inputs(self.inputs.len())?;
        check_alpha_gamma(self.alpha, self.gamma)
    }

    /// The single input of a one-input system.
    pub fn single_input(&self) -> Result<InducedInput> {
        match self.inputs.as_slice() {
            [only] => Ok(*only),
            other => Err(Error::NotOneInput(other.len())),
        }
    }

    pub fn from_upstairs(x: &LinearField, inputs: &[AlgebraElement]) -> Result<Self> {
        let drift = induced_drift_1p(1, x)?;
        let params = Self {
            lambda: drift.lambda,
            alpha: drift.alpha,
            gamma: drift.gamma,
            inputs: inputs.iter().map(InducedInput::from_algebra).collect(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Normal-form upstairs field `A = [[λ, α], [0, −λ]]`, `η = (0, γ)`.
    pub fn linear_field(&self) -> LinearField {
        LinearField::new(Mat2::new(self.lambda, self.alpha, 0.0, -self.lambda), Vec2::new(0.0, self.gamma))
    }

    fn eval(&self, omega: &[f64], s: f64) -> [f64; 2] {
        let mut ds = -self.lambda * s;
        let mut dt = 0.5 * self.alpha * s * s + self.gamma * s;
        for (inp, w) in self.inputs.iter().zip(omega) {
            ds += w * inp.b;
            dt += w * (inp.c + inp.a * s);
        }
        [ds, dt]
    }
}

impl ControlSystem<2> for Sigma11Params {
    fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    fn rhs(&self, omega: &[f64], x: &[f64; 2]) -> [f64; 2] {
        self.eval(omega, x[0])
    }

    fn wrap(&self, x: &mut [f64; 2]) {
        x[1] = wrap_unit(x[1]);
    }

    fn validate(&self) -> Result<()> {
        Sigma11Params::validate(self)
    }
}

pub fn sigma_11_rhs(params: &Sigma11Params, omega: &[f64], q: &QuotientPoint1p) -> Result<[f64; 2]> {
    params.validate()?;
    check_omega(omega, params.inputs.len())?;
    if q.p != 1 {
        return Err(Error::InvalidParameter("Σ₁,₁ lives on ℝ × 𝕋 (p = 1)".into()));
    }
    Ok(params.eval(omega, q.s))
}

/// `Σ₁,₀` on `ℝ²`:
/// `ṡ = βs + Σωᵢbᵢ`, `ṫ = (λ+β)t + ½αs² + γs + Σωᵢcᵢ + (Σωᵢaᵢ)s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigma10Params {
    pub lambda: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub inputs: Vec<InducedInput>,
}

impl Sigma10Params {
    pub fn validate(&self) -> Result<()> {
        check_inputs(self.inputs.len())?;
        check_alpha_gamma(self.alpha, self.gamma)
    }

    pub fn from_upstairs(x: &LinearField, inputs: &[AlgebraElement]) -> Result<Self> {
        let drift = induced_drift_1p(0, x)?;
        let params = Self {
            lambda: drift.lambda,
            beta: drift.beta.unwrap_or_default(),
            alpha: drift.alpha,
            gamma: drift.gamma,
            inputs: inputs.iter().map(InducedInput::from_algebra).collect(),
        };
        params.validate()?;
        Ok(params)
    }

    /// `A = [[λ, α], [0, β]]`, `η = (0, γ)`.
    pub fn linear_field(&self) -> LinearField {
        LinearField::new(Mat2::new(self.lambda, self.alpha, 0.0, self.beta), Vec2::new(0.0, self.gamma))
    }

    fn eval(&self, omega: &[f64], s: f64, t: f64) -> [f64; 2] {
        let mut ds = self.beta * s;
        let mut dt = (self.lambda + self.beta) * t + 0.5 * self.alpha * s * s + self.gamma * s;
        for (inp, w) in self.inputs.iter().zip(omega) {
            ds += w * inp.b;
            dt += w * (inp.c + inp.a * s);
        }
        [ds, dt]
    }
}

impl ControlSystem<2> for Sigma10Params {
    fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    fn rhs(&self, omega: &[f64], x: &[f64; 2]) -> [f64; 2] {
        self.eval(omega, x[0], x[1])
    }

    fn validate(&self) -> Result<()> {
        Sigma10Params::validate(self)
    }
}

pub fn sigma_10_rhs(params: &Sigma10Params, omega: &[f64], q: &QuotientPoint1p) -> Result<[f64; 2]> {
    params.validate()?;
    check_omega(omega, params.inputs.len())?;
    if q.p != 0 {
        return Err(Error::InvalidParameter("Σ₁,₀ lives on ℝ² (p = 0)".into()));
    }
    Ok(params.eval(omega, q.s, q.t))
}

/// `Σ₀,ₚ` on `(𝕋 × ℝ) × 𝕋ᵖ`:
/// `u̇ = αs + Σωᵢaᵢ`, `ṡ = βs + Σωᵢbᵢ`,
/// `ṫ = βt + ½αs² + γs + Σωᵢcᵢ + (Σωᵢaᵢ)s`.
///
/// `β` is only admissible for `p = 0`; invariance of `ℤe₁ × ℤ` forces
/// `tr A = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigma0pParams {
    pub p: u8,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub inputs: Vec<InducedInput>,
}

impl Sigma0pParams {
    pub fn validate(&self) -> Result<()> {
        if self.p > 1 {
            return Err(Error::InvalidParameter(format!("p must be 0 or 1, got {}", self.p)));
        }
        if self.p == 1 && self.beta.abs() > ZERO {
            return Err(Error::InvalidParameter(format!(
                "beta = {} is not admissible on the quotient by Ze1 x Z (trace must vanish)",
                self.beta
            )));
        }
        check_inputs(self.inputs.len())?;
        check_alpha_gamma(self.alpha, self.gamma)
    }

    pub fn from_upstairs(p: u8, x: &LinearField, inputs: &[AlgebraElement]) -> Result<Self> {
        require_invariant(SubgroupKind::DiscreteLine { p }, x)?;
        let params = Self {
            p,
            beta: if p == 0 { x.a[(1, 1)] } else { 0.0 },
            alpha: x.a[(0, 1)],
            gamma: x.eta.y,
            inputs: inputs.iter().map(InducedInput::from_algebra).collect(),
        };
        params.validate()?;
        Ok(params)
    }

    /// `A = [[0, α], [0, β]]`, `η = (0, γ)`.
    pub fn linear_field(&self) -> LinearField {
        LinearField::new(Mat2::new(0.0, self.alpha, 0.0, self.beta), Vec2::new(0.0, self.gamma))
    }

    fn eval(&self, omega: &[f64], s: f64, t: f64) -> [f64; 3] {
        let mut du = self.alpha * s;
        let mut ds = self.beta * s;
        let mut dt = self.beta * t + 0.5 * self.alpha * s * s + self.gamma * s;
        for (inp, w) in self.inputs.iter().zip(omega) {
            du += w * inp.a;
            ds += w * inp.b;
            dt += w * (inp.c + inp.a * s);
        }
        [du, ds, dt]
    }
}

impl ControlSystem<3> for Sigma0pParams {
    fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    fn rhs(&self, omega: &[f64], x: &[f64; 3]) -> [f64; 3] {
        self.eval(omega, x[1], x[2])
    }

    fn wrap(&self, x: &mut [f64; 3]) {
        x[0] = wrap_unit(x[0]);
        if self.p == 1 {
            x[2] = wrap_unit(x[2]);
        }
    }

    fn validate(&self) -> Result<()> {
        Sigma0pParams::validate(self)
    }
}

pub fn sigma_0p_rhs(params: &Sigma0pParams, omega: &[f64], q: &QuotientPoint0p) -> Result<[f64; 3]> {
    params.validate()?;
    check_omega(omega, params.inputs.len())?;
    if q.p != params.p {
        return Err(Error::InvalidParameter(format!("quotient point has p = {}, system has p = {}", q.p, params.p)));
    }
    Ok(params.eval(omega, q.s, q.t))
}

/// Solution of `ṡ = −λs + bω` under a constant control:
/// `e^{−τλ}(s₀ − bω/λ) + bω/λ`, or `s₀ + bωτ` when `λ = 0`.
pub fn sigma_r_closed_form(lambda: f64, b: f64, s0: f64, omega: f64, tau: f64) -> f64 {
    if lambda == 0.0 {
        s0 + b * omega * tau
    } else {
        let fixed = b * omega / lambda;
        (-tau * lambda).exp() * (s0 - fixed) + fixed
    }
}

fn upstairs_trajectory(
    x: &LinearField,
    inputs: &[AlgebraElement],
    g0: &GroupElement,
    signal: &ControlSignal,
    dt: f64,
) -> Result<Trajectory<3>> {
    let sys = SigmaH::new(*x, inputs.to_vec())?;
    integrate(&sys, [g0.x(), g0.y(), g0.z], signal, dt)
}

fn state_to_group(x: &[f64; 3]) -> GroupElement {
    GroupElement::new(x[0], x[1], x[2])
}

/// Integrates `Σ_ℍ` from `g0` and the induced system on `(ℝe₁ × ℤp)∖ℍ` from
/// `π₁,ₚ(g0)` under the same signal, and returns the largest quotient
/// distance between `π₁,ₚ` of the upstairs state and the downstairs state.
pub fn conjugation_residual(
    x: &LinearField,
    inputs: &[AlgebraElement],
    p: u8,
    g0: &GroupElement,
    signal: &ControlSignal,
    dt: f64,
) -> Result<f64> {
    let q0 = project_1p(p, g0)?;
    let down = if p == 1 {
        let params = Sigma11Params::from_upstairs(x, inputs)?;
        integrate(&params, [q0.s, q0.t], signal, dt)?
    } else {
        let params = Sigma10Params::from_upstairs(x, inputs)?;
        integrate(&params, [q0.s, q0.t], signal, dt)?
    };
    let up = upstairs_trajectory(x, inputs, g0, signal, dt)?;
    compare_1p(p, &up, &down)
}

/// Same comparison against a caller-supplied downstairs system; used to
/// check that wrong induced coefficients are detected.
pub fn conjugation_residual_with<S: ControlSystem<2>>(
    x: &LinearField,
    inputs: &[AlgebraElement],
    p: u8,
    downstairs: &S,
    g0: &GroupElement,
    signal: &ControlSignal,
    dt: f64,
) -> Result<f64> {
    let q0 = project_1p(p, g0)?;
    let down = integrate(downstairs, [q0.s, q0.t], signal, dt)?;
    let up = upstairs_trajectory(x, inputs, g0, signal, dt)?;
    compare_1p(p, &up, &down)
}

fn compare_1p(p: u8, up: &Trajectory<3>, down: &Trajectory<2>) -> Result<f64> {
    let mut worst = 0.0f64;
    for (g, q) in up.states.iter().zip(&down.states) {
        let projected = project_1p(p, &state_to_group(g))?;
        let here = QuotientPoint1p::new(p, q[0], q[1])?;
        worst = worst.max(projected.distance(&here));
    }
    Ok(worst)
}

/// Conjugation residual for the quotient by `ℤe₁ × ℤp`.
pub fn conjugation_residual_0p(
    x: &LinearField,
    inputs: &[AlgebraElement],
    p: u8,
    g0: &GroupElement,
    signal: &ControlSignal,
    dt: f64,
) -> Result<f64> {
    let params = Sigma0pParams::from_upstairs(p, x, inputs)?;
    let q0 = project_0p(p, g0)?;
    let down = integrate(&params, [q0.u, q0.s, q0.t], signal, dt)?;
    let up = upstairs_trajectory(x, inputs, g0, signal, dt)?;
    let mut worst = 0.0f64;
    for (g, q) in up.states.iter().zip(&down.states) {
        let projected = project_0p(p, &state_to_group(g))?;
        let here = QuotientPoint0p::new(p, q[0], q[1], q[2])?;
        worst = worst.max(projected.distance(&here));
    }
    Ok(worst)
}
