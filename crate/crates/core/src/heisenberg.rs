//! The Heisenberg group realized as `ℝ² × ℝ`, its Lie algebra, derivations,
//! automorphisms and the closed-form flows of linear vector fields.
//!
//! Points are `(v, z)` with product
//! `(v₁, z₁) ∗ (v₂, z₂) = (v₁ + v₂, z₁ + z₂ + ½⟨v₁, θv₂⟩)`,
//! where `θ(x, y) = (−y, x)` is the counter-clockwise quarter turn. In these
//! coordinates the exponential map is the identity.

use std::ops::Mul;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::expm::{expm, lambda_operator};

pub type Vec2 = Vector2<f64>;
pub type Vec3 = Vector3<f64>;
pub type Mat2 = Matrix2<f64>;
pub type Mat3 = Matrix3<f64>;

/// Counter-clockwise rotation by π/2.
#[inline]
pub fn theta(v: &Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// `⟨u, θv⟩ = u_y v_x − u_x v_y`.
#[inline]
pub fn skew(u: &Vec2, v: &Vec2) -> f64 {
    u.dot(&theta(v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub v: Vec2,
    pub z: f64,
}

impl GroupElement {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { v: Vec2::new(x, y), z }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn x(&self) -> f64 {
        self.v.x
    }

    pub fn y(&self) -> f64 {
        self.v.y
    }

    pub fn multiply(&self, other: &GroupElement) -> GroupElement {
        GroupElement { v: self.v + other.v, z: self.z + other.z + 0.5 * skew(&self.v, &other.v) }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { v: -self.v, z: -self.z }
    }

    /// Stacks `(v, z)` as a column vector.
    pub fn to_vector(&self) -> Vec3 {
        Vec3::new(self.v.x, self.v.y, self.z)
    }

    pub fn from_vector(w: &Vec3) -> Self {
        Self::new(w.x, w.y, w.z)
    }

    pub fn is_finite(&self) -> bool {
        self.v.x.is_finite() && self.v.y.is_finite() && self.z.is_finite()
    }

    /// Component-wise max distance.
    pub fn distance_inf(&self, other: &GroupElement) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.multiply(&rhs)
    }
}

/// An element `B = (ζ, α)` of the Lie algebra, identified with the
/// left-invariant vector field it generates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    pub zeta: Vec2,
    pub alpha: f64,
}

impl AlgebraElement {
    pub fn new(zeta_x: f64, zeta_y: f64, alpha: f64) -> Self {
        Self { zeta: Vec2::new(zeta_x, zeta_y), alpha }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn to_vector(&self) -> Vec3 {
        Vec3::new(self.zeta.x, self.zeta.y, self.alpha)
    }

    pub fn from_vector(w: &Vec3) -> Self {
        Self::new(w.x, w.y, w.z)
    }

    /// `[(ζ₁, α₁), (ζ₂, α₂)] = (0, ⟨ζ₁, θζ₂⟩)`.
    pub fn bracket(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { zeta: Vec2::zeros(), alpha: skew(&self.zeta, &other.zeta) }
    }

    /// Value of the left-invariant field at `g`: `(ζ, α + ½⟨v, θζ⟩)`.
    pub fn left_invariant_eval(&self, g: &GroupElement) -> Vec3 {
        Vec3::new(self.zeta.x, self.zeta.y, self.alpha + 0.5 * skew(&g.v, &self.zeta))
    }
}

/// A linear vector field, given by the derivation
/// `D = [[A, 0], [ηᵀ, tr A]]` of the Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub a: Mat2,
    pub eta: Vec2,
}

impl LinearField {
    pub fn new(a: Mat2, eta: Vec2) -> Self {
        Self { a, eta }
    }

    pub fn zero() -> Self {
        Self::new(Mat2::zeros(), Vec2::zeros())
    }

    pub fn trace(&self) -> f64 {
        self.a.trace()
    }

    pub fn derivation(&self) -> Mat3 {
        let a = &self.a;
        #[rustfmt::skip]
        let d = Mat3::new(
            a[(0, 0)],  a[(0, 1)],  0.0,
            a[(1, 0)],  a[(1, 1)],  0.0,
            self.eta.x, self.eta.y, self.trace(),
        );
        d
    }

    /// `D B` for an algebra element.
    pub fn derive(&self, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_vector(&(self.derivation() * b.to_vector()))
    }

    /// `𝒳(v, z) = (A v, ⟨η, v⟩ + z tr A)`.
    pub fn eval(&self, g: &GroupElement) -> Vec3 {
        let av = self.a * g.v;
        Vec3::new(av.x, av.y, self.eta.dot(&g.v) + g.z * self.trace())
    }

    /// The integrated row `e^{t tr A} Λ_t^{A − tr A·I}(η)` that couples `v`
    /// into the center coordinate of the flow.
    fn coupling(&self, t: f64) -> Vec2 {
        let tr = self.trace();
        let shifted = self.a - Mat2::identity() * tr;
        lambda_operator(&shifted, &self.eta, t) * (t * tr).exp()
    }

    /// Closed-form `e^{tD}`.
    pub fn exp_td(&self, t: f64) -> Mat3 {
        let eta_a = expm(&(self.a * t));
        let row = self.coupling(t);
        #[rustfmt::skip]
        let m = Mat3::new(
            eta_a[(0, 0)], eta_a[(0, 1)], 0.0,
            eta_a[(1, 0)], eta_a[(1, 1)], 0.0,
            row.x,         row.y,         (t * self.trace()).exp(),
        );
        m
    }

    /// The flow `φ_t(v, z) = (e^{tA} v, ⟨e^{t tr A} Λ_t^{A − tr A·I} η, v⟩ + z e^{t tr A})`.
    pub fn flow(&self, t: f64, g: &GroupElement) -> GroupElement {
        let v = expm(&(self.a * t)) * g.v;
        let z = self.coupling(t).dot(&g.v) + g.z * (t * self.trace()).exp();
        GroupElement { v, z }
    }

    /// `φ_t` as an automorphism `(P, η')` with `P = e^{tA}`.
    pub fn flow_automorphism(&self, t: f64) -> GroupAutomorphism {
        GroupAutomorphism { p: expm(&(self.a * t)), eta: self.coupling(t) }
    }
}

/// An automorphism `(v, z) ↦ (P v, ⟨η, v⟩ + z det P)` with `P` invertible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupAutomorphism {
    p: Mat2,
    eta: Vec2,
}

impl GroupAutomorphism {
    pub fn new(p: Mat2, eta: Vec2) -> Result<Self> {
        let det = p.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularAutomorphism { det });
        }
        Ok(Self { p, eta })
    }

    pub fn p(&self) -> &Mat2 {
        &self.p
    }

    pub fn eta(&self) -> &Vec2 {
        &self.eta
    }

    pub fn matrix(&self) -> Mat3 {
        let p = &self.p;
        #[rustfmt::skip]
        let m = Mat3::new(
            p[(0, 0)],  p[(0, 1)],  0.0,
            p[(1, 0)],  p[(1, 1)],  0.0,
            self.eta.x, self.eta.y, p.determinant(),
        );
        m
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        GroupElement { v: self.p * g.v, z: self.eta.dot(&g.v) + g.z * self.p.determinant() }
    }
}
