//! Closed subgroups of the Heisenberg group in canonical form, the coset
//! spaces they define, and flow-invariance of a linear vector field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heisenberg::{GroupElement, LinearField};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Canonical representatives of the closed subgroups, up to automorphism.
///
/// `p ∈ {0, 1}` selects `ℤp = {0}` or `ℤ` unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    /// `(ℝ × ℤp) × ℝ`.
    Dim2 { p: u8 },
    /// `ℤᵏ × ℝ`, `k ∈ {0, 1, 2}`.
    LatticeCylinder { k: u8 },
    /// `ℝe₁ × ℤp`.
    LineTimesLattice { p: u8 },
    /// `ℤe₁ × ℤp`.
    DiscreteLine { p: u8 },
    /// `{0} × ℤ`.
    CenterLattice,
    /// `ℤ² × ℤ(1/p)`, `p ≥ 1`.
    FullLattice { p: u32 },
}

impl SubgroupKind {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SubgroupKind::Dim2 { p } | SubgroupKind::LineTimesLattice { p } | SubgroupKind::DiscreteLine { p } => {
                p <= 1
            }
            SubgroupKind::LatticeCylinder { k } => k <= 2,
            SubgroupKind::CenterLattice => true,
            SubgroupKind::FullLattice { p } => p >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid subgroup parameters {self:?}")))
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            SubgroupKind::Dim2 { .. } => 2,
            SubgroupKind::LatticeCylinder { .. } | SubgroupKind::LineTimesLattice { .. } => 1,
            _ => 0,
        }
    }

    /// The five kinds for which a flow-invariance criterion exists.
    pub fn has_invariance_criterion(&self) -> bool {
        matches!(
            self,
            SubgroupKind::FullLattice { .. }
                | SubgroupKind::DiscreteLine { .. }
                | SubgroupKind::LineTimesLattice { .. }
        )
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, SubgroupKind::Dim2 { .. } | SubgroupKind::LatticeCylinder { .. } | SubgroupKind::CenterLattice)
    }

    pub fn contains(&self, g: &GroupElement, tol: f64) -> bool {
        let (x, y, z) = (g.x(), g.y(), g.z);
        let zero = |w: f64| w.abs() <= tol;
        let int = |w: f64| (w - w.round()).abs() <= tol;
        let in_pz = |w: f64, p: u8| if p == 0 { zero(w) } else { int(w) };
        match *self {
            SubgroupKind::Dim2 { p } => in_pz(y, p),
            SubgroupKind::LatticeCylinder { k } => match k {
                0 => zero(x) && zero(y),
                1 => int(x) && zero(y),
                _ => int(x) && int(y),
            },
            SubgroupKind::LineTimesLattice { p } => zero(y) && in_pz(z, p),
            SubgroupKind::DiscreteLine { p } => int(x) && zero(y) && in_pz(z, p),
            SubgroupKind::CenterLattice => zero(x) && zero(y) && int(z),
            SubgroupKind::FullLattice { p } => {
                let p = f64::from(p);
                int(x) && int(y) && (z - (p * z).round() / p).abs() <= tol
            }
        }
    }

    /// Draws a member: lattice indices in `[-lattice, lattice]`, continuous
    /// coordinates uniform in `[-span, span]`.
    pub fn sample_member<R: Rng>(&self, rng: &mut R, lattice: i32, span: f64) -> GroupElement {
        let mut n = || f64::from(rng.random_range(-lattice..=lattice));
        let (nx, ny, nz) = (n(), n(), n());
        let mut c = || rng.random_range(-span..=span);
        let (cx, cz) = (c(), c());
        let pz = |p: u8, n: f64| if p == 0 { 0.0 } else { n };
        match *self {
            SubgroupKind::Dim2 { p } => GroupElement::new(cx, pz(p, ny), cz),
            SubgroupKind::LatticeCylinder { k } => match k {
                0 => GroupElement::new(0.0, 0.0, cz),
                1 => GroupElement::new(nx, 0.0, cz),
                _ => GroupElement::new(nx, ny, cz),
            },
            SubgroupKind::LineTimesLattice { p } => GroupElement::new(cx, 0.0, pz(p, nz)),
            SubgroupKind::DiscreteLine { p } => GroupElement::new(nx, 0.0, pz(p, nz)),
            SubgroupKind::CenterLattice => GroupElement::new(0.0, 0.0, nz),
            SubgroupKind::FullLattice { p } => GroupElement::new(nx, ny, nz / f64::from(p)),
        }
    }
}

/// Fractional part in `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance between two reals on `ℝ/ℤ`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = a - b;
    (d - d.round()).abs()
}

fn class_distance(p: u8, a: f64, b: f64) -> f64 {
    if p == 0 {
        (a - b).abs()
    } else {
        circular_distance(a, b)
    }
}

fn class_rep(p: u8, a: f64) -> f64 {
    if p == 0 {
        a
    } else {
        wrap_unit(a)
    }
}

/// `z + ½xy`, the center coordinate that is constant along `ℝe₁`-cosets.
#[inline]
pub fn shifted_center(g: &GroupElement) -> f64 {
    g.z + 0.5 * g.x() * g.y()
}

fn check_p(p: u8) -> Result<()> {
    if p <= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must be 0 or 1, got {p}")))
    }
}

/// A point of `(ℤe₁ × ℤp)∖ℍ ≅ (𝕋 × ℝ) × 𝕋ᵖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientPoint0p {
    pub p: u8,
    pub u: f64,
    pub s: f64,
    pub t: f64,
}

impl QuotientPoint0p {
    pub fn new(p: u8, u: f64, s: f64, t: f64) -> Result<Self> {
        check_p(p)?;
        Ok(Self { p, u: wrap_unit(u), s, t: class_rep(p, t) })
    }

    pub fn distance(&self, other: &QuotientPoint0p) -> f64 {
        circular_distance(self.u, other.u).max((self.s - other.s).abs()).max(class_distance(self.p, self.t, other.t))
    }
}

/// A point of `(ℝe₁ × ℤp)∖ℍ ≅ ℝ × 𝕋ᵖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientPoint1p {
    pub p: u8,
    pub s: f64,
    pub t: f64,
}

impl QuotientPoint1p {
    pub fn new(p: u8, s: f64, t: f64) -> Result<Self> {
        check_p(p)?;
        Ok(Self { p, s, t: class_rep(p, t) })
    }

    /// `max(|Δs|, d(t₁, t₂))` with the circular distance when `p = 1`.
    pub fn distance(&self, other: &QuotientPoint1p) -> f64 {
        (self.s - other.s).abs().max(class_distance(self.p, self.t, other.t))
    }
}

/// Same coset of `ℤe₁ × ℤp`.
pub fn coset_equal_0p(p: u8, g1: &GroupElement, g2: &GroupElement, tol: f64) -> Result<bool> {
    check_p(p)?;
    Ok(circular_distance(g1.x(), g2.x()) <= tol
        && (g1.y() - g2.y()).abs() <= tol
        && class_distance(p, shifted_center(g1), shifted_center(g2)) <= tol)
}

/// Same coset of `ℝe₁ × ℤp`.
pub fn coset_equal_1p(p: u8, g1: &GroupElement, g2: &GroupElement, tol: f64) -> Result<bool> {
    check_p(p)?;
    Ok((g1.y() - g2.y()).abs() <= tol && class_distance(p, shifted_center(g1), shifted_center(g2)) <= tol)
}

/// `((x, y), z) ↦ ([x], y, [z + ½xy]ₚ)`.
pub fn project_0p(p: u8, g: &GroupElement) -> Result<QuotientPoint0p> {
    QuotientPoint0p::new(p, g.x(), g.y(), shifted_center(g))
}

/// `((x, y), z) ↦ (y, [z + ½xy]ₚ)`.
pub fn project_1p(p: u8, g: &GroupElement) -> Result<QuotientPoint1p> {
    QuotientPoint1p::new(p, g.y(), shifted_center(g))
}

/// One algebraic condition of an invariance criterion, with its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub residual: f64,
    /// False for the normal-form clause "α = 0 if η ≠ 0", which the flow
    /// itself does not need: points of the subgroup stay put either way.
    pub needed_by_flow: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub kind: SubgroupKind,
    pub tol: f64,
    pub conditions: Vec<Condition>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|c| c.residual <= self.tol)
    }

    pub fn violated(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.residual > self.tol)
    }

    /// Largest residual among the conditions the flow actually depends on.
    pub fn flow_margin(&self) -> f64 {
        self.conditions.iter().filter(|c| c.needed_by_flow).map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Evaluates the invariance criterion for `kind` on `(A, η)`.
pub fn invariance_report(kind: SubgroupKind, x: &LinearField, tol: f64) -> Result<InvarianceReport> {
    kind.validate()?;
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let a = &x.a;
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let cond = |name, residual: f64| Condition { name, residual, needed_by_flow: true };
    let eta_axis = cond("eta in R e2", x.eta.x.abs());
    let normal_form =
        Condition { name: "alpha = 0 if eta != 0", residual: a12.abs().min(x.eta.y.abs()), needed_by_flow: false };
    let conditions = match kind {
        SubgroupKind::FullLattice { .. } => vec![cond("A = 0", a.amax()), cond("eta = 0", x.eta.amax())],
        SubgroupKind::DiscreteLine { p: 0 } => vec![cond("Ae1 = 0", a11.abs().max(a21.abs())), eta_axis, normal_form],
        SubgroupKind::DiscreteLine { .. } => {
            vec![cond("Ae1 = 0", a11.abs().max(a21.abs())), cond("Ae2 = alpha e1", a22.abs()), eta_axis, normal_form]
        }
        SubgroupKind::LineTimesLattice { p: 0 } => vec![cond("Ae1 = lambda e1", a21.abs()), eta_axis, normal_form],
        SubgroupKind::LineTimesLattice { .. } => vec![
            cond("Ae1 = lambda e1", a21.abs()),
            cond("Ae2 = -lambda e2 + alpha e1", (a22 + a11).abs()),
            eta_axis,
            normal_form,
        ],
        other => return Err(Error::UnsupportedKind(other)),
    };
    Ok(InvarianceReport { kind, tol, conditions })
}

pub fn is_invariant(kind: SubgroupKind, x: &LinearField, tol: f64) -> Result<bool> {
    invariance_report(kind, x, tol).map(|r| r.holds())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceConfig {
    pub samples: usize,
    pub times: Vec<f64>,
    pub tol: f64,
    pub lattice: i32,
    pub span: f64,
    pub seed: u64,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            times: vec![-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0],
            tol: DEFAULT_TOL,
            lattice: 5,
            span: 10.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample {
    pub member: GroupElement,
    pub time: f64,
    pub image: GroupElement,
}

/// Pushes sampled members of `kind` through the flow and returns the first
/// image (in sample order) that leaves the subgroup.
///
/// A hit refutes invariance; finding none is only evidence.
pub fn find_flow_violation(kind: SubgroupKind, x: &LinearField, cfg: &BruteForceConfig) -> Option<Counterexample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let members: Vec<GroupElement> =
        (0..cfg.samples.max(1)).map(|_| kind.sample_member(&mut rng, cfg.lattice, cfg.span)).collect();
    members.par_iter().find_map_first(|g| {
        cfg.times.iter().find_map(|&t| {
            let image = x.flow(t, g);
            (!kind.contains(&image, cfg.tol)).then_some(Counterexample { member: *g, time: t, image })
        })
    })
}

pub fn is_invariant_bruteforce(kind: SubgroupKind, x: &LinearField, cfg: &BruteForceConfig) -> bool {
    find_flow_violation(kind, x, cfg).is_none()
}
