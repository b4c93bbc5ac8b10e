//! Lie algebra rank condition for the one-input system on `ℝ × 𝕋`.
//!
//! Two independent routes: the closed-form criterion on the coefficients, and
//! the numerical rank of iterated brackets of polynomial vector fields.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::induced::Sigma11Params;

/// Threshold under which a criterion term counts as zero.
pub const LARC_ZERO: f64 = 1e-12;

/// Singular values above this count towards the rank.
pub const RANK_TOL: f64 = 1e-9;

/// The two terms `b(2aλ + bα)` and `b(bγ + λc)`; the system satisfies the
/// rank condition iff one of them is nonzero.
pub fn larc_terms(params: &Sigma11Params) -> Result<(f64, f64)> {
    params.validate()?;
    let inp = params.single_input()?;
    let (a, b, c) = (inp.a, inp.b, inp.c);
    let (lambda, alpha, gamma) = (params.lambda, params.alpha, params.gamma);
    Ok((b * (2.0 * a * lambda + b * alpha), b * (b * gamma + lambda * c)))
}

pub fn larc_predicate(params: &Sigma11Params) -> Result<bool> {
    let (first, second) = larc_terms(params)?;
    Ok(first.abs() > LARC_ZERO || second.abs() > LARC_ZERO)
}

/// A polynomial in `(s, t)`, stored as `(deg_s, deg_t) ↦ coefficient`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: f64, ds: u32, dt: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((ds, dt), c);
        p
    }

    /// `Σ coeffs[k] sᵏ`.
    pub fn in_s(coeffs: &[f64]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term((k as u32, 0), *c);
        }
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(key).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), c)| c * s.powi(i as i32) * t.powi(j as i32)).sum()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, *c);
        }
        out
    }

    pub fn scale(&self, k: f64) -> Poly {
        let mut out = Poly::zero();
        for (key, c) in &self.terms {
            out.add_term(*key, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// Partial derivative along coordinate `axis` (0 = s, 1 = t).
    pub fn partial(&self, axis: usize) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            match axis {
                0 if i > 0 => out.add_term((i - 1, j), c * f64::from(i)),
                1 if j > 0 => out.add_term((i, j - 1), c * f64::from(j)),
                _ => {}
            }
        }
        out
    }
}

/// A polynomial vector field on the `(s, t)` chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField(pub [Poly; 2]);

impl PolyField {
    pub fn eval(&self, s: f64, t: f64) -> [f64; 2] {
        [self.0[0].eval(s, t), self.0[1].eval(s, t)]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// `[X, Y] = J_Y X − J_X Y` with exact polynomial Jacobians.
    pub fn bracket(&self, other: &PolyField) -> PolyField {
        let component = |i: usize| {
            (0..2).fold(Poly::zero(), |acc, j| {
                acc.add(&other.0[i].partial(j).mul(&self.0[j])).add(&self.0[i].partial(j).mul(&other.0[j]).scale(-1.0))
            })
        };
        PolyField([component(0), component(1)])
    }
}

/// Drift `(−λs, ½αs² + γs)` and input `(b, c + as)` of a one-input system.
pub fn sigma_11_fields(params: &Sigma11Params) -> Result<(PolyField, PolyField)> {
    params.validate()?;
    let inp = params.single_input()?;
    let drift = PolyField([Poly::in_s(&[0.0, -params.lambda]), Poly::in_s(&[0.0, params.gamma, 0.5 * params.alpha])]);
    let input = PolyField([Poly::constant(inp.b), Poly::in_s(&[inp.c, inp.a])]);
    Ok((drift, input))
}

/// The generators followed by every left-nested bracket
/// `[[[g₁, g₂], g₃], …]` of length up to `depth`.
pub fn iterated_brackets(generators: &[PolyField], depth: usize) -> Vec<PolyField> {
    let mut all: Vec<PolyField> = generators.to_vec();
    let mut level: Vec<PolyField> = generators.to_vec();
    for _ in 1..depth {
        level =
            level.iter().flat_map(|f| generators.iter().map(move |g| f.bracket(g))).filter(|f| !f.is_zero()).collect();
        all.extend(level.iter().cloned());
    }
    all
}

/// Dimension of the span of the bracket fields at `(s, t)`.
pub fn larc_numeric_rank(params: &Sigma11Params, s: f64, t: f64, depth: usize) -> Result<usize> {
    if depth < 2 {
        return Err(crate::Error::InvalidParameter(format!("bracket depth must be >= 2, got {depth}")));
    }
    let (drift, input) = sigma_11_fields(params)?;
    let fields = iterated_brackets(&[drift, input], depth);
    let columns: Vec<f64> = fields.iter().flat_map(|f| f.eval(s, t)).collect();
    let m = DMatrix::from_column_slice(2, fields.len(), &columns);
    let svd = m.svd(false, false);
    Ok(svd.singular_values.iter().filter(|&&v| v > RANK_TOL).count())
}
