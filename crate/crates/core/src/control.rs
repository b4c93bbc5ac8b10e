//! Control boxes, piecewise-constant signals and fixed-step RK4 integration
//! of control-affine systems.

use crate::error::{Error, Result};

/// Slack used when checking control values against the box.
const BOX_SLACK: f64 = 1e-12;

/// `Ω = Π [lowerᵢ, upperᵢ]` with `0` in its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ControlBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if !(1..=3).contains(&lower.len()) {
            return Err(Error::InvalidParameter(format!("control dimension must be 1..=3, got {}", lower.len())));
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !(lo.is_finite() && hi.is_finite() && *lo < 0.0 && 0.0 < *hi) {
                return Err(Error::InvalidParameter(format!(
                    "control interval [{lo}, {hi}] must contain 0 in its interior"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower], vec![upper])
    }

    pub fn symmetric(m: usize, radius: f64) -> Result<Self> {
        Self::new(vec![-radius; m], vec![radius; m])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, omega: &[f64]) -> bool {
        omega.len() == self.dim()
            && omega
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(w, (lo, hi))| *w >= lo - BOX_SLACK && *w <= hi + BOX_SLACK)
    }

    /// Tensor grid with `levels` uniformly spaced values per axis, endpoints
    /// included, in lexicographic order.
    pub fn grid(&self, levels: usize) -> Vec<Vec<f64>> {
        let levels = levels.max(2);
        let axis = |lo: f64, hi: f64| -> Vec<f64> {
            (0..levels).map(|i| lo + (hi - lo) * i as f64 / (levels - 1) as f64).collect()
        };
        let mut out = vec![Vec::new()];
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            let values = axis(*lo, *hi);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(*v);
                        next
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub duration: f64,
    pub value: Vec<f64>,
}

/// A piecewise-constant control with values in a [`ControlBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pieces: Vec<Piece>,
}

impl ControlSignal {
    pub fn new(pieces: Vec<Piece>, bounds: &ControlBox) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("control signal has no pieces".into()));
        }
        for piece in &pieces {
            if !(piece.duration.is_finite() && piece.duration > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "piece duration must be positive, got {}",
                    piece.duration
                )));
            }
            if piece.value.len() != bounds.dim() {
                return Err(Error::DimensionMismatch { expected: bounds.dim(), got: piece.value.len() });
            }
            if !bounds.contains(&piece.value) {
                return Err(Error::ControlOutOfBox { value: piece.value.clone() });
            }
        }
        Ok(Self { pieces })
    }

    /// A single constant piece.
    pub fn constant(value: Vec<f64>, duration: f64, bounds: &ControlBox) -> Result<Self> {
        Self::new(vec![Piece { duration, value }], bounds)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn duration(&self) -> f64 {
        self.pieces.iter().map(|p| p.duration).sum()
    }

    pub fn input_dim(&self) -> usize {
        self.pieces[0].value.len()
    }

    fn shortest_piece(&self) -> f64 {
        self.pieces.iter().map(|p| p.duration).fold(f64::INFINITY, f64::min)
    }
}

/// A control-affine system on an `N`-dimensional chart.
pub trait ControlSystem<const N: usize> {
    fn input_dim(&self) -> usize;

    fn rhs(&self, omega: &[f64], x: &[f64; N]) -> [f64; N];

    /// Reduces torus coordinates to `[0, 1)`.
    fn wrap(&self, _x: &mut [f64; N]) {}

    fn validate(&self) -> Result<()> {
        Ok(())
    }
}

/// The time-reversed system `ẋ = −f(x, ω)`.
pub struct Reversed<'a, S>(pub &'a S);

impl<const N: usize, S: ControlSystem<N>> ControlSystem<N> for Reversed<'_, S> {
    fn input_dim(&self) -> usize {
        self.0.input_dim()
    }

    fn rhs(&self, omega: &[f64], x: &[f64; N]) -> [f64; N] {
        self.0.rhs(omega, x).map(|v| -v)
    }

    fn wrap(&self, x: &mut [f64; N]) {
        self.0.wrap(x)
    }

    fn validate(&self) -> Result<()> {
        self.0.validate()
    }
}

#[inline]
fn axpy<const N: usize>(x: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| x[i] + h * k[i])
}

/// One classical RK4 step of length `h` under the constant control `omega`.
/// The result is not wrapped.
pub fn rk4_step<const N: usize, S: ControlSystem<N> + ?Sized>(
    sys: &S,
    omega: &[f64],
    x: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = sys.rhs(omega, x);
    let k2 = sys.rhs(omega, &axpy(x, 0.5 * h, &k1));
    let k3 = sys.rhs(omega, &axpy(x, 0.5 * h, &k2));
    let k4 = sys.rhs(omega, &axpy(x, h, &k3));
    std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub signal: ControlSignal,
}

impl<const N: usize> Trajectory<N> {
    pub fn final_state(&self) -> &[f64; N] {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

/// Fixed-step RK4 over a piecewise-constant signal.
///
/// Each piece is split into `ceil(duration / dt)` equal steps so that every
/// switching time is hit exactly; torus coordinates are wrapped after each
/// step.
pub fn integrate<const N: usize, S: ControlSystem<N> + ?Sized>(
    sys: &S,
    x0: [f64; N],
    signal: &ControlSignal,
    dt: f64,
) -> Result<Trajectory<N>> {
    sys.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    // Allow for rounding in durations built as sums of steps.
    if dt > signal.shortest_piece() * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "dt = {dt} exceeds the shortest piece duration {}",
            signal.shortest_piece()
        )));
    }
    if signal.input_dim() != sys.input_dim() {
        return Err(Error::DimensionMismatch { expected: sys.input_dim(), got: signal.input_dim() });
    }

    let mut x = x0;
    sys.wrap(&mut x);
    let mut times = vec![0.0];
    let mut states = vec![x];
    let mut t0 = 0.0;
    for piece in signal.pieces() {
        let steps = (piece.duration / dt - 1e-9).ceil().max(1.0) as usize;
        let h = piece.duration / steps as f64;
        for k in 1..=steps {
            x = rk4_step(sys, &piece.value, &x, h);
            let t = t0 + h * k as f64;
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { time: t });
            }
            sys.wrap(&mut x);
            times.push(t);
            states.push(x);
        }
        t0 += piece.duration;
    }
    Ok(Trajectory { times, states, signal: signal.clone() })
}
