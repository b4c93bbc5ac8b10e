//! Occupancy-grid estimates of reachable sets and control sets on two-dimensional
//! quotient charts.
//!
//! The fill is a Dijkstra-style sweep over arrival time.
//! - Popping a cell integrates one constant-control path per control level
//!   from the cell center.
//! - Every substep marks the cell it lands in, with the elapsed time.
//!
//! Marking along the whole path, not only at the end of a dwell, keeps the
//! fill from stalling near attracting boundaries. There a single dwell would
//! land back in the starting cell.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::analysis::control_sets::{control_set_sigma_r, ControlSetDescription, IntervalSet};
use crate::control::{rk4_step, ControlBox, ControlSystem, Reversed};
use crate::error::{Error, Result};
use crate::induced::Sigma11Params;
use crate::subgroups::{wrap_unit, QuotientPoint1p};

/// Smallest accepted cell count per axis.
pub const MIN_CELLS: usize = 8;

/// Half-width of the default window when the predicted set is the whole line.
pub const WHOLE_LINE_WINDOW: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// `s` window; `None` derives it from the closed-form control set.
    pub s_range: Option<(f64, f64)>,
    /// `t` window; `None` is the torus `[0, 1)`.
    pub t_range: Option<(f64, f64)>,
    pub s_cells: usize,
    pub t_cells: usize,
    /// Uniform values per control axis.
    pub control_levels: usize,
    /// Duration of one dwell.
    pub dwell: f64,
    /// RK4 steps per dwell.
    pub substeps: usize,
    /// Dwells integrated along each constant-control path.
    pub dwells_per_path: usize,
    /// Arrival-time horizon `T`.
    pub horizon: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            s_range: None,
            t_range: None,
            s_cells: 200,
            t_cells: 200,
            control_levels: 9,
            dwell: 0.05,
            substeps: 5,
            dwells_per_path: 40,
            horizon: 20.0,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.s_cells < MIN_CELLS || self.t_cells < MIN_CELLS {
            return bad(format!(
                "grid resolution must be >= {MIN_CELLS} per axis, got {} x {}",
                self.s_cells, self.t_cells
            ));
        }
        if self.control_levels < 2 {
            return bad(format!("need at least 2 control levels, got {}", self.control_levels));
        }
        if !(self.dwell.is_finite() && self.dwell > 0.0) {
            return bad(format!("dwell must be positive, got {}", self.dwell));
        }
        if self.substeps == 0 || self.dwells_per_path == 0 {
            return bad("substeps and dwells_per_path must be positive".into());
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        for (name, range) in [("s", self.s_range), ("t", self.t_range)] {
            if let Some((lo, hi)) = range {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad(format!("{name} window [{lo}, {hi}] is empty or not finite"));
                }
            }
        }
        Ok(())
    }

    /// RK4 step length.
    pub fn dt(&self) -> f64 {
        self.dwell / self.substeps as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// Forward and backward fills share no cell.
    EmptyIntersection,
    /// Some path left the `s` window; the cells beyond it were dropped.
    WindowEscape,
    /// Fewer than half of the torus columns hold an occupied cell.
    DegenerateTorusBand { t_cells_occupied: usize },
}

/// Boolean occupancy over `s_range × t_range`, stored `s`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEstimate {
    pub s_range: (f64, f64),
    /// `None` is the torus `[0, 1)`.
    pub t_range: Option<(f64, f64)>,
    pub s_cells: usize,
    pub t_cells: usize,
    pub occupancy: Vec<bool>,
    pub horizon: f64,
    pub control_levels: usize,
    pub dt: f64,
    /// Some path left the window.
    pub escaped: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl RegionEstimate {
    fn empty(s_range: (f64, f64), t_range: Option<(f64, f64)>, cfg: &GridConfig) -> Self {
        Self {
            s_range,
            t_range,
            s_cells: cfg.s_cells,
            t_cells: cfg.t_cells,
            occupancy: vec![false; cfg.s_cells * cfg.t_cells],
            horizon: cfg.horizon,
            control_levels: cfg.control_levels,
            dt: cfg.dt(),
            escaped: false,
            diagnostics: Vec::new(),
        }
    }

    pub fn is_torus(&self) -> bool {
        self.t_range.is_none()
    }

    fn t_bounds(&self) -> (f64, f64) {
        self.t_range.unwrap_or((0.0, 1.0))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.t_cells + j
    }

    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.occupancy[self.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    pub fn s_width(&self) -> f64 {
        (self.s_range.1 - self.s_range.0) / self.s_cells as f64
    }

    pub fn t_width(&self) -> f64 {
        let (lo, hi) = self.t_bounds();
        (hi - lo) / self.t_cells as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        let (t_lo, _) = self.t_bounds();
        [self.s_range.0 + (i as f64 + 0.5) * self.s_width(), t_lo + (j as f64 + 0.5) * self.t_width()]
    }

    /// Cell holding `(s, t)`; `None` outside the window. The torus axis wraps.
    pub fn cell_of(&self, s: f64, t: f64) -> Option<(usize, usize)> {
        let i = axis_cell(s, self.s_range.0, self.s_range.1, self.s_cells)?;
        let j = match self.t_range {
            None => ((wrap_unit(t) * self.t_cells as f64).floor() as usize).min(self.t_cells - 1),
            Some((lo, hi)) => axis_cell(t, lo, hi, self.t_cells)?,
        };
        Some((i, j))
    }

    /// Number of `t` columns holding at least one occupied cell.
    pub fn occupied_t_columns(&self) -> usize {
        (0..self.t_cells).filter(|&j| (0..self.s_cells).any(|i| self.occupied(i, j))).count()
    }

    /// `(s_lo, s_hi, t_lo, t_hi)` spanned by the occupied cells, by cell edges.
    pub fn bounding_box(&self) -> Option<(f64, f64, f64, f64)> {
        let rows: Vec<usize> = (0..self.s_cells).filter(|&i| (0..self.t_cells).any(|j| self.occupied(i, j))).collect();
        let cols: Vec<usize> = (0..self.t_cells).filter(|&j| (0..self.s_cells).any(|i| self.occupied(i, j))).collect();
        let (i0, i1) = (*rows.first()?, *rows.last()?);
        let (j0, j1) = (*cols.first()?, *cols.last()?);
        let (t_lo, _) = self.t_bounds();
        Some((
            self.s_range.0 + i0 as f64 * self.s_width(),
            self.s_range.0 + (i1 + 1) as f64 * self.s_width(),
            t_lo + j0 as f64 * self.t_width(),
            t_lo + (j1 + 1) as f64 * self.t_width(),
        ))
    }

    /// Occupied cells with an unoccupied 4-neighbour or on the `s` edge of
    /// the window; on the torus the `t` axis wraps.
    pub fn perimeter_cells(&self) -> usize {
        let mut n = 0;
        for i in 0..self.s_cells {
            for j in 0..self.t_cells {
                if self.occupied(i, j) && self.on_perimeter(i, j) {
                    n += 1;
                }
            }
        }
        n
    }

    fn on_perimeter(&self, i: usize, j: usize) -> bool {
        if i == 0 || i + 1 == self.s_cells || !self.occupied(i - 1, j) || !self.occupied(i + 1, j) {
            return true;
        }
        let (prev, next) = if self.is_torus() {
            (Some((j + self.t_cells - 1) % self.t_cells), Some((j + 1) % self.t_cells))
        } else {
            (j.checked_sub(1), (j + 1 < self.t_cells).then_some(j + 1))
        };
        [prev, next].iter().any(|n| n.is_none_or(|k| !self.occupied(i, k)))
    }

    /// Cells occupied in exactly one of `self` and `other`.
    pub fn symmetric_difference(&self, other: &[bool]) -> Result<usize> {
        if other.len() != self.occupancy.len() {
            return Err(Error::DimensionMismatch { expected: self.occupancy.len(), got: other.len() });
        }
        Ok(self.occupancy.iter().zip(other).filter(|(a, b)| a != b).count())
    }

    /// Rasterises `description` onto this grid: a cell is occupied iff its
    /// center lies in the closure of the set.
    pub fn rasterize(&self, description: &ControlSetDescription) -> Vec<bool> {
        let mut out = vec![false; self.occupancy.len()];
        for i in 0..self.s_cells {
            let [s, _] = self.cell_center(i, 0);
            if description.base.closure_contains(s) {
                for j in 0..self.t_cells {
                    out[self.index(i, j)] = true;
                }
            }
        }
        out
    }

    /// Every cell of the window is occupied.
    pub fn is_full(&self) -> bool {
        self.occupancy.iter().all(|&o| o)
    }

    fn push_band_diagnostic(&mut self) {
        if self.is_torus() {
            let t_cells_occupied = self.occupied_t_columns();
            if 2 * t_cells_occupied < self.t_cells {
                self.diagnostics.push(Diagnostic::DegenerateTorusBand { t_cells_occupied });
            }
        }
    }
}

fn axis_cell(x: f64, lo: f64, hi: f64, n: usize) -> Option<usize> {
    if !(x >= lo && x <= hi) {
        return None;
    }
    Some((((x - lo) / (hi - lo) * n as f64).floor() as usize).min(n - 1))
}

/// Forward occupancy of a generic two-dimensional system from `q0`.
///
/// A cell is marked when some discretised trajectory from `q0` reaches it
/// within the horizon.
pub fn reachable_grid_system<S: ControlSystem<2> + ?Sized>(
    sys: &S,
    bounds: &ControlBox,
    q0: [f64; 2],
    s_range: (f64, f64),
    cfg: &GridConfig,
) -> Result<RegionEstimate> {
    cfg.validate()?;
    sys.validate()?;
    if bounds.dim() != sys.input_dim() {
        return Err(Error::DimensionMismatch { expected: sys.input_dim(), got: bounds.dim() });
    }
    if !(s_range.0.is_finite() && s_range.1.is_finite() && s_range.0 < s_range.1) {
        return Err(Error::InvalidParameter(format!("s window {s_range:?} is empty or not finite")));
    }
    let mut est = RegionEstimate::empty(s_range, cfg.t_range, cfg);
    let seed = est
        .cell_of(q0[0], q0[1])
        .ok_or_else(|| Error::InvalidParameter(format!("initial point {q0:?} lies outside the grid window")))?;

    let controls = bounds.grid(cfg.control_levels);
    let h = cfg.dt();
    let mut best = vec![f64::INFINITY; est.occupancy.len()];
    let mut heap = BinaryHeap::new();
    let seed_idx = est.index(seed.0, seed.1);
    best[seed_idx] = 0.0;

    // Arrival times are non-negative, so their bit patterns order like the values.
    let expand = |start: [f64; 2], t0: f64, best: &mut Vec<f64>, heap: &mut BinaryHeap<_>, est: &mut RegionEstimate| {
        for omega in &controls {
            let mut x = start;
            'path: for step in 1..=cfg.dwells_per_path * cfg.substeps {
                let arrival = t0 + step as f64 * h;
                if arrival > cfg.horizon * (1.0 + 1e-12) {
                    break;
                }
                x = rk4_step(sys, omega, &x, h);
                if x.iter().any(|v| !v.is_finite()) {
                    break;
                }
                sys.wrap(&mut x);
                if est.is_torus() {
                    x[1] = wrap_unit(x[1]);
                }
                let Some((i, j)) = est.cell_of(x[0], x[1]) else {
                    est.escaped = true;
                    break 'path;
                };
                let idx = est.index(i, j);
                if arrival < best[idx] {
                    best[idx] = arrival;
                    heap.push(Reverse((arrival.to_bits(), idx)));
                }
            }
        }
    };

    // The seed is expanded from `q0` itself, every other cell from its center.
    expand(q0, 0.0, &mut best, &mut heap, &mut est);
    while let Some(Reverse((bits, idx))) = heap.pop() {
        let arrival = f64::from_bits(bits);
        if arrival > best[idx] || idx == seed_idx {
            continue;
        }
        let (i, j) = (idx / est.t_cells, idx % est.t_cells);
        let center = est.cell_center(i, j);
        expand(center, arrival, &mut best, &mut heap, &mut est);
    }

    for (o, b) in est.occupancy.iter_mut().zip(&best) {
        *o = b.is_finite();
    }
    if est.escaped {
        est.diagnostics.push(Diagnostic::WindowEscape);
    }
    est.push_band_diagnostic();
    Ok(est)
}

/// Default `s` window: the closed-form control set widened by one on each
/// side, or `[−3, 3]` when that set is the whole line.
pub fn default_s_window(params: &Sigma11Params, bounds: &ControlBox) -> Result<(f64, f64)> {
    let inp = params.single_input()?;
    match control_set_sigma_r(params.lambda, inp.b, bounds) {
        Ok(IntervalSet::Interval { lo, hi, .. }) => Ok((lo - 1.0, hi + 1.0)),
        Ok(IntervalSet::WholeLine) | Err(Error::ZeroInputGain { .. }) => Ok((-WHOLE_LINE_WINDOW, WHOLE_LINE_WINDOW)),
        Err(e) => Err(e),
    }
}

fn sigma_11_window(params: &Sigma11Params, bounds: &ControlBox, cfg: &GridConfig) -> Result<(f64, f64)> {
    if cfg.t_range.is_some() {
        return Err(Error::InvalidParameter("the one-input system lives on R x T; t_range must be unset".into()));
    }
    match cfg.s_range {
        Some(r) => Ok(r),
        None => default_s_window(params, bounds),
    }
}

/// Forward occupancy of `Σ₁,₁` from `q0` up to horizon `horizon`.
pub fn reachable_grid(
    params: &Sigma11Params,
    bounds: &ControlBox,
    q0: &QuotientPoint1p,
    horizon: f64,
    cfg: &GridConfig,
) -> Result<RegionEstimate> {
    if q0.p != 1 {
        return Err(Error::InvalidParameter(format!("expected a point of R x T (p = 1), got p = {}", q0.p)));
    }
    let cfg = GridConfig { horizon, ..cfg.clone() };
    let window = sigma_11_window(params, bounds, &cfg)?;
    reachable_grid_system(params, bounds, [q0.s, q0.t], window, &cfg)
}

/// Intersection of the forward and backward fills of `Σ₁,₁`.
///
/// Both fills start from the midpoint of the predicted control set at `t = 0`.
pub fn control_set_estimate(params: &Sigma11Params, bounds: &ControlBox, cfg: &GridConfig) -> Result<RegionEstimate> {
    let window = sigma_11_window(params, bounds, cfg)?;
    let inp = params.single_input()?;
    let seed_s = match control_set_sigma_r(params.lambda, inp.b, bounds) {
        Ok(set) => set.midpoint(),
        Err(Error::ZeroInputGain { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    let seed_s = seed_s.clamp(window.0, window.1);
    let backward_sys = Reversed(params);
    let (forward, backward) = rayon::join(
        || reachable_grid_system(params, bounds, [seed_s, 0.0], window, cfg),
        || reachable_grid_system(&backward_sys, bounds, [seed_s, 0.0], window, cfg),
    );
    let (forward, backward) = (forward?, backward?);

    let mut est = RegionEstimate::empty(window, None, cfg);
    for (o, (f, b)) in est.occupancy.iter_mut().zip(forward.occupancy.iter().zip(&backward.occupancy)) {
        *o = *f && *b;
    }
    est.escaped = forward.escaped || backward.escaped;
    if est.escaped {
        est.diagnostics.push(Diagnostic::WindowEscape);
    }
    if est.count() == 0 {
        est.diagnostics.push(Diagnostic::EmptyIntersection);
    } else {
        est.push_band_diagnostic();
    }
    Ok(est)
}
