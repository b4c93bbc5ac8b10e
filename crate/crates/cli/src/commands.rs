//! The five subcommands.

use std::fmt::Write as _;

use heisenberg_lcs::analysis::{
    control_set_estimate, control_set_sigma_11, larc_numeric_rank, larc_predicate, larc_terms, IntervalSet,
};
use heisenberg_lcs::subgroups::{find_flow_violation, invariance_report, BruteForceConfig, DEFAULT_TOL};
use heisenberg_lcs::{integrate, ControlSystem, Error, GroupElement, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{
    parse, ControlSetConfig, FlowConfig, InvarianceConfig, LarcConfig, SimulateConfig, SubgroupConfig, System,
};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Flow,
    Invariance,
    Simulate,
    ControlSet,
    Larc,
}

/// Bulk CSV and/or a JSON summary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub csv: Option<String>,
    pub summary: Option<String>,
}

/// Runs `command` on the configuration text. `seed` overrides the seed in
/// the configuration.
pub fn run(command: Command, config_text: &str, seed: Option<u64>) -> Result<Output, CliError> {
    match command {
        Command::Flow => cmd_flow(&parse(config_text)?),
        Command::Invariance => {
            let cfg: InvarianceConfig = parse(config_text)?;
            let seed = seed.unwrap_or(cfg.seed);
            cmd_invariance(&cfg, seed)
        }
        Command::Simulate => {
            let cfg: SimulateConfig = parse(config_text)?;
            let seed = seed.unwrap_or(cfg.seed);
            cmd_simulate(&cfg, seed)
        }
        Command::ControlSet => cmd_controlset(&parse(config_text)?),
        Command::Larc => {
            let cfg: LarcConfig = parse(config_text)?;
            let seed = seed.unwrap_or(cfg.seed);
            cmd_larc(&cfg, seed)
        }
    }
}

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{v:.16e}").expect("writing to a String cannot fail");
    }
    out.push('\n');
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialise");
    s.push('\n');
    s
}

/// `φ_t(g)` sampled at `steps + 1` evenly spaced times; columns `t,x,y,z`.
pub fn cmd_flow(cfg: &FlowConfig) -> Result<Output, CliError> {
    if cfg.steps == 0 {
        return Err(CliError::Config("steps must be positive".into()));
    }
    if !(cfg.t_start.is_finite() && cfg.t_end.is_finite()) {
        return Err(CliError::Config("time range must be finite".into()));
    }
    let x = cfg.field.to_field();
    let g = GroupElement::new(cfg.initial[0], cfg.initial[1], cfg.initial[2]);
    let mut csv = String::from("t,x,y,z\n");
    for k in 0..=cfg.steps {
        let t = cfg.t_start + (cfg.t_end - cfg.t_start) * k as f64 / cfg.steps as f64;
        let image = x.flow(t, &g);
        if !image.is_finite() {
            return Err(Error::NonFinite { time: t }.into());
        }
        push_row(&mut csv, &[t, image.x(), image.y(), image.z]);
    }
    Ok(Output { csv: Some(csv), summary: None })
}

#[derive(Serialize)]
struct ConditionOut {
    name: &'static str,
    residual: f64,
    needed_by_flow: bool,
}

#[derive(Serialize)]
struct CounterexampleOut {
    member: [f64; 3],
    time: f64,
    image: [f64; 3],
}

#[derive(Serialize)]
struct InvarianceSummary {
    subgroup: SubgroupConfig,
    verdict: String,
    predicate: bool,
    brute_force: bool,
    violated: Option<&'static str>,
    conditions: Vec<ConditionOut>,
    counterexample: Option<CounterexampleOut>,
    seed: u64,
}

fn coords(g: &GroupElement) -> [f64; 3] {
    [g.x(), g.y(), g.z]
}

/// The algebraic criterion next to the brute-force falsifier.
pub fn cmd_invariance(cfg: &InvarianceConfig, seed: u64) -> Result<Output, CliError> {
    let kind = cfg.subgroup.to_kind()?;
    let x = cfg.field.to_field();
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let report = invariance_report(kind, &x, tol)?;
    let mut bf = BruteForceConfig { tol, seed, ..BruteForceConfig::default() };
    if let Some(s) = &cfg.brute_force {
        bf.samples = s.samples;
        bf.times = s.times.clone();
        bf.lattice = s.lattice;
        bf.span = s.span;
    }
    let counterexample = find_flow_violation(kind, &x, &bf);
    let predicate = report.holds();
    let brute_force = counterexample.is_none();
    let summary = InvarianceSummary {
        subgroup: cfg.subgroup,
        verdict: format!("invariant: {predicate}/{brute_force}"),
        predicate,
        brute_force,
        violated: report.violated().map(|c| c.name),
        conditions: report
            .conditions
            .iter()
            .map(|c| ConditionOut { name: c.name, residual: c.residual, needed_by_flow: c.needed_by_flow })
            .collect(),
        counterexample: counterexample.map(|c| CounterexampleOut {
            member: coords(&c.member),
            time: c.time,
            image: coords(&c.image),
        }),
        seed,
    };
    Ok(Output { csv: None, summary: Some(to_json(&summary)) })
}

fn trajectory_csv<const N: usize>(header: &str, traj: &Trajectory<N>) -> String {
    let mut csv = format!("{header}\n");
    let mut row = Vec::with_capacity(N + 1);
    for (t, x) in traj.times.iter().zip(&traj.states) {
        row.clear();
        row.push(*t);
        row.extend_from_slice(x);
        push_row(&mut csv, &row);
    }
    csv
}

fn initial_state<const N: usize>(initial: &[f64]) -> Result<[f64; N], CliError> {
    initial.try_into().map_err(|_| Error::DimensionMismatch { expected: N, got: initial.len() }.into())
}

fn simulate<const N: usize, S: ControlSystem<N>>(
    sys: &S,
    header: &str,
    cfg: &SimulateConfig,
    seed: u64,
) -> Result<String, CliError> {
    let bounds = cfg.control_box.to_box()?;
    let signal = cfg.signal.to_signal(&bounds, seed)?;
    let traj = integrate(sys, initial_state::<N>(&cfg.initial)?, &signal, cfg.dt)?;
    Ok(trajectory_csv(header, &traj))
}

/// Trajectory of the selected system; torus columns lie in `[0, 1)`.
pub fn cmd_simulate(cfg: &SimulateConfig, seed: u64) -> Result<Output, CliError> {
    let csv = match cfg.system.build()? {
        System::Heisenberg(sys) => simulate(&sys, "t,x,y,z", cfg, seed)?,
        System::Sigma11(sys) => simulate(&sys, "time,s,t", cfg, seed)?,
        System::Sigma10(sys) => simulate(&sys, "time,s,t", cfg, seed)?,
        System::Sigma0p(sys) => simulate(&sys, "time,u,s,t", cfg, seed)?,
    };
    Ok(Output { csv: Some(csv), summary: None })
}

#[derive(Serialize)]
struct ClosedFormOut {
    set: String,
    lo: Option<f64>,
    hi: Option<f64>,
    closed_lo: Option<bool>,
    closed_hi: Option<bool>,
    times_torus: bool,
}

#[derive(Serialize)]
struct GridOut {
    s_range: [f64; 2],
    t_range: [f64; 2],
    s_cells: usize,
    t_cells: usize,
    horizon: f64,
    control_levels: usize,
    dt: f64,
}

#[derive(Serialize)]
struct BoxOut {
    s_lo: f64,
    s_hi: f64,
    t_lo: f64,
    t_hi: f64,
}

#[derive(Serialize)]
struct ControlSetSummary {
    larc: bool,
    larc_terms: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedFormOut>,
    controllable: bool,
    grid: GridOut,
    occupied_cells: usize,
    bounding_box: Option<BoxOut>,
    symmetric_difference: Option<usize>,
    perimeter_cells: usize,
    escaped: bool,
    diagnostics: Vec<String>,
}

/// Grid estimate of the control set, compared with the closed form when the
/// rank condition holds. `controllable` means the whole window is occupied.
pub fn cmd_controlset(cfg: &ControlSetConfig) -> Result<Output, CliError> {
    let params = cfg.system.to_params()?;
    let bounds = cfg.control_box.to_box()?;
    let grid = cfg.grid.to_grid()?;
    let input = params.single_input()?;
    if input.b.abs() <= heisenberg_lcs::analysis::larc::LARC_ZERO {
        return Err(Error::ZeroInputGain { b: input.b }.into());
    }
    let larc = larc_predicate(&params)?;
    let (t1, t2) = larc_terms(&params)?;
    let closed = if larc { Some(control_set_sigma_11(&params, &bounds)?) } else { None };
    let est = control_set_estimate(&params, &bounds, &grid)?;

    let mut csv = String::from("s_index,t_index,occupied\n");
    for i in 0..est.s_cells {
        for j in 0..est.t_cells {
            writeln!(csv, "{i},{j},{}", u8::from(est.occupied(i, j))).expect("writing to a String cannot fail");
        }
    }

    let closed_form = closed.map(|d| {
        let (lo, hi, closed_lo, closed_hi) = match d.base {
            IntervalSet::Interval { lo, hi, closed_lo, closed_hi } => {
                (Some(lo), Some(hi), Some(closed_lo), Some(closed_hi))
            }
            IntervalSet::WholeLine => (None, None, None, None),
        };
        ClosedFormOut { set: format!("{} x T", d.base), lo, hi, closed_lo, closed_hi, times_torus: d.times_torus }
    });
    let summary = ControlSetSummary {
        larc,
        larc_terms: [t1, t2],
        symmetric_difference: closed.map(|d| est.symmetric_difference(&est.rasterize(&d))).transpose()?,
        closed_form,
        controllable: est.is_full(),
        grid: GridOut {
            s_range: [est.s_range.0, est.s_range.1],
            t_range: [0.0, 1.0],
            s_cells: est.s_cells,
            t_cells: est.t_cells,
            horizon: est.horizon,
            control_levels: est.control_levels,
            dt: est.dt,
        },
        occupied_cells: est.count(),
        bounding_box: est.bounding_box().map(|(s_lo, s_hi, t_lo, t_hi)| BoxOut { s_lo, s_hi, t_lo, t_hi }),
        perimeter_cells: est.perimeter_cells(),
        escaped: est.escaped,
        diagnostics: est.diagnostics.iter().map(|d| format!("{d:?}")).collect(),
    };
    Ok(Output { csv: Some(csv), summary: Some(to_json(&summary)) })
}

#[derive(Serialize)]
struct RankOut {
    s: f64,
    t: f64,
    rank: usize,
}

#[derive(Serialize)]
struct LarcSummary {
    larc: bool,
    terms: [f64; 2],
    depth: usize,
    ranks: Vec<RankOut>,
    agree: bool,
    seed: u64,
}

/// The closed-form criterion next to bracket ranks at the requested points.
pub fn cmd_larc(cfg: &LarcConfig, seed: u64) -> Result<Output, CliError> {
    let params = cfg.system.to_params()?;
    let larc = larc_predicate(&params)?;
    let (t1, t2) = larc_terms(&params)?;
    let points = match &cfg.points {
        Some(p) => p.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..cfg.random_points)
                .map(|_| {
                    let s = rng.random_range(0.1..=10.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
                    (s, rng.random_range(0.0..1.0))
                })
                .collect()
        }
    };
    let ranks = points
        .iter()
        .map(|&(s, t)| Ok(RankOut { s, t, rank: larc_numeric_rank(&params, s, t, cfg.depth)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let summary = LarcSummary {
        larc,
        terms: [t1, t2],
        depth: cfg.depth,
        agree: ranks.iter().all(|r| (r.rank == 2) == larc),
        ranks,
        seed,
    };
    Ok(Output { csv: None, summary: Some(to_json(&summary)) })
}
