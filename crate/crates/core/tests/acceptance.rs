//! Acceptance gate: one PASS/FAIL line per criterion, each with its runtime
//! budget. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use heisenberg_lcs::analysis::{
    control_set_estimate, control_set_sigma_11, control_set_sigma_r, larc_numeric_rank, larc_predicate, larc_terms,
    GridConfig, IntervalSet,
};
use heisenberg_lcs::expm::expm;
use heisenberg_lcs::heisenberg::{Mat2, Vec2};
use heisenberg_lcs::induced::{conjugation_residual, conjugation_residual_0p, sigma_r_closed_form};
use heisenberg_lcs::subgroups::{is_invariant, is_invariant_bruteforce, BruteForceConfig, DEFAULT_TOL};
use heisenberg_lcs::{
    integrate, AlgebraElement, ControlBox, ControlSignal, GroupElement, LinearField, Piece, Sigma11Params, SubgroupKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn u(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    rng.random_range(-r..=r)
}

fn random_field(rng: &mut ChaCha8Rng, r: f64) -> LinearField {
    LinearField::new(Mat2::new(u(rng, r), u(rng, r), u(rng, r), u(rng, r)), Vec2::new(u(rng, r), u(rng, r)))
}

fn random_element(rng: &mut ChaCha8Rng, r: f64) -> GroupElement {
    GroupElement::new(u(rng, r), u(rng, r), u(rng, r))
}

/// Flow-automorphism law. The scaled error (relative to the size of the
/// image, up to `e^{12}` here) is reported alongside.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_abs, mut worst_rel) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let x = random_field(&mut rng, 2.0);
        let t = u(&mut rng, 3.0);
        let (g, h) = (random_element(&mut rng, 2.0), random_element(&mut rng, 2.0));
        let lhs = x.flow(t, &(g * h));
        let rhs = x.flow(t, &g) * x.flow(t, &h);
        let err = lhs.distance_inf(&rhs);
        worst_abs = worst_abs.max(err);
        worst_rel = worst_rel.max(err / lhs.to_vector().amax().max(1.0));
    }
    Outcome {
        pass: worst_abs <= 1e-9,
        detail: format!("1000 draws, max abs err {worst_abs:.2e}, max scaled err {worst_rel:.2e} (tol 1e-9)"),
    }
}

/// Closed-form `e^{tD}` against the series exponential of `tD`, and against
/// nalgebra's Padé exponential as an independent check.
fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let x = random_field(&mut rng, 2.0);
        let t = u(&mut rng, 3.0);
        let closed = x.exp_td(t);
        let td = x.derivation() * t;
        let scale = closed.amax().max(1.0);
        let series = (closed - expm(&td)).amax() / scale;
        let pade = (closed - td.exp()).amax() / scale;
        worst = worst.max(series).max(pade);
    }
    Outcome { pass: worst <= 1e-10, detail: format!("500 draws, max scaled entry err {worst:.2e} (tol 1e-10)") }
}

/// The five kinds with a criterion and the entries of `(A, η)` their flows
/// depend on, as `(row, col)` of `A` or `(2, k)` for `η_k`.
fn criterion_kinds() -> Vec<(SubgroupKind, Vec<(usize, usize)>)> {
    vec![
        (SubgroupKind::FullLattice { p: 2 }, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]),
        (SubgroupKind::DiscreteLine { p: 0 }, vec![(0, 0), (1, 0), (2, 0)]),
        (SubgroupKind::DiscreteLine { p: 1 }, vec![(0, 0), (1, 0), (1, 1), (2, 0)]),
        (SubgroupKind::LineTimesLattice { p: 0 }, vec![(1, 0), (2, 0)]),
        (SubgroupKind::LineTimesLattice { p: 1 }, vec![(1, 0), (1, 1), (2, 0)]),
    ]
}

/// A field satisfying every condition for `kind`, the normal-form clause
/// `α = 0 if η ≠ 0` included.
fn invariant_field(rng: &mut ChaCha8Rng, kind: SubgroupKind) -> LinearField {
    let (l, b) = (u(rng, 2.0), u(rng, 2.0));
    let (alpha, gamma) = if rng.random::<bool>() { (u(rng, 2.0), 0.0) } else { (0.0, u(rng, 2.0)) };
    let (a, eta) = match kind {
        SubgroupKind::FullLattice { .. } => (Mat2::zeros(), Vec2::zeros()),
        SubgroupKind::DiscreteLine { p: 0 } => (Mat2::new(0.0, alpha, 0.0, b), Vec2::new(0.0, gamma)),
        SubgroupKind::DiscreteLine { .. } => (Mat2::new(0.0, alpha, 0.0, 0.0), Vec2::new(0.0, gamma)),
        SubgroupKind::LineTimesLattice { p: 0 } => (Mat2::new(l, alpha, 0.0, b), Vec2::new(0.0, gamma)),
        _ => (Mat2::new(l, alpha, 0.0, -l), Vec2::new(0.0, gamma)),
    };
    LinearField::new(a, eta)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = BruteForceConfig::default();
    let (mut agree, mut total) = (0usize, 0usize);
    let mut first_disagreement = None;
    for (kind, entries) in criterion_kinds() {
        for draw in 0..100 {
            let x = invariant_field(&mut rng, kind);
            let predicate = is_invariant(kind, &x, DEFAULT_TOL).unwrap();
            let brute = is_invariant_bruteforce(kind, &x, &BruteForceConfig { seed: draw, ..cfg.clone() });
            total += 1;
            if predicate && brute {
                agree += 1;
            } else if first_disagreement.is_none() {
                first_disagreement = Some(format!("{kind:?} invariant draw {draw}"));
            }

            let mut y = x;
            let (r, c) = entries[rng.random_range(0..entries.len())];
            let delta = rng.random_range(1e-3..=1.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            if r == 2 {
                y.eta[c] += delta;
            } else {
                y.a[(r, c)] += delta;
            }
            let predicate = is_invariant(kind, &y, DEFAULT_TOL).unwrap();
            let brute = is_invariant_bruteforce(kind, &y, &BruteForceConfig { seed: draw, ..cfg.clone() });
            total += 1;
            if !predicate && !brute {
                agree += 1;
            } else if first_disagreement.is_none() {
                first_disagreement =
                    Some(format!("{kind:?} perturbed draw {draw}, entry ({r},{c}), delta {delta:.3e}"));
            }
        }
    }
    Outcome {
        pass: agree == total,
        detail: match first_disagreement {
            None => format!("{agree}/{total} agree over 5 kinds"),
            Some(d) => format!("{agree}/{total} agree; first disagreement: {d}"),
        },
    }
}

fn random_signal(rng: &mut ChaCha8Rng, bounds: &ControlBox, pieces: usize, total: f64) -> ControlSignal {
    let pieces = (0..pieces)
        .map(|_| Piece {
            duration: total / pieces as f64,
            value: bounds.lower().iter().zip(bounds.upper()).map(|(lo, hi)| rng.random_range(*lo..=*hi)).collect(),
        })
        .collect();
    ControlSignal::new(pieces, bounds).unwrap()
}

/// Conjugation residual on all four quotients, cycling through them.
fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let labels = ["(Re1 x Z)", "(Re1 x {0})", "(Ze1 x Z)", "(Ze1 x {0})"];
    for draw in 0..50 {
        let which = draw % 4;
        let kind = match which {
            0 => SubgroupKind::LineTimesLattice { p: 1 },
            1 => SubgroupKind::LineTimesLattice { p: 0 },
            2 => SubgroupKind::DiscreteLine { p: 1 },
            _ => SubgroupKind::DiscreteLine { p: 0 },
        };
        let x = invariant_field(&mut rng, kind);
        let m = rng.random_range(1..=2);
        let inputs: Vec<AlgebraElement> =
            (0..m).map(|_| AlgebraElement::new(u(&mut rng, 1.5), u(&mut rng, 1.5), u(&mut rng, 1.5))).collect();
        let bounds = ControlBox::symmetric(m, 1.0).unwrap();
        let signal = random_signal(&mut rng, &bounds, 5, 1.0);
        let g0 = random_element(&mut rng, 1.5);
        let r = match which {
            0 => conjugation_residual(&x, &inputs, 1, &g0, &signal, 1e-3),
            1 => conjugation_residual(&x, &inputs, 0, &g0, &signal, 1e-3),
            2 => conjugation_residual_0p(&x, &inputs, 1, &g0, &signal, 1e-3),
            _ => conjugation_residual_0p(&x, &inputs, 0, &g0, &signal, 1e-3),
        };
        match r {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                return Outcome { pass: false, detail: format!("draw {draw} on {}: {e}", labels[which]) };
            }
        }
    }
    Outcome { pass: worst <= 1e-6, detail: format!("50 draws over 4 quotients, max residual {worst:.2e} (tol 1e-6)") }
}

fn criterion_5() -> Outcome {
    let unit = ControlBox::interval(-1.0, 1.0).unwrap();
    let values = [
        control_set_sigma_r(1.0, 2.0, &unit),
        control_set_sigma_r(-1.0, 2.0, &unit),
        control_set_sigma_r(0.0, 1.0, &unit),
    ];
    let expected = [Ok(IntervalSet::closed(-2.0, 2.0)), Ok(IntervalSet::open(-2.0, 2.0)), Ok(IntervalSet::WholeLine)];
    let values_ok = values == expected;

    // λ = 1, b = 2: C = [−2, 2].
    let (lambda, b) = (1.0, 2.0);
    let set = IntervalSet::closed(-2.0, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut invariance_failures = 0;
    for _ in 0..1000 {
        let s0 = rng.random_range(-2.0..=2.0);
        let w = rng.random_range(-1.0..=1.0);
        let tau = rng.random_range(0.0..=10.0);
        if !set.contains(sigma_r_closed_form(lambda, b, s0, w, tau), 1e-12) {
            invariance_failures += 1;
        }
    }
    let mut recurrence_failures = 0;
    for _ in 0..1000 {
        let s0 = rng.random_range(2.0..=12.0) + 1e-9;
        let w = rng.random_range(-1.0..=1.0);
        let tau = rng.random_range(1e-6..=10.0);
        if sigma_r_closed_form(lambda, b, s0, w, tau) > s0 {
            recurrence_failures += 1;
        }
    }
    Outcome {
        pass: values_ok && invariance_failures == 0 && recurrence_failures == 0,
        detail: format!(
            "closed forms {} ; invariance failures {invariance_failures}/1000 ; recurrence failures {recurrence_failures}/1000",
            if values_ok { "[-2,2], (-2,2), R as expected" } else { "MISMATCH" }
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut draws, mut checks, mut agree) = (0, 0, 0);
    let mut first_disagreement = None;
    while draws < 200 {
        let (l, a, b, c) = (u(&mut rng, 2.0), u(&mut rng, 2.0), u(&mut rng, 2.0), u(&mut rng, 2.0));
        let (alpha, gamma) = if rng.random::<bool>() { (u(&mut rng, 2.0), 0.0) } else { (0.0, u(&mut rng, 2.0)) };
        let p = Sigma11Params::one_input(l, a, b, c, alpha, gamma);
        let (t1, t2) = larc_terms(&p).unwrap();
        if t1.abs() < 1e-10 && t2.abs() < 1e-10 {
            continue;
        }
        draws += 1;
        let predicate = larc_predicate(&p).unwrap();
        for _ in 0..10 {
            let s = rng.random_range(0.1..=10.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let t = rng.random_range(0.0..1.0);
            let rank = larc_numeric_rank(&p, s, t, 3).unwrap();
            checks += 1;
            if predicate == (rank == 2) {
                agree += 1;
            } else if first_disagreement.is_none() {
                first_disagreement = Some(format!("{p:?} at ({s}, {t}): rank {rank}"));
            }
        }
    }
    Outcome {
        pass: agree == checks,
        detail: match first_disagreement {
            None => format!("{agree}/{checks} agree over {draws} draws"),
            Some(d) => format!("{agree}/{checks} agree; first disagreement: {d}"),
        },
    }
}

fn criterion_7a() -> Outcome {
    let p = Sigma11Params::one_input(1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
    let bounds = ControlBox::interval(-1.0, 1.0).unwrap();
    let desc = control_set_sigma_11(&p, &bounds).unwrap();
    let est = control_set_estimate(&p, &bounds, &GridConfig::default()).unwrap();
    let diff = est.symmetric_difference(&est.rasterize(&desc)).unwrap();
    let perimeter = est.perimeter_cells();
    let bbox = est.bounding_box();
    Outcome {
        pass: diff <= perimeter,
        detail: format!(
            "200x200 over s in [-2,2]: symmetric difference {diff} <= perimeter {perimeter}; bbox {bbox:?}"
        ),
    }
}

fn criterion_7b() -> Outcome {
    let p = Sigma11Params::one_input(0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
    let bounds = ControlBox::interval(-1.0, 1.0).unwrap();
    let cfg = GridConfig { s_range: Some((-3.0, 3.0)), ..GridConfig::default() };
    let est = control_set_estimate(&p, &bounds, &cfg).unwrap();
    Outcome {
        pass: est.is_full(),
        detail: format!("window [-3,3] x T: {}/{} cells occupied", est.count(), est.occupancy.len()),
    }
}

/// Largest RK4 error against the closed form over `[0, 5]` for one scenario.
fn rk4_error(lambda: f64, b: f64, s0: f64, w: f64, dt: f64) -> f64 {
    let p = Sigma11Params::one_input(lambda, 0.0, b, 0.0, 0.0, 0.0);
    let bounds = ControlBox::interval(-1.0, 1.0).unwrap();
    let signal = ControlSignal::constant(vec![w], 5.0, &bounds).unwrap();
    let traj = integrate(&p, [s0, 0.0], &signal, dt).unwrap();
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(tau, x)| (x[0] - sigma_r_closed_form(lambda, b, s0, w, *tau)).abs())
        .fold(0.0, f64::max)
}

fn criterion_8() -> Outcome {
    let scenarios = [(1.0, 2.0, 3.0, 0.7), (-1.0, 2.0, 0.5, -0.4), (2.5, -1.0, -1.0, 1.0), (0.0, 1.0, 0.0, 0.3)];
    let worst = scenarios.iter().map(|&(l, b, s0, w)| rk4_error(l, b, s0, w, 1e-3)).fold(0.0, f64::max);
    // Order is measured where truncation error dominates rounding.
    let orders: Vec<f64> = scenarios[..3]
        .iter()
        .map(|&(l, b, s0, w)| (rk4_error(l, b, s0, w, 0.1) / rk4_error(l, b, s0, w, 0.05)).log2())
        .collect();
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    Outcome {
        pass: worst <= 1e-8 && min_order >= 3.8,
        detail: format!("max err at dt=1e-3: {worst:.2e} (tol 1e-8); min observed order {min_order:.3} (>= 3.8)"),
    }
}

/// Id, name, runtime budget, check.
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1", "flow is an automorphism", Duration::from_secs(1), criterion_1),
        ("2", "closed-form exp(tD) matches the series", Duration::from_secs(1), criterion_2),
        ("3", "invariance predicate vs brute force", Duration::from_secs(10), criterion_3),
        ("4", "projection conjugates the induced systems", Duration::from_secs(30), criterion_4),
        ("5", "control sets of the scalar system", Duration::from_secs(5), criterion_5),
        ("6", "rank criterion vs bracket rank", Duration::from_secs(10), criterion_6),
        ("7a", "grid control set, lambda = 1", Duration::from_secs(60), criterion_7a),
        ("7b", "grid control set, lambda = 0", Duration::from_secs(60), criterion_7b),
        ("8", "RK4 fidelity and order", Duration::from_secs(5), criterion_8),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let pass = outcome.pass && in_budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id}: {} - {name}: {} [{:.2}s / budget {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_budget { "" } else { ", OVER BUDGET" },
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
