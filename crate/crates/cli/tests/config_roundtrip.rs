//! parse → serialise → parse is the identity on every configuration type.

use hlcs_cli::config::{
    parse, AlgebraConfig, BoxConfig, BruteForceSettings, ControlSetConfig, FieldConfig, FlowConfig, GridSettings,
    InputConfig, InvarianceConfig, LarcConfig, PieceConfig, Sigma11Config, SignalConfig, SimulateConfig,
    SubgroupConfig, SystemConfig,
};
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, Just(0.0), Just(-0.0), Just(1e-300), Just(f64::MAX)]
}

fn field() -> impl Strategy<Value = FieldConfig> {
    (prop::array::uniform4(real()), prop::array::uniform2(real()))
        .prop_map(|(a, eta)| FieldConfig { a: [[a[0], a[1]], [a[2], a[3]]], eta })
}

fn input() -> impl Strategy<Value = InputConfig> {
    (real(), real(), real()).prop_map(|(a, b, c)| InputConfig { a, b, c })
}

fn subgroup() -> impl Strategy<Value = SubgroupConfig> {
    prop_oneof![
        (0u8..2).prop_map(|p| SubgroupConfig::Dim2 { p }),
        (0u8..3).prop_map(|k| SubgroupConfig::LatticeCylinder { k }),
        (0u8..2).prop_map(|p| SubgroupConfig::LineTimesLattice { p }),
        (0u8..2).prop_map(|p| SubgroupConfig::DiscreteLine { p }),
        Just(SubgroupConfig::CenterLattice),
        (1u32..10).prop_map(|p| SubgroupConfig::FullLattice { p }),
    ]
}

fn sigma11() -> impl Strategy<Value = Sigma11Config> {
    (real(), real(), real(), prop::collection::vec(input(), 1..4))
        .prop_map(|(lambda, alpha, gamma, inputs)| Sigma11Config { lambda, alpha, gamma, inputs })
}

fn system() -> impl Strategy<Value = SystemConfig> {
    prop_oneof![
        (field(), prop::collection::vec((prop::array::uniform2(real()), real()), 1..4)).prop_map(|(field, b)| {
            SystemConfig::Heisenberg {
                field,
                inputs: b.into_iter().map(|(zeta, alpha)| AlgebraConfig { zeta, alpha }).collect(),
            }
        }),
        sigma11().prop_map(|s| SystemConfig::Sigma11 {
            lambda: s.lambda,
            alpha: s.alpha,
            gamma: s.gamma,
            inputs: s.inputs
        }),
        (sigma11(), real()).prop_map(|(s, beta)| SystemConfig::Sigma10 {
            lambda: s.lambda,
            beta,
            alpha: s.alpha,
            gamma: s.gamma,
            inputs: s.inputs
        }),
        (0u8..2, sigma11(), real()).prop_map(|(p, s, beta)| SystemConfig::Sigma0p {
            p,
            beta,
            alpha: s.alpha,
            gamma: s.gamma,
            inputs: s.inputs
        }),
    ]
}

fn signal() -> impl Strategy<Value = SignalConfig> {
    prop_oneof![
        prop::collection::vec(
            (real(), prop::collection::vec(real(), 1..4)).prop_map(|(duration, value)| PieceConfig { duration, value }),
            1..5
        )
        .prop_map(SignalConfig::Pieces),
        (0usize..100, real()).prop_map(|(pieces, duration)| SignalConfig::Random { pieces, duration }),
    ]
}

fn boxes() -> impl Strategy<Value = BoxConfig> {
    (prop::collection::vec(real(), 1..4), prop::collection::vec(real(), 1..4))
        .prop_map(|(lower, upper)| BoxConfig { lower, upper })
}

fn grid() -> impl Strategy<Value = GridSettings> {
    (
        prop::option::of((real(), real())),
        prop::option::of(0usize..1000),
        prop::option::of(0usize..1000),
        prop::option::of(real()),
    )
        .prop_map(|(s_range, s_cells, t_cells, horizon)| GridSettings {
            s_range,
            s_cells,
            t_cells,
            horizon,
            ..GridSettings::default()
        })
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(value: &T) -> Result<(), TestCaseError> {
    let text = serde_json::to_string(value).unwrap();
    let back: T = parse(&text).unwrap();
    prop_assert_eq!(&back, value);
    let again = serde_json::to_string(&back).unwrap();
    prop_assert_eq!(again, text);
    Ok(())
}

proptest! {
    #[test]
    fn flow_config(field in field(), initial in prop::array::uniform3(real()), t_start in real(), t_end in real(),
                   steps in 0usize..1000, seed in any::<u64>()) {
        round_trip(&FlowConfig { field, initial, t_start, t_end, steps, seed })?;
    }

    #[test]
    fn invariance_config(field in field(), subgroup in subgroup(), tol in prop::option::of(real()),
                         bf in prop::option::of((1usize..500, prop::collection::vec(real(), 0..5), 0i32..10, real())),
                         seed in any::<u64>()) {
        let brute_force = bf.map(|(samples, times, lattice, span)| BruteForceSettings { samples, times, lattice, span });
        round_trip(&InvarianceConfig { field, subgroup, tol, brute_force, seed })?;
    }

    #[test]
    fn simulate_config(system in system(), control_box in boxes(), signal in signal(),
                       initial in prop::collection::vec(real(), 0..4), dt in real(), seed in any::<u64>()) {
        round_trip(&SimulateConfig { system, control_box, signal, initial, dt, seed })?;
    }

    #[test]
    fn controlset_config(system in sigma11(), control_box in boxes(), grid in grid(), seed in any::<u64>()) {
        round_trip(&ControlSetConfig { system, control_box, grid, seed })?;
    }

    #[test]
    fn larc_config(system in sigma11(), points in prop::option::of(prop::collection::vec((real(), real()), 0..5)),
                   random_points in 0usize..50, depth in 0usize..6, seed in any::<u64>()) {
        round_trip(&LarcConfig { system, points, random_points, depth, seed })?;
    }
}

#[test]
fn unknown_keys_are_rejected_at_every_level() {
    let nested = r#"{"field": {"a": [[0,0],[0,0]], "eta": [0,0], "extra": 1},
                     "initial": [0,0,0], "t_end": 1, "steps": 1}"#;
    assert!(parse::<FlowConfig>(nested).is_err());
    let in_tagged = r#"{"field": {"a": [[0,0],[0,0]], "eta": [0,0]},
                        "subgroup": {"kind": "discrete_line", "p": 1, "q": 2}}"#;
    assert!(parse::<InvarianceConfig>(in_tagged).is_err());
    let in_grid = r#"{"system": {"lambda": 1, "inputs": []}, "control_box": {"lower": [-1], "upper": [1]},
                      "grid": {"cells": 3}}"#;
    assert!(parse::<ControlSetConfig>(in_grid).is_err());
}
