//! JSON scenario configurations. Unknown keys are rejected everywhere.

use heisenberg_lcs::analysis::GridConfig;
use heisenberg_lcs::heisenberg::{Mat2, Vec2};
use heisenberg_lcs::induced::InducedInput;
use heisenberg_lcs::{
    AlgebraElement, ControlBox, ControlSignal, LinearField, Piece, Sigma0pParams, Sigma10Params, Sigma11Params,
    SubgroupKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `(A, η)` of a linear field; `a` is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub a: [[f64; 2]; 2],
    pub eta: [f64; 2],
}

impl FieldConfig {
    pub fn to_field(&self) -> LinearField {
        let a = self.a;
        LinearField::new(Mat2::new(a[0][0], a[0][1], a[1][0], a[1][1]), Vec2::new(self.eta[0], self.eta[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubgroupConfig {
    Dim2 { p: u8 },
    LatticeCylinder { k: u8 },
    LineTimesLattice { p: u8 },
    DiscreteLine { p: u8 },
    CenterLattice,
    FullLattice { p: u32 },
}

impl SubgroupConfig {
    pub fn to_kind(self) -> Result<SubgroupKind, CliError> {
        let kind = match self {
            SubgroupConfig::Dim2 { p } => SubgroupKind::Dim2 { p },
            SubgroupConfig::LatticeCylinder { k } => SubgroupKind::LatticeCylinder { k },
            SubgroupConfig::LineTimesLattice { p } => SubgroupKind::LineTimesLattice { p },
            SubgroupConfig::DiscreteLine { p } => SubgroupKind::DiscreteLine { p },
            SubgroupConfig::CenterLattice => SubgroupKind::CenterLattice,
            SubgroupConfig::FullLattice { p } => SubgroupKind::FullLattice { p },
        };
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxConfig {
    pub fn to_box(&self) -> Result<ControlBox, CliError> {
        Ok(ControlBox::new(self.lower.clone(), self.upper.clone())?)
    }
}

/// Coefficients `(a, b, c)` of an input field on a quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl InputConfig {
    fn to_input(self) -> InducedInput {
        InducedInput::new(self.a, self.b, self.c)
    }
}

/// A left-invariant field `((ζ_x, ζ_y), α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub zeta: [f64; 2],
    pub alpha: f64,
}

impl AlgebraConfig {
    fn to_algebra(self) -> AlgebraElement {
        AlgebraElement::new(self.zeta[0], self.zeta[1], self.alpha)
    }
}

/// The one-input system on `ℝ × 𝕋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sigma11Config {
    pub lambda: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub gamma: f64,
    pub inputs: Vec<InputConfig>,
}

impl Sigma11Config {
    pub fn to_params(&self) -> Result<Sigma11Params, CliError> {
        let p = Sigma11Params {
            lambda: self.lambda,
            alpha: self.alpha,
            gamma: self.gamma,
            inputs: self.inputs.iter().map(|i| i.to_input()).collect(),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    /// `Σ_ℍ` on the group itself; state `(x, y, z)`.
    Heisenberg { field: FieldConfig, inputs: Vec<AlgebraConfig> },
    /// Quotient by `ℝe₁ × ℤ`; state `(s, t)`, `t` on the torus.
    Sigma11 {
        lambda: f64,
        #[serde(default)]
        alpha: f64,
        #[serde(default)]
        gamma: f64,
        inputs: Vec<InputConfig>,
    },
    /// Quotient by `ℝe₁ × {0}`; state `(s, t)` in the plane.
    Sigma10 {
        lambda: f64,
        #[serde(default)]
        beta: f64,
        #[serde(default)]
        alpha: f64,
        #[serde(default)]
        gamma: f64,
        inputs: Vec<InputConfig>,
    },
    /// Quotient by `ℤe₁ × ℤp`; state `(u, s, t)`.
    Sigma0p {
        p: u8,
        #[serde(default)]
        beta: f64,
        #[serde(default)]
        alpha: f64,
        #[serde(default)]
        gamma: f64,
        inputs: Vec<InputConfig>,
    },
}

/// A validated system, ready to integrate.
pub enum System {
    Heisenberg(heisenberg_lcs::SigmaH),
    Sigma11(Sigma11Params),
    Sigma10(Sigma10Params),
    Sigma0p(Sigma0pParams),
}

impl SystemConfig {
    pub fn build(&self) -> Result<System, CliError> {
        let inputs = |v: &[InputConfig]| v.iter().map(|i| i.to_input()).collect::<Vec<_>>();
        Ok(match self {
            SystemConfig::Heisenberg { field, inputs } => System::Heisenberg(heisenberg_lcs::SigmaH::new(
                field.to_field(),
                inputs.iter().map(|b| b.to_algebra()).collect(),
            )?),
            SystemConfig::Sigma11 { lambda, alpha, gamma, inputs: i } => {
                let p = Sigma11Params { lambda: *lambda, alpha: *alpha, gamma: *gamma, inputs: inputs(i) };
                p.validate()?;
                System::Sigma11(p)
            }
            SystemConfig::Sigma10 { lambda, beta, alpha, gamma, inputs: i } => {
                let p = Sigma10Params { lambda: *lambda, beta: *beta, alpha: *alpha, gamma: *gamma, inputs: inputs(i) };
                p.validate()?;
                System::Sigma10(p)
            }
            SystemConfig::Sigma0p { p, beta, alpha, gamma, inputs: i } => {
                let params = Sigma0pParams { p: *p, beta: *beta, alpha: *alpha, gamma: *gamma, inputs: inputs(i) };
                params.validate()?;
                System::Sigma0p(params)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub duration: f64,
    pub value: Vec<f64>,
}

/// An explicit piecewise-constant signal, or one drawn from the run seed
/// with equal-length pieces and values uniform in the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Pieces(Vec<PieceConfig>),
    Random { pieces: usize, duration: f64 },
}

impl SignalConfig {
    pub fn to_signal(&self, bounds: &ControlBox, seed: u64) -> Result<ControlSignal, CliError> {
        let pieces = match self {
            SignalConfig::Pieces(p) => {
                p.iter().map(|p| Piece { duration: p.duration, value: p.value.clone() }).collect()
            }
            SignalConfig::Random { pieces, duration } => {
                if *pieces == 0 {
                    return Err(CliError::Config("random signal needs at least one piece".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..*pieces)
                    .map(|_| Piece {
                        duration: duration / *pieces as f64,
                        value: bounds
                            .lower()
                            .iter()
                            .zip(bounds.upper())
                            .map(|(lo, hi)| rng.random_range(*lo..=*hi))
                            .collect(),
                    })
                    .collect()
            }
        };
        Ok(ControlSignal::new(pieces, bounds)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub field: FieldConfig,
    pub initial: [f64; 3],
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    /// Number of intervals; the file has `steps + 1` rows.
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BruteForceSettings {
    pub samples: usize,
    pub times: Vec<f64>,
    pub lattice: i32,
    pub span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceConfig {
    pub field: FieldConfig,
    pub subgroup: SubgroupConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<BruteForceSettings>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub system: SystemConfig,
    pub control_box: BoxConfig,
    pub signal: SignalConfig,
    pub initial: Vec<f64>,
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Grid settings; unset fields take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dwell: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substeps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dwells_per_path: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
}

impl GridSettings {
    pub fn to_grid(&self) -> Result<GridConfig, CliError> {
        let d = GridConfig::default();
        let cfg = GridConfig {
            s_range: self.s_range.or(d.s_range),
            t_range: None,
            s_cells: self.s_cells.unwrap_or(d.s_cells),
            t_cells: self.t_cells.unwrap_or(d.t_cells),
            control_levels: self.control_levels.unwrap_or(d.control_levels),
            dwell: self.dwell.unwrap_or(d.dwell),
            substeps: self.substeps.unwrap_or(d.substeps),
            dwells_per_path: self.dwells_per_path.unwrap_or(d.dwells_per_path),
            horizon: self.horizon.unwrap_or(d.horizon),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSetConfig {
    pub system: Sigma11Config,
    pub control_box: BoxConfig,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LarcConfig {
    pub system: Sigma11Config,
    /// Evaluation points `(s, t)`; when absent, `random_points` generic
    /// points with `|s| ∈ [0.1, 10]` are drawn from the seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_random_points")]
    pub random_points: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_random_points() -> usize {
    10
}

fn default_depth() -> usize {
    3
}

/// Parses a configuration document, mapping every failure to a config error.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
}
