//! Experiment configuration: one TOML file per experiment.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use wwlab::averages::CheckpointSchedule;
use wwlab::system::{Observable as Obs, SystemSpec, TruncationSide};
use wwlab::weights::{character_grid, WeightSpec};
use wwlab::Observable;
use wwlab::{Error, Weight};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: Option<SystemSpec>,
    pub observable: Option<ObservableSpec>,
    #[serde(default)]
    pub weights: WeightsSection,
    #[serde(default)]
    pub run: RunSection,
    pub egorov: Option<EgorovSection>,
    pub spectral: Option<SpectralSection>,
    pub vdc: Option<VdcSection>,
    pub maximal: Option<MaximalSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Character {
        k: i64,
    },
    DeltaState {
        index: i64,
    },
    IntervalIndicator {
        a: f64,
        b: f64,
    },
    RationalDecay,
    /// Real table, one value per state.
    Tabulated {
        values: Vec<f64>,
    },
    /// `f·1{|f| > level}` (`side = "above"`) or `f·1{|f| ≤ level}`.
    Truncated {
        base: Box<ObservableSpec>,
        level: f64,
        side: Side,
    },
    /// `Σ c_j f_j` with coefficients `[re, im]`.
    Sum {
        terms: Vec<SumTerm>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    AtOrBelow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumTerm {
    pub coeff: [f64; 2],
    pub observable: ObservableSpec,
}

impl ObservableSpec {
    pub fn build(&self) -> Result<Observable, Error> {
        Ok(match self {
            ObservableSpec::Constant { re, im } => Obs::Constant(Complex64::new(*re, *im)),
            ObservableSpec::Character { k } => Obs::Character(*k),
            ObservableSpec::DeltaState { index } => Obs::DeltaState(*index),
            ObservableSpec::IntervalIndicator { a, b } => {
                if a.partial_cmp(b) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::MalformedSpec(format!("interval [{a}, {b}) is empty")));
                }
                Obs::IntervalIndicator(*a, *b)
            }
            ObservableSpec::RationalDecay => Obs::RationalDecay,
            ObservableSpec::Tabulated { values } => Obs::tabulated_real(values),
            ObservableSpec::Truncated { base, level, side } => Obs::Truncated {
                base: Box::new(base.build()?),
                level: *level,
                side: match side {
                    Side::Above => TruncationSide::Above,
                    Side::AtOrBelow => TruncationSide::AtOrBelow,
                },
            },
            ObservableSpec::Sum { terms } => Obs::LinearCombination(
                terms
                    .iter()
                    .map(|t| Ok((Complex64::new(t.coeff[0], t.coeff[1]), t.observable.build()?)))
                    .collect::<Result<_, Error>>()?,
            ),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    #[serde(default)]
    pub list: Vec<WeightSpec>,
    /// Appends the characters `j/grid`, `j = 0..grid`.
    pub grid: Option<usize>,
    /// Appends one character per frequency.
    #[serde(default)]
    pub extra_theta: Vec<f64>,
}

impl WeightsSection {
    /// Weights in order: `list`, then the grid, then the extra frequencies.
    pub fn build(&self) -> Result<Vec<Weight>, Error> {
        let mut out = self.list.iter().map(|w| w.build()).collect::<Result<Vec<_>, _>>()?;
        if let Some(l) = self.grid {
            out.extend(character_grid(l));
        }
        for &theta in &self.extra_theta {
            out.push(WeightSpec::Character { theta }.build()?);
        }
        if out.is_empty() {
            return Err(Error::MalformedSpec("the weight family is empty".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Dyadic,
    Arithmetic,
    Explicit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSelection {
    /// Every measure cell of every part.
    #[default]
    Cells,
    /// Every `every`-th cell, starting from the first.
    Stride { every: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Signed so that a negative value is reported as a malformed spec.
    pub n_max: i64,
    pub schedule: ScheduleKind,
    pub step: Option<usize>,
    pub checkpoints: Vec<usize>,
    pub points: PointSelection,
    pub seed: u64,
    pub threads: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n_max: 1024,
            schedule: ScheduleKind::Dyadic,
            step: None,
            checkpoints: Vec::new(),
            points: PointSelection::Cells,
            seed: 0,
            threads: 1,
        }
    }
}

impl RunSection {
    pub fn schedule(&self) -> Result<CheckpointSchedule, Error> {
        if self.n_max <= 0 {
            return Err(Error::MalformedSpec(format!(
                "run.n_max must be positive, got {}",
                self.n_max
            )));
        }
        let n_max = self.n_max as usize;
        let schedule = match self.schedule {
            ScheduleKind::Dyadic => CheckpointSchedule::Dyadic { n_max },
            ScheduleKind::Arithmetic => CheckpointSchedule::Arithmetic {
                step: self
                    .step
                    .ok_or_else(|| Error::MalformedSpec("arithmetic schedule needs run.step".into()))?,
                n_max,
            },
            ScheduleKind::Explicit => {
                if self.checkpoints.last().is_some_and(|&n| n > n_max) {
                    return Err(Error::MalformedSpec("explicit checkpoints exceed run.n_max".into()));
                }
                CheckpointSchedule::Explicit {
                    points: self.checkpoints.clone(),
                }
            }
        };
        schedule.checkpoints()?;
        Ok(schedule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EgorovSection {
    pub epsilon: f64,
    pub delta: f64,
    /// First checkpoint of the Cauchy window.
    pub n_start: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Continuous,
    Atoms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSection {
    pub l_max: usize,
    #[serde(default)]
    pub wiener_m: Vec<usize>,
    /// θ grid `j/atom_grid` for the atom scan.
    pub atom_grid: usize,
    #[serde(default)]
    pub extra_theta: Vec<f64>,
    pub atom_n: usize,
    pub tolerance: f64,
    #[serde(default)]
    pub psd_trials: usize,
    pub psd_m: Option<usize>,
    pub expect: Option<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VdcSection {
    pub cases: usize,
    pub max_n: usize,
    pub points: usize,
    #[serde(default = "yes")]
    pub include_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalSection {
    /// Random (system, g, p, t) cases drawn from `run.seed`.
    #[serde(default)]
    pub random_cases: usize,
    #[serde(default = "default_max_states")]
    pub max_states: usize,
    pub n_max: Vec<usize>,
    /// Exponents and thresholds for the configured system and observable.
    #[serde(default)]
    pub p: Vec<u32>,
    #[serde(default)]
    pub t: Vec<f64>,
}

fn yes() -> bool {
    true
}

fn default_max_states() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn require_system(&self) -> Result<&SystemSpec, Error> {
        self.system
            .as_ref()
            .ok_or_else(|| Error::MalformedSpec("missing [system] section".into()))
    }

    pub fn require_observable(&self) -> Result<Observable, Error> {
        self.observable
            .as_ref()
            .ok_or_else(|| Error::MalformedSpec("missing [observable] section".into()))?
            .build()
    }

    /// Canonical JSON form (sorted keys) used for the manifest digest.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }
}
