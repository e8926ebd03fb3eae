//! Scenario files: versioned JSON with unknown keys rejected, seeds
//! mandatory.

use serde::{Deserialize, Serialize};

use ofl_core::actions::{Action, CompositionLaw, GeneratorMap, MapKind};
use ofl_core::analysis::{PairScheme, SamplePlan};
use ofl_core::error::{CoreError, CoreResult};
use ofl_core::point::Point;
use ofl_core::solvers::SolverConfig;
use ofl_core::spaces::{Euclidean, Interval, Lp, MaxNorm, SeqSpace, Space, TreeSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Analyze,
    Solve,
    Kappa,
    Normal,
    Repro,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Analyze => "analyze",
            ExperimentKind::Solve => "solve",
            ExperimentKind::Kappa => "kappa",
            ExperimentKind::Normal => "normal",
            ExperimentKind::Repro => "repro",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Interval {
        a: f64,
        b: f64,
    },
    MaxNorm {
        bounds: Vec<(f64, f64)>,
    },
    Euclidean {
        dim: usize,
        #[serde(default)]
        center: Option<Vec<f64>>,
        radius: f64,
    },
    Lp {
        dim: usize,
        p: f64,
        radius: f64,
    },
    Tree {
        vertices: usize,
        edges: Vec<(usize, usize, f64)>,
    },
    Seq {
        value_lo: f64,
        value_hi: f64,
        max_prefix: usize,
    },
}

impl SpaceConfig {
    pub fn build(&self) -> CoreResult<Space> {
        Ok(match self {
            SpaceConfig::Interval { a, b } => Space::Interval(Interval::new(*a, *b)?),
            SpaceConfig::MaxNorm { bounds } => Space::MaxNorm(MaxNorm::new(bounds.clone())?),
            SpaceConfig::Euclidean { dim, center, radius } => Space::Euclidean(Euclidean::new(
                *dim,
                center.clone().unwrap_or_else(|| vec![0.0; *dim]),
                *radius,
            )?),
            SpaceConfig::Lp { dim, p, radius } => Space::Lp(Lp::new(*dim, *p, *radius)?),
            SpaceConfig::Tree { vertices, edges } => {
                Space::Tree(TreeSpace::new(*vertices, edges.clone())?)
            }
            SpaceConfig::Seq {
                value_lo,
                value_hi,
                max_prefix,
            } => Space::Seq(SeqSpace::new(*value_lo, *value_hi, *max_prefix)?),
        })
    }
}

fn default_law() -> CompositionLaw {
    CompositionLaw::Single
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionConfig {
    pub generators: Vec<MapKind>,
    #[serde(default = "default_law")]
    pub law: CompositionLaw,
}

impl ActionConfig {
    pub fn build(&self, space: Space) -> CoreResult<Action> {
        Action::new(
            space,
            self.generators.iter().cloned().map(GeneratorMap::new).collect(),
            self.law,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    #[serde(default = "dflt_pairs")]
    pub pairs: usize,
    #[serde(default = "dflt_horizon")]
    pub horizon: usize,
    #[serde(default = "dflt_grades")]
    pub word_grades: usize,
    #[serde(default)]
    pub scheme: Option<PairScheme>,
    #[serde(default = "dflt_true")]
    pub include_probes: bool,
}

fn dflt_pairs() -> usize {
    512
}
fn dflt_horizon() -> usize {
    48
}
fn dflt_grades() -> usize {
    24
}
fn dflt_true() -> bool {
    true
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            pairs: dflt_pairs(),
            horizon: dflt_horizon(),
            word_grades: dflt_grades(),
            scheme: None,
            include_probes: true,
        }
    }
}

impl PlanConfig {
    pub fn build(&self, seed: u64) -> SamplePlan {
        let mut plan = SamplePlan::new(seed)
            .with_pairs(self.pairs)
            .with_horizon(self.horizon)
            .with_word_grades(self.word_grades);
        if let Some(s) = &self.scheme {
            plan = plan.with_scheme(s.clone());
        }
        plan.include_probes = self.include_probes;
        plan
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    All,
    Picard,
    OrbitCenter,
    Lifschitz,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverFileConfig {
    pub x0: Point,
    #[serde(default = "dflt_method")]
    pub method: SolverMethod,
    #[serde(default = "dflt_epsilon")]
    pub epsilon: f64,
    #[serde(default = "dflt_max_iters")]
    pub max_iters: usize,
    #[serde(default = "dflt_solver_horizon")]
    pub horizon: usize,
    #[serde(default = "dflt_tail")]
    pub tail_start: usize,
    #[serde(default)]
    pub k_target: Option<f64>,
    #[serde(default = "dflt_cands")]
    pub y_candidates: usize,
}

fn dflt_method() -> SolverMethod {
    SolverMethod::All
}
fn dflt_epsilon() -> f64 {
    1e-6
}
fn dflt_max_iters() -> usize {
    400
}
fn dflt_solver_horizon() -> usize {
    64
}
fn dflt_tail() -> usize {
    32
}
fn dflt_cands() -> usize {
    16
}

impl SolverFileConfig {
    pub fn build(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            epsilon: self.epsilon,
            max_iters: self.max_iters,
            horizon: self.horizon,
            tail_start: self.tail_start,
            k_target: self.k_target,
            y_candidates: self.y_candidates,
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    #[serde(default)]
    pub space: Option<SpaceConfig>,
    #[serde(default)]
    pub action: Option<ActionConfig>,
    #[serde(default)]
    pub plan: Option<PlanConfig>,
    /// Level at which the tail-infimum condition is checked during analyze.
    #[serde(default)]
    pub star_k: Option<f64>,
    #[serde(default)]
    pub solver: Option<SolverFileConfig>,
    #[serde(default)]
    pub kappa_budget: Option<usize>,
    #[serde(default)]
    pub normal_sets: Option<usize>,
}

impl Scenario {
    pub fn parse(text: &str) -> CoreResult<Scenario> {
        let sc: Scenario = serde_json::from_str(text)
            .map_err(|e| CoreError::InvalidConfig(format!("scenario parse: {e}")))?;
        if sc.version != 1 {
            return Err(CoreError::InvalidConfig(format!(
                "unsupported scenario version {}",
                sc.version
            )));
        }
        Ok(sc)
    }

    pub fn build_space(&self) -> CoreResult<Space> {
        self.space
            .as_ref()
            .ok_or_else(|| CoreError::InvalidConfig("scenario needs a space".into()))?
            .build()
    }

    pub fn build_action(&self) -> CoreResult<Action> {
        let space = self.build_space()?;
        self.action
            .as_ref()
            .ok_or_else(|| CoreError::InvalidConfig("scenario needs an action".into()))?
            .build(space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_scenario() {
        let text = r#"{
            "version": 1,
            "name": "demo",
            "kind": "analyze",
            "seed": 7,
            "space": {"kind": "interval", "a": 0.0, "b": 1.0},
            "action": {"generators": [{"map": "square"}]}
        }"#;
        let sc = Scenario::parse(text).unwrap();
        assert_eq!(sc.name, "demo");
        let action = sc.build_action().unwrap();
        assert_eq!(action.generators[0].name, "square");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_versions() {
        let unknown = r#"{
            "version": 1, "name": "x", "kind": "analyze", "seed": 1,
            "space": {"kind": "interval", "a": 0.0, "b": 1.0},
            "surprise": true
        }"#;
        assert!(Scenario::parse(unknown).is_err());
        let bad_version = r#"{"version": 2, "name": "x", "kind": "analyze", "seed": 1}"#;
        assert!(Scenario::parse(bad_version).is_err());
        let bad_map = r#"{
            "version": 1, "name": "x", "kind": "analyze", "seed": 1,
            "space": {"kind": "interval", "a": 0.0, "b": 1.0},
            "action": {"generators": [{"map": "wat"}]}
        }"#;
        assert!(Scenario::parse(bad_map).is_err());
    }
}
