//! Builtin scenarios, selectable by name wherever a config path is
//! accepted.

use ofl_core::actions::{builtin_map_names, CompositionLaw, MapKind};
use ofl_core::analysis::PairScheme;
use ofl_core::point::Point;

use crate::config::{
    ActionConfig, ExperimentKind, PlanConfig, Scenario, SolverFileConfig, SolverMethod,
    SpaceConfig,
};

pub fn scenario_names() -> Vec<&'static str> {
    vec![
        "example-3-5",
        "example-4-4",
        "remark-4-6",
        "example-4-7",
        "remark-5-8",
        "baseline-scale",
    ]
}

pub fn space_names() -> Vec<&'static str> {
    vec!["interval", "max_norm", "euclidean", "lp", "tree", "seq"]
}

pub fn map_names() -> Vec<&'static str> {
    builtin_map_names().to_vec()
}

fn base(name: &str, kind: ExperimentKind, seed: u64) -> Scenario {
    Scenario {
        version: 1,
        name: name.to_string(),
        kind,
        seed,
        space: None,
        action: None,
        plan: None,
        star_k: None,
        solver: None,
        kappa_budget: None,
        normal_sets: None,
    }
}

pub fn builtin(name: &str) -> Option<Scenario> {
    let sc = match name {
        "example-3-5" => {
            let mut sc = base(name, ExperimentKind::Analyze, 35);
            sc.space = Some(SpaceConfig::Interval { a: -1.0, b: 1.0 });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::Sa { a: 0.5 }],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig {
                pairs: 600,
                horizon: 32,
                word_grades: 16,
                ..PlanConfig::default()
            });
            sc.solver = Some(SolverFileConfig {
                x0: Point::scalar(0.7),
                method: SolverMethod::All,
                epsilon: 1e-6,
                max_iters: 800,
                horizon: 64,
                tail_start: 32,
                k_target: Some(1.5),
                y_candidates: 16,
            });
            sc
        }
        "example-4-4" => {
            let mut sc = base(name, ExperimentKind::Analyze, 44);
            sc.space = Some(SpaceConfig::Interval { a: 0.0, b: 1.0 });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::Square],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig {
                pairs: 2000,
                horizon: 32,
                word_grades: 16,
                scheme: Some(PairScheme::ScaledFirst { factor: 0.5 }),
                include_probes: true,
            });
            sc.star_k = Some(1.0);
            sc.solver = Some(SolverFileConfig {
                x0: Point::scalar(0.9),
                method: SolverMethod::All,
                epsilon: 1e-6,
                max_iters: 200,
                horizon: 64,
                tail_start: 32,
                k_target: Some(1.5),
                y_candidates: 16,
            });
            sc
        }
        "remark-4-6" => {
            let mut sc = base(name, ExperimentKind::Analyze, 46);
            sc.space = Some(SpaceConfig::Interval { a: 0.0, b: 1.0 });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::Step],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig {
                pairs: 2000,
                horizon: 16,
                word_grades: 8,
                ..PlanConfig::default()
            });
            sc.star_k = Some(2.0);
            sc.solver = Some(SolverFileConfig {
                x0: Point::scalar(0.3),
                method: SolverMethod::All,
                epsilon: 1e-6,
                max_iters: 200,
                horizon: 64,
                tail_start: 32,
                k_target: Some(1.9),
                y_candidates: 16,
            });
            sc
        }
        "example-4-7" => {
            let mut sc = base(name, ExperimentKind::Analyze, 47);
            sc.space = Some(SpaceConfig::Lp {
                dim: 8,
                p: 2.0,
                radius: 1.0,
            });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::ShiftLp],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig {
                pairs: 128,
                horizon: 16,
                word_grades: 8,
                scheme: Some(PairScheme::FixedFirst {
                    point: Point::coords(vec![0.0; 8]),
                }),
                include_probes: true,
            });
            sc.solver = Some(SolverFileConfig {
                x0: Point::coords(vec![0.0; 8]),
                method: SolverMethod::All,
                epsilon: 1e-6,
                max_iters: 60,
                horizon: 64,
                tail_start: 32,
                k_target: Some(1.3),
                y_candidates: 8,
            });
            sc
        }
        "remark-5-8" => {
            let mut sc = base(name, ExperimentKind::Analyze, 58);
            sc.space = Some(SpaceConfig::Seq {
                value_lo: -8.0,
                value_hi: 8.0,
                max_prefix: 6,
            });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::Prus],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig {
                pairs: 128,
                horizon: 24,
                word_grades: 12,
                ..PlanConfig::default()
            });
            sc.solver = Some(SolverFileConfig {
                x0: Point::seq(vec![], 0.0),
                method: SolverMethod::OrbitCenter,
                epsilon: 1e-6,
                max_iters: 200,
                horizon: 64,
                tail_start: 32,
                k_target: None,
                y_candidates: 4,
            });
            sc
        }
        "baseline-scale" => {
            let mut sc = base(name, ExperimentKind::Solve, 99);
            sc.space = Some(SpaceConfig::Interval { a: 0.0, b: 1.0 });
            sc.action = Some(ActionConfig {
                generators: vec![MapKind::Scale { c: 0.5 }],
                law: CompositionLaw::Single,
            });
            sc.plan = Some(PlanConfig::default());
            sc.solver = Some(SolverFileConfig {
                x0: Point::scalar(0.8),
                method: SolverMethod::All,
                epsilon: 1e-9,
                max_iters: 200,
                horizon: 64,
                tail_start: 32,
                k_target: Some(1.5),
                y_candidates: 8,
            });
            sc
        }
        _ => return None,
    };
    Some(sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_catalog_entries_build() {
        for name in scenario_names() {
            let sc = builtin(name).unwrap();
            assert_eq!(sc.version, 1);
            sc.build_action().unwrap();
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn required_names_are_listed() {
        let names = scenario_names();
        for required in [
            "example-3-5",
            "example-4-4",
            "remark-4-6",
            "example-4-7",
            "remark-5-8",
        ] {
            assert!(names.contains(&required));
        }
        for required in ["sa", "square", "step", "shift_lp", "prus"] {
            assert!(map_names().contains(&required));
        }
        assert_eq!(space_names().len(), 6);
    }
}
