//! Sampled estimation of the orbit Lipschitz hierarchy.
//!
//! Three constants are estimated from one shared pass. For a sampled pair
//! `(x, y)`, the pass walks every shifted pair `(x, w y)` for table words
//! `w` and every numerator word `s`:
//!
//! * plain:    d(s x, s(w y)) / d(x, w y)
//! * orbit:    d(s x, s(w y)) / D(x, o(w y))
//! * strong:   D(s x, o(s(w y))) / D(x, o(w y))
//!
//! Orbits are truncated at the table horizon, so denominators are
//! under-approximations and the reported ratios are upper-biased
//! (conservative). Within one pass the orbit estimate never exceeds the
//! plain one, and on single-generator or commuting actions the strong
//! estimate never exceeds the orbit one; both inequalities hold exactly at
//! the level of the shared sample.

use serde::{Deserialize, Serialize};

use crate::actions::{Action, CompositionLaw, WordTable};
use crate::error::{CoreError, CoreResult};
use crate::parallel::map_batches;
use crate::point::Point;
use crate::rng::batch_rng;
use crate::spaces::Space;
use crate::{DEFAULT_TOL, DENOM_FLOOR};

/// How the sampled pair family is generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairScheme {
    /// Both endpoints drawn independently.
    Uniform,
    /// First endpoint pinned, second sampled.
    FixedFirst { point: Point },
    /// First endpoint is the second scaled toward the origin.
    ScaledFirst { factor: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePlan {
    pub seed: u64,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_word_grades")]
    pub word_grades: usize,
    #[serde(default = "default_scheme")]
    pub scheme: PairScheme,
    #[serde(default = "default_true")]
    pub include_probes: bool,
    #[serde(default = "default_floor")]
    pub denominator_floor: f64,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
}

fn default_pairs() -> usize {
    512
}
fn default_horizon() -> usize {
    48
}
fn default_word_grades() -> usize {
    24
}
fn default_scheme() -> PairScheme {
    PairScheme::Uniform
}
fn default_true() -> bool {
    true
}
fn default_floor() -> f64 {
    DENOM_FLOOR
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl SamplePlan {
    pub fn new(seed: u64) -> Self {
        SamplePlan {
            seed,
            pairs: default_pairs(),
            horizon: default_horizon(),
            word_grades: default_word_grades(),
            scheme: PairScheme::Uniform,
            include_probes: true,
            denominator_floor: DENOM_FLOOR,
            tolerance: DEFAULT_TOL,
        }
    }

    pub fn with_pairs(mut self, pairs: usize) -> Self {
        self.pairs = pairs;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_word_grades(mut self, grades: usize) -> Self {
        self.word_grades = grades;
        self
    }

    pub fn with_scheme(mut self, scheme: PairScheme) -> Self {
        self.scheme = scheme;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioEstimate {
    pub value: f64,
    pub witness_x: Option<Point>,
    pub witness_y: Option<Point>,
    pub word: Option<String>,
}

impl RatioEstimate {
    fn empty() -> Self {
        RatioEstimate {
            value: 0.0,
            witness_x: None,
            witness_y: None,
            word: None,
        }
    }

    fn update(&mut self, value: f64, x: &Point, y: &Point, word: impl Fn() -> String) {
        if value > self.value {
            self.value = value;
            self.witness_x = Some(x.clone());
            self.witness_y = Some(y.clone());
            self.word = Some(word());
        }
    }

    fn merge(&mut self, other: RatioEstimate) {
        if other.value > self.value {
            *self = other;
        }
    }
}

/// Sampled suprema of the three Lipschitz ratios with attaining witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub k_uniform: RatioEstimate,
    pub k_orbit: RatioEstimate,
    pub k_strong: RatioEstimate,
    pub law: CompositionLaw,
    pub pairs_used: usize,
    pub pairs_floored: usize,
    pub horizon: usize,
    pub word_grades: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarWitness {
    pub x: Point,
    pub y: Point,
    pub word: String,
    pub margin: f64,
}

/// Worst margin of the tail-infimum displacement condition at level `k`:
/// over gated pairs and words `s`, the smallest over tails `t` of
/// `D(sx, o(tsy))` minus `k D(x, o(y))`. The tail infimum is truncated at
/// the horizon, so the margin over-estimates the true one: a pass is
/// conservative and a failure is advisory.
#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub k: f64,
    pub pass: bool,
    pub inconclusive: bool,
    pub worst_margin: f64,
    pub gated_pairs: usize,
    pub tolerance: f64,
    pub witness: Option<StarWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyCheck {
    pub pass: bool,
    pub orbit_le_uniform: bool,
    /// Checked only for single-generator and commuting actions.
    pub strong_le_orbit: Option<bool>,
    pub tolerance: f64,
}

struct PassAccum {
    uniform: RatioEstimate,
    orbit: RatioEstimate,
    strong: RatioEstimate,
    pairs_used: usize,
    pairs_floored: usize,
}

impl PassAccum {
    fn new() -> Self {
        PassAccum {
            uniform: RatioEstimate::empty(),
            orbit: RatioEstimate::empty(),
            strong: RatioEstimate::empty(),
            pairs_used: 0,
            pairs_floored: 0,
        }
    }

    fn merge(&mut self, other: PassAccum) {
        self.uniform.merge(other.uniform);
        self.orbit.merge(other.orbit);
        self.strong.merge(other.strong);
        self.pairs_used += other.pairs_used;
        self.pairs_floored += other.pairs_floored;
    }
}

fn scaled_point(p: &Point, factor: f64) -> Option<Point> {
    match p {
        Point::Coords { xs, rational } => Some(Point::Coords {
            xs: xs.iter().map(|v| factor * v).collect(),
            rational: *rational,
        }),
        _ => None,
    }
}

fn probe_pairs(space: &Space, scheme: &PairScheme) -> Vec<(Point, Point)> {
    let probes = space.probes();
    let mut out = Vec::new();
    match scheme {
        PairScheme::Uniform => {
            for (i, p) in probes.iter().enumerate() {
                for (j, q) in probes.iter().enumerate() {
                    if i != j {
                        out.push((p.clone(), q.clone()));
                    }
                }
            }
        }
        PairScheme::FixedFirst { point } => {
            for q in &probes {
                out.push((point.clone(), q.clone()));
            }
        }
        PairScheme::ScaledFirst { factor } => {
            for q in &probes {
                if let Some(x) = scaled_point(q, *factor) {
                    if space.check_point(&x).is_ok() {
                        out.push((x, q.clone()));
                    }
                }
            }
        }
    }
    out
}

fn sampled_pair(
    space: &Space,
    scheme: &PairScheme,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<(Point, Point)> {
    let y = space.sample(rng);
    let x = match scheme {
        PairScheme::Uniform => space.sample(rng),
        PairScheme::FixedFirst { point } => point.clone(),
        PairScheme::ScaledFirst { factor } => {
            let x = scaled_point(&y, *factor)?;
            space.check_point(&x).ok()?;
            x
        }
    };
    Some((x, y))
}

/// One pair's contribution: walks all (numerator word, shift word) cells.
fn accumulate_pair(
    action: &Action,
    table: &WordTable,
    comp: &[Vec<Option<usize>>],
    plan: &SamplePlan,
    x: &Point,
    y: &Point,
    acc: &mut PassAccum,
) -> CoreResult<()> {
    let space = &action.space;
    let ox = action.orbit_points(table, x)?;
    let oy = action.orbit_points(table, y)?;
    let n = table.len();

    // d(x, oy[v]) and the orbit denominators D(x, o(w y))
    let mut dxy = vec![0.0f64; n];
    for v in 0..n {
        dxy[v] = space.distance(x, &oy[v])?;
    }
    let mut den_orbit = vec![0.0f64; n];
    for w in 0..n {
        let mut m: f64 = 0.0;
        for &v in table.reach(w) {
            m = m.max(dxy[v]);
        }
        den_orbit[w] = m;
    }

    let mut used = false;
    let mut row = vec![0.0f64; n];
    let mut rowmax = vec![0.0f64; n];
    for s in 0..n {
        let gs = table.grades[s];
        if gs == 0 || gs > plan.word_grades {
            continue;
        }
        for v in 0..n {
            row[v] = space.distance(&ox[s], &oy[v])?;
        }
        for w in 0..n {
            let mut m: f64 = 0.0;
            for &v in table.reach(w) {
                m = m.max(row[v]);
            }
            rowmax[w] = m;
        }
        for w in 0..n {
            if table.grades[w] > plan.word_grades {
                continue;
            }
            let Some(sw) = comp[s][w] else { continue };
            let num = row[sw];
            let du = dxy[w];
            if du >= plan.denominator_floor {
                used = true;
                acc.uniform.update(num / du, x, &oy[w], || {
                    table.words[s].describe(&action.generators)
                });
            }
            let dor = den_orbit[w];
            if dor >= plan.denominator_floor {
                used = true;
                acc.orbit.update(num / dor, x, &oy[w], || {
                    table.words[s].describe(&action.generators)
                });
                acc.strong.update(rowmax[sw] / dor, x, &oy[w], || {
                    table.words[s].describe(&action.generators)
                });
            }
        }
    }
    if used {
        acc.pairs_used += 1;
    } else {
        acc.pairs_floored += 1;
    }
    Ok(())
}

fn compose_matrix(table: &WordTable) -> Vec<Vec<Option<usize>>> {
    let n = table.len();
    let mut comp = vec![vec![None; n]; n];
    for (s, row) in comp.iter_mut().enumerate() {
        for (w, cell) in row.iter_mut().enumerate() {
            *cell = table.compose(s, w);
        }
    }
    comp
}

/// Estimate all three constants from one shared pass.
pub fn estimate_all(action: &Action, plan: &SamplePlan) -> CoreResult<LipschitzReport> {
    estimate_all_with_workers(action, plan, 1)
}

pub fn estimate_all_with_workers(
    action: &Action,
    plan: &SamplePlan,
    workers: usize,
) -> CoreResult<LipschitzReport> {
    let table = action.word_table(plan.horizon);
    let comp = compose_matrix(&table);

    // batch 0 carries probe pairs; sampled pairs are split across fixed
    // batches with derived seeds so worker count cannot change the result
    const BATCHES: usize = 8;
    let per_batch = plan.pairs.div_ceil(BATCHES);
    let results: Vec<CoreResult<PassAccum>> = map_batches(BATCHES, workers, |b| {
        let mut acc = PassAccum::new();
        if b == 0 && plan.include_probes {
            for (x, y) in probe_pairs(&action.space, &plan.scheme) {
                accumulate_pair(action, &table, &comp, plan, &x, &y, &mut acc)?;
            }
        }
        let mut rng = batch_rng(plan.seed, b as u64);
        for _ in 0..per_batch {
            if let Some((x, y)) = sampled_pair(&action.space, &plan.scheme, &mut rng) {
                accumulate_pair(action, &table, &comp, plan, &x, &y, &mut acc)?;
            }
        }
        Ok(acc)
    });

    let mut total = PassAccum::new();
    for r in results {
        total.merge(r?);
    }
    if total.pairs_used == 0 {
        return Err(CoreError::Domain(
            "degenerate sampler: no pair produced a usable denominator".into(),
        ));
    }
    Ok(LipschitzReport {
        k_uniform: total.uniform,
        k_orbit: total.orbit,
        k_strong: total.strong,
        law: action.law,
        pairs_used: total.pairs_used,
        pairs_floored: total.pairs_floored,
        horizon: plan.horizon,
        word_grades: plan.word_grades,
        seed: plan.seed,
    })
}

pub fn estimate_uniform(action: &Action, plan: &SamplePlan) -> CoreResult<RatioEstimate> {
    Ok(estimate_all(action, plan)?.k_uniform)
}

pub fn estimate_orbit(action: &Action, plan: &SamplePlan) -> CoreResult<RatioEstimate> {
    Ok(estimate_all(action, plan)?.k_orbit)
}

pub fn estimate_strong(action: &Action, plan: &SamplePlan) -> CoreResult<RatioEstimate> {
    Ok(estimate_all(action, plan)?.k_strong)
}

/// Check the tail-infimum displacement condition at level `k`. Pairs are
/// drawn with the plan's scheme until `plan.pairs` of them satisfy the gate
/// `D(x, o(y)) <= D(x, o(x))`.
pub fn check_star(action: &Action, k: f64, plan: &SamplePlan) -> CoreResult<StarReport> {
    if k <= 0.0 {
        return Err(CoreError::Domain("star level k must be positive".into()));
    }
    let table = action.word_table(plan.horizon);
    let comp = compose_matrix(&table);
    let space = &action.space;
    let n = table.len();
    let tol = plan.tolerance;

    let mut gated: usize = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut witness: Option<StarWitness> = None;

    let mut rng = batch_rng(plan.seed, 0);
    let mut probe_queue = if plan.include_probes {
        probe_pairs(space, &plan.scheme)
    } else {
        Vec::new()
    };
    probe_queue.reverse();

    let mut attempts = 0usize;
    let max_attempts = plan.pairs.saturating_mul(20).max(1000);
    let mut row = vec![0.0f64; n];
    while gated < plan.pairs && attempts < max_attempts {
        attempts += 1;
        let (x, y) = match probe_queue.pop() {
            Some(p) => p,
            None => match sampled_pair(space, &plan.scheme, &mut rng) {
                Some(p) => p,
                None => continue,
            },
        };
        let ox = action.orbit_points(&table, &x)?;
        let oy = action.orbit_points(&table, &y)?;
        let mut d_x_oy: f64 = 0.0;
        for p in &oy {
            d_x_oy = d_x_oy.max(space.distance(&x, p)?);
        }
        let mut d_x_ox: f64 = 0.0;
        for p in &ox {
            d_x_ox = d_x_ox.max(space.distance(&x, p)?);
        }
        // the gate
        if d_x_oy > d_x_ox + tol || d_x_oy < plan.denominator_floor {
            continue;
        }
        gated += 1;
        for s in 0..n {
            let gs = table.grades[s];
            if gs == 0 || gs > plan.word_grades {
                continue;
            }
            for v in 0..n {
                row[v] = space.distance(&ox[s], &oy[v])?;
            }
            // inf over tails t of D(sx, o((t s) y)), truncated to the table;
            // tails whose remaining orbit degenerates to one or two points
            // are excluded so the farthest-point distances stay meaningful
            let mut inf = f64::INFINITY;
            for t in 0..n {
                let Some(ts) = comp[t][s] else { continue };
                if table.reach(ts).len() < 3 {
                    continue;
                }
                let mut m: f64 = 0.0;
                for &v in table.reach(ts) {
                    m = m.max(row[v]);
                }
                inf = inf.min(m);
            }
            if !inf.is_finite() {
                continue;
            }
            let margin = inf - k * d_x_oy;
            if margin > worst {
                worst = margin;
                witness = Some(StarWitness {
                    x: x.clone(),
                    y: y.clone(),
                    word: table.words[s].describe(&action.generators),
                    margin,
                });
            }
        }
    }
    // with no gated pair the condition is vacuous: pass, flagged
    Ok(StarReport {
        k,
        pass: gated == 0 || worst <= tol,
        inconclusive: gated == 0,
        worst_margin: if worst.is_finite() { worst } else { f64::NAN },
        gated_pairs: gated,
        tolerance: tol,
        witness,
    })
}

/// The hierarchy inequalities at the level of sampled suprema.
pub fn check_hierarchy(report: &LipschitzReport) -> HierarchyCheck {
    let tol = DEFAULT_TOL;
    let orbit_le_uniform = report.k_orbit.value <= report.k_uniform.value + tol;
    let strong_le_orbit = match report.law {
        CompositionLaw::Single | CompositionLaw::Commuting => {
            Some(report.k_strong.value <= report.k_orbit.value + tol)
        }
        CompositionLaw::Free => None,
    };
    HierarchyCheck {
        pass: orbit_le_uniform && strong_le_orbit.unwrap_or(true),
        orbit_le_uniform,
        strong_le_orbit,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{GeneratorMap, MapKind};
    use crate::spaces::{Interval, Lp};

    fn unit_interval_action(kind: MapKind) -> Action {
        Action::single(Space::Interval(Interval::new(0.0, 1.0).unwrap()), kind).unwrap()
    }

    #[test]
    fn identity_action_has_all_constants_one() {
        let act = unit_interval_action(MapKind::Identity);
        let plan = SamplePlan::new(1).with_pairs(64).with_horizon(8).with_word_grades(4);
        let rep = estimate_all(&act, &plan).unwrap();
        assert!((rep.k_uniform.value - 1.0).abs() < 1e-12);
        assert!((rep.k_orbit.value - 1.0).abs() < 1e-12);
        assert!((rep.k_strong.value - 1.0).abs() < 1e-12);
        assert!(check_hierarchy(&rep).pass);
    }

    #[test]
    fn plain_contraction_scores_its_factor() {
        let act = unit_interval_action(MapKind::Scale { c: 0.5 });
        let plan = SamplePlan::new(2).with_pairs(128).with_horizon(16).with_word_grades(8);
        let rep = estimate_all(&act, &plan).unwrap();
        assert!((rep.k_uniform.value - 0.5).abs() < 1e-9);
        // strong constant by brute force at a fixed pair and horizon 16:
        // tail distances scale by the factor each application
        assert!((rep.k_strong.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn step_map_orbit_constant_is_two_with_the_midpoint_witness() {
        let act = unit_interval_action(MapKind::Step);
        let plan = SamplePlan::new(3).with_pairs(512).with_horizon(16).with_word_grades(8);
        let rep = estimate_all(&act, &plan).unwrap();
        assert!((rep.k_orbit.value - 2.0).abs() < 1e-9, "{}", rep.k_orbit.value);
        let wx = rep.k_orbit.witness_x.unwrap().as_scalar().unwrap();
        let wy = rep.k_orbit.witness_y.unwrap().as_scalar().unwrap();
        assert_eq!((wx, wy), (0.5, 1.0));
        // plain ratios blow past any fixed bound near the jump
        assert!(rep.k_uniform.value > 10.0);
    }

    #[test]
    fn square_map_has_no_uniform_bound_but_orbit_bound_two() {
        let act = unit_interval_action(MapKind::Square);
        let plan = SamplePlan::new(4)
            .with_pairs(2000)
            .with_horizon(32)
            .with_word_grades(16)
            .with_scheme(PairScheme::ScaledFirst { factor: 0.5 });
        let rep = estimate_all(&act, &plan).unwrap();
        assert!(rep.k_orbit.value > 1.9, "{}", rep.k_orbit.value);
        assert!(rep.k_orbit.value <= 2.0 + 1e-9);
        assert!(check_hierarchy(&rep).pass);
    }

    #[test]
    fn sign_flipping_contraction_obeys_the_orbit_bound() {
        for a in [0.25, 0.5, 0.6] {
            let act = Action::single(
                Space::Interval(Interval::new(-1.0, 1.0).unwrap()),
                MapKind::Sa { a },
            )
            .unwrap();
            let plan = SamplePlan::new(5).with_pairs(600).with_horizon(32).with_word_grades(16);
            let rep = estimate_all(&act, &plan).unwrap();
            assert!(
                rep.k_orbit.value <= 3.0 * a + 0.01,
                "a={a}: {}",
                rep.k_orbit.value
            );
            assert!(check_hierarchy(&rep).pass);
        }
    }

    #[test]
    fn cyclic_shift_strong_constant_is_the_basis_gap() {
        for p in [1.0, 2.0, 4.0] {
            let lp = Lp::new(8, p, 1.0).unwrap();
            let origin = Point::coords(vec![0.0; 8]);
            let act = Action::single(Space::Lp(lp), MapKind::ShiftLp).unwrap();
            let plan = SamplePlan::new(6)
                .with_pairs(128)
                .with_horizon(16)
                .with_word_grades(8)
                .with_scheme(PairScheme::FixedFirst { point: origin });
            let rep = estimate_all(&act, &plan).unwrap();
            let expected = 2f64.powf(1.0 / p);
            assert!(
                (rep.k_strong.value - expected).abs() < 0.02,
                "p={p}: {} vs {expected}",
                rep.k_strong.value
            );
        }
    }

    #[test]
    fn star_condition_square_map_passes_at_one() {
        let act = unit_interval_action(MapKind::Square);
        let plan = SamplePlan::new(7).with_pairs(400).with_horizon(32).with_word_grades(8);
        let rep = check_star(&act, 1.0, &plan).unwrap();
        assert!(rep.pass, "margin {}", rep.worst_margin);
        assert!(rep.gated_pairs >= 400);
    }

    #[test]
    fn star_condition_step_map_threshold_is_two() {
        let act = unit_interval_action(MapKind::Step);
        let plan = SamplePlan::new(8).with_pairs(300).with_horizon(16).with_word_grades(8);
        let pass2 = check_star(&act, 2.0, &plan).unwrap();
        assert!(pass2.pass, "margin {}", pass2.worst_margin);
        let fail19 = check_star(&act, 1.9, &plan).unwrap();
        assert!(!fail19.pass);
        let w = fail19.witness.unwrap();
        assert_eq!(w.x.as_scalar(), Some(0.5));
        assert_eq!(w.y.as_scalar(), Some(1.0));
    }

    #[test]
    fn identity_star_passes_at_one() {
        let act = unit_interval_action(MapKind::Identity);
        let plan = SamplePlan::new(9).with_pairs(100).with_horizon(8).with_word_grades(4);
        let rep = check_star(&act, 1.0, &plan).unwrap();
        // the gate D(x,o(y)) <= D(x,o(x)) = 0 admits no usable pair, so the
        // condition holds vacuously
        assert!(rep.pass);
        assert!(rep.inconclusive);
    }

    #[test]
    fn reports_are_bit_reproducible() {
        let act = unit_interval_action(MapKind::Square);
        let plan = SamplePlan::new(10).with_pairs(200).with_horizon(16).with_word_grades(8);
        let a = serde_json::to_string(&estimate_all(&act, &plan).unwrap()).unwrap();
        let b = serde_json::to_string(&estimate_all(&act, &plan).unwrap()).unwrap();
        assert_eq!(a, b);
        // worker count must not change the result
        let c = serde_json::to_string(&estimate_all_with_workers(&act, &plan, 4).unwrap()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn orbit_estimate_is_non_increasing_in_horizon() {
        let act = unit_interval_action(MapKind::Square);
        let mut last = f64::INFINITY;
        for h in [8usize, 16, 32] {
            let plan = SamplePlan::new(11)
                .with_pairs(200)
                .with_horizon(h)
                .with_word_grades(6)
                .with_scheme(PairScheme::ScaledFirst { factor: 0.5 });
            let rep = estimate_all(&act, &plan).unwrap();
            assert!(rep.k_orbit.value <= last + 1e-12);
            last = rep.k_orbit.value;
        }
    }

    #[test]
    fn free_pair_still_orders_orbit_below_uniform() {
        let space = Space::Euclidean(crate::spaces::Euclidean::unit(2));
        let act = Action::new(
            space,
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 1.0 }),
                GeneratorMap::new(MapKind::Reflection { angle: 0.0 }),
            ],
            CompositionLaw::Free,
        )
        .unwrap();
        let plan = SamplePlan::new(12).with_pairs(64).with_horizon(4).with_word_grades(3);
        let rep = estimate_all(&act, &plan).unwrap();
        let h = check_hierarchy(&rep);
        assert!(h.orbit_le_uniform);
        assert!(h.strong_le_orbit.is_none());
    }
}
