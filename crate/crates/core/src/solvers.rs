//! Constructive common-fixed-point iterations with trace recording.
//!
//! Three drivers share the trace format:
//!
//! * [`picard`] — iterate one generator; the baseline.
//! * [`lifschitz_iteration`] — regularity-lens descent: estimate the
//!   smallest farthest-orbit distance `r(x)`, pick the worst single-word
//!   displacement, and jump to the lens covering point, shrinking `r`
//!   geometrically while the covering ratio holds.
//! * [`orbit_center_iteration`] — orbit-center descent: replace the iterate
//!   by the center of a truncated orbit tail; contraction is governed by
//!   the normal-structure coefficient times the squared strong constant.
//!
//! Runs report evidence, never certificates: a converged outcome means the
//! final residual beat the tolerance against every generator.

use serde::Serialize;

use crate::actions::{Action, PreorderPolicy, WordTable};
use crate::error::{CoreError, CoreResult};
use crate::metric::{chebyshev_center, sup_distance};
use crate::point::Point;
use crate::rng::rng_from;
use crate::spaces::Space;
use crate::DEFAULT_TOL;

#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iters: usize,
    pub horizon: usize,
    pub tail_start: usize,
    pub k_target: Option<f64>,
    pub y_candidates: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-6,
            max_iters: 400,
            horizon: 64,
            tail_start: 32,
            k_target: None,
            y_candidates: 16,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> CoreResult<()> {
        if !(self.epsilon > 0.0) {
            return Err(CoreError::InvalidConfig("epsilon must be positive".into()));
        }
        if self.tail_start >= self.horizon {
            return Err(CoreError::InvalidConfig(
                "tail_start must be below the horizon".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Converged { residual: f64 },
    CycleDetected { period: usize },
    Diverged,
    BudgetExhausted,
}

impl Outcome {
    pub fn is_converged(&self) -> bool {
        matches!(self, Outcome::Converged { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub iter: usize,
    /// Sampled infimum over candidate base points of the farthest-orbit
    /// distance; candidates always include the iterate itself.
    pub r_est: f64,
    /// D(x, o(x)).
    pub self_orbit_radius: f64,
    /// Orbit diameter (subsampled on large tables).
    pub orbit_diameter: f64,
    pub step_len: f64,
    pub residual: f64,
    /// Orbit-center descent: farthest distance from the new iterate to the
    /// orbit tail it was centered on.
    pub d_j: Option<f64>,
    /// Ratio of consecutive d_j values.
    pub contraction: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverTrace {
    pub method: String,
    pub iterates: Vec<Point>,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
    pub meta: Vec<(String, String)>,
}

impl SolverTrace {
    pub fn final_point(&self) -> &Point {
        self.iterates.last().expect("trace has iterates")
    }
}

/// Classify a finished iterate sequence: converged beats cycling beats
/// orbit blow-up beats running out of budget. The residual is recomputed
/// from the action, independent of whatever the driver recorded.
pub fn classify_outcome(action: &Action, iterates: &[Point], cfg: &SolverConfig) -> CoreResult<Outcome> {
    let last = iterates
        .last()
        .ok_or_else(|| CoreError::Domain("empty trace".into()))?;
    let residual = action.residual(last)?;
    if residual < cfg.epsilon {
        return Ok(Outcome::Converged { residual });
    }
    if let Some(period) = detect_cycle(&action.space, iterates, cfg)? {
        return Ok(Outcome::CycleDetected { period });
    }
    let table = action.word_table(cfg.horizon);
    let pts = action.orbit_points(&table, last)?;
    let diam = subsampled_diameter(&action.space, &pts)?;
    if diam > action.space.diameter_bound() * (1.0 + DEFAULT_TOL) {
        return Ok(Outcome::Diverged);
    }
    Ok(Outcome::BudgetExhausted)
}

fn detect_cycle(space: &Space, iterates: &[Point], cfg: &SolverConfig) -> CoreResult<Option<usize>> {
    let j = iterates.len() - 1;
    let last = &iterates[j];
    let window = cfg.horizon.min(j);
    for back in 1..=window {
        let i = j - back;
        if space.distance(&iterates[i], last)? < cfg.epsilon / 10.0 {
            return Ok(Some(back));
        }
    }
    Ok(None)
}

fn subsampled_diameter(space: &Space, pts: &[Point]) -> CoreResult<f64> {
    let stride = (pts.len() / 12).max(1);
    let sub: Vec<&Point> = pts.iter().step_by(stride).chain(pts.last()).collect();
    let mut d: f64 = 0.0;
    for (i, p) in sub.iter().enumerate() {
        for q in &sub[i + 1..] {
            d = d.max(space.distance(p, q)?);
        }
    }
    Ok(d)
}

/// Sampled estimate of `r(x) = inf over y of D(x, o(y))`, from below by
/// construction never above `D(x, o(x))` (the iterate itself is always a
/// candidate). Overestimates the true infimum; the bias is recorded by the
/// candidate count.
fn r_estimate(
    action: &Action,
    table: &WordTable,
    x: &Point,
    own_orbit: &[Point],
    prev: &[Point],
    n_samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CoreResult<f64> {
    let space = &action.space;
    let mut best = f64::INFINITY;
    let consider = |pts: &[Point], x: &Point, space: &Space| -> CoreResult<f64> {
        let mut m: f64 = 0.0;
        for p in pts {
            m = m.max(space.distance(x, p)?);
        }
        Ok(m)
    };
    // y = x
    best = best.min(consider(own_orbit, x, space)?);
    // y among early orbit points of x
    for (i, p) in own_orbit.iter().enumerate().take(9).skip(1) {
        let _ = i;
        let opts = action.orbit_points(table, p)?;
        best = best.min(consider(&opts, x, space)?);
    }
    // y among recent iterates
    for p in prev.iter().rev().take(4) {
        let opts = action.orbit_points(table, p)?;
        best = best.min(consider(&opts, x, space)?);
    }
    // uniform candidates
    for _ in 0..n_samples {
        let y = space.sample(rng);
        let opts = action.orbit_points(table, &y)?;
        best = best.min(consider(&opts, x, space)?);
    }
    Ok(best)
}

struct StepScan {
    r_est: f64,
    self_orbit_radius: f64,
    orbit_diameter: f64,
    residual: f64,
}

fn scan_state(
    action: &Action,
    table: &WordTable,
    x: &Point,
    own_orbit: &[Point],
    prev: &[Point],
    n_samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CoreResult<StepScan> {
    let space = &action.space;
    let self_orbit_radius = sup_distance(space, x, own_orbit)?;
    let orbit_diameter = subsampled_diameter(space, own_orbit)?;
    let residual = action.residual(x)?;
    let r_est = r_estimate(action, table, x, own_orbit, prev, n_samples, rng)?;
    Ok(StepScan {
        r_est,
        self_orbit_radius,
        orbit_diameter,
        residual,
    })
}

/// Iterate the first generator from `x0`.
pub fn picard(action: &Action, x0: &Point, cfg: &SolverConfig) -> CoreResult<SolverTrace> {
    cfg.validate()?;
    action.space.check_point(x0)?;
    let table = action.word_table(cfg.horizon);
    let mut rng = rng_from(cfg.seed);
    let mut iterates = vec![x0.clone()];
    let mut steps = Vec::new();
    let mut outcome = None;
    for iter in 0..cfg.max_iters {
        let x = iterates.last().unwrap().clone();
        let own = action.orbit_points(&table, &x)?;
        let scan = scan_state(action, &table, &x, &own, &iterates, 2, &mut rng)?;
        if scan.residual < cfg.epsilon {
            outcome = Some(Outcome::Converged {
                residual: scan.residual,
            });
            steps.push(StepRecord {
                iter,
                r_est: scan.r_est,
                self_orbit_radius: scan.self_orbit_radius,
                orbit_diameter: scan.orbit_diameter,
                step_len: 0.0,
                residual: scan.residual,
                d_j: None,
                contraction: None,
            });
            break;
        }
        let next = action.apply_gen(0, &x)?;
        let step_len = action.space.distance(&x, &next)?;
        iterates.push(next);
        steps.push(StepRecord {
            iter,
            r_est: scan.r_est,
            self_orbit_radius: scan.self_orbit_radius,
            orbit_diameter: scan.orbit_diameter,
            step_len,
            residual: scan.residual,
            d_j: None,
            contraction: None,
        });
        if let Some(period) = detect_cycle(&action.space, &iterates, cfg)? {
            outcome = Some(Outcome::CycleDetected { period });
            break;
        }
    }
    let outcome = match outcome {
        Some(o) => o,
        None => classify_outcome(action, &iterates, cfg)?,
    };
    Ok(SolverTrace {
        method: "picard".into(),
        iterates,
        steps,
        outcome,
        meta: vec![("generator".into(), action.generators[0].name.clone())],
    })
}

/// Orbit-center descent: the next iterate is the center of the orbit tail
/// `{w x : tail_start <= |w| <= horizon}`. Requires a center oracle and a
/// total word preorder.
pub fn orbit_center_iteration(
    action: &Action,
    x0: &Point,
    cfg: &SolverConfig,
) -> CoreResult<SolverTrace> {
    cfg.validate()?;
    action.space.check_point(x0)?;
    let policy = PreorderPolicy::for_law(action.law).ok_or_else(|| {
        CoreError::unsupported("free action", "orbit-center descent (no total preorder)")
    })?;
    let table = action.word_table(cfg.horizon);
    if !policy.is_total(&table) {
        return Err(CoreError::unsupported(
            "action",
            "orbit-center descent (word preorder is not total)",
        ));
    }
    let tail_idx: Vec<usize> = (0..table.len())
        .filter(|&i| table.grades[i] >= cfg.tail_start)
        .collect();

    let mut rng = rng_from(cfg.seed);
    let mut iterates = vec![x0.clone()];
    let mut steps = Vec::new();
    let mut outcome = None;
    let mut prev_dj: Option<f64> = None;
    for iter in 0..cfg.max_iters {
        let x = iterates.last().unwrap().clone();
        let own = action.orbit_points(&table, &x)?;
        let scan = scan_state(action, &table, &x, &own, &iterates, 2, &mut rng)?;
        if scan.self_orbit_radius < cfg.epsilon || scan.residual < cfg.epsilon {
            outcome = Some(Outcome::Converged {
                residual: scan.residual,
            });
            steps.push(StepRecord {
                iter,
                r_est: scan.r_est,
                self_orbit_radius: scan.self_orbit_radius,
                orbit_diameter: scan.orbit_diameter,
                step_len: 0.0,
                residual: scan.residual,
                d_j: None,
                contraction: None,
            });
            break;
        }
        if scan.orbit_diameter > action.space.diameter_bound() * (1.0 + DEFAULT_TOL) {
            outcome = Some(Outcome::Diverged);
            break;
        }
        let tail_points: Vec<Point> = tail_idx.iter().map(|&i| own[i].clone()).collect();
        let (z, _) = chebyshev_center(&action.space, &tail_points)?;
        let d_j = sup_distance(&action.space, &z, &tail_points)?;
        let contraction = prev_dj
            .filter(|p| *p > 1e-300)
            .map(|p| d_j / p);
        prev_dj = Some(d_j);
        let step_len = action.space.distance(&x, &z)?;
        iterates.push(z);
        steps.push(StepRecord {
            iter,
            r_est: scan.r_est,
            self_orbit_radius: scan.self_orbit_radius,
            orbit_diameter: scan.orbit_diameter,
            step_len,
            residual: scan.residual,
            d_j: Some(d_j),
            contraction,
        });
        if let Some(period) = detect_cycle(&action.space, &iterates, cfg)? {
            outcome = Some(Outcome::CycleDetected { period });
            break;
        }
    }
    let outcome = match outcome {
        Some(o) => o,
        None => classify_outcome(action, &iterates, cfg)?,
    };
    Ok(SolverTrace {
        method: "orbit_center".into(),
        iterates,
        steps,
        outcome,
        meta: vec![
            ("tail_start".into(), cfg.tail_start.to_string()),
            ("horizon".into(), cfg.horizon.to_string()),
        ],
    })
}

const MU_SCHEDULE: [f64; 9] = [0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 1e-4, 5e-5];

fn lifschitz_setup(space: &Space, k: f64) -> CoreResult<(f64, f64, f64)> {
    let kappa = space
        .reference_constants()
        .kappa
        .ok_or_else(|| CoreError::unsupported(space.kind_name(), "regularity descent (no tabulated characteristic)"))?;
    if k >= kappa - 1e-9 {
        return Err(CoreError::OracleRefused(format!(
            "target k = {k} not below the space characteristic {kappa}"
        )));
    }
    let k0 = 0.5 * (k + kappa);
    for mu in MU_SCHEDULE {
        if let Some(alpha) = space.regularity_alpha(k0, mu) {
            if alpha <= 0.9999 {
                return Ok((k0, mu, alpha));
            }
        }
    }
    Err(CoreError::OracleRefused(format!(
        "no inflation parameter certifies a covering ratio below one at k0 = {k0}"
    )))
}

/// Regularity-lens descent toward a common fixed point.
pub fn lifschitz_iteration(
    action: &Action,
    x0: &Point,
    cfg: &SolverConfig,
) -> CoreResult<SolverTrace> {
    cfg.validate()?;
    action.space.check_point(x0)?;
    let k = cfg
        .k_target
        .ok_or_else(|| CoreError::InvalidConfig("regularity descent needs k_target".into()))?;
    let (k0, mu, alpha) = lifschitz_setup(&action.space, k)?;
    let step_bound = alpha + 1.0 + mu;

    let table = action.word_table(cfg.horizon);
    let mut rng = rng_from(cfg.seed);
    let mut iterates = vec![x0.clone()];
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut outcome = None;
    let mut prev_r: Option<f64> = None;
    let mut growth_streak = 0usize;
    for iter in 0..cfg.max_iters {
        let x = iterates.last().unwrap().clone();
        let own = action.orbit_points(&table, &x)?;
        let scan = scan_state(action, &table, &x, &own, &iterates, cfg.y_candidates, &mut rng)?;
        let r = scan.r_est;
        let contraction = prev_r.filter(|p| *p > 1e-300).map(|p| r / p);
        if scan.residual < cfg.epsilon {
            outcome = Some(Outcome::Converged {
                residual: scan.residual,
            });
            steps.push(StepRecord {
                iter,
                r_est: r,
                self_orbit_radius: scan.self_orbit_radius,
                orbit_diameter: scan.orbit_diameter,
                step_len: 0.0,
                residual: scan.residual,
                d_j: None,
                contraction,
            });
            break;
        }
        if let Some(p) = prev_r {
            if r > p + DEFAULT_TOL {
                growth_streak += 1;
            } else {
                growth_streak = 0;
            }
            if growth_streak >= 3 {
                outcome = Some(Outcome::Diverged);
                break;
            }
        }
        prev_r = Some(r);
        if r < 1e-300 {
            // the estimate hit zero but the residual did not: stalled
            outcome = Some(Outcome::BudgetExhausted);
            break;
        }
        // worst single-word displacement; D(x, o(x)) >= r guarantees the
        // separation precondition
        let mut s_best = None;
        let mut disp: f64 = -1.0;
        for (i, p) in own.iter().enumerate() {
            if table.grades[i] == 0 {
                continue;
            }
            let d = action.space.distance(&x, p)?;
            if d > disp {
                disp = d;
                s_best = Some(i);
            }
        }
        let Some(s_idx) = s_best else {
            outcome = Some(Outcome::BudgetExhausted);
            break;
        };
        if disp < (1.0 - mu) * r {
            // displacement below the lens separation: treat as near-fixed
            outcome = Some(Outcome::BudgetExhausted);
            break;
        }
        let rp = action
            .space
            .regularity_point(&x, &own[s_idx], r, k0, mu)?;
        let step_len = action.space.distance(&x, &rp.z)?;
        iterates.push(rp.z);
        steps.push(StepRecord {
            iter,
            r_est: r,
            self_orbit_radius: scan.self_orbit_radius,
            orbit_diameter: scan.orbit_diameter,
            step_len,
            residual: scan.residual,
            d_j: None,
            contraction,
        });
    }
    let outcome = match outcome {
        Some(o) => o,
        None => classify_outcome(action, &iterates, cfg)?,
    };
    Ok(SolverTrace {
        method: "lifschitz".into(),
        iterates,
        steps,
        outcome,
        meta: vec![
            ("k_target".into(), format!("{k}")),
            ("k0".into(), format!("{k0}")),
            ("mu".into(), format!("{mu}")),
            ("alpha".into(), format!("{alpha}")),
            ("step_bound_factor".into(), format!("{step_bound}")),
            (
                "strategy".into(),
                "worst-displacement lens routing (no case split)".into(),
            ),
        ],
    })
}
