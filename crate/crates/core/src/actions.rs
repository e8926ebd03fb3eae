//! Finitely generated semigroup actions: named generator maps, word
//! enumeration and composition, truncated orbits, the divisibility
//! preorder, and a catalog of builtin maps.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::point::Point;
use crate::rng::rng_from;
use crate::spaces::Space;

/// Builtin generator maps, selectable by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapKind {
    Identity,
    /// x -> c x about the origin.
    Scale { c: f64 },
    /// x -> center + c (x - center), toward the domain center.
    Contraction { c: f64 },
    /// Sign-flipping contraction on a symmetric interval: a x on
    /// representation-generic points, -a x on rational-flagged ones.
    Sa { a: f64 },
    /// x -> x^2 on [0,1), 1 -> 0.
    Square,
    /// x -> 1 on [0,1), 1 -> 0.
    Step,
    /// Basis shift on a p-norm ball: e_i -> e_{i+1} (cyclic), everything
    /// else -> e_1.
    ShiftLp,
    /// Head insertion on eventually constant sequences:
    /// x -> (1 + tail(x), x_1, x_2, ...).
    Prus,
    /// Plane rotation about the domain center.
    Rotation { theta: f64 },
    /// Plane reflection about an axis through the domain center.
    Reflection { angle: f64 },
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Identity => "identity",
            MapKind::Scale { .. } => "scale",
            MapKind::Contraction { .. } => "contraction",
            MapKind::Sa { .. } => "sa",
            MapKind::Square => "square",
            MapKind::Step => "step",
            MapKind::ShiftLp => "shift_lp",
            MapKind::Prus => "prus",
            MapKind::Rotation { .. } => "rotation",
            MapKind::Reflection { .. } => "reflection",
        }
    }
}

pub fn builtin_map_names() -> &'static [&'static str] {
    &[
        "identity",
        "scale",
        "contraction",
        "sa",
        "square",
        "step",
        "shift_lp",
        "prus",
        "rotation",
        "reflection",
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorMap {
    pub name: String,
    pub kind: MapKind,
}

impl GeneratorMap {
    pub fn new(kind: MapKind) -> Self {
        GeneratorMap {
            name: kind.name().to_string(),
            kind,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionLaw {
    /// One generator; words are its powers.
    Single,
    /// Several generators verified to commute on samples; words are
    /// exponent vectors.
    Commuting,
    /// No relations assumed; words are literal generator strings.
    Free,
}

/// Canonical word forms per composition law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Word {
    Power(u32),
    Multi(Vec<u32>),
    /// Outermost generator first: `[g, h]` means `g(h(x))`.
    Free(Vec<u8>),
}

impl Word {
    pub fn grade(&self) -> usize {
        match self {
            Word::Power(n) => *n as usize,
            Word::Multi(v) => v.iter().map(|e| *e as usize).sum(),
            Word::Free(v) => v.len(),
        }
    }

    pub fn describe(&self, gens: &[GeneratorMap]) -> String {
        match self {
            Word::Power(n) => format!("{}^{n}", gens[0].name),
            Word::Multi(v) => v
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| format!("{}^{e}", gens[i].name))
                .collect::<Vec<_>>()
                .join("·"),
            Word::Free(v) => {
                if v.is_empty() {
                    "1".into()
                } else {
                    v.iter()
                        .map(|g| gens[*g as usize].name.clone())
                        .collect::<Vec<_>>()
                        .join("∘")
                }
            }
        }
    }
}

/// All words up to a horizon in graded order, with composition and
/// right-multiplication reachability precomputed.
pub struct WordTable {
    pub words: Vec<Word>,
    pub grades: Vec<usize>,
    index: HashMap<Word, usize>,
    /// reach[w] = indices of { t∘w : t in the table } that stay within it
    reach: Vec<Vec<usize>>,
    /// pred[w] = (generator, shorter word) with w = generator ∘ pred
    pred: Vec<Option<(usize, usize)>>,
}

impl WordTable {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Index of `a ∘ b` when it is still inside the table.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let w = match (&self.words[a], &self.words[b]) {
            (Word::Power(n), Word::Power(m)) => Word::Power(n + m),
            (Word::Multi(u), Word::Multi(v)) => {
                Word::Multi(u.iter().zip(v).map(|(x, y)| x + y).collect())
            }
            (Word::Free(u), Word::Free(v)) => {
                let mut w = u.clone();
                w.extend_from_slice(v);
                Word::Free(w)
            }
            _ => return None,
        };
        self.index_of(&w)
    }

    pub fn reach(&self, w: usize) -> &[usize] {
        &self.reach[w]
    }
}

#[derive(Clone, Debug)]
pub struct Action {
    pub space: Space,
    pub generators: Vec<GeneratorMap>,
    pub law: CompositionLaw,
}

impl Action {
    pub fn new(space: Space, generators: Vec<GeneratorMap>, law: CompositionLaw) -> CoreResult<Self> {
        if generators.is_empty() {
            return Err(CoreError::InvalidConfig("action needs generators".into()));
        }
        if law == CompositionLaw::Single && generators.len() != 1 {
            return Err(CoreError::InvalidConfig(
                "single law requires exactly one generator".into(),
            ));
        }
        let action = Action {
            space,
            generators,
            law,
        };
        action.validate_maps()?;
        if law == CompositionLaw::Commuting {
            action.verify_commuting()?;
        }
        Ok(action)
    }

    pub fn single(space: Space, kind: MapKind) -> CoreResult<Self> {
        Action::new(space, vec![GeneratorMap::new(kind)], CompositionLaw::Single)
    }

    fn validate_maps(&self) -> CoreResult<()> {
        let mut rng = rng_from(0xac7);
        let mut pts = self.space.probes();
        for _ in 0..16 {
            pts.push(self.space.sample(&mut rng));
        }
        for g in &self.generators {
            compatible(&g.kind, &self.space)?;
            for p in &pts {
                let q = apply_map(&g.kind, &self.space, p)?;
                // sequence iterates may legitimately leave the sampling box
                if !matches!(self.space, Space::Seq(_)) {
                    self.space.check_point(&q).map_err(|e| {
                        CoreError::InvalidConfig(format!(
                            "generator {} leaves the domain: {e}",
                            g.name
                        ))
                    })?;
                }
            }
        }
        Ok(())
    }

    fn verify_commuting(&self) -> CoreResult<()> {
        let mut rng = rng_from(0xc0);
        let pts: Vec<Point> = (0..24).map(|_| self.space.sample(&mut rng)).collect();
        for i in 0..self.generators.len() {
            for j in (i + 1)..self.generators.len() {
                for p in &pts {
                    let a = self.apply_gen(i, &self.apply_gen(j, p)?)?;
                    let b = self.apply_gen(j, &self.apply_gen(i, p)?)?;
                    if self.space.distance(&a, &b)? > 1e-9 {
                        return Err(CoreError::InvalidConfig(format!(
                            "generators {} and {} do not commute",
                            self.generators[i].name, self.generators[j].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_gen(&self, g: usize, x: &Point) -> CoreResult<Point> {
        apply_map(&self.generators[g].kind, &self.space, x)
    }

    /// Apply a word to a point.
    pub fn evaluate(&self, w: &Word, x: &Point) -> CoreResult<Point> {
        match (self.law, w) {
            (CompositionLaw::Single, Word::Power(n)) => {
                let mut p = x.clone();
                for _ in 0..*n {
                    p = self.apply_gen(0, &p)?;
                }
                Ok(p)
            }
            (CompositionLaw::Commuting, Word::Multi(v)) => {
                if v.len() != self.generators.len() {
                    return Err(CoreError::MalformedWord(format!(
                        "expected {} exponents",
                        self.generators.len()
                    )));
                }
                let mut p = x.clone();
                for (g, e) in v.iter().enumerate() {
                    for _ in 0..*e {
                        p = self.apply_gen(g, &p)?;
                    }
                }
                Ok(p)
            }
            (CompositionLaw::Free, Word::Free(v)) => {
                if v.iter().any(|g| *g as usize >= self.generators.len()) {
                    return Err(CoreError::MalformedWord("generator index out of range".into()));
                }
                let mut p = x.clone();
                for g in v.iter().rev() {
                    p = self.apply_gen(*g as usize, &p)?;
                }
                Ok(p)
            }
            _ => Err(CoreError::MalformedWord(format!(
                "word {w:?} does not match composition law {:?}",
                self.law
            ))),
        }
    }

    /// Enumerate words up to `horizon` (power, total degree, or length,
    /// depending on the law), graded order, identity first.
    pub fn word_table(&self, horizon: usize) -> WordTable {
        let words: Vec<Word> = match self.law {
            CompositionLaw::Single => (0..=horizon as u32).map(Word::Power).collect(),
            CompositionLaw::Commuting => {
                let m = self.generators.len();
                let mut out = Vec::new();
                for total in 0..=horizon {
                    enumerate_exponents(m, total, &mut Vec::new(), &mut out);
                }
                out
            }
            CompositionLaw::Free => {
                let m = self.generators.len() as u8;
                let mut out = vec![Word::Free(vec![])];
                let mut frontier = vec![Vec::<u8>::new()];
                for _ in 0..horizon {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for g in 0..m {
                            let mut v = w.clone();
                            v.push(g);
                            out.push(Word::Free(v.clone()));
                            next.push(v);
                        }
                    }
                    frontier = next;
                }
                out
            }
        };
        let grades: Vec<usize> = words.iter().map(|w| w.grade()).collect();
        let index: HashMap<Word, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut pred = vec![None; words.len()];
        for (i, w) in words.iter().enumerate() {
            pred[i] = match w {
                Word::Power(0) => None,
                Word::Power(n) => Some((0usize, index[&Word::Power(n - 1)])),
                Word::Multi(v) => v.iter().position(|e| *e > 0).map(|g| {
                    let mut shorter = v.clone();
                    shorter[g] -= 1;
                    (g, index[&Word::Multi(shorter)])
                }),
                Word::Free(v) => {
                    if v.is_empty() {
                        None
                    } else {
                        Some((v[0] as usize, index[&Word::Free(v[1..].to_vec())]))
                    }
                }
            };
        }
        let mut table = WordTable {
            words,
            grades,
            index,
            reach: Vec::new(),
            pred,
        };
        let mut reach = Vec::with_capacity(table.len());
        for w in 0..table.len() {
            let mut r: Vec<usize> = (0..table.len())
                .filter_map(|t| table.compose(t, w))
                .collect();
            r.sort_unstable();
            r.dedup();
            reach.push(r);
        }
        table.reach = reach;
        table
    }

    /// Orbit points aligned with the word table; index 0 is the base point
    /// (identity adjoined).
    pub fn orbit_points(&self, table: &WordTable, x: &Point) -> CoreResult<Vec<Point>> {
        let mut pts: Vec<Point> = Vec::with_capacity(table.len());
        for i in 0..table.len() {
            let p = match table.pred[i] {
                None => x.clone(),
                Some((g, shorter)) => self.apply_gen(g, &pts[shorter])?,
            };
            pts.push(p);
        }
        Ok(pts)
    }

    /// Largest displacement of `x` by a single generator.
    pub fn residual(&self, x: &Point) -> CoreResult<f64> {
        let mut r: f64 = 0.0;
        for g in 0..self.generators.len() {
            r = r.max(self.space.distance(x, &self.apply_gen(g, x)?)?);
        }
        Ok(r)
    }
}

fn enumerate_exponents(m: usize, total: usize, prefix: &mut Vec<u32>, out: &mut Vec<Word>) {
    if prefix.len() == m - 1 {
        let mut v = prefix.clone();
        v.push(total as u32);
        out.push(Word::Multi(v));
        return;
    }
    for e in (0..=total).rev() {
        prefix.push(e as u32);
        enumerate_exponents(m, total - e, prefix, out);
        prefix.pop();
    }
}

fn compatible(kind: &MapKind, space: &Space) -> CoreResult<()> {
    let ok = match kind {
        MapKind::Identity => true,
        MapKind::Scale { c } => {
            (0.0..=1.0).contains(c)
                && matches!(space, Space::Interval(_) | Space::Euclidean(_) | Space::Lp(_))
        }
        MapKind::Contraction { c } => (0.0..=1.0).contains(c) && !matches!(space, Space::Seq(_)),
        MapKind::Sa { a } => {
            matches!(space, Space::Interval(s) if s.lo < 0.0 && s.hi > 0.0 && s.lo == -s.hi)
                && (0.0..1.0).contains(a)
        }
        MapKind::Square | MapKind::Step => {
            matches!(space, Space::Interval(s) if s.lo <= 0.0 && s.hi >= 1.0)
        }
        MapKind::ShiftLp => matches!(space, Space::Lp(_)),
        MapKind::Prus => matches!(space, Space::Seq(_)),
        MapKind::Rotation { .. } | MapKind::Reflection { .. } => {
            matches!(space, Space::Euclidean(s) if s.dim == 2)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(CoreError::InvalidConfig(format!(
            "map {} is not defined on space {}",
            kind.name(),
            space.kind_name()
        )))
    }
}

fn domain_center(space: &Space) -> Vec<f64> {
    match space {
        Space::Interval(s) => vec![0.5 * (s.lo + s.hi)],
        Space::MaxNorm(s) => s.bounds.iter().map(|(a, b)| 0.5 * (a + b)).collect(),
        Space::Euclidean(s) => s.center.clone(),
        Space::Lp(s) => vec![0.0; s.dim],
        _ => Vec::new(),
    }
}

pub fn apply_map(kind: &MapKind, space: &Space, x: &Point) -> CoreResult<Point> {
    match kind {
        MapKind::Identity => Ok(x.clone()),
        MapKind::Scale { c } => match x {
            Point::Coords { xs, rational } => Ok(Point::Coords {
                xs: xs.iter().map(|v| c * v).collect(),
                rational: *rational,
            }),
            _ => Err(CoreError::mismatch("scale", "coords expected".to_string())),
        },
        MapKind::Contraction { c } => match x {
            Point::Coords { xs, rational } => {
                let ctr = domain_center(space);
                Ok(Point::Coords {
                    xs: xs
                        .iter()
                        .zip(&ctr)
                        .map(|(v, m)| m + c * (v - m))
                        .collect(),
                    rational: *rational,
                })
            }
            Point::Tree { .. } => Err(CoreError::unsupported("tree", "contraction")),
            Point::Seq { .. } => Err(CoreError::unsupported("seq", "contraction")),
        },
        MapKind::Sa { a } => {
            let v = x
                .as_scalar()
                .ok_or_else(|| CoreError::mismatch("sa", "scalar expected".to_string()))?;
            let image = if x.is_rational() { -a * v } else { a * v };
            Ok(Point::Coords {
                xs: vec![image],
                rational: x.is_rational(),
            })
        }
        MapKind::Square => {
            let v = x
                .as_scalar()
                .ok_or_else(|| CoreError::mismatch("square", "scalar expected".to_string()))?;
            let image = if v == 1.0 { 0.0 } else { v * v };
            Ok(Point::Coords {
                xs: vec![image],
                rational: x.is_rational(),
            })
        }
        MapKind::Step => {
            let v = x
                .as_scalar()
                .ok_or_else(|| CoreError::mismatch("step", "scalar expected".to_string()))?;
            Ok(Point::rational_scalar(if v == 1.0 { 0.0 } else { 1.0 }))
        }
        MapKind::ShiftLp => {
            let Space::Lp(lp) = space else {
                return Err(CoreError::mismatch("shift_lp", "lp space expected".to_string()));
            };
            let xs = x
                .as_coords()
                .ok_or_else(|| CoreError::mismatch("shift_lp", "coords expected".to_string()))?;
            // exact basis-vector detection; everything else maps to e_1
            let mut basis_idx = None;
            for (i, v) in xs.iter().enumerate() {
                if *v == lp.radius {
                    if basis_idx.is_some() || xs.iter().enumerate().any(|(j, w)| j != i && *w != 0.0)
                    {
                        basis_idx = None;
                        break;
                    }
                    basis_idx = Some(i);
                }
            }
            let next = match basis_idx {
                Some(i) => (i + 1) % lp.dim,
                None => 0,
            };
            Ok(lp.basis_vector(next))
        }
        MapKind::Prus => match x {
            Point::Seq { prefix, tail } => {
                let mut v = Vec::with_capacity(prefix.len() + 1);
                v.push(1.0 + tail);
                v.extend_from_slice(prefix);
                Ok(Point::seq(v, *tail))
            }
            _ => Err(CoreError::mismatch("prus", "sequence expected".to_string())),
        },
        MapKind::Rotation { theta } => plane_map(space, x, |dx, dy| {
            let (s, c) = theta.sin_cos();
            (c * dx - s * dy, s * dx + c * dy)
        }),
        MapKind::Reflection { angle } => plane_map(space, x, |dx, dy| {
            let (s2, c2) = (2.0 * angle).sin_cos();
            (c2 * dx + s2 * dy, s2 * dx - c2 * dy)
        }),
    }
}

fn plane_map(
    space: &Space,
    x: &Point,
    f: impl Fn(f64, f64) -> (f64, f64),
) -> CoreResult<Point> {
    let xs = x
        .as_coords()
        .ok_or_else(|| CoreError::mismatch("plane map", "coords expected".to_string()))?;
    if xs.len() != 2 {
        return Err(CoreError::mismatch("plane map", "dimension 2 expected".to_string()));
    }
    let ctr = domain_center(space);
    let (nx, ny) = f(xs[0] - ctr[0], xs[1] - ctr[1]);
    Ok(Point::coords(vec![ctr[0] + nx, ctr[1] + ny]))
}

/// Truncated orbit of a point: word-indexed entries, identity adjoined.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub base: Point,
    pub entries: Vec<(Word, Point)>,
    pub includes_base: bool,
}

pub fn orbit(action: &Action, x: &Point, horizon: usize) -> CoreResult<OrbitTable> {
    tail_orbit(action, x, 0, horizon)
}

/// Orbit entries with word grade at least `from`.
pub fn tail_orbit(action: &Action, x: &Point, from: usize, horizon: usize) -> CoreResult<OrbitTable> {
    if from > horizon {
        return Err(CoreError::Domain(format!(
            "tail start {from} exceeds horizon {horizon}"
        )));
    }
    let table = action.word_table(horizon);
    let pts = action.orbit_points(&table, x)?;
    let entries: Vec<(Word, Point)> = table
        .words
        .iter()
        .zip(&pts)
        .filter(|(w, _)| w.grade() >= from)
        .map(|(w, p)| (w.clone(), p.clone()))
        .collect();
    Ok(OrbitTable {
        base: x.clone(),
        entries,
        includes_base: from == 0,
    })
}

impl OrbitTable {
    pub fn points(&self) -> Vec<Point> {
        self.entries.iter().map(|(_, p)| p.clone()).collect()
    }
}

/// Divisibility preorder on words: `a <= b` when `b = t ∘ a` for some `t`.
#[derive(Clone, Copy, Debug)]
pub enum PreorderPolicy {
    NumericPowers,
    ComponentwiseExponents,
}

impl PreorderPolicy {
    pub fn for_law(law: CompositionLaw) -> Option<Self> {
        match law {
            CompositionLaw::Single => Some(PreorderPolicy::NumericPowers),
            CompositionLaw::Commuting => Some(PreorderPolicy::ComponentwiseExponents),
            CompositionLaw::Free => None,
        }
    }

    pub fn le(&self, a: &Word, b: &Word) -> bool {
        match (self, a, b) {
            (PreorderPolicy::NumericPowers, Word::Power(n), Word::Power(m)) => n <= m,
            (PreorderPolicy::ComponentwiseExponents, Word::Multi(u), Word::Multi(v)) => {
                u.iter().zip(v).all(|(x, y)| x <= y)
            }
            _ => false,
        }
    }

    /// Total preorder over the enumerated words; required by the
    /// orbit-center solver.
    pub fn is_total(&self, table: &WordTable) -> bool {
        for i in 0..table.len() {
            for j in (i + 1)..table.len() {
                let (a, b) = (&table.words[i], &table.words[j]);
                if !self.le(a, b) && !self.le(b, a) {
                    return false;
                }
            }
        }
        true
    }
}

/// The catalog of ready-made actions exercised by the reproduction suite.
pub fn builtin_actions() -> Vec<(String, Action)> {
    use crate::spaces::{Euclidean, Interval, Lp, SeqSpace};
    let interval01 = || Space::Interval(Interval::new(0.0, 1.0).unwrap());
    let sym = || Space::Interval(Interval::new(-1.0, 1.0).unwrap());
    let plane = || Space::Euclidean(Euclidean::unit(2));
    let mut out: Vec<(String, Action)> = Vec::new();
    let mut single = |name: &str, space: Space, kind: MapKind| {
        out.push((
            name.to_string(),
            Action::single(space, kind).expect("builtin action"),
        ));
    };
    single("identity", interval01(), MapKind::Identity);
    single("scale-half", interval01(), MapKind::Scale { c: 0.5 });
    single("contraction-half", plane(), MapKind::Contraction { c: 0.5 });
    single("sa-half", sym(), MapKind::Sa { a: 0.5 });
    single("square", interval01(), MapKind::Square);
    single("step", interval01(), MapKind::Step);
    single(
        "shift-l2",
        Space::Lp(Lp::new(8, 2.0, 1.0).unwrap()),
        MapKind::ShiftLp,
    );
    single(
        "prus",
        Space::Seq(SeqSpace::new(-8.0, 8.0, 6).unwrap()),
        MapKind::Prus,
    );
    single("rotation", plane(), MapKind::Rotation { theta: 1.0 });
    single("reflection", plane(), MapKind::Reflection { angle: 0.7 });
    out.push((
        "commuting-rotations".to_string(),
        Action::new(
            plane(),
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 0.7 }),
                GeneratorMap::new(MapKind::Rotation { theta: 1.1 }),
            ],
            CompositionLaw::Commuting,
        )
        .expect("commuting rotations"),
    ));
    out.push((
        "rotation-reflection".to_string(),
        Action::new(
            plane(),
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 1.0 }),
                GeneratorMap::new(MapKind::Reflection { angle: 0.0 }),
            ],
            CompositionLaw::Free,
        )
        .expect("free pair"),
    ));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub pass: bool,
    pub words_checked: usize,
    pub witness: Option<InclusionWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionWitness {
    pub left: String,
    pub through: String,
    pub point: Point,
    pub best_mismatch: f64,
}

/// Functional check of the left-divisibility inclusion: for sampled words
/// `p, s`, look for `q` in the table with `p ∘ s = s ∘ q` on sampled points.
pub fn check_inclusion_left_in_right(
    action: &Action,
    horizon: usize,
    n_points: usize,
    seed: u64,
) -> CoreResult<InclusionReport> {
    let table = action.word_table(horizon);
    let mut rng: ChaCha8Rng = rng_from(seed);
    let pts: Vec<Point> = (0..n_points.max(4))
        .map(|_| action.space.sample(&mut rng))
        .collect();
    let mut checked = 0;
    for p_idx in 0..table.len() {
        if table.grades[p_idx] == 0 {
            continue;
        }
        for s_idx in 0..table.len() {
            if table.grades[s_idx] == 0 {
                continue;
            }
            // evaluate p∘s on the samples
            let lhs: Vec<Point> = pts
                .iter()
                .map(|x| {
                    let sx = action.evaluate(&table.words[s_idx], x)?;
                    action.evaluate(&table.words[p_idx], &sx)
                })
                .collect::<CoreResult<_>>()?;
            let mut best = f64::INFINITY;
            let mut found = false;
            for q_idx in 0..table.len() {
                if table.grades[q_idx] == 0 {
                    continue;
                }
                let mut worst: f64 = 0.0;
                for (x, l) in pts.iter().zip(&lhs) {
                    let qx = action.evaluate(&table.words[q_idx], x)?;
                    let sqx = action.evaluate(&table.words[s_idx], &qx)?;
                    worst = worst.max(action.space.distance(l, &sqx)?);
                    if worst > 1e-9 {
                        break;
                    }
                }
                best = best.min(worst);
                if worst <= 1e-9 {
                    found = true;
                    break;
                }
            }
            checked += 1;
            if !found {
                return Ok(InclusionReport {
                    pass: false,
                    words_checked: checked,
                    witness: Some(InclusionWitness {
                        left: format!(
                            "{}∘{}",
                            table.words[p_idx].describe(&action.generators),
                            table.words[s_idx].describe(&action.generators)
                        ),
                        through: table.words[s_idx].describe(&action.generators),
                        point: pts[0].clone(),
                        best_mismatch: best,
                    }),
                });
            }
        }
    }
    Ok(InclusionReport {
        pass: true,
        words_checked: checked,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Euclidean, Interval, Lp, SeqSpace};

    fn sa_action(a: f64) -> Action {
        Action::single(
            Space::Interval(Interval::new(-1.0, 1.0).unwrap()),
            MapKind::Sa { a },
        )
        .unwrap()
    }

    fn unit_interval_action(kind: MapKind) -> Action {
        Action::single(Space::Interval(Interval::new(0.0, 1.0).unwrap()), kind).unwrap()
    }

    #[test]
    fn evaluate_identity_and_powers() {
        let sq = unit_interval_action(MapKind::Square);
        let x = Point::scalar(0.5);
        assert_eq!(
            sq.evaluate(&Word::Power(0), &x).unwrap().as_scalar(),
            Some(0.5)
        );
        let y = sq.evaluate(&Word::Power(3), &x).unwrap();
        assert_eq!(y.as_scalar(), Some(0.00390625)); // 0.5^(2^3)
    }

    #[test]
    fn evaluate_sign_flipping_contraction_on_rationals() {
        let act = sa_action(0.5);
        let x = Point::rational_scalar(1.0 / 3.0);
        let y = act.evaluate(&Word::Power(2), &x).unwrap();
        assert!((y.as_scalar().unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!(y.is_rational());
        // fixed point at zero, and the two representation classes split
        let z = act.evaluate(&Word::Power(1), &Point::rational_scalar(0.0)).unwrap();
        assert_eq!(z.as_scalar(), Some(0.0));
        let xr = act.apply_gen(0, &Point::rational_scalar(0.4)).unwrap();
        let xg = act.apply_gen(0, &Point::scalar(0.4)).unwrap();
        assert!((xr.as_scalar().unwrap() + 0.2).abs() < 1e-15);
        assert!((xg.as_scalar().unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn step_orbit_is_the_two_cycle() {
        let act = unit_interval_action(MapKind::Step);
        let t = orbit(&act, &Point::scalar(1.0), 4).unwrap();
        let values: Vec<f64> = t.entries.iter().map(|(_, p)| p.as_scalar().unwrap()).collect();
        assert_eq!(values, vec![1.0, 0.0, 1.0, 0.0, 1.0]);
        // the orbit as a set is {1, 0}
        let step03 = orbit(&act, &Point::scalar(0.3), 4).unwrap();
        let v: Vec<f64> = step03.entries.iter().map(|(_, p)| p.as_scalar().unwrap()).collect();
        assert_eq!(v, vec![0.3, 1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn square_orbit_by_repeated_squaring() {
        let act = unit_interval_action(MapKind::Square);
        let t = orbit(&act, &Point::scalar(0.5), 3).unwrap();
        let v: Vec<f64> = t.entries.iter().map(|(_, p)| p.as_scalar().unwrap()).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.0625, 0.00390625]);
        // a fixed point has a singleton orbit set
        let fixed = orbit(&act, &Point::scalar(0.0), 5).unwrap();
        assert!(fixed
            .entries
            .iter()
            .all(|(_, p)| p.as_scalar() == Some(0.0)));
    }

    #[test]
    fn tail_orbit_is_contained_in_orbit() {
        let act = unit_interval_action(MapKind::Square);
        let x = Point::scalar(0.8);
        let full = orbit(&act, &x, 12).unwrap();
        for from in [1usize, 3, 7] {
            let tail = tail_orbit(&act, &x, from, 12).unwrap();
            assert!(!tail.includes_base);
            for (w, p) in &tail.entries {
                assert!(w.grade() >= from);
                assert!(full
                    .entries
                    .iter()
                    .any(|(w2, p2)| w2 == w && p2.as_scalar() == p.as_scalar()));
            }
        }
        assert!(tail_orbit(&act, &x, 13, 12).is_err());
    }

    #[test]
    fn shift_cycles_basis_vectors() {
        let lp = Lp::new(3, 2.0, 1.0).unwrap();
        let e3 = lp.basis_vector(2);
        let act = Action::single(Space::Lp(lp), MapKind::ShiftLp).unwrap();
        let y = act.apply_gen(0, &e3).unwrap();
        assert_eq!(y.as_coords().unwrap(), &[1.0, 0.0, 0.0]);
        // non-basis points collapse to the first basis vector
        let z = act.apply_gen(0, &Point::coords(vec![0.1, 0.2, 0.0])).unwrap();
        assert_eq!(z.as_coords().unwrap(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn head_insertion_map_examples() {
        let act = Action::single(
            Space::Seq(SeqSpace::new(-2.0, 2.0, 6).unwrap()),
            MapKind::Prus,
        )
        .unwrap();
        let zero = Point::seq(vec![], 0.0);
        let y = act.apply_gen(0, &zero).unwrap();
        assert_eq!(y, Point::seq(vec![1.0], 0.0));
    }

    #[test]
    fn head_insertion_is_an_isometry_without_fixed_points() {
        let space = Space::Seq(SeqSpace::new(-2.0, 2.0, 6).unwrap());
        let act = Action::single(space.clone(), MapKind::Prus).unwrap();
        let mut rng = rng_from(41);
        for _ in 0..10_000 {
            let a = space.sample(&mut rng);
            let b = space.sample(&mut rng);
            let d0 = space.distance(&a, &b).unwrap();
            let d1 = space
                .distance(&act.apply_gen(0, &a).unwrap(), &act.apply_gen(0, &b).unwrap())
                .unwrap();
            assert!((d0 - d1).abs() <= 1e-12);
        }
        // no fixed point along a million iterate points
        let starts = 4000;
        let steps = 250;
        for s in 0..starts {
            let mut p = match space {
                Space::Seq(ref sq) => sq.sample(&mut rng_from(s as u64)),
                _ => unreachable!(),
            };
            for _ in 0..steps {
                let q = act.apply_gen(0, &p).unwrap();
                debug_assert!(space.distance(&p, &q).unwrap() > 1e-9);
                p = q;
            }
            // spot-check the residual at the end of each run
            assert!(act.residual(&p).unwrap() > 1e-9);
        }
        // orbit of the zero sequence stays within distance one
        let zero = Point::seq(vec![], 0.0);
        let t = orbit(&act, &zero, 256).unwrap();
        for (_, p) in &t.entries {
            assert!(space.distance(&zero, p).unwrap() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn commuting_law_is_verified() {
        let space = Space::Euclidean(Euclidean::unit(2));
        let rot = |theta| GeneratorMap::new(MapKind::Rotation { theta });
        assert!(Action::new(
            space.clone(),
            vec![rot(0.7), rot(1.1)],
            CompositionLaw::Commuting
        )
        .is_ok());
        let refl = GeneratorMap::new(MapKind::Reflection { angle: 0.0 });
        assert!(Action::new(
            space,
            vec![rot(1.0), refl],
            CompositionLaw::Commuting
        )
        .is_err());
    }

    #[test]
    fn left_divisibility_inclusion_functional_check() {
        // powers of one map always commute
        let single = unit_interval_action(MapKind::Square);
        let rep = check_inclusion_left_in_right(&single, 5, 8, 1).unwrap();
        assert!(rep.pass);

        // two commuting rotations
        let space = Space::Euclidean(Euclidean::unit(2));
        let commuting = Action::new(
            space.clone(),
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 0.7 }),
                GeneratorMap::new(MapKind::Rotation { theta: 1.1 }),
            ],
            CompositionLaw::Commuting,
        )
        .unwrap();
        let rep = check_inclusion_left_in_right(&commuting, 3, 8, 2).unwrap();
        assert!(rep.pass);

        // rotation and reflection generate relations the table cannot close
        let free = Action::new(
            space,
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 1.0 }),
                GeneratorMap::new(MapKind::Reflection { angle: 0.0 }),
            ],
            CompositionLaw::Free,
        )
        .unwrap();
        let rep = check_inclusion_left_in_right(&free, 3, 8, 3).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn preorder_totality() {
        let single = unit_interval_action(MapKind::Square);
        let table = single.word_table(6);
        let policy = PreorderPolicy::for_law(CompositionLaw::Single).unwrap();
        assert!(policy.is_total(&table));

        let space = Space::Euclidean(Euclidean::unit(2));
        let commuting = Action::new(
            space,
            vec![
                GeneratorMap::new(MapKind::Rotation { theta: 0.7 }),
                GeneratorMap::new(MapKind::Rotation { theta: 1.1 }),
            ],
            CompositionLaw::Commuting,
        )
        .unwrap();
        let table2 = commuting.word_table(3);
        let policy2 = PreorderPolicy::for_law(CompositionLaw::Commuting).unwrap();
        // componentwise exponent order on two generators is not total
        assert!(!policy2.is_total(&table2));
        // reflexive and transitive on sampled triples
        for i in 0..table2.len() {
            assert!(policy2.le(&table2.words[i], &table2.words[i]));
            for j in 0..table2.len() {
                for k in 0..table2.len() {
                    if policy2.le(&table2.words[i], &table2.words[j])
                        && policy2.le(&table2.words[j], &table2.words[k])
                    {
                        assert!(policy2.le(&table2.words[i], &table2.words[k]));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_words_compose_within_the_table() {
        let act = unit_interval_action(MapKind::Square);
        let table = act.word_table(8);
        let i3 = table.index_of(&Word::Power(3)).unwrap();
        let i4 = table.index_of(&Word::Power(4)).unwrap();
        assert_eq!(table.compose(i3, i4), table.index_of(&Word::Power(7)));
        assert_eq!(table.compose(i4, i4), table.index_of(&Word::Power(8)));
        assert!(table.compose(i4, table.index_of(&Word::Power(5)).unwrap()).is_none());
        assert_eq!(table.reach(i4).len(), 5); // grades 4..=8
    }
}
