use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;
use crate::rng::rng_from;
use crate::spaces::RegularityPoint;

/// A closed Euclidean ball domain in R^n.
#[derive(Clone, Debug)]
pub struct Euclidean {
    pub dim: usize,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Euclidean {
    pub fn new(dim: usize, center: Vec<f64>, radius: f64) -> CoreResult<Self> {
        if dim == 0 || center.len() != dim || !(radius > 0.0) {
            return Err(CoreError::InvalidConfig(
                "euclidean space needs dim >= 1, matching center, radius > 0".into(),
            ));
        }
        Ok(Euclidean { dim, center, radius })
    }

    pub fn unit(dim: usize) -> Self {
        Euclidean {
            dim,
            center: vec![0.0; dim],
            radius: 1.0,
        }
    }

    fn coords_of<'a>(&self, p: &'a Point) -> CoreResult<&'a [f64]> {
        match p.as_coords() {
            Some(xs) if xs.len() == self.dim => Ok(xs),
            _ => Err(CoreError::mismatch(
                "euclidean",
                format!("expected {} coordinates", self.dim),
            )),
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        let xs = self.coords_of(p)?;
        let d = l2(xs, &self.center);
        if d > self.radius + 1e-9 {
            return Err(CoreError::mismatch(
                "euclidean",
                format!("point at distance {d} from domain center, radius {}", self.radius),
            ));
        }
        Ok(())
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        Ok(l2(self.coords_of(a)?, self.coords_of(b)?))
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::coords(sample_ball(&self.center, self.radius, rng))
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        let xs = c.as_coords()?;
        for _ in 0..64 {
            let cand = sample_ball(xs, r, rng);
            if l2(&cand, &self.center) <= self.radius {
                return Some(Point::coords(cand));
            }
        }
        None
    }

    pub fn probes(&self) -> Vec<Point> {
        let mut out = vec![Point::coords(self.center.clone())];
        for i in 0..self.dim {
            let mut p = self.center.clone();
            p[i] += self.radius;
            out.push(Point::coords(p.clone()));
            p[i] -= 2.0 * self.radius;
            out.push(Point::coords(p));
        }
        let diag = self.radius / (self.dim as f64).sqrt();
        out.push(Point::coords(
            self.center.iter().map(|c| c + diag).collect(),
        ));
        out
    }

    /// Over-approximation of the admissible cover by a finite witness family
    /// of balls: the minimum enclosing ball plus balls centered on fixed
    /// directions around the configuration.
    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        let raw: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| self.coords_of(p).map(|c| c.to_vec()))
            .collect::<CoreResult<_>>()?;
        let (meb_c, meb_r) = min_enclosing_ball(&raw);
        let mut balls = vec![(Point::coords(meb_c.clone()), meb_r)];
        let mut rng = rng_from(0x5eed_c0_7e_5);
        let n_witness = 16;
        for _ in 0..n_witness {
            let dir = random_unit(self.dim, &mut rng);
            let w: Vec<f64> = meb_c
                .iter()
                .zip(&dir)
                .map(|(c, d)| c + 2.0 * meb_r.max(1e-6) * d)
                .collect();
            let rad = raw
                .iter()
                .map(|p| l2(p, &w))
                .fold(0.0, f64::max);
            balls.push((Point::coords(w), rad));
        }
        // generating points themselves witness tightly near the set
        for p in &raw {
            let rad = raw.iter().map(|q| l2(p, q)).fold(0.0, f64::max);
            balls.push((Point::coords(p.clone()), rad));
        }
        Ok(CoverDescriptor::BallFamily { balls })
    }

    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        let raw: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| self.coords_of(p).map(|c| c.to_vec()))
            .collect::<CoreResult<_>>()?;
        let (c, _) = min_enclosing_ball(&raw);
        Ok(Point::coords(c))
    }

    /// Covering center on the segment x->y at the lens rim plane.
    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        if alpha_worst(k, mu).is_none() {
            return Err(CoreError::OracleRefused(format!(
                "euclidean lens has no covering ratio below 1 at k={k}, mu={mu}"
            )));
        }
        let (xs, ys) = (self.coords_of(x)?, self.coords_of(y)?);
        let r1 = (1.0 + mu) * r;
        let r2 = k * (1.0 + mu) * r;
        let d = l2(xs, ys);
        let (s, covering) = lens_cover_on_axis(d, r1, r2);
        let t = if d > 0.0 { s / d } else { 0.0 };
        let z: Vec<f64> = xs.iter().zip(ys).map(|(a, b)| a + t * (b - a)).collect();
        Ok(RegularityPoint {
            z: Point::coords(z),
            alpha: covering / r,
        })
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let (Some(xs), Some(ys)) = (x.as_coords(), y.as_coords()) else {
            return Vec::new();
        };
        lens_extreme_coords(xs, ys, r1, r2)
            .into_iter()
            .map(Point::coords)
            .collect()
    }
}

pub(crate) fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub(crate) fn sample_ball(center: &[f64], radius: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dim = center.len();
    let dir = random_unit(dim, rng);
    let u: f64 = rng.gen_range(0.0..=1.0);
    let rr = radius * u.powf(1.0 / dim as f64);
    center.iter().zip(&dir).map(|(c, d)| c + rr * d).collect()
}

/// Worst-case covering ratio of the two-ball lens over admissible
/// separations, relative to r = 1. `None` when it reaches 1.
pub fn alpha_worst(k: f64, mu: f64) -> Option<f64> {
    let r1 = 1.0 + mu;
    let r2 = k * (1.0 + mu);
    // the rim plane offset is increasing in d, so the worst case is the
    // minimal admissible separation
    let d = 1.0 - mu;
    let t = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let a2 = r1 * r1 - t.min(r1).max(-r1).powi(2);
    if a2 <= 0.0 {
        return Some(0.0);
    }
    let a = a2.sqrt();
    (a < 1.0 - 1e-9).then_some(a)
}

/// Best on-axis covering center for the lens B(0,r1) ∩ B(d,r2) (axis
/// coordinates), and its covering radius. Handles empty and nested cases.
fn lens_cover_on_axis(d: f64, r1: f64, r2: f64) -> (f64, f64) {
    if d > r1 + r2 {
        return (0.5 * d, 0.0); // empty lens
    }
    let t_lo = (-r1).max(d - r2);
    let t_hi = r1.min(d + r2);
    let t_star = if d > 1e-15 {
        ((d * d + r1 * r1 - r2 * r2) / (2.0 * d)).clamp(t_lo, t_hi)
    } else {
        0.0
    };
    let w2 = |t: f64| {
        let a = r1 * r1 - t * t;
        let b = r2 * r2 - (t - d) * (t - d);
        a.min(b).max(0.0)
    };
    let radius_from = |s: f64| {
        [t_lo, t_hi, t_star]
            .iter()
            .map(|&t| ((t - s) * (t - s) + w2(t)).sqrt())
            .fold(0.0, f64::max)
    };
    (t_star, radius_from(t_star))
}

/// Extreme candidates of the lens: the on-axis endpoints and rim points in
/// a few directions orthogonal to the axis.
fn lens_extreme_coords(xs: &[f64], ys: &[f64], r1: f64, r2: f64) -> Vec<Vec<f64>> {
    let dim = xs.len();
    let d = l2(xs, ys);
    if d > r1 + r2 || d < 1e-15 {
        return Vec::new();
    }
    let axis: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(a, b)| (b - a) / d)
        .collect();
    let t_lo = (-r1).max(d - r2);
    let t_hi = r1.min(d + r2);
    let t_star = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d)).clamp(t_lo, t_hi);
    let rho2 = (r1 * r1 - t_star * t_star).min(r2 * r2 - (t_star - d) * (t_star - d));
    let at = |t: f64| -> Vec<f64> { xs.iter().zip(&axis).map(|(x, a)| x + t * a).collect() };
    let mut out = vec![at(t_lo), at(t_hi)];
    if rho2 > 0.0 {
        let rho = rho2.sqrt();
        let base = at(t_star);
        for i in 0..dim {
            // orthonormalize e_i against the axis
            let mut w: Vec<f64> = (0..dim).map(|j| if j == i { 1.0 } else { 0.0 }).collect();
            let proj: f64 = w.iter().zip(&axis).map(|(a, b)| a * b).sum();
            for (wj, aj) in w.iter_mut().zip(&axis) {
                *wj -= proj * aj;
            }
            let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n < 1e-9 {
                continue;
            }
            for sign in [1.0, -1.0] {
                out.push(
                    base.iter()
                        .zip(&w)
                        .map(|(b, wj)| b + sign * rho * wj / n)
                        .collect(),
                );
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Ball {
    c: Vec<f64>,
    r: f64,
}

impl Ball {
    fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.r >= 0.0 && l2(&self.c, p) <= self.r + tol
    }
}

/// Minimum enclosing ball via Welzl's recursion; deterministic (points are
/// deduplicated and shuffled with a fixed seed).
pub fn min_enclosing_ball(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    assert!(!points.is_empty(), "min_enclosing_ball needs points");
    let dim = points[0].len();
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !uniq.iter().any(|q| q == p) {
            uniq.push(p.clone());
        }
    }
    let mut rng = rng_from(0x6d3b);
    for i in (1..uniq.len()).rev() {
        let j = rng.gen_range(0..=i);
        uniq.swap(i, j);
    }
    let mut boundary: Vec<Vec<f64>> = Vec::new();
    let b = welzl(&uniq, &mut boundary, dim);
    (b.c, b.r.max(0.0))
}

fn welzl(points: &[Vec<f64>], boundary: &mut Vec<Vec<f64>>, dim: usize) -> Ball {
    if points.is_empty() || boundary.len() == dim + 1 {
        return ball_of_boundary(boundary, dim);
    }
    let (rest, last) = points.split_at(points.len() - 1);
    let b = welzl(rest, boundary, dim);
    if b.contains(&last[0], 1e-10) {
        return b;
    }
    boundary.push(last[0].clone());
    let b2 = welzl(rest, boundary, dim);
    boundary.pop();
    b2
}

fn ball_of_boundary(boundary: &[Vec<f64>], dim: usize) -> Ball {
    match boundary.len() {
        0 => Ball {
            c: vec![0.0; dim],
            r: -1.0,
        },
        1 => Ball {
            c: boundary[0].clone(),
            r: 0.0,
        },
        m => {
            let p0 = &boundary[0];
            let k = m - 1;
            let mut a = vec![vec![0.0; k]; k];
            let mut b = vec![0.0; k];
            for i in 0..k {
                let di: Vec<f64> = boundary[i + 1].iter().zip(p0).map(|(u, v)| u - v).collect();
                for j in 0..k {
                    let dj: Vec<f64> =
                        boundary[j + 1].iter().zip(p0).map(|(u, v)| u - v).collect();
                    a[i][j] = di.iter().zip(&dj).map(|(u, v)| u * v).sum();
                }
                b[i] = 0.5 * di.iter().map(|u| u * u).sum::<f64>();
            }
            match solve(&mut a, &mut b) {
                Some(lambda) => {
                    let mut c = p0.clone();
                    for (i, l) in lambda.iter().enumerate() {
                        for (cj, (pj, p0j)) in c.iter_mut().zip(boundary[i + 1].iter().zip(p0)) {
                            *cj += l * (pj - p0j);
                        }
                    }
                    let r = l2(&c, p0);
                    Ball { c, r }
                }
                // affinely dependent support; drop the oldest point
                None => ball_of_boundary(&boundary[1..], dim),
            }
        }
    }
}

fn solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for c2 in col..n {
                a[row][c2] -= f * a[col][c2];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c2 in (row + 1)..n {
            acc -= a[row][c2] * x[c2];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meb_of_two_points_is_midpoint() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        let (c, r) = min_enclosing_ball(&pts);
        assert!((c[0] - 1.0).abs() < 1e-9 && c[1].abs() < 1e-9);
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn meb_matches_grid_search_on_triangle() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.8660254],
        ];
        let (c, r) = min_enclosing_ball(&pts);

        // independent oracle: brute-force minimization of the farthest
        // distance over a fine grid
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=steps {
                let gx = -0.2 + 1.4 * i as f64 / steps as f64;
                let gy = -0.2 + 1.4 * j as f64 / steps as f64;
                let worst = pts
                    .iter()
                    .map(|p| l2(p, &[gx, gy]))
                    .fold(0.0, f64::max);
                if worst < best.0 {
                    best = (worst, gx, gy);
                }
            }
        }
        assert!((c[0] - best.1).abs() < 5e-3 && (c[1] - best.2).abs() < 5e-3);
        assert!((r - best.0).abs() < 5e-3);
        // frozen values
        assert!((c[0] - 0.5).abs() < 1e-6);
        assert!((c[1] - 0.2886751).abs() < 1e-6);
        assert!((r - 0.5773503).abs() < 1e-6);
    }

    #[test]
    fn meb_contains_all_points_random() {
        let mut rng = rng_from(3);
        for dim in [2usize, 3, 5] {
            for _ in 0..20 {
                let pts: Vec<Vec<f64>> = (0..12)
                    .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect();
                let (c, r) = min_enclosing_ball(&pts);
                for p in &pts {
                    assert!(l2(p, &c) <= r + 1e-8);
                }
            }
        }
    }

    #[test]
    fn rim_pair_realizes_unit_diameter_above_sqrt2() {
        // with d = sqrt(k^2-1) r the rim is a great sphere of B(x,r)
        let s = Euclidean::unit(2);
        let k: f64 = 1.45;
        let r = 0.3;
        let d = (k * k - 1.0).sqrt() * r;
        let x = Point::coords(vec![0.0, 0.0]);
        let y = Point::coords(vec![d, 0.0]);
        let ext = s.lens_extremes(&x, &y, r, k * r);
        let mut diam: f64 = 0.0;
        for u in &ext {
            for v in &ext {
                diam = diam.max(s.distance(u, v).unwrap());
            }
        }
        assert!(diam >= 2.0 * r - 1e-9, "diam {diam} vs {}", 2.0 * r);
    }
}
