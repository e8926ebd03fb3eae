use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{CoreError, CoreResult};
use crate::point::Point;
use crate::spaces::euclid;
use crate::spaces::RegularityPoint;

/// The closed ball of radius `radius` in R^dim under the p-norm.
#[derive(Clone, Debug)]
pub struct Lp {
    pub dim: usize,
    pub p: f64,
    pub radius: f64,
}

impl Lp {
    pub fn new(dim: usize, p: f64, radius: f64) -> CoreResult<Self> {
        if dim == 0 || !(p >= 1.0) || !p.is_finite() || !(radius > 0.0) {
            return Err(CoreError::InvalidConfig(
                "lp space needs dim >= 1, p in [1, inf), radius > 0".into(),
            ));
        }
        Ok(Lp { dim, p, radius })
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        if (self.p - 1.0).abs() < 1e-12 {
            v.iter().map(|x| x.abs()).sum()
        } else if (self.p - 2.0).abs() < 1e-12 {
            v.iter().map(|x| x * x).sum::<f64>().sqrt()
        } else {
            v.iter()
                .map(|x| x.abs().powf(self.p))
                .sum::<f64>()
                .powf(1.0 / self.p)
        }
    }

    fn coords_of<'a>(&self, p: &'a Point) -> CoreResult<&'a [f64]> {
        match p.as_coords() {
            Some(xs) if xs.len() == self.dim => Ok(xs),
            _ => Err(CoreError::mismatch(
                "lp",
                format!("expected {} coordinates", self.dim),
            )),
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        let xs = self.coords_of(p)?;
        let n = self.norm(xs);
        if n > self.radius + 1e-9 {
            return Err(CoreError::mismatch(
                "lp",
                format!("p-norm {n} exceeds ball radius {}", self.radius),
            ));
        }
        Ok(())
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        let (xa, xb) = (self.coords_of(a)?, self.coords_of(b)?);
        let diff: Vec<f64> = xa.iter().zip(xb).map(|(u, v)| u - v).collect();
        Ok(self.norm(&diff))
    }

    /// Uniform in the p-ball: coordinates from the p-generalized normal via
    /// Gamma(1/p), normalized, then radially rescaled.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        let gamma = Gamma::new(1.0 / self.p, 1.0).expect("valid gamma");
        let mut v: Vec<f64> = (0..self.dim)
            .map(|_| {
                let g: f64 = gamma.sample(rng);
                let mag = g.powf(1.0 / self.p);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let n = self.norm(&v).max(1e-300);
        let u: f64 = rng.gen_range(0.0f64..=1.0);
        let scale = self.radius * u.powf(1.0 / self.dim as f64) / n;
        for x in &mut v {
            *x *= scale;
        }
        Point::coords(v)
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        let xs = c.as_coords()?;
        for _ in 0..64 {
            let off = match self.sample(rng) {
                Point::Coords { xs: v, .. } => v,
                _ => unreachable!(),
            };
            let cand: Vec<f64> = xs
                .iter()
                .zip(&off)
                .map(|(a, b)| a + b * (r / self.radius))
                .collect();
            if self.norm(&cand) <= self.radius {
                return Some(Point::coords(cand));
            }
        }
        None
    }

    pub fn probes(&self) -> Vec<Point> {
        let mut out = vec![Point::coords(vec![0.0; self.dim])];
        for i in 0..self.dim {
            let mut e = vec![0.0; self.dim];
            e[i] = self.radius;
            out.push(Point::coords(e));
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Point {
        let mut e = vec![0.0; self.dim];
        e[i] = self.radius;
        Point::coords(e)
    }

    /// Candidate-search center: exact minimum enclosing ball for p = 2,
    /// otherwise the best of the input points, pairwise midpoints, the
    /// coordinate mean, and the origin. Approximate; no covering-ratio
    /// guarantee is claimed for p != 2.
    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        let raw: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| self.coords_of(p).map(|c| c.to_vec()))
            .collect::<CoreResult<_>>()?;
        if (self.p - 2.0).abs() < 1e-12 {
            let (c, _) = euclid::min_enclosing_ball(&raw);
            return Ok(Point::coords(c));
        }
        let mut candidates: Vec<Vec<f64>> = raw.clone();
        candidates.push(vec![0.0; self.dim]);
        let mean: Vec<f64> = (0..self.dim)
            .map(|i| raw.iter().map(|p| p[i]).sum::<f64>() / raw.len() as f64)
            .collect();
        candidates.push(mean);
        let cap = 24.min(raw.len());
        for i in 0..cap {
            for j in (i + 1)..cap {
                candidates.push(
                    raw[i]
                        .iter()
                        .zip(&raw[j])
                        .map(|(a, b)| 0.5 * (a + b))
                        .collect(),
                );
            }
        }
        let sup = |c: &[f64]| {
            raw.iter()
                .map(|q| {
                    let diff: Vec<f64> = c.iter().zip(q).map(|(u, v)| u - v).collect();
                    self.norm(&diff)
                })
                .fold(0.0, f64::max)
        };
        let best = candidates
            .into_iter()
            .filter(|c| self.norm(c) <= self.radius + 1e-9)
            .min_by(|a, b| sup(a).partial_cmp(&sup(b)).unwrap())
            .ok_or_else(|| CoreError::unsupported("lp", "center (no feasible candidate)"))?;
        Ok(Point::coords(best))
    }

    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        if (self.p - 2.0).abs() >= 1e-12 {
            return Err(CoreError::OracleRefused(format!(
                "no lens covering construction for p = {}",
                self.p
            )));
        }
        let eu = euclid::Euclidean::unit(self.dim);
        // geometry is norm-local; domain checks are done by the caller
        let eu = euclid::Euclidean {
            radius: self.radius,
            ..eu
        };
        eu.regularity_point(x, y, r, k, mu)
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        if (self.p - 2.0).abs() >= 1e-12 {
            return Vec::new();
        }
        let eu = euclid::Euclidean {
            dim: self.dim,
            center: vec![0.0; self.dim],
            radius: self.radius,
        };
        eu.lens_extremes(x, y, r1, r2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn basis_gap_is_two_to_inverse_p() {
        for p in [1.0, 2.0, 4.0] {
            let s = Lp::new(3, p, 1.0).unwrap();
            let d = s.distance(&s.basis_vector(0), &s.basis_vector(1)).unwrap();
            assert!((d - 2f64.powf(1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_stays_in_ball() {
        for p in [1.0, 1.7, 2.0, 4.0] {
            let s = Lp::new(8, p, 1.0).unwrap();
            let mut rng = rng_from(11);
            for _ in 0..500 {
                let pt = s.sample(&mut rng);
                assert!(s.check_point(&pt).is_ok());
            }
        }
    }

    #[test]
    fn l1_center_of_basis_prefers_origin() {
        let s = Lp::new(8, 1.0, 1.0).unwrap();
        let pts: Vec<Point> = (0..8).map(|i| s.basis_vector(i)).collect();
        let c = s.center(&pts).unwrap();
        let sup = pts
            .iter()
            .map(|p| s.distance(&c, p).unwrap())
            .fold(0.0, f64::max);
        // origin covers the basis at radius 1, half the pairwise gap of 2
        assert!(sup <= 1.0 + 1e-9, "covering radius {sup}");
    }
}
