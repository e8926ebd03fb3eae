//! Space-agnostic functionals over finite point sets: farthest-point
//! distance, diameter, inner radius, admissible covers, Chebyshev centers.
//!
//! All functionals are exact maxima/minima over the finite input; truncation
//! of infinite sets (orbits) happens upstream.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::point::Point;
use crate::spaces::{SeqSpace, Space};

/// A closed ball, as data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Point, radius: f64) -> CoreResult<Self> {
        if radius < 0.0 {
            return Err(CoreError::Domain("ball radius must be nonnegative".into()));
        }
        Ok(BallSpec { center, radius })
    }
}

/// Space-specific representation of the admissible cover of a finite set:
/// the intersection of all closed balls containing it.
///
/// Interval, box, sequence-box, and subtree forms are exact; the ball-family
/// form over-approximates (it is an intersection of finitely many of the
/// balls containing the set, so membership errs on the inclusive side and
/// tightens as witnesses are added).
#[derive(Clone, Debug)]
pub enum CoverDescriptor {
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    SeqBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
        tail_lo: f64,
        tail_hi: f64,
    },
    BallFamily { balls: Vec<(Point, f64)> },
    Subtree { generators: Vec<Point> },
}

impl CoverDescriptor {
    pub fn contains(&self, space: &Space, p: &Point) -> CoreResult<bool> {
        let tol = 1e-9;
        match self {
            CoverDescriptor::Interval { lo, hi } => {
                let x = p
                    .as_scalar()
                    .ok_or_else(|| CoreError::mismatch("interval", "expected scalar".to_string()))?;
                Ok(x >= lo - tol && x <= hi + tol)
            }
            CoverDescriptor::Box { lo, hi } => {
                let xs = p
                    .as_coords()
                    .ok_or_else(|| CoreError::mismatch("box", "expected coords".to_string()))?;
                Ok(xs.len() == lo.len()
                    && xs
                        .iter()
                        .zip(lo.iter().zip(hi))
                        .all(|(x, (a, b))| *x >= a - tol && *x <= b + tol))
            }
            CoverDescriptor::SeqBox {
                lo,
                hi,
                tail_lo,
                tail_hi,
            } => {
                let Point::Seq { prefix, tail } = p else {
                    return Err(CoreError::mismatch("seq", "expected sequence".to_string()));
                };
                for i in 0..prefix.len().max(lo.len()) {
                    let v = SeqSpace::coord(p, i);
                    let (a, b) = if i < lo.len() {
                        (lo[i], hi[i])
                    } else {
                        (*tail_lo, *tail_hi)
                    };
                    if v < a - tol || v > b + tol {
                        return Ok(false);
                    }
                }
                Ok(*tail >= tail_lo - tol && *tail <= tail_hi + tol)
            }
            CoverDescriptor::BallFamily { balls } => {
                for (c, r) in balls {
                    if space.distance(c, p)? > r + tol {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CoverDescriptor::Subtree { generators } => {
                // a point of a tree lies in the ball hull of A iff it lies on
                // an arc between two generators
                for (i, a) in generators.iter().enumerate() {
                    for b in &generators[i..] {
                        let lhs = space.distance(a, p)? + space.distance(p, b)?;
                        if lhs <= space.distance(a, b)? + tol {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }

    /// A finite point sample representing the cover, used where a functional
    /// needs witness points of the set rather than a membership test.
    pub fn witness_points(&self) -> Vec<Point> {
        match self {
            CoverDescriptor::Interval { lo, hi } => {
                vec![
                    Point::scalar(*lo),
                    Point::scalar(0.5 * (lo + hi)),
                    Point::scalar(*hi),
                ]
            }
            CoverDescriptor::Box { lo, hi } => {
                let n = lo.len();
                let mut out = Vec::new();
                if n <= 4 {
                    for mask in 0..(1u32 << n) {
                        out.push(Point::coords(
                            (0..n)
                                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                                .collect(),
                        ));
                    }
                }
                out.push(Point::coords(
                    lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
                ));
                out
            }
            CoverDescriptor::SeqBox {
                lo,
                hi,
                tail_lo,
                tail_hi,
            } => {
                vec![
                    Point::seq(lo.clone(), *tail_lo),
                    Point::seq(hi.clone(), *tail_hi),
                ]
            }
            CoverDescriptor::BallFamily { balls } => {
                balls.iter().map(|(c, _)| c.clone()).collect()
            }
            CoverDescriptor::Subtree { generators } => generators.clone(),
        }
    }
}

/// Farthest-point distance from `x` to the finite set `set`.
pub fn sup_distance(space: &Space, x: &Point, set: &[Point]) -> CoreResult<f64> {
    if set.is_empty() {
        return Err(CoreError::EmptySet);
    }
    let mut d: f64 = 0.0;
    for p in set {
        d = d.max(space.distance(x, p)?);
    }
    Ok(d)
}

/// Largest pairwise distance of the finite set.
pub fn diameter(space: &Space, set: &[Point]) -> CoreResult<f64> {
    if set.is_empty() {
        return Err(CoreError::EmptySet);
    }
    let mut d: f64 = 0.0;
    for (i, p) in set.iter().enumerate() {
        for q in &set[i + 1..] {
            d = d.max(space.distance(p, q)?);
        }
    }
    Ok(d)
}

/// Smallest farthest-point distance over base points drawn from the set
/// itself.
pub fn inner_radius(space: &Space, set: &[Point]) -> CoreResult<f64> {
    if set.is_empty() {
        return Err(CoreError::EmptySet);
    }
    let mut best = f64::INFINITY;
    for x in set {
        best = best.min(sup_distance(space, x, set)?);
    }
    Ok(best)
}

/// The admissible cover of the set in its space.
pub fn admissible_cover(space: &Space, set: &[Point]) -> CoreResult<CoverDescriptor> {
    space.cover(set)
}

/// Center oracle plus its exact covering radius over the finite set.
pub fn chebyshev_center(space: &Space, set: &[Point]) -> CoreResult<(Point, f64)> {
    let z = space.center(set)?;
    let r = sup_distance(space, &z, set)?;
    Ok((z, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use crate::spaces::{Euclidean, Interval, Lp, MaxNorm};

    fn interval01() -> Space {
        Space::Interval(Interval::new(0.0, 1.0).unwrap())
    }

    #[test]
    fn sup_distance_examples() {
        let s = interval01();
        // distance to self
        let x = Point::scalar(0.5);
        assert_eq!(sup_distance(&s, &x, &[x.clone()]).unwrap(), 0.0);
        // farthest point of {1, 0} from 1/2
        let orbit = [Point::scalar(1.0), Point::scalar(0.0)];
        assert_eq!(sup_distance(&s, &x, &orbit).unwrap(), 0.5);
        // max-norm plane
        let m = Space::MaxNorm(MaxNorm::new(vec![(0.0, 4.0), (0.0, 4.0)]).unwrap());
        let origin = Point::coords(vec![0.0, 0.0]);
        let set = [
            Point::coords(vec![2.0, 1.0]),
            Point::coords(vec![0.0, 3.0]),
        ];
        assert_eq!(sup_distance(&m, &origin, &set).unwrap(), 3.0);
        assert!(matches!(
            sup_distance(&m, &origin, &[]),
            Err(CoreError::EmptySet)
        ));
    }

    #[test]
    fn diameter_examples() {
        let s = interval01();
        assert_eq!(diameter(&s, &[Point::scalar(0.3)]).unwrap(), 0.0);
        assert_eq!(
            diameter(&s, &[Point::scalar(0.0), Point::scalar(1.0)]).unwrap(),
            1.0
        );
        for p in [1.0, 2.0, 4.0] {
            let lp = Lp::new(3, p, 1.0).unwrap();
            let basis = vec![
                lp.basis_vector(0),
                lp.basis_vector(1),
                lp.basis_vector(2),
            ];
            let space = Space::Lp(lp);
            let d = diameter(&space, &basis).unwrap();
            assert!((d - 2f64.powf(1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_radius_examples() {
        let s = interval01();
        assert_eq!(inner_radius(&s, &[Point::scalar(0.4)]).unwrap(), 0.0);

        let set = [
            Point::scalar(0.0),
            Point::scalar(1.0),
            Point::scalar(0.5),
        ];
        // brute force over the three candidate base points
        let mut best = f64::INFINITY;
        for x in &set {
            let worst = sup_distance(&s, x, &set).unwrap();
            best = best.min(worst);
        }
        assert_eq!(best, 0.5);
        assert_eq!(inner_radius(&s, &set).unwrap(), 0.5);

        // equilateral triple, side 1: every vertex has another at distance 1
        let e = Space::Euclidean(Euclidean::unit(2));
        let tri = [
            Point::coords(vec![0.0, 0.0]),
            Point::coords(vec![1.0, 0.0]),
            Point::coords(vec![0.5, 0.8660254]),
        ];
        let r = inner_radius(&e, &tri).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
        assert!(r <= diameter(&e, &tri).unwrap() + 1e-12);
    }

    #[test]
    fn cover_examples() {
        let s = interval01();
        let cov = admissible_cover(&s, &[Point::scalar(0.0), Point::scalar(1.0)]).unwrap();
        match cov {
            CoverDescriptor::Interval { lo, hi } => {
                assert_eq!((lo, hi), (0.0, 1.0));
            }
            _ => panic!("interval cover expected"),
        }
        let single = admissible_cover(&s, &[Point::scalar(0.25)]).unwrap();
        match single {
            CoverDescriptor::Interval { lo, hi } => assert_eq!(lo, hi),
            _ => panic!(),
        }
    }

    #[test]
    fn maxnorm_cover_is_bounding_box_by_brute_force() {
        let m = MaxNorm::new(vec![(-1.0, 3.0), (-1.0, 3.0)]).unwrap();
        let space = Space::MaxNorm(m);
        let a = Point::coords(vec![0.0, 0.0]);
        let b = Point::coords(vec![2.0, 1.0]);
        let cov = admissible_cover(&space, &[a.clone(), b.clone()]).unwrap();
        match &cov {
            CoverDescriptor::Box { lo, hi } => {
                assert_eq!(lo, &vec![0.0, 0.0]);
                assert_eq!(hi, &vec![2.0, 1.0]);
            }
            _ => panic!("box expected"),
        }

        // every sampled max-norm ball containing both points contains the
        // whole box, and points outside the box are excluded by some ball
        let mut rng = rng_from(17);
        let grid: Vec<Point> = (0..=8)
            .flat_map(|i| {
                (0..=8).map(move |j| {
                    Point::coords(vec![2.0 * i as f64 / 8.0, 1.0 * j as f64 / 8.0])
                })
            })
            .collect();
        for _ in 0..500 {
            let c = space.sample(&mut rng);
            let r = sup_distance(&space, &c, &[a.clone(), b.clone()]).unwrap();
            for g in &grid {
                assert!(space.distance(&c, g).unwrap() <= r + 1e-9);
            }
        }
        for _ in 0..500 {
            let p = space.sample(&mut rng);
            let inside = cov.contains(&space, &p).unwrap();
            if !inside {
                // some ball containing {a, b} must exclude p; center it far
                // out along the violated coordinate
                let (lo, hi) = ([0.0, 0.0], [2.0, 1.0]);
                let ps = p.as_coords().unwrap();
                let (j, toward_hi) = (0..2)
                    .find_map(|j| {
                        if ps[j] < lo[j] - 1e-9 {
                            Some((j, true))
                        } else if ps[j] > hi[j] + 1e-9 {
                            Some((j, false))
                        } else {
                            None
                        }
                    })
                    .expect("outside point violates some coordinate");
                let mut center = vec![1.0, 0.5];
                center[j] = if toward_hi { 3.0 } else { -1.0 };
                let c = Point::coords(center);
                let r = sup_distance(&space, &c, &[a.clone(), b.clone()]).unwrap();
                assert!(space.distance(&c, &p).unwrap() > r + 1e-9);
            }
        }
    }

    #[test]
    fn chebyshev_center_examples() {
        let s = interval01();
        let (z, r) = chebyshev_center(&s, &[Point::scalar(0.0), Point::scalar(1.0)]).unwrap();
        assert_eq!(z.as_scalar().unwrap(), 0.5);
        assert_eq!(r, 0.5);

        let e = Space::Euclidean(Euclidean::unit(2));
        let tri = [
            Point::coords(vec![0.0, 0.0]),
            Point::coords(vec![1.0, 0.0]),
            Point::coords(vec![0.5, 0.8660254]),
        ];
        let (z, r) = chebyshev_center(&e, &tri).unwrap();
        let zc = z.as_coords().unwrap();
        assert!((zc[0] - 0.5).abs() < 1e-6);
        assert!((zc[1] - 0.2886751).abs() < 1e-6);
        assert!((r - 0.5773503).abs() < 1e-6);
        // the ratio to the diameter matches the planar covering bound
        let ratio = r / diameter(&e, &tri).unwrap();
        assert!((ratio - 1.0 / 3f64.sqrt()).abs() < 1e-6);

        let m = Space::MaxNorm(MaxNorm::new(vec![(-1.0, 3.0), (-1.0, 3.0)]).unwrap());
        let (z, r) = chebyshev_center(
            &m,
            &[Point::coords(vec![0.0, 0.0]), Point::coords(vec![2.0, 1.0])],
        )
        .unwrap();
        assert_eq!(z.as_coords().unwrap(), &[1.0, 0.5]);
        assert_eq!(r, 1.0);
    }

    #[test]
    fn center_lies_in_cover_and_respects_farthest_distance() {
        // membership-level restatement: any point of the cover is within
        // sup_distance(x, A) of x
        let mut rng = rng_from(23);
        let spaces = [
            interval01(),
            Space::MaxNorm(MaxNorm::new(vec![(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]).unwrap()),
        ];
        for space in &spaces {
            for _ in 0..200 {
                let set: Vec<Point> = (0..5).map(|_| space.sample(&mut rng)).collect();
                let cov = admissible_cover(space, &set).unwrap();
                let (z, r) = chebyshev_center(space, &set).unwrap();
                assert!(cov.contains(space, &z).unwrap());
                let x = space.sample(&mut rng);
                let dxz = space.distance(&x, &z).unwrap();
                assert!(dxz <= sup_distance(space, &x, &set).unwrap() + 1e-9);
                // covering ratio of these spaces never exceeds one half
                let diam = diameter(space, &set).unwrap();
                if diam > 1e-12 {
                    assert!(r / diam <= 0.5 + 1e-9);
                }
                // the diameter is realized by cover witness points
                let witnesses = cov.witness_points();
                let dw = diameter(space, &witnesses).unwrap();
                assert!((dw - diam).abs() <= 1e-9);
            }
        }
    }
}
