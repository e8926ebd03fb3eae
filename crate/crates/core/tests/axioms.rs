//! Space-level invariants: metric axioms, sampler domains, oracle
//! containment, and distance model properties.

use proptest::prelude::*;

use ofl_core::point::Point;
use ofl_core::rng::rng_from;
use ofl_core::spaces::{Euclidean, Interval, Lp, MaxNorm, SeqSpace, Space, TreeSpace};

fn all_spaces() -> Vec<Space> {
    vec![
        Space::Interval(Interval::new(-1.0, 1.0).unwrap()),
        Space::MaxNorm(MaxNorm::new(vec![(-1.0, 1.0); 3]).unwrap()),
        Space::Euclidean(Euclidean::unit(2)),
        Space::Lp(Lp::new(4, 1.5, 1.0).unwrap()),
        Space::Tree(TreeSpace::new(5, vec![(0, 1, 1.0), (0, 2, 0.5), (1, 3, 2.0), (1, 4, 0.25)]).unwrap()),
        Space::Seq(SeqSpace::new(-2.0, 2.0, 6).unwrap()),
    ]
}

#[test]
fn metric_axioms_on_ten_thousand_triples_per_space() {
    for space in all_spaces() {
        let mut rng = rng_from(0xa21);
        for _ in 0..10_000 {
            let x = space.sample(&mut rng);
            let y = space.sample(&mut rng);
            let z = space.sample(&mut rng);
            let dxx = space.distance(&x, &x).unwrap();
            assert!(dxx.abs() <= 1e-12, "{}: d(x,x) = {dxx}", space.kind_name());
            let dxy = space.distance(&x, &y).unwrap();
            let dyx = space.distance(&y, &x).unwrap();
            assert!(
                (dxy - dyx).abs() <= 1e-12,
                "{}: asymmetry {dxy} vs {dyx}",
                space.kind_name()
            );
            assert!(dxy >= 0.0);
            let dxz = space.distance(&x, &z).unwrap();
            let dyz = space.distance(&y, &z).unwrap();
            assert!(
                dxz <= dxy + dyz + 1e-12,
                "{}: triangle violated: {dxz} > {dxy} + {dyz}",
                space.kind_name()
            );
        }
    }
}

#[test]
fn sampler_output_lies_in_the_declared_domain() {
    for space in all_spaces() {
        let mut rng = rng_from(0x5a);
        for _ in 0..10_000 {
            let p = space.sample(&mut rng);
            assert!(space.check_point(&p).is_ok(), "{}", space.kind_name());
        }
    }
}

#[test]
fn regularity_oracle_containment_on_ten_thousand_lens_samples() {
    // spaces with a covering construction, at levels they support
    let cases: Vec<(Space, f64, f64)> = vec![
        (Space::Interval(Interval::new(-1.0, 1.0).unwrap()), 1.5, 0.05),
        (Space::Euclidean(Euclidean::unit(2)), 1.2, 0.01),
        (
            Space::Tree(TreeSpace::new(5, vec![(0, 1, 1.0), (0, 2, 0.5), (1, 3, 2.0), (1, 4, 0.25)]).unwrap()),
            1.5,
            0.05,
        ),
        (Space::MaxNorm(MaxNorm::new(vec![(-1.0, 1.0); 2]).unwrap()), 1.0, 0.01),
    ];
    for (space, k, mu) in cases {
        let mut rng = rng_from(0x0c);
        let mut checked = 0usize;
        while checked < 10_000 {
            let x = space.sample(&mut rng);
            let r = 0.05 + 0.2 * rand::Rng::gen_range(&mut rng, 0.0..1.0f64);
            let Some(y0) = space.sample_in_ball(&x, 2.0 * r, &mut rng) else {
                continue;
            };
            let d = space.distance(&x, &y0).unwrap();
            if d < (1.0 - mu) * r {
                continue;
            }
            let Ok(rp) = space.regularity_point(&x, &y0, r, k, mu) else {
                continue;
            };
            let r1 = (1.0 + mu) * r;
            let r2 = k * (1.0 + mu) * r;
            for _ in 0..40 {
                let Some(p) = space.sample_in_ball(&x, r1, &mut rng) else {
                    continue;
                };
                if space.distance(&p, &y0).unwrap() > r2 {
                    continue;
                }
                let dz = space.distance(&rp.z, &p).unwrap();
                assert!(
                    dz <= rp.alpha * r + 1e-9,
                    "{}: lens point escapes: {dz} > {}",
                    space.kind_name(),
                    rp.alpha * r
                );
                checked += 1;
            }
        }
    }
}

proptest! {
    #[test]
    fn box_distance_symmetry_and_triangle(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        b in proptest::collection::vec(-1.0f64..1.0, 3),
        c in proptest::collection::vec(-1.0f64..1.0, 3),
    ) {
        let s = Space::MaxNorm(MaxNorm::new(vec![(-1.0, 1.0); 3]).unwrap());
        let (pa, pb, pc) = (Point::coords(a), Point::coords(b), Point::coords(c));
        let dab = s.distance(&pa, &pb).unwrap();
        let dba = s.distance(&pb, &pa).unwrap();
        prop_assert!((dab - dba).abs() <= 1e-15);
        let dac = s.distance(&pa, &pc).unwrap();
        let dcb = s.distance(&pc, &pb).unwrap();
        prop_assert!(dab <= dac + dcb + 1e-12);
    }

    #[test]
    fn seq_distance_is_padding_invariant(
        prefix in proptest::collection::vec(-2.0f64..2.0, 0..6),
        tail in -2.0f64..2.0,
        other_prefix in proptest::collection::vec(-2.0f64..2.0, 0..6),
        other_tail in -2.0f64..2.0,
        pad in 0usize..4,
    ) {
        let s = Space::Seq(SeqSpace::new(-2.0, 2.0, 6).unwrap());
        let a = Point::seq(prefix.clone(), tail);
        let mut padded = prefix;
        padded.extend(std::iter::repeat(tail).take(pad));
        let a2 = Point::seq(padded, tail);
        let b = Point::seq(other_prefix, other_tail);
        let d1 = s.distance(&a, &b).unwrap();
        let d2 = s.distance(&a2, &b).unwrap();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn lp_norm_scaling(
        xs in proptest::collection::vec(-0.4f64..0.4, 4),
        lam in 0.0f64..1.0,
    ) {
        let lp = Lp::new(4, 1.5, 1.0).unwrap();
        let s = Space::Lp(lp);
        let origin = Point::coords(vec![0.0; 4]);
        let p = Point::coords(xs.clone());
        let scaled = Point::coords(xs.iter().map(|v| v * lam).collect());
        let d1 = s.distance(&origin, &p).unwrap();
        let d2 = s.distance(&origin, &scaled).unwrap();
        prop_assert!((d2 - lam * d1).abs() <= 1e-12);
    }
}
