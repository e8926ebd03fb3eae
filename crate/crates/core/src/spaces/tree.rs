use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;
use crate::spaces::RegularityPoint;

/// A finite weighted tree as a model geodesic 0-hyperbolic space. Points
/// live on edges: `(edge id, offset from the edge's first endpoint)`.
#[derive(Clone, Debug)]
pub struct TreeSpace {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    vdist: Vec<Vec<f64>>,
    adj: Vec<Vec<(usize, usize)>>,
    cum_len: Vec<f64>,
    total_len: f64,
}

impl TreeSpace {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> CoreResult<Self> {
        if n_vertices < 2 || edges.len() != n_vertices - 1 {
            return Err(CoreError::InvalidConfig(
                "tree needs n >= 2 vertices and exactly n-1 edges".into(),
            ));
        }
        let mut adj = vec![Vec::new(); n_vertices];
        for (i, &(a, b, len)) in edges.iter().enumerate() {
            if a >= n_vertices || b >= n_vertices || a == b || !(len > 0.0) {
                return Err(CoreError::InvalidConfig(format!(
                    "bad edge {i}: ({a}, {b}, {len})"
                )));
            }
            adj[a].push((i, b));
            adj[b].push((i, a));
        }
        // connectivity and vertex distances by BFS from every vertex
        let mut vdist = vec![vec![f64::INFINITY; n_vertices]; n_vertices];
        for root in 0..n_vertices {
            let mut stack = vec![root];
            vdist[root][root] = 0.0;
            while let Some(v) = stack.pop() {
                for &(e, w) in &adj[v] {
                    if vdist[root][w].is_infinite() {
                        vdist[root][w] = vdist[root][v] + edges[e].2;
                        stack.push(w);
                    }
                }
            }
            if vdist[root].iter().any(|d| d.is_infinite()) {
                return Err(CoreError::InvalidConfig("edge list is not connected".into()));
            }
        }
        let mut cum = Vec::with_capacity(edges.len());
        let mut total = 0.0;
        for &(_, _, len) in &edges {
            total += len;
            cum.push(total);
        }
        Ok(TreeSpace {
            n_vertices,
            edges,
            vdist,
            adj,
            cum_len: cum,
            total_len: total,
        })
    }

    /// Three unit legs glued at a center vertex; the default demo tree.
    pub fn tripod() -> Self {
        TreeSpace::new(4, vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).expect("valid tripod")
    }

    pub fn vertex_point(&self, v: usize) -> Point {
        for (i, &(a, b, len)) in self.edges.iter().enumerate() {
            if a == v {
                return Point::tree(i, 0.0);
            }
            if b == v {
                return Point::tree(i, len);
            }
        }
        unreachable!("vertex {v} has no incident edge")
    }

    fn parts_of(&self, p: &Point) -> CoreResult<(usize, f64)> {
        match p {
            Point::Tree { edge, offset } => {
                if *edge >= self.edges.len() {
                    return Err(CoreError::mismatch("tree", format!("edge {edge} out of range")));
                }
                let len = self.edges[*edge].2;
                if *offset < -1e-9 || *offset > len + 1e-9 {
                    return Err(CoreError::mismatch(
                        "tree",
                        format!("offset {offset} outside [0, {len}]"),
                    ));
                }
                Ok((*edge, offset.clamp(0.0, len)))
            }
            _ => Err(CoreError::mismatch("tree", "expected a tree point".to_string())),
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        self.parts_of(p).map(|_| ())
    }

    /// Distance from a point to a vertex.
    fn to_vertex(&self, (e, t): (usize, f64), v: usize) -> f64 {
        let (a, b, len) = self.edges[e];
        (t + self.vdist[a][v]).min(len - t + self.vdist[b][v])
    }

    pub fn distance(&self, p: &Point, q: &Point) -> CoreResult<f64> {
        let (ep, tp) = self.parts_of(p)?;
        let (eq, tq) = self.parts_of(q)?;
        if ep == eq {
            return Ok((tp - tq).abs());
        }
        let (c, d, len_q) = self.edges[eq];
        let via_c = self.to_vertex((ep, tp), c) + tq;
        let via_d = self.to_vertex((ep, tp), d) + (len_q - tq);
        Ok(via_c.min(via_d))
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        let u: f64 = rng.gen_range(0.0..self.total_len);
        let e = self
            .cum_len
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.edges.len() - 1);
        let prev = if e == 0 { 0.0 } else { self.cum_len[e - 1] };
        Point::tree(e, u - prev)
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        for _ in 0..128 {
            let p = self.sample(rng);
            if self.distance(c, &p).ok()? <= r {
                return Some(p);
            }
        }
        None
    }

    pub fn probes(&self) -> Vec<Point> {
        let mut out: Vec<Point> = (0..self.n_vertices.min(8))
            .map(|v| self.vertex_point(v))
            .collect();
        for (i, &(_, _, len)) in self.edges.iter().enumerate().take(8) {
            out.push(Point::tree(i, 0.5 * len));
        }
        out
    }

    pub fn diameter_bound(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in 0..self.n_vertices {
            for b in 0..self.n_vertices {
                d = d.max(self.vdist[a][b]);
            }
        }
        d
    }

    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        for p in pts {
            self.check_point(p)?;
        }
        Ok(CoverDescriptor::Subtree {
            generators: pts.to_vec(),
        })
    }

    /// Midpoint of a diametral pair; on a tree this covers at half the
    /// diameter.
    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..pts.len() {
            for j in i..pts.len() {
                let d = self.distance(&pts[i], &pts[j])?;
                if d > best.2 {
                    best = (i, j, d);
                }
            }
        }
        self.path_point(&pts[best.0], &pts[best.1], 0.5 * best.2)
    }

    /// The point at distance `t` from `p` along the unique arc to `q`.
    pub fn path_point(&self, p: &Point, q: &Point, t: f64) -> CoreResult<Point> {
        let (ep, tp) = self.parts_of(p)?;
        let (eq, tq) = self.parts_of(q)?;
        let total = self.distance(p, q)?;
        let t = t.clamp(0.0, total);
        if ep == eq {
            let dir = if tq >= tp { 1.0 } else { -1.0 };
            return Ok(Point::tree(ep, tp + dir * t));
        }
        // choose the exit endpoint of p's edge and the entry endpoint of q's
        let (a, b, len_p) = self.edges[ep];
        let (c, d, len_q) = self.edges[eq];
        let mut best = (f64::INFINITY, a, c, tp, tq);
        for (exit, exit_cost) in [(a, tp), (b, len_p - tp)] {
            for (entry, entry_cost) in [(c, tq), (d, len_q - tq)] {
                let cost = exit_cost + self.vdist[exit][entry] + entry_cost;
                if cost < best.0 - 1e-12 {
                    best = (cost, exit, entry, exit_cost, entry_cost);
                }
            }
        }
        let (_, exit, entry, exit_cost, entry_cost) = best;
        if t <= exit_cost {
            // still on p's edge, moving toward `exit`
            let dir = if exit == b { 1.0 } else { -1.0 };
            return Ok(Point::tree(ep, tp + dir * t));
        }
        let mut remaining = t - exit_cost;
        // vertex chain exit -> entry via parent search
        let chain = self.vertex_path(exit, entry);
        for win in chain.windows(2) {
            let (u, v) = (win[0], win[1]);
            let (eid, elen, from_a) = self.edge_between(u, v);
            if remaining <= elen + 1e-12 {
                let off = if from_a { remaining } else { elen - remaining };
                return Ok(Point::tree(eid, off.clamp(0.0, elen)));
            }
            remaining -= elen;
        }
        // inside q's edge, moving from `entry` toward q
        let dir_from_entry = if entry == c { 1.0 } else { -1.0 };
        let start = if entry == c { 0.0 } else { len_q };
        let off = start + dir_from_entry * remaining.min(entry_cost);
        Ok(Point::tree(eq, off.clamp(0.0, len_q)))
    }

    fn vertex_path(&self, from: usize, to: usize) -> Vec<usize> {
        if from == to {
            return vec![from];
        }
        let mut parent = vec![usize::MAX; self.n_vertices];
        let mut stack = vec![from];
        parent[from] = from;
        while let Some(v) = stack.pop() {
            if v == to {
                break;
            }
            for &(_, w) in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn edge_between(&self, u: usize, v: usize) -> (usize, f64, bool) {
        for &(e, w) in &self.adj[u] {
            if w == v {
                let (a, _, len) = self.edges[e];
                return (e, len, a == u);
            }
        }
        unreachable!("no edge between {u} and {v}")
    }

    /// Covering point on the arc x->y at the balanced parameter; the lens of
    /// two tree balls fits in radius `(r1 + r2 - d)/2` around it.
    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        let worst = (k * (1.0 + mu) + 2.0 * mu) / 2.0;
        if worst >= 1.0 - 1e-9 {
            return Err(CoreError::OracleRefused(format!(
                "tree lens ratio {worst} >= 1 at k={k}, mu={mu}"
            )));
        }
        let r1 = (1.0 + mu) * r;
        let r2 = k * (1.0 + mu) * r;
        let d = self.distance(x, y)?;
        if d > r1 + r2 {
            return Ok(RegularityPoint {
                z: x.clone(),
                alpha: 0.0,
            });
        }
        let lambda = (0.5 * (r1 - r2 + d)).clamp(0.0, d);
        let z = self.path_point(x, y, lambda)?;
        Ok(RegularityPoint {
            z,
            alpha: (0.5 * (r1 + r2 - d)).min(r1) / r,
        })
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let Ok(d) = self.distance(x, y) else {
            return Vec::new();
        };
        if d > r1 + r2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        // arc endpoints of the lens along x -> y (possibly past y)
        let lo = (d - r2).max(0.0);
        if let Ok(p) = self.path_point(x, y, lo) {
            out.push(p);
        }
        if let Ok(p) = self.path_point(x, y, r1.min(d)) {
            out.push(p);
        }
        // vertices inside the lens, extended one edge outward
        for v in 0..self.n_vertices {
            let vp = self.vertex_point(v);
            let (Ok(dx), Ok(dy)) = (self.distance(&vp, x), self.distance(&vp, y)) else {
                continue;
            };
            if dx > r1 || dy > r2 {
                continue;
            }
            out.push(vp);
            let slack = (r1 - dx).min(r2 - dy);
            for &(e, _) in &self.adj[v] {
                let (a, _, len) = self.edges[e];
                let off = if a == v {
                    slack.min(len)
                } else {
                    (len - slack).max(0.0)
                };
                out.push(Point::tree(e, off));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn tripod_distances() {
        let t = TreeSpace::tripod();
        let leg1 = t.vertex_point(1);
        let leg2 = t.vertex_point(2);
        assert!((t.distance(&leg1, &leg2).unwrap() - 2.0).abs() < 1e-12);
        let mid = Point::tree(0, 0.5);
        assert!((t.distance(&mid, &leg1).unwrap() - 0.5).abs() < 1e-12);
        assert!((t.distance(&mid, &leg2).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn center_of_leg_tips_is_hub() {
        let t = TreeSpace::tripod();
        let pts = vec![t.vertex_point(1), t.vertex_point(2), t.vertex_point(3)];
        let c = t.center(&pts).unwrap();
        let hub = t.vertex_point(0);
        assert!(t.distance(&c, &hub).unwrap() < 1e-9);
        let radius = pts
            .iter()
            .map(|p| t.distance(&c, p).unwrap())
            .fold(0.0, f64::max);
        assert!((radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn path_point_walks_across_edges() {
        let t = TreeSpace::tripod();
        let p = t.vertex_point(1);
        let q = t.vertex_point(2);
        let m = t.path_point(&p, &q, 1.0).unwrap(); // the hub
        assert!(t.distance(&m, &t.vertex_point(0)).unwrap() < 1e-9);
        let quarter = t.path_point(&p, &q, 0.5).unwrap();
        assert!((t.distance(&quarter, &p).unwrap() - 0.5).abs() < 1e-9);
        assert!((t.distance(&quarter, &q).unwrap() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn four_point_condition_on_sampled_quadruples() {
        let t = TreeSpace::new(
            6,
            vec![
                (0, 1, 0.7),
                (1, 2, 1.3),
                (1, 3, 0.4),
                (3, 4, 2.0),
                (0, 5, 0.9),
            ],
        )
        .unwrap();
        let mut rng = rng_from(5);
        for _ in 0..10_000 {
            let pts: Vec<Point> = (0..4).map(|_| t.sample(&mut rng)).collect();
            let d = |i: usize, j: usize| t.distance(&pts[i], &pts[j]).unwrap();
            let s1 = d(0, 1) + d(2, 3);
            let s2 = d(0, 2) + d(1, 3);
            let s3 = d(0, 3) + d(1, 2);
            let mut sums = [s1, s2, s3];
            sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // the two largest sums must coincide
            assert!(sums[2] - sums[1] <= 1e-12 * (1.0 + sums[2]));
        }
    }
}
