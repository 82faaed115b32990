use super::interval::Interval;
use crate::error::{Error, Result};
use rand::Rng;

pub type P2 = [f64; 2];

const REL_EPS: f64 = 1e-12;

#[inline]
pub fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

fn extent(points: &[P2]) -> f64 {
    points.iter().fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs())).max(1e-300)
}

fn seg_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let l2 = dot(ab, ab);
    if l2 == 0.0 {
        return norm(sub(p, a));
    }
    let t = (dot(sub(p, a), ab) / l2).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

/// A convex polygon with counter-clockwise vertices in strictly convex
/// position. One vertex is a point, two vertices a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    v: Vec<P2>,
}

/// Andrew's monotone chain; drops duplicates and collinear points.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let scale = extent(&pts);
    let dup = REL_EPS * scale;
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= dup && (a[1] - b[1]).abs() <= dup);
    if pts.len() <= 2 {
        return pts;
    }
    let eps = REL_EPS * scale * scale;
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 1 && pts.len() > 1 {
        // all points coincide up to tolerance except the extremes
        lower.push(pts[pts.len() - 1]);
    }
    lower
}

impl Polygon {
    /// Convex hull of a finite point set.
    pub fn hull(points: &[P2]) -> Result<Polygon> {
        if points.is_empty() {
            return Err(Error::InvalidBody("polygon needs at least one vertex".into()));
        }
        if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidBody("polygon vertices must be finite".into()));
        }
        Ok(Polygon { v: convex_hull(points) })
    }

    /// Validating constructor: every vertex must lie on the boundary of the
    /// hull (convex position). Clockwise input is reoriented.
    pub fn new(vertices: Vec<P2>) -> Result<Polygon> {
        let p = Polygon::hull(&vertices)?;
        let tol = 1e-9 * extent(&vertices);
        if p.v.len() >= 3 {
            for q in &vertices {
                if p.boundary_distance(*q) > tol {
                    return Err(Error::InvalidBody(format!(
                        "vertex ({}, {}) is not in convex position",
                        q[0], q[1]
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn from_box(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        Polygon { v: convex_hull(&[[x0, y0], [x1, y0], [x1, y1], [x0, y1]]) }
    }

    pub fn point(p: P2) -> Polygon {
        Polygon { v: vec![p] }
    }

    /// Regular `m`-gon with circumradius `r` centred at `c`.
    pub fn regular(m: usize, r: f64, c: P2, phase: f64) -> Polygon {
        let pts: Vec<P2> = (0..m)
            .map(|j| {
                let a = phase + 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                [c[0] + r * a.cos(), c[1] + r * a.sin()]
            })
            .collect();
        Polygon { v: convex_hull(&pts) }
    }

    pub fn vertices(&self) -> &[P2] {
        &self.v
    }

    pub fn is_degenerate(&self) -> bool {
        self.v.len() < 3
    }

    pub fn area(&self) -> f64 {
        if self.v.len() < 3 {
            return 0.0;
        }
        let n = self.v.len();
        let o = self.v[0];
        let mut s = 0.0;
        for j in 1..n - 1 {
            s += cross(o, self.v[j], self.v[j + 1]);
        }
        0.5 * s
    }

    /// Boundary length; a segment counts both sides.
    pub fn perimeter(&self) -> f64 {
        let n = self.v.len();
        if n == 1 {
            return 0.0;
        }
        (0..n).map(|j| norm(sub(self.v[(j + 1) % n], self.v[j]))).sum()
    }

    pub fn support(&self, u: P2) -> f64 {
        self.v.iter().map(|p| dot(*p, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.v.iter().map(|p| norm(*p)).fold(0.0, f64::max)
    }

    fn boundary_distance(&self, p: P2) -> f64 {
        let n = self.v.len();
        if n == 1 {
            return norm(sub(p, self.v[0]));
        }
        (0..n).map(|j| seg_distance(p, self.v[j], self.v[(j + 1) % n])).fold(f64::INFINITY, f64::min)
    }

    fn inside(&self, p: P2) -> bool {
        let n = self.v.len();
        n >= 3 && (0..n).all(|j| cross(self.v[j], self.v[(j + 1) % n], p) >= 0.0)
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance(&self, p: P2) -> f64 {
        if self.inside(p) {
            0.0
        } else {
            self.boundary_distance(p)
        }
    }

    pub fn contains(&self, p: P2, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Distance outside, minus the depth inside (zero depth when degenerate).
    pub fn signed_distance(&self, p: P2) -> f64 {
        if !self.inside(p) {
            return self.distance(p);
        }
        let n = self.v.len();
        -(0..n)
            .map(|j| {
                let (a, b) = (self.v[j], self.v[(j + 1) % n]);
                cross(a, b, p) / norm(sub(b, a))
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translate(&self, d: P2) -> Polygon {
        Polygon { v: self.v.iter().map(|p| [p[0] + d[0], p[1] + d[1]]).collect() }
    }

    pub fn scale(&self, l: f64) -> Polygon {
        if l == 0.0 {
            return Polygon { v: vec![[0.0, 0.0]] };
        }
        let pts: Vec<P2> = self.v.iter().map(|p| [p[0] * l, p[1] * l]).collect();
        if l > 0.0 {
            Polygon { v: pts }
        } else {
            Polygon { v: convex_hull(&pts) }
        }
    }

    /// Image under a linear map given by rows `[[a, b], [c, d]]`.
    pub fn linear_map(&self, m: [[f64; 2]; 2]) -> Polygon {
        let pts: Vec<P2> =
            self.v.iter().map(|p| [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]).collect();
        Polygon { v: convex_hull(&pts) }
    }

    fn bottom_index(&self) -> usize {
        let mut best = 0;
        for (j, p) in self.v.iter().enumerate() {
            let b = self.v[best];
            if p[1] < b[1] || (p[1] == b[1] && p[0] < b[0]) {
                best = j;
            }
        }
        best
    }

    /// Minkowski sum by merging the edge sequences in angular order.
    pub fn minkowski(&self, o: &Polygon) -> Polygon {
        if self.v.len() < 3 || o.v.len() < 3 {
            let mut pts = Vec::with_capacity(self.v.len() * o.v.len());
            for p in &self.v {
                for q in &o.v {
                    pts.push([p[0] + q[0], p[1] + q[1]]);
                }
            }
            return Polygon { v: convex_hull(&pts) };
        }
        let (n, m) = (self.v.len(), o.v.len());
        let (i0, j0) = (self.bottom_index(), o.bottom_index());
        let a = |k: usize| self.v[(i0 + k) % n];
        let b = |k: usize| o.v[(j0 + k) % m];
        let mut out = Vec::with_capacity(n + m);
        let (mut i, mut j) = (0usize, 0usize);
        while i < n || j < m {
            let p = a(i);
            let q = b(j);
            out.push([p[0] + q[0], p[1] + q[1]]);
            let ea = sub(a(i + 1), a(i));
            let eb = sub(b(j + 1), b(j));
            let c = if i >= n {
                -1.0
            } else if j >= m {
                1.0
            } else {
                ea[0] * eb[1] - ea[1] * eb[0]
            };
            if c > 0.0 {
                i += 1;
            } else if c < 0.0 {
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        Polygon { v: convex_hull(&out) }
    }

    /// Intersection by Sutherland–Hodgman clipping; `None` when empty.
    pub fn intersect(&self, o: &Polygon) -> Option<Polygon> {
        let (subject, clip) = if o.v.len() >= 3 { (self, o) } else { (o, self) };
        if clip.v.len() < 3 {
            return degenerate_intersection(subject, clip);
        }
        let scale = extent(&clip.v).max(extent(&subject.v));
        let eps = REL_EPS * scale * scale;
        let mut poly: Vec<P2> = subject.v.clone();
        let n = clip.v.len();
        for e in 0..n {
            if poly.is_empty() {
                return None;
            }
            let (c0, c1) = (clip.v[e], clip.v[(e + 1) % n]);
            let side = |p: P2| cross(c0, c1, p);
            let mut next = Vec::with_capacity(poly.len() + 2);
            let k = poly.len();
            for idx in 0..k {
                let cur = poly[idx];
                let prev = poly[(idx + k - 1) % k];
                let (sc, sp) = (side(cur), side(prev));
                let cin = sc >= -eps;
                let pin = sp >= -eps;
                if cin {
                    if !pin {
                        next.push(line_cut(prev, cur, sp, sc));
                    }
                    next.push(cur);
                } else if pin {
                    next.push(line_cut(prev, cur, sp, sc));
                }
            }
            poly = next;
        }
        if poly.is_empty() {
            None
        } else {
            Some(Polygon { v: convex_hull(&poly) })
        }
    }

    pub fn hull_with(&self, o: &Polygon) -> Polygon {
        let mut pts = self.v.clone();
        pts.extend_from_slice(&o.v);
        Polygon { v: convex_hull(&pts) }
    }

    /// Orthogonal projection onto the line spanned by the unit vector `u`.
    pub fn project(&self, u: P2) -> Interval {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.v {
            let x = dot(*p, u);
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Interval { a: lo, b: hi }
    }

    /// Polar body `{y : (x, y) ≤ 1 ∀x ∈ K}`; needs the origin in the interior.
    pub fn polar(&self) -> Result<Polygon> {
        let n = self.v.len();
        if n < 3 {
            return Err(Error::InvalidBody("polar of a degenerate polygon is unbounded".into()));
        }
        let mut pts = Vec::with_capacity(n);
        let tol = REL_EPS * extent(&self.v);
        for j in 0..n {
            let (a, b) = (self.v[j], self.v[(j + 1) % n]);
            let e = sub(b, a);
            let nrm = [e[1], -e[0]];
            let d = dot(nrm, a);
            if d <= tol * norm(nrm) {
                return Err(Error::InvalidBody("origin is not interior; polar is unbounded".into()));
            }
            pts.push([nrm[0] / d, nrm[1] / d]);
        }
        Ok(Polygon { v: convex_hull(&pts) })
    }

    pub fn centroid(&self) -> P2 {
        let n = self.v.len() as f64;
        let s = self.v.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
        [s[0] / n, s[1] / n]
    }

    /// True when the origin is an interior point.
    pub fn origin_interior(&self) -> bool {
        let n = self.v.len();
        let tol = REL_EPS * extent(&self.v);
        n >= 3 && (0..n).all(|j| seg_line_gap(self.v[j], self.v[(j + 1) % n]) > tol)
    }
}

fn seg_line_gap(a: P2, b: P2) -> f64 {
    // signed distance of the origin to the left of a→b, scaled to length
    let e = sub(b, a);
    cross(a, b, [0.0, 0.0]) / norm(e)
}

fn line_cut(p: P2, q: P2, sp: f64, sq: f64) -> P2 {
    let t = sp / (sp - sq);
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

fn degenerate_intersection(a: &Polygon, b: &Polygon) -> Option<Polygon> {
    let scale = extent(&a.v).max(extent(&b.v));
    let tol = 1e-12 * scale;
    if a.v.len() == 1 {
        return b.contains(a.v[0], tol).then(|| a.clone());
    }
    if b.v.len() == 1 {
        return a.contains(b.v[0], tol).then(|| b.clone());
    }
    let (p0, p1) = (a.v[0], a.v[1]);
    let (q0, q1) = (b.v[0], b.v[1]);
    let d = sub(p1, p0);
    let eps = REL_EPS * scale * scale;
    let c0 = cross(p0, p1, q0);
    let c1 = cross(p0, p1, q1);
    if c0.abs() <= eps && c1.abs() <= eps {
        let l2 = dot(d, d);
        let tq0 = dot(sub(q0, p0), d) / l2;
        let tq1 = dot(sub(q1, p0), d) / l2;
        let lo = tq0.min(tq1).max(0.0);
        let hi = tq0.max(tq1).min(1.0);
        if lo > hi + 1e-12 {
            return None;
        }
        let pt = |t: f64| [p0[0] + t * d[0], p0[1] + t * d[1]];
        return Some(Polygon { v: convex_hull(&[pt(lo), pt(hi.max(lo))]) });
    }
    if c0 * c1 > 0.0 {
        return None;
    }
    let x = line_cut(q0, q1, c0, c1);
    a.contains(x, tol).then(|| Polygon::point(x))
}

/// Random convex polygon with `m` vertices (Valtr's algorithm), scaled to
/// lie in the box `[-r, r]²` around the origin before the final shift.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, m: usize, r: f64) -> Polygon {
    let m = m.max(3);
    let split = |rng: &mut R| -> Vec<f64> {
        let mut xs: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        xs.sort_by(f64::total_cmp);
        let (lo, hi) = (xs[0], xs[m - 1]);
        let (mut a, mut b) = (lo, lo);
        let mut out = Vec::with_capacity(m);
        for &x in &xs[1..m - 1] {
            if rng.random::<bool>() {
                out.push(x - a);
                a = x;
            } else {
                out.push(b - x);
                b = x;
            }
        }
        out.push(hi - a);
        out.push(b - hi);
        out
    };
    let xs = split(rng);
    let mut ys = split(rng);
    // random pairing
    for j in (1..ys.len()).rev() {
        let k = rng.random_range(0..=j);
        ys.swap(j, k);
    }
    let mut vecs: Vec<P2> = xs.iter().zip(&ys).map(|(x, y)| [*x, *y]).collect();
    vecs.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    let mut pts = Vec::with_capacity(m);
    let mut cur = [0.0, 0.0];
    for v in &vecs {
        pts.push(cur);
        cur = [cur[0] + v[0], cur[1] + v[1]];
    }
    let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-12);
    let c = [(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0];
    let pts: Vec<P2> = pts.iter().map(|p| [(p[0] - c[0]) * 2.0 * r / span, (p[1] - c[1]) * 2.0 * r / span]).collect();
    Polygon { v: convex_hull(&pts) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hull_drops_interior_and_collinear() {
        let p = Polygon::hull(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn rejects_nonconvex_vertex_lists() {
        assert!(Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.2], [1.0, 2.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_ok());
    }

    #[test]
    fn segment_perimeter_counts_both_sides() {
        let s = Polygon::hull(&[[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(s.perimeter(), 10.0);
        assert_eq!(s.area(), 0.0);
    }

    #[test]
    fn minkowski_triangle_square() {
        let t = Polygon::hull(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let s = Polygon::from_box(0.0, 0.0, 1.0, 1.0);
        let h = t.minkowski(&s);
        // the two horizontal edges merge, leaving a pentagon
        assert_eq!(h.vertices().len(), 5);
        // A(T+S) = A(T) + 2V(T,S) + A(S) with the mixed area from the support
        // function of S integrated against the edge measure of T
        let mixed = 0.5 * t
            .vertices()
            .iter()
            .zip(t.vertices().iter().cycle().skip(1))
            .map(|(a, b)| {
                let e = [b[0] - a[0], b[1] - a[1]];
                let len = e[0].hypot(e[1]);
                s.support([e[1] / len, -e[0] / len]) * len
            })
            .sum::<f64>();
        assert!((mixed - 1.0).abs() < 1e-14);
        assert!((h.area() - (t.area() + 2.0 * mixed + s.area())).abs() < 1e-14);
        assert!((h.area() - 3.5).abs() < 1e-14);
    }

    #[test]
    fn minkowski_matches_pairwise_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (ma, mb) = (3 + rng.random_range(0..8), 3 + rng.random_range(0..8));
            let a = random_convex_polygon(&mut rng, ma, 1.0);
            let b = random_convex_polygon(&mut rng, mb, 2.0);
            let fast = a.minkowski(&b);
            let mut pts = Vec::new();
            for p in a.vertices() {
                for q in b.vertices() {
                    pts.push([p[0] + q[0], p[1] + q[1]]);
                }
            }
            let slow = Polygon::hull(&pts).unwrap();
            assert!((fast.area() - slow.area()).abs() < 1e-12 * slow.area().max(1.0));
            assert!((fast.perimeter() - slow.perimeter()).abs() < 1e-12 * slow.perimeter());
        }
    }

    #[test]
    fn clipping_and_degenerate_intersections() {
        let a = Polygon::from_box(0.0, 0.0, 1.0, 1.0);
        let b = Polygon::from_box(0.5, 0.5, 2.0, 2.0);
        assert!((a.intersect(&b).unwrap().area() - 0.25).abs() < 1e-15);
        let far = Polygon::from_box(3.0, 3.0, 4.0, 4.0);
        assert!(a.intersect(&far).is_none());
        let s1 = Polygon::hull(&[[0.0, 0.0], [2.0, 2.0]]).unwrap();
        let s2 = Polygon::hull(&[[0.0, 2.0], [2.0, 0.0]]).unwrap();
        let x = s1.intersect(&s2).unwrap();
        assert_eq!(x.vertices().len(), 1);
        let seg = Polygon::hull(&[[-1.0, 0.5], [2.0, 0.5]]).unwrap();
        let cut = seg.intersect(&a).unwrap();
        assert!((cut.perimeter() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polar_of_square_is_diamond() {
        let s = Polygon::from_box(-1.0, -1.0, 1.0, 1.0);
        let p = s.polar().unwrap();
        assert!((p.area() - 2.0).abs() < 1e-14);
        assert!(Polygon::from_box(0.0, 0.0, 1.0, 1.0).polar().is_err());
    }

    #[test]
    fn valtr_polygons_are_convex_with_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 3..12 {
            let p = random_convex_polygon(&mut rng, m, 1.0);
            assert!(p.vertices().len() >= 3 && p.vertices().len() <= m);
            assert!(p.area() > 0.0);
            assert!(Polygon::new(p.vertices().to_vec()).is_ok());
        }
    }
}
